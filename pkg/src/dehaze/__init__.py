"""Two-stage image dehazing toolkit.

Front-end: joint min-max stretch followed by per-pixel darkening weighted
by a constant, the inverted stretch, or a matting-refined dark-channel
prior. Backends: CLAHE, ACE, STRESS, plus global histogram equalization
and gamma correction baselines. Blind contrast metrics and a batch CLI
sit on top.
"""
from .ace import AceConfig, ace_exact, ace_fast, ace_rgb, slope_function
from .clahe import (ClaheConfig, clahe_channel, clahe_rgb, gamma_correct,
                    global_hist_eq, histeq_rgb, tile_shape)
from .errors import (DecodeError, DegenerateImageError, DehazeError,
                     ShapeError, SizeGuardError, SolverError)
from .frontend import (FrontendConfig, apply_general_filter, lambda_constant,
                       lambda_inverted, normalize_init, pixel_norm,
                       run_frontend)
from .image import (bilinear_resize, global_minmax, load_image, save_image,
                    synthesize_haze)
from .matting import (PriorConfig, combine_lambda, dark_channel, dcp_lambda,
                      estimate_atmospheric_light, lambda_dcp,
                      matting_laplacian, refine_lambda)
from .metrics import (MetricsReport, evaluate, gradient_magnitude, luminance,
                      metric_e, metric_rbar, metric_sigma, visible_edges)
from .pipeline import (PipelineConfig, PipelineResult, RunManifest,
                       compare_image, composite_panels, config_from_dict,
                       grid_configs, run_pipeline, synth_bench)
from .stress import StressConfig, spray_sample, stress

__version__ = "0.1.0"

__all__ = [
    "AceConfig", "ace_exact", "ace_fast", "ace_rgb", "slope_function",
    "ClaheConfig", "clahe_channel", "clahe_rgb", "gamma_correct",
    "global_hist_eq", "histeq_rgb", "tile_shape",
    "DecodeError", "DegenerateImageError", "DehazeError", "ShapeError",
    "SizeGuardError", "SolverError",
    "FrontendConfig", "apply_general_filter", "lambda_constant",
    "lambda_inverted", "normalize_init", "pixel_norm", "run_frontend",
    "bilinear_resize", "global_minmax", "load_image", "save_image",
    "synthesize_haze",
    "PriorConfig", "combine_lambda", "dark_channel", "dcp_lambda",
    "estimate_atmospheric_light", "lambda_dcp", "matting_laplacian",
    "refine_lambda",
    "MetricsReport", "evaluate", "gradient_magnitude", "luminance",
    "metric_e", "metric_rbar", "metric_sigma", "visible_edges",
    "PipelineConfig", "PipelineResult", "RunManifest", "compare_image",
    "composite_panels", "config_from_dict", "grid_configs", "run_pipeline",
    "synth_bench",
    "StressConfig", "spray_sample", "stress",
    "__version__",
]
