"""Whole-pipeline plumbing: one config object, one runner, the comparison
grid, and the synthetic haze benchmark.

A pipeline is front-end (stretch + weighted darkening) followed by one
local contrast enhancement backend. Every CLI behavior is a thin wrapper
over the functions here.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .ace import AceConfig, ace_rgb
from .clahe import ClaheConfig, clahe_rgb, gamma_correct, histeq_rgb
from .frontend import FrontendConfig, normalize_init, run_frontend
from .image import load_image, save_image, synthesize_haze
from .matting import PriorConfig
from .metrics import MetricsReport, evaluate
from .stress import StressConfig, stress

LCE_CHOICES = ("ace", "clahe", "stress", "histeq", "gamma")

BENCH_TRANSMISSIONS = (0.3, 0.5, 0.7)
BENCH_AIRLIGHT = (0.9, 0.9, 0.9)


@dataclass
class PipelineConfig:
    """Front-end settings, LCE choice, and per-backend parameters.

    seed is the single randomness knob: run_pipeline copies it into the
    STRESS config. prior is only meaningful (and only kept) when the
    front-end weight mode is "dcp".
    """
    frontend: FrontendConfig = field(default_factory=FrontendConfig)
    lce: str = "clahe"
    clahe: ClaheConfig = field(default_factory=ClaheConfig)
    ace: AceConfig = field(default_factory=AceConfig)
    stress: StressConfig = field(default_factory=StressConfig)
    gamma: float = 0.35
    prior: PriorConfig | None = None
    seed: int = 0

    def __post_init__(self):
        if self.lce not in LCE_CHOICES:
            raise ValueError(f"lce must be one of {LCE_CHOICES}, got {self.lce!r}")
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.frontend.lambda_mode == "dcp":
            if self.prior is None:
                self.prior = PriorConfig()
        else:
            self.prior = None

    def config_id(self) -> str:
        if self.frontend.lambda_mode == "constant":
            lam = f"lam{self.frontend.constant_c:g}"
        elif self.frontend.lambda_mode == "inverted":
            lam = "laminv"
        else:
            lam = "lamdcp"
        lce = f"gamma{self.gamma:g}" if self.lce == "gamma" else self.lce
        return f"{lam}-{lce}"

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["id"] = self.config_id()
        return d


_SUBCONFIGS = {"frontend": FrontendConfig, "clahe": ClaheConfig,
               "ace": AceConfig, "stress": StressConfig, "prior": PriorConfig}


def _build_sub(cls, data, name: str):
    if not isinstance(data, dict):
        raise ValueError(f"config section {name!r} must be an object")
    known = {f.name for f in dataclasses.fields(cls)}
    bad = set(data) - known
    if bad:
        raise ValueError(f"unknown keys in config section {name!r}: {sorted(bad)}")
    return cls(**data)


def config_from_dict(data: dict) -> PipelineConfig:
    """PipelineConfig from a JSON-shaped dict; unknown keys are errors."""
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {f.name for f in dataclasses.fields(PipelineConfig)} | {"id"}
    bad = set(data) - known
    if bad:
        raise ValueError(f"unknown config keys: {sorted(bad)}")
    kwargs = {}
    for key, value in data.items():
        if key == "id":
            continue
        if key in _SUBCONFIGS and value is not None:
            kwargs[key] = _build_sub(_SUBCONFIGS[key], value, key)
        else:
            kwargs[key] = value
    return PipelineConfig(**kwargs)


@dataclass
class PipelineResult:
    """Stage outputs of one run: the stretch, the darkened image, the
    final enhanced image."""
    stretched: np.ndarray
    darkened: np.ndarray
    output: np.ndarray


def run_pipeline(img: np.ndarray, cfg: PipelineConfig) -> PipelineResult:
    """Run front-end plus the configured LCE backend on one image."""
    stretched = normalize_init(img, cfg.frontend.alpha, cfg.frontend.beta)
    darkened = run_frontend(img, cfg.frontend, cfg.prior)
    if cfg.lce == "clahe":
        out = clahe_rgb(darkened, cfg.clahe)
    elif cfg.lce == "ace":
        out = ace_rgb(darkened, cfg.ace)
    elif cfg.lce == "stress":
        out = stress(darkened, replace(cfg.stress, seed=cfg.seed))
    elif cfg.lce == "histeq":
        out = histeq_rgb(darkened)
    else:
        out = gamma_correct(darkened, cfg.gamma)
    return PipelineResult(stretched, darkened, out)


def grid_configs(base: PipelineConfig | None = None) -> list[PipelineConfig]:
    """The six comparison configs: {constant 0.35, inverted} x {ace,
    clahe, stress}.

    Constant-weight configs use fractional CLAHE tiles; inverted-weight
    configs use the fixed 800-pixel kernel. Backend parameters and the
    seed are inherited from base.
    """
    if base is None:
        base = PipelineConfig()
    out = []
    for mode, constant_c, tile_mode in (("constant", 0.35, "frac"),
                                        ("inverted", base.frontend.constant_c, "fixed")):
        fe = replace(base.frontend, lambda_mode=mode, constant_c=constant_c)
        tiles = replace(base.clahe, tile_mode=tile_mode)
        for lce in ("ace", "clahe", "stress"):
            out.append(replace(base, frontend=fe, lce=lce, clahe=tiles,
                               prior=None))
    return out


def composite_panels(panels: list[np.ndarray]) -> np.ndarray:
    """Panels side by side for landscape inputs, two rows of four for
    portrait (black filler in unused cells)."""
    h, w = panels[0].shape[:2]
    if w >= h:
        return np.concatenate(panels, axis=1)
    cells = panels + [np.zeros_like(panels[0])] * (8 - len(panels))
    rows = [np.concatenate(cells[:4], axis=1), np.concatenate(cells[4:8], axis=1)]
    return np.concatenate(rows, axis=0)


@dataclass
class RunManifest:
    """Index of everything a batch run produced."""
    inputs: list[str] = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    configs: list[dict] = field(default_factory=list)
    reports: list[dict] = field(default_factory=list)
    errors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"inputs": self.inputs,
                "outputs": dict(sorted(self.outputs.items())),
                "configs": self.configs,
                "reports": self.reports,
                "errors": dict(sorted(self.errors.items()))}

    def write(self, path: str):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def run_and_save(img: np.ndarray, cfg: PipelineConfig, stem: str,
                 outdir: str, image_id: str) -> tuple[str, MetricsReport, np.ndarray]:
    """One (image, config) run: write the PNG, write the report JSON.

    Returns (output path, report, output array). Metrics compare the
    result against the unprocessed input.
    """
    cid = cfg.config_id()
    result = run_pipeline(img, cfg)
    out_path = os.path.join(outdir, f"{stem}.{cid}.png")
    save_image(result.output, out_path)
    report = evaluate(img, result.output, image_id=image_id, config_id=cid)
    with open(os.path.join(outdir, f"{stem}.{cid}.json"), "w") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    return out_path, report, result.output


def compare_image(path: str, outdir: str,
                  base: PipelineConfig | None = None) -> RunManifest:
    """Run the six-config grid on one image and write a seven-panel
    composite (input plus the six outputs, in grid order)."""
    img = load_image(path)
    stem = os.path.splitext(os.path.basename(path))[0]
    manifest = RunManifest(inputs=[path])
    panels = [img]
    for cfg in grid_configs(base):
        cid = cfg.config_id()
        key = f"{stem}.{cid}"
        try:
            out_path, report, out_img = run_and_save(img, cfg, stem, outdir, path)
        except Exception as exc:  # keep going; the manifest records it
            manifest.errors[key] = f"{type(exc).__name__}: {exc}"
            panels.append(np.zeros_like(img))
            continue
        manifest.outputs[key] = out_path
        manifest.reports.append(report.to_dict())
        manifest.configs.append(cfg.to_dict())
        panels.append(out_img)
    comp_path = os.path.join(outdir, f"{stem}.compare.png")
    save_image(composite_panels(panels), comp_path)
    manifest.outputs[f"{stem}.compare"] = comp_path
    return manifest


def synth_bench(path: str, outdir: str,
                base: PipelineConfig | None = None) -> RunManifest:
    """Haze a clean image at three transmission levels and run the grid.

    Each level t in {0.3, 0.5, 0.7} blends toward airlight (0.9, 0.9, 0.9);
    metrics compare every output against its hazy input, giving 18 rows.
    """
    clean = load_image(path)
    stem = os.path.splitext(os.path.basename(path))[0]
    h, w = clean.shape[:2]
    manifest = RunManifest(inputs=[path])
    manifest.configs = [cfg.to_dict() for cfg in grid_configs(base)]
    for t in BENCH_TRANSMISSIONS:
        hazy = synthesize_haze(clean, np.full((h, w), t), BENCH_AIRLIGHT)
        hazy_stem = f"{stem}.hazy-t{t:g}"
        hazy_path = os.path.join(outdir, f"{hazy_stem}.png")
        save_image(hazy, hazy_path)
        manifest.outputs[hazy_stem] = hazy_path
        for cfg in grid_configs(base):
            key = f"{hazy_stem}.{cfg.config_id()}"
            try:
                out_path, report, _ = run_and_save(hazy, cfg, hazy_stem,
                                                   outdir, hazy_stem)
            except Exception as exc:
                manifest.errors[key] = f"{type(exc).__name__}: {exc}"
                continue
            manifest.outputs[key] = out_path
            manifest.reports.append(report.to_dict())
    return manifest
