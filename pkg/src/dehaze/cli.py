"""Command line interface.

Every behavior here is a thin wrapper over pipeline.py library calls.
Exit codes: 0 all inputs processed, 1 at least one per-image failure
(partial results are kept), 2 usage error (bad flags or config file).
"""
from __future__ import annotations

import argparse
import glob
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .image import load_image
from .pipeline import (PipelineConfig, RunManifest, compare_image,
                       config_from_dict, run_and_save, synth_bench)

IMAGE_EXTS = (".png", ".jpg", ".jpeg", ".ppm")


def _lambda_spec(text: str) -> tuple[str, float | None]:
    if text == "inverted" or text == "dcp":
        return (text, None)
    if text == "constant":
        return ("constant", None)
    if text.startswith("constant="):
        try:
            return ("constant", float(text.split("=", 1)[1]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(
        f"expected constant[=<c>], inverted, or dcp, got {text!r}")


def _tile_spec(text: str) -> tuple[str, int]:
    if text.startswith("frac"):
        rest = text[4:] or "8"
        if rest.isdigit() and int(rest) >= 1:
            return ("frac", int(rest))
    if text.startswith("fixed="):
        rest = text.split("=", 1)[1]
        if rest.isdigit() and int(rest) >= 1:
            return ("fixed", int(rest))
    raise argparse.ArgumentTypeError(
        f"expected frac<denom> or fixed=<side>, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dehaze",
        description="Two-stage dehazing: global stretch-and-darken front-end "
                    "followed by local contrast enhancement.")
    p.add_argument("inputs", nargs="*",
                   help="image files or directories (png/jpg/jpeg/ppm)")
    p.add_argument("--lce", choices=("ace", "clahe", "stress", "histeq", "gamma"),
                   help="local contrast backend (default clahe)")
    p.add_argument("--lambda", dest="lambda_spec", type=_lambda_spec,
                   metavar="{constant=<c>|inverted|dcp}",
                   help="subtraction weight field (default constant=0.35)")
    p.add_argument("--alpha", type=float, help="stretch gain (default 1.0)")
    p.add_argument("--beta", type=float, help="stretch offset (default 0.0)")
    p.add_argument("--clip-limit", type=float,
                   help="CLAHE histogram clip fraction (default 0.008)")
    p.add_argument("--tile", type=_tile_spec, metavar="{frac8|fixed=<n>}",
                   help="CLAHE tile geometry (default frac8)")
    p.add_argument("--ace-alpha", type=float,
                   help="ACE slope strength (default 5)")
    p.add_argument("--ace-levels", type=int,
                   help="ACE interpolation levels (default 8)")
    p.add_argument("--stress-ns", type=int,
                   help="STRESS samples per spray (default 5)")
    p.add_argument("--stress-ni", type=int,
                   help="STRESS iterations (default 150)")
    p.add_argument("--stress-radius", type=int,
                   help="STRESS spray radius (default max(W, H))")
    p.add_argument("--gamma", type=float,
                   help="exponent for the gamma backend (default 0.35)")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")
    p.add_argument("--metrics", action="store_true",
                   help="also print each run's metrics report to stdout")
    p.add_argument("--compare", action="store_true",
                   help="run the six-config grid plus a composite per input")
    p.add_argument("--synth-bench", action="store_true",
                   help="treat inputs as clean images: synthesize haze at "
                        "t=0.3/0.5/0.7 and run the grid on each")
    p.add_argument("--config", metavar="FILE",
                   help="JSON file of pipeline settings (flags win)")
    p.add_argument("--out", metavar="DIR",
                   help="output directory (default ./dehazed)")
    p.add_argument("--jobs", type=int, metavar="N",
                   help="worker threads (default $DEHAZE_JOBS or 1)")
    return p


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, overlaid by --config file values, overlaid by flags."""
    if args.config is not None:
        with open(args.config) as fh:
            cfg = config_from_dict(json.load(fh))
    else:
        cfg = PipelineConfig()

    fe = cfg.frontend
    if args.lambda_spec is not None:
        mode, c = args.lambda_spec
        fe = replace(fe, lambda_mode=mode,
                     constant_c=c if c is not None else fe.constant_c)
    if args.alpha is not None:
        fe = replace(fe, alpha=args.alpha)
    if args.beta is not None:
        fe = replace(fe, beta=args.beta)

    cl = cfg.clahe
    if args.clip_limit is not None:
        cl = replace(cl, clip_limit=args.clip_limit)
    if args.tile is not None:
        mode, size = args.tile
        cl = replace(cl, tile_mode=mode,
                     **({"tile_denominator": size} if mode == "frac"
                        else {"tile_side": size}))

    ac = cfg.ace
    if args.ace_alpha is not None:
        ac = replace(ac, slope_alpha=args.ace_alpha)
    if args.ace_levels is not None:
        ac = replace(ac, levels=args.ace_levels)

    st = cfg.stress
    if args.stress_ns is not None:
        st = replace(st, n_samples=args.stress_ns)
    if args.stress_ni is not None:
        st = replace(st, n_iterations=args.stress_ni)
    if args.stress_radius is not None:
        st = replace(st, radius=args.stress_radius)

    return PipelineConfig(
        frontend=fe, lce=args.lce if args.lce is not None else cfg.lce,
        clahe=cl, ace=ac, stress=st,
        gamma=args.gamma if args.gamma is not None else cfg.gamma,
        prior=cfg.prior,
        seed=args.seed if args.seed is not None else cfg.seed)


def _expand_inputs(paths: list[str]) -> tuple[list[str], dict]:
    files: list[str] = []
    errors: dict = {}
    for path in paths:
        if os.path.isdir(path):
            found = sorted(
                f for f in glob.glob(os.path.join(path, "*"))
                if f.lower().endswith(IMAGE_EXTS) and os.path.isfile(f))
            files.extend(found)
        elif os.path.isfile(path):
            files.append(path)
        else:
            errors[path] = f"FileNotFoundError: no such file or directory: {path}"
    return files, errors


def _unique_stem(path: str, taken: dict) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    if taken.get(stem, path) == path:
        taken[stem] = path
        return stem
    k = 2
    while f"{stem}-{k}" in taken:
        k += 1
    taken[f"{stem}-{k}"] = path
    return f"{stem}-{k}"


def _merge(into: RunManifest, part: RunManifest):
    into.inputs.extend(part.inputs)
    into.outputs.update(part.outputs)
    into.reports.extend(part.reports)
    into.errors.update(part.errors)
    if not into.configs:
        into.configs = part.configs


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.compare and args.synth_bench:
        print("dehaze: --compare and --synth-bench are mutually exclusive",
              file=sys.stderr)
        return 2
    if not args.inputs:
        print("dehaze: no input files given", file=sys.stderr)
        return 2
    try:
        cfg = config_from_args(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"dehaze: bad configuration: {exc}", file=sys.stderr)
        return 2

    outdir = args.out if args.out is not None else "dehazed"
    os.makedirs(outdir, exist_ok=True)
    jobs = args.jobs if args.jobs is not None else \
        int(os.environ.get("DEHAZE_JOBS", "1") or "1")
    jobs = max(1, jobs)

    files, missing = _expand_inputs(args.inputs)
    manifest = RunManifest()
    manifest.errors.update(missing)
    manifest.inputs.extend(missing)  # keep failed inputs on the record
    taken: dict = {}

    if args.compare or args.synth_bench:
        mode = compare_image if args.compare else synth_bench

        def task(path):
            return mode(path, outdir, cfg)
    else:
        manifest.configs = [cfg.to_dict()]

        def task(path):
            part = RunManifest(inputs=[path])
            key = f"{taken[path]}.{cfg.config_id()}"
            out_path, report, _ = run_and_save(load_image(path), cfg,
                                               taken[path], outdir, path)
            part.outputs[key] = out_path
            part.reports.append(report.to_dict())
            return part

        # resolve stems up front; task threads only read the mapping
        seen: dict = {}
        for path in files:
            taken[path] = _unique_stem(path, seen)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(task, path): path for path in files}
        for fut, path in futures.items():
            try:
                _merge(manifest, fut.result())
            except Exception as exc:
                manifest.errors[path] = f"{type(exc).__name__}: {exc}"
                if path not in manifest.inputs:
                    manifest.inputs.append(path)

    manifest.write(os.path.join(outdir, "manifest.json"))
    if args.metrics:
        for report in sorted(manifest.reports,
                             key=lambda r: (r["image"], r["config"])):
            print(json.dumps(report))
    return 1 if manifest.errors else 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
