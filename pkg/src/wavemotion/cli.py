"""Command line entry point: ``wavemotion {detect,synth,sweep,score}``.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 degenerate data.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import media
from .descriptor import STANDARD_SPECS, PatchSpec
from .metrics import report, write_report_csv
from .pipeline import (
    ConfigError,
    DetectorConfig,
    apply_settings,
    load_predicted,
    read_config_file,
    run_detect,
    run_sweep,
    score,
    sequence_name,
    write_sweep_csv,
)
from .synthetic import SCENES, SyntheticSpec, write_synthetic

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_DEGENERATE = 0, 2, 3, 4

# flag dest -> config key
_FLAG_KEYS = {
    "frames": "frames", "truth": "truth", "out": "out", "patch": "patch",
    "scales": "scales", "channels": "channels", "filter": "filter", "seed": "seed",
    "workers": "workers", "deinterlace": "deinterlace", "tiled": "tiled",
    "dump_features": "dump_features", "frame_pattern": "frame_pattern",
    "truth_pattern": "truth_pattern",
}


def _detector_flags(p, with_out=True):
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--frames", help="directory of numbered frames")
    p.add_argument("--truth", help="directory of ground-truth masks")
    if with_out:
        p.add_argument("--out", help="output directory")
    p.add_argument("--patch", help="patch extents, e.g. 4x4x4")
    p.add_argument("--scales", type=int, help="decomposition levels")
    p.add_argument("--channels", help="comma list from LLL..HHH,Leader")
    p.add_argument("--filter", help="filter bank name (haar, db2, coif1 or one defined in the config)")
    p.add_argument("--seed", type=int, help="k-means seed")
    p.add_argument("--workers", type=int, help="worker threads (0 = all cores)")
    p.add_argument("--deinterlace", action="store_const", const="true", help="median-filter frames first")
    p.add_argument("--tiled", action="store_const", const="true",
                   help="one descriptor per patch-sized tile (approximate, faster)")
    p.add_argument("--dump-features", action="store_const", const="true",
                   help="write raw descriptor fields next to the masks")
    p.add_argument("--frame-pattern", help="printf pattern of frame files (default in%%06d.pgm)")
    p.add_argument("--truth-pattern", help="printf pattern of truth files (default gt%%06d.pgm)")


def _config_from(args) -> DetectorConfig:
    cfg = DetectorConfig()
    if args.config:
        apply_settings(cfg, read_config_file(args.config))
    flags = {}
    for dest, key in _FLAG_KEYS.items():
        val = getattr(args, dest, None)
        if val is not None:
            flags[key] = str(val)
    apply_settings(cfg, flags)
    cfg.validate()
    for name in ("frames", "truth"):
        path = getattr(cfg, name)
        if path and not os.path.isdir(path):
            raise FileNotFoundError(f"{name} directory not found: {path}")
    return cfg


def cmd_detect(args) -> int:
    cfg = _config_from(args)
    if not cfg.frames or not cfg.out:
        raise ConfigError("detect needs --frames and --out")
    det = run_detect(cfg)
    print(f"wrote {len(det.masks)} masks to {os.path.join(cfg.out, 'masks')}")
    if cfg.truth:
        print(f"metrics: {os.path.join(cfg.out, 'metrics.csv')}")
    if det.degenerate_chunks:
        print("warning: no motion evidence in frames "
              + ", ".join(f"{a}-{b - 1}" for a, b in det.degenerate_chunks)
              + "; masks are all static", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SyntheticSpec(kind=args.kind, height=args.height, width=args.width, frames=args.length,
                         size=args.object_size, speed=args.speed, noise=args.noise, seed=args.seed)
    in_dir, gt_dir = write_synthetic(spec, args.out)
    print(f"frames: {in_dir}\ntruth: {gt_dir}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config_from(args)
    if not cfg.frames or not cfg.truth:
        raise ConfigError("sweep needs --frames and --truth")
    specs = STANDARD_SPECS if not args.specs else [PatchSpec.parse(s) for s in args.specs.split(";")]
    frames = media.load_sequence(cfg.frames, cfg.frame_pattern)
    truth = media.load_masks(cfg.truth, cfg.truth_pattern)
    rows = run_sweep(specs, frames, truth, cfg, repeats=args.repeats)
    out = args.out or "sweep.csv"
    if os.path.dirname(out):
        os.makedirs(os.path.dirname(out), exist_ok=True)
    write_sweep_csv(out, rows)
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def cmd_score(args) -> int:
    masks = load_predicted(args.masks, args.mask_pattern)
    truth = media.load_masks(args.truth, args.truth_pattern)
    if masks.shape != truth.shape:
        raise media.ImageFormatError(f"masks {masks.shape} and truth {truth.shape} differ in shape")
    counts = score(masks, truth)
    if counts.total == 0:
        print("error: every ground-truth pixel is marked ignore", file=sys.stderr)
        return EXIT_DEGENERATE
    rep = report(counts)
    out = args.out or "metrics.csv"
    write_report_csv(out, [(args.name or sequence_name(args.truth), rep)])
    print(f"F-measure {rep.f_measure:.4f}  PWC {rep.pwc:.4f}  -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavemotion", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="segment a frame sequence into motion masks")
    _detector_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("synth", help="write a synthetic sequence with ground truth")
    p.add_argument("--kind", choices=SCENES, default="moving-square")
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--length", type=int, default=32, help="number of frames")
    p.add_argument("--object-size", type=int, default=8)
    p.add_argument("--speed", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="score a list of patch sizes on one sequence")
    _detector_flags(p)
    p.add_argument("--specs", help="';'-separated patch list (default: the twelve standard sizes)")
    p.add_argument("--repeats", type=int, default=1, help="timed runs per spec; the fastest is kept")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("score", help="metrics for precomputed masks")
    p.add_argument("--masks", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out")
    p.add_argument("--name", help="sequence name for the CSV row")
    p.add_argument("--mask-pattern", default="bin%06d.pgm")
    p.add_argument("--truth-pattern", default="gt%06d.pgm")
    p.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, media.ImageFormatError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
