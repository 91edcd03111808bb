"""End-to-end detection: optional deinterlacing, descriptors, clustering, masks, scores."""

from __future__ import annotations

import csv
import dataclasses
import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import media
from .descriptor import (
    DEFAULT_CHANNELS,
    DescriptorOptions,
    PatchSpec,
    check_channels,
    feature_fields,
    write_features,
    zscore,
)
from .leaders import RESTRICTED_KEYS
from .metrics import COLUMNS, ConfusionCounts, accumulate, report, write_report_csv
from .segment import DegenerateInputError, kmeans, label_clusters, temporal_evidence
from .wavelets import DETAIL_KEYS, FilterBank, get_bank

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid detector configuration."""


@dataclass
class DetectorConfig:
    patch: PatchSpec = field(default_factory=lambda: PatchSpec(4, 4, 4, 2))
    filter: str = "haar"
    # name -> (low taps, high taps or None for the mirror filter)
    custom_filters: dict = field(default_factory=dict)
    channels: tuple = DEFAULT_CHANNELS
    normalize: bool = True
    deinterlace: bool = False
    deinterlace_radius: int = 1
    tiled: bool = False
    seed: int = 42
    tol: float = 1e-6
    max_iters: int = 100
    # independent k-means++ seedings; the lowest within-cluster sum of squares is kept
    kmeans_restarts: int = 5
    restricted_leader: bool = False
    strict_leader: bool = False
    # below this temporal high-pass descriptor level a chunk is declared motionless
    motion_floor: float = 0.1
    # frames clustered together; 0 clusters the whole sequence at once
    chunk_frames: int = 0
    memory_mb: float = 256.0
    workers: int = 0
    frames: str | None = None
    truth: str | None = None
    out: str | None = None
    frame_pattern: str = "in%06d.pgm"
    truth_pattern: str = "gt%06d.pgm"
    mask_pattern: str = "bin%06d.pgm"
    dump_features: bool = False

    def bank(self) -> FilterBank:
        if self.filter in self.custom_filters:
            low, high = self.custom_filters[self.filter]
            try:
                if high is None:
                    return FilterBank.from_lowpass(self.filter, low)
                return FilterBank(self.filter, tuple(low), tuple(high))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        try:
            return get_bank(self.filter)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None

    def descriptor_options(self) -> DescriptorOptions:
        return DescriptorOptions(
            bank=self.bank(),
            spec=self.patch,
            channels=self.channels,
            leader_keys=RESTRICTED_KEYS if self.restricted_leader else DETAIL_KEYS,
            strict_leader=self.strict_leader,
            tiled=self.tiled,
        )

    def validate(self) -> "DetectorConfig":
        if self.patch.py < 2 or self.patch.px < 2:
            raise ConfigError("patch extents must be >= 2 on both spatial axes")
        try:
            self.channels = check_channels(self.channels)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        self.bank()
        if self.deinterlace_radius < 1:
            raise ConfigError("deinterlace_radius must be >= 1")
        if self.max_iters < 1 or self.tol < 0 or self.kmeans_restarts < 1:
            raise ConfigError("kmeans needs max_iters >= 1, tol >= 0 and kmeans_restarts >= 1")
        if self.chunk_frames < 0 or self.memory_mb <= 0 or self.workers < 0:
            raise ConfigError("chunk_frames/workers must be >= 0 and memory_mb > 0")
        return self


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _parse_value(name, text):
    text = text.strip()
    try:
        if name == "patch":
            return PatchSpec.parse(text)
        if name == "channels":
            return tuple(c.strip() for c in text.split(",") if c.strip())
        ftype = {f.name: f.type for f in dataclasses.fields(DetectorConfig)}[name]
        if ftype == "bool":
            return _BOOL[text.lower()]
        if ftype == "int":
            return int(text)
        if ftype == "float":
            return float(text)
        return text
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value {text!r} for {name}: {exc}") from None


def apply_settings(cfg: DetectorConfig, settings: dict) -> DetectorConfig:
    """Apply ``key -> text`` settings (config file lines or CLI flags) to ``cfg``.

    ``scales`` overrides the patch depth; ``filter.NAME.low`` / ``filter.NAME.high``
    register a custom bank.
    """
    names = {f.name for f in dataclasses.fields(DetectorConfig)} - {"custom_filters"}
    scales = None
    for key, text in settings.items():
        key = key.strip().replace("-", "_")
        if key.startswith("filter."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in ("low", "high"):
                raise ConfigError(f"custom filters are given as filter.NAME.low / filter.NAME.high, got {key}")
            try:
                taps = [float(v) for v in text.replace(",", " ").split()]
            except ValueError:
                raise ConfigError(f"bad taps for {key}: {text!r}") from None
            low, high = cfg.custom_filters.get(parts[1], (None, None))
            cfg.custom_filters[parts[1]] = (taps, high) if parts[2] == "low" else (low, taps)
        elif key == "scales":
            try:
                scales = int(text)
            except ValueError:
                raise ConfigError(f"bad value {text!r} for scales") from None
        elif key in names:
            setattr(cfg, key, _parse_value(key, text))
        else:
            raise ConfigError(f"unknown config key {key!r}")
    for name, (low, _) in cfg.custom_filters.items():
        if low is None:
            raise ConfigError(f"custom filter {name!r} has no low-pass taps")
    if scales is not None:
        p = cfg.patch
        try:
            cfg.patch = PatchSpec(p.py, p.px, p.pt, scales)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return cfg


def read_config_file(path) -> dict:
    """Flat ``key = value`` text; ``#`` starts a comment."""
    settings = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        settings[k.strip()] = v.strip()
    return settings


@dataclass
class Detection:
    masks: np.ndarray  # (T, H, W) bool, True = motion
    features: np.ndarray  # raw descriptors (T, H, W, D)
    degenerate_chunks: list = field(default_factory=list)
    seconds: float = 0.0
    # part of ``seconds`` spent before clustering (preprocessing and descriptors)
    feature_seconds: float = 0.0


def _chunks(n, size):
    size = n if size <= 0 else size
    return [(a, min(a + size, n)) for a in range(0, n, size)]


def detect(frames, cfg: DetectorConfig = None) -> Detection:
    """Segment a ``(T, H, W)`` sequence into motion / zero-motion masks."""
    cfg = (cfg or DetectorConfig()).validate()
    start = time.perf_counter()
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 3 or frames.shape[0] < 1:
        raise ValueError("frames must be a non-empty (T, H, W) array")
    if cfg.deinterlace:
        frames = media.deinterlace(frames, cfg.deinterlace_radius)
    feats = feature_fields(frames, cfg.descriptor_options(), workers=cfg.workers or None,
                           memory_mb=cfg.memory_mb)
    feature_seconds = time.perf_counter() - start
    masks = np.zeros(frames.shape, dtype=bool)
    degenerate = []
    for a, b in _chunks(len(frames), cfg.chunk_frames):
        chunk = feats[a:b]
        evidence = temporal_evidence(chunk, cfg.channels)
        if evidence <= cfg.motion_floor:
            log.warning("frames %d-%d: temporal evidence %.4g below floor %.4g, marking all static",
                        a, b - 1, evidence, cfg.motion_floor)
            degenerate.append((a, b))
            continue
        pts = zscore(chunk) if cfg.normalize else chunk
        try:
            km = kmeans(pts.reshape(-1, pts.shape[-1]), 2, cfg.seed, cfg.max_iters, cfg.tol,
                        cfg.kmeans_restarts)
        except DegenerateInputError as exc:
            log.warning("frames %d-%d: %s, marking all static", a, b - 1, exc)
            degenerate.append((a, b))
            continue
        masks[a:b] = label_clusters(chunk, km.labels, 2, cfg.channels)
    return Detection(masks, feats, degenerate, time.perf_counter() - start, feature_seconds)


def write_masks(directory, masks, pattern="bin%06d.pgm") -> list[str]:
    os.makedirs(directory, exist_ok=True)
    paths = []
    for t, m in enumerate(masks):
        path = os.path.join(directory, pattern % t)
        media.write_pgm(path, np.where(m, 255, 0).astype(np.uint8))
        paths.append(path)
    return paths


def load_predicted(directory, pattern="bin%06d.pgm") -> np.ndarray:
    codes = media.load_masks(directory, pattern)
    return codes == media.MOTION


def score(masks, truth) -> ConfusionCounts:
    masks = np.asarray(masks)
    truth = np.asarray(truth)
    if masks.shape[0] != truth.shape[0]:
        raise ValueError(f"{masks.shape[0]} masks but {truth.shape[0]} ground-truth frames")
    acc = ConfusionCounts()
    for m, g in zip(masks, truth):
        acc = accumulate(m, g, acc)
    return acc


def sequence_name(frames_dir) -> str:
    """Directory name of a sequence; benchmark layouts ``<seq>/input`` or ``<seq>/groundtruth`` give ``<seq>``."""
    path = os.path.normpath(os.path.abspath(frames_dir))
    if os.path.basename(path) in ("input", "groundtruth"):
        path = os.path.dirname(path)
    return os.path.basename(path)


def run_detect(cfg: DetectorConfig) -> Detection:
    """Read frames from ``cfg.frames``, write masks (and metrics, features) under ``cfg.out``."""
    cfg.validate()
    if not cfg.frames or not cfg.out:
        raise ConfigError("detect needs frames and out paths")
    frames = media.load_sequence(cfg.frames, cfg.frame_pattern)
    truth = media.load_masks(cfg.truth, cfg.truth_pattern) if cfg.truth else None
    if truth is not None and truth.shape != frames.shape:
        raise media.ImageFormatError(
            f"ground truth {cfg.truth} has shape {truth.shape}, frames have {frames.shape}")
    det = detect(frames, cfg)
    write_masks(os.path.join(cfg.out, "masks"), det.masks, cfg.mask_pattern)
    if cfg.dump_features:
        fdir = os.path.join(cfg.out, "features")
        os.makedirs(fdir, exist_ok=True)
        for t, f in enumerate(det.features):
            write_features(os.path.join(fdir, "feat%06d.bin" % t), f)
    if truth is not None:
        name = sequence_name(cfg.frames)
        write_report_csv(os.path.join(cfg.out, "metrics.csv"), [(name, report(score(det.masks, truth)))])
    return det


SWEEP_COLUMNS = ("patch", "scales") + COLUMNS + ("seconds", "feature_seconds")


def run_sweep(specs, frames, truth, base: DetectorConfig = None, repeats: int = 1):
    """Detect with each patch spec; rows of ``(spec, MetricReport, seconds, feature_seconds)``.

    Both timings are the minimum over ``repeats`` runs.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("sweep needs at least one patch spec")
    base = base or DetectorConfig()
    rows = []
    for spec in specs:
        cfg = dataclasses.replace(base, patch=spec)
        runs = [detect(frames, cfg) for _ in range(max(1, repeats))]
        rep = report(score(runs[0].masks, truth))
        rows.append((spec, rep, min(r.seconds for r in runs), min(r.feature_seconds for r in runs)))
    return rows


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for spec, rep, secs, feat_secs in rows:
            w.writerow([spec.label, spec.scales] + [f"{v:.6f}" for v in rep.as_row()]
                       + [f"{secs:.4f}", f"{feat_secs:.4f}"])
