"""Per-pixel multiscale motion descriptors.

Each pixel ``p`` of frame ``t`` gets a cube of neighbouring samples centred on
``(y, x, t)``. The cube is decomposed into a wavelet pyramid and, for every
requested channel, the per-scale Euclidean norms of that channel are summed
and divided by ``1 + 2 + ... + S``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .leaders import leaders
from .wavelets import DETAIL_KEYS, HAAR, SUBBAND_KEYS, FilterBank, decompose, max_levels

LEADER = "Leader"
CHANNEL_NAMES = SUBBAND_KEYS + (LEADER,)
DEFAULT_CHANNELS = ("LLH", "LHL", "HLH", LEADER)
# Subbands that are high-pass along time.
TEMPORAL_KEYS = tuple(k for k in SUBBAND_KEYS if k[2] == "H")


def default_scales(py, px, pt) -> int:
    """Levels used for a patch: halve until the smallest extent reaches one."""
    return max(1, int(math.floor(math.log2(min(py, px, pt)))))


@dataclass(frozen=True)
class PatchSpec:
    py: int = 4
    px: int = 4
    pt: int = 4
    scales: int | None = None

    def __post_init__(self):
        if min(self.py, self.px, self.pt) < 1:
            raise ValueError("patch extents must be positive")
        if self.scales is None:
            object.__setattr__(self, "scales", default_scales(self.py, self.px, self.pt))
        if not 1 <= self.scales <= max_levels(self.shape):
            raise ValueError(f"patch {self.label} cannot be decomposed into {self.scales} levels")

    @property
    def shape(self):
        return (self.py, self.px, self.pt)

    @property
    def volume(self):
        return self.py * self.px * self.pt

    @property
    def label(self):
        return f"{self.py}x{self.px}x{self.pt}"

    @classmethod
    def parse(cls, text, scales=None):
        """``"4x4x4"`` (or ``"4,4,4"``) to a spec."""
        parts = [int(v) for v in text.replace(",", "x").lower().split("x")]
        if len(parts) != 3:
            raise ValueError(f"patch must have three extents, got {text!r}")
        return cls(*parts, scales=scales)


# Patch sizes and decomposition depths used for the patch-size study.
STANDARD_SPECS = tuple(PatchSpec(*shape, scales=s) for shape, s in [
    ((2, 2, 2), 1), ((2, 2, 4), 1), ((2, 2, 6), 1), ((2, 2, 8), 1),
    ((4, 4, 2), 1), ((4, 4, 4), 2), ((4, 4, 6), 2), ((4, 4, 8), 2),
    ((8, 8, 2), 1), ((8, 8, 4), 2), ((8, 8, 6), 2), ((8, 8, 8), 3),
])


def check_channels(channels) -> tuple[str, ...]:
    channels = tuple(channels)
    if not channels:
        raise ValueError("channel set is empty")
    if len(set(channels)) != len(channels):
        raise ValueError(f"duplicate channels in {channels}")
    bad = [c for c in channels if c not in CHANNEL_NAMES]
    if bad:
        raise ValueError(f"unknown channels {bad}; choose from {CHANNEL_NAMES}")
    return channels


def _offsets(p):
    # even extents lean half a cell toward negative indices
    return np.arange(p) - p // 2


def _reflect(idx, n):
    """Half-sample symmetric reflection of arbitrary indices into [0, n)."""
    m = np.mod(idx, 2 * n)
    return np.where(m >= n, 2 * n - 1 - m, m)


def extract_patch(frames, center, spec: PatchSpec) -> np.ndarray:
    """The ``(py, px, pt)`` cube around ``center = (y, x, t)`` of a ``(T, H, W)`` sequence."""
    frames = np.asarray(frames, dtype=float)
    T, H, W = frames.shape
    y, x, t = center
    if not (0 <= y < H and 0 <= x < W and 0 <= t < T):
        raise IndexError(f"center {center} outside sequence of shape (H={H}, W={W}, T={T})")
    iy = _reflect(y + _offsets(spec.py), H)
    ix = _reflect(x + _offsets(spec.px), W)
    it = _reflect(t + _offsets(spec.pt), T)
    return frames[np.ix_(it, iy, ix)].transpose(1, 2, 0)


def _scale_norms(vol):
    flat = vol.reshape(vol.shape[:-3] + (-1,))
    return np.sqrt(np.sum(flat * flat, axis=-1))


def _descriptors(patches, bank, scales, channels, leader_keys, strict_leader):
    pyr = decompose(patches, bank, scales)
    lead = leaders(pyr, leader_keys, strict_leader) if LEADER in channels else None
    denom = scales * (scales + 1) / 2
    out = np.empty(patches.shape[:-3] + (len(channels),))
    for j, name in enumerate(channels):
        acc = 0.0
        for s in range(scales):
            vol = lead[s] if name == LEADER else pyr.levels[s][name]
            acc = acc + _scale_norms(vol)
        out[..., j] = acc / denom
    return out


def pixel_descriptor(patch, bank: FilterBank = HAAR, spec: PatchSpec = PatchSpec(),
                     channels=DEFAULT_CHANNELS, leader_keys=DETAIL_KEYS,
                     strict_leader=False) -> np.ndarray:
    """Descriptor vector of one patch, ordered as ``channels``."""
    patch = np.asarray(patch, dtype=float)
    if patch.shape != spec.shape:
        raise ValueError(f"patch shape {patch.shape} does not match spec {spec.shape}")
    channels = check_channels(channels)
    return _descriptors(patch, bank, spec.scales, channels, tuple(leader_keys), strict_leader)


@dataclass(frozen=True)
class DescriptorOptions:
    bank: FilterBank = HAAR
    spec: PatchSpec = PatchSpec()
    channels: tuple = DEFAULT_CHANNELS
    leader_keys: tuple = DETAIL_KEYS
    strict_leader: bool = False
    tiled: bool = False


def _padded_volume(frames, spec):
    """(H, W, T) volume reflected so that sliding window ``i`` is the cube centred on ``i``."""
    T, H, W = frames.shape
    iy = _reflect(np.arange(-(spec.py // 2), H + spec.py - spec.py // 2 - 1), H)
    ix = _reflect(np.arange(-(spec.px // 2), W + spec.px - spec.px // 2 - 1), W)
    it = _reflect(np.arange(-(spec.pt // 2), T + spec.pt - spec.pt // 2 - 1), T)
    return frames[np.ix_(it, iy, ix)].transpose(1, 2, 0)


def _frame_block(padded, t0, t1, opts):
    spec = opts.spec
    win = sliding_window_view(padded, spec.shape)[:, :, t0:t1]
    f = _descriptors(win, opts.bank, spec.scales, opts.channels, opts.leader_keys, opts.strict_leader)
    return f.transpose(2, 0, 1, 3)


def _tiled_fields(frames, opts, t_index):
    spec = opts.spec
    T, H, W = frames.shape
    ny, nx = -(-H // spec.py), -(-W // spec.px)
    iy = _reflect((np.arange(ny)[:, None] * spec.py + np.arange(spec.py)).ravel(), H)
    ix = _reflect((np.arange(nx)[:, None] * spec.px + np.arange(spec.px)).ravel(), W)
    out = np.empty((len(t_index), H, W, len(opts.channels)))
    cache = {}
    for n, t in enumerate(t_index):
        k = t // spec.pt
        if k not in cache:
            it = _reflect(k * spec.pt + np.arange(spec.pt), T)
            cube = frames[np.ix_(it, iy, ix)]  # (pt, ny*py, nx*px)
            cube = cube.reshape(spec.pt, ny, spec.py, nx, spec.px).transpose(1, 3, 2, 4, 0)
            f = _descriptors(cube, opts.bank, spec.scales, opts.channels,
                             opts.leader_keys, opts.strict_leader)
            f = np.repeat(np.repeat(f, spec.py, axis=0), spec.px, axis=1)
            cache = {k: f[:H, :W]}
        out[n] = cache[k]
    return out


def feature_fields(frames, opts: DescriptorOptions = DescriptorOptions(), t_index=None,
                   workers: int | None = None, memory_mb: float = 256.0) -> np.ndarray:
    """Descriptor fields ``(len(t_index), H, W, D)`` for frames of a ``(T, H, W)`` sequence.

    Frames are processed in blocks sized to ``memory_mb``. Blocks are
    independent, so the result does not depend on ``workers``.
    """
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 3:
        raise ValueError("frames must be a (T, H, W) array")
    T, H, W = frames.shape
    t_index = np.arange(T) if t_index is None else np.asarray(t_index)
    if t_index.size and (t_index.min() < 0 or t_index.max() >= T):
        raise IndexError("frame index out of range")
    check_channels(opts.channels)
    if opts.tiled:
        return _tiled_fields(frames, opts, t_index)
    padded = _padded_volume(frames, opts.spec)
    # working set per frame: windows plus a handful of transform temporaries
    per_frame = H * W * opts.spec.volume * 8 * 6
    block = max(1, int(memory_mb * 2**20 // per_frame))
    out = np.empty((len(t_index), H, W, len(opts.channels)))
    # contiguous runs of requested frames, cut into blocks
    jobs = []
    start = 0
    while start < len(t_index):
        stop = start + 1
        while stop < len(t_index) and stop - start < block and t_index[stop] == t_index[stop - 1] + 1:
            stop += 1
        jobs.append((start, stop))
        start = stop

    def run(job):
        a, b = job
        out[a:b] = _frame_block(padded, int(t_index[a]), int(t_index[b - 1]) + 1, opts)

    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        for job in jobs:
            run(job)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, jobs))
    return out


def feature_field(frames, t: int, opts: DescriptorOptions = DescriptorOptions(),
                  normalize: bool = False) -> np.ndarray:
    """``(H, W, D)`` descriptors of frame ``t``, optionally z-scored per channel."""
    f = feature_fields(frames, opts, [t], workers=1)[0]
    return zscore(f) if normalize else f


def zscore(features, eps: float = 1e-12) -> np.ndarray:
    """Standardise each channel (last axis) over all other axes; flat channels are only centred."""
    features = np.asarray(features, dtype=float)
    axes = tuple(range(features.ndim - 1))
    mu = features.mean(axis=axes)
    sd = features.std(axis=axes)
    sd = np.where(sd > eps, sd, 1.0)
    return (features - mu) / sd


def write_features(path, field) -> None:
    """Dump an ``(H, W, D)`` field: magic, three little-endian uint32 dims, then float64 data."""
    field = np.asarray(field, dtype="<f8")
    h, w, d = field.shape
    with open(path, "wb") as fh:
        fh.write(FEATURE_MAGIC)
        fh.write(np.array([h, w, d], dtype="<u4").tobytes())
        fh.write(np.ascontiguousarray(field).tobytes())


def read_features(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:len(FEATURE_MAGIC)] != FEATURE_MAGIC:
        raise ValueError(f"{path}: not a feature dump")
    off = len(FEATURE_MAGIC)
    h, w, d = (int(v) for v in np.frombuffer(data, dtype="<u4", count=3, offset=off))
    vals = np.frombuffer(data, dtype="<f8", offset=off + 12)
    if vals.size != h * w * d:
        raise ValueError(f"{path}: expected {h * w * d} values, found {vals.size}")
    return vals.reshape(h, w, d).astype(float)


FEATURE_MAGIC = b"WMFEAT01"
