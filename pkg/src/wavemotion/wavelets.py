"""Orthonormal filter banks and the separable 3D discrete wavelet pyramid.

Volumes are numpy arrays whose last three axes are ``(y, x, t)``. Any leading
axes are treated as a batch, so the same code path transforms one patch or a
whole frame's worth of per-pixel patches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

SUBBAND_KEYS = tuple("".join(k) for k in product("LH", repeat=3))
DETAIL_KEYS = SUBBAND_KEYS[1:]

_TOL = 1e-12


@dataclass(frozen=True)
class FilterBank:
    """Analysis low/high-pass pair of an orthonormal wavelet.

    Construction checks unit energy of both filters, zero DC gain of the
    high-pass and orthogonality of the pair.
    """

    name: str
    low: tuple[float, ...]
    high: tuple[float, ...]

    def __post_init__(self):
        low = np.asarray(self.low, dtype=float)
        high = np.asarray(self.high, dtype=float)
        if low.ndim != 1 or high.ndim != 1 or low.size == 0 or low.size != high.size:
            raise ValueError(f"filter bank {self.name!r}: low and high must be equal-length 1D tap lists")
        if abs(low @ low - 1.0) > _TOL or abs(high @ high - 1.0) > _TOL:
            raise ValueError(f"filter bank {self.name!r}: taps are not unit-energy")
        if abs(high.sum()) > _TOL:
            raise ValueError(f"filter bank {self.name!r}: high-pass has nonzero DC gain")
        if abs(low @ high) > _TOL:
            raise ValueError(f"filter bank {self.name!r}: low and high are not orthogonal")
        object.__setattr__(self, "low", tuple(float(v) for v in low))
        object.__setattr__(self, "high", tuple(float(v) for v in high))

    @classmethod
    def from_lowpass(cls, name, low):
        """Build the bank from its low-pass taps using the quadrature mirror rule."""
        low = [float(v) for v in low]
        n = len(low)
        high = [(-1) ** i * low[n - 1 - i] for i in range(n)]
        return cls(name, tuple(low), tuple(high))

    def __len__(self):
        return len(self.low)


_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)
_R7 = math.sqrt(7.0)

_BANKS: dict[str, FilterBank] = {}


def register_bank(bank: FilterBank) -> FilterBank:
    _BANKS[bank.name] = bank
    return bank


def get_bank(name: str) -> FilterBank:
    try:
        return _BANKS[name]
    except KeyError:
        raise KeyError(f"unknown filter bank {name!r}; known: {sorted(_BANKS)}") from None


def available_banks() -> list[str]:
    return sorted(_BANKS)


HAAR = register_bank(FilterBank("haar", (1 / _R2, 1 / _R2), (1 / _R2, -1 / _R2)))
DB2 = register_bank(FilterBank.from_lowpass(
    "db2",
    [(1 + _R3) / (4 * _R2), (3 + _R3) / (4 * _R2), (3 - _R3) / (4 * _R2), (1 - _R3) / (4 * _R2)],
))
# Closed-form 6-tap coiflet.
COIF1 = register_bank(FilterBank.from_lowpass(
    "coif1",
    [(-3 + _R7) / (16 * _R2), (1 - _R7) / (16 * _R2), (14 - 2 * _R7) / (16 * _R2),
     (14 + 2 * _R7) / (16 * _R2), (5 + _R7) / (16 * _R2), (1 - _R7) / (16 * _R2)],
))


def _analyze_axis(x, bank, axis):
    """Periodic filtering along ``axis`` followed by keeping even samples."""
    n = x.shape[axis]
    m = (n + 1) // 2
    starts = 2 * np.arange(m)
    approx = 0.0
    detail = 0.0
    # Fixed tap order keeps results bit-identical between batched and single calls.
    for i, (lo, hi) in enumerate(zip(bank.low, bank.high)):
        xi = np.take(x, (starts + i) % n, axis=axis)
        approx = approx + lo * xi
        detail = detail + hi * xi
    return approx, detail


def dwt1d(signal, bank: FilterBank = HAAR):
    """One level of the periodic 1D DWT.

    Returns ``(approx, detail)``, each of length ``ceil(n / 2)``.
    """
    signal = np.asarray(signal, dtype=float)
    if signal.ndim != 1 or signal.size < 2:
        raise ValueError("dwt1d needs a 1D signal of at least 2 samples")
    return _analyze_axis(signal, bank, 0)


def _level(vol, bank, passthrough):
    bands = {"": vol}
    for axis in (-3, -2, -1):
        nxt = {}
        for key, v in bands.items():
            if v.shape[axis] < 2:
                if not passthrough:
                    raise ValueError(f"volume extent {v.shape[axis]} < 2 on axis {axis + 3}")
                nxt[key + "L"] = v
                nxt[key + "H"] = np.zeros_like(v)
            else:
                nxt[key + "L"], nxt[key + "H"] = _analyze_axis(v, bank, axis)
        bands = nxt
    return {k: bands[k] for k in SUBBAND_KEYS}


def dwt3d_level(vol, bank: FilterBank = HAAR) -> dict[str, np.ndarray]:
    """Separable single-level 3D DWT (y, then x, then t) into eight subbands.

    Keys are ``"LLL" ... "HHH"`` with letters ordered (y, x, t). Every one of
    the last three extents must be at least 2.
    """
    vol = np.asarray(vol, dtype=float)
    if vol.ndim < 3:
        raise ValueError("dwt3d_level expects a volume with at least 3 axes")
    return _level(vol, bank, passthrough=False)


def max_levels(shape) -> int:
    """Number of levels possible when unit-extent axes are passed through."""
    return max(math.ceil(math.log2(n)) if n > 1 else 0 for n in shape)


def level_shapes(shape, scales):
    """Subband extents for each level 1..scales."""
    shapes = []
    cur = tuple(shape)
    for _ in range(scales):
        cur = tuple((n + 1) // 2 for n in cur)
        shapes.append(cur)
    return shapes


@dataclass
class WaveletPyramid:
    """Subbands per level; ``levels[0]`` is scale 1 (finest)."""

    levels: list[dict[str, np.ndarray]] = field(default_factory=list)
    # extents of the input to each level, used to know which axes were filtered
    parents: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def scales(self) -> int:
        return len(self.levels)

    def band(self, key: str, scale: int) -> np.ndarray:
        return self.levels[scale - 1][key]


def decompose(vol, bank: FilterBank = HAAR, scales: int = 1) -> WaveletPyramid:
    """Recursive pyramid: level ``s + 1`` re-analyses the LLL band of level ``s``.

    An axis that has already shrunk to a single sample is carried through as
    low-pass; asking for more levels than that allows raises ``ValueError``.
    """
    vol = np.asarray(vol, dtype=float)
    if vol.ndim < 3:
        raise ValueError("decompose expects a volume with at least 3 axes")
    if scales < 1:
        raise ValueError("scales must be >= 1")
    shape = vol.shape[-3:]
    if min(shape) < 1:
        raise ValueError("empty volume")
    if scales > max_levels(shape):
        raise ValueError(f"{scales} levels requested but extents {shape} allow at most {max_levels(shape)}")
    pyr = WaveletPyramid()
    cur = vol
    for _ in range(scales):
        pyr.parents.append(tuple(cur.shape[-3:]))
        bands = _level(cur, bank, passthrough=True)
        pyr.levels.append(bands)
        cur = bands["LLL"]
    return pyr
