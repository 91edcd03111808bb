"""3D wavelet leaders built on top of a :class:`WaveletPyramid`."""

from __future__ import annotations

import numpy as np

from .wavelets import DETAIL_KEYS, WaveletPyramid

# Subbands behind the leader shown for the significant-channel figure.
RESTRICTED_KEYS = ("LLH", "LHH", "HLH")


def _coarsen(fine, target_shape):
    """Max over each pair of fine cells that maps to one coarse cell.

    Axes whose extent does not shrink (passed-through axes) map one-to-one.
    """
    out = fine
    for axis, m in zip((-3, -2, -1), target_shape):
        n = out.shape[axis]
        if n == m:
            continue
        out = np.maximum.reduceat(out, np.arange(0, n, 2), axis=axis)
    return out


def leaders(pyr: WaveletPyramid, keys=DETAIL_KEYS, strict: bool = False) -> list[np.ndarray]:
    """Leader volume for each scale of ``pyr`` (index 0 is scale 1).

    The leader of a cell at scale ``s`` is the largest ``|coefficient|`` among
    the chosen detail subbands over every scale ``s' <= s`` whose cells fall
    inside that cell's dyadic cone. With ``strict=True`` only same-scale
    coefficients enter the max.
    """
    if pyr.scales < 1:
        raise ValueError("pyramid has no levels")
    out = []
    prev = None
    for bands in pyr.levels:
        cur = np.abs(bands[keys[0]])
        for k in keys[1:]:
            cur = np.maximum(cur, np.abs(bands[k]))
        if prev is not None and not strict:
            cur = np.maximum(cur, _coarsen(prev, cur.shape[-3:]))
        out.append(cur)
        prev = cur
    return out
