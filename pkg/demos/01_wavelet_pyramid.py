"""
A 3D wavelet pyramid, one level at a time
=========================================

Frames are stacked into a (y, x, t) volume and split into eight subbands per
level. The letters name the filter used along y, x and t, so ``LLH`` is the
band that only sees change over time.
"""

import numpy as np

from wavemotion import HAAR, decompose, dwt3d_level, get_bank

# A 2x2x2 cube that is dark in the first frame and bright in the second:
# all of its detail lands in the temporal high-pass band.
cube = np.zeros((2, 2, 2))
cube[:, :, 1] = 1.0
for key, band in dwt3d_level(cube, HAAR).items():
    print(f"{key}: {band.ravel()[0]:+.4f}")

# The transform is orthonormal, so energy is preserved at every level.
vol = np.random.default_rng(0).standard_normal((8, 8, 8))
level = dwt3d_level(vol, get_bank("db2"))
print("\ninput energy   ", round(float((vol ** 2).sum()), 10))
print("subband energy ", round(sum(float((b ** 2).sum()) for b in level.values()), 10))

# Recursing on LLL gives the pyramid; each level halves every extent.
pyr = decompose(vol, HAAR, scales=3)
for s, lv in enumerate(pyr.levels, 1):
    print(f"level {s}: subbands of shape {lv['LLL'].shape}")
