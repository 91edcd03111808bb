"""
Flicker and texture
===================

Motion here is any temporal change, so a blinking light and a rippling
surface are both detected, while a still scene with sensor noise is reported
as having nothing to cluster.
"""

import logging

from wavemotion import DetectorConfig, SyntheticSpec, detect, generate, report, score

logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")

for kind in ("blinking-region", "drifting-sine-texture", "static-noise"):
    frames, truth = generate(SyntheticSpec(kind=kind))
    det = detect(frames / 255.0, DetectorConfig())
    if det.degenerate_chunks:
        print(f"{kind:>22}: no motion evidence, every pixel static")
        continue
    rep = report(score(det.masks, truth))
    print(f"{kind:>22}: recall {rep.re:.3f}  F {rep.f_measure:.3f}")
