"""
How big should the cube be?
===========================

Larger cubes see more context but cost more: the time spent on descriptors
grows with the cube's volume. This runs the twelve standard patch sizes on
one synthetic sequence.
"""

from wavemotion import STANDARD_SPECS, DetectorConfig, SyntheticSpec, generate, run_sweep

frames, truth = generate(SyntheticSpec(frames=16))
rows = run_sweep(STANDARD_SPECS, frames / 255.0, truth, DetectorConfig())

print(f"{'patch':>7} {'S':>2} {'F':>6} {'PWC':>6} {'descriptor s':>13}")
for spec, rep, seconds, feature_seconds in rows:
    print(f"{spec.label:>7} {spec.scales:>2} {rep.f_measure:6.3f} {rep.pwc:6.2f} {feature_seconds:13.3f}")
