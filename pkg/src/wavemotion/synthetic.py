"""Deterministic synthetic sequences with exact ground truth.

Scenes:

``moving-square``
    A textured square sliding horizontally over a flat background. Truth is
    the square's footprint in each frame.
``drifting-sine-texture``
    A central rectangle filled with a travelling sinusoid (a stand-in for
    water or smoke). Truth marks the whole rectangle in every frame.
``blinking-region``
    A central rectangle whose intensity toggles every frame, like a fan or
    a flickering display. Truth marks the rectangle.
``static-noise``
    A frozen random texture with only sensor noise changing over time.
    Truth is all static.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .media import MOTION, STATIC, mask_to_codes, save_sequence, to_uint8, write_pgm

SCENES = ("moving-square", "drifting-sine-texture", "blinking-region", "static-noise")


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str = "moving-square"
    height: int = 64
    width: int = 64
    frames: int = 32
    size: int = 8
    speed: float = 1.0
    noise: float = 0.02
    seed: int = 0
    background: float = 0.25
    foreground: float = 0.75
    # sinusoid wavelength (pixels) and peak-to-peak amplitude for the texture scene
    wavelength: float = 8.0
    texture_contrast: float = 0.8

    def __post_init__(self):
        if self.kind not in SCENES:
            raise ValueError(f"unknown scene {self.kind!r}; choose from {SCENES}")
        if min(self.height, self.width, self.frames) < 1 or self.size < 1:
            raise ValueError("extents and object size must be positive")
        if self.noise < 0:
            raise ValueError("noise sigma must be non-negative")


def _region(spec):
    """Central rectangle covering half of each spatial extent."""
    y0, x0 = spec.height // 4, spec.width // 4
    return slice(y0, y0 + max(1, spec.height // 2)), slice(x0, x0 + max(1, spec.width // 2))


def square_origin(spec, t):
    """Top-left corner ``(y, x)`` of the moving square at frame ``t``."""
    y = (spec.height - spec.size) // 2
    x = spec.size // 2 + int(round(spec.speed * t))
    return y, x


def render(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """Clean intensities ``(T, H, W)`` in [0, 1] and truth codes (MOTION/STATIC)."""
    rng = np.random.default_rng(spec.seed)
    T, H, W = spec.frames, spec.height, spec.width
    clean = np.full((T, H, W), spec.background)
    truth = np.full((T, H, W), STATIC, dtype=np.int8)
    if spec.kind == "moving-square":
        s = spec.size
        # the object carries its own texture so its interior changes as it moves
        tex = spec.foreground + 0.5 * (rng.random((s, s)) - 0.5)
        for t in range(T):
            y, x = square_origin(spec, t)
            ys, xs = slice(max(y, 0), min(y + s, H)), slice(max(x, 0), min(x + s, W))
            clean[t, ys, xs] = tex[ys.start - y:ys.stop - y, xs.start - x:xs.stop - x]
            truth[t, ys, xs] = MOTION
    elif spec.kind == "drifting-sine-texture":
        ry, rx = _region(spec)
        yy, xx = np.mgrid[0:H, 0:W]
        amp = spec.texture_contrast / 2
        mid = (spec.foreground + spec.background) / 2
        k = 2 * np.pi / spec.wavelength
        for t in range(T):
            wave = mid + amp * np.sin(k * (xx + 0.5 * yy - spec.speed * t))
            clean[t, ry, rx] = wave[ry, rx]
        truth[:, ry, rx] = MOTION
    elif spec.kind == "blinking-region":
        ry, rx = _region(spec)
        for t in range(T):
            clean[t, ry, rx] = spec.foreground if t % 2 == 0 else spec.background
        truth[:, ry, rx] = MOTION
    else:  # static-noise
        clean[:] = spec.background + (spec.foreground - spec.background) * rng.random((H, W))
    return clean, truth


def generate(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """8-bit frames ``(T, H, W)`` with additive Gaussian noise, plus truth codes."""
    clean, truth = render(spec)
    noise_rng = np.random.default_rng([spec.seed, 1])
    noisy = clean + spec.noise * noise_rng.standard_normal(clean.shape)
    return to_uint8(np.clip(noisy, 0.0, 1.0)), truth


def write_synthetic(spec: SyntheticSpec, out_dir, frame_pattern="in%06d.pgm",
                    truth_pattern="gt%06d.pgm") -> tuple[str, str]:
    """Write ``out_dir/input`` frames and ``out_dir/groundtruth`` masks; returns both dirs."""
    frames, truth = generate(spec)
    in_dir = os.path.join(out_dir, "input")
    gt_dir = os.path.join(out_dir, "groundtruth")
    save_sequence(in_dir, frames, frame_pattern)
    os.makedirs(gt_dir, exist_ok=True)
    for t, m in enumerate(truth):
        write_pgm(os.path.join(gt_dir, truth_pattern % t), mask_to_codes(m))
    return in_dir, gt_dir
