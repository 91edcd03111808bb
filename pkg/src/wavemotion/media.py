"""Frame-sequence and ground-truth I/O, plus optional median deinterlacing.

A frame sequence is a float array of shape ``(T, H, W)`` with intensities in
``[0, 1]``. Ground-truth masks are int8 arrays holding ``MOTION``, ``STATIC``
or ``IGNORE`` per pixel.
"""

from __future__ import annotations

import os
import re

import numpy as np
from scipy import ndimage

MOTION = 1
STATIC = 0
IGNORE = -1

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


class ImageFormatError(OSError):
    """A file could not be decoded as an 8-bit image."""


def _read_token(data, pos):
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def read_pnm(path) -> np.ndarray:
    """Decode a binary PGM (P5) or PPM (P6) file with maxval <= 255.

    Returns uint8 ``(H, W)`` for P5 and ``(H, W, 3)`` for P6.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        magic, pos = _read_token(data, 0)
        if magic not in (b"P5", b"P6"):
            raise ValueError(f"unsupported magic {magic!r}")
        w, pos = _read_token(data, pos)
        h, pos = _read_token(data, pos)
        maxval, pos = _read_token(data, pos)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise ImageFormatError(f"{path}: not a binary PGM/PPM ({exc})") from None
    if not 0 < maxval < 256:
        raise ImageFormatError(f"{path}: maxval {maxval} is not 8-bit")
    channels = 3 if magic == b"P6" else 1
    pos += 1  # single whitespace byte after maxval
    count = w * h * channels
    raster = np.frombuffer(data[pos:], dtype=np.uint8)
    if raster.size < count:
        raise ImageFormatError(f"{path}: truncated raster ({raster.size} of {count} bytes)")
    img = raster[:count].reshape((h, w, 3) if channels == 3 else (h, w)).copy()
    if maxval != 255:
        img = np.round(img.astype(float) * 255.0 / maxval).astype(np.uint8)
    return img


def write_pgm(path, img) -> None:
    """Write a uint8 ``(H, W)`` array as binary PGM."""
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("write_pgm expects a 2D array")
    img = img.astype(np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(img).tobytes())


def read_image(path) -> np.ndarray:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".png":
        try:
            from PIL import Image
        except ImportError:  # pragma: no cover
            raise ImageFormatError(f"{path}: PNG support needs Pillow") from None
        try:
            with Image.open(path) as im:
                if im.mode not in ("L", "RGB"):
                    im = im.convert("RGB")
                return np.asarray(im, dtype=np.uint8)
        except OSError as exc:
            raise ImageFormatError(f"{path}: {exc}") from None
    return read_pnm(path)


def to_intensity(img) -> np.ndarray:
    """uint8 grayscale or RGB image to float intensities in [0, 1]."""
    img = np.asarray(img)
    if img.ndim == 3:
        return (img.astype(float) @ LUMA_WEIGHTS) / 255.0
    return img.astype(float) / 255.0


def to_uint8(frames) -> np.ndarray:
    return np.clip(np.round(np.asarray(frames) * 255.0), 0, 255).astype(np.uint8)


def _pattern_regex(pattern):
    m = re.search(r"%(0?)(\d*)d", pattern)
    if m is None:
        raise ValueError(f"pattern {pattern!r} has no integer field")
    width = m.group(2)
    digits = r"\d{%s}" % width if m.group(1) and width else r"\d+"
    rx = re.escape(pattern[:m.start()]) + "(" + digits + ")" + re.escape(pattern[m.end():])
    return re.compile(rx + r"\Z")


def list_numbered(directory, pattern) -> list[tuple[int, str]]:
    """``(index, path)`` pairs of files in ``directory`` matching a printf pattern."""
    if not os.path.isdir(directory):
        raise FileNotFoundError(f"frame directory not found: {directory}")
    rx = _pattern_regex(pattern)
    found = []
    for name in os.listdir(directory):
        m = rx.match(name)
        if m:
            found.append((int(m.group(1)), os.path.join(directory, name)))
    found.sort()
    return found


def load_sequence(directory, pattern="in%06d.pgm") -> np.ndarray:
    """Load numbered frames into a ``(T, H, W)`` float array."""
    files = list_numbered(directory, pattern)
    if not files:
        raise FileNotFoundError(f"no files matching {pattern!r} in {directory}")
    frames = []
    for _, path in files:
        img = to_intensity(read_image(path))
        if frames and img.shape != frames[0].shape:
            raise ImageFormatError(f"{path}: size {img.shape} differs from first frame {frames[0].shape}")
        frames.append(img)
    return np.stack(frames)


def save_sequence(directory, frames, pattern="in%06d.pgm", start=0) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    frames = np.asarray(frames)
    if frames.dtype != np.uint8:
        frames = to_uint8(frames)
    paths = []
    for i, f in enumerate(frames):
        path = os.path.join(directory, pattern % (start + i))
        write_pgm(path, f)
        paths.append(path)
    return paths


def mask_from_codes(img) -> np.ndarray:
    img = np.asarray(img)
    out = np.full(img.shape, IGNORE, dtype=np.int8)
    out[img == 255] = MOTION
    out[img == 0] = STATIC
    return out


def mask_to_codes(mask) -> np.ndarray:
    """Inverse of :func:`mask_from_codes`; ignore pixels are written as 170."""
    mask = np.asarray(mask)
    out = np.full(mask.shape, 170, dtype=np.uint8)
    out[mask == MOTION] = 255
    out[mask == STATIC] = 0
    return out


def load_mask(path) -> np.ndarray:
    """Read a ground-truth image: 255 is motion, 0 static, anything else ignored."""
    img = read_image(path)
    if img.ndim != 2:
        raise ImageFormatError(f"{path}: ground truth must be grayscale")
    return mask_from_codes(img)


def save_mask(path, mask) -> None:
    write_pgm(path, mask_to_codes(mask))


def load_masks(directory, pattern="gt%06d.pgm") -> np.ndarray:
    files = list_numbered(directory, pattern)
    if not files:
        raise FileNotFoundError(f"no files matching {pattern!r} in {directory}")
    masks = [load_mask(p) for _, p in files]
    for (_, p), m in zip(files, masks):
        if m.shape != masks[0].shape:
            raise ImageFormatError(f"{p}: size {m.shape} differs from first mask {masks[0].shape}")
    return np.stack(masks)


def deinterlace(frames, radius: int = 1) -> np.ndarray:
    """Spatiotemporal median over a ``(2r+1)^3`` window, mirrored at every border."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    frames = np.asarray(frames, dtype=float)
    if frames.ndim != 3 or frames.shape[0] < 1:
        raise ValueError("deinterlace expects a non-empty (T, H, W) sequence")
    return ndimage.median_filter(frames, size=2 * radius + 1, mode="reflect")
