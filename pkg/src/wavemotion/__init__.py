"""Motion detection with per-pixel 3D wavelet and wavelet-leader descriptors.

Typical use::

    from wavemotion import DetectorConfig, detect, load_sequence
    frames = load_sequence("highway/input", "in%06d.pgm")
    masks = detect(frames, DetectorConfig()).masks
"""

from .descriptor import (
    DEFAULT_CHANNELS,
    STANDARD_SPECS,
    DescriptorOptions,
    PatchSpec,
    extract_patch,
    feature_field,
    feature_fields,
    pixel_descriptor,
    zscore,
)
from .leaders import leaders
from .media import IGNORE, MOTION, STATIC, deinterlace, load_mask, load_masks, load_sequence
from .metrics import ConfusionCounts, MetricReport, accumulate, mean_report, report
from .pipeline import DetectorConfig, detect, run_detect, run_sweep, score
from .segment import DegenerateInputError, kmeans, label_clusters
from .synthetic import SyntheticSpec, generate, render
from .wavelets import HAAR, FilterBank, WaveletPyramid, decompose, dwt1d, dwt3d_level, get_bank

__version__ = "0.1.0"

__all__ = [
    "HAAR", "IGNORE", "MOTION", "STATIC", "ConfusionCounts", "DEFAULT_CHANNELS", "DegenerateInputError", "DescriptorOptions",
    "DetectorConfig", "FilterBank", "MetricReport", "PatchSpec", "SyntheticSpec",
    "STANDARD_SPECS", "WaveletPyramid", "accumulate", "decompose", "deinterlace", "detect",
    "dwt1d", "dwt3d_level", "extract_patch", "feature_field", "feature_fields", "generate",
    "get_bank", "kmeans", "label_clusters", "leaders", "load_mask", "load_masks",
    "load_sequence", "mean_report", "pixel_descriptor", "render", "report", "run_detect",
    "run_sweep", "score", "zscore",
]
