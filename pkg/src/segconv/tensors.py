"""Dense 2-D feature maps and the primitive spatial ops of stride-2 transpose convolution.

Array conventions used across the package:

* feature map  -- 2-D float ndarray, shape (height, width), row-major
* channel tensor -- 3-D float ndarray, shape (channels, height, width)
* kernel       -- 2-D float ndarray; square kernels are required where a
  full transpose-convolution kernel is meant, but the correlation primitive
  accepts rectangular kernels (the segregated engine's sub-kernels are
  rectangular for odd sizes)

float32 is the working precision. float64 inputs are accepted everywhere
and propagate through, which is what the oracle-grade comparison tests use.
All functions are pure: inputs are never mutated and results are fresh
arrays, so values can be shared freely across threads.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

DTYPE = np.float32


class ShapeError(ValueError):
    """An array's shape violates the operation's contract."""


def as_feature_map(values, dtype=DTYPE) -> np.ndarray:
    """Build a validated 2-D feature map from array-like data."""
    arr = np.asarray(values, dtype=dtype)
    return require_feature_map(arr)


def as_channel_tensor(values, dtype=DTYPE) -> np.ndarray:
    """Build a validated (channels, height, width) tensor from array-like data."""
    arr = np.asarray(values, dtype=dtype)
    return require_channel_tensor(arr)


def require_feature_map(arr: np.ndarray, what: str = "feature map") -> np.ndarray:
    if not isinstance(arr, np.ndarray) or arr.ndim != 2:
        raise ShapeError(f"{what} must be a 2-D array, got {getattr(arr, 'shape', type(arr))}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"{what} must be at least 1x1, got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.floating):
        raise ShapeError(f"{what} must hold floats, got dtype {arr.dtype}")
    return arr


def require_channel_tensor(arr: np.ndarray, what: str = "channel tensor") -> np.ndarray:
    if not isinstance(arr, np.ndarray) or arr.ndim != 3:
        raise ShapeError(f"{what} must be a 3-D (channels, height, width) array, "
                         f"got {getattr(arr, 'shape', type(arr))}")
    if min(arr.shape) < 1:
        raise ShapeError(f"{what} dimensions must all be >= 1, got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.floating):
        raise ShapeError(f"{what} must hold floats, got dtype {arr.dtype}")
    return arr


def require_square_kernel(arr: np.ndarray) -> np.ndarray:
    """Validate a full transpose-convolution kernel: 2-D, square, side >= 2."""
    if not isinstance(arr, np.ndarray):
        arr = np.asarray(arr, dtype=DTYPE)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"kernel must be square, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ShapeError(f"kernel side must be >= 2, got {arr.shape[0]}")
    if not np.issubdtype(arr.dtype, np.floating):
        raise ShapeError(f"kernel must hold floats, got dtype {arr.dtype}")
    return arr


def pad_zero(feature_map: np.ndarray, pad: int) -> np.ndarray:
    """Surround a map with `pad` rings of zeros; pad=0 returns an identical copy."""
    m = require_feature_map(feature_map)
    pad = int(pad)
    if pad < 0:
        raise ValueError(f"padding must be >= 0, got {pad}")
    return np.pad(m, pad)


def upsample_bed_of_nails(feature_map: np.ndarray) -> np.ndarray:
    """Insert a zero between every adjacent row/column pair.

    An (H, W) map becomes (2H-1, 2W-1) with the original values at even
    indices and zeros everywhere else.
    """
    m = require_feature_map(feature_map)
    h, w = m.shape
    out = np.zeros((2 * h - 1, 2 * w - 1), dtype=m.dtype)
    out[::2, ::2] = m
    return out


def cross_correlate_valid(feature_map: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Valid (fully-overlapping) cross-correlation, no kernel flip.

    out[i, j] = sum_{u, v} map[i+u, j+v] * kernel[u, v], output shape
    (H - kh + 1, W - kw + 1). The kernel may be rectangular.
    """
    m = require_feature_map(feature_map)
    k = np.asarray(kernel)
    if k.ndim != 2 or k.shape[0] < 1 or k.shape[1] < 1:
        raise ShapeError(f"kernel must be a non-empty 2-D array, got shape {k.shape}")
    if k.shape[0] > m.shape[0] or k.shape[1] > m.shape[1]:
        raise ShapeError(f"kernel {k.shape} exceeds map {m.shape} in at least one axis")
    dt = np.result_type(m.dtype, k.dtype)
    windows = sliding_window_view(m, k.shape)
    return np.tensordot(windows, k.astype(dt, copy=False), axes=([2, 3], [0, 1]))
