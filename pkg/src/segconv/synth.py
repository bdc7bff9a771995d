"""Deterministic, platform-independent tensor synthesis.

Values come from the splitmix64 finalizer applied to (seed + flat index),
so the same (shape, seed) always yields bit-identical float32 tensors, on
any machine and in any language that reproduces the integer mixing. The
64-bit word is converted to float64, scaled by 2**-64 and then rounded to
float32, giving values in [0, 1).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(value: int) -> int:
    """The splitmix64 output function of a 64-bit word (stateless form)."""
    z = (value + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def unit_floats(count: int, seed: int) -> np.ndarray:
    """`count` float32 values in [0, 1): element i = splitmix64(seed + i) * 2**-64."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    idx = np.arange(count, dtype=np.uint64) + np.uint64(seed & _MASK)
    z = idx + np.uint64(_GAMMA)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return (z.astype(np.float64) * 2.0 ** -64).astype(np.float32)


def gen_synthetic(channels: int, height: int, width: int, seed: int) -> np.ndarray:
    """Deterministic (channels, height, width) float32 tensor, channel-major indexing."""
    if channels < 1 or height < 1 or width < 1:
        raise ValueError(f"dims must be >= 1, got {channels}x{height}x{width}")
    return unit_floats(channels * height * width, seed).reshape(channels, height, width)


def gen_kernel_bank(c_in: int, c_out: int, kernel_n: int, seed: int) -> np.ndarray:
    """Deterministic (c_in, c_out, n, n) float32 kernel bank from the same stream."""
    if c_in < 1 or c_out < 1:
        raise ValueError(f"channel counts must be >= 1, got {c_in}->{c_out}")
    if kernel_n < 2:
        raise ValueError(f"kernel side must be >= 2, got {kernel_n}")
    flat = unit_floats(c_in * c_out * kernel_n * kernel_n, seed)
    return flat.reshape(c_in, c_out, kernel_n, kernel_n)
