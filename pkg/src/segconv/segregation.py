"""Parity segregation of a square kernel into four sub-kernels.

An n x n kernel splits into four sub-kernels by (row parity, column parity)
of the original element positions: sub-kernel (r, s) holds K[r::2, s::2].
Their sizes are ceil(n/2) or floor(n/2) per axis and together they hold
every kernel element exactly once. The stride-2 transpose convolution of a
map then needs exactly one sub-kernel per output element, chosen from the
output coordinate's parity (see segconv.engines).

A padding factor P on the conventional operation maps to floor(P/2) on the
raw input, with the sub-kernel selection order reversed when P is odd.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensors import ShapeError, require_square_kernel


@dataclass(frozen=True)
class SubKernelSet:
    """The four parity sub-kernels of one square kernel of side `size`.

    k00 is ceil(n/2) x ceil(n/2), k01 ceil x floor, k10 floor x ceil and
    k11 floor x floor. Arrays are treated as immutable once constructed.
    """

    size: int
    k00: np.ndarray
    k01: np.ndarray
    k10: np.ndarray
    k11: np.ndarray

    def sub(self, row_parity: int, col_parity: int) -> np.ndarray:
        """Sub-kernel holding original elements K[2u+row_parity, 2v+col_parity]."""
        return (self.k00, self.k01, self.k10, self.k11)[2 * row_parity + col_parity]

    def element_count(self) -> int:
        return self.k00.size + self.k01.size + self.k10.size + self.k11.size


@dataclass(frozen=True)
class EffectivePadding:
    """Input padding for the segregated engine plus the odd-padding swap flag."""

    pad: int
    swap: bool


def subkernel_dims(size: int, row_parity: int, col_parity: int) -> tuple[int, int]:
    """Expected (rows, cols) of sub-kernel (row_parity, col_parity) for kernel side `size`."""
    ceil_half = (size + 1) // 2
    floor_half = size // 2
    return (ceil_half if row_parity == 0 else floor_half,
            ceil_half if col_parity == 0 else floor_half)


def segregate_kernel(kernel: np.ndarray) -> SubKernelSet:
    """Split a square kernel (side >= 2) into its four parity sub-kernels."""
    k = require_square_kernel(kernel)
    return SubKernelSet(
        size=k.shape[0],
        k00=k[0::2, 0::2].copy(),
        k01=k[0::2, 1::2].copy(),
        k10=k[1::2, 0::2].copy(),
        k11=k[1::2, 1::2].copy(),
    )


def merge_subkernels(subs: SubKernelSet) -> np.ndarray:
    """Reassemble the original kernel; exact (bitwise) inverse of segregate_kernel."""
    n = subs.size
    for r in (0, 1):
        for s in (0, 1):
            expected = subkernel_dims(n, r, s)
            actual = subs.sub(r, s).shape
            if tuple(actual) != expected:
                raise ShapeError(f"sub-kernel ({r},{s}) has shape {actual}, "
                                 f"expected {expected} for size {n}")
    dt = np.result_type(subs.k00, subs.k01, subs.k10, subs.k11)
    out = np.empty((n, n), dtype=dt)
    for r in (0, 1):
        for s in (0, 1):
            out[r::2, s::2] = subs.sub(r, s)
    return out


def effective_padding(pad: int) -> EffectivePadding:
    """Padding transformation: P becomes floor(P/2), with a swap when P is odd."""
    pad = int(pad)
    if pad < 0:
        raise ValueError(f"padding must be >= 0, got {pad}")
    return EffectivePadding(pad=pad // 2, swap=pad % 2 == 1)
