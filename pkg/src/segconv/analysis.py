"""Closed-form multiplication counts and memory-savings estimates.

These reproduce the quantitative behaviour of the two engines without
running them: the reference engine performs n^2 multiplications per output
element per channel pair (zeros included), while the segregated engine
performs only the live subset, whose size per element is the selected
sub-kernel's element count. For even kernel sizes all four sub-kernels are
(n/2)^2 so the ratio is exactly 4.

Memory savings count the padded upsampled buffer the segregated engine
never allocates. Two accountings are provided because published figures
use both without distinction: the full buffer (`upsampled_total`) and the
buffer net of the padded raw input the segregated engine does allocate
(`upsampled_minus_input`). Element size defaults to 4 bytes (float32).
"""

from __future__ import annotations

from dataclasses import dataclass

from .engines import SpecError, TransposeConvSpec, output_dims
from .segregation import subkernel_dims

SAVINGS_UPSAMPLED_TOTAL = "upsampled_total"
SAVINGS_UPSAMPLED_MINUS_INPUT = "upsampled_minus_input"
SAVINGS_MODES = (SAVINGS_UPSAMPLED_TOTAL, SAVINGS_UPSAMPLED_MINUS_INPUT)


@dataclass(frozen=True)
class CostModel:
    """Operation and memory cost of one layer under both engines."""

    mults_reference: int
    mults_segregated: int
    ideal_ratio: float
    memory_savings_bytes: int
    mode: str


def mult_count_reference(spec: TransposeConvSpec) -> int:
    """Multiplications the reference engine performs: M_h * M_w * n^2 * c_in * c_out."""
    out_h, out_w = output_dims(spec)
    return out_h * out_w * spec.kernel_n ** 2 * spec.c_in * spec.c_out


def mult_count_segregated(spec: TransposeConvSpec) -> int:
    """Multiplications the segregated engine performs (live products only)."""
    out_h, out_w = output_dims(spec)
    swap = spec.pad % 2
    total = 0
    for r in (0, 1):
        rows = _parity_count(out_h, r, swap)
        for s in (0, 1):
            cols = _parity_count(out_w, s, swap)
            sub_h, sub_w = subkernel_dims(spec.kernel_n, r, s)
            total += rows * cols * sub_h * sub_w
    return total * spec.c_in * spec.c_out


def memory_savings_bytes(in_h: int, in_w: int, pad: int, c_in: int,
                         mode: str = SAVINGS_UPSAMPLED_TOTAL,
                         element_bytes: int = 4) -> int:
    """Bytes of upsampled-buffer memory the segregated engine avoids.

    upsampled_total:       (2*in_h - 1 + 2*pad) * (2*in_w - 1 + 2*pad) * c_in * element_bytes
    upsampled_minus_input: the above minus the padded raw input buffer
                           (in_h + 2*floor(pad/2)) * (in_w + 2*floor(pad/2)) * c_in * element_bytes
    """
    if in_h < 1 or in_w < 1 or c_in < 1:
        raise SpecError(f"dims must be >= 1, got {in_h}x{in_w} with {c_in} channels")
    if pad < 0:
        raise SpecError(f"padding must be >= 0, got {pad}")
    if element_bytes < 1:
        raise SpecError(f"element size must be >= 1 byte, got {element_bytes}")
    upsampled = (2 * in_h - 1 + 2 * pad) * (2 * in_w - 1 + 2 * pad) * c_in * element_bytes
    if mode == SAVINGS_UPSAMPLED_TOTAL:
        return upsampled
    if mode == SAVINGS_UPSAMPLED_MINUS_INPUT:
        eff = pad // 2
        raw = (in_h + 2 * eff) * (in_w + 2 * eff) * c_in * element_bytes
        return upsampled - raw
    raise ValueError(f"unknown savings mode {mode!r}, expected one of {SAVINGS_MODES}")


def cost_model(spec: TransposeConvSpec,
               mode: str = SAVINGS_UPSAMPLED_TOTAL) -> CostModel:
    """Full cost summary of a layer config."""
    ref = mult_count_reference(spec)
    seg = mult_count_segregated(spec)
    return CostModel(
        mults_reference=ref,
        mults_segregated=seg,
        ideal_ratio=ref / seg,
        memory_savings_bytes=memory_savings_bytes(spec.in_h, spec.in_w, spec.pad,
                                                  spec.c_in, mode),
        mode=mode,
    )


def _parity_count(out_len: int, parity: int, swap: int) -> int:
    # Sub-kernel (r, s) serves outputs x with (x + swap) % 2 == r.
    start = (parity + swap) % 2
    return max(0, (out_len - start + 1) // 2)
