import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segconv.segregation import (
    effective_padding,
    merge_subkernels,
    segregate_kernel,
    subkernel_dims,
)
from segconv.tensors import ShapeError


def _kernel(n, seed=0):
    return np.random.default_rng(seed).random((n, n)).astype(np.float32)


@pytest.mark.parametrize("n,counts", [
    (2, (1, 1, 1, 1)),
    (3, (4, 2, 2, 1)),
    (4, (4, 4, 4, 4)),
    (5, (9, 6, 6, 4)),
    (6, (9, 9, 9, 9)),
    (7, (16, 12, 12, 9)),
])
def test_subkernel_element_counts(n, counts):
    subs = segregate_kernel(_kernel(n))
    got = (subs.k00.size, subs.k01.size, subs.k10.size, subs.k11.size)
    assert got == counts
    assert sum(got) == n * n


@pytest.mark.parametrize("n", range(2, 10))
def test_subkernel_dimension_formulas(n):
    subs = segregate_kernel(_kernel(n))
    ceil_half, floor_half = (n + 1) // 2, n // 2
    assert subs.k00.shape == (ceil_half, ceil_half)
    assert subs.k01.shape == (ceil_half, floor_half)
    assert subs.k10.shape == (floor_half, ceil_half)
    assert subs.k11.shape == (floor_half, floor_half)
    for r in (0, 1):
        for s in (0, 1):
            assert subs.sub(r, s).shape == subkernel_dims(n, r, s)


def test_even_kernel_gives_equal_subkernels():
    subs = segregate_kernel(_kernel(4))
    shapes = {subs.sub(r, s).shape for r in (0, 1) for s in (0, 1)}
    assert shapes == {(2, 2)}


def test_element_mapping_2x2():
    subs = segregate_kernel(np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.float32))
    np.testing.assert_array_equal(subs.k00, [[1.0]])
    np.testing.assert_array_equal(subs.k01, [[2.0]])
    np.testing.assert_array_equal(subs.k10, [[3.0]])
    np.testing.assert_array_equal(subs.k11, [[4.0]])


def test_partition_property():
    # every original position lands in exactly one sub-kernel
    n = 7
    marker = np.arange(n * n, dtype=np.float32).reshape(n, n)
    subs = segregate_kernel(marker)
    seen = np.concatenate([subs.sub(r, s).ravel() for r in (0, 1) for s in (0, 1)])
    assert sorted(seen.tolist()) == list(range(n * n))


def test_element_mapping_parity_rule():
    n = 5
    k = np.arange(n * n, dtype=np.float32).reshape(n, n)
    subs = segregate_kernel(k)
    for r in (0, 1):
        for s in (0, 1):
            sub = subs.sub(r, s)
            for u in range(sub.shape[0]):
                for v in range(sub.shape[1]):
                    assert sub[u, v] == k[2 * u + r, 2 * v + s]


def test_merge_inverse_of_explicit_set():
    subs = segregate_kernel(np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.float32))
    np.testing.assert_array_equal(merge_subkernels(subs), [[1.0, 2.0], [3.0, 4.0]])


@given(n=st.integers(2, 9), seed=st.integers(0, 2**31))
@settings(max_examples=80, deadline=None)
def test_merge_segregate_roundtrip_bitwise(n, seed):
    k = _kernel(n, seed)
    back = merge_subkernels(segregate_kernel(k))
    assert back.dtype == k.dtype
    assert np.array_equal(back.view(np.uint32), k.view(np.uint32))


def test_merge_rejects_inconsistent_dims():
    subs = segregate_kernel(_kernel(5))
    broken = type(subs)(size=5, k00=subs.k00, k01=subs.k01,
                        k10=subs.k10, k11=np.zeros((3, 3), np.float32))
    with pytest.raises(ShapeError):
        merge_subkernels(broken)


def test_rejects_degenerate_kernels():
    with pytest.raises(ShapeError):
        segregate_kernel(np.ones((1, 1), np.float32))
    with pytest.raises(ShapeError):
        segregate_kernel(np.ones((2, 3), np.float32))


@pytest.mark.parametrize("pad,expected_pad,expected_swap", [
    (0, 0, False),
    (1, 0, True),
    (2, 1, False),
    (3, 1, True),
    (4, 2, False),
    (5, 2, True),
])
def test_effective_padding(pad, expected_pad, expected_swap):
    eff = effective_padding(pad)
    assert (eff.pad, eff.swap) == (expected_pad, expected_swap)


def test_effective_padding_rejects_negative():
    with pytest.raises(ValueError):
        effective_padding(-1)
