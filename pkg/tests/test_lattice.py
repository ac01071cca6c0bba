from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lplab.lattice import (
    FreqInterval,
    Grid,
    GridMismatchError,
    IntervalFamily,
    SampledSignal,
    dft,
    dyadic_decomposition,
    fourier_transform,
    idft,
    well_distributed_constant,
    whitney_decomposition,
)
from lplab.operators import apply_multiplier
from lplab.variation import Symbol

from oracles import dft_matrix_transform


@pytest.mark.parametrize("n", [0, 7, 12, 100])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ValueError):
        Grid(n, 1.0)


def test_grid_geometry():
    g = Grid(16, 4.0)
    assert g.h == 0.25
    assert g.x[0] == -2.0 and np.isclose(g.x[-1], 1.75)
    assert sorted(g.freqs)[0] == -2.0 and sorted(g.freqs)[-1] == 1.75
    assert g.nyquist == (-2.0, 2.0)
    assert g.refine() == Grid(32, 4.0)


def test_signal_is_read_only():
    s = SampledSignal(Grid(8, 1.0), np.arange(8))
    with pytest.raises(ValueError):
        s.values[0] = 1.0


def test_signal_rejects_nonfinite():
    with pytest.raises(ValueError):
        SampledSignal(Grid(8, 1.0), [np.nan] + [0] * 7)


def test_dft_unitary_and_inverse():
    rng = np.random.default_rng(0)
    g = Grid(64, 3.0)
    f = SampledSignal(g, rng.normal(size=64) + 1j * rng.normal(size=64))
    F = dft(f)
    assert np.isclose(F.l2_norm(), f.l2_norm(), rtol=1e-13)
    assert np.allclose(idft(F).values, f.values, atol=1e-13)


def test_fourier_transform_matches_direct_sum():
    rng = np.random.default_rng(1)
    g = Grid(32, 5.0)
    v = rng.normal(size=32) + 1j * rng.normal(size=32)
    fast = fourier_transform(SampledSignal(g, v))
    slow = dft_matrix_transform(v, g.x, g.freqs, g.h)
    assert np.allclose(fast, slow, atol=1e-12)


def test_gaussian_transform_is_gaussian():
    g = Grid(256, 16.0)
    f = SampledSignal.from_function(g, lambda x: np.exp(-np.pi * x**2))
    assert np.allclose(fourier_transform(f), np.exp(-np.pi * g.freqs**2), atol=1e-12)


def test_grid_mismatch():
    a, b = Grid(8, 1.0), Grid(16, 1.0)
    with pytest.raises(GridMismatchError):
        apply_multiplier(Symbol.constant(a), SampledSignal(b, np.zeros(16)))


def test_interval_half_open_and_nyquist():
    iv = FreqInterval(0.0, 1.0)
    assert iv.contains(0.0) and not iv.contains(1.0)
    with pytest.raises(ValueError):
        FreqInterval(1.0, 1.0)
    with pytest.raises(ValueError):
        FreqInterval(0.0, 100.0).mask(Grid(16, 1.0))


def test_family_rejects_overlap():
    with pytest.raises(ValueError):
        IntervalFamily.from_bounds([(0, 2), (1, 3)])
    fam = IntervalFamily.from_bounds([(2, 3), (0, 1)])
    assert fam.bounds() == [(0.0, 1.0), (2.0, 3.0)]


def test_dyadic_small_grid():
    g = Grid(16, 1.0)
    blocks = dyadic_decomposition(g).bounds()
    assert blocks == [(-8.0, -4.0), (-4.0, -2.0), (-2.0, -1.0), (-1.0, 1.0), (1.0, 2.0), (2.0, 4.0), (4.0, 8.0)]


@pytest.mark.parametrize("n,L", [(16, 1.0), (64, 8.0), (256, 3.0), (1024, 64.0)])
def test_dyadic_partitions_the_grid(n, L):
    g = Grid(n, L)
    counts = dyadic_decomposition(g).masks(g).sum(axis=0)
    assert np.all(counts == 1)


def test_whitney_example():
    pieces = whitney_decomposition(FreqInterval(Fraction(0), Fraction(1)), Fraction(1, 64))
    assert len(pieces) == 12
    assert pieces[0].lo == 0 and pieces[-1].hi == 1
    assert min(p.length for p in pieces) == Fraction(1, 64)


@settings(max_examples=60, deadline=None)
@given(a=st.integers(-50, 50), width=st.integers(1, 40), depth=st.integers(3, 12))
def test_whitney_exact_partition_and_comparability(a, width, depth):
    lo, hi = Fraction(a), Fraction(a + width)
    min_len = Fraction(width, 2**depth)
    pieces = list(whitney_decomposition(FreqInterval(lo, hi), min_len))
    assert pieces[0].lo == lo and pieces[-1].hi == hi
    assert all(p.hi == q.lo for p, q in zip(pieces, pieces[1:]))
    parent = FreqInterval(lo, hi)
    for p in pieces[1:-1]:
        d = p.dist_to_boundary(parent)
        assert p.length <= d <= 4 * p.length
    for p in (pieces[0], pieces[-1]):
        assert p.length < 2 * min_len


def test_whitney_rejects_bad_min_len():
    with pytest.raises(ValueError):
        whitney_decomposition(FreqInterval(0.0, 1.0), 0.3)
    with pytest.raises(ValueError):
        whitney_decomposition(FreqInterval(0.0, 1.0), 0.0)


def test_well_distributed_constant():
    g = Grid(256, 8.0)
    w = whitney_decomposition(FreqInterval(0.0, 8.0), 0.25)
    assert well_distributed_constant(w, 2.0, g) <= 5
    lumps = IntervalFamily.from_bounds([(k / 8, (k + 1) / 8) for k in range(16)])
    assert well_distributed_constant(lumps, 2.0, g) >= 2
    with pytest.raises(ValueError):
        well_distributed_constant(w, 1.0, g)
