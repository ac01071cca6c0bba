import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lplab.lattice import Grid, SampledSignal
from lplab.maximal import (
    EXACT,
    MaximalConfig,
    RdfConvergenceError,
    a1_ratio,
    factorized_weight,
    hl_maximal,
    maximal_kernel,
    maximal_norm_bound,
    measure_buckley,
    rdf_dual_iterate,
    rdf_iterate,
    sharp_maximal,
)
from lplab.weights import Weight, make_a1_example, power_weight, weighted_norm

from oracles import hl_brute, sharp_brute

DYADIC = MaximalConfig("dyadic")


def test_config_lengths():
    assert EXACT.lengths(16) == list(range(1, 9))
    assert DYADIC.lengths(16) == [1, 2, 4, 8]
    with pytest.raises(ValueError):
        MaximalConfig("centred")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), mode=st.sampled_from(["exact", "dyadic"]))
def test_hl_matches_brute_force(seed, mode):
    cfg = MaximalConfig(mode)
    g = Grid(32, 1.0)
    a = np.random.default_rng(seed).exponential(size=32)
    got = hl_maximal(SampledSignal(g, a), cfg).real
    assert np.allclose(got, hl_brute(a, cfg.lengths(32)), rtol=1e-13)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), mode=st.sampled_from(["exact", "dyadic"]))
def test_sharp_matches_brute_force(seed, mode):
    cfg = MaximalConfig(mode)
    g = Grid(32, 1.0)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=32) + 1j * rng.normal(size=32)
    got = sharp_maximal(SampledSignal(g, v), cfg).real
    assert np.allclose(got, sharp_brute(v, cfg.lengths(32)), rtol=1e-12, atol=1e-14)


def test_spike_profile():
    n = 64
    d = np.zeros(n)
    d[0] = 1.0
    got = hl_maximal(SampledSignal(Grid(n, 1.0), d)).real
    assert np.allclose(got, maximal_kernel(n))
    dist = np.minimum(np.arange(n), n - np.arange(n))
    near = dist < n // 2  # windows are at most n/2 long
    assert np.allclose(got[near], 1.0 / (dist[near] + 1))
    assert np.all(got[~near] == 0)


def test_sharp_le_twice_maximal():
    g = Grid(64, 1.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        f = SampledSignal(g, rng.normal(size=64) * rng.exponential(size=64))
        assert np.all(sharp_maximal(f).real <= 2 * hl_maximal(f).real + 1e-12)


def test_maximal_bound_is_upper_bound():
    g = Grid(128, 4.0)
    for alpha in (0.0, 0.4, -0.3):
        w = power_weight(alpha, g)
        B = maximal_norm_bound(w, 2.0)
        meas = measure_buckley(w, 2.0, trials=4)
        assert 1.0 <= meas.measured <= B
        assert meas.implied_constant > 0


def test_buckley_grows_with_weight_singularity():
    g = Grid(128, 4.0)
    vals = [measure_buckley(power_weight(a, g), 2.0, trials=2).measured for a in (0.0, 0.45, 0.9)]
    assert vals[0] < vals[1] < vals[2]


def test_a1_ratio():
    g = Grid(128, 4.0)
    assert a1_ratio(Weight(g, np.ones(128))) == pytest.approx(1.0)
    assert a1_ratio(make_a1_example(g)) < 4.0
    assert a1_ratio(SampledSignal(g, np.r_[0.0, np.ones(127)])) == np.inf


@pytest.mark.parametrize("seed", range(5))
def test_rdf_properties(seed):
    g = Grid(64, 2.0)
    w = power_weight(0.3, g)
    h = SampledSignal(g, np.random.default_rng(seed).exponential(size=64))
    r = rdf_iterate(h, w, 2.0)
    assert r.majorizes
    assert r.norm_ratio <= 2.0 + 1e-10
    assert r.a1_ratio <= 2 * r.norm_bound + 1e-10
    assert weighted_norm(r.signal, 2.0, w) <= 2 * weighted_norm(h, 2.0, w) * (1 + 1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_rdf_dual_properties(seed):
    g = Grid(64, 2.0)
    w = power_weight(-0.3, g)
    h = SampledSignal(g, np.random.default_rng(seed).exponential(size=64))
    r = rdf_dual_iterate(h, w, 3.0)
    assert r.majorizes and r.norm_ratio <= 2.0 + 1e-10
    assert r.a1_ratio <= 2 * r.norm_bound + 1e-10


def test_rdf_rejects_negative_and_short_series():
    g = Grid(32, 1.0)
    with pytest.raises(ValueError):
        rdf_iterate(SampledSignal(g, -np.ones(32)), None, 2.0)
    with pytest.raises(RdfConvergenceError):
        rdf_iterate(SampledSignal(g, np.ones(32)), None, 2.0, max_terms=2, norm_bound=0.6)


@pytest.mark.parametrize("seed", range(3))
def test_factorization_bound(seed):
    g = Grid(64, 2.0)
    rng = np.random.default_rng(seed)
    w = power_weight(0.3, g)
    gs = SampledSignal(g, rng.exponential(size=64) + 0.1)
    hs = SampledSignal(g, rng.exponential(size=64) + 0.1)
    fw = factorized_weight(gs, hs, w, 2.0)
    assert fw.holds
