import json
import math

import numpy as np
import pytest

from lplab.lab import experiments as ex
from lplab.lab import families as fam
from lplab.lab.norms import _hash, estimate_multiplier_norm, regenerate_witness
from lplab.lab.report import ExperimentReport, doubling_drift, envelopes_by, parse_label, recompute_pass, render
from lplab.lattice import Grid
from lplab.variation import Symbol
from lplab.weights import power_weight


# ------------------------------------------------------------------ norms


def test_identity_norm_is_one():
    g = Grid(128, 8.0)
    one = Symbol.constant(g)
    for p, w in [(2.0, None), (3.0, None), (1.5, power_weight(0.3, g)), (2.0, power_weight(0.3, g))]:
        est = estimate_multiplier_norm(one, p, w, budget=2)
        assert est.value == pytest.approx(1.0, rel=1e-10)


def test_p2_unweighted_is_sup():
    g = Grid(256, 8.0)
    rng = np.random.default_rng(0)
    m = Symbol(g, rng.normal(size=256) + 1j * rng.normal(size=256))
    est = estimate_multiplier_norm(m, 2.0)
    assert est.method == "plane-wave"
    assert est.value == pytest.approx(m.sup(), rel=1e-12)


def test_hilbert_p4_lower_bound_and_stability():
    g = Grid(256, 16.0)
    H = Symbol.hilbert(g)
    vals = [estimate_multiplier_norm(H, 4.0, budget=4, seed=s).value for s in range(3)]
    # continuum norm is cot(pi/8); a lower bound must sit below it
    assert all(1.0 <= v <= 1 / math.tan(math.pi / 8) for v in vals)
    assert max(vals) / min(vals) < 1.05


def test_witness_regenerates():
    g = Grid(128, 8.0)
    H = Symbol.hilbert(g)
    w = power_weight(0.2, g)
    est = estimate_multiplier_norm(H, 3.0, w, budget=3, seed=5)
    sig, val = regenerate_witness(H, 3.0, w, est)
    assert val == pytest.approx(est.value, rel=1e-10)
    assert _hash(sig.values) == est.witness_hash


# ----------------------------------------------------------------- report


def _report(**kw):
    rep = ExperimentReport("theorem-a", {"n": 64, "period": 1.0}, {"drift_budget": 0.1}, **kw)
    rep.add("set=main|n=64|f=0", 1.0)
    rep.add("set=main|n=128|f=0", 1.05)
    return rep.finalize()


def test_report_json_roundtrip():
    rep = _report(seed=3)
    text = rep.to_json()
    back = ExperimentReport.from_json(text)
    assert back.to_json() == text
    d = json.loads(text)
    assert set(d) >= {"schema_version", "experiment", "grid", "params", "ratios", "envelope", "pass", "seed",
                      "runtime_ms"}
    assert d["pass"] is True and d["runtime_ms"] is None


def test_report_rejects_other_schema():
    d = _report().to_dict()
    d["schema_version"] = 99
    with pytest.raises(ValueError):
        ExperimentReport.from_dict(d)


def test_report_nonfinite_values():
    rep = ExperimentReport("carleson", {"n": 8, "period": 1.0}, {"p": 1.5})
    rep.add("B=1", 1.0)
    rep.add("B=2", math.inf)
    rep.finalize()
    back = ExperimentReport.from_json(rep.to_json())
    assert back.ratios[1][1] == math.inf


def test_label_helpers():
    assert parse_label("n=8|w=pow0.5") == {"n": "8", "w": "pow0.5"}
    rep = _report()
    assert envelopes_by(rep, "n") == {"64": 1.0, "128": 1.05}
    assert doubling_drift(rep) == pytest.approx(0.05)
    assert "PASS" in render(rep)


def test_drift_over_budget_fails():
    rep = ExperimentReport("theorem-a", {"n": 64, "period": 1.0}, {"drift_budget": 0.1})
    rep.add("set=main|n=64", 1.0)
    rep.add("set=main|n=128", 1.2)
    assert not rep.finalize().passed


def test_csv_output():
    assert _report().to_csv().splitlines()[0] == "label,value"


# -------------------------------------------------------------- families


def test_families_are_disjoint_and_seeded():
    for kind in fam.FAMILY_KINDS:
        a = fam.random_family(fam.rng_for(0, 1), 8.0, 1 / 16, kind)
        b = fam.random_family(fam.rng_for(0, 1), 8.0, 1 / 16, kind)
        assert a == b and len(a) >= 1
        assert all(-8.0 <= iv.lo and iv.hi <= 8.0 for iv in a)
    with pytest.raises(ValueError):
        fam.random_family(fam.rng_for(0), 8.0, 1.0, "nope")


def test_bandlimited_signal_is_grid_independent():
    fr, c = fam.random_bandlimited(fam.rng_for(1), 8.0, 2.0)
    g = Grid(64, 8.0)
    a = fam.trig_signal(g, fr, c)
    b = fam.trig_signal(g.refine(), fr, c)
    assert np.allclose(a.values, b.values[::2], atol=1e-10)


# ------------------------------------------------------------ experiments


def test_theorem_b_hypotheses():
    with pytest.raises(ex.HypothesisError, match=r"q ∈ \(1,2\)"):
        ex.verify_theorem_b(q=2.5)
    with pytest.raises(ex.HypothesisError):
        ex.verify_theorem_b(q=1.5, p=1.2)


def test_theorem_b_small_sweep_passes():
    rep = ex.verify_theorem_b(n=256, period=16.0, trials=6, q_ladder=(1.25, 1.5, 1.75))
    assert rep.passed
    ladder = envelopes_by(rep, "q", {"set": "ladder"})
    assert ladder["1.25"] <= ladder["1.5"] <= ladder["1.75"]
    assert recompute_pass(ExperimentReport.from_json(rep.to_json())) == rep.passed


def test_theorem_a_and_weak_and_fs():
    assert ex.verify_theorem_a(n=256, period=16.0, trials=2).passed
    assert ex.verify_theorem_b_weak(n=256, period=16.0, trials=3).passed
    assert ex.verify_fefferman_stein(n=128, period=16.0, trials=3).passed


def test_pointwise_g_flags_bad_families():
    rep = ex.verify_pointwise_g(n=256, period=16.0, trials=3, family="carleson", lam=8.0)
    assert any("outside" in note for note in rep.notes)


def test_carleson_small():
    up = ex.carleson_counterexample(1.5, (2, 4, 8), n=1024, period=16.0)
    assert up.passed
    flat = ex.carleson_counterexample(2.0, (2, 4, 8), n=1024, period=16.0)
    assert all(v == pytest.approx(1.0, abs=1e-10) for _, v in flat.ratios)
    with pytest.raises(ex.HypothesisError):
        ex.carleson_counterexample(1.5, (8, 4))
    with pytest.raises(ex.HypothesisError):
        ex.carleson_counterexample(1.5, (8, 1024), n=256, period=16.0)


def test_gap_sequences_and_rho():
    a = ex.gap_sequence("linear", 10, a0=1.0)
    assert np.allclose(np.diff(a), 2.0 ** np.arange(10))
    rep = ex.check_necessary_condition(ex.gap_sequence("arithmetic", 64), 3.0, 64)
    rho = dict(rep.ratios)
    # a_j = 1 + j, gaps 1: rho(k) = (1+k)^{4/3} / k
    assert rho["k=64"] == pytest.approx(65 ** (4 / 3) / 64, rel=1e-12)
    with pytest.raises(ex.HypothesisError):
        ex.check_necessary_condition([1.0, 3.0, 2.0], 3.0)
    with pytest.raises(ex.HypothesisError):
        ex.check_necessary_condition([0.0, 1.0], 3.0)


def test_lacunary_rho_closed_form():
    a = 2.0 ** np.arange(65)
    rep = ex.check_necessary_condition(a, 3.0, 64, expect="bounded", growth_budget=1.3)
    e = 4.0 / 3.0
    rho = dict(rep.ratios)
    k = 64
    closed = 2.0 ** (k * e) / sum(2.0 ** ((j - 1) * e) for j in range(1, k + 1))
    assert rho["k=64"] == pytest.approx(closed, rel=1e-12)
    assert rep.passed
