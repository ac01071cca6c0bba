"""Verification sweeps and counterexample probes.

Boundedness claims are tested as envelope stability: the largest observed
ratio on a grid and on its refinement (same period, twice the samples) must
agree to within a drift budget.  Unboundedness is tested as growth of a ratio
sequence.  Each sweep returns an :class:`ExperimentReport` whose pass flag is
recomputable from its ratio table.
"""
from __future__ import annotations

import math
import time
import warnings
from typing import Callable, Sequence

import numpy as np

from ..lattice import FreqInterval, Grid, IntervalFamily, SampledSignal, well_distributed_constant
from ..maximal import MaximalConfig, hl_maximal, sharp_maximal
from ..operators import SmoothBump, apply_multiplier, smooth_square_function, square_function, test_function
from ..variation import vq_dyadic
from ..weights import ap_constant, weak_norm, weighted_norm
from . import families as fam
from .report import ExperimentReport

__all__ = [
    "HypothesisError",
    "verify_theorem_a",
    "verify_theorem_b",
    "verify_theorem_b_weak",
    "verify_fefferman_stein",
    "verify_pointwise_g",
    "carleson_counterexample",
    "gap_sequence",
    "check_necessary_condition",
]


class HypothesisError(ValueError):
    """Parameters outside the range a theorem speaks about."""


def _timed(report: ExperimentReport, t0: float, timing: bool) -> ExperimentReport:
    if timing:
        report.runtime_ms = round((time.perf_counter() - t0) * 1e3, 3)
    return report.finalize()


def _grids(n: int, period: float) -> list[Grid]:
    g = Grid(n, period)
    return [g, g.refine()]


def verify_theorem_a(q: float = 1.5, p: float = 2.0, *, weights: str = "power", n: int = 1024,
                     period: float = 64.0, trials: int = 8, seed: int = 0, budget: float = 8.0,
                     timing: bool = False) -> ExperimentReport:
    """Ratios ``||T_m f||_{p,w} / (||m||_{V_q(D)} ||f||_{p,w})`` for ``w`` in ``A_{p/q}``."""
    if not (1 < q <= 2):
        raise HypothesisError("theorem-a needs q ∈ (1,2]")
    if p < q:
        raise HypothesisError("theorem-a needs p >= q")
    t0 = time.perf_counter()
    grids = _grids(n, period)
    rep = ExperimentReport("theorem-a", {"n": n, "period": period},
                           {"q": q, "p": p, "weights": weights, "trials": trials, "ap_budget": budget,
                            "drift_budget": 0.10}, seed=seed)
    band = grids[0].nyquist[1] / 2
    coarse_w = fam.weight_family(weights, grids[0])
    apq = {k: (ap_constant(w, p / q) if p > q else 1.0) for k, w in coarse_w.items()}
    keep = [k for k, v in apq.items() if p == q or v <= budget]
    if p == q:
        keep = [k for k in keep if k == "pow0"] or keep[:1]
        rep.notes.append("p = q: A_1 regime, only the unweighted case is swept")
    rep.params["weights_used"] = {k: apq[k] for k in keep}
    for g in grids:
        ws = fam.weight_family(weights, g)
        syms = fam.symbol_family(g, seed)
        vq = {k: vq_dyadic(s, q) for k, s in syms.items()}
        for t in range(trials):
            freqs, coeffs = fam.random_bandlimited(fam.rng_for(seed, t), period, band)
            f = fam.trig_signal(g, freqs, coeffs)
            for sname, sym in syms.items():
                tf = apply_multiplier(sym, f)
                for wname in keep:
                    w = ws[wname]
                    r = weighted_norm(tf, p, w) / (vq[sname] * weighted_norm(f, p, w))
                    rep.add(f"set=main|n={g.n}|m={sname}|w={wname}|f={t}", r)
    return _timed(rep, t0, timing)


def verify_theorem_b(q: float = 1.5, p: float = 3.0, *, weights: str = "power", n: int = 2048,
                     period: float = 64.0, trials: int = 200, signals: int = 2, seed: int = 0,
                     budget: float = 8.0, q_ladder: Sequence[float] | None = None,
                     kinds: Sequence[str] = fam.FAMILY_KINDS, timing: bool = False) -> ExperimentReport:
    """Envelope of ``||S_q f||_{p,w} / ||f||_{p,w}`` over random disjoint families."""
    if not (1 < q < 2):
        raise HypothesisError("theorem-b needs q ∈ (1,2)")
    if not p > q:
        raise HypothesisError("theorem-b needs p > q")
    for qq in q_ladder or ():
        if not (1 < qq < 2):
            raise HypothesisError("q-ladder entries must satisfy q ∈ (1,2)")
    t0 = time.perf_counter()
    grids = _grids(n, period)
    rep = ExperimentReport("theorem-b", {"n": n, "period": period},
                           {"q": q, "p": p, "weights": weights, "trials": trials, "signals": signals,
                            "ap_budget": budget, "kinds": list(kinds), "drift_budget": 0.10,
                            "q_ladder": list(q_ladder) if q_ladder else []}, seed=seed)
    band = grids[0].nyquist[1] / 2
    step = grids[0].dxi
    coarse_w = fam.weight_family(weights, grids[0])
    apq = {k: ap_constant(w, p / q) for k, w in coarse_w.items()}
    keep = [k for k, v in apq.items() if v <= budget]
    rep.params["weights_used"] = {k: apq[k] for k in keep}
    fams = [fam.random_family(fam.rng_for(seed, 1, t), band, step, kinds[t % len(kinds)]) for t in range(trials)]
    sigs = [fam.random_bandlimited(fam.rng_for(seed, 2, s), period, band) for s in range(signals)]
    qs_all = [("main", q)] + [("ladder", qq) for qq in (q_ladder or ())]
    for gi, g in enumerate(grids):
        ws = {k: fam.weight_family(weights, g)[k] for k in keep}
        fs = [fam.trig_signal(g, fr, c) for fr, c in sigs]
        fnorm = {(s, k): weighted_norm(fs[s], p, ws[k]) for s in range(len(fs)) for k in keep}
        for t, family in enumerate(fams):
            for s, f in enumerate(fs):
                for tag, qq in qs_all:
                    if tag == "ladder" and gi > 0:
                        continue
                    sq = square_function(family, f, qq)
                    for k in keep:
                        lbl = f"set={tag}|n={g.n}|q={qq:g}|fam={t}|w={k}|f={s}"
                        rep.add(lbl, weighted_norm(sq, p, ws[k]) / fnorm[(s, k)])
    return _timed(rep, t0, timing)


def verify_theorem_b_weak(*, n: int = 2048, period: float = 64.0, trials: int = 20, seed: int = 0,
                          weights: str = "a1", timing: bool = False) -> ExperimentReport:
    """``||S_2 f||_{L^{2,oo}_w} / ||f||_{2,w}`` for Carleson-type families and ``A_1`` weights."""
    t0 = time.perf_counter()
    grids = _grids(n, period)
    rep = ExperimentReport("theorem-b-weak", {"n": n, "period": period},
                           {"weights": weights, "trials": trials, "drift_budget": 0.10}, seed=seed)
    band = grids[0].nyquist[1] / 2
    unit = max(1.0, 2 * band / 32)
    bounds = [(lo, lo + unit) for lo in np.arange(-band, band - unit / 2, unit)]
    carleson = IntervalFamily.from_bounds(bounds)
    rep.params["family"] = f"{len(carleson)} consecutive intervals of length {unit:g}"
    for g in grids:
        ws = fam.weight_family(weights, g)
        for t in range(trials):
            fr, c = fam.random_bandlimited(fam.rng_for(seed, 3, t), period, band)
            f = fam.trig_signal(g, fr, c)
            sq = square_function(carleson, f, 2.0)
            for k, w in ws.items():
                rep.add(f"set=main|n={g.n}|w={k}|f={t}", weak_norm(sq, 2, w) / weighted_norm(f, 2, w))
    return _timed(rep, t0, timing)


def verify_fefferman_stein(p: float = 2.0, *, n: int = 512, period: float = 64.0, trials: int = 20,
                           seed: int = 0, weights: str = "power", budget: float = 8.0,
                           timing: bool = False) -> ExperimentReport:
    """``||Mf||_{p,w} / ||M#f||_{p,w}`` for compactly supported ``f`` and ``w`` in ``A_p``."""
    t0 = time.perf_counter()
    grids = _grids(n, period)
    cfg = MaximalConfig("dyadic")
    rep = ExperimentReport("fefferman-stein", {"n": n, "period": period},
                           {"p": p, "weights": weights, "trials": trials, "window_mode": cfg.mode,
                            "ap_budget": budget, "drift_budget": 0.10}, seed=seed)
    band = grids[0].nyquist[1] / 4
    coarse = fam.weight_family(weights, grids[0])
    keep = [k for k, w in coarse.items() if ap_constant(w, p) <= budget]
    for g in grids:
        ws = fam.weight_family(weights, g)
        for t in range(trials):
            f = SampledSignal.from_function(g, fam.random_bump_signal(fam.rng_for(seed, 4, t), period, band))
            mf, sf = hl_maximal(f, cfg), sharp_maximal(f, cfg)
            for k in keep:
                rep.add(f"set=main|n={g.n}|w={k}|f={t}", weighted_norm(mf, p, ws[k]) / weighted_norm(sf, p, ws[k]))
    return _timed(rep, t0, timing)


def verify_pointwise_g(lam: float = 2.0, *, n: int = 1024, period: float = 32.0, trials: int = 100,
                       seed: int = 0, family: str = "whitney", timing: bool = False) -> ExperimentReport:
    """``max_x M#(Gf)(x) / M(|f|^2)(x)^{1/2}`` over random compactly supported ``f``.

    ``M`` uses every window length; ``M#`` uses dyadic lengths only, which can
    only lower the ratio's numerator relative to the full operator.
    """
    t0 = time.perf_counter()
    bump = SmoothBump(lam)
    grids = _grids(n, period)
    sharp_cfg = MaximalConfig("dyadic")
    rep = ExperimentReport("pointwise-g", {"n": n, "period": period},
                           {"lam": lam, "trials": trials, "family": family, "sharp_windows": "dyadic",
                            "drift_budget": 0.10}, seed=seed)
    band = grids[0].nyquist[1] / 2
    step = grids[0].dxi
    flagged = 0
    for t in range(trials):
        rng = fam.rng_for(seed, 5, t)
        if family == "whitney":
            fset = fam.whitney_family(rng, band, step)
        else:
            fset = fam.random_family(rng, band, step, family)
        overlap = well_distributed_constant(fset, lam, grids[0])
        out_of_hypothesis = family != "whitney" and overlap > 5
        flagged += out_of_hypothesis
        fn = fam.random_bump_signal(fam.rng_for(seed, 6, t), period, band / 2)
        for g in grids:
            f = SampledSignal.from_function(g, fn)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                gf = smooth_square_function(fset, f, bump)
            num = sharp_maximal(gf, sharp_cfg).real
            den = np.sqrt(hl_maximal(SampledSignal(g, f.abs**2)).real)
            ratio = float(np.max(num / np.where(den > 0, den, np.inf)))
            rep.add(f"set=main|n={g.n}|f={t}|overlap={overlap}", ratio)
    if flagged:
        rep.notes.append(f"{flagged} families exceed overlap 5 for lam={lam}: outside the well-distributed hypothesis")
    return _timed(rep, t0, timing)


def carleson_counterexample(p: float = 1.5, bandwidths: Sequence[int] = (8, 16, 32, 64), *, n: int = 8192,
                            period: float = 32.0, seed: int = 0, growth_budget: float = 1.2,
                            timing: bool = False) -> ExperimentReport:
    """``||S f||_p / ||f||_p`` for ``f`` with ``f^ = chi_[0,B)`` and the unit family ``{[k, k+1)}``."""
    if not p > 1:
        raise HypothesisError("need p > 1")
    bw = list(bandwidths)
    if any(b <= a for a, b in zip(bw, bw[1:])):
        raise HypothesisError("bandwidths must increase")
    t0 = time.perf_counter()
    g = Grid(n, period)
    if bw[-1] > g.nyquist[1]:
        raise HypothesisError(f"bandwidth {bw[-1]} exceeds the grid Nyquist limit {g.nyquist[1]}")
    rep = ExperimentReport("carleson", {"n": n, "period": period},
                           {"p": p, "bandwidths": bw, "growth_budget": growth_budget,
                            "regime": "unbounded (p < 2)" if p < 2 else "bounded (p >= 2)"}, seed=seed)
    for b in bw:
        f = test_function(FreqInterval(0.0, float(b)), g)
        family = IntervalFamily.from_bounds((float(k), float(k + 1)) for k in range(b))
        rep.add(f"B={b}", weighted_norm(square_function(family, f, 2.0), p) / weighted_norm(f, p))
    return _timed(rep, t0, timing)


PSI = {
    "sqrt": math.sqrt,
    "log": lambda s: math.log1p(s),
    "linear": lambda s: s,
    "arithmetic": lambda s: 0.0,
}


def gap_sequence(psi: str | Callable[[float], float], k_max: int, lam: float = 2.0, a0: float = 1.0) -> np.ndarray:
    """``a_0, a_1, ...`` with ``a_{j+1} - a_j = lam^{psi(j)}``; ``psi="linear"`` is lacunary, ``"arithmetic"`` has unit gaps."""
    fn = PSI[psi] if isinstance(psi, str) else psi
    gaps = np.array([lam ** fn(j) for j in range(k_max)])
    return np.concatenate([[a0], a0 + np.cumsum(gaps)])


def check_necessary_condition(a: Sequence[float], p: float = 3.0, k_max: int | None = None, *,
                              growth_budget: float = 2.0, expect: str = "growth",
                              label: str = "custom", timing: bool = False) -> ExperimentReport:
    """``rho(k) = a_k^{2/p'} / sum_{j<=k} (a_j - a_{j-1})^{2/p'}`` for ``k = 1..k_max``.

    Boundedness of the square function of ``{(-a_0, a_0)} U {+-[a_{j-1}, a_j)}`` on
    ``L^{p'}`` forces ``rho`` to stay bounded; the report passes when ``rho``
    grows by ``growth_budget`` from ``k_max/8`` to ``k_max`` (``expect="growth"``)
    or, for a control sequence, when it grows by less (``expect="bounded"``).
    """
    if expect not in ("growth", "bounded"):
        raise HypothesisError("expect must be 'growth' or 'bounded'")
    t0 = time.perf_counter()
    a = np.asarray(a, dtype=float)
    if not p > 2:
        raise HypothesisError("the necessary condition is stated for p > 2")
    if a[0] <= 0 or np.any(np.diff(a) <= 0):
        raise HypothesisError("sequence must be positive and strictly increasing")
    k_max = len(a) - 1 if k_max is None else k_max
    if k_max > len(a) - 1:
        raise HypothesisError("sequence shorter than k_max")
    e = 2.0 / (p / (p - 1.0))
    gaps = np.diff(a[: k_max + 1]) ** e
    rho = a[1: k_max + 1] ** e / np.cumsum(gaps)
    rep = ExperimentReport("equ2", {"n": 0, "period": 0.0},
                           {"p": p, "k_max": k_max, "sequence": label, "growth_budget": growth_budget,
                            "expect": expect})
    for k, r in enumerate(rho, start=1):
        rep.add(f"k={k}", r)
    return _timed(rep, t0, timing)
