"""Maximal operators on the torus and the Rubio de Francia iteration.

Windows are runs of ``ell`` consecutive cells with periodic wrap and
``1 <= ell <= n/2``.  ``Mf(x)`` is the largest window average of ``|f|`` over
windows containing cell ``x``.  In ``"dyadic"`` mode only lengths ``2^k`` are
used (all positions), which keeps the cost at ``O(n log n)`` for ``M`` and
``O(n^2)`` for ``M#``.

The iteration needs an upper bound for the norm of ``M`` on the weighted
space.  Because ``M`` is sublinear, ``Mf <= K|f|`` with the circulant matrix
``K[x, i] = M(delta_i)(x)``; a Riesz-Thorin bound for ``K`` conjugated by the
weight is a certified bound for ``M`` and for all its iterates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from .lattice import SampledSignal, _check_same_grid
from .weights import Weight, _ap_scan, ap_constant, weighted_norm

__all__ = [
    "MaximalConfig",
    "hl_maximal",
    "sharp_maximal",
    "maximal_kernel",
    "maximal_norm_bound",
    "a1_ratio",
    "BuckleyMeasurement",
    "measure_buckley",
    "RdfResult",
    "RdfConvergenceError",
    "rdf_iterate",
    "rdf_dual_iterate",
    "FactorizedWeight",
    "factorized_weight",
]


@dataclass(frozen=True)
class MaximalConfig:
    mode: str = "exact"  # or "dyadic"
    chunk: int = 1 << 20  # cells per block when scanning oscillations

    def __post_init__(self):
        if self.mode not in ("exact", "dyadic"):
            raise ValueError(f"unknown window mode {self.mode!r}")

    def lengths(self, n: int) -> list[int]:
        if self.mode == "exact":
            return list(range(1, n // 2 + 1))
        return [2**k for k in range(int(math.log2(n)))]


EXACT = MaximalConfig()


def _trailing_max(a: np.ndarray, ell: int) -> np.ndarray:
    """``out[x] = max(a[x-ell+1 .. x])`` with periodic wrap."""
    if ell == 1:
        return a.copy()
    centred = maximum_filter1d(a, size=ell, mode="wrap")
    return np.roll(centred, (ell - 1) - ell // 2)


def _window_means(v: np.ndarray, ell: int) -> np.ndarray:
    n = len(v)
    c = np.concatenate([[0.0], np.cumsum(np.concatenate([v, v[:ell]]))])
    return (c[ell:ell + n] - c[:n]) / ell


def hl_maximal(f: SampledSignal, cfg: MaximalConfig = EXACT) -> SampledSignal:
    a = f.abs
    n = len(a)
    out = np.zeros(n)
    for ell in cfg.lengths(n):
        np.maximum(out, _trailing_max(_window_means(a, ell), ell), out=out)
    return SampledSignal(f.grid, out)


def _window_oscillations(v: np.ndarray, ell: int, chunk: int) -> np.ndarray:
    """``avg |v - avg v|`` over each periodic window, indexed by start cell."""
    n = len(v)
    ext = np.concatenate([v, v[:ell]])
    out = np.empty(n)
    rows = max(1, chunk // ell)
    view = np.lib.stride_tricks.sliding_window_view(ext, ell)
    for s in range(0, n, rows):
        block = view[s:min(n, s + rows)]
        mu = block.mean(axis=1, keepdims=True)
        out[s:s + len(block)] = np.abs(block - mu).mean(axis=1)
    return out


def sharp_maximal(f: SampledSignal, cfg: MaximalConfig = EXACT) -> SampledSignal:
    """``M#f(x) = sup_{Q containing x} avg_Q |f - f_Q|``."""
    v = f.values if np.iscomplexobj(f.values) and np.any(f.values.imag) else f.values.real
    n = len(v)
    out = np.zeros(n)
    for ell in cfg.lengths(n):
        if ell == 1:
            continue
        np.maximum(out, _trailing_max(_window_oscillations(v, ell, cfg.chunk), ell), out=out)
    return SampledSignal(f.grid, out)


def maximal_kernel(n: int, cfg: MaximalConfig = EXACT) -> np.ndarray:
    """``k[d] = M(delta_0)(d)``; the majorant matrix is ``K[x, i] = k[(x - i) mod n]``."""
    d = np.arange(n)
    dist = np.minimum(d, n - d)
    lengths = np.asarray(cfg.lengths(n))
    k = np.zeros(n)
    for i, dd in enumerate(dist):
        ok = lengths >= dd + 1
        if np.any(ok):
            k[i] = 1.0 / lengths[ok].min()
    return k


def _circ_apply(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.real(np.fft.ifft(np.fft.fft(k) * np.fft.fft(v)))


def _circ_apply_t(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.real(np.fft.ifft(np.conj(np.fft.fft(k)) * np.fft.fft(v)))


def _riesz_thorin(k: np.ndarray, left: np.ndarray, right: np.ndarray, r: float) -> float:
    """Bound for ``diag(left) C_k diag(right)`` on ``l^r`` (``C_k`` circulant, entries >= 0)."""
    # FFT rounding is ~1e-15 relative; pad to keep the bound an upper bound
    rows = np.max(left * _circ_apply(k, right)) * (1 + 1e-9)
    cols = np.max(right * _circ_apply_t(k, left)) * (1 + 1e-9)
    return float(cols ** (1.0 / r) * rows ** (1.0 - 1.0 / r))


def maximal_norm_bound(w: Weight | None, p: float, n: int | None = None, cfg: MaximalConfig = EXACT,
                       dual: bool = False) -> float:
    """Certified upper bound for ``||M||`` on ``L^p(w)``.

    With ``dual=True`` returns the bound for ``S h = M(h w)/w`` on
    ``L^p(w)`` instead.
    """
    if w is None:
        wv = np.ones(n)
    else:
        wv = w.values
    n = len(wv)
    k = maximal_kernel(n, cfg)
    if dual:
        # conjugated: W^{1/p} W^{-1} K W W^{-1/p}
        left, right = wv ** (1.0 / p - 1.0), wv ** (1.0 - 1.0 / p)
    else:
        left, right = wv ** (1.0 / p), wv ** (-1.0 / p)
    return _riesz_thorin(k, left, right, p)


def a1_ratio(u: SampledSignal | Weight, cfg: MaximalConfig = EXACT) -> float:
    """``max_x Mu(x) / u(x)`` for a positive function."""
    sig = SampledSignal(u.grid, u.values) if isinstance(u, Weight) else u
    vals = sig.abs
    if np.any(vals <= 0):
        return math.inf
    return float(np.max(hl_maximal(sig, cfg).real / vals))


@dataclass(frozen=True)
class BuckleyMeasurement:
    p: float
    measured: float
    witness: str
    ap_constant: float
    buckley_power: float  # [w]_{A_p}^{p'/p}

    @property
    def implied_constant(self) -> float:
        """Lower envelope for ``C_p`` in ``||M|| <= C_p [w]^{p'/p}``."""
        return self.measured / self.buckley_power


def measure_buckley(w: Weight, p: float, cfg: MaximalConfig = EXACT, seed: int = 0, trials: int = 8) -> BuckleyMeasurement:
    """Empirical lower bound for ``||M||`` on ``L^p(w)`` from adversarial inputs."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    g = w.grid
    n = g.n
    sigma = w.values ** (-1.0 / (p - 1.0))
    candidates: list[tuple[str, np.ndarray]] = [("const", np.ones(n))]
    apc, (i, j) = _ap_scan(w, p, periodic=True)
    idx = np.arange(i, j) % n
    box = np.zeros(n)
    box[idx] = sigma[idx]
    candidates.append((f"sigma_box[{i},{j})", box))
    centre = n // 2
    for ell in (1, 2, 4, 8, 16, 64, n // 8):
        sl = slice(centre - ell // 2, centre - ell // 2 + ell)
        ind = np.zeros(n)
        ind[sl] = 1.0
        candidates.append((f"indicator{ell}", ind))
        sb = np.zeros(n)
        sb[sl] = sigma[sl]
        candidates.append((f"sigma_indicator{ell}", sb))
    for pos in (int(np.argmin(w.values)), int(np.argmax(w.values))):
        spike = np.zeros(n)
        spike[pos] = 1.0
        candidates.append((f"spike{pos}", spike))
    rng = np.random.default_rng(seed)
    for t in range(trials):
        candidates.append((f"random{t}", rng.random(n) ** 4))
    best, arg = 0.0, "const"
    for name, f in candidates:
        sig = SampledSignal(g, f)
        ratio = weighted_norm(hl_maximal(sig, cfg), p, w) / weighted_norm(sig, p, w)
        if ratio > best:
            best, arg = ratio, name
    pconj = p / (p - 1)
    return BuckleyMeasurement(p, best, arg, apc, apc ** (pconj / p))


class RdfConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RdfResult:
    """Output of the Rubio de Francia iteration with its certificates."""

    signal: SampledSignal
    norm_bound: float  # the ||M|| (or ||S||) bound used in the series
    terms: int
    tail_bound: float  # sup-norm bound of the truncated geometric tail
    majorizes: bool  # (a1) h <= Rh
    norm_ratio: float  # (a2) ||Rh|| / ||h||, certified <= 2
    a1_ratio: float  # (a3) sup M(Rh)/Rh  (for the dual: of (R'h) w)
    a1_slack: float  # max of M(Rh) - 2B Rh, should be <= tail slack

    @property
    def values(self) -> np.ndarray:
        return self.signal.values.real


def _series(h: np.ndarray, step, bound: float, sup_gain: float, max_terms: int, tol: float):
    """Partial sum of ``sum_j step^j h / (2 bound)^j`` and a sup-norm bound on the dropped tail.

    ``sup_gain`` bounds ``||step||`` on ``l^inf``; the tail is geometric with
    ratio ``sup_gain / (2 bound)``.
    """
    rho = sup_gain / (2.0 * bound)
    acc = h.copy()
    term = h.copy()
    scale = 1.0
    terms = max_terms
    for j in range(1, max_terms):
        term = step(term)
        scale /= 2.0 * bound
        acc += term * scale
        if np.max(term) * scale < tol * max(np.max(h), 1e-300):
            terms = j + 1
            break
    last = float(np.max(term) * scale)
    tail = last * rho / (1.0 - rho) if rho < 1 else math.inf
    return acc, terms, tail


def _nonnegative(h: SampledSignal) -> np.ndarray:
    if np.any(h.values.imag != 0) or np.any(h.values.real < 0):
        raise ValueError("Rubio de Francia iteration needs a nonnegative real input")
    return h.values.real.copy()


def rdf_iterate(h: SampledSignal, w: Weight | None, p: float, max_terms: int = 40, tol: float = 1e-14,
                cfg: MaximalConfig = EXACT, norm_bound: float | None = None) -> RdfResult:
    """``Rh = sum_j M^j h / (2 ||M||)^j`` on ``L^p(w)``."""
    hv = _nonnegative(h)
    g = h.grid
    if w is not None:
        _check_same_grid(g, w.grid)
    B = maximal_norm_bound(w, p, g.n, cfg) if norm_bound is None else norm_bound

    def step(v):
        return hl_maximal(SampledSignal(g, v), cfg).real

    acc, terms, tail = _series(hv, step, B, 1.0, max_terms, tol)
    if tail > 1e-10 * max(np.max(hv), 1e-300):
        raise RdfConvergenceError(f"series truncated at {terms} terms with tail {tail:.3e}")
    R = SampledSignal(g, acc)
    MR = step(acc)
    return RdfResult(
        signal=R,
        norm_bound=B,
        terms=terms,
        tail_bound=tail,
        majorizes=bool(np.all(acc >= hv)),
        norm_ratio=weighted_norm(R, p, w) / weighted_norm(h, p, w),
        a1_ratio=float(np.max(MR / acc)),
        a1_slack=float(np.max(MR - 2 * B * acc)),
    )


def rdf_dual_iterate(h: SampledSignal, w: Weight, p: float, max_terms: int = 40, tol: float = 1e-14,
                     cfg: MaximalConfig = EXACT, norm_bound: float | None = None) -> RdfResult:
    """``R'h = sum_j S^j h / (2 ||S||)^j`` with ``S h = M(h w)/w`` on ``L^{p'}(w)``."""
    hv = _nonnegative(h)
    g = h.grid
    pc = p / (p - 1.0)
    wv = w.values
    B = maximal_norm_bound(w, pc, g.n, cfg, dual=True) if norm_bound is None else norm_bound

    def step(v):
        return hl_maximal(SampledSignal(g, v * wv), cfg).real / wv

    k = maximal_kernel(g.n, cfg)
    gain = float(np.max(_circ_apply(k, wv) / wv)) * (1 + 1e-9)
    acc, terms, tail = _series(hv, step, B, gain, max_terms, tol)
    if tail > 1e-10 * max(np.max(hv), 1e-300):
        raise RdfConvergenceError(f"dual series truncated at {terms} terms with tail {tail:.3e}")
    R = SampledSignal(g, acc)
    Rw = acc * wv
    MRw = hl_maximal(SampledSignal(g, Rw), cfg).real
    return RdfResult(
        signal=R,
        norm_bound=B,
        terms=terms,
        tail_bound=tail,
        majorizes=bool(np.all(acc >= hv)),
        norm_ratio=weighted_norm(R, pc, w) / weighted_norm(h, pc, w),
        a1_ratio=float(np.max(MRw / Rw)),
        a1_slack=float(np.max(MRw - 2 * B * Rw)),
    )


@dataclass(frozen=True)
class FactorizedWeight:
    weight: Weight
    a2_constant: float
    a1_left: float  # [Rg]_{A_1} ratio
    a1_right: float  # [(R'h) w]_{A_1} ratio

    @property
    def product_bound(self) -> float:
        return self.a1_left * self.a1_right

    @property
    def holds(self) -> bool:
        return self.a2_constant <= self.product_bound * (1 + 1e-9)


def factorized_weight(g: SampledSignal, h: SampledSignal, w: Weight, p: float,
                      cfg: MaximalConfig = EXACT) -> FactorizedWeight:
    """``w_{g,h} = (R g)^{-1} (R' h) w`` with its reverse-factorization certificate.

    The A_2 constant is scanned over the same windows as ``M`` (periodic,
    length at most ``n/2``), which is the window set the certificate covers.
    """
    Rg = rdf_iterate(g, w, p, cfg=cfg)
    Rh = rdf_dual_iterate(h, w, p, cfg=cfg)
    rg = Rg.values
    if np.min(rg) <= 1e-300 * max(np.max(rg), 1.0):
        raise ValueError("R g vanishes numerically; cannot divide")
    wgh = Weight(w.grid, Rh.values * w.values / rg)
    a2 = ap_constant(wgh, 2.0, periodic=True, lengths=cfg.lengths(w.grid.n))
    return FactorizedWeight(wgh, a2, Rg.a1_ratio, Rh.a1_ratio)
