"""Lower bounds for weighted multiplier norms.

For ``p = 2`` without a weight the operator is diagonal in frequency and the
norm is ``max |m|``, witnessed by a plane wave.  Otherwise seeded random
band-limited starts are pushed uphill with Boyd's nonlinear power iteration
for ``l^p`` operator norms.  Either way the reported number is the ratio
attained by a concrete witness, so it is a lower bound and nothing more.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from ..lattice import SampledSignal, _check_same_grid
from ..operators import _forward, _inverse
from ..variation import Symbol
from ..weights import Weight

__all__ = ["NormEstimate", "estimate_multiplier_norm", "regenerate_witness"]


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str
    trials: int
    seed: int
    best_trial: int
    witness_hash: str


def _hash(v: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(v, dtype=complex).tobytes()).hexdigest()[:16]


def _dual(y: np.ndarray, r: float) -> np.ndarray:
    a = np.abs(y)
    with np.errstate(invalid="ignore", divide="ignore"):
        phase = np.where(a > 0, y / np.where(a > 0, a, 1.0), 0.0)
    return a ** (r - 1.0) * phase


def _lp(v: np.ndarray, p: float) -> float:
    top = np.max(np.abs(v))
    if top == 0:
        return 0.0
    return float(top * np.sum((np.abs(v) / top) ** p) ** (1.0 / p))


class _Conjugated:
    """``D T D^{-1}`` on plain ``l^p`` with ``D = (w h)^{1/p}``."""

    def __init__(self, m: Symbol, p: float, w: Weight | None):
        self.g = m.grid
        self.m = m.values
        wh = (np.ones(self.g.n) if w is None else w.values) * self.g.h
        self.d = wh ** (1.0 / p)

    def apply(self, u):
        f = u / self.d
        return self.d * _inverse(self.m * _forward(f, self.g), self.g)

    def adjoint(self, v):
        f = self.d * v
        return _inverse(np.conj(self.m) * _forward(f, self.g), self.g) / self.d

    def signal(self, u) -> np.ndarray:
        return u / self.d


def _random_start(rng: np.random.Generator, n: int) -> np.ndarray:
    # random band-limited spectrum: a random band, random complex coefficients
    width = int(rng.integers(2, max(3, n // 4)))
    centre = int(rng.integers(-n // 2, n // 2))
    spec = np.zeros(n, dtype=complex)
    k = (centre + np.arange(width)) % n
    spec[k] = rng.normal(size=width) + 1j * rng.normal(size=width)
    return np.fft.ifft(spec)


def _ascend(op: _Conjugated, u: np.ndarray, p: float, iters: int, tol: float) -> tuple[float, np.ndarray]:
    pc = p / (p - 1.0)
    u = u / _lp(u, p)
    best = _lp(op.apply(u), p)
    for _ in range(iters):
        y = op.apply(u)
        z = op.adjoint(_dual(y, p))
        nu = _dual(z, pc)
        norm = _lp(nu, p)
        if norm == 0:
            break
        nu = nu / norm
        val = _lp(op.apply(nu), p)
        if val <= best * (1 + tol):
            if val > best:
                best, u = val, nu
            break
        best, u = val, nu
    return best, u


def _trial(op: _Conjugated, p: float, seed: int, t: int, iters: int, tol: float):
    rng = np.random.default_rng([seed, t])
    return _ascend(op, _random_start(rng, op.g.n), p, iters, tol)


def estimate_multiplier_norm(m: Symbol, p: float, w: Weight | None = None, budget: int = 16, seed: int = 0,
                             iters: int = 200, tol: float = 1e-10) -> NormEstimate:
    """Certified lower bound for ``||T_m||`` on ``L^p(w)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if w is not None:
        _check_same_grid(m.grid, w.grid)
    unweighted = w is None or np.all(w.values == w.values[0])
    if p == 2 and unweighted:
        k = int(np.argmax(np.abs(m.values)))
        spec = np.zeros(m.grid.n, dtype=complex)
        spec[k] = 1.0
        wave = SampledSignal(m.grid, _inverse(spec, m.grid))
        out = _inverse(m.values * _forward(wave.values, m.grid), m.grid)
        value = float(np.linalg.norm(out) / np.linalg.norm(wave.values))
        return NormEstimate(value, "plane-wave", 1, seed, 0, _hash(wave.values))
    if p == 1:
        raise ValueError("random ascent needs p > 1")
    op = _Conjugated(m, p, w)
    best, arg, witness = -math.inf, 0, None
    for t in range(budget):
        val, u = _trial(op, p, seed, t, iters, tol)
        if val > best:
            best, arg, witness = val, t, u
    return NormEstimate(float(best), "power-iteration" if p == 2 else "random-ascent", budget, seed, arg,
                        _hash(op.signal(witness)))


def regenerate_witness(m: Symbol, p: float, w: Weight | None, est: NormEstimate, iters: int = 200,
                       tol: float = 1e-10) -> tuple[SampledSignal, float]:
    """Rebuild the witness of ``est`` from its seed; returns it with its attained ratio."""
    if est.method == "plane-wave":
        k = int(np.argmax(np.abs(m.values)))
        spec = np.zeros(m.grid.n, dtype=complex)
        spec[k] = 1.0
        f = _inverse(spec, m.grid)
        out = _inverse(m.values * _forward(f, m.grid), m.grid)
        return SampledSignal(m.grid, f), float(np.linalg.norm(out) / np.linalg.norm(f))
    op = _Conjugated(m, p, w)
    val, u = _trial(op, p, est.seed, est.best_trial, iters, tol)
    return SampledSignal(m.grid, op.signal(u)), val
