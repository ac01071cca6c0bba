"""q-variation of symbols and step-function decompositions.

Symbols are piecewise constant between frequency samples, so the supremum
over partitions of an interval is a maximum over increasing subsequences of
the in-interval samples.  That maximum is found by an ``O(k^2)`` dynamic
programme.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lattice import FreqInterval, Grid, _check_same_grid, dyadic_decomposition

__all__ = [
    "Symbol",
    "StepAtom",
    "AtomicDecomposition",
    "var_q",
    "var_q_samples",
    "vq_norm",
    "vq_dyadic",
    "decompose_rp",
    "project_symbol",
    "step_norm",
]


@dataclass(frozen=True, eq=False)
class Symbol:
    """Samples of a multiplier ``m`` on ``grid.freqs`` (FFT order)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} symbol samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("symbol contains non-finite samples")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "Symbol":
        return cls(grid, func(grid.freqs))

    @classmethod
    def constant(cls, grid: Grid, c: complex = 1.0) -> "Symbol":
        return cls(grid, np.full(grid.n, c, dtype=complex))

    @classmethod
    def hilbert(cls, grid: Grid) -> "Symbol":
        return cls(grid, -1j * np.sign(grid.freqs))

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def restrict(self, interval: FreqInterval) -> tuple[np.ndarray, np.ndarray]:
        """In-interval frequencies and samples, sorted by frequency."""
        xi = self.grid.freqs
        idx = np.nonzero(interval.contains(xi))[0]
        idx = idx[np.argsort(xi[idx], kind="stable")]
        return xi[idx], self.values[idx]

    def to_csv(self, path) -> None:
        order = np.argsort(self.grid.freqs, kind="stable")
        data = np.column_stack([self.grid.freqs[order], self.values.real[order], self.values.imag[order]])
        np.savetxt(path, data, delimiter=",", header="xi,re,im", comments="")

    @classmethod
    def from_csv(cls, path, grid: Grid) -> "Symbol":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        lookup = dict(zip(np.round(data[:, 0] * grid.period).astype(int), data[:, 1] + 1j * data[:, 2]))
        keys = np.round(grid.freqs * grid.period).astype(int)
        return cls(grid, np.array([lookup[k] for k in keys]))


def var_q_samples(values, q: float) -> float:
    """Exact ``q``-variation of a finite sample sequence."""
    v = np.asarray(values, dtype=complex)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    k = len(v)
    if k < 2:
        raise ValueError("q-variation needs at least two samples")
    if q == 1:
        return float(np.sum(np.abs(np.diff(v))))
    best = np.zeros(k)
    for j in range(1, k):
        best[j] = np.max(best[:j] + np.abs(v[j] - v[:j]) ** q)
    return float(best[-1] ** (1.0 / q))


def var_q(m: Symbol, interval: FreqInterval, q: float) -> float:
    _, v = m.restrict(interval)
    if len(v) < 2:
        raise ValueError(f"interval [{interval.lo}, {interval.hi}) holds {len(v)} grid sample(s); need >= 2")
    return var_q_samples(v, q)


def vq_norm(m: Symbol, interval: FreqInterval, q: float) -> float:
    """``sup_I |m| + Var_q(m; I)``."""
    _, v = m.restrict(interval)
    if len(v) < 2:
        raise ValueError(f"interval [{interval.lo}, {interval.hi}) holds {len(v)} grid sample(s); need >= 2")
    return float(np.max(np.abs(v))) + var_q_samples(v, q)


def vq_dyadic(m: Symbol, q: float, grid: Grid | None = None) -> float:
    """``max`` of the block norms over the resolvable dyadic blocks.

    Blocks holding a single sample contribute ``|m|`` there.  The merged
    low-frequency block is not a dyadic block; each of its samples sits in its
    own unresolved block and contributes ``|m(xi)|``.
    """
    grid = m.grid if grid is None else grid
    _check_same_grid(m.grid, grid)
    blocks = dyadic_decomposition(grid)
    core = next(iv for iv in blocks if iv.contains(0.0))
    best = 0.0
    for iv in blocks:
        _, v = m.restrict(iv)
        if len(v) == 0:
            continue
        if iv is core or len(v) == 1:
            best = max(best, float(np.max(np.abs(v))))
        else:
            best = max(best, float(np.max(np.abs(v))) + var_q_samples(v, q))
    return best


def project_symbol(m: Symbol, interval: FreqInterval) -> Symbol:
    return Symbol(m.grid, np.where(interval.contains(m.grid.freqs), m.values, 0.0))


def step_norm(coefficients, q: float) -> float:
    """``[m]_q = (sum |a_J|^q)^{1/q}`` for step coefficients."""
    a = np.abs(np.asarray(coefficients, dtype=complex))
    return float(np.sum(a**q) ** (1.0 / q))


@dataclass(frozen=True)
class StepAtom:
    """Step function on a host interval: ``coefficients[i]`` on ``[breakpoints[i], breakpoints[i+1])``."""

    breakpoints: np.ndarray
    coefficients: np.ndarray
    q: float
    q_norm: float

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        idx = np.searchsorted(self.breakpoints, xi, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.coefficients))
        return np.where(inside, self.coefficients[np.clip(idx, 0, len(self.coefficients) - 1)], 0.0)

    def to_dict(self) -> dict:
        return {
            "breakpoints": [float(b) for b in self.breakpoints],
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "q_norm": self.q_norm,
        }


@dataclass
class AtomicDecomposition:
    interval: FreqInterval
    q: float
    p: float
    levels: int
    vq_norm: float
    lambdas: list[float] = field(default_factory=list)
    atoms: list[StepAtom] = field(default_factory=list)
    residual_sup: float = 0.0
    converged: bool = True

    @property
    def lambda_sum(self) -> float:
        return float(np.sum(np.abs(self.lambdas)))

    @property
    def achieved_constant(self) -> float:
        """``sum |lambda_j| / ||m||_{V_q(I)}``."""
        return self.lambda_sum / self.vq_norm if self.vq_norm > 0 else 0.0

    def evaluate(self, xi) -> np.ndarray:
        out = np.zeros(np.shape(xi), dtype=complex)
        for lam, atom in zip(self.lambdas, self.atoms):
            out = out + lam * atom(xi)
        return out

    def to_dict(self) -> dict:
        return {
            "interval": [float(self.interval.lo), float(self.interval.hi)],
            "q": self.q,
            "p": self.p,
            "levels": self.levels,
            "vq_norm": self.vq_norm,
            "lambdas": [float(x) for x in self.lambdas],
            "atoms": [a.to_dict() for a in self.atoms],
            "residual_sup": self.residual_sup,
            "achieved_constant": self.achieved_constant,
            "converged": self.converged,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _greedy_partition(v: np.ndarray, q: float, eps: float) -> list[int]:
    """Start indices of maximal consecutive runs with q-variation ``<= eps``."""
    k = len(v)
    starts = [0]
    s = 0
    best = [0.0]  # DP table for the current run, in q-th powers
    limit = eps**q
    j = 1
    while j < k:
        cand = np.max(np.asarray(best) + np.abs(v[j] - v[s:j]) ** q)
        if cand <= limit:
            best.append(float(cand))
            j += 1
        else:
            s = j
            starts.append(s)
            best = [0.0]
            j += 1
    return starts


def decompose_rp(m: Symbol, interval: FreqInterval, q: float, p: float, levels: int,
                 tol: float | None = None) -> AtomicDecomposition:
    """Write ``m`` on ``interval`` as ``sum lambda_j m_j`` with ``[m_j]_p <= 1``.

    Level ``k`` chops the interval greedily into maximal pieces of q-variation
    at most ``2^-k V`` (``V`` the ``V_q`` norm) and takes the left-endpoint
    step approximant ``A_k``.  Atoms are the normalised increments
    ``A_k - A_{k-1}``.  ``|m - A_K| <= 2^-K V`` on every sample, since each
    sample differs from its piece's left value by at most the piece variation.
    """
    if not (p > q >= 1):
        raise ValueError(f"need p > q >= 1, got q={q}, p={p}")
    if levels < 1:
        raise ValueError("levels must be >= 1")
    xi, v = m.restrict(interval)
    if len(v) < 2:
        raise ValueError("interval must hold at least two grid samples")
    V = float(np.max(np.abs(v))) + var_q_samples(v, q)
    dec = AtomicDecomposition(interval, q, p, levels, V)
    # shave a relative 1e-9 so the sup bound survives rounding in the DP
    shrink = 1.0 - 1e-9
    prev = np.zeros(len(v), dtype=complex)
    for k in range(levels + 1):
        starts = _greedy_partition(v, q, V * 2.0**-k * shrink)
        approx = np.empty(len(v), dtype=complex)
        bounds = starts + [len(v)]
        for a, b in zip(bounds, bounds[1:]):
            approx[a:b] = v[a]
        diff = approx - prev
        prev = approx
        if not np.any(diff != 0):
            continue
        # merge equal neighbours: pieces of the common refinement
        cut = np.r_[0, np.nonzero(diff[1:] != diff[:-1])[0] + 1]
        coeffs = diff[cut]
        lam = step_norm(coeffs, p)
        breaks = np.r_[xi[cut], interval.hi].astype(float)
        breaks[0] = float(interval.lo)
        atom_coeffs = coeffs / lam
        dec.atoms.append(StepAtom(breaks, atom_coeffs, p, step_norm(atom_coeffs, p)))
        dec.lambdas.append(lam)
    recon = dec.evaluate(xi)
    dec.residual_sup = float(np.max(np.abs(v - recon)))
    target = V * 2.0**-levels if tol is None else tol
    dec.converged = dec.residual_sup <= target
    return dec
