"""Muckenhoupt weight machinery on the grid.

All interval suprema are scans over discrete windows ``[i, i + len)`` of grid
cells, evaluated from prefix sums.  By default windows are the ``O(n^2)``
non-wrapping subintervals of ``[-L/2, L/2)``.  ``periodic=True`` scans windows
on the torus instead, which is the window set used by the maximal operators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .lattice import Grid, SampledSignal, _check_same_grid

__all__ = [
    "Weight",
    "WeightReport",
    "Rearrangement",
    "ap_constant",
    "ap_extremal_window",
    "rh_constant",
    "estimate_s_w",
    "weight_report",
    "weighted_norm",
    "weak_norm",
    "rearrangement",
    "power_weight",
    "make_a1_example",
    "EXACT_SCAN_LIMIT",
]

EXACT_SCAN_LIMIT = 2**14


class Weight:
    """Strictly positive samples of a weight on a grid."""

    def __init__(self, grid: Grid, values):
        vals = np.array(values, dtype=float)
        if vals.shape != (grid.n,):
            raise ValueError(f"expected {grid.n} weight samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise ValueError("weight samples must be finite and strictly positive")
        vals.setflags(write=False)
        self.grid = grid
        self.values = vals
        self.prefix = _prefix(vals)
        self._dual_prefix: dict[float, np.ndarray] = {}

    def __repr__(self):
        return f"Weight(n={self.grid.n}, period={self.grid.period}, range=[{self.values.min():.3g}, {self.values.max():.3g}])"

    def dual_prefix(self, p: float) -> np.ndarray:
        """Prefix sums of ``w^{1-p'}`` for the given exponent, cached."""
        if p not in self._dual_prefix:
            self._dual_prefix[p] = _prefix(self.values ** (-1.0 / (p - 1.0)))
        return self._dual_prefix[p]

    def total(self) -> float:
        return float(self.prefix[-1] * self.grid.h)

    def power(self, s: float) -> "Weight":
        return Weight(self.grid, self.values**s)

    def scaled(self, c: float) -> "Weight":
        return Weight(self.grid, self.values * c)

    def __mul__(self, other):
        if isinstance(other, Weight):
            _check_same_grid(self.grid, other.grid)
            return Weight(self.grid, self.values * other.values)
        return Weight(self.grid, self.values * np.asarray(other, dtype=float))

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        np.savetxt(path, np.column_stack([self.grid.x, self.values]), delimiter=",", header="x,w", comments="")

    @classmethod
    def from_csv(cls, path, period: float | None = None) -> "Weight":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        x, w = data[:, 0], data[:, 1]
        n = len(x)
        if period is None:
            period = float((x[1] - x[0]) * n)
        return cls(Grid(n, period), w)


def _prefix(v: np.ndarray) -> np.ndarray:
    out = np.zeros(len(v) + 1)
    np.cumsum(v, out=out[1:])
    return out


def _window_lengths(n: int, periodic: bool, max_len: int | None, lengths: Iterable[int] | None) -> list[int]:
    top = n // 2 if periodic else n
    if max_len is not None:
        top = min(top, max_len)
    if lengths is None:
        return list(range(1, top + 1))
    return sorted({int(k) for k in lengths if 1 <= k <= top})


def _window_sums(prefix: np.ndarray, length: int, periodic: bool) -> np.ndarray:
    """Sums over all windows of ``length`` cells, indexed by starting cell."""
    n = len(prefix) - 1
    if not periodic:
        return prefix[length:] - prefix[:-length]
    starts = np.arange(n)
    ends = starts + length
    wrap = ends > n
    out = prefix[np.minimum(ends, n)] - prefix[starts]
    out[wrap] += prefix[ends[wrap] - n]
    return out


def _check_scan_size(n: int, exact: bool | None, lengths):
    if lengths is not None:
        return lengths
    if exact is None:
        exact = n <= EXACT_SCAN_LIMIT
    if exact:
        return None
    return [2**k for k in range(int(math.log2(n)) + 1)]


def _ap_scan(w: Weight, p: float, periodic=False, max_len=None, lengths=None, exact=None):
    if not p > 1:
        raise ValueError(f"A_p constant needs p > 1, got {p}")
    n = w.grid.n
    lengths = _check_scan_size(n, exact, lengths)
    pw, ps = w.prefix, w.dual_prefix(p)
    # scale-free: divide by the global averages first to keep powers tame
    cw, cs = pw[-1] / n, ps[-1] / n
    best, arg = -np.inf, (0, 1)
    for k in _window_lengths(n, periodic, max_len, lengths):
        aw = _window_sums(pw, k, periodic) / (k * cw)
        asg = _window_sums(ps, k, periodic) / (k * cs)
        vals = aw * asg ** (p - 1)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), (i, i + k)
    return best * cw * cs ** (p - 1), arg


def ap_constant(w: Weight, p: float, *, periodic: bool = False, max_len: int | None = None,
                lengths: Sequence[int] | None = None, exact: bool | None = None) -> float:
    """``sup_I (avg_I w)(avg_I w^{1-p'})^{p-1}`` over discrete windows.

    The exact scan visits every window length; for ``n > EXACT_SCAN_LIMIT``
    (or ``exact=False``) only dyadic lengths are scanned, which is an
    approximation from below.
    """
    return _ap_scan(w, p, periodic, max_len, lengths, exact)[0]


def ap_extremal_window(w: Weight, p: float, **kw) -> tuple[int, int]:
    """Cell range ``(start, stop)`` attaining the A_p supremum (stop may exceed n when periodic)."""
    return _ap_scan(w, p, kw.get("periodic", False), kw.get("max_len"), kw.get("lengths"), kw.get("exact"))[1]


def rh_constant(w: Weight, s: float, *, periodic: bool = False, exact: bool | None = None) -> float:
    """``sup_I (avg_I w^s)^{1/s} / avg_I w``."""
    if not s > 1:
        raise ValueError(f"reverse Hoelder exponent must exceed 1, got {s}")
    n = w.grid.n
    lengths = _check_scan_size(n, exact, None)
    v = w.values / w.values.max()
    pw, ps = _prefix(v), _prefix(v**s)
    best = -np.inf
    for k in _window_lengths(n, periodic, None, lengths):
        a = _window_sums(pw, k, periodic) / k
        b = np.maximum(_window_sums(ps, k, periodic), 0.0) / k
        best = max(best, float(np.max(b ** (1.0 / s) / a)))
    return best


def estimate_s_w(w: Weight, tol: float = 0.05, *, budget: float = 1e3, s_max: float = 64.0) -> float:
    """Largest ``s`` on the ladder ``(1+tol)^k`` with ``rh_constant(w, s) <= budget``.

    This is a lower estimate tied to the grid: on a finite grid every weight
    is bounded, so the true supremum is only visible as growth of the reverse
    Hoelder constant.  Returns ``s_max`` when the whole ladder stays under
    budget.
    """
    if not tol > 0:
        raise ValueError("ladder tolerance must be positive")
    ladder = []
    s = 1.0 + tol
    while s < s_max:
        ladder.append(s)
        s *= 1.0 + tol
    ladder.append(s_max)
    best = 1.0
    for s in ladder:
        if rh_constant(w, s) > budget:
            break
        best = s
    return best


@dataclass(frozen=True)
class WeightReport:
    p: float
    ap_constant: float
    s: float
    rh_constant: float
    s_w_estimate: float
    s_w_at_ladder_top: bool


def weight_report(w: Weight, p: float, s: float = 2.0, tol: float = 0.05, budget: float = 1e3,
                  s_max: float = 64.0) -> WeightReport:
    sw = estimate_s_w(w, tol, budget=budget, s_max=s_max)
    return WeightReport(p, float(ap_constant(w, p)), s, float(rh_constant(w, s)), sw, sw >= s_max)


def _weights_for(f: SampledSignal, w: Weight | None) -> np.ndarray:
    if w is None:
        return np.ones(f.grid.n)
    _check_same_grid(f.grid, w.grid)
    return w.values


def weighted_norm(f: SampledSignal, p: float, w: Weight | None = None) -> float:
    """Riemann sum ``(sum |f_i|^p w_i h)^{1/p}``; ``w=None`` means ``w = 1``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    wv = _weights_for(f, w)
    a = f.abs
    top = a.max()
    if top == 0:
        return 0.0
    return float(top * (np.sum((a / top) ** p * wv) * f.grid.h) ** (1.0 / p))


def weak_norm(f: SampledSignal, p: float, w: Weight | None = None) -> float:
    """``sup_lam lam * w({|f| > lam})^{1/p}``, attained at the levels of ``|f|``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    wv = _weights_for(f, w) * f.grid.h
    a = f.abs
    order = np.argsort(-a, kind="stable")
    vals = a[order]
    mass = np.cumsum(wv[order])
    # last index of each tie group carries the mass of {|f| >= v}
    last = np.r_[vals[1:] != vals[:-1], True]
    return float(np.max(vals[last] * mass[last] ** (1.0 / p)))


@dataclass(frozen=True)
class Rearrangement:
    """Nonincreasing step function: ``values[i]`` on ``[breaks[i], breaks[i+1])``."""

    breaks: np.ndarray
    values: np.ndarray

    @property
    def total(self) -> float:
        return float(self.breaks[-1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breaks, t, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.values))
        return np.where(inside, self.values[np.clip(idx, 0, len(self.values) - 1)], 0.0)

    def integral_power(self, p: float) -> float:
        return float(np.sum(self.values**p * np.diff(self.breaks)))


def rearrangement(f: SampledSignal, w: Weight | None = None) -> Rearrangement:
    """Decreasing rearrangement of ``|f|`` with respect to ``w dx``."""
    wv = _weights_for(f, w) * f.grid.h
    a = f.abs
    order = np.argsort(-a, kind="stable")
    vals, widths = a[order], wv[order]
    last = np.r_[vals[1:] != vals[:-1], True]
    group_end = np.cumsum(widths)[last]
    return Rearrangement(np.r_[0.0, group_end], vals[last])


def power_weight(alpha: float, grid: Grid) -> Weight:
    """``max(|x|, h)^alpha``."""
    return Weight(grid, np.maximum(np.abs(grid.x), grid.h) ** alpha)


def make_a1_example(grid: Grid) -> Weight:
    """Square root of the maximal function of a unit spike at the origin.

    With windows containing the point, ``M(delta_0)(x) = 1/(d+1)`` where ``d``
    is the cell distance to the origin, so the weight is ``(h/(|x|+h))^{1/2}``.
    """
    d = np.abs(grid.x)
    return Weight(grid, np.sqrt(grid.h / (d + grid.h)))
