"""Discretization layer: the periodic grid model of the real line.

A :class:`Grid` samples ``[-L/2, L/2)`` at ``n`` points.  Frequencies live on
``k / L`` for ``k = -n/2 .. n/2 - 1`` and are stored in FFT order
(``numpy.fft.fftfreq``), so spectra and symbols line up index by index.

Intervals are half-open ``[lo, hi)`` throughout.  Endpoints are kept as given
(float or :class:`fractions.Fraction`) so that interval arithmetic can be made
exact when the caller wants it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Grid",
    "SampledSignal",
    "FreqInterval",
    "IntervalFamily",
    "GridMismatchError",
    "dft",
    "idft",
    "fourier_transform",
    "dyadic_decomposition",
    "whitney_decomposition",
    "well_distributed_constant",
]


class GridMismatchError(ValueError):
    """Raised when two grid-bound objects live on different grids."""


@dataclass(frozen=True)
class Grid:
    n: int
    period: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {self.n!r}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"period must be positive and finite, got {self.period!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "period", float(self.period))

    @property
    def h(self) -> float:
        """Spatial step."""
        return self.period / self.n

    @property
    def dxi(self) -> float:
        """Frequency resolution ``1/L``."""
        return 1.0 / self.period

    @property
    def x(self) -> np.ndarray:
        return -self.period / 2 + self.h * np.arange(self.n)

    @property
    def freqs(self) -> np.ndarray:
        """Frequency grid ``k / L`` in FFT order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n) / self.period

    @property
    def nyquist(self) -> tuple[float, float]:
        """Half-open range ``[-n/(2L), n/(2L))`` holding every grid frequency."""
        top = self.n / (2 * self.period)
        return -top, top

    def refine(self, factor: int = 2) -> "Grid":
        """Same period, ``factor`` times as many samples."""
        return Grid(self.n * factor, self.period)


def _check_same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples on a grid (spatial or frequency side, in grid order)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal contains non-finite samples")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "SampledSignal":
        return cls(grid, func(grid.x))

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def __len__(self) -> int:
        return self.grid.n

    def l2_norm(self) -> float:
        """Plain Euclidean norm of the sample vector (no quadrature weight)."""
        return float(np.linalg.norm(self.values))

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.grid, values)

    def to_csv(self, path) -> None:
        data = np.column_stack([self.grid.x, self.values.real, self.values.imag])
        np.savetxt(path, data, delimiter=",", header="x,re,im", comments="")


def _phase(grid: Grid) -> np.ndarray:
    # grid starts at -L/2, so e^{-2 pi i xi_k x_0} = (-1)^k
    k = np.fft.fftfreq(grid.n, d=1.0 / grid.n).astype(int)
    return np.where(k % 2 == 0, 1.0, -1.0)


def dft(signal: SampledSignal) -> SampledSignal:
    """Unitary DFT referenced to the grid origin ``x = 0``.

    Output is indexed like ``grid.freqs``.
    """
    g = signal.grid
    return SampledSignal(g, _phase(g) * np.fft.fft(signal.values, norm="ortho"))


def idft(spectrum: SampledSignal) -> SampledSignal:
    g = spectrum.grid
    return SampledSignal(g, np.fft.ifft(_phase(g) * spectrum.values, norm="ortho"))


def fourier_transform(signal: SampledSignal) -> np.ndarray:
    """Riemann-sum approximation of the continuum transform ``f^(xi_k)``."""
    g = signal.grid
    return dft(signal).values * (g.h * math.sqrt(g.n))


@dataclass(frozen=True)
class FreqInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    def dilate(self, lam) -> "FreqInterval":
        """Concentric dilate with ``lam`` times the length."""
        half = lam * self.length / 2
        return FreqInterval(self.center - half, self.center + half)

    def contains(self, xi):
        xi = np.asarray(xi)
        return (xi >= self.lo) & (xi < self.hi)

    def mask(self, grid: Grid) -> np.ndarray:
        """Boolean mask over ``grid.freqs``; raises if outside the Nyquist range."""
        lo, hi = grid.nyquist
        if self.lo < lo or self.hi > hi:
            raise ValueError(f"interval [{self.lo}, {self.hi}) exceeds Nyquist range [{lo}, {hi})")
        return self.contains(grid.freqs)

    def dist_to_boundary(self, other: "FreqInterval"):
        """Distance from this interval to the endpoints of ``other``."""
        return min(self.lo - other.lo, other.hi - self.hi)


class IntervalFamily(Sequence[FreqInterval]):
    """Finite family of pairwise disjoint half-open intervals, sorted by ``lo``."""

    def __init__(self, intervals: Iterable[FreqInterval] = ()):
        items = sorted(intervals, key=lambda iv: (iv.lo, iv.hi))
        for a, b in zip(items, items[1:]):
            if b.lo < a.hi:
                raise ValueError(f"intervals overlap: [{a.lo}, {a.hi}) and [{b.lo}, {b.hi})")
        self._intervals = tuple(items)

    @classmethod
    def from_bounds(cls, bounds: Iterable[tuple[float, float]]) -> "IntervalFamily":
        return cls(FreqInterval(lo, hi) for lo, hi in bounds)

    def __getitem__(self, i):
        return self._intervals[i]

    def __len__(self) -> int:
        return len(self._intervals)

    def __iter__(self) -> Iterator[FreqInterval]:
        return iter(self._intervals)

    def __eq__(self, other):
        return isinstance(other, IntervalFamily) and self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        body = ", ".join(f"[{iv.lo}, {iv.hi})" for iv in self._intervals)
        return f"IntervalFamily({body})"

    def masks(self, grid: Grid) -> np.ndarray:
        """``(len(family), n)`` boolean array of frequency masks."""
        if not self._intervals:
            return np.zeros((0, grid.n), dtype=bool)
        return np.stack([iv.mask(grid) for iv in self._intervals])

    def bounds(self) -> list[tuple[float, float]]:
        return [(float(iv.lo), float(iv.hi)) for iv in self._intervals]


def dyadic_decomposition(grid: Grid) -> IntervalFamily:
    """Blocks ``[2^k, 2^{k+1})`` and ``[-2^{k+1}, -2^k)`` resolvable on ``grid``.

    Frequencies below the first resolvable block are merged into one central
    block ``[-2^{k0}, 2^{k0})``; every grid frequency lands in exactly one block.
    """
    lo, hi = grid.nyquist
    k0 = math.ceil(math.log2(grid.dxi))
    core = 2.0**k0
    blocks = [FreqInterval(max(-core, lo), min(core, hi))]
    k = k0
    while 2.0**k < hi:
        a, b = 2.0**k, 2.0 ** (k + 1)
        blocks.append(FreqInterval(a, min(b, hi)))
        blocks.append(FreqInterval(max(-b, lo), -a))
        k += 1
    return IntervalFamily(blocks)


def whitney_decomposition(interval: FreqInterval, min_len) -> IntervalFamily:
    """Dyadic Whitney partition of a bounded interval.

    The interval splits into its two central quarters, then pieces halving in
    length toward each endpoint.  Halving stops once the next piece would be
    shorter than ``min_len``; the leftover segment next to each endpoint is
    kept as a final boundary piece.  Arithmetic follows the endpoint type, so
    :class:`~fractions.Fraction` endpoints give an exact partition.
    """
    a, b = interval.lo, interval.hi
    length = b - a
    if not (0 < min_len < length / 4):
        raise ValueError(f"min_len must lie in (0, |I|/4) = (0, {length / 4}), got {min_len}")
    quarter = length / 4
    mid = a + 2 * quarter
    pieces = [FreqInterval(a + quarter, mid), FreqInterval(mid, b - quarter)]
    cur = quarter
    while cur / 2 >= min_len:
        pieces.append(FreqInterval(a + cur / 2, a + cur))
        pieces.append(FreqInterval(b - cur, b - cur / 2))
        cur = cur / 2
    pieces.append(FreqInterval(a, a + cur))
    pieces.append(FreqInterval(b - cur, b))
    return IntervalFamily(pieces)


def well_distributed_constant(family: IntervalFamily, lam: float, grid: Grid) -> int:
    """``max_xi sum_I chi_{lam I}(xi)`` over the frequency grid."""
    if lam <= 1:
        raise ValueError("dilation factor must exceed 1")
    xi = grid.freqs
    counts = np.zeros(grid.n, dtype=int)
    for iv in family:
        counts += iv.dilate(lam).contains(xi)
    return int(counts.max()) if len(family) else 0
