"""Seeded generators for sweep inputs.

Everything here is defined in continuum units (frequencies in cycles per unit
length, positions in unit lengths) so that the same object can be sampled on a
grid and on its refinement.
"""
from __future__ import annotations

import math

import numpy as np

from ..lattice import FreqInterval, Grid, IntervalFamily, SampledSignal, whitney_decomposition
from ..variation import Symbol
from ..weights import Weight, make_a1_example, power_weight


def rng_for(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


def _snap(x: float, step: float) -> float:
    return round(x / step) * step


def random_family(rng: np.random.Generator, band: float, step: float, kind: str = "random",
                  max_intervals: int = 24) -> IntervalFamily:
    """Random disjoint intervals inside ``[-band, band)`` with endpoints on ``step``.

    ``kind``: ``"random"`` endpoints, ``"carleson"`` equal consecutive pieces,
    ``"lacunary"`` pieces doubling away from a random base point.
    """
    cells = int(round(2 * band / step))
    if kind == "random":
        count = int(rng.integers(1, max_intervals + 1))
        cuts = np.sort(rng.choice(np.arange(cells + 1), size=min(2 * count, cells + 1), replace=False))
        if len(cuts) % 2:
            cuts = cuts[:-1]
        bounds = [(-band + a * step, -band + b * step) for a, b in zip(cuts[::2], cuts[1::2]) if b > a]
        return IntervalFamily.from_bounds(bounds)
    if kind == "carleson":
        width = int(rng.integers(1, max(2, cells // max_intervals) + 1))
        start = int(rng.integers(0, max(1, cells - width)))
        count = min(max_intervals, (cells - start) // width)
        bounds = [(-band + (start + i * width) * step, -band + (start + (i + 1) * width) * step) for i in range(count)]
        return IntervalFamily.from_bounds(bounds)
    if kind == "lacunary":
        base = int(rng.integers(0, cells // 2))
        bounds = []
        lo, width = base, 1
        while lo + width <= cells and len(bounds) < max_intervals:
            bounds.append((-band + lo * step, -band + (lo + width) * step))
            lo, width = lo + width, 2 * width
        return IntervalFamily.from_bounds(bounds)
    raise ValueError(f"unknown family kind {kind!r}")


FAMILY_KINDS = ("random", "carleson", "lacunary")


def whitney_family(rng: np.random.Generator, band: float, step: float, pieces: int = 3,
                   min_cells: int = 2) -> IntervalFamily:
    """Union of Whitney decompositions of a few disjoint random intervals."""
    cells = int(round(2 * band / step))
    out = []
    cuts = np.sort(rng.choice(np.arange(cells + 1), size=2 * pieces, replace=False))
    for a, b in zip(cuts[::2], cuts[1::2]):
        if (b - a) <= 4 * min_cells:
            continue
        iv = FreqInterval(-band + a * step, -band + b * step)
        out.extend(whitney_decomposition(iv, min_cells * step))
    if not out:
        out.extend(whitney_decomposition(FreqInterval(-band / 2, band / 2), min_cells * step))
    return IntervalFamily(out)


def trig_signal(grid: Grid, freqs: np.ndarray, coeffs: np.ndarray) -> SampledSignal:
    """``sum_k c_k e^{2 pi i xi_k x}`` sampled on ``grid`` (``xi_k`` multiples of ``1/L``)."""
    from ..operators import _inverse

    spec = np.zeros(grid.n, dtype=complex)
    idx = np.round(np.asarray(freqs) * grid.period).astype(int) % grid.n
    np.add.at(spec, idx, coeffs)
    return SampledSignal(grid, _inverse(spec * math.sqrt(grid.n), grid))


def random_bandlimited(rng: np.random.Generator, period: float, band: float):
    """Frequencies and coefficients of a random trigonometric polynomial of band ``< band``."""
    k = np.arange(-int(band * period), int(band * period))
    decay = rng.uniform(0.0, 2.0)
    amp = (1.0 + np.abs(k) / period) ** -decay
    coeffs = amp * (rng.normal(size=len(k)) + 1j * rng.normal(size=len(k)))
    return k / period, coeffs


def random_bump_signal(rng: np.random.Generator, period: float, band: float):
    """Callable ``x -> f(x)``: smooth compactly supported bump times a random trig sum."""
    centre = rng.uniform(-period / 8, period / 8)
    radius = rng.uniform(period / 32, period / 8)
    freqs = rng.uniform(-band, band, size=4)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)

    def f(x):
        t = (x - centre) / radius
        inside = np.abs(t) < 1
        env = np.where(inside, np.exp(-1.0 / np.where(inside, 1 - t**2, 1.0)), 0.0)
        return env * np.sum(amps[:, None] * np.exp(2j * np.pi * freqs[:, None] * x[None, :]), axis=0)

    return f


def weight_family(kind: str, grid: Grid) -> dict[str, Weight]:
    if kind == "power":
        return {f"pow{a:g}": power_weight(a, grid) for a in (-0.5, -0.25, 0.0, 0.25, 0.5, 0.75)}
    if kind == "a1":
        out = {f"pow{a:g}": power_weight(a, grid) for a in (-0.75, -0.5, -0.25, 0.0)}
        out["spike_sqrt"] = make_a1_example(grid)
        return out
    if kind == "unweighted":
        return {"pow0": power_weight(0.0, grid)}
    raise ValueError(f"unknown weight family {kind!r}")


def symbol_family(grid: Grid, seed: int) -> dict[str, Symbol]:
    xi = grid.freqs
    with np.errstate(divide="ignore"):
        k = np.where(xi != 0, np.floor(np.log2(np.abs(xi))), 0).astype(int)
    signs = rng_for(seed, 7).choice([-1.0, 1.0], size=200)
    marc = np.where(xi != 0, signs[(k + 100) % 200] * np.where(xi > 0, 1.0, -1.0), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        slog = np.where(xi != 0, np.sin(np.log2(np.abs(xi))), 0.0)
    return {
        "hilbert": Symbol.hilbert(grid),
        "marcinkiewicz": Symbol(grid, marc),
        "sinlog": Symbol(grid, slog),
    }
