"""Slow, obviously-correct reference implementations used by the tests."""
from __future__ import annotations

import itertools

import numpy as np


def ap_brute(w: np.ndarray, p: float) -> float:
    """Every non-wrapping window ``[i, j)``: outer loop over starts, running sums over ends."""
    pc = p / (p - 1.0)
    n = len(w)
    sigma = w ** (1.0 - pc)
    best = 0.0
    for i in range(n):
        cnt = np.arange(1, n - i + 1)
        vals = (np.cumsum(w[i:]) / cnt) * (np.cumsum(sigma[i:]) / cnt) ** (p - 1.0)
        best = max(best, float(vals.max()))
    return best


def var_q_exhaustive(v, q: float) -> float:
    """Max over every index subset of size >= 2 of ``sum |increments|^q``.

    All ``2^k`` subsets are enumerated as bit masks; increments are added left
    to right so the float result does not depend on summation order.
    """
    v = np.asarray(v, dtype=complex)
    k = len(v)
    D = np.abs(v[None, :] - v[:, None]) ** q
    masks = ((np.arange(2**k)[:, None] >> np.arange(k)) & 1).astype(bool)
    masks = masks[masks.sum(axis=1) >= 2]
    acc = np.zeros(len(masks))
    prev = np.full(len(masks), -1)
    for j in range(k):
        sel = masks[:, j]
        take = sel & (prev >= 0)
        acc[take] += D[prev[take], j]
        prev = np.where(sel, j, prev)
    return float(acc.max() ** (1.0 / q))


def var_q_combinations(v, q: float) -> float:
    """Same supremum via itertools, for very short sequences."""
    v = np.asarray(v)
    best = 0.0
    for size in range(2, len(v) + 1):
        for idx in itertools.combinations(range(len(v)), size):
            best = max(best, float(np.sum(np.abs(np.diff(v[list(idx)])) ** q)))
    return best ** (1.0 / q)


def periodic_windows(n: int, lengths):
    for ell in lengths:
        for s in range(n):
            yield (s + np.arange(ell)) % n


def hl_brute(a: np.ndarray, lengths) -> np.ndarray:
    n = len(a)
    out = np.zeros(n)
    for idx in periodic_windows(n, lengths):
        m = a[idx].mean()
        out[idx] = np.maximum(out[idx], m)
    return out


def sharp_brute(v: np.ndarray, lengths) -> np.ndarray:
    n = len(v)
    out = np.zeros(n)
    for idx in periodic_windows(n, lengths):
        seg = v[idx]
        osc = np.abs(seg - seg.mean()).mean()
        out[idx] = np.maximum(out[idx], osc)
    return out


def weak_ladder(a: np.ndarray, wh: np.ndarray, p: float) -> float:
    """``sup_lam lam * mu(|f| > lam)^{1/p}`` with ``lam`` approaching each level from below."""
    best = 0.0
    for v in np.unique(a):
        for lam in (v * (1 - 1e-13), v):
            best = max(best, lam * wh[a > lam].sum() ** (1.0 / p))
    return best


def dft_matrix_transform(values: np.ndarray, x: np.ndarray, xi: np.ndarray, h: float) -> np.ndarray:
    """Direct Riemann sum ``sum_j f(x_j) e^{-2 pi i xi x_j} h``."""
    return np.exp(-2j * np.pi * np.outer(xi, x)) @ values * h
