"""Bracketed one-dimensional searches shared by the solver and the oracle."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Maximise a unimodal ``func`` on ``[lo, hi]``; returns ``(x, func(x))``.

    The bracket endpoints are also compared against the interior optimum so a
    monotone function returns its better endpoint.
    """
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    for edge in (lo, hi):
        fe = func(edge)
        if fe > fx:
            x, fx = edge, fe
    return x, fx


def parabolic_polish(
    func: Callable[[float], float],
    x: float,
    lo: float,
    hi: float,
    steps: tuple[float, ...] = (1e-2, 1e-3, 1e-4),
) -> float:
    """Sharpen an interior maximiser with three-point parabola vertices.

    Value-only searches stall near ``sqrt(machine eps)`` on flat peaks; a vertex
    fitted with a wider stencil recovers several more digits. Steps that would
    leave ``[lo, hi]`` or meet a non-concave stencil are skipped.
    """
    for h in steps:
        if x - h < lo or x + h > hi:
            continue
        fm, f0, fp = func(x - h), func(x), func(x + h)
        curv = fp - 2.0 * f0 + fm
        if not curv < 0.0:
            continue
        shift = 0.5 * h * (fm - fp) / curv
        if abs(shift) <= h:
            x += shift
    return x


def golden_min(func, lo, hi, tol=1e-12, max_iter=200):
    x, fx = golden_max(lambda v: -func(v), lo, hi, tol, max_iter)
    return x, -fx


def local_max_indices(values: np.ndarray, limit: int = 8) -> np.ndarray:
    """Indices of grid points not smaller than both neighbours (endpoints included).

    At most ``limit`` indices are returned, highest values first, so flat
    plateaus do not explode the refinement cost.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 1:
        return np.array([0])
    left = np.concatenate(([-np.inf], v[:-1]))
    right = np.concatenate((v[1:], [-np.inf]))
    idx = np.flatnonzero((v >= left) & (v >= right))
    if idx.size > limit:
        idx = idx[np.argsort(-v[idx], kind="stable")[:limit]]
    return idx


def refine_grid_max(
    func: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Refine every local maximum of a sampled function and return the best.

    Each local maximum is refined by golden-section search over its two
    neighbouring grid cells.
    """
    best_x, best_f = float(grid[int(np.nanargmax(values))]), float(np.nanmax(values))
    n = grid.size
    for i in local_max_indices(values):
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, n - 1)]
        if hi <= lo:
            continue
        x, fx = golden_max(func, float(lo), float(hi), tol, max_iter)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f
