"""Brute-force reference computations of the Holevo capacity.

Nothing here relies on the regime analysis in :mod:`qubitcap.classifier` or the
closed forms in :mod:`qubitcap.solver`. Capacities are obtained either from
the min-max characterisation ``min_psi max_rho D(rho || psi)`` by grid search
plus golden-section refinement, or from direct maximisation of the Holevo
information over explicit ensembles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize

from ._search import golden_min, refine_grid_max
from .entropy_bloch import EPS_CP, BlochVector, ChannelParams, f, f_prime, is_cptp
from .exceptions import DomainError, SamplingError

__all__ = [
    "OracleConfig",
    "GapResult",
    "oracle_inner_max",
    "oracle_capacity_minmax",
    "oracle_minmax_full_psi",
    "oracle_best_k_state",
    "two_three_gap",
    "sample_cptp",
    "derive_seed",
]

_Q_GUARD = 1e-9
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class OracleConfig:
    n_phi: int = 2001
    n_q: int = 2001
    refine_iters: int = 60
    seed: int = 0

    def __post_init__(self):
        if self.n_phi < 3 or self.n_q < 3:
            raise ValueError("n_phi and n_q must be at least 3")
        if self.refine_iters < 1:
            raise ValueError("refine_iters must be at least 1")


# ---------------------------------------------------------------------------
# vectorised primitives
# ---------------------------------------------------------------------------


def _outputs(params: ChannelParams, phi, plane: str) -> np.ndarray:
    """Channel outputs, shape (..., 3), for pure inputs at angle ``phi`` in ``plane``."""
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    zeros = np.zeros_like(phi)
    if plane == "xz":
        vec = np.stack([params.lambda1 * s, zeros, params.lambda3 * c + params.t], axis=-1)
    else:
        vec = np.stack([zeros, params.lambda2 * s, params.lambda3 * c + params.t], axis=-1)
    return vec


def _norm(v):
    return np.minimum(np.sqrt(np.sum(v * v, axis=-1)), 1.0)


def _rel_ent(rho, psi):
    """Vectorised relative entropy between Bloch vectors (last axis) in bits."""
    r = _norm(rho)
    q = _norm(psi)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.where(q > 0.0, np.sum(rho * psi, axis=-1) / np.where(q > 0, q, 1.0), 0.0)
        fq = f_prime(np.where(q > 0.0, q, 0.0))
    return 0.5 * (f(r) - np.log2(1.0 - q * q) - cross * fq)


def _entropy(v):
    return 1.0 - 0.5 * f(_norm(v))


# ---------------------------------------------------------------------------
# min-max route
# ---------------------------------------------------------------------------


def _phi_grid(cfg: OracleConfig) -> np.ndarray:
    return np.linspace(0.0, math.pi, cfg.n_phi)


def oracle_inner_max(params: ChannelParams, psi, cfg: OracleConfig = OracleConfig(),
                     full_circle: bool = False) -> tuple[float, float, str]:
    """``max_phi D(output(phi) || psi)`` over pure inputs in both coordinate planes.

    Returns ``(value, phi_argmax, plane)``.
    """
    psi = np.asarray(psi, dtype=float)
    lo = -math.pi if full_circle else 0.0
    phis = np.linspace(lo, math.pi, cfg.n_phi if not full_circle else 2 * cfg.n_phi - 1)
    best = (-math.inf, 0.0, "xz")
    for plane in ("xz", "yz"):
        vals = _rel_ent(_outputs(params, phis, plane), psi)

        def d(p, plane=plane):
            return float(_rel_ent(_outputs(params, p, plane), psi))

        x, fx = refine_grid_max(d, phis, vals, tol=0.0, max_iter=cfg.refine_iters)
        if fx > best[0]:
            best = (fx, x, plane)
    return best


def _q_interval(params: ChannelParams) -> tuple[float, float]:
    lo = params.t - abs(params.lambda3)
    hi = params.t + abs(params.lambda3)
    lo = max(lo, -1.0 + _Q_GUARD)
    hi = min(hi, 1.0 - _Q_GUARD)
    if lo > hi:
        raise DomainError("mean-output interval lies outside the open Bloch ball")
    return lo, hi


def _coarse_outer(params: ChannelParams, qs: np.ndarray, cfg: OracleConfig) -> np.ndarray:
    phis = _phi_grid(cfg)
    outs = np.concatenate([_outputs(params, phis, "xz"), _outputs(params, phis, "yz")])
    r = _norm(outs)
    fr = f(r)
    rz = outs[:, 2]
    vals = np.empty(qs.size)
    chunk = 128
    for start in range(0, qs.size, chunk):
        q = qs[start:start + chunk, None]
        d = 0.5 * (fr[None, :] - np.log2(1.0 - q * q) - rz[None, :] * f_prime(q))
        vals[start:start + chunk] = d.max(axis=1)
    return vals


def oracle_capacity_minmax(params: ChannelParams, cfg: OracleConfig = OracleConfig()) -> float:
    """Capacity as ``min_{q_z} max_phi D(output(phi) || (0, 0, q_z))``.

    The reference state is searched on the z-axis segment swept by the
    outputs of the two poles. The outer function is convex in ``q_z``; a grid
    locates the minimum, then golden-section search refines it.
    """
    if not is_cptp(params).ok:
        raise DomainError("oracle requires CPTP channel parameters")
    lo, hi = _q_interval(params)

    def outer(q):
        return oracle_inner_max(params, (0.0, 0.0, q), cfg)[0]

    if hi - lo <= 0.0:
        return max(outer(lo), 0.0)
    qs = np.linspace(lo, hi, cfg.n_q)
    vals = _coarse_outer(params, qs, cfg)
    i = int(np.argmin(vals))
    a = qs[max(i - 1, 0)]
    b = qs[min(i + 1, qs.size - 1)]
    _, value = golden_min(outer, float(a), float(b), tol=0.0, max_iter=cfg.refine_iters)
    return max(value, 0.0)


def oracle_minmax_full_psi(params: ChannelParams, cfg: OracleConfig = OracleConfig(),
                           n_grid: int = 41) -> tuple[float, float, float]:
    """Slow min-max with the reference state free in the x-z and y-z planes.

    Used to spot-check that restricting the reference to the z axis loses
    nothing. Returns ``(value, q_transverse, q_z)``.
    """
    if not is_cptp(params).ok:
        raise DomainError("oracle requires CPTP channel parameters")
    plane_x = abs(params.lambda1) >= abs(params.lambda2)
    lm = max(abs(params.lambda1), abs(params.lambda2))
    small = OracleConfig(n_phi=min(cfg.n_phi, 401), n_q=cfg.n_q,
                         refine_iters=cfg.refine_iters, seed=cfg.seed)

    def psi_of(qx, qz):
        return (qx, 0.0, qz) if plane_x else (0.0, qx, qz)

    def outer(v):
        qx, qz = v
        if qx * qx + qz * qz >= (1.0 - _Q_GUARD) ** 2:
            return 10.0
        return oracle_inner_max(params, psi_of(qx, qz), small, full_circle=True)[0]

    lo, hi = _q_interval(params)
    best = (math.inf, 0.0, 0.5 * (lo + hi))
    for qx in np.linspace(-lm, lm, n_grid):
        for qz in np.linspace(lo, hi, n_grid):
            val = outer((qx, qz))
            if val < best[0]:
                best = (val, qx, qz)
    res = minimize(outer, x0=np.array(best[1:]), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
    if res.fun < best[0]:
        best = (float(res.fun), float(res.x[0]), float(res.x[1]))
    return best


# ---------------------------------------------------------------------------
# explicit-ensemble route
# ---------------------------------------------------------------------------


def _blahut_arimoto(outs: np.ndarray, iters: int = 400) -> tuple[np.ndarray, np.ndarray]:
    """Optimal weights for fixed output states; ``outs`` has shape (N, k, 3)."""
    n, k, _ = outs.shape
    p = np.full((n, k), 1.0 / k)
    for _ in range(iters):
        mean = np.einsum("nk,nkd->nd", p, outs)
        d = _rel_ent(outs, mean[:, None, :])
        d = np.nan_to_num(d, nan=0.0, posinf=0.0)
        p = p * np.exp2(d - d.max(axis=1, keepdims=True))
        p /= p.sum(axis=1, keepdims=True)
    mean = np.einsum("nk,nkd->nd", p, outs)
    chi = _entropy(mean) - np.einsum("nk,nk->n", p, _entropy(outs))
    return p, chi


def _chi_angles(params: ChannelParams, x, k: int, plane: str) -> float:
    """Holevo information of ``k`` pure inputs; ``x`` holds k angles then k-1 logits."""
    logits = [float(v) for v in x[k:]] + [0.0]
    top = max(logits)
    w = [math.exp(v - top) for v in logits]
    total = sum(w)
    l_t = params.lambda1 if plane == "xz" else params.lambda2
    mt = mz = 0.0
    avg = 0.0
    for i in range(k):
        p = w[i] / total
        a = float(x[i])
        ot = l_t * math.sin(a)
        oz = params.lambda3 * math.cos(a) + params.t
        mt += p * ot
        mz += p * oz
        avg += p * (1.0 - 0.5 * f(min(math.hypot(ot, oz), 1.0)))
    return (1.0 - 0.5 * f(min(math.hypot(mt, mz), 1.0))) - avg


def _softmax(z):
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def oracle_best_k_state(params: ChannelParams, k: int, cfg: OracleConfig = OracleConfig(),
                        n_start: Optional[int] = None):
    """Best Holevo information over ensembles of ``k`` pure inputs.

    Inputs range over full great circles in the x-z and y-z planes. A coarse
    angle grid with Blahut-Arimoto weights picks the starting point, then
    Powell's method refines angles and weights jointly. The result is a lower
    bound on the capacity. Returns ``(capacity, Ensemble)``.
    """
    from .solver import Ensemble

    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    if not is_cptp(params).ok:
        raise DomainError("oracle requires CPTP channel parameters")
    m = n_start or (64 if k == 2 else 20)
    grid = np.linspace(-math.pi, math.pi, m, endpoint=False)
    if k == 2:
        a, b = np.meshgrid(grid, grid, indexing="ij")
        mask = a < b
        combos = np.stack([a[mask], b[mask]], axis=-1)
    else:
        a, b, c = np.meshgrid(grid, grid, grid, indexing="ij")
        mask = (a < b) & (b < c)
        combos = np.stack([a[mask], b[mask], c[mask]], axis=-1)

    best_val, best_plane, best_x = -math.inf, "xz", None
    for plane in ("xz", "yz"):
        outs = _outputs(params, combos, plane)
        p, chi = _blahut_arimoto(outs, iters=80)
        i = int(np.argmax(chi))
        logits = np.log(np.maximum(p[i], 1e-12))

        def neg_chi(x, plane=plane):
            return -_chi_angles(params, x, k, plane)

        x0 = np.concatenate([combos[i], logits[:-1] - logits[-1]])
        res = minimize(neg_chi, x0, method="Powell",
                       options={"xtol": 1e-10, "ftol": 1e-14, "maxfev": 20000})
        for _ in range(2):
            res = minimize(neg_chi, res.x, method="Powell",
                           options={"xtol": 1e-11, "ftol": 1e-15, "maxfev": 20000})
        val = -float(res.fun)
        if val > best_val:
            best_val, best_plane, best_x = val, plane, res.x

    phis = best_x[:k]
    probs = _softmax(np.append(best_x[k:], 0.0))
    probs = probs / probs.sum()
    if best_plane == "xz":
        inputs = [BlochVector(math.sin(v), 0.0, math.cos(v)) for v in phis]
    else:
        inputs = [BlochVector(0.0, math.sin(v), math.cos(v)) for v in phis]
    ens = Ensemble.from_inputs(params, probs, inputs)
    return max(best_val, 0.0), ens


class GapResult(NamedTuple):
    A: Optional[float]
    gap: float
    cap2: float
    cap3: float
    oracle_cap2: Optional[float] = None
    oracle_cap3: Optional[float] = None


def two_three_gap(params: ChannelParams, cfg: OracleConfig = OracleConfig(),
                  cross_check: bool = False, grid_n: int = 512) -> GapResult:
    """Difference between the best three-state and best two-state Holevo information.

    The two-state value is the better of the pole-pair and symmetric off-axis
    pair constructions; the three-state value comes from the pole-plus-pair
    search. With ``cross_check`` both are also recomputed by
    :func:`oracle_best_k_state`.
    """
    from .classifier import compute_A, lambda_m
    from .solver import cond1_solve, cond2_solve, three_state_solve

    caps = []
    if params.lambda3 != 0.0:
        caps.append(cond1_solve(params).capacity)
    if lambda_m(params) != 0.0:
        caps.append(cond2_solve(params).capacity)
    cap2 = max(caps) if caps else 0.0
    three = three_state_solve(params, grid_n)
    cap3 = max(cap2, three.capacity) if three is not None else cap2
    gap = cap3 - cap2
    if gap <= 1e-12:
        gap = 0.0
    o2 = o3 = None
    if cross_check:
        o2 = oracle_best_k_state(params, 2, cfg)[0]
        o3 = oracle_best_k_state(params, 3, cfg)[0]
    return GapResult(compute_A(params), gap, cap2, cap3, o2, o3)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def derive_seed(master: int, index: int) -> int:
    """SplitMix64 hash of ``(master, index)`` giving an independent 64-bit seed."""
    z = (int(master) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _cptp_mask(x: np.ndarray) -> np.ndarray:
    l1, l2, l3, t = x.T
    return (
        ((1 + l3) ** 2 - t * t - (l1 + l2) ** 2 >= -EPS_CP)
        & ((1 - l3) ** 2 - t * t - (l1 - l2) ** 2 >= -EPS_CP)
        & (1 + l3 - np.abs(t) >= -EPS_CP)
        & (1 - l3 - np.abs(t) >= -EPS_CP)
    )


def sample_cptp(seed: int, a_interval: Optional[tuple[float, float]] = None,
                budget: int = 10**6, batch: int = 4096) -> ChannelParams:
    """Rejection-sample a CPTP channel uniformly from the box ``[-1, 1]^4``.

    With ``a_interval=(lo, hi)`` the channel must also have ``A`` strictly
    inside the interval (by more than the classification tolerance) and no
    degenerate structure. Deterministic for a fixed seed.

    Raises
    ------
    SamplingError
        If ``budget`` draws produce no acceptable channel.
    """
    from .classifier import EPS_A, Tag, classify

    rng = np.random.default_rng(seed)
    drawn = 0
    while drawn < budget:
        n = min(batch, budget - drawn)
        x = rng.uniform(-1.0, 1.0, size=(n, 4))
        drawn += n
        ok = _cptp_mask(x)
        if a_interval is not None:
            lo, hi = a_interval
            l1, l2, l3, t = x.T
            lm = np.maximum(np.abs(l1), np.abs(l2))
            den = lm * lm - l3 * l3
            with np.errstate(divide="ignore", invalid="ignore"):
                A = t * t * l3 * l3 / den - 1 + lm * lm + t * t
            ok &= (np.abs(lm - np.abs(l3)) > EPS_A) & (A > lo + EPS_A) & (A < hi - EPS_A)
            ok &= (t != 0) & (l3 != 0) & (lm > 0)
        for i in np.flatnonzero(ok):
            params = ChannelParams(*x[i])
            if a_interval is not None and tuple(a_interval) == (0.0, 0.5):
                if classify(params).tag is not Tag.INDETERMINATE:
                    continue
            return params
    raise SamplingError(f"no acceptable channel within {budget} draws")
