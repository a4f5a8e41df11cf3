"""Holevo capacity and optimal ensembles for the diagonal, z-shifted qubit channels.

Inputs are parametrised by an angle ``phi`` in the plane spanned by the z
axis and the larger transverse axis of the output ellipsoid: the x-z plane
when ``|lambda1| >= |lambda2|``, the y-z plane otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ._search import golden_max, parabolic_polish, refine_grid_max
from .classifier import Classification, Tag, classify, lambda_m, require_cptp
from .entropy_bloch import (
    BlochVector,
    ChannelParams,
    apply_channel,
    f,
    f_prime,
    relative_entropy,
    von_neumann_entropy,
)
from .exceptions import DomainError, SolverError

__all__ = [
    "EPS_OPT",
    "GRID_N",
    "Regime",
    "Ensemble",
    "CapacitySolution",
    "MaximalDistanceCheck",
    "input_state",
    "output_state",
    "root_lhs",
    "stationarity_residual",
    "cond1_solve",
    "cond2_solve",
    "cond2_objective_argmax",
    "three_state_solve",
    "resolve_indeterminate",
    "check_maximal_distance",
    "holevo_information",
    "holevo_capacity",
]

EPS_OPT = 1e-9
GRID_N = 512
SCAN_N = 256
PHI_TOL = 1e-12
PROB_CLAMP = 1e-12
_NEAR_PURE = 1e-9
_LN2 = math.log(2.0)


class Regime(str, Enum):
    COND1_TWO_ON_AXIS = "Cond1TwoOnAxis"
    COND2_TWO_OFF_AXIS = "Cond2TwoOffAxis"
    THREE_STATE = "ThreeState"
    DEGENERATE = "Degenerate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Ensemble:
    """Weighted input states together with their channel outputs."""

    probabilities: tuple[float, ...]
    inputs: tuple[BlochVector, ...]
    outputs: tuple[BlochVector, ...]
    mean_output: BlochVector

    @classmethod
    def from_inputs(
        cls,
        params: ChannelParams,
        probabilities: Sequence[float],
        inputs: Sequence[BlochVector],
    ) -> "Ensemble":
        probs = tuple(float(p) for p in probabilities)
        if len(probs) != len(inputs) or not probs:
            raise ValueError("probabilities and inputs must be non-empty and of equal length")
        if any(p < 0.0 for p in probs):
            raise ValueError(f"negative probability in {probs}")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {sum(probs)!r}, not 1")
        outputs = tuple(apply_channel(params, s) for s in inputs)
        mean = np.zeros(3)
        for p, o in zip(probs, outputs):
            mean += p * o.as_array()
        return cls(probs, tuple(inputs), outputs, BlochVector.from_array(mean))

    @property
    def members(self) -> list[tuple[float, BlochVector]]:
        return list(zip(self.probabilities, self.inputs))

    def __len__(self):
        return len(self.probabilities)


@dataclass(frozen=True)
class CapacitySolution:
    capacity: float
    regime: Regime
    q_z: float
    phi0: Optional[float]
    ensemble: Ensemble
    orthogonal_inputs: bool
    classification: Optional[Classification] = None
    max_violation: Optional[float] = field(default=None, compare=False)

    def with_certificate(self, violation: float) -> "CapacitySolution":
        return CapacitySolution(
            self.capacity, self.regime, self.q_z, self.phi0, self.ensemble,
            self.orthogonal_inputs, self.classification, violation,
        )


class MaximalDistanceCheck(NamedTuple):
    ok: bool
    max_violation: float
    phi_argmax: float


# ---------------------------------------------------------------------------
# geometry along the principal ellipse
# ---------------------------------------------------------------------------


def _uses_xz_plane(params: ChannelParams) -> bool:
    return abs(params.lambda1) >= abs(params.lambda2)


def input_state(params: ChannelParams, phi: float) -> BlochVector:
    """Pure input state at angle ``phi`` from the north pole, in the principal plane."""
    s, c = math.sin(phi), math.cos(phi)
    if _uses_xz_plane(params):
        return BlochVector(s, 0.0, c)
    return BlochVector(0.0, s, c)


def output_state(params: ChannelParams, phi: float) -> BlochVector:
    """Output point ``(lambda_m sin(phi), t + lambda3 cos(phi))`` in the principal plane."""
    lm = lambda_m(params)
    transverse = lm * math.sin(phi)
    z = params.t + params.lambda3 * math.cos(phi)
    if _uses_xz_plane(params):
        return BlochVector(transverse, 0.0, z)
    return BlochVector(0.0, transverse, z)


def _radius(params: ChannelParams, phi):
    """Vectorised output radius and z component, radius clipped to 1."""
    lm = lambda_m(params)
    rz = params.t + params.lambda3 * np.cos(phi)
    r = np.sqrt((lm * np.sin(phi)) ** 2 + rz * rz)
    return np.minimum(r, 1.0), rz


def _fprime_over_r(r):
    """``f'(r)/r`` for r in (0, 1); 0 < r only."""
    return f_prime(r) / r


def root_lhs(params: ChannelParams, phi: float) -> float:
    """Left-hand side of the interior stationarity condition for ``D(rho(phi) || psi)``.

    ``[(lm^2 - l3^2) cos(phi) - t l3] f'(r)/r``, with the continuous limit 0
    at ``r = 1`` (where the bracket vanishes).

    Raises
    ------
    DomainError
        If the output radius is zero.
    """
    lm = lambda_m(params)
    l3, t = params.lambda3, params.t
    bracket = (lm * lm - l3 * l3) * math.cos(phi) - t * l3
    r, _ = _radius(params, phi)
    r = float(r)
    if r == 0.0:
        raise DomainError("root_lhs undefined at zero output radius")
    if r >= 1.0:
        return 0.0
    return bracket * _fprime_over_r(r)


def stationarity_residual(params: ChannelParams, phi: float, q_z: float) -> float:
    """``root_lhs(phi) + lambda3 f'(q_z)``; zero at interior extrema of ``D``."""
    return root_lhs(params, phi) + params.lambda3 * f_prime(q_z)


def _rel_ent_axis(r, rz, q_z):
    """Vectorised ``D`` between outputs (radius ``r``, z part ``rz``) and ``(0, 0, q_z)``."""
    return 0.5 * (f(r) - math.log2(1.0 - q_z * q_z) - rz * f_prime(q_z))


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def _on_axis_q(z_plus: float, z_minus: float) -> tuple[float, float]:
    """Mean output equalising the relative entropies of two z-axis outputs.

    Returns ``(q_z, log2 X)`` where ``log2 X`` is the secant slope of ``f``
    between the two points.
    """
    log2x = (f(z_plus) - f(z_minus)) / (z_plus - z_minus)
    q_z = math.tanh(0.5 * _LN2 * log2x)
    return q_z, log2x


def cond1_solve(params: ChannelParams) -> CapacitySolution:
    """Analytic solution with the two pole inputs ``|0>`` and ``|1>``."""
    require_cptp(params)
    l3, t = params.lambda3, params.t
    if l3 == 0.0:
        raise SolverError("cond1_solve requires lambda3 != 0")
    z_plus, z_minus = t + l3, t - l3
    q_z, log2x = _on_axis_q(z_plus, z_minus)
    if 1.0 - abs(q_z) < _NEAR_PURE:
        raise SolverError(f"mean output q_z={q_z!r} is numerically pure")
    capacity = 0.5 * (f(z_plus) - math.log2(1.0 - q_z * q_z) - z_plus * log2x)
    p_plus = 0.5 + (q_z - t) / (2.0 * l3)
    p_minus = 0.5 - (q_z - t) / (2.0 * l3)
    if min(p_plus, p_minus) < -PROB_CLAMP:
        raise SolverError(f"pole probabilities ({p_plus}, {p_minus}) outside [0, 1]")
    p_plus = min(max(p_plus, 0.0), 1.0)
    p_minus = 1.0 - p_plus
    ensemble = Ensemble.from_inputs(
        params, (p_plus, p_minus), (BlochVector(0.0, 0.0, 1.0), BlochVector(0.0, 0.0, -1.0))
    )
    psi = BlochVector(0.0, 0.0, q_z)
    d_plus = relative_entropy(ensemble.outputs[0], psi)
    d_minus = relative_entropy(ensemble.outputs[1], psi)
    if abs(d_plus - d_minus) > 1e-10:
        raise SolverError(f"pole relative entropies differ: {d_plus} vs {d_minus}")
    return CapacitySolution(
        capacity=max(capacity, 0.0),
        regime=Regime.COND1_TWO_ON_AXIS,
        q_z=q_z,
        phi0=None,
        ensemble=ensemble,
        orthogonal_inputs=True,
    )


def _cond2_objective(params: ChannelParams, phi):
    r, rz = _radius(params, phi)
    return 0.5 * (f(r) - f(rz))


def _cond2_derivative(params: ChannelParams, phi: float) -> float:
    """Chain-rule derivative of ``(f(r) - f(r_z))/2`` with respect to ``phi``."""
    lm = lambda_m(params)
    l3, t = params.lambda3, params.t
    s, c = math.sin(phi), math.cos(phi)
    rz = t + l3 * c
    r = math.sqrt((lm * s) ** 2 + rz * rz)
    dr_dr = (lm * lm * s * c - rz * l3 * s)  # r * dr/dphi
    drz = -l3 * s
    if r >= 1.0:
        term_r = 0.0
    else:
        term_r = f_prime(r) * dr_dr / r
    return 0.5 * (term_r - f_prime(rz) * drz)


def cond2_objective_argmax(params: ChannelParams, scan_n: int = SCAN_N) -> float:
    """Maximiser of ``(f(r) - f(r_z))/2`` over ``phi`` from function values only.

    Independent of the stationarity root; used to cross-check :func:`cond2_solve`.
    """
    phis = np.linspace(0.0, math.pi, scan_n + 1)
    vals = _cond2_objective(params, phis)
    objective = lambda p: float(_cond2_objective(params, p))  # noqa: E731
    phi, _ = refine_grid_max(objective, phis, vals)
    return parabolic_polish(objective, phi, 0.0, math.pi)


def _cond2_phi0(params: ChannelParams, scan_n: int) -> float:
    phis = np.linspace(0.0, math.pi, scan_n + 1)
    vals = _cond2_objective(params, phis)
    i = int(np.argmax(vals))
    i = min(max(i, 1), scan_n - 1)
    lo, hi = float(phis[i - 1]), float(phis[i + 1])

    def resid(p):
        return _cond2_derivative(params, p)

    d_lo, d_hi = resid(lo), resid(hi)
    if d_lo > 0.0 and d_hi < 0.0:
        return brentq(resid, lo, hi, xtol=PHI_TOL, rtol=4 * np.finfo(float).eps, maxiter=500)
    if d_lo == 0.0:
        return lo
    if d_hi == 0.0:
        return hi
    phi, _ = golden_max(lambda p: float(_cond2_objective(params, p)), lo, hi, PHI_TOL)
    return phi


def cond2_solve(params: ChannelParams, scan_n: int = SCAN_N) -> CapacitySolution:
    """Symmetric off-axis pair at ``+-phi0`` maximising ``(f(r) - f(r_z))/2``.

    ``phi0`` is located by a coarse scan and then refined as the root of the
    objective's derivative, which coincides with the interior stationarity
    condition at ``q_z = r_z``.
    """
    require_cptp(params)
    if lambda_m(params) == 0.0:
        raise SolverError("cond2_solve requires lambda_m != 0")
    phi0 = _cond2_phi0(params, scan_n)
    r, rz = _radius(params, phi0)
    r, rz = float(r), float(rz)
    if not 0.0 < phi0 < math.pi:
        raise SolverError(f"no interior maximum found (phi0={phi0!r})")
    if 1.0 - abs(rz) < _NEAR_PURE:
        raise SolverError(f"mean output q_z={rz!r} is numerically pure")
    capacity = 0.5 * (f(r) - f(rz))
    ensemble = Ensemble.from_inputs(
        params,
        (0.5, 0.5),
        (input_state(params, phi0), input_state(params, -phi0)),
    )
    return CapacitySolution(
        capacity=max(capacity, 0.0),
        regime=Regime.COND2_TWO_OFF_AXIS,
        q_z=rz,
        phi0=phi0,
        ensemble=ensemble,
        orthogonal_inputs=abs(phi0 - 0.5 * math.pi) <= 1e-9,
    )


def _three_state_profile(params: ChannelParams, phi0, sign: int):
    """Vectorised three-state quantities for candidate off-axis angles ``phi0``.

    Returns ``(q_z, log2X, value, admissible)``.
    """
    lm = lambda_m(params)
    l3, t = params.lambda3, params.t
    phi0 = np.asarray(phi0, dtype=float)
    z_a = t + sign * l3
    z_b = t + l3 * np.cos(phi0)
    r0 = np.minimum(np.sqrt((lm * np.sin(phi0)) ** 2 + z_b * z_b), 1.0)
    denom = l3 * (sign - np.cos(phi0))
    with np.errstate(divide="ignore", invalid="ignore"):
        log2x = (f(z_a) - f(r0)) / denom
        q_z = np.tanh(0.5 * _LN2 * log2x)
        lo = np.minimum(z_a, z_b)
        hi = np.maximum(z_a, z_b)
        admissible = (denom != 0.0) & (q_z > lo) & (q_z < hi) & (np.abs(q_z) < 1.0)
        value = 0.5 * (f(z_a) - np.log2(np.where(admissible, 1.0 - q_z * q_z, 1.0)) - z_a * log2x)
    value = np.where(admissible, value, -np.inf)
    return q_z, log2x, value, admissible


def three_state_solve(params: ChannelParams, scan_n: int = GRID_N) -> Optional[CapacitySolution]:
    """One pole state plus a symmetric off-axis pair with equal relative entropies.

    The pole is ``|0>`` when ``|t + l3| > |t - l3|`` and ``|1>`` otherwise.
    Each off-axis angle ``phi0`` fixes the mean output; the common relative
    entropy is maximised over angles whose mean admits nonnegative weights.
    Returns ``None`` when no angle is admissible.
    """
    require_cptp(params)
    l3, t = params.lambda3, params.t
    if l3 == 0.0 or lambda_m(params) == 0.0:
        return None
    sign = 1 if abs(t + l3) > abs(t - l3) else -1
    # the pole the pair would collapse onto is singular; the opposite pole is kept
    phis = np.linspace(0.0, math.pi, scan_n + 1)
    phis = phis[1:] if sign == 1 else phis[:-1]
    _, _, vals, adm = _three_state_profile(params, phis, sign)
    if not np.any(adm):
        return None

    def value(p):
        return float(_three_state_profile(params, p, sign)[2])

    phi0, best = refine_grid_max(value, phis, vals, tol=PHI_TOL)
    if not math.isfinite(best):
        return None
    q_z, log2x, val, _ = _three_state_profile(params, phi0, sign)
    q_z = float(q_z)

    pole = BlochVector(0.0, 0.0, float(sign))
    up, down = input_state(params, phi0), input_state(params, -phi0)
    z_a = t + sign * l3
    out_up = apply_channel(params, up)
    out_dn = apply_channel(params, down)
    transverse = out_up.x if _uses_xz_plane(params) else out_up.y
    transverse_dn = out_dn.x if _uses_xz_plane(params) else out_dn.y
    system = np.array(
        [
            [1.0, 1.0, 1.0],
            [0.0, transverse, transverse_dn],
            [z_a, out_up.z, out_dn.z],
        ]
    )
    rhs = np.array([1.0, 0.0, q_z])
    if abs(transverse) > 1e-14:
        probs = np.linalg.solve(system, rhs)
    else:
        p_a = (q_z - out_up.z) / (z_a - out_up.z)
        probs = np.array([p_a, 0.5 * (1 - p_a), 0.5 * (1 - p_a)])
    if probs.min() < -PROB_CLAMP:
        raise SolverError(f"three-state weights {probs} are negative")
    probs = np.clip(probs, 0.0, 1.0)
    probs /= probs.sum()
    ensemble = Ensemble.from_inputs(params, probs, (pole, up, down))
    return CapacitySolution(
        capacity=float(val),
        regime=Regime.THREE_STATE,
        q_z=float(ensemble.mean_output.z),
        phi0=phi0,
        ensemble=ensemble,
        orthogonal_inputs=False,
    )


def check_maximal_distance(
    params: ChannelParams,
    candidate: CapacitySolution,
    grid_n: int = GRID_N,
    eps_opt: float = EPS_OPT,
) -> MaximalDistanceCheck:
    """Test whether any output exceeds the candidate's relative entropy to its mean.

    ``D(output(phi) || psi)`` is sampled on ``grid_n`` angles in ``[0, pi]``
    and each local maximum is refined by golden section.
    """
    q_z = candidate.ensemble.mean_output.z
    if abs(q_z) >= 1.0:
        raise DomainError("mean output is pure")
    phis = np.linspace(0.0, math.pi, grid_n)
    r, rz = _radius(params, phis)
    vals = _rel_ent_axis(r, rz, q_z)

    def d(p):
        rr, zz = _radius(params, p)
        return float(_rel_ent_axis(float(rr), float(zz), q_z))

    phi_best, d_best = refine_grid_max(d, phis, vals, tol=PHI_TOL)
    violation = d_best - candidate.capacity
    return MaximalDistanceCheck(violation <= eps_opt, violation, phi_best)


def resolve_indeterminate(
    params: ChannelParams, grid_n: int = GRID_N
) -> CapacitySolution:
    """Resolve a channel with ``A`` in (0, 1/2).

    Each two-state form (pole pair, symmetric off-axis pair) is accepted if it
    passes the maximal-distance test; otherwise the three-state optimum is
    returned.
    """
    diagnostics = []
    candidates = []
    if params.lambda3 != 0.0:
        candidates.append(cond1_solve(params))
    if lambda_m(params) != 0.0:
        candidates.append(cond2_solve(params))
    for cand in candidates:
        check = check_maximal_distance(params, cand, grid_n)
        diagnostics.append((cand.regime.value, cand.capacity, check.max_violation))
        if check.ok:
            return cand.with_certificate(check.max_violation)
    three = three_state_solve(params, grid_n)
    if three is not None:
        check = check_maximal_distance(params, three, grid_n)
        diagnostics.append((three.regime.value, three.capacity, check.max_violation))
        if check.ok:
            return three.with_certificate(check.max_violation)
    raise SolverError(f"no candidate ensemble is certified optimal: {diagnostics}")


def holevo_information(params: ChannelParams, ensemble: Ensemble) -> float:
    """``S(mean output) - sum_i p_i S(output_i)`` in bits."""
    mean = np.zeros(3)
    avg_entropy = 0.0
    for p, s in zip(ensemble.probabilities, ensemble.inputs):
        out = apply_channel(params, s)
        mean += p * out.as_array()
        avg_entropy += p * von_neumann_entropy(out)
    norm = float(np.linalg.norm(mean))
    mean_entropy = 1.0 - 0.5 * f(min(norm, 1.0))
    return mean_entropy - avg_entropy


def _trivial_solution(params: ChannelParams, capacity: float, ensemble: Ensemble, orth: bool):
    return CapacitySolution(
        capacity=capacity,
        regime=Regime.DEGENERATE,
        q_z=ensemble.mean_output.z,
        phi0=None,
        ensemble=ensemble,
        orthogonal_inputs=orth,
    )


def _attach(sol: CapacitySolution, cls: Classification) -> CapacitySolution:
    return CapacitySolution(
        sol.capacity, sol.regime, sol.q_z, sol.phi0, sol.ensemble,
        sol.orthogonal_inputs, cls, sol.max_violation,
    )


def holevo_capacity(params: ChannelParams, grid_n: int = GRID_N) -> CapacitySolution:
    """Holevo capacity and an optimal ensemble for a CPTP channel in the family.

    Dispatches on :func:`classify`; every non-degenerate result is certified
    with :func:`check_maximal_distance`.

    Raises
    ------
    NotCPTPError
        If the parameters are not CPTP.
    SolverError
        If no candidate ensemble can be certified.
    """
    cls = classify(params)
    l1, l2, l3, t = params.as_tuple()
    lm = cls.lambda_m

    if cls.tag in (Tag.ZERO_CHANNEL, Tag.CONSTANT_OUTPUT):
        ens = Ensemble.from_inputs(params, (1.0,), (BlochVector(0.0, 0.0, 1.0),))
        return _attach(_trivial_solution(params, 0.0, ens, False), cls)
    if t == 0.0 and abs(l1) == 1.0 and abs(l2) == 1.0 and abs(l3) == 1.0:
        ens = Ensemble.from_inputs(
            params, (0.5, 0.5), (BlochVector(0.0, 0.0, 1.0), BlochVector(0.0, 0.0, -1.0))
        )
        return _attach(_trivial_solution(params, 1.0, ens, True), cls)

    if cls.tag is Tag.INDETERMINATE:
        return _attach(resolve_indeterminate(params, grid_n), cls)

    if l3 == 0.0:
        sol = cond2_solve(params)
    elif cls.tag is Tag.LINE_OUTPUT:
        sol = cond1_solve(params) if lm == 0.0 else cond2_solve(params)
    elif cls.tag is Tag.UNITAL_ZERO_SHIFT:
        sol = cond1_solve(params) if abs(l3) >= lm else cond2_solve(params)
    elif cls.tag is Tag.CONDITION1:
        sol = cond1_solve(params)
    else:
        sol = cond2_solve(params)

    check = check_maximal_distance(params, sol, grid_n)
    if not check.ok:
        raise SolverError(
            f"{sol.regime.value} solution for {params.as_tuple()} fails the maximal-distance"
            f" test by {check.max_violation:.3e}"
        )
    return _attach(sol.with_certificate(check.max_violation), cls)
