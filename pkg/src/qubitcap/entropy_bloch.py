"""Entropy functions, Bloch-sphere states and the diagonal qubit channel family.

All logarithms are base 2, so entropies and capacities come out in bits.
The channel family is ``r -> diag(l1, l2, l3) r + (0, 0, t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import DivergenceError, DomainError, NotCPTPError

__all__ = [
    "EPS_NORM",
    "EPS_CP",
    "BlochVector",
    "ChannelParams",
    "CPTPReport",
    "f",
    "f_prime",
    "g",
    "h",
    "binary_entropy",
    "von_neumann_entropy",
    "relative_entropy",
    "density_matrix",
    "apply_channel",
    "choi_matrix",
    "is_cptp",
    "amplitude_damping",
    "shifted_depolarizing",
    "extremal_channel",
]

EPS_NORM = 1e-12
EPS_CP = 1e-12

_LN2 = math.log(2.0)

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


# ---------------------------------------------------------------------------
# scalar entropy functions
# ---------------------------------------------------------------------------


def _f_scalar(x: float) -> float:
    ax = abs(x)
    if not ax <= 1.0:
        raise DomainError(f"f(x) requires |x| <= 1, got {x!r}")
    if ax == 1.0:
        # 0 log 0 = 0
        return 2.0
    return ((1.0 + x) * math.log1p(x) + (1.0 - x) * math.log1p(-x)) / _LN2


def f(x):
    """Return ``(1+x) log2(1+x) + (1-x) log2(1-x)``.

    Accepts a scalar or an array. Values at ``|x| = 1`` use ``0 log 0 = 0``
    and evaluate to exactly 2.

    Raises
    ------
    DomainError
        If any ``|x| > 1``.
    """
    if np.ndim(x) == 0:
        return _f_scalar(float(x))
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if np.any(ax > 1.0) or np.any(np.isnan(x)):
        raise DomainError("f(x) requires |x| <= 1")
    edge = ax == 1.0
    xs = np.where(edge, 0.0, x)
    out = ((1.0 + xs) * np.log1p(xs) + (1.0 - xs) * np.log1p(-xs)) / _LN2
    return np.where(edge, 2.0, out)


def f_prime(x):
    """Derivative of :func:`f`, ``log2((1+x)/(1-x))``. Requires ``|x| < 1``."""
    if np.ndim(x) == 0:
        x = float(x)
        if not abs(x) < 1.0:
            raise DomainError(f"f_prime(x) requires |x| < 1, got {x!r}")
        return 2.0 * math.atanh(x) / _LN2
    x = np.asarray(x, dtype=float)
    if not np.all(np.abs(x) < 1.0):
        raise DomainError("f_prime(x) requires |x| < 1")
    return 2.0 * np.arctanh(x) / _LN2


def _check_open_unit(r, name):
    if np.ndim(r) == 0:
        if not 0.0 < float(r) < 1.0:
            raise DomainError(f"{name}(r) requires 0 < r < 1, got {r!r}")
        return float(r)
    r = np.asarray(r, dtype=float)
    if not np.all((r > 0.0) & (r < 1.0)):
        raise DomainError(f"{name}(r) requires 0 < r < 1")
    return r


def g(r):
    """``d/dr (f'(r)/r)``; positive on (0, 1)."""
    r = _check_open_unit(r, "g")
    return 2.0 / ((1.0 - r * r) * r * _LN2) - f_prime(r) / (r * r)


def h(r):
    """``2/(r ln 2) - f'(r)/r**2``; negative on (0, 1)."""
    r = _check_open_unit(r, "h")
    return 2.0 / (r * _LN2) - f_prime(r) / (r * r)


def binary_entropy(p: float) -> float:
    """Shannon entropy of a Bernoulli(p) variable in bits."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    out = 0.0
    for v in (p, 1.0 - p):
        if v > 0.0:
            out -= v * math.log2(v)
    return out


# ---------------------------------------------------------------------------
# states and channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlochVector:
    """Bloch vector of a qubit state, ``rho = (I + r.sigma)/2``."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"Bloch component {name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.x * self.x + self.y * self.y + self.z * self.z > 1.0 + EPS_NORM:
            raise DomainError(f"Bloch vector {self.as_tuple()} lies outside the unit ball")

    @classmethod
    def from_array(cls, arr) -> "BlochVector":
        x, y, z = (float(v) for v in arr)
        return cls(x, y, z)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())

    def dot(self, other: "BlochVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z


@dataclass(frozen=True)
class ChannelParams:
    """Diagonal contraction ``(lambda1, lambda2, lambda3)`` and z shift ``t``.

    Construction validates complete positivity. Use :meth:`unchecked` to build
    parameters that may lie outside the CPTP set (for queries and sweeps).
    """

    lambda1: float
    lambda2: float
    lambda3: float
    t: float
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3", "t"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"channel parameter {name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.checked:
            report = is_cptp(self)
            if not report.ok:
                raise NotCPTPError(report.diagnostic)

    @classmethod
    def unchecked(cls, lambda1, lambda2, lambda3, t) -> "ChannelParams":
        return cls(lambda1, lambda2, lambda3, t, checked=False)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3, self.t)

    def replace(self, **changes) -> "ChannelParams":
        vals = dict(zip(("lambda1", "lambda2", "lambda3", "t"), self.as_tuple()))
        vals.update(changes)
        return ChannelParams(**vals, checked=self.checked)


def _entropy_from_norm(r: float) -> float:
    return 1.0 - 0.5 * f(min(r, 1.0))


def von_neumann_entropy(state: BlochVector) -> float:
    """Entropy in bits of the qubit state with Bloch vector ``state``."""
    return _entropy_from_norm(state.norm)


def relative_entropy(rho: BlochVector, psi: BlochVector) -> float:
    """Quantum relative entropy ``D(rho || psi)`` in bits.

    Uses the closed form in terms of ``|r|``, ``|q|`` and the angle between
    the two Bloch vectors.

    Raises
    ------
    DivergenceError
        If ``psi`` is pure, where the relative entropy is infinite unless the
        states coincide.
    """
    q = psi.norm
    if q >= 1.0:
        raise DivergenceError("relative entropy to a pure reference state diverges")
    r = min(rho.norm, 1.0)
    # r cos(theta) f'(q) = (r.q / q) f'(q); the term vanishes when r or q is zero
    cross = 0.0 if r == 0.0 or q == 0.0 else rho.dot(psi) / q * f_prime(q)
    value = 0.5 * (f(r) - math.log2(1.0 - q * q) - cross)
    return max(value, 0.0)


def density_matrix(state: BlochVector) -> np.ndarray:
    """2x2 density matrix ``(I + r.sigma)/2``."""
    return 0.5 * (np.eye(2, dtype=complex) + np.tensordot(state.as_array(), _PAULI, axes=1))


def apply_channel(params: ChannelParams, state: BlochVector) -> BlochVector:
    """Image of ``state`` under the channel, ``(l1 x, l2 y, l3 z + t)``."""
    return BlochVector(
        params.lambda1 * state.x,
        params.lambda2 * state.y,
        params.lambda3 * state.z + params.t,
    )


# ---------------------------------------------------------------------------
# complete positivity
# ---------------------------------------------------------------------------


class CPTPReport(NamedTuple):
    ok: bool
    diagnostic: str


def choi_matrix(params: ChannelParams) -> np.ndarray:
    """Unnormalised Choi matrix ``sum_ij |i><j| (x) Phi(|i><j|)``."""
    l1, l2, l3, t = params.as_tuple()
    ident = np.eye(2, dtype=complex)
    sx, sy, sz = _PAULI
    # linear extension of the channel on the Pauli basis
    images = {
        "I": ident + t * sz,
        "X": l1 * sx,
        "Y": l2 * sy,
        "Z": l3 * sz,
    }
    blocks = {
        (0, 0): 0.5 * (images["I"] + images["Z"]),
        (1, 1): 0.5 * (images["I"] - images["Z"]),
        (0, 1): 0.5 * (images["X"] + 1j * images["Y"]),
        (1, 0): 0.5 * (images["X"] - 1j * images["Y"]),
    }
    choi = np.zeros((4, 4), dtype=complex)
    for (i, j), blk in blocks.items():
        choi[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk
    return choi


def is_cptp(params: ChannelParams) -> CPTPReport:
    """Check complete positivity of the channel in closed form.

    The Choi matrix splits into two 2x2 blocks; each is positive
    semidefinite iff its diagonal is nonnegative and its determinant is
    nonnegative. All checks carry the absolute slack ``EPS_CP``.
    """
    l1, l2, l3, t = params.as_tuple()
    if not all(math.isfinite(v) for v in (l1, l2, l3, t)):
        raise DomainError("channel parameters must be finite")
    failures = []
    plus = (1.0 + l3) ** 2 - t * t - (l1 + l2) ** 2
    minus = (1.0 - l3) ** 2 - t * t - (l1 - l2) ** 2
    if plus < -EPS_CP:
        failures.append(
            f"(1+l3)^2 - t^2 >= (l1+l2)^2 violated by {-plus:.3e}"
        )
    if minus < -EPS_CP:
        failures.append(
            f"(1-l3)^2 - t^2 >= (l1-l2)^2 violated by {-minus:.3e}"
        )
    if 1.0 + l3 - abs(t) < -EPS_CP:
        failures.append("1 + l3 >= |t| violated")
    if 1.0 - l3 - abs(t) < -EPS_CP:
        failures.append("1 - l3 >= |t| violated")
    if failures:
        return CPTPReport(False, "not CPTP: " + "; ".join(failures))
    return CPTPReport(True, "CPTP")


# ---------------------------------------------------------------------------
# named channels
# ---------------------------------------------------------------------------


def _check_mu(mu):
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise DomainError(f"mu must lie in [0, 1], got {mu!r}")
    return mu


def amplitude_damping(mu: float) -> ChannelParams:
    mu = _check_mu(mu)
    s = math.sqrt(mu)
    return ChannelParams(s, s, mu, 1.0 - mu)


def shifted_depolarizing(mu: float) -> ChannelParams:
    mu = _check_mu(mu)
    return ChannelParams(mu, mu, mu, 1.0 - mu)


def extremal_channel(gamma: float, delta: float) -> ChannelParams:
    """Two-Kraus-operator channel parametrised by angles ``gamma``, ``delta``."""
    cg, cd = math.cos(gamma), math.cos(delta)
    return ChannelParams(cd, cg, cg * cd, math.sin(gamma) * math.sin(delta))
