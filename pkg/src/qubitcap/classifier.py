"""Regime classification of channels via ``lambda_m`` and the parameter ``A``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .entropy_bloch import ChannelParams, is_cptp
from .exceptions import NotCPTPError

__all__ = [
    "EPS_A",
    "Tag",
    "SubCase",
    "Classification",
    "RadialExtremum",
    "lambda_m",
    "compute_A",
    "radial_extremum",
    "classify",
    "require_cptp",
]

EPS_A = 1e-9


class Tag(str, Enum):
    CONDITION1 = "Condition1"
    CONDITION2 = "Condition2"
    INDETERMINATE = "Indeterminate"
    UNITAL_ZERO_SHIFT = "UnitalZeroShift"
    ZERO_CHANNEL = "ZeroChannel"
    LINE_OUTPUT = "LineOutput"
    CONSTANT_OUTPUT = "ConstantOutput"

    def __str__(self):
        return self.value


class SubCase(str, Enum):
    LM_EQUALS_L3 = "lm_equals_l3"
    LM_BELOW_L3_A_NONPOS = "lm_below_l3_A_nonpos"
    A_AT_LEAST_HALF = "A_at_least_half"
    LM_ABOVE_L3_A_NONPOS = "lm_above_l3_A_nonpos"
    NONE = "none"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Classification:
    tag: Tag
    A: Optional[float]  # None when lambda_m == |lambda3|
    lambda_m: float
    sub_case: SubCase = SubCase.NONE

    @property
    def two_states_suffice(self) -> Optional[bool]:
        """True when two states are guaranteed optimal, None if undecided."""
        if self.tag is Tag.INDETERMINATE:
            return None
        return True

    @property
    def orthogonality_prediction(self) -> Optional[str]:
        if self.tag is Tag.CONDITION1:
            return "orthogonal"
        if self.tag is Tag.CONDITION2:
            return "non-orthogonal"
        return None


@dataclass(frozen=True)
class RadialExtremum:
    phi_star: float
    r_ex: float


def require_cptp(params: ChannelParams) -> None:
    report = is_cptp(params)
    if not report.ok:
        raise NotCPTPError(report.diagnostic)


def lambda_m(params: ChannelParams) -> float:
    return max(abs(params.lambda1), abs(params.lambda2))


def compute_A(params: ChannelParams) -> Optional[float]:
    """Return ``t^2 l3^2 / (lm^2 - l3^2) - 1 + lm^2 + t^2``.

    ``None`` marks the undefined case ``lambda_m == |lambda3|`` (within
    ``EPS_A``), where the first term blows up.
    """
    lm = lambda_m(params)
    l3, t = params.lambda3, params.t
    if abs(lm - abs(l3)) <= EPS_A:
        return None
    return t * t * l3 * l3 / (lm * lm - l3 * l3) - 1.0 + lm * lm + t * t


def radial_extremum(params: ChannelParams) -> Optional[RadialExtremum]:
    """Off-pole extremum of the output radius along the principal ellipse.

    Returns ``None`` when ``|l3 t / (lm^2 - l3^2)| > 1`` (no extremum with
    ``sin(phi) != 0``). Raises ``ValueError`` if ``lambda_m == |lambda3|``.
    """
    A = compute_A(params)
    if A is None:
        raise ValueError("radial extremum undefined for lambda_m == |lambda3|")
    lm = lambda_m(params)
    l3, t = params.lambda3, params.t
    c = l3 * t / (lm * lm - l3 * l3)
    if abs(c) > 1.0:
        return None
    return RadialExtremum(math.acos(c), math.sqrt(max(A + 1.0, 0.0)))


def classify(params: ChannelParams) -> Classification:
    """Assign the channel to a regime.

    Degenerate tags are checked first, in a fixed order; otherwise the
    two-state conditions are tested with boundary values of ``A`` and of
    ``lambda_m - |lambda3|`` counted as two-state regimes.
    """
    require_cptp(params)
    l1, l2, l3, t = params.as_tuple()
    lm = lambda_m(params)
    n_zero = sum(v == 0.0 for v in (l1, l2, l3))

    if n_zero == 3:
        tag = Tag.ZERO_CHANNEL if t == 0.0 else Tag.CONSTANT_OUTPUT
        return Classification(tag, compute_A(params), lm)
    if n_zero == 2 or (l3 != 0.0 and lm == 0.0):
        return Classification(Tag.LINE_OUTPUT, compute_A(params), lm)
    if t == 0.0:
        return Classification(Tag.UNITAL_ZERO_SHIFT, compute_A(params), lm)

    A = compute_A(params)
    if A is None:
        return Classification(Tag.CONDITION1, None, lm, SubCase.LM_EQUALS_L3)
    if lm < abs(l3):
        return Classification(Tag.CONDITION1, A, lm, SubCase.LM_BELOW_L3_A_NONPOS)
    if A >= 0.5 - EPS_A:
        return Classification(Tag.CONDITION1, A, lm, SubCase.A_AT_LEAST_HALF)
    if A <= EPS_A:
        return Classification(Tag.CONDITION2, A, lm, SubCase.LM_ABOVE_L3_A_NONPOS)
    return Classification(Tag.INDETERMINATE, A, lm)
