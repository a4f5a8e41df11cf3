import math

import numpy as np
import pytest

from qubitcap.classifier import (
    EPS_A,
    SubCase,
    Tag,
    classify,
    compute_A,
    lambda_m,
    radial_extremum,
)
from qubitcap.entropy_bloch import (
    ChannelParams,
    amplitude_damping,
    extremal_channel,
    shifted_depolarizing,
)
from qubitcap.exceptions import NotCPTPError
from qubitcap.oracle import sample_cptp

# A for (0.6, 0.6, 0.5, 0.5) and (0.5, 0.435, 0.435, 0.5), exact rationals
A_THREE_A = 0.25 * 0.25 / (0.36 - 0.25) - 1 + 0.36 + 0.25
A_THREE_B = 0.25 * 0.435**2 / (0.25 - 0.435**2) - 1 + 0.25 + 0.25

RANDOM = [sample_cptp(seed) for seed in range(400)]


@pytest.mark.parametrize(
    "params, expected",
    [
        (ChannelParams(0.6, 0.6, 0.5, 0.5), 0.6),
        (ChannelParams(0.5, 0.435, 0.435, 0.5), 0.5),
        (ChannelParams(0, 0, 1, 0), 0.0),
        (ChannelParams(-0.3, 0.2, 0.1, 0), 0.3),
    ],
)
def test_lambda_m(params, expected):
    assert lambda_m(params) == expected


@pytest.mark.parametrize(
    "params, expected, reported_value",
    [
        (ChannelParams(0.6, 0.6, 0.5, 0.5), A_THREE_A, 0.178),
        (ChannelParams(0.5, 0.435, 0.435, 0.5), A_THREE_B, 0.278),
    ],
)
def test_compute_A_examples(params, expected, reported_value):
    assert compute_A(params) == pytest.approx(expected, abs=1e-14)
    assert compute_A(params) == pytest.approx(reported_value, abs=1e-3)


@pytest.mark.parametrize("mu", np.linspace(0.05, 0.95, 19))
def test_compute_A_amplitude_damping_is_zero(mu):
    assert compute_A(amplitude_damping(mu)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("gamma", np.linspace(0.1, 1.4, 7))
@pytest.mark.parametrize("delta", np.linspace(0.1, 3.0, 7))
def test_compute_A_extremal_is_zero(gamma, delta):
    p = extremal_channel(gamma, delta)
    if abs(lambda_m(p) - abs(p.lambda3)) <= EPS_A:
        pytest.skip("lambda_m equals |lambda3|")
    assert compute_A(p) == pytest.approx(0.0, abs=1e-12)


def test_compute_A_undefined_when_lm_equals_l3():
    assert compute_A(shifted_depolarizing(0.5)) is None
    assert compute_A(ChannelParams(0.3, 0.3, -0.3 + 1e-10, 0.1)) is None


def test_radial_extremum_examples():
    ext = radial_extremum(amplitude_damping(0.5))
    assert ext.r_ex == pytest.approx(1.0, abs=1e-12)
    # l3 t / (lm^2 - l3^2) = 0.25 / 0.25
    assert math.cos(ext.phi_star) == pytest.approx(1.0, abs=1e-12)

    ext = radial_extremum(ChannelParams(0.6, 0.6, 0.5, 0.5))
    assert ext is None or ext.r_ex == pytest.approx(math.sqrt(1 + A_THREE_A))

    # arithmetic probe only; this parameter set is not CPTP
    p = ChannelParams.unchecked(0.5, 0.3, 0.8, 0.1)
    ext = radial_extremum(p)
    assert ext is not None
    assert math.cos(ext.phi_star) == pytest.approx(0.08 / (0.25 - 0.64))
    assert ext.r_ex**2 == pytest.approx(compute_A(p) + 1, abs=1e-12)
    # the output radius at phi_star is the extremal radius
    r2 = 0.25 * math.sin(ext.phi_star) ** 2 + (0.1 + 0.8 * math.cos(ext.phi_star)) ** 2
    assert r2 == pytest.approx(ext.r_ex**2, abs=1e-12)

    with pytest.raises(ValueError):
        radial_extremum(shifted_depolarizing(0.5))


@pytest.mark.parametrize(
    "params, tag, sub_case",
    [
        (shifted_depolarizing(0.5), Tag.CONDITION1, SubCase.LM_EQUALS_L3),
        (amplitude_damping(0.5), Tag.CONDITION2, SubCase.LM_ABOVE_L3_A_NONPOS),
        (ChannelParams(0.6, 0.6, 0.5, 0.5), Tag.INDETERMINATE, SubCase.NONE),
        (ChannelParams(0.5, 0.435, 0.435, 0.5), Tag.INDETERMINATE, SubCase.NONE),
        (ChannelParams(0.2, 0.1, 0.6, 0.3), Tag.CONDITION1, SubCase.LM_BELOW_L3_A_NONPOS),
        (ChannelParams(0, 0, 0, 0), Tag.ZERO_CHANNEL, SubCase.NONE),
        (ChannelParams(0, 0, 0, 0.5), Tag.CONSTANT_OUTPUT, SubCase.NONE),
        (ChannelParams(0.8, 0, 0, 0.6), Tag.LINE_OUTPUT, SubCase.NONE),
        (ChannelParams(0, 0, 0.7, 0.2), Tag.LINE_OUTPUT, SubCase.NONE),
        (ChannelParams(0.8, 0.5, 0.3, 0), Tag.UNITAL_ZERO_SHIFT, SubCase.NONE),
    ],
)
def test_classify_examples(params, tag, sub_case):
    c = classify(params)
    assert c.tag is tag
    assert c.sub_case is sub_case


def test_classify_condition1_above_half():
    # lambda_m slightly above lambda3 with a strong shift pushes A past 1/2
    p = ChannelParams(0.52, 0.52, 0.5, 0.45)
    A = compute_A(p)
    assert A >= 0.5
    c = classify(p)
    assert c.tag is Tag.CONDITION1 and c.sub_case is SubCase.A_AT_LEAST_HALF


def test_classify_orthogonality_prediction():
    assert classify(shifted_depolarizing(0.5)).orthogonality_prediction == "orthogonal"
    assert classify(amplitude_damping(0.5)).orthogonality_prediction == "non-orthogonal"
    c = classify(ChannelParams(0.6, 0.6, 0.5, 0.5))
    assert c.orthogonality_prediction is None
    assert c.two_states_suffice is None


def test_classify_rejects_non_cptp():
    with pytest.raises(NotCPTPError):
        classify(ChannelParams.unchecked(0.8, 0.1, 0.1, 0.7))


@pytest.mark.parametrize("params", RANDOM[:200])
def test_A_nonpositive_when_extremum_is_interior(params):
    lm, l3, t = lambda_m(params), params.lambda3, params.t
    if abs(lm - abs(l3)) <= EPS_A:
        return
    if abs(l3 * t / (lm * lm - l3 * l3)) < 1.0:
        assert compute_A(params) <= EPS_A


@pytest.mark.parametrize("params", RANDOM)
def test_A_nonpositive_when_lm_below_l3(params):
    if lambda_m(params) < abs(params.lambda3) - EPS_A:
        assert compute_A(params) <= 0.0


def _key(c):
    return (c.tag, c.sub_case)


@pytest.mark.parametrize("params", RANDOM[:200] + [ChannelParams(0.6, 0.6, 0.5, 0.5)])
def test_classify_symmetry_invariance(params):
    l1, l2, l3, t = params.as_tuple()
    ref = _key(classify(params))
    assert _key(classify(ChannelParams(l2, l1, l3, t))) == ref
    assert _key(classify(ChannelParams(-l1, -l2, l3, t))) == ref
    assert _key(classify(ChannelParams(l1, l2, l3, -t))) == ref


@pytest.mark.parametrize("params", RANDOM)
def test_exactly_one_main_tag(params):
    c = classify(params)
    main = {Tag.CONDITION1, Tag.CONDITION2, Tag.INDETERMINATE}
    degenerate = set(Tag) - main
    assert (c.tag in main) != (c.tag in degenerate)
    if c.tag is Tag.INDETERMINATE:
        assert EPS_A < c.A < 0.5 - EPS_A
