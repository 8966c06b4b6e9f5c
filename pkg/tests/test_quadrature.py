import math

import numpy as np
import pytest
from scipy.special import sici

from hardylab.quadrature import (DivergentIntegral, EndpointBehavior, LogPart, Verdict, integrate_radial,
                                 integrate_singular, log_integral_valid, log_power_integral, model_integrable)


def test_sine_with_hints(s2):
    res = integrate_radial(s2, np.sin, EndpointBehavior(1.0, 1.0))
    assert res.ok
    assert res.value == pytest.approx(2.0, abs=1e-12)
    assert 2 * math.pi * res.value == pytest.approx(4 * math.pi)


def test_sine_squared(s3):
    res = integrate_radial(s3, lambda r: np.sin(r) ** 2, EndpointBehavior(2.0, 2.0))
    assert res.value == pytest.approx(math.pi / 2, rel=1e-12)


def test_sinc_integral_matches_si(s2):
    res = integrate_radial(s2, lambda r: np.sin(r) / r)
    assert res.verdict is Verdict.CONVERGED
    assert res.value == pytest.approx(sici(math.pi)[0], rel=1e-12)


def test_integrable_power_singularity():
    res = integrate_singular(lambda r: r**-0.98, 0.0, 1.0, EndpointBehavior(-0.98))
    assert res.value == pytest.approx(50.0, rel=1e-10)


def test_singular_with_smooth_factor_against_series():
    # int_0^1 r^-0.9 cos r dr = sum (-1)^k / ((2k)! (2k + 0.1))
    ref = math.fsum((-1) ** k / (math.factorial(2 * k) * (2 * k + 0.1)) for k in range(12))
    res = integrate_singular(lambda r: r**-0.9 * np.cos(r), 0.0, 1.0, EndpointBehavior(-0.9))
    assert res.value == pytest.approx(ref, rel=1e-10)


def test_right_end_singularity():
    res = integrate_singular(lambda r: (1.0 - r) ** -0.5, 0.0, 1.0, EndpointBehavior(0.0, -0.5))
    assert res.value == pytest.approx(2.0, rel=1e-8)


def test_divergent_hint_rule():
    res = integrate_singular(lambda r: 1 / r, 0.0, 1.0, EndpointBehavior(-1.0))
    assert res.verdict is Verdict.DIVERGENT
    assert math.isinf(res.value)
    with pytest.raises(DivergentIntegral):
        raise DivergentIntegral(res, "test")


def test_divergence_from_nondecaying_increments():
    # hints claim a mild singularity but the integrand is 1/r
    res = integrate_singular(lambda r: 1 / r, 0.0, 1.0, EndpointBehavior(-0.5))
    assert res.verdict is Verdict.DIVERGENT


def test_breakpoints_are_respected():
    f = lambda r: np.abs(np.asarray(r) - 0.3)
    res = integrate_singular(f, 0.0, 1.0, breakpoints=(0.3,))
    assert res.value == pytest.approx(0.5 * (0.09 + 0.49), abs=1e-14)


def test_empty_and_malformed_intervals():
    assert integrate_singular(np.sin, 1.0, 1.0).value == 0.0
    with pytest.raises(ValueError):
        integrate_singular(np.sin, 1.0, 0.5)
    with pytest.raises(ValueError):
        integrate_singular(np.sin, 0.0, 1.0, tol=0.0)


def test_result_is_plain_float():
    res = integrate_singular(np.cos, 0.0, 1.0)
    assert type(res.value) is float and type(res.abs_error_estimate) is float


@pytest.mark.parametrize("part, kwargs, expected", [
    ("H1", dict(k1=0, k2=0, s=1, l=None, d=2), 1.0),
    ("H2", dict(k1=0, k2=0, s=1, l=2, d=2), 1.0),
    ("H1", dict(k1=-2, k2=-1, s=1, l=None, d=math.e), 1.0),
    ("H1", dict(k1=-1.5, k2=-1, s=1, l=None, d=2), 2 / math.sqrt(math.log(2))),
])
def test_log_integral_examples(part, kwargs, expected):
    res = log_power_integral(part, **kwargs)
    assert res.ok
    assert res.value == pytest.approx(expected, rel=1e-9)


def test_log_integral_h2_against_incomplete_gamma():
    import mpmath
    mpmath.mp.dps = 30
    ref = float(2 * mpmath.quad(lambda t: t**-0.5 * mpmath.e ** (-t), [0, mpmath.log(2)]))
    res = log_power_integral("H2", -0.5, 0.0, 1.0, 2.0, 2.0)
    assert res.value == pytest.approx(ref, rel=1e-9)


def test_log_validity_conditions():
    assert log_integral_valid("H1", 5.0, -0.5)
    assert log_integral_valid("H1", -1.5, -1.0)
    assert not log_integral_valid("H1", -1.0, -1.0)
    assert not log_integral_valid("H1", -3.0, -1.2)
    assert log_integral_valid("H2", -0.5, 7.0, l=2.0, d=2.0)
    assert not log_integral_valid("H2", -1.0, 0.0, l=2.0, d=2.0)
    assert log_integral_valid("H2", -3.0, 0.0, l=1.5, d=2.0)
    assert log_integral_valid(LogPart.H2, -1.0, 0.0, l=1.5, d=2.0)


def test_invalid_log_integral_short_circuits():
    res = log_power_integral("H2", -1.5, 0.0, 1.0, 2.0, 2.0)
    assert res.verdict is Verdict.DIVERGENT and res.subdivisions == 0


def test_log_integral_argument_checks():
    with pytest.raises(ValueError):
        log_power_integral("H1", 0, 0, 3.0, None, 2.0)
    with pytest.raises(ValueError):
        log_power_integral("H2", 0, 0, 1.0, 0.5, 2.0)


def test_model_integrable_boundary():
    assert model_integrable(-0.999)
    assert not model_integrable(-1.0)
    assert model_integrable(-1.0, -1.01)
    assert not model_integrable(-1.0001, -5.0)
