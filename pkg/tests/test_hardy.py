import math

import numpy as np
import pytest

from hardylab.curvature import CurvatureHypothesis, HypKind
from hardylab.hardy import (InadmissibleError, TheoremId, admissible, bv_check, hardy_lhs, hardy_quotient,
                            hardy_rhs, is_sharp, sharp_constant, uncertainty_product)
from hardylab.model import build_model
from hardylab.trials import cos_poly, power_bump, standard_suite, zero_trial
from hardylab.weights import WeightSpec

RICN2 = CurvatureHypothesis(HypKind.RIC_N, 2)

# 2 pi int_0^pi (1 - cos r)^3 r^-3 sin r dr, 30-digit tanh-sinh reference
RHS_ONE_MINUS_COS = 2.86617107756689273743555206207
# uncertainty sides for u = 1 - cos r, p = 3 on the unit 2-sphere (mpmath reference)
UNC_LHS, UNC_RHS = 24.107552885033389562, 5.5850536063818546462
BV_REMAINDER = 11.4899087847887980896


def test_admissible_power_example(s2):
    ok, reasons = admissible("T_RicN_power_closed", s2, WeightSpec("power", 3, -4, 0.5), RICN2)
    assert ok, reasons


def test_admissible_rejects_p_equal_n(s2):
    ok, reasons = admissible("T_RicN_power_closed", s2, WeightSpec("power", 2, -4), RICN2)
    assert not ok
    assert any("p in (1,N)" in r for r in reasons)


def test_admissible_log_example(s2):
    w = WeightSpec("log", 2, 1, 1, d=1.5 * s2.diam)
    assert admissible("T_log_RicN_closed", s2, w, RICN2)[0]
    w_eq = WeightSpec("log", 2, 1, 1, d=s2.diam)
    assert not admissible("T_log_RicN_closed", s2, w_eq, RICN2)[0]
    assert admissible("T_log_RicN", s2, w_eq, RICN2)[0]


def test_admissible_wrong_hypothesis_or_weight(s2):
    lam = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.0)
    assert not admissible("T_RicN_power", s2, WeightSpec("power", 3, -4), lam)[0]
    assert not admissible("T_RicN_power", s2, WeightSpec("log", 2, 1, d=4.0), RICN2)[0]


def test_admissible_ricinf_window():
    m = build_model(2, 1, [0, 0.5])
    lam = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.5)
    assert admissible("T_RicInf_lambda", m, WeightSpec("power", 3, -4.5, -0.5), lam)[0]
    ok, reasons = admissible("T_RicInf_lambda", m, WeightSpec("power", 3, -4.5, -0.2), lam)
    assert not ok and any("lambda diam" in r for r in reasons)
    assert not admissible("T_RicInf_lambda", m, WeightSpec("power", 3, -5.5, -0.5), lam)[0]


def test_sharp_constant_examples(s2, s3):
    assert sharp_constant("T_RicN_power_closed", s3, WeightSpec("power", 2, -4),
                          CurvatureHypothesis(HypKind.RIC_N, 3)) == pytest.approx(0.25)
    assert sharp_constant("T_sphere", s2, WeightSpec("power", 3, -3), RICN2) == pytest.approx(1 / 27)
    for p in (2, 3, 4.5):
        m = build_model(2)
        w = WeightSpec("log", p, p - 1, 1, d=2 * m.diam)
        hyp = CurvatureHypothesis(HypKind.RIC_N, min(p, 2) if p < 2 else 2)
        assert sharp_constant("T_log_RicN_closed", m, w, hyp) == pytest.approx(1.0)


def test_sharp_constant_requires_admissible(s2):
    with pytest.raises(InadmissibleError):
        sharp_constant("T_RicN_power_closed", s2, WeightSpec("power", 2, -4), RICN2)


def test_sharpness_flags(s2):
    assert is_sharp("T_RicN_power_closed", s2, WeightSpec("power", 3, -4, 0.5), RICN2)
    assert not is_sharp("T_RicN_power", s2, WeightSpec("power", 4, -4),
                        CurvatureHypothesis(HypKind.RIC_N, 3))
    assert not is_sharp("T_uncertainty", s2, WeightSpec("power", 3, -3),
                        CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0))


def test_hardy_lhs_closed_form(s2):
    val = hardy_lhs(s2, WeightSpec("power", 3, -3), cos_poly(s2, 1))
    assert val == pytest.approx(3 * math.pi**2 / 4, rel=1e-12)


def test_hardy_rhs_regression(s2):
    val = hardy_rhs(s2, WeightSpec("power", 3, -3), cos_poly(s2, 1))
    assert val == pytest.approx(RHS_ONE_MINUS_COS, rel=1e-11)


def test_zero_trial(s2):
    w = WeightSpec("power", 3, -3)
    z = zero_trial(s2)
    assert hardy_lhs(s2, w, z) == 0.0
    assert hardy_rhs(s2, w, z) == 0.0
    with pytest.raises(ValueError):
        hardy_quotient(s2, w, z)
    assert uncertainty_product(s2, 3, z) == (0.0, 0.0)


@pytest.mark.parametrize("t", [0.5, 3.0])
def test_homogeneity(s2, t):
    w = WeightSpec("power", 3, -4, 0.5)
    u = power_bump(s2, 1.0, 0.8)
    assert hardy_lhs(s2, w, u.scaled(t)) == pytest.approx(t**3 * hardy_lhs(s2, w, u), rel=1e-10)
    assert hardy_rhs(s2, w, u.scaled(t)) == pytest.approx(t**3 * hardy_rhs(s2, w, u), rel=1e-10)
    assert hardy_quotient(s2, w, u.scaled(t)) == pytest.approx(hardy_quotient(s2, w, u), rel=1e-10)
    a, b = uncertainty_product(s2, 3, u)
    at, bt = uncertainty_product(s2, 3, u.scaled(t))
    assert at == pytest.approx(t**2 * a, rel=1e-10) and bt == pytest.approx(t**2 * b, rel=1e-10)


def test_quotient_above_sphere_constant(s2):
    q = hardy_quotient(s2, WeightSpec("power", 3, -3), cos_poly(s2, 1))
    assert q >= 1 / 27
    assert q == pytest.approx(3 * math.pi**2 / 4 / RHS_ONE_MINUS_COS, rel=1e-10)


def test_uncertainty_regression(s2):
    lhs, rhs = uncertainty_product(s2, 3, cos_poly(s2, 1))
    assert lhs == pytest.approx(UNC_LHS, rel=1e-10)
    assert rhs == pytest.approx(UNC_RHS, rel=1e-10)
    assert lhs >= rhs


def test_bv_check_theta_zero_is_plain_hardy(s2):
    u = cos_poly(s2, 1)
    lhs, rhs = bv_check(s2, 3, u, 0.0)
    assert lhs == pytest.approx(3 * math.pi**2 / 4, rel=1e-12)
    assert rhs == pytest.approx(RHS_ONE_MINUS_COS / 27, rel=1e-11)


def test_bv_check_with_theta(s2):
    lhs, rhs = bv_check(s2, 3, cos_poly(s2, 1), 1.0)
    expected = RHS_ONE_MINUS_COS / 27 + 2 / 3 * (1 / 3) * BV_REMAINDER
    assert rhs == pytest.approx(expected, rel=1e-10)
    assert lhs >= rhs


def test_bv_check_preconditions(s2, s3):
    with pytest.raises(ValueError):
        bv_check(s3, 3, cos_poly(s3, 1), 0.1)
    with pytest.raises(ValueError):
        bv_check(s2, 3, cos_poly(s2, 1), -0.1)


def test_suite_size_and_vanishing(s2):
    suite = standard_suite(s2, 3, -3)
    assert len(suite) >= 20
    vals = [float(u.value(np.array([1e-9]))[0]) for u in suite]
    assert max(abs(v) for v in vals) < 1e-2


def test_all_theorem_ids_have_constants():
    assert {t.value for t in TheoremId} >= {"T_RicN_power", "T_sphere", "T_log_RicInf_k"}
