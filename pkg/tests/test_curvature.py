import math

import numpy as np
import pytest

from hardylab.curvature import (CurvatureHypothesis, HypKind, comparison_margin, curvature_gate, gate_grid,
                                p_laplacian_radial, ricci_n_direction, supersolution_margin, volume_ratio,
                                volume_ratio_limit)
from hardylab.model import build_model
from hardylab.trials import RadialTrial
from hardylab.weights import WeightSpec


def identity_trial(m):
    return RadialTrial(lambda r: np.asarray(r, float), lambda r: np.ones_like(np.asarray(r, float)),
                       left_order=1.0, support=(0.0, m.diam), second=lambda r: np.zeros_like(np.asarray(r, float)))


@pytest.mark.parametrize("N", [3, 4.5, math.inf])
@pytest.mark.parametrize("direction", ["radial", "tangential"])
def test_ricci_round_s3_is_n_minus_one(s3, N, direction):
    assert ricci_n_direction(s3, 1.0, N, direction) == pytest.approx(2.0)


def test_ricci_weighted_examples():
    m = build_model(2, 1, [0, 1])
    assert ricci_n_direction(m, 0.3, math.inf, "radial") == pytest.approx(1 - math.cos(0.3))
    assert ricci_n_direction(m, math.pi / 2, math.inf, "tangential") == pytest.approx(1.0)


def test_ricci_radial_against_second_difference():
    m = build_model(2, 1, [0, 1])
    r, h = 0.3, 1e-4
    d2 = (m.psi(r + h) - 2 * m.psi(r) + m.psi(r - h)) / h**2
    assert ricci_n_direction(m, r, math.inf, "radial") == pytest.approx(1 + d2, rel=1e-6)


def test_ricci_n_equal_n_needs_constant_density():
    with pytest.raises(ValueError):
        ricci_n_direction(build_model(2, 1, [0, 0.2]), 1.0, 2, "radial")
    with pytest.raises(ValueError):
        ricci_n_direction(build_model(3), 1.0, 2, "radial")


def test_comparison_margin_examples(s2):
    hyp = CurvatureHypothesis(HypKind.RIC_N, 2)
    assert comparison_margin(s2, hyp, math.pi / 2) == pytest.approx(2 / math.pi)
    assert 0 < comparison_margin(s2, hyp, 1e-7) < 1e-6
    m = build_model(2, 1, [0, 1])
    lam = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 1.0)
    assert comparison_margin(m, lam, math.pi / 2) == pytest.approx(2 / math.pi)


def test_comparison_margin_is_bound_minus_laplacian():
    m = build_model(3, 1, [0, 0.25])
    hyp = CurvatureHypothesis(HypKind.RIC_INF_K, 0.25)
    r = np.linspace(0.2, 3.0, 9)
    direct = (2 + 4 * 0.25) / r - m.laplacian_r(r)
    assert np.allclose(comparison_margin(m, hyp, r), direct, rtol=1e-12, atol=1e-12)


def test_volume_ratio_examples(s2):
    assert volume_ratio(s2, 1, 2, math.pi / 2) == pytest.approx(2 / math.pi)
    assert volume_ratio(s2, 3, 0, math.pi / 4) == pytest.approx(math.sin(math.pi / 4) / (math.pi / 4))
    ok, last = volume_ratio_limit(s2, 2, 0.0)
    assert ok and last == pytest.approx(1.0)


def test_volume_ratio_limits(s3):
    assert volume_ratio_limit(s3, 1, 3)[0]
    assert not volume_ratio_limit(s3, 1, 3.5)[0]
    assert volume_ratio_limit(s3, 3, 0.0)[0]
    assert not volume_ratio_limit(build_model(3, 1, [0, 0.25]), 3, 0.25)[0]


def test_gate_passes_and_fills_margins():
    hyp = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.5)
    ok, reasons = curvature_gate(build_model(2, 1, [0, 0.5]), hyp)
    assert ok, reasons
    assert len(hyp.margin_grid) == len(gate_grid(build_model(2)))


def test_gate_rejects_violations():
    ok, reasons = curvature_gate(build_model(2, 1, [0, 2.0]), CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 3.0))
    assert not ok and any("radial" in r for r in reasons)
    ok, reasons = curvature_gate(build_model(2, 1, [0, 0.5]), CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.2))
    assert not ok and any("lambda" in r for r in reasons)
    ok, reasons = curvature_gate(build_model(2, 1, [0, 0.5]), CurvatureHypothesis(HypKind.RIC_INF_K, 0.4))
    assert not ok and any("k=" in r for r in reasons)


def test_p_laplacian_reduces_to_laplacian(s3):
    r = np.linspace(0.3, 2.8, 7)
    out = p_laplacian_radial(s3, identity_trial(s3), 2.0, r)
    assert np.allclose(out, 2 / np.tan(r))
    m = build_model(2, 1, [0, 1])
    assert p_laplacian_radial(m, identity_trial(m), 2.0, math.pi / 2) == pytest.approx(1.0)


def test_p_laplacian_difference_path_matches_analytic(s2):
    from hardylab.weights import rho_power
    w = WeightSpec("power", 3, -3)
    f = rho_power(w, s2, 0.5)
    g = RadialTrial(f.value, f.derivative, f.left_order, f.support)
    r = np.array([0.4, 1.2, 2.5])
    assert np.allclose(p_laplacian_radial(s2, f, 3, r), p_laplacian_radial(s2, g, 3, r), rtol=1e-6)


def test_sphere_plap_spot_value(s2):
    from hardylab.weights import rho_power
    f = rho_power(WeightSpec("power", 3, -3), s2, 0.5)
    assert -p_laplacian_radial(s2, f, 3, math.pi / 2) == pytest.approx(1 / math.pi**2, rel=1e-12)


def test_supersolution_margin_power_weight(s2):
    w = WeightSpec("power", 3, -4, alpha=0.5)
    r = math.pi / 2
    a, p, b, N = 0.5, 3, -4, 2
    formula = abs(a) ** p * r ** ((a - 1) * (p - 1) - 1) * (b + N) * (1 - N + r * s2.laplacian_r(r))
    val = supersolution_margin(s2, w, r)
    assert val == pytest.approx(formula, rel=1e-12)
    assert val >= 0


def test_supersolution_margin_log_weight_nonnegative(s2):
    w = WeightSpec("log", 2, 1, alpha=1, d=1.5 * math.pi)
    r = gate_grid(s2, 256)[5:-5]
    assert np.min(supersolution_margin(s2, w, r)) >= 0


def test_supersolution_degenerate_constant(s2):
    with pytest.raises(ValueError):
        supersolution_margin(s2, WeightSpec("power", 3, -1, alpha=1.0), 1.0)
