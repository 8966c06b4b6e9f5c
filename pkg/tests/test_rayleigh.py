import math

import numpy as np
import pytest

from hardylab.model import build_model
from hardylab.rayleigh import (assemble, dense_theta, rayleigh_nodes, rayleigh_quotient, theta_radial, theta_study,
                               theta_truncated, xi_radial)

# finest-grid (1024) values on the unit 2-sphere at cutoffs pi * (1e-2, 1e-3, 1e-4)
FROZEN = {1e-2: 0.13424741514267877, 1e-3: 0.08334404952121632, 1e-4: 0.060317438226576134}


@pytest.mark.parametrize("frac", [1e-2, 1e-4])
def test_matches_dense_oracle(s2, frac):
    eps = frac * s2.diam
    assert theta_truncated(s2, eps, 1024) == pytest.approx(dense_theta(s2, eps, 1024), rel=1e-6)


def test_dense_oracle_three_dimensions(s3):
    eps = 1e-2 * s3.diam
    assert theta_truncated(s3, eps, 256) == pytest.approx(dense_theta(s3, eps, 256), rel=1e-6)


@pytest.mark.parametrize("frac", sorted(FROZEN))
def test_regression_values(s2, frac):
    assert theta_truncated(s2, frac * s2.diam, 1024) == pytest.approx(FROZEN[frac], rel=1e-8)


def test_study_properties(s2):
    res = theta_study(s2)
    assert res.inner_cutoffs == sorted(res.inner_cutoffs, reverse=True)
    cv = res.cutoff_values
    assert cv[0] > cv[1] > cv[2] > 0
    assert res.refinement_change < 0.01
    assert res.residual <= 1e-8
    assert res.theta == res.extrapolated
    assert res.theta > 0


def test_scaling_invariance():
    a = build_model(2, 1.0)
    b = build_model(2, 2.5)
    ta = theta_truncated(a, 1e-3 * a.diam, 512)
    tb = theta_truncated(b, 1e-3 * b.diam, 512)
    assert tb == pytest.approx(ta / 2.5**2, rel=1e-6)


def test_quotient_bounds_eigenvalue(s2):
    eps = 1e-2 * s2.diam
    th = theta_truncated(s2, eps, 512)
    for k in (1, 2, 5):
        q = rayleigh_quotient(s2, lambda r, k=k: np.sin(0.5 * (r - eps)) ** k, eps, 512)
        assert q >= th * (1 - 1e-12)


def test_xi_below_theta(s2):
    gaps = []
    for frac in (1e-2, 1e-3):
        eps = frac * s2.diam
        t, x = theta_truncated(s2, eps, 512), xi_radial(s2, eps, 512)
        assert x <= t
        gaps.append((t - x) / t)
    assert gaps[1] < gaps[0]


def test_nodes_shape(s2):
    nodes = rayleigh_nodes(s2, 0.01, 128)
    assert len(nodes) == 129
    assert nodes[0] == 0.01 and nodes[-1] == pytest.approx(s2.diam)
    assert np.all(np.diff(nodes) > 0)


def test_pencil_symmetric_positive(s2):
    pen = assemble(s2, rayleigh_nodes(s2, 0.01, 64))
    K = np.diag(pen.kd) + np.diag(pen.ko, 1) + np.diag(pen.ko, -1)
    assert np.all(np.linalg.eigvalsh(K) > 0)
    assert np.all(pen.md > 0)


def test_bad_inputs(s2):
    with pytest.raises(ValueError):
        theta_truncated(s2, 0.0, 256)
    with pytest.raises(ValueError):
        theta_truncated(s2, math.pi / 2, 256)
    with pytest.raises(ValueError):
        theta_truncated(s2, 0.01, 16)


def test_gate_on_radial_theta():
    with pytest.raises(ValueError):
        theta_radial(build_model(2, 1, [0, 1.0]), 0.01, 128)
