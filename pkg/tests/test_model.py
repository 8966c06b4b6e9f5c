import math

import numpy as np
import pytest

from hardylab.model import (DirectionKind, build_model, density, geometric_grid, model_from_config,
                            sphere_area_constant, weighted_laplacian_r)


def test_build_plain_sphere():
    m = build_model(2, 1, [])
    assert m.psi_is_constant
    assert m.diam == pytest.approx(math.pi)


def test_build_weighted_three_sphere():
    m = build_model(3, 1, [0, 1])
    assert not m.psi_is_constant
    assert m.psi(0.4) == pytest.approx(math.cos(0.4))


def test_diam_scales_with_radius():
    m = build_model(2, 2, [])
    assert m.diam == pytest.approx(2 * math.pi)
    assert m.inj == m.diam


@pytest.mark.parametrize("r, expected", [(math.pi / 2, 1.0), (math.pi / 4, 0.5)])
def test_density_s3(r, expected):
    assert density(build_model(3), r) == pytest.approx(expected)


def test_density_weighted_s2():
    assert density(build_model(2, 1, [0, 1]), math.pi / 2) == pytest.approx(1.0)


def test_laplacian_examples():
    assert weighted_laplacian_r(build_model(3), math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert weighted_laplacian_r(build_model(2), math.pi / 4) == pytest.approx(1.0)
    assert weighted_laplacian_r(build_model(2, 1, [0, 1]), math.pi / 2) == pytest.approx(1.0)


def test_laplacian_matches_log_sigma_derivative():
    m = build_model(3, 1.3, [0.2, -0.4, 0.1])
    r, h = 1.1, 1e-6
    fd = (np.log(m.sigma(r + h)) - np.log(m.sigma(r - h))) / (2 * h)
    assert weighted_laplacian_r(m, r) == pytest.approx(fd, rel=1e-8)


@pytest.mark.parametrize("n, area", [(2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi**2)])
def test_sphere_area(n, area):
    assert sphere_area_constant(n) == pytest.approx(area, rel=1e-14)


def test_psi_derivatives_against_differences():
    m = build_model(2, 1.5, [0.1, 0.7, -0.3])
    r, h = 0.9, 1e-5
    assert m.dpsi(r) == pytest.approx((m.psi(r + h) - m.psi(r - h)) / (2 * h), rel=1e-8)
    assert m.d2psi(r) == pytest.approx((m.dpsi(r + h) - m.dpsi(r - h)) / (2 * h), rel=1e-7)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        build_model(1)
    with pytest.raises(ValueError):
        build_model(2, -1.0)
    with pytest.raises(ValueError):
        density(build_model(2), 0.0)
    with pytest.raises(ValueError):
        density(build_model(2), math.pi)


def test_config_round_trip():
    m = build_model(3, 2.0, [0.0, 0.5])
    assert model_from_config(m.to_config()) == m


def test_geometric_grid_interior_and_sorted():
    g = geometric_grid(0.0, math.pi, 2048)
    assert len(g) == 2048
    assert np.all(np.diff(g) > 0)
    assert g[0] > 0 and g[-1] < math.pi
    assert g[0] < 1e-8


def test_direction_enum_accepts_strings():
    assert DirectionKind("radial") is DirectionKind.RADIAL
