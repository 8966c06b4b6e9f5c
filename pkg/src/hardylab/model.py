"""Rotationally symmetric closed weighted model manifolds.

A model is a round sphere of radius ``R`` and dimension ``n`` carrying the
measure ``e^{-Psi} dvol`` with a radial density ``Psi(r) = sum_k a_k cos(r/R)^k``.
In geodesic polar coordinates around the north pole the measure reads
``sigma(r) dr dnu(y)`` with ``sigma(r) = (R sin(r/R))^(n-1) e^{-Psi(r)}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import Polynomial


class DirectionKind(str, Enum):
    RADIAL = "radial"
    TANGENTIAL = "tangential"


@dataclass(frozen=True)
class RadialModel:
    n: int
    R: float = 1.0
    psi_coeffs: tuple[float, ...] = ()
    _poly: Polynomial = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not self.R > 0:
            raise ValueError(f"curvature radius must be positive, got {self.R!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "R", float(self.R))
        coeffs = tuple(float(a) for a in self.psi_coeffs)
        object.__setattr__(self, "psi_coeffs", coeffs)
        object.__setattr__(self, "_poly", Polynomial(coeffs if coeffs else (0.0,)))

    @property
    def diam(self) -> float:
        return math.pi * self.R

    @property
    def inj(self) -> float:
        return math.pi * self.R

    @property
    def psi_is_constant(self) -> bool:
        return all(a == 0.0 for a in self.psi_coeffs[1:])

    # Psi and its r-derivatives via the chain rule through c = cos(r/R).
    def psi(self, r):
        return self._poly(np.cos(np.asarray(r, dtype=float) / self.R))

    def dpsi(self, r):
        x = np.asarray(r, dtype=float) / self.R
        return -np.sin(x) / self.R * self._poly.deriv(1)(np.cos(x))

    def d2psi(self, r):
        x = np.asarray(r, dtype=float) / self.R
        c, s = np.cos(x), np.sin(x)
        p1 = self._poly.deriv(1)(c)
        p2 = self._poly.deriv(2)(c) if len(self._poly.coef) > 2 else 0.0 * c
        return (s * s * p2 - c * p1) / self.R**2

    def psi_bounds(self) -> tuple[float, float]:
        """(min, max) of Psi over the manifold, exact through the cosine variable."""
        p = self._poly
        cands = [-1.0, 1.0]
        if len(p.coef) > 2:
            cands += [c.real for c in p.deriv(1).roots() if abs(c.imag) < 1e-14 and -1 <= c.real <= 1]
        vals = p(np.array(cands))
        return float(vals.min()), float(vals.max())

    def warp(self, r):
        return self.R * np.sin(np.asarray(r, dtype=float) / self.R)

    def sigma(self, r):
        """Polar density without domain validation (used inside integrands)."""
        r = np.asarray(r, dtype=float)
        return self.warp(r) ** (self.n - 1) * np.exp(-self.psi(r))

    def laplacian_r(self, r):
        r = np.asarray(r, dtype=float)
        return (self.n - 1) / (self.R * np.tan(r / self.R)) - self.dpsi(r)

    def to_config(self) -> dict:
        return {"n": self.n, "R": self.R, "psi": list(self.psi_coeffs)}


def build_model(n: int, R: float = 1.0, psi_coeffs=()) -> RadialModel:
    return RadialModel(n=n, R=R, psi_coeffs=tuple(psi_coeffs))


def model_from_config(cfg: dict) -> RadialModel:
    return build_model(cfg["n"], cfg.get("R", 1.0), cfg.get("psi", ()))


def _check_interior(m: RadialModel, r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)) or np.any(~(r < m.diam)):
        raise ValueError(f"radius must lie in (0, {m.diam}), got {r}")
    return r


def _scalar_or_array(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def density(m: RadialModel, r):
    """sigma_o(r) = s(r)^(n-1) e^{-Psi(r)} for 0 < r < diam."""
    return _scalar_or_array(m.sigma(_check_interior(m, r)))


def weighted_laplacian_r(m: RadialModel, r):
    """Bakry-Emery Laplacian of the distance function, d/dr log sigma_o."""
    return _scalar_or_array(m.laplacian_r(_check_interior(m, r)))


def sphere_area_constant(n: int) -> float:
    """Area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def geometric_grid(a: float, b: float, npts: int, depth: float = 1e-9) -> np.ndarray:
    """Points in (a, b) accumulating geometrically at both ends.

    Half of the points sit in (a, mid], spaced geometrically down to
    ``a + depth*(b-a)``; the other half mirror them toward ``b``.
    """
    half = npts // 2
    L = b - a
    left = a + np.geomspace(depth * L, 0.5 * L, half)
    right = b - np.geomspace(depth * L, 0.5 * L, npts - half, endpoint=False)[::-1]
    return np.concatenate((left, right))
