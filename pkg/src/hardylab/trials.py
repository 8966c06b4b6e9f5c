"""Radial trial functions and the standard trial suite."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .model import RadialModel

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialTrial:
    """A radial function u(r) on [0, diam] with its derivative.

    ``left_order`` and ``left_log_order`` describe the behaviour near the pole,
    u ~ r^kappa [log(d/r)]^ell; they feed quadrature endpoint hints.
    ``breakpoints`` lists interior radii where u is only Lipschitz.
    """

    value: Fn
    derivative: Fn
    left_order: float
    support: tuple[float, float]
    smooth_at_pole: bool = True
    second: Optional[Fn] = None
    left_log_order: float = 0.0
    breakpoints: tuple[float, ...] = ()
    name: str = "trial"

    def __call__(self, r):
        return self.value(r)

    def scaled(self, t: float) -> "RadialTrial":
        v, dv, d2 = self.value, self.derivative, self.second
        return replace(
            self,
            value=lambda r: t * v(r),
            derivative=lambda r: t * dv(r),
            second=None if d2 is None else (lambda r: t * d2(r)),
            name=f"{t:g}*{self.name}",
        )

    def deriv_exponents(self) -> tuple[float, float]:
        """(power, log power) of |u'| near the pole."""
        if self.left_order != 0:
            return self.left_order - 1.0, self.left_log_order
        # u ~ L^ell with L = log(d/r): u' ~ r^-1 L^(ell-1)
        return -1.0, self.left_log_order - 1.0

    def is_zero(self) -> bool:
        a, b = self.support
        return b <= a


def check_derivative(u: RadialTrial, rng: np.random.Generator, npts: int = 16, rtol: float = 1e-5) -> bool:
    """Finite-difference spot check of u' at random interior points of the support."""
    a, b = u.support
    pts = sorted(u.breakpoints)
    r = rng.uniform(a + 0.02 * (b - a), b - 0.02 * (b - a), npts)
    ok = True
    for x in r:
        h = 1e-6 * (b - a)
        if any(abs(x - q) < 4 * h for q in pts):
            continue
        fd = (u.value(x + h) - u.value(x - h)) / (2 * h)
        ex = u.derivative(x)
        scale = max(abs(ex), abs(fd), 1e-8 * (1 + abs(u.value(x))))
        ok &= abs(fd - ex) <= rtol * scale
    return bool(ok)


def zero_trial(m: RadialModel) -> RadialTrial:
    z = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return RadialTrial(z, z, left_order=1.0, support=(0.0, 0.0), second=z, name="zero")


def cos_poly(m: RadialModel, j: int, b: float = 0.0) -> RadialTrial:
    """u = (1 - cos(r/R))^j (1 + b cos(r/R)); smooth on the sphere, order 2j at the pole."""
    R = m.R
    # work in v = 1 - cos = 2 sin^2(x/2) so small radii keep full relative precision
    g = Polynomial([0.0, 1.0]) ** j * Polynomial([1.0 + b, -b])
    g1, g2 = g.deriv(1), g.deriv(2)

    def _v(x):
        return 2.0 * np.sin(0.5 * x) ** 2

    def val(r):
        return g(_v(np.asarray(r, dtype=float) / R))

    def der(r):
        x = np.asarray(r, dtype=float) / R
        return g1(_v(x)) * np.sin(x) / R

    def sec(r):
        x = np.asarray(r, dtype=float) / R
        v, s = _v(x), np.sin(x)
        return (g2(v) * s * s + g1(v) * np.cos(x)) / R**2

    return RadialTrial(val, der, left_order=2.0 * j, support=(0.0, m.diam), second=sec,
                       name=f"cospoly(j={j},b={b:g})")


def smoothstep(t):
    """C^2 quintic ramp from 0 (t<=0) to 1 (t>=1)."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10 - 15 * t + 6 * t * t)


def dsmoothstep(t):
    inside = (t > 0) & (t < 1)
    t = np.clip(t, 0.0, 1.0)
    return np.where(inside, 30 * t * t * (1 - t) ** 2, 0.0)


def power_bump(m: RadialModel, kappa: float, width: float = 0.75) -> RadialTrial:
    """u = r^kappa * (1 - smoothstep) cutting off between width*diam and diam."""
    D = m.diam
    a, b = width * D * 0.6, width * D

    def cut(r):
        return 1 - smoothstep((r - a) / (b - a))

    def dcut(r):
        return -dsmoothstep((r - a) / (b - a)) / (b - a)

    def val(r):
        r = np.asarray(r, dtype=float)
        return r**kappa * cut(r)

    def der(r):
        r = np.asarray(r, dtype=float)
        return kappa * r ** (kappa - 1) * cut(r) + r**kappa * dcut(r)

    return RadialTrial(val, der, left_order=kappa, support=(0.0, b), smooth_at_pole=True,
                       breakpoints=(a,), name=f"powbump(k={kappa:g},w={width:g})")


def power_profile(m: RadialModel, kappa: float, decay: float = 0.0) -> RadialTrial:
    """u = (R sin(r/(2R))*2)^kappa * exp(-decay r): chordal distance power, Lipschitz at the antipode."""
    R = m.R

    def val(r):
        r = np.asarray(r, dtype=float)
        return (2 * R * np.sin(r / (2 * R))) ** kappa * np.exp(-decay * r)

    def der(r):
        r = np.asarray(r, dtype=float)
        ch = 2 * R * np.sin(r / (2 * R))
        return (kappa * ch ** (kappa - 1) * np.cos(r / (2 * R)) - decay * ch**kappa) * np.exp(-decay * r)

    return RadialTrial(val, der, left_order=kappa, support=(0.0, m.diam), smooth_at_pole=False,
                       name=f"chord(k={kappa:g},a={decay:g})")


def with_inner_cutoff(u: RadialTrial, eps: float) -> RadialTrial:
    """Multiply u by a C^2 ramp vanishing on [0, eps] and equal to 1 beyond 2 eps."""
    v, dv = u.value, u.derivative

    def val(r):
        r = np.asarray(r, dtype=float)
        return v(r) * smoothstep((r - eps) / eps)

    def der(r):
        r = np.asarray(r, dtype=float)
        return dv(r) * smoothstep((r - eps) / eps) + v(r) * dsmoothstep((r - eps) / eps) / eps

    a, b = u.support
    return replace(u, value=val, derivative=der, second=None, left_order=0.0, left_log_order=0.0,
                   support=(max(a, eps), b), breakpoints=tuple(sorted(set(u.breakpoints) | {2 * eps})),
                   name=f"{u.name}|cut{eps:g}")


def kappa_floor(n: int, p: float, beta: float, log: bool = False) -> float:
    """Smallest pole order kappa keeping both power-weight integrals finite.

    lhs ~ r^{(kappa-1)p + p+beta + n-1}, rhs ~ r^{kappa p + beta + n-1} for the
    distance weight; for the log weight the r-powers are (kappa-1)p + n-1 and
    kappa p - p + n - 1. Both must exceed -1.
    """
    if log:
        return max(1.0 - n / p, 0.0)
    return max((-beta - n) / p, 0.0)


def standard_suite(m: RadialModel, p: float, beta: float, log: bool = False) -> list[RadialTrial]:
    """At least twenty radial trials vanishing at the pole."""
    suite: list[RadialTrial] = []
    for j in (1, 2, 3):
        for b in (0.0, 0.5, -0.5):
            suite.append(cos_poly(m, j, b))
    k0 = kappa_floor(m.n, p, beta, log)
    for dk in (0.15, 0.4, 1.0, 2.0):
        suite.append(power_bump(m, k0 + dk, 0.9))
        suite.append(power_bump(m, k0 + dk, 0.5))
    for dk in (0.3, 1.0, 2.5):
        suite.append(power_profile(m, k0 + dk, 0.0))
        suite.append(power_profile(m, k0 + dk, 1.0 / m.R))
    return suite
