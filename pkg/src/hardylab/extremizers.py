"""Near-extremal radial families and sharpness sweeps."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .curvature import CurvatureHypothesis
from .hardy import LOG_THEOREMS, TheoremId, hardy_lhs, hardy_quotient, is_sharp, sharp_constant
from .model import RadialModel
from .trials import RadialTrial, zero_trial
from .weights import WeightSpec

SWEEP_COLUMNS = ("eps", "c_eps", "quotient", "c_eps_pow_p", "sharp_constant", "gap")


@dataclass(frozen=True)
class ExtremalFamily:
    """v_eps for one eps: rising like (rho/s)^(c(eps)) on one side of s, falling on the other.

    For the distance weight the profile is written in r^a; a = 1 is the plain
    distance family and a = (p-n)/(p-1) gives the distance-power family used on
    the round sphere.
    """

    weight: WeightSpec
    eps: float
    s: float
    c_eps: float
    c_half: float
    exponent: float = 1.0


def family_base(m: RadialModel, w: WeightSpec, exponent: float = 1.0) -> float:
    """p c(0): |n+beta| for the distance family, p-1 for the r^a family, beta+1-(alpha-1)(p-1) for log."""
    if w.is_log:
        return -w.gap
    if exponent != 1.0:
        return w.p - 1.0
    return abs(m.n + w.beta)


def c_of_eps(m: RadialModel, w: WeightSpec, eps: float, exponent: float = 1.0) -> float:
    return (family_base(m, w, exponent) + eps) / w.p


def near_extremal(m: RadialModel, w: WeightSpec, eps: float, exponent: float = 1.0) -> RadialTrial:
    """The eps-member of the near-extremal family for weight w."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    fam = extremal_family(m, w, eps, exponent)
    return _family_trial(m, fam)


def extremal_family(m: RadialModel, w: WeightSpec, eps: float, exponent: float = 1.0) -> ExtremalFamily:
    if w.is_log:
        s = math.log(2 * w.d / m.inj)
    else:
        s = 0.5 * m.inj
    return ExtremalFamily(w, eps, s, c_of_eps(m, w, eps, exponent), c_of_eps(m, w, 0.5 * eps, exponent),
                          exponent)


def _family_trial(m: RadialModel, fam: ExtremalFamily) -> RadialTrial:
    s, ci, co, a = fam.s, fam.c_eps, fam.c_half, fam.exponent
    split = 0.5 * m.inj
    if fam.weight.is_log:
        d = fam.weight.d

        def val(r):
            r = np.asarray(r, dtype=float)
            x = np.log(d / r) / s
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(r >= split, x**ci, x ** (-co))

        def der(r):
            r = np.asarray(r, dtype=float)
            x = np.log(d / r) / s
            # d/dr (L/s)^c = -c (L/s)^(c-1) / (s r)
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(r >= split, -ci * x ** (ci - 1), co * x ** (-co - 1)) / (s * r)

        return RadialTrial(val, der, left_order=0.0, left_log_order=-co, support=(0.0, m.diam),
                           smooth_at_pole=False, breakpoints=(split,), name=f"vlog(eps={fam.eps:g})")

    ki, ko = a * ci, -a * co

    def val(r):
        x = np.asarray(r, dtype=float) / s
        with np.errstate(divide="ignore"):
            return np.where(x <= 1.0, x**ki, x**ko)

    def der(r):
        x = np.asarray(r, dtype=float) / s
        with np.errstate(divide="ignore"):
            return np.where(x <= 1.0, ki * x ** (ki - 1), ko * x ** (ko - 1)) / s

    return RadialTrial(val, der, left_order=ki, support=(0.0, m.diam), smooth_at_pole=False,
                       breakpoints=(s,), name=f"vpow(eps={fam.eps:g},a={a:g})")


def truncate(v: RadialTrial, delta: float, npts: int = 4097) -> RadialTrial:
    """v_delta = max(v - delta, 0) for a unimodal nonnegative radial v."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    a, b = v.support
    grid = np.concatenate(([a], a + (b - a) * np.geomspace(1e-12, 1.0, npts)))
    vals = np.asarray(v.value(grid), dtype=float)
    above = np.flatnonzero(vals > delta)
    if above.size == 0:
        z = zero_trial(None)
        return RadialTrial(z.value, z.derivative, left_order=1.0, support=(a, a), name=f"{v.name}-{delta:g}")
    i, j = above[0], above[-1]
    g = lambda r: float(v.value(r)) - delta
    lo = a if i == 0 else brentq(g, grid[i - 1], grid[i], xtol=1e-15, rtol=1e-15)
    hi = b if j == len(grid) - 1 else brentq(g, grid[j], grid[j + 1], xtol=1e-15, rtol=1e-15)

    def val(r):
        return np.maximum(np.asarray(v.value(r), dtype=float) - delta, 0.0)

    def der(r):
        r = np.asarray(r, dtype=float)
        return np.where((r > lo) & (r < hi), v.derivative(r), 0.0)

    bps = tuple(x for x in v.breakpoints if lo < x < hi)
    return RadialTrial(val, der, left_order=0.0, support=(lo, hi), smooth_at_pole=False,
                       breakpoints=bps, name=f"{v.name}-{delta:g}")


def truncation_error(m: RadialModel, w: WeightSpec, v: RadialTrial, delta: float) -> float:
    """||v_delta - v|| in the weighted energy norm: the energy of v on {v <= delta}."""
    vd = truncate(v, delta)
    full = hardy_lhs(m, w, v)
    inside = hardy_lhs(m, w, vd) if not vd.is_zero() else 0.0
    return max(full - inside, 0.0) ** (1.0 / w.p)


def sphere_exponent(m: RadialModel, p: float) -> float:
    return (p - m.n) / (p - 1)


def sharpness_sweep(m: RadialModel, tid: TheoremId | str, w: WeightSpec, hyp: CurvatureHypothesis,
                    eps_list, exponent: float | None = None) -> list[dict]:
    """Quotients of the near-extremal family against the sharp constant, eps descending."""
    tid = TheoremId(tid)
    const = sharp_constant(tid, m, w, hyp)
    if not is_sharp(tid, m, w, hyp):
        raise ValueError(f"{tid.value} is not stated sharp for these parameters")
    if exponent is None:
        exponent = sphere_exponent(m, w.p) if tid in (TheoremId.T_sphere, TheoremId.T_BV) else 1.0
    if tid in LOG_THEOREMS and exponent != 1.0:
        raise ValueError("the log family has no exponent variant")
    rows = []
    for eps in sorted((float(e) for e in eps_list), reverse=True):
        fam = extremal_family(m, w, eps, exponent)
        u = _family_trial(m, fam)
        q = hardy_quotient(m, w, u)
        bound = (exponent * fam.c_eps) ** w.p
        rows.append({"eps": eps, "c_eps": fam.c_eps, "quotient": q, "c_eps_pow_p": bound,
                     "sharp_constant": const, "gap": q - const})
    return rows


def write_sweep_csv(rows: list[dict], path: str | Path):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(SWEEP_COLUMNS)
        for row in rows:
            wr.writerow([f"{row[k]:.17g}" for k in SWEEP_COLUMNS])
