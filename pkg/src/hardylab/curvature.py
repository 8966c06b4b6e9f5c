"""Weighted Ricci curvature, Laplacian comparison and the radial p-Laplacian."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import DirectionKind, RadialModel, _check_interior, _scalar_or_array, geometric_grid
from .trials import RadialTrial
from .weights import WeightSpec, rho_power

GATE_TOL = 1e-12
GATE_POINTS = 2048


class HypKind(str, Enum):
    RIC_N = "RicN"
    RIC_INF_LAMBDA = "RicInfLambda"
    RIC_INF_K = "RicInfK"


@dataclass
class CurvatureHypothesis:
    """Ric_N >= 0 (value=N), or Ric_inf >= 0 with d_r Psi >= -lambda or |Psi| <= k."""

    kind: HypKind
    value: float
    margin_grid: list[tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        self.kind = HypKind(self.kind)
        if self.value < 0:
            raise ValueError(f"{self.kind.value} parameter must be >= 0")

    @property
    def N(self) -> float:
        return self.value if self.kind is HypKind.RIC_N else math.inf

    def label(self) -> str:
        sym = {HypKind.RIC_N: "N", HypKind.RIC_INF_LAMBDA: "lambda", HypKind.RIC_INF_K: "k"}[self.kind]
        return f"{self.kind.value}({sym}={self.value:g})"


def hypothesis_from_config(cfg: dict) -> CurvatureHypothesis:
    kind = HypKind(cfg["kind"])
    key = {HypKind.RIC_N: "N", HypKind.RIC_INF_LAMBDA: "lambda", HypKind.RIC_INF_K: "k"}[kind]
    return CurvatureHypothesis(kind, float(cfg[key]))


def _inv_minus_cot(x):
    """1/x - cot x without cancellation for small x."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    xs = np.where(small, x, 1.0)
    x2 = xs * xs
    series = xs * (1.0 / 3 + x2 * (1.0 / 45 + x2 * (2.0 / 945 + x2 / 4725)))
    xl = np.where(small, 1.0, x)
    direct = 1.0 / xl - 1.0 / np.tan(xl)
    return np.where(small, series, direct)


def ricci_n_direction(m: RadialModel, r, N: float, direction: DirectionKind | str):
    """Ric_N(e, e) for a unit radial or tangential vector e at distance r."""
    r = _check_interior(m, r)
    direction = DirectionKind(direction)
    if N < m.n:
        raise ValueError(f"N={N} below dimension n={m.n}")
    if N == m.n and not m.psi_is_constant:
        raise ValueError("Ric_n bound needs a constant density (Psi = const)")
    base = (m.n - 1) / m.R**2
    if direction is DirectionKind.RADIAL:
        out = base + m.d2psi(r)
        if m.n < N < math.inf:
            out = out - m.dpsi(r) ** 2 / (N - m.n)
    else:
        x = r / m.R
        # Psi' * s'/s, written through c = cos(x) to stay finite at both poles
        out = base - np.cos(x) * m._poly.deriv(1)(np.cos(x)) / m.R**2
    return _scalar_or_array(out)


def comparison_bound(m: RadialModel, hyp: CurvatureHypothesis, r):
    r = np.asarray(r, dtype=float)
    if hyp.kind is HypKind.RIC_N:
        return (hyp.value - 1) / r
    if hyp.kind is HypKind.RIC_INF_LAMBDA:
        return (m.n - 1) / r + hyp.value
    return (m.n - 1 + 4 * hyp.value) / r


def comparison_margin(m: RadialModel, hyp: CurvatureHypothesis, r):
    """Upper bound on Delta_Psi r minus its value; >= 0 when the hypothesis holds."""
    r = _check_interior(m, r)
    # (n-1)(1/r - cot(r/R)/R) computed stably; the bound's extra terms added on top
    core = (m.n - 1) * _inv_minus_cot(r / m.R) / m.R + m.dpsi(r)
    if hyp.kind is HypKind.RIC_N:
        extra = (hyp.value - m.n) / r
    elif hyp.kind is HypKind.RIC_INF_LAMBDA:
        extra = hyp.value
    else:
        extra = 4 * hyp.value / r
    return _scalar_or_array(core + extra)


def volume_ratio(m: RadialModel, kind: int, param: float, r):
    """f1 = sigma/r^(N-1), f2 = sigma/(e^(lambda r) r^(n-1)), f3 = sigma/r^(n+4k-1)."""
    r = _check_interior(m, r)
    # sigma / r^(n-1) via sinc, finite at r = 0
    base = (np.sinc(r / (m.R * np.pi))) ** (m.n - 1) * np.exp(-m.psi(r))
    if kind == 1:
        if param < m.n:
            raise ValueError("N must be >= n")
        out = base * r ** (m.n - param)
    elif kind == 2:
        out = base * np.exp(-param * r)
    elif kind == 3:
        out = base * r ** (-4 * param)
    else:
        raise ValueError(f"volume ratio kind must be 1, 2 or 3, got {kind}")
    return _scalar_or_array(out)


def volume_ratio_limit(m: RadialModel, kind: int, param: float, levels: int = 12,
                       slope_tol: float = 1e-3) -> tuple[bool, float]:
    """Whether lim_{r->0+} of the volume ratio is finite, with the last sampled value.

    Samples r = diam 2^-j deep into the pole and reads off the log2-slope of
    successive values; a finite limit has slope tending to 0.
    """
    js = np.arange(30, 30 + levels)
    r = m.diam * 2.0 ** (-js)
    f = np.asarray(volume_ratio(m, kind, param, r))
    slopes = np.log2(f[1:] / f[:-1])
    finite = bool(np.all(np.abs(slopes[-4:]) < slope_tol))
    return finite, float(f[-1])


def gate_grid(m: RadialModel, npts: int = GATE_POINTS) -> np.ndarray:
    return geometric_grid(0.0, m.diam, npts)


def curvature_gate(m: RadialModel, hyp: CurvatureHypothesis, npts: int = GATE_POINTS,
                   tol: float = GATE_TOL) -> tuple[bool, list[str]]:
    """Check the hypothesis on a geometric grid; fills hyp.margin_grid on success."""
    reasons: list[str] = []
    grid = gate_grid(m, npts)
    N = hyp.N
    if hyp.kind is HypKind.RIC_N and hyp.value < m.n:
        return False, [f"N={hyp.value} < n={m.n}"]
    if hyp.kind is HypKind.RIC_N and hyp.value == m.n and not m.psi_is_constant:
        return False, ["Ric_n bound requires Psi constant"]
    for d in DirectionKind:
        ric = np.asarray(ricci_n_direction(m, grid, N, d))
        if ric.min() < -tol:
            reasons.append(f"Ric_{N:g} {d.value} min {ric.min():.3e} < 0")
    if hyp.kind is HypKind.RIC_INF_LAMBDA:
        dpsi = m.dpsi(grid)
        if dpsi.min() < -hyp.value - tol:
            reasons.append(f"d_r Psi min {dpsi.min():.6g} < -lambda={-hyp.value:g}")
    if hyp.kind is HypKind.RIC_INF_K:
        lo, hi = m.psi_bounds()
        if max(abs(lo), abs(hi)) > hyp.value + tol:
            reasons.append(f"|Psi| max {max(abs(lo), abs(hi)):.6g} > k={hyp.value:g}")
    if not reasons:
        marg = np.asarray(comparison_margin(m, hyp, grid))
        hyp.margin_grid = list(zip(grid.tolist(), marg.tolist()))
    return not reasons, reasons


def p_laplacian_radial(m: RadialModel, f: RadialTrial, p: float, r):
    """Delta_{mu,p} f = sigma^-1 d/dr[sigma |f'|^(p-2) f'] for radial f."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    r = _check_interior(m, r)
    d1 = np.asarray(f.derivative(r), dtype=float)
    if not np.all(np.isfinite(d1)):
        raise ValueError("f' undefined at requested radius")
    flux = np.abs(d1) ** (p - 2) * d1
    if f.second is not None:
        d2 = np.asarray(f.second(r), dtype=float)
        out = (p - 1) * np.abs(d1) ** (p - 2) * d2 + flux * m.laplacian_r(r)
    else:
        h = 1e-5 * np.minimum(r, m.diam - r)

        def sflux(x):
            g = np.asarray(f.derivative(x), dtype=float)
            return m.sigma(x) * np.abs(g) ** (p - 2) * g

        out = (sflux(r + h) - sflux(r - h)) / (2 * h) / m.sigma(r)
    return _scalar_or_array(out)


def supersolution_margin(m: RadialModel, w: WeightSpec, r):
    """-Delta_{mu,p}(c rho^alpha) in the weak-sense convention c * (-Delta_{mu,p} rho^alpha)."""
    c = w.c
    if c == 0:
        raise ValueError("degenerate supersolution constant c = 0")
    f = rho_power(w, m, w.alpha)
    return _scalar_or_array(-c * np.asarray(p_laplacian_radial(m, f, w.p, r)))
