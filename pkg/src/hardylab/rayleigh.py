"""Smallest eigenvalue of the radial weighted Rayleigh quotient int r^(2-n)|u'|^2 / int r^(2-n)|u|^2.

Piecewise-linear elements on [cutoff, diam] with the measure r^(2-n) sigma(r) dr,
Dirichlet at the cutoff and the natural condition at the antipode. The pencil
is tridiagonal and goes to the inverse-iteration kernel.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import kernels
from .curvature import CurvatureHypothesis, HypKind, curvature_gate
from .model import RadialModel

DEFAULT_CUTOFFS = (1e-2, 1e-3, 1e-4)
DEFAULT_GRIDS = (256, 512, 1024)
RESIDUAL_TOL = 1e-8
MAX_ITER = 10_000
_GAUSS_X, _GAUSS_W = leggauss(4)


class EigenConvergenceError(RuntimeError):
    pass


@dataclass
class EigenResult:
    """Grid study at the smallest cutoff plus the per-cutoff values.

    ``theta`` is the grid-extrapolated value at the smallest cutoff; it bounds
    the radial infimum from above.
    """

    theta: float
    grid_sizes: list[int]
    values_per_grid: list[float]
    extrapolated: float
    inner_cutoffs: list[float]
    cutoff_values: list[float] = field(default_factory=list)
    residual: float = 0.0

    @property
    def refinement_change(self) -> float:
        v = self.values_per_grid
        return abs(v[-1] - v[-2]) / abs(v[-1])


@dataclass(frozen=True)
class Pencil:
    nodes: np.ndarray
    kd: np.ndarray
    ko: np.ndarray
    md: np.ndarray
    mo: np.ndarray


def rayleigh_nodes(m: RadialModel, cutoff: float, grid: int) -> np.ndarray:
    """grid+1 nodes: geometric from the cutoff to diam/2, then quadratically clustered at diam."""
    D = m.diam
    nl = grid // 2
    nr = grid - nl
    left = cutoff * (0.5 * D / cutoff) ** (np.arange(nl) / nl)
    tau = np.arange(nr + 1) / nr
    right = D - 0.5 * D * (1 - tau) ** 2
    return np.concatenate((left, right))


def rayleigh_weight(m: RadialModel, r):
    r = np.asarray(r, dtype=float)
    return r ** (2 - m.n) * m.sigma(r)


def assemble(m: RadialModel, nodes: np.ndarray, dirichlet_left: bool = True) -> Pencil:
    """P1 stiffness and mass for the weight r^(2-n) sigma; drops the first node if Dirichlet."""
    lo, hi = nodes[:-1], nodes[1:]
    h = hi - lo
    t = 0.5 * (_GAUSS_X + 1.0)
    x = lo[:, None] + h[:, None] * t[None, :]
    wq = rayleigh_weight(m, x)
    if not np.all(np.isfinite(wq)) or np.any(wq <= 1e-300):
        raise ValueError("singular assembly: Rayleigh weight underflows on the grid")
    gw = 0.5 * _GAUSS_W * h[:, None]
    w0 = np.sum(gw * wq, axis=1)
    # element mass entries for phi_a = 1 - t, phi_b = t
    maa = np.sum(gw * wq * (1 - t) ** 2, axis=1)
    mab = np.sum(gw * wq * (1 - t) * t, axis=1)
    mbb = np.sum(gw * wq * t**2, axis=1)
    kel = w0 / h**2
    npts = len(nodes)
    kd = np.zeros(npts)
    md = np.zeros(npts)
    kd[:-1] += kel
    kd[1:] += kel
    md[:-1] += maa
    md[1:] += mbb
    ko = -kel
    mo = mab
    if dirichlet_left:
        return Pencil(nodes[1:], kd[1:], ko[1:], md[1:], mo[1:])
    return Pencil(nodes, kd, ko, md, mo)


def smallest_eigenpair(pen: Pencil, tol: float = RESIDUAL_TOL, maxit: int = MAX_ITER):
    x0 = np.ones(len(pen.kd))
    theta, x, it, res, mnorm = kernels.inverse_iteration(pen.kd, pen.ko, pen.md, pen.mo, x0, 0.0, tol, maxit)
    if not res <= tol * mnorm:
        raise EigenConvergenceError(f"inverse iteration stalled after {it} steps (residual {res:.3e})")
    return float(theta), np.asarray(x), float(res / mnorm)


def _check_cutoff(m: RadialModel, eps: float, grid: int):
    if not 0 < eps < m.diam / 4:
        raise ValueError(f"cutoff must lie in (0, diam/4), got {eps}")
    if grid < 64:
        raise ValueError("grid must have at least 64 elements")


def theta_truncated(m: RadialModel, eps: float, grid: int) -> float:
    """Discrete Dirichlet eigenvalue on M minus the closed eps-ball around the pole."""
    _check_cutoff(m, eps, grid)
    theta, _, _ = smallest_eigenpair(assemble(m, rayleigh_nodes(m, eps, grid)))
    return theta


def theta_radial(m: RadialModel, inner_cutoff: float, grid: int) -> float:
    """Radial Rayleigh minimum at a positive cutoff, for models with Ric_inf >= 0 and d_r Psi >= 0."""
    ok, reasons = curvature_gate(m, CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.0))
    if not ok:
        raise ValueError("model violates Ric_inf >= 0, d_r Psi >= 0: " + "; ".join(reasons))
    return theta_truncated(m, inner_cutoff, grid)


def xi_radial(m: RadialModel, inner_node: float, grid: int) -> float:
    """Same grid as theta_truncated plus one element reaching the pole, where u(o) = 0 only.

    The discrete space contains the truncated one, so the value never exceeds it.
    """
    _check_cutoff(m, inner_node, grid)
    nodes = np.concatenate(([0.0], rayleigh_nodes(m, inner_node, grid)))
    theta, _, _ = smallest_eigenpair(assemble(m, nodes))
    return theta


def rayleigh_quotient(m: RadialModel, u, cutoff: float, grid: int) -> float:
    """Quotient of the nodal interpolant of u (u at the cutoff is forced to 0)."""
    nodes = rayleigh_nodes(m, cutoff, grid)
    pen = assemble(m, nodes)
    x = np.asarray(u(pen.nodes), dtype=float)
    kx = kernels.tridiag_matvec(pen.kd, pen.ko, x)
    mx = kernels.tridiag_matvec(pen.md, pen.mo, x)
    return float(np.dot(x, kx) / np.dot(x, mx))


def richardson(values, ratio: float = 2.0, order: float = 2.0) -> float:
    """Extrapolate the last two grid values assuming error ~ h^order."""
    a, b = values[-2], values[-1]
    return b + (b - a) / (ratio**order - 1)


def theta_study(m: RadialModel, cutoffs=DEFAULT_CUTOFFS, grids=DEFAULT_GRIDS,
                relative: bool = True) -> EigenResult:
    """Grid refinement at the smallest cutoff and the value at each cutoff on the finest grid.

    ``relative`` reads the cutoffs as fractions of diam.
    """
    scale = m.diam if relative else 1.0
    cuts = sorted((c * scale for c in cutoffs), reverse=True)
    per_cut = [theta_radial(m, c, grids[-1]) for c in cuts]
    values = []
    res = 0.0
    for g in grids:
        pen = assemble(m, rayleigh_nodes(m, cuts[-1], g))
        th, _, rr = smallest_eigenpair(pen)
        values.append(th)
        res = rr
    ext = richardson(values)
    return EigenResult(theta=ext, grid_sizes=list(grids), values_per_grid=values, extrapolated=ext,
                       inner_cutoffs=cuts, cutoff_values=per_cut, residual=res)


def dense_theta(m: RadialModel, cutoff: float, grid: int) -> float:
    """Independent oracle: dense generalized symmetric eigensolve of the same pencil."""
    from scipy.linalg import eigh

    pen = assemble(m, rayleigh_nodes(m, cutoff, grid))
    K = np.diag(pen.kd) + np.diag(pen.ko, 1) + np.diag(pen.ko, -1)
    M = np.diag(pen.md) + np.diag(pen.mo, 1) + np.diag(pen.mo, -1)
    # symmetric diagonal scaling: the mass entries span many decades near the cutoff
    s = 1.0 / np.sqrt(pen.md)
    S = s[:, None] * s[None, :]
    return float(eigh(K * S, M * S, eigvals_only=True)[0])

