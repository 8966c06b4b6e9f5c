"""Both sides of the Hardy inequalities, their admissibility and sharp constants."""
from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .curvature import CurvatureHypothesis, HypKind
from .model import RadialModel, sphere_area_constant
from .quadrature import ABS_TOL, DivergentIntegral, EndpointBehavior, QuadratureResult, integrate_singular
from .trials import RadialTrial
from .weights import WeightKind, WeightSpec

ZERO_RHS = 1e-300
HARDY_TOL = 1e-12
HARDY_RTOL = 1e-11


class TheoremId(str, Enum):
    T_RicN_power = "T_RicN_power"
    T_RicN_power_closed = "T_RicN_power_closed"
    T_RicInf_lambda = "T_RicInf_lambda"
    T_RicInf_k = "T_RicInf_k"
    T_log_RicN = "T_log_RicN"
    T_log_RicN_closed = "T_log_RicN_closed"
    T_log_RicInf_lambda = "T_log_RicInf_lambda"
    T_log_RicInf_k = "T_log_RicInf_k"
    T_BV = "T_BV"
    T_uncertainty = "T_uncertainty"
    T_sphere = "T_sphere"


REQUIRED_HYPOTHESIS = {
    TheoremId.T_RicN_power: HypKind.RIC_N,
    TheoremId.T_RicN_power_closed: HypKind.RIC_N,
    TheoremId.T_RicInf_lambda: HypKind.RIC_INF_LAMBDA,
    TheoremId.T_RicInf_k: HypKind.RIC_INF_K,
    TheoremId.T_log_RicN: HypKind.RIC_N,
    TheoremId.T_log_RicN_closed: HypKind.RIC_N,
    TheoremId.T_log_RicInf_lambda: HypKind.RIC_INF_LAMBDA,
    TheoremId.T_log_RicInf_k: HypKind.RIC_INF_K,
    TheoremId.T_BV: HypKind.RIC_INF_LAMBDA,
    TheoremId.T_uncertainty: HypKind.RIC_INF_LAMBDA,
    TheoremId.T_sphere: HypKind.RIC_N,
}

LOG_THEOREMS = {TheoremId.T_log_RicN, TheoremId.T_log_RicN_closed, TheoremId.T_log_RicInf_lambda,
                TheoremId.T_log_RicInf_k}
RICINF_POWER = {TheoremId.T_RicInf_lambda, TheoremId.T_RicInf_k}
DISTANCE_P = {TheoremId.T_BV, TheoremId.T_uncertainty, TheoremId.T_sphere}


class InadmissibleError(ValueError):
    pass


def _clause(ok: bool, text: str, reasons: list[str]):
    if not ok:
        reasons.append(text)


def admissible(tid: TheoremId | str, m: RadialModel, w: WeightSpec,
               hyp: CurvatureHypothesis) -> tuple[bool, list[str]]:
    """Check every parameter clause of the theorem's hypothesis block; list the violated ones."""
    tid = TheoremId(tid)
    n, D = m.n, m.diam
    p, b, a = w.p, w.beta, w.alpha
    reasons: list[str] = []
    _clause(hyp.kind is REQUIRED_HYPOTHESIS[tid],
            f"[hyp] needs {REQUIRED_HYPOTHESIS[tid].value}, got {hyp.kind.value}", reasons)
    want_log = tid in LOG_THEOREMS
    _clause(w.is_log == want_log, f"[weight] needs {'log' if want_log else 'power'} weight", reasons)
    if reasons:
        return False, reasons
    lam_k = hyp.value
    _clause(p > 1, "p > 1", reasons)

    if tid in (TheoremId.T_RicN_power, TheoremId.T_RicN_power_closed):
        N = hyp.value
        _clause(N >= n, "N in [n, inf)", reasons)
        _clause(p != N, "p in (1,N) u (N,inf)", reasons)
        _clause(b < -N, "beta < -N", reasons)
        if tid is TheoremId.T_RicN_power_closed:
            _clause(p + b > -n, "p + beta > -n", reasons)
    elif tid in RICINF_POWER:
        bound = n - 1 + (lam_k * D if tid is TheoremId.T_RicInf_lambda else 4 * lam_k)
        k = (a - 1) * (p - 1)
        _clause(a != 0, "alpha != 0", reasons)
        _clause(p > max(1.0, -n - b), "p > max{1, -n-beta}", reasons)
        _clause(b + 1 < k, "beta + 1 < (alpha-1)(p-1)", reasons)
        _clause(k <= -bound, "(alpha-1)(p-1) <= -[n-1+lambda diam]" if tid is TheoremId.T_RicInf_lambda
                else "(alpha-1)(p-1) <= -(n-1+4k)", reasons)
    elif tid in LOG_THEOREMS:
        d = w.d
        k = (a - 1) * (p - 1)
        if tid is TheoremId.T_log_RicN_closed:
            _clause(d > D, "d > diam(M)", reasons)
        else:
            _clause(d >= D, "d >= diam(M)", reasons)
        if tid in (TheoremId.T_log_RicN, TheoremId.T_log_RicN_closed):
            eff = hyp.value
            _clause(eff >= n, "N in [n, inf)", reasons)
            _clause(p >= eff, "p >= N", reasons)
        elif tid is TheoremId.T_log_RicInf_lambda:
            eff = n + lam_k * D
            _clause(p >= eff, "p >= n + lambda diam(M)", reasons)
        else:
            eff = n + 4 * lam_k
            _clause(p >= eff, "p >= n + 4k", reasons)
        _clause(a != 0, "alpha != 0", reasons)
        lower = math.log(d / D) * (eff - p) if d >= D else math.inf
        _clause(lower <= k, "log(d/diam)(N-p) <= (alpha-1)(p-1)", reasons)
        _clause(k < b + 1, "(alpha-1)(p-1) < beta + 1", reasons)
    else:
        _clause(p > n, "p > n", reasons)
        _clause(b == -p, "distance weight with beta = -p", reasons)
        if tid is TheoremId.T_sphere:
            _clause(m.psi_is_constant, "constant density (unit sphere measure)", reasons)
            _clause(hyp.value >= n, "Ric >= 0 (N >= n)", reasons)
        else:
            _clause(hyp.value == 0, "d_r Psi >= 0 (lambda = 0)", reasons)
            if tid is TheoremId.T_BV:
                _clause(p >= 2, "p >= 2", reasons)
    return not reasons, reasons


def sharp_constant(tid: TheoremId | str, m: RadialModel, w: WeightSpec, hyp: CurvatureHypothesis) -> float:
    tid = TheoremId(tid)
    ok, reasons = admissible(tid, m, w, hyp)
    if not ok:
        raise InadmissibleError(f"{tid.value}: " + "; ".join(reasons))
    p = w.p
    if tid in (TheoremId.T_RicN_power, TheoremId.T_RicN_power_closed):
        return (abs(hyp.value + w.beta) / p) ** p
    if tid in RICINF_POWER:
        return (w.gap / p) ** p
    if tid in LOG_THEOREMS:
        return (-w.gap / p) ** p
    if tid is TheoremId.T_uncertainty:
        return (p - m.n) / p
    return ((p - m.n) / p) ** p


def is_sharp(tid: TheoremId | str, m: RadialModel, w: WeightSpec, hyp: CurvatureHypothesis) -> bool:
    """Whether the theorem states its constant is sharp for these parameters."""
    tid = TheoremId(tid)
    n, p = m.n, w.p
    natural_alpha = (p - n) / (p - 1)
    if tid in (TheoremId.T_RicN_power, TheoremId.T_RicN_power_closed):
        return hyp.value == n
    if tid in RICINF_POWER:
        return hyp.value == 0 and natural_alpha != 0 and math.isclose(w.alpha, natural_alpha)
    if tid in LOG_THEOREMS:
        base = hyp.value == (n if tid in (TheoremId.T_log_RicN, TheoremId.T_log_RicN_closed) else 0)
        base = base and p == n and w.alpha == 1
        if tid in (TheoremId.T_log_RicN, TheoremId.T_log_RicInf_lambda, TheoremId.T_log_RicInf_k):
            base = base and (w.beta >= p - 1 or w.d > m.diam)
        return bool(base)
    return tid is not TheoremId.T_uncertainty


# -- integrals ---------------------------------------------------------------

def _integrate(m: RadialModel, u: RadialTrial, f, left: tuple[float, float], right_log: float,
               w: WeightSpec | None, tol: float, rtol: float, what: str) -> float:
    a, b = u.support
    if b <= a:
        return 0.0
    gL, lL = left if a == 0.0 else (0.0, 0.0)
    right_pow = (m.n - 1) if b >= m.diam else 0.0
    hints = EndpointBehavior(left_exponent=gL, right_exponent=right_pow,
                             log_powers=(lL, right_log if b >= m.diam else 0.0),
                             log_scale=None if w is None or not w.is_log else w.d)
    res = integrate_singular(f, a, min(b, m.diam), hints, tol=tol, rtol=rtol, breakpoints=u.breakpoints)
    if not res.ok:
        raise DivergentIntegral(res, what)
    return sphere_area_constant(m.n) * res.value


def hardy_lhs(m: RadialModel, w: WeightSpec, u: RadialTrial, tol: float = HARDY_TOL,
              rtol: float = HARDY_RTOL) -> float:
    """c_{n-1} * int |u'|^p rho^(p+beta) sigma dr."""
    p, q = w.p, w.p + w.beta
    kd, ld = u.deriv_exponents()

    def f(r):
        return np.abs(u.derivative(r)) ** p * w.rho(r) ** q * m.sigma(r)

    if w.is_log:
        left = (p * kd + m.n - 1, p * ld + q)
    else:
        left = (p * kd + q + m.n - 1, p * ld)
    return _integrate(m, u, f, left, q, w, tol, rtol, "hardy lhs")


def hardy_rhs(m: RadialModel, w: WeightSpec, u: RadialTrial, tol: float = HARDY_TOL,
              rtol: float = HARDY_RTOL) -> float:
    """c_{n-1} * int |u|^p rho^beta |rho'|^p sigma dr."""
    p, b = w.p, w.beta
    k, l = u.left_order, u.left_log_order

    def f(r):
        return np.abs(u.value(r)) ** p * w.rho(r) ** b * np.abs(w.drho(r)) ** p * m.sigma(r)

    if w.is_log:
        left = (p * k - p + m.n - 1, p * l + b)
    else:
        left = (p * k + b + m.n - 1, p * l)
    return _integrate(m, u, f, left, b, w, tol, rtol, "hardy rhs")


def hardy_quotient(m: RadialModel, w: WeightSpec, u: RadialTrial, tol: float = HARDY_TOL,
                   rtol: float = HARDY_RTOL) -> float:
    rhs = hardy_rhs(m, w, u, tol, rtol)
    if rhs < ZERO_RHS:
        raise ValueError(f"trial {u.name} is identically zero (rhs={rhs:.3e})")
    return hardy_lhs(m, w, u, tol, rtol) / rhs


def _power_moment(m: RadialModel, u: RadialTrial, power: float, r_power: float, use_derivative: bool,
                  tol: float, rtol: float) -> float:
    """c_{n-1} * int |u|^power r^r_power sigma dr (or |u'|^power)."""
    if use_derivative:
        kd, ld = u.deriv_exponents()
        g = u.derivative
    else:
        kd, ld = u.left_order, u.left_log_order
        g = u.value

    def f(r):
        return np.abs(g(r)) ** power * np.asarray(r, dtype=float) ** r_power * m.sigma(r)

    return _integrate(m, u, f, (power * kd + r_power + m.n - 1, power * ld), 0.0, None, tol, rtol, "moment")


def uncertainty_product(m: RadialModel, p: float, u: RadialTrial, tol: float = HARDY_TOL,
                        rtol: float = HARDY_RTOL) -> tuple[float, float]:
    """(int r^q|u|^q)^(1/q) (int |u'|^p)^(1/p) against ((p-n)/p) int u^2, 1/p + 1/q = 1."""
    if not p > m.n:
        raise ValueError("uncertainty principle needs p > n")
    q = p / (p - 1)
    a = _power_moment(m, u, q, q, False, tol, rtol)
    g = _power_moment(m, u, p, 0.0, True, tol, rtol)
    l2 = _power_moment(m, u, 2.0, 0.0, False, tol, rtol)
    return a ** (1 / q) * g ** (1 / p), (p - m.n) / p * l2


def bv_check(m: RadialModel, p: float, u: RadialTrial, theta: float, tol: float = HARDY_TOL,
             rtol: float = HARDY_RTOL) -> tuple[float, float]:
    """Plain gradient energy against the Hardy term plus the theta-weighted remainder."""
    if not (p >= 2 and p > m.n):
        raise ValueError("remainder inequality needs p >= 2 and p > n")
    if theta < 0:
        raise ValueError("theta must be >= 0")
    h = (p - m.n) / p
    lhs = _power_moment(m, u, p, 0.0, True, tol, rtol)
    hardy = _power_moment(m, u, p, -p, False, tol, rtol)
    rem = _power_moment(m, u, p, 2 - p, False, tol, rtol) if theta else 0.0
    return lhs, h**p * hardy + 2 * theta / p * h ** (p - 2) * rem
