"""Pure-Python eigen-kernels for symmetric tridiagonal pencils.

Loop order and arithmetic match ``_kernels.pyx`` operation for operation, so
both backends return bitwise-identical results when the extension is built
without floating-point contraction.
"""
from __future__ import annotations

import math

import numpy as np


def tridiag_matvec(diag, off, x):
    """y = T x for symmetric tridiagonal T (diag length n, off length n-1)."""
    n = len(diag)
    y = [0.0] * n
    for i in range(n):
        s = diag[i] * x[i]
        if i > 0:
            s = s + off[i - 1] * x[i - 1]
        if i < n - 1:
            s = s + off[i] * x[i + 1]
        y[i] = s
    return y


def thomas_factor(diag, off):
    """Forward-elimination multipliers and pivots for T = L U."""
    n = len(diag)
    piv = [0.0] * n
    mult = [0.0] * n
    piv[0] = diag[0]
    if piv[0] == 0.0:
        raise ZeroDivisionError("zero pivot in tridiagonal factorization")
    for i in range(1, n):
        mult[i] = off[i - 1] / piv[i - 1]
        piv[i] = diag[i] - mult[i] * off[i - 1]
        if piv[i] == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal factorization")
    return piv, mult


def thomas_solve(piv, mult, off, rhs):
    n = len(piv)
    z = [0.0] * n
    z[0] = rhs[0]
    for i in range(1, n):
        z[i] = rhs[i] - mult[i] * z[i - 1]
    x = [0.0] * n
    x[n - 1] = z[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (z[i] - off[i] * x[i + 1]) / piv[i]
    return x


def _dot(a, b):
    s = 0.0
    for i in range(len(a)):
        s = s + a[i] * b[i]
    return s


def inverse_iteration(kd, ko, md, mo, x0, shift, tol, maxit):
    """Smallest eigenpair of K x = theta M x by shifted inverse iteration.

    Returns (theta, x, iterations, residual_norm, mass_norm) with x M-normalised.
    """
    kd = [float(v) for v in kd]
    ko = [float(v) for v in ko]
    md = [float(v) for v in md]
    mo = [float(v) for v in mo]
    n = len(kd)
    sd = [kd[i] - shift * md[i] for i in range(n)]
    so = [ko[i] - shift * mo[i] for i in range(n - 1)]
    piv, mult = thomas_factor(sd, so)
    x = [float(v) for v in x0]
    theta = math.nan
    res = math.inf
    mnorm = 0.0
    it = 0
    while it < maxit:
        it += 1
        y = tridiag_matvec(md, mo, x)
        z = thomas_solve(piv, mult, so, y)
        mz = tridiag_matvec(md, mo, z)
        nrm = math.sqrt(_dot(z, mz))
        for i in range(n):
            z[i] = z[i] / nrm
            mz[i] = mz[i] / nrm
        kz = tridiag_matvec(kd, ko, z)
        theta = _dot(z, kz)
        r2 = 0.0
        m2 = 0.0
        for i in range(n):
            ri = kz[i] - theta * mz[i]
            r2 = r2 + ri * ri
            m2 = m2 + mz[i] * mz[i]
        res = math.sqrt(r2)
        mnorm = math.sqrt(m2)
        x = z
        if res <= tol * mnorm:
            break
    return theta, np.array(x), it, res, mnorm
