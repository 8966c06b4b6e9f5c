# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _kernels_py: same loops, same operation order."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, NAN, INFINITY

cnp.import_array()


cdef void _matvec(const double[:] d, const double[:] o, const double[:] x, double[:] y) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0], i
    cdef double s
    for i in range(n):
        s = d[i] * x[i]
        if i > 0:
            s = s + o[i - 1] * x[i - 1]
        if i < n - 1:
            s = s + o[i] * x[i + 1]
        y[i] = s


cdef double _dot(const double[:] a, const double[:] b) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(a.shape[0]):
        s = s + a[i] * b[i]
    return s


def tridiag_matvec(diag, off, x):
    cdef double[:] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[:] o = np.ascontiguousarray(off, dtype=np.float64)
    cdef double[:] xv = np.ascontiguousarray(x, dtype=np.float64)
    y = np.empty(d.shape[0])
    _matvec(d, o, xv, y)
    return y


def thomas_factor(diag, off):
    cdef double[:] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[:] o = np.ascontiguousarray(off, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i
    piv_a = np.zeros(n)
    mult_a = np.zeros(n)
    cdef double[:] piv = piv_a
    cdef double[:] mult = mult_a
    piv[0] = d[0]
    if piv[0] == 0.0:
        raise ZeroDivisionError("zero pivot in tridiagonal factorization")
    for i in range(1, n):
        mult[i] = o[i - 1] / piv[i - 1]
        piv[i] = d[i] - mult[i] * o[i - 1]
        if piv[i] == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal factorization")
    return piv_a, mult_a


cdef void _solve(const double[:] piv, const double[:] mult, const double[:] off, const double[:] rhs,
                 double[:] z, double[:] x) noexcept nogil:
    cdef Py_ssize_t n = piv.shape[0], i
    z[0] = rhs[0]
    for i in range(1, n):
        z[i] = rhs[i] - mult[i] * z[i - 1]
    x[n - 1] = z[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (z[i] - off[i] * x[i + 1]) / piv[i]


def thomas_solve(piv, mult, off, rhs):
    cdef Py_ssize_t n = len(piv)
    z = np.empty(n)
    x = np.empty(n)
    _solve(np.ascontiguousarray(piv, dtype=np.float64), np.ascontiguousarray(mult, dtype=np.float64),
           np.ascontiguousarray(off, dtype=np.float64), np.ascontiguousarray(rhs, dtype=np.float64), z, x)
    return x


def inverse_iteration(kd_in, ko_in, md_in, mo_in, x0, double shift, double tol, long maxit):
    cdef double[:] kd = np.ascontiguousarray(kd_in, dtype=np.float64)
    cdef double[:] ko = np.ascontiguousarray(ko_in, dtype=np.float64)
    cdef double[:] md = np.ascontiguousarray(md_in, dtype=np.float64)
    cdef double[:] mo = np.ascontiguousarray(mo_in, dtype=np.float64)
    cdef Py_ssize_t n = kd.shape[0], i
    sd_a = np.empty(n)
    so_a = np.empty(max(n - 1, 0))
    cdef double[:] sd = sd_a
    cdef double[:] so = so_a
    for i in range(n):
        sd[i] = kd[i] - shift * md[i]
    for i in range(n - 1):
        so[i] = ko[i] - shift * mo[i]
    piv_a, mult_a = thomas_factor(sd_a, so_a)
    cdef double[:] piv = piv_a
    cdef double[:] mult = mult_a
    x_a = np.array(x0, dtype=np.float64, copy=True)
    cdef double[:] x = x_a
    y_a = np.empty(n)
    w_a = np.empty(n)
    z_a = np.empty(n)
    mz_a = np.empty(n)
    kz_a = np.empty(n)
    cdef double[:] y = y_a
    cdef double[:] w = w_a
    cdef double[:] z = z_a
    cdef double[:] mz = mz_a
    cdef double[:] kz = kz_a
    cdef double theta = NAN, res = INFINITY, mnorm = 0.0, nrm, r2, m2, ri
    cdef long it = 0
    with nogil:
        while it < maxit:
            it += 1
            _matvec(md, mo, x, y)
            _solve(piv, mult, so, y, w, z)
            _matvec(md, mo, z, mz)
            nrm = sqrt(_dot(z, mz))
            for i in range(n):
                z[i] = z[i] / nrm
                mz[i] = mz[i] / nrm
            _matvec(kd, ko, z, kz)
            theta = _dot(z, kz)
            r2 = 0.0
            m2 = 0.0
            for i in range(n):
                ri = kz[i] - theta * mz[i]
                r2 = r2 + ri * ri
                m2 = m2 + mz[i] * mz[i]
            res = sqrt(r2)
            mnorm = sqrt(m2)
            for i in range(n):
                x[i] = z[i]
            if res <= tol * mnorm:
                break
    return theta, x_a, it, res, mnorm
