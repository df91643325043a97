# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: batched pivoted LU solve and isotropic-segment lag sums."""
import numpy as np

from libc.math cimport cos, sin, fabs, hypot, NAN

ctypedef double complex cplx


cdef inline double _cabs(cplx z) noexcept nogil:
    return hypot(z.real, z.imag)


def lu_solve_batch(const cplx[:, :, ::1] A, const cplx[:, ::1] rhs,
                   const double[::1] loading, double rel_tol):
    """Solve ``(A[b] + loading[b] I) x[b] = rhs[b]`` for every batch entry.

    Gaussian elimination with partial pivoting. A batch entry whose largest
    available pivot falls below ``rel_tol * |trace| / n`` is flagged singular
    and its solution filled with NaN.
    """
    cdef Py_ssize_t nb = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t b, i, j, k, p
    cdef double best, mag, trace, thresh
    cdef cplx piv, l, s, tmp

    x_arr = np.empty((nb, n), dtype=np.complex128)
    ok_arr = np.ones(nb, dtype=np.bool_)
    work_arr = np.empty((n, n), dtype=np.complex128)
    y_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[:, ::1] x = x_arr
    cdef cplx[:, ::1] w = work_arr
    cdef cplx[::1] y = y_arr
    cdef unsigned char[::1] ok = ok_arr.view(np.uint8)

    with nogil:
        for b in range(nb):
            trace = 0.0
            for i in range(n):
                for j in range(n):
                    w[i, j] = A[b, i, j]
                w[i, i] = w[i, i] + loading[b]
                y[i] = rhs[b, i]
                trace = trace + w[i, i].real
            thresh = rel_tol * fabs(trace) / n

            for k in range(n):
                p = k
                best = _cabs(w[k, k])
                for i in range(k + 1, n):
                    mag = _cabs(w[i, k])
                    if mag > best:
                        best = mag
                        p = i
                if not best >= thresh:
                    ok[b] = 0
                    break
                if p != k:
                    for j in range(n):
                        tmp = w[k, j]
                        w[k, j] = w[p, j]
                        w[p, j] = tmp
                    tmp = y[k]
                    y[k] = y[p]
                    y[p] = tmp
                piv = w[k, k]
                for i in range(k + 1, n):
                    l = w[i, k] / piv
                    for j in range(k + 1, n):
                        w[i, j] = w[i, j] - l * w[k, j]
                    y[i] = y[i] - l * y[k]

            if not ok[b]:
                for i in range(n):
                    x[b, i] = NAN
                continue
            for k in range(n - 1, -1, -1):
                s = y[k]
                for j in range(k + 1, n):
                    s = s - w[k, j] * x[b, j]
                x[b, k] = s / w[k, k]

    return x_arr, ok_arr


def segment_lags(const double[::1] phase, const double[::1] cosines,
                 const double[::1] weights, Py_ssize_t nlags):
    """Lag sums ``g[f, l] = sum_i weights[i] * exp(-1j * phase[f] * cosines[i] * l)``.

    Successive lags are generated by complex rotation, one sin/cos pair per node.
    """
    cdef Py_ssize_t nf = phase.shape[0], nq = cosines.shape[0]
    cdef Py_ssize_t f, i, lag
    cdef double arg
    cdef cplx step, term
    out_arr = np.zeros((nf, nlags), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    with nogil:
        for f in range(nf):
            for i in range(nq):
                arg = phase[f] * cosines[i]
                step = cos(arg) - 1j * sin(arg)
                term = weights[i]
                for lag in range(nlags):
                    out[f, lag] = out[f, lag] + term
                    term = term * step
    return out_arr
