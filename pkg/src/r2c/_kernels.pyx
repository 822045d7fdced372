# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Signatures and semantics mirror ``r2c._fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs, INFINITY, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()


def em_1d(const double[::1] x, double[::1] weights, double[::1] means,
          double[::1] variances, double var_floor, double tol,
          Py_ssize_t max_iter, double empty_mass):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k = weights.shape[0]
    cdef Py_ssize_t i, j, it
    cdef double xi, m, s, r, dx, ll, ll_prev = -INFINITY, shift
    cdef int status = -1
    cdef double *buf = <double *> malloc(7 * k * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double *logw = buf
    cdef double *lnorm = buf + k
    cdef double *half_prec = buf + 2 * k
    cdef double *lp = buf + 3 * k
    cdef double *nk = buf + 4 * k
    cdef double *sx = buf + 5 * k
    cdef double *sxx = buf + 6 * k
    trace = np.empty(max_iter + 1, dtype=np.float64)
    cdef double[::1] tr = trace
    cdef Py_ssize_t n_trace = 0

    try:
        with nogil:
            for it in range(max_iter + 1):
                for j in range(k):
                    logw[j] = log(weights[j])
                    lnorm[j] = -0.5 * log(2.0 * M_PI * variances[j])
                    half_prec[j] = 0.5 / variances[j]
                    nk[j] = 0.0
                    sx[j] = 0.0
                    sxx[j] = 0.0
                ll = 0.0
                for i in range(n):
                    xi = x[i]
                    m = -INFINITY
                    for j in range(k):
                        dx = xi - means[j]
                        lp[j] = logw[j] + lnorm[j] - dx * dx * half_prec[j]
                        if lp[j] > m:
                            m = lp[j]
                    s = 0.0
                    for j in range(k):
                        lp[j] = exp(lp[j] - m)
                        s += lp[j]
                    ll += m + log(s)
                    for j in range(k):
                        r = lp[j] / s
                        dx = xi - means[j]
                        nk[j] += r
                        sx[j] += r * dx
                        sxx[j] += r * dx * dx
                tr[n_trace] = ll
                n_trace += 1
                if it > 0 and ll - ll_prev <= tol * fabs(ll):
                    break
                if it == max_iter:
                    break
                for j in range(k):
                    if nk[j] < empty_mass:
                        status = <int> j
                        break
                if status >= 0:
                    break
                for j in range(k):
                    weights[j] = nk[j] / n
                    shift = sx[j] / nk[j]
                    means[j] += shift
                    variances[j] = sxx[j] / nk[j] - shift * shift
                    if variances[j] < var_floor:
                        variances[j] = var_floor
                ll_prev = ll
    finally:
        free(buf)
    return ll, trace[:n_trace].copy(), status


def nearest_1d(const double[::1] x, const double[::1] centers):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    cdef Py_ssize_t i, j, best
    cdef double d, dbest
    out = np.empty(n, dtype=np.intp)
    cdef cnp.intp_t[::1] o = out
    with nogil:
        for i in range(n):
            best = 0
            d = x[i] - centers[0]
            dbest = d * d
            for j in range(1, k):
                d = x[i] - centers[j]
                d = d * d
                if d < dbest:
                    dbest = d
                    best = j
            o[i] = best
    return out


def nearest_center(const double[:, ::1] data, const double[:, ::1] centers):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t dim = data.shape[1]
    cdef Py_ssize_t s = centers.shape[0]
    cdef Py_ssize_t i, j, c, best
    cdef double acc, diff, dbest
    out = np.empty(n, dtype=np.intp)
    cdef cnp.intp_t[::1] o = out
    with nogil:
        for i in range(n):
            best = 0
            dbest = INFINITY
            for c in range(s):
                acc = 0.0
                for j in range(dim):
                    diff = data[i, j] - centers[c, j]
                    acc = acc + diff * diff
                if acc < dbest:
                    dbest = acc
                    best = c
            o[i] = best
    return out
