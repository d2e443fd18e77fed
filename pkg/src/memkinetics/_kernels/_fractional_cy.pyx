# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled history kernels: same contracts as `_fractional_py`.

The O(N^2) history convolutions dominate solver runtime, so the time loop,
the weight tables and the inner dot products all run as plain C here.
"""

import numpy as np

from libc.math cimport fabs, lgamma, pow, exp

BACKEND = "cython"

DEF OVERFLOW_LIMIT = 1e300


cdef double _gamma_pos(double x):
    # Gamma for the strictly positive arguments used by the weights.
    return exp(lgamma(x))


cdef void _fill_weights(double alpha, Py_ssize_t N, double[:] b, double[:] c):
    cdef Py_ssize_t m
    cdef double fm
    b[0] = 0.0
    c[0] = 0.0
    for m in range(1, N + 1):
        fm = <double> m
        b[m] = pow(fm, alpha) - pow(fm - 1.0, alpha)
        c[m] = pow(fm + 1.0, alpha + 1.0) + pow(fm - 1.0, alpha + 1.0) - 2.0 * pow(fm, alpha + 1.0)


def abm_linear_scalar(double alpha, double y0, double y1, int n,
                      double lam, double power, double forcing,
                      double h, int N):
    """PECE Adams-Bashforth-Moulton for D^alpha y = forcing + lam * t^power * y."""
    y_arr = np.empty(N + 1)
    f_arr = np.empty(N + 1)
    b_arr = np.empty(N + 1)
    c_arr = np.empty(N + 1)
    cdef double[:] y = y_arr
    cdef double[:] f = f_arr
    cdef double[:] b = b_arr
    cdef double[:] c = c_arr
    _fill_weights(alpha, N, b, c)

    cdef double ha1 = pow(h, alpha) / _gamma_pos(alpha + 1.0)
    cdef double ha2 = pow(h, alpha) / _gamma_pos(alpha + 2.0)
    cdef Py_ssize_t j, k
    cdef double t, tail, coeff, acc, a_j0, fj

    y[0] = y0
    f[0] = forcing + lam * pow(0.0, power) * y0
    for j in range(1, N + 1):
        t = j * h
        tail = y0 + t * y1 if n == 2 else y0
        coeff = lam * pow(t, power)
        acc = 0.0
        for k in range(j):
            acc += b[j - k] * f[k]
        fj = forcing + coeff * (tail + ha1 * acc)
        a_j0 = pow(j - 1.0, alpha + 1.0) - (j - 1.0 - alpha) * pow(j, alpha)
        acc = a_j0 * f[0]
        for k in range(1, j):
            acc += c[j - k] * f[k]
        y[j] = tail + ha2 * (acc + fj)
        if fabs(y[j]) > OVERFLOW_LIMIT:
            raise OverflowError(f"abm_linear_scalar: |y| exceeded 1e300 at step {j}")
        f[j] = forcing + coeff * y[j]
    return y_arr


def abm_linear_system(double gamma, M, x0, double h, int N):
    """PECE Adams-Bashforth-Moulton for the linear system D^gamma x = M x."""
    M_arr = np.ascontiguousarray(M, dtype=np.float64)
    x0_arr = np.ascontiguousarray(x0, dtype=np.float64)
    cdef Py_ssize_t d = x0_arr.shape[0]
    x_arr = np.empty((N + 1, d))
    f_arr = np.empty((N + 1, d))
    b_arr = np.empty(N + 1)
    c_arr = np.empty(N + 1)
    pred_arr = np.empty(d)
    cdef double[:, :] x = x_arr
    cdef double[:, :] f = f_arr
    cdef double[:, :] Mv = M_arr
    cdef double[:] xinit = x0_arr
    cdef double[:] pred = pred_arr
    cdef double[:] b = b_arr
    cdef double[:] c = c_arr
    _fill_weights(gamma, N, b, c)

    cdef double ha1 = pow(h, gamma) / _gamma_pos(gamma + 1.0)
    cdef double ha2 = pow(h, gamma) / _gamma_pos(gamma + 2.0)
    cdef Py_ssize_t j, k, i, r
    cdef double acc, a_j0, w, mx

    for i in range(d):
        x[0, i] = xinit[i]
    for i in range(d):
        acc = 0.0
        for r in range(d):
            acc += Mv[i, r] * x[0, r]
        f[0, i] = acc

    for j in range(1, N + 1):
        for i in range(d):
            acc = 0.0
            for k in range(j):
                acc += b[j - k] * f[k, i]
            pred[i] = xinit[i] + ha1 * acc
        a_j0 = pow(j - 1.0, gamma + 1.0) - (j - 1.0 - gamma) * pow(j, gamma)
        mx = 0.0
        for i in range(d):
            acc = a_j0 * f[0, i]
            for k in range(1, j):
                acc += c[j - k] * f[k, i]
            w = 0.0
            for r in range(d):
                w += Mv[i, r] * pred[r]
            x[j, i] = xinit[i] + ha2 * (acc + w)
            if fabs(x[j, i]) > mx:
                mx = fabs(x[j, i])
        if mx > OVERFLOW_LIMIT:
            raise OverflowError(f"abm_linear_system: |x| exceeded 1e300 at step {j}")
        for i in range(d):
            acc = 0.0
            for r in range(d):
                acc += Mv[i, r] * x[j, r]
            f[j, i] = acc
    return x_arr


def caputo_l1_batch(values, double alpha, double h):
    """L1 Caputo derivative (0 < alpha < 1) at every grid index j >= 1."""
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t N = v_arr.shape[0] - 1
    out_arr = np.empty(N + 1)
    w_arr = np.empty(N if N > 0 else 1)
    dv_arr = np.diff(v_arr)
    cdef double[:] v = v_arr
    cdef double[:] out = out_arr
    cdef double[:] w = w_arr
    cdef double[:] dv = dv_arr
    cdef Py_ssize_t j, k
    cdef double acc
    cdef double pref = pow(h, -alpha) / _gamma_pos(2.0 - alpha)

    for k in range(N):
        w[k] = pow(k + 1.0, 1.0 - alpha) - pow(<double> k, 1.0 - alpha)
    out[0] = float("nan")
    for j in range(1, N + 1):
        acc = 0.0
        for k in range(j):
            acc += w[k] * dv[j - 1 - k]
        out[j] = pref * acc
    return out_arr
