# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled run loops for the bundled objectives.

Mirrors ``_pyloop.py`` operation for operation (same expression order, same
libm calls, no fused multiply-adds) so both backends emit bit-identical
trajectories.  Only the three bundled objective kinds are supported here;
anything else falls back to the Python engine.
"""

import numpy as np

from libc.math cimport fabs, isfinite, pow, sqrt, tanh

# objective kind tags, kept in sync with hotuner.backend
DEF KIND_LSE = 0
DEF KIND_QUAD = 1
DEF KIND_REGRESS = 2


cdef inline void _grad(int kind, double[:, ::1] mat, double[::1] aux, int t,
                       double[::1] x, double[::1] g, int d) noexcept nogil:
    cdef double b, c, u, acc, r, s
    cdef int i
    if kind == KIND_LSE:
        b = mat[t, 0]
        c = mat[t, 1]
        u = b * (x[0] - c)
        g[0] = b * tanh(u)
    elif kind == KIND_QUAD:
        for i in range(d):
            g[i] = aux[i] * (x[i] - mat[t, i])
    else:
        acc = 0.0
        for i in range(d):
            acc = acc + mat[t, i] * x[i]
        r = 1.0 - acc
        s = -2.0 * r
        for i in range(d):
            g[i] = s * mat[t, i]


cdef inline bint _bad(double[::1] x, double[::1] g, int d, double guard) noexcept nogil:
    cdef int i
    for i in range(d):
        if not isfinite(x[i]) or fabs(x[i]) > guard:
            return True
    for i in range(d):
        if not isfinite(g[i]):
            return True
    return False


def run_ht(int kind, double[:, ::1] mat, double[::1] aux,
           double[::1] gamma, double[::1] mu, double[::1] beta, double[::1] nrm,
           double[::1] y0, double[::1] z0, int T, double guard):
    cdef int d = y0.shape[0]
    xs_arr = np.zeros((T, d))
    gs_arr = np.zeros((T, d))
    ys_arr = np.zeros((T + 1, d))
    zs_arr = np.zeros((T + 1, d))
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] gs = gs_arr
    cdef double[:, ::1] ys = ys_arr
    cdef double[:, ::1] zs = zs_arr
    y_arr = np.array(y0, dtype=np.float64)
    z_arr = np.array(z0, dtype=np.float64)
    x_arr = np.zeros(d)
    g_arr = np.zeros(d)
    cdef double[::1] y = y_arr
    cdef double[::1] z = z_arr
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef int diverged_at = -1
    cdef int t, i
    cdef double b, alpha, eta
    with nogil:
        for i in range(d):
            ys[0, i] = y[i]
            zs[0, i] = z[i]
        for t in range(T):
            b = beta[t]
            for i in range(d):
                x[i] = b * z[i] + (1.0 - b) * y[i]
            _grad(kind, mat, aux, t, x, g, d)
            for i in range(d):
                xs[t, i] = x[i]
                gs[t, i] = g[i]
            if _bad(x, g, d, guard):
                diverged_at = t
                break
            alpha = mu[t] / nrm[t]
            eta = gamma[t] / nrm[t]
            for i in range(d):
                y[i] = x[i] - alpha * g[i]
                z[i] = z[i] - eta * g[i]
                ys[t + 1, i] = y[i]
                zs[t + 1, i] = z[i]
    return xs_arr, gs_arr, ys_arr, zs_arr, diverged_at


def run_legacy(int kind, double[:, ::1] mat, double[::1] aux,
               double gamma, double beta, double[::1] nrm,
               double[::1] x0, int T, double guard):
    cdef int d = x0.shape[0]
    xs_arr = np.zeros((T, d))
    gs_arr = np.zeros((T, d))
    ys_arr = np.zeros((T + 1, d))
    zs_arr = np.zeros((T + 1, d))
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] gs = gs_arr
    cdef double[:, ::1] ys = ys_arr
    cdef double[:, ::1] zs = zs_arr
    y_arr = np.array(x0, dtype=np.float64)
    z_arr = np.array(x0, dtype=np.float64)
    x_arr = np.zeros(d)
    gn_arr = np.zeros(d)
    gc_arr = np.zeros(d)
    cdef double[::1] y = y_arr
    cdef double[::1] z = z_arr
    cdef double[::1] x = x_arr
    cdef double[::1] gn = gn_arr
    cdef double[::1] gc = gc_arr
    cdef int diverged_at = -1
    cdef int t, i
    cdef bint more_bad
    cdef double ay, eta
    with nogil:
        for i in range(d):
            ys[0, i] = y[i]
            zs[0, i] = z[i]
        for t in range(T):
            for i in range(d):
                x[i] = beta * z[i] + (1.0 - beta) * y[i]
            _grad(kind, mat, aux, t + 1, x, gn, d)
            _grad(kind, mat, aux, t, x, gc, d)
            for i in range(d):
                xs[t, i] = x[i]
                gs[t, i] = gc[i]
            more_bad = False
            for i in range(d):
                if not isfinite(gn[i]):
                    more_bad = True
            if _bad(x, gc, d, guard) or more_bad:
                diverged_at = t
                break
            ay = (gamma * beta) / nrm[t]
            eta = gamma / nrm[t]
            for i in range(d):
                y[i] = x[i] - ay * gn[i]
                z[i] = z[i] - eta * gc[i]
                ys[t + 1, i] = y[i]
                zs[t + 1, i] = z[i]
    return xs_arr, gs_arr, ys_arr, zs_arr, diverged_at


def run_gd(int kind, double[:, ::1] mat, double[::1] aux,
           double[::1] nrm, double[::1] x0, int T, double guard):
    cdef int d = x0.shape[0]
    xs_arr = np.zeros((T + 1, d))
    gs_arr = np.zeros((T, d))
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] gs = gs_arr
    x_arr = np.array(x0, dtype=np.float64)
    g_arr = np.zeros(d)
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef int diverged_at = -1
    cdef int t, i
    cdef double rate
    with nogil:
        for t in range(T):
            _grad(kind, mat, aux, t, x, g, d)
            for i in range(d):
                xs[t, i] = x[i]
                gs[t, i] = g[i]
            if _bad(x, g, d, guard):
                diverged_at = t
                break
            rate = 1.0 / nrm[t]
            for i in range(d):
                x[i] = x[i] - rate * g[i]
        if diverged_at < 0:
            for i in range(d):
                xs[T, i] = x[i]
    return xs_arr, gs_arr, diverged_at


def run_adagrad(int kind, double[:, ::1] mat, double[::1] aux,
                double alpha, double eps, double[::1] x0, int T, double guard):
    cdef int d = x0.shape[0]
    xs_arr = np.zeros((T + 1, d))
    gs_arr = np.zeros((T, d))
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] gs = gs_arr
    x_arr = np.array(x0, dtype=np.float64)
    g_arr = np.zeros(d)
    sq_arr = np.zeros(d)
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef double[::1] sq = sq_arr
    cdef int diverged_at = -1
    cdef int t, i
    with nogil:
        for t in range(T):
            _grad(kind, mat, aux, t, x, g, d)
            for i in range(d):
                xs[t, i] = x[i]
                gs[t, i] = g[i]
            if _bad(x, g, d, guard):
                diverged_at = t
                break
            for i in range(d):
                sq[i] = sq[i] + g[i] * g[i]
                x[i] = x[i] - alpha * (g[i] / (sqrt(sq[i]) + eps))
        if diverged_at < 0:
            for i in range(d):
                xs[T, i] = x[i]
    return xs_arr, gs_arr, diverged_at


def run_adam(int kind, double[:, ::1] mat, double[::1] aux,
             double alpha, double beta1, double beta2, double eps,
             double[::1] x0, int T, double guard):
    cdef int d = x0.shape[0]
    xs_arr = np.zeros((T + 1, d))
    gs_arr = np.zeros((T, d))
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] gs = gs_arr
    x_arr = np.array(x0, dtype=np.float64)
    g_arr = np.zeros(d)
    m_arr = np.zeros(d)
    v_arr = np.zeros(d)
    cdef double[::1] x = x_arr
    cdef double[::1] g = g_arr
    cdef double[::1] m = m_arr
    cdef double[::1] v = v_arr
    cdef int diverged_at = -1
    cdef int t, i, n
    cdef double bc1, bc2, lr, m_hat, v_hat
    with nogil:
        for t in range(T):
            _grad(kind, mat, aux, t, x, g, d)
            for i in range(d):
                xs[t, i] = x[i]
                gs[t, i] = g[i]
            if _bad(x, g, d, guard):
                diverged_at = t
                break
            n = t + 1
            bc1 = 1.0 - pow(beta1, <double>n)
            bc2 = 1.0 - pow(beta2, <double>n)
            lr = alpha / sqrt(<double>n)
            for i in range(d):
                m[i] = beta1 * m[i] + (1.0 - beta1) * g[i]
                v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i])
                m_hat = m[i] / bc1
                v_hat = v[i] / bc2
                x[i] = x[i] - lr * (m_hat / (sqrt(v_hat) + eps))
        if diverged_at < 0:
            for i in range(d):
                xs[T, i] = x[i]
    return xs_arr, gs_arr, diverged_at
