"""Pure-Python run loops: the fallback engine behind :mod:`hotuner.backend`.

Each loop inlines exactly the arithmetic of the corresponding step function
in :mod:`hotuner.optimizers` (asserted bit-for-bit by the test suite) and
mirrors, operation for operation, the compiled kernel in ``_fastloop.pyx``,
so the two backends produce identical trajectories.

Divergence rule, shared by every loop: a step is flagged when the emitted
iterate is non-finite or exceeds the infinity-norm guard, or when its
gradient is non-finite.  The flagged row is recorded and the run stops.
"""

from __future__ import annotations

import math

import numpy as np


def _bad(x: np.ndarray, g: np.ndarray, guard: float) -> bool:
    if not np.all(np.isfinite(x)) or float(np.max(np.abs(x))) > guard:
        return True
    return not np.all(np.isfinite(g))


def run_ht(obj, gamma, mu, beta, nrm, y0, z0, T: int, guard: float):
    d = len(y0)
    xs = np.zeros((T, d))
    gs = np.zeros((T, d))
    ys = np.zeros((T + 1, d))
    zs = np.zeros((T + 1, d))
    y = np.array(y0, dtype=np.float64)
    z = np.array(z0, dtype=np.float64)
    ys[0] = y
    zs[0] = z
    diverged_at = -1
    for t in range(T):
        b = beta[t]
        x = b * z + (1.0 - b) * y
        g = obj.grad(t, x)
        xs[t] = x
        gs[t] = g
        if _bad(x, g, guard):
            diverged_at = t
            break
        alpha = mu[t] / nrm[t]
        eta = gamma[t] / nrm[t]
        y = x - alpha * g
        z = z - eta * g
        ys[t + 1] = y
        zs[t + 1] = z
    return xs, gs, ys, zs, diverged_at


def run_legacy(obj, gamma: float, beta: float, nrm, x0, T: int, guard: float):
    d = len(x0)
    xs = np.zeros((T, d))
    gs = np.zeros((T, d))
    ys = np.zeros((T + 1, d))
    zs = np.zeros((T + 1, d))
    y = np.array(x0, dtype=np.float64)
    z = np.array(x0, dtype=np.float64)
    ys[0] = y
    zs[0] = z
    diverged_at = -1
    for t in range(T):
        x = beta * z + (1.0 - beta) * y
        g_next = obj.grad(t + 1, x)
        g_cur = obj.grad(t, x)
        xs[t] = x
        gs[t] = g_cur
        if _bad(x, g_cur, guard) or not np.all(np.isfinite(g_next)):
            diverged_at = t
            break
        ay = (gamma * beta) / nrm[t]
        eta = gamma / nrm[t]
        y = x - ay * g_next
        z = z - eta * g_cur
        ys[t + 1] = y
        zs[t + 1] = z
    return xs, gs, ys, zs, diverged_at


def run_gd(obj, nrm, x0, T: int, guard: float):
    d = len(x0)
    xs = np.zeros((T + 1, d))
    gs = np.zeros((T, d))
    x = np.array(x0, dtype=np.float64)
    diverged_at = -1
    for t in range(T):
        g = obj.grad(t, x)
        xs[t] = x
        gs[t] = g
        if _bad(x, g, guard):
            diverged_at = t
            break
        rate = 1.0 / nrm[t]
        x = x - rate * g
    else:
        xs[T] = x
    return xs, gs, diverged_at


def run_adagrad(obj, alpha: float, eps: float, x0, T: int, guard: float):
    d = len(x0)
    xs = np.zeros((T + 1, d))
    gs = np.zeros((T, d))
    x = np.array(x0, dtype=np.float64)
    sq = np.zeros(d)
    diverged_at = -1
    for t in range(T):
        g = obj.grad(t, x)
        xs[t] = x
        gs[t] = g
        if _bad(x, g, guard):
            diverged_at = t
            break
        sq = sq + g * g
        x = x - alpha * (g / (np.sqrt(sq) + eps))
    else:
        xs[T] = x
    return xs, gs, diverged_at


def run_adam(obj, alpha: float, beta1: float, beta2: float, eps: float, x0, T: int, guard: float):
    d = len(x0)
    xs = np.zeros((T + 1, d))
    gs = np.zeros((T, d))
    x = np.array(x0, dtype=np.float64)
    m = np.zeros(d)
    v = np.zeros(d)
    diverged_at = -1
    for t in range(T):
        g = obj.grad(t, x)
        xs[t] = x
        gs[t] = g
        if _bad(x, g, guard):
            diverged_at = t
            break
        n = t + 1
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * (g * g)
        m_hat = m / (1.0 - beta1 ** n)
        v_hat = v / (1.0 - beta2 ** n)
        lr = alpha / np.sqrt(float(n))
        x = x - lr * (m_hat / (np.sqrt(v_hat) + eps))
    else:
        xs[T] = x
    return xs, gs, diverged_at
