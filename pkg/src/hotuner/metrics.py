"""Regret, comparator baselines, and convergence-time measurements.

Regret compares a trace's accumulated cost against the best fixed point in
hindsight, the minimizer of the summed objective over the first T steps.
That minimizer is found by deterministic gradient descent on the sum (step
1 over the summed smoothness), certified by the summed gradient norm, and
cross-checked against golden-section search in one dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_vector
from .objectives import LogSumExpObjective, TimeVaryingObjective


class SolverError(RuntimeError):
    """The hindsight solver missed its tolerance; carries the best iterate."""

    def __init__(self, message, best=None, grad_norm=None):
        super().__init__(message)
        self.best = best
        self.grad_norm = grad_norm


class UnsupportedMetricError(ValueError):
    """The metric needs a per-step optimum the objective does not provide."""


class _SummedObjective:
    """F(x) = sum_{t < T} f_t(x) with a vectorized path for the 1-D log-sum-exp."""

    def __init__(self, obj: TimeVaryingObjective, T: int):
        self.obj = obj
        self.T = T
        self.dim = obj.dim
        self.total_smoothness = float(
            np.sum(obj.smoothness_series(np.arange(T)))
        )
        self._lse = None
        if isinstance(obj, LogSumExpObjective):
            ts = range(T)
            self._lse = (
                np.asarray([obj.a.at(t) for t in ts]),
                np.asarray([obj.b.at(t) for t in ts]),
                np.asarray([obj.c.at(t) for t in ts]),
            )

    def value(self, x) -> float:
        if self._lse is not None:
            a, b, c = self._lse
            u = b * (float(np.asarray(x).reshape(-1)[0]) - c)
            au = np.abs(u)
            return float(np.sum(np.log(2.0 * a) + au + np.log1p(np.exp(-2.0 * au)) - math.log(2.0)))
        xv = as_vector(x, self.dim)
        return math.fsum(self.obj.value(t, xv) for t in range(self.T))

    def grad(self, x) -> np.ndarray:
        if self._lse is not None:
            _, b, c = self._lse
            u = b * (float(np.asarray(x).reshape(-1)[0]) - c)
            return np.array([float(np.sum(b * np.tanh(u)))])
        xv = as_vector(x, self.dim)
        total = np.zeros(self.dim)
        for t in range(self.T):
            total += self.obj.grad(t, xv)
        return total


def _golden_min(f, lo: float, hi: float, xtol: float = 1e-12) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def best_fixed_in_hindsight(
    obj: TimeVaryingObjective,
    T: int,
    tol: float = 1e-8,
    max_iter: int = 200_000,
    x0=None,
    cross_check: bool = True,
) -> np.ndarray:
    """Minimize the summed objective over the first T steps.

    Returns a point whose summed gradient norm is at most ``tol``; raises
    :class:`SolverError` (best iterate attached) if the iteration budget runs
    out first.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    F = _SummedObjective(obj, T)
    x = np.zeros(obj.dim) if x0 is None else as_vector(x0, obj.dim).copy()
    step = 1.0 / F.total_smoothness
    g = F.grad(x)
    best, best_norm = x, float(np.linalg.norm(g))
    for _ in range(max_iter):
        if best_norm <= tol:
            break
        x = x - step * g
        g = F.grad(x)
        n = float(np.linalg.norm(g))
        if n < best_norm:
            best, best_norm = x, n
    if obj.dim == 1 and cross_check:
        span = 1.0
        lo, hi = float(best[0]) - span, float(best[0]) + span
        f1 = lambda v: F.value(np.array([v]))
        # expand the bracket until both ends sit above an interior point
        mid = f1(float(best[0]))
        while f1(lo) < mid and span < 1e6:
            span *= 2.0
            lo = float(best[0]) - span
        while f1(hi) < mid and span < 1e6:
            span *= 2.0
            hi = float(best[0]) + span
        xg = np.array([_golden_min(f1, lo, hi)])
        if F.value(xg) < F.value(best):
            ng = float(np.linalg.norm(F.grad(xg)))
            if ng < best_norm:
                best, best_norm = xg, ng
    if best_norm > tol:
        raise SolverError(
            f"hindsight solver stalled at gradient norm {best_norm:.3e} > tol {tol:.1e}",
            best=best,
            grad_norm=best_norm,
        )
    return best


@dataclass(frozen=True)
class RegretReport:
    """Accumulated cost versus the best fixed point in hindsight.

    ``pointwise_lower_bound`` is the average gap to the per-step optima,
    (1/T) * sum_t [f_t(x_t) - f_t(x*_t)], available only when the objective
    exposes its optimum; it dominates the average regret, since no fixed
    comparator beats the pointwise optimum.
    """

    T: int
    x_bar: np.ndarray
    cumulative_cost: float
    comparator_cost: float
    regret: float
    average_regret: float
    pointwise_lower_bound: float | None


def regret(costs, obj: TimeVaryingObjective, T: int, tol: float = 1e-8) -> RegretReport:
    """Regret of a cost trace against the hindsight-optimal fixed point."""
    costs = np.asarray(costs, dtype=np.float64)
    if len(costs) < T:
        raise ValueError(f"trace shorter than T: {len(costs)} < {T}")
    x_bar = best_fixed_in_hindsight(obj, T, tol=tol)
    cumulative = math.fsum(costs[:T])
    comparator = math.fsum(obj.value(t, x_bar) for t in range(T))
    reg = cumulative - comparator
    plb = None
    opts = obj.optimum_series(np.arange(T))
    if opts is not None:
        star = math.fsum(obj.value(t, opts[t]) for t in range(T))
        plb = (cumulative - star) / T
    return RegretReport(
        T=T,
        x_bar=x_bar,
        cumulative_cost=cumulative,
        comparator_cost=comparator,
        regret=reg,
        average_regret=reg / T,
        pointwise_lower_bound=plb,
    )


@dataclass(frozen=True)
class RegretSeries:
    """Prefix-by-prefix regret data for the comparison plots.

    For each prefix length T' = 1..T: the hindsight point, the average cost
    of the hindsight point, the per-optimizer average regret, and the floor
    given by the regret of the pointwise-optimal trajectory (the lowest any
    algorithm could score).
    """

    ts: np.ndarray
    x_bar: np.ndarray
    avg_comparator_cost: np.ndarray
    avg_regret: dict
    regret_floor: np.ndarray | None


def regret_series(cost_by_optimizer: dict, obj: TimeVaryingObjective, T: int, tol: float = 1e-2) -> RegretSeries:
    """Prefix regret curves, warm-starting each hindsight solve at the last one.

    The default gradient tolerance is loose on purpose: prefixes whose
    segment counts balance exactly make the summed objective numerically
    flat around its minimizer (saturated opposing slopes), where a tight
    gradient certificate is unreachable but any plateau point has an
    essentially optimal value.
    """
    prefix_costs = {
        name: np.cumsum(np.asarray(c, dtype=np.float64)[:T])
        for name, c in cost_by_optimizer.items()
    }
    opts = obj.optimum_series(np.arange(T))
    star_prefix = None
    if opts is not None:
        star_prefix = np.cumsum(
            np.asarray([obj.value(t, opts[t]) for t in range(T)], dtype=np.float64)
        )
    xbars = np.zeros((T, obj.dim))
    comp = np.zeros(T)
    x_prev = None
    for Tp in range(1, T + 1):
        xb = best_fixed_in_hindsight(obj, Tp, tol=tol, x0=x_prev, cross_check=False)
        x_prev = xb
        xbars[Tp - 1] = xb
        comp[Tp - 1] = math.fsum(obj.value(t, xb) for t in range(Tp))
    ts = np.arange(1, T + 1, dtype=np.intp)
    avg_regret = {
        name: (pc[:T] - comp) / ts for name, pc in prefix_costs.items()
    }
    floor = None if star_prefix is None else (star_prefix - comp) / ts
    return RegretSeries(
        ts=ts,
        x_bar=xbars,
        avg_comparator_cost=comp / ts,
        avg_regret=avg_regret,
        regret_floor=floor,
    )


def time_to_epsilon(gaps, switch_times, horizon: int, eps: float = 1e-2) -> list:
    """Per-switch settle times of a gap trace f_t(x_t) - f_t(x*_t).

    For each switch time s, the smallest k such that the gap stays at or
    below ``eps`` on all of [s+k, next switch); ``None`` when no nonempty
    tail of the window qualifies (not reached).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    gaps = np.asarray(gaps, dtype=np.float64)
    if len(gaps) < horizon:
        raise ValueError(f"gap trace shorter than horizon: {len(gaps)} < {horizon}")
    switches = sorted(int(s) for s in switch_times)
    out = []
    for i, s in enumerate(switches):
        end = switches[i + 1] if i + 1 < len(switches) else horizon
        if not (0 <= s < end <= horizon):
            raise ValueError(f"switch window [{s}, {end}) outside the trace")
        window = gaps[s:end]
        bad = np.nonzero(window > eps)[0]
        if len(bad) == 0:
            out.append(0)
            continue
        k = int(bad[-1]) + 1
        out.append(None if s + k >= end else k)
    return out
