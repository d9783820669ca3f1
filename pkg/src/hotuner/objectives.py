"""Time-varying objective functions with exact gradients and verification oracles.

Each objective exposes values, gradients, a per-step smoothness bound, and
(when it exists) the per-step optimum.  The finite-difference gradient and the
convexity probe at the bottom of the module are independent oracles used by
the test suite to cross-check every bundled objective.

Scalar evaluation paths deliberately use ``math`` on Python floats with a
fixed operation order, so that the compiled stepping kernel (which performs
the same C arithmetic) produces bit-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ParamSchedule, as_schedule, as_vector

_LOG2 = math.log(2.0)


class ObjectiveError(ValueError):
    """An objective was constructed or evaluated with invalid coefficients."""


class EstimationError(RuntimeError):
    """A finite-difference estimate produced non-finite values."""


def log_cosh(u: float) -> float:
    """Overflow-safe log(cosh(u)) = |u| + log1p(exp(-2|u|)) - log 2."""
    a = abs(u)
    return a + math.log1p(math.exp(-2.0 * a)) - _LOG2


def _log_cosh_array(u: np.ndarray) -> np.ndarray:
    a = np.abs(u)
    return a + np.log1p(np.exp(-2.0 * a)) - _LOG2


class TimeVaryingObjective:
    """Interface shared by every objective in the package.

    ``value``/``grad`` must be finite for finite inputs; ``smoothness_bound``
    returns an upper bound on the gradient's Lipschitz constant at step ``t``
    (usable as a learning-rate normalizer); ``strong_convexity`` and
    ``optimum`` return ``None`` when unavailable.
    """

    dim: int = 1

    def value(self, t: int, x) -> float:
        raise NotImplementedError

    def grad(self, t: int, x) -> np.ndarray:
        raise NotImplementedError

    def smoothness_bound(self, t: int) -> float:
        raise NotImplementedError

    def strong_convexity(self, t: int):
        return None

    def optimum(self, t: int):
        return None

    # Vectorized helpers used by trace post-processing; subclasses override
    # with closed forms where it matters for speed.
    def value_series(self, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
        return np.asarray(
            [self.value(int(t), xs[i]) for i, t in enumerate(ts)], dtype=np.float64
        )

    def optimum_series(self, ts: np.ndarray):
        opts = [self.optimum(int(t)) for t in ts]
        if any(o is None for o in opts):
            return None
        return np.asarray(opts, dtype=np.float64)

    def smoothness_series(self, ts: np.ndarray) -> np.ndarray:
        return np.asarray([self.smoothness_bound(int(t)) for t in ts], dtype=np.float64)


class LogSumExpObjective(TimeVaryingObjective):
    """1-D objective log(a e^{-b(x-c)} + a e^{b(x-c)}) with scheduled a, b, c.

    The minimum value is log(2a), attained at x = c; the second derivative is
    b^2 sech^2(b(x-c)), so b^2 is a tight smoothness bound.  Values are
    computed as log(2a) + log cosh(b(x-c)), which survives arguments far
    beyond the naive two-exponential form.
    """

    dim = 1

    def __init__(self, a=1.0, b=1.0, c=0.0):
        self.a = as_schedule(a)
        self.b = as_schedule(b)
        self.c = as_schedule(c)
        for sched, name in ((self.a, "a"), (self.b, "b")):
            for _, v in sched.segments:
                if not v > 0:
                    raise ObjectiveError(f"{name} must stay positive, got segment value {v}")

    def _coeffs(self, t: int) -> tuple[float, float, float]:
        at, bt, ct = self.a.at(t), self.b.at(t), self.c.at(t)
        if not (at > 0 and bt > 0):
            raise ObjectiveError(f"need a, b > 0 at step {t}, got a={at}, b={bt}")
        return at, bt, ct

    def value(self, t: int, x) -> float:
        at, bt, ct = self._coeffs(t)
        xf = float(np.asarray(x).reshape(-1)[0]) if not isinstance(x, float) else x
        u = bt * (xf - ct)
        return math.log(2.0 * at) + log_cosh(u)

    def grad(self, t: int, x) -> np.ndarray:
        _, bt, ct = self._coeffs(t)
        xf = float(np.asarray(x).reshape(-1)[0]) if not isinstance(x, float) else x
        u = bt * (xf - ct)
        return np.array([bt * math.tanh(u)], dtype=np.float64)

    def smoothness_bound(self, t: int) -> float:
        _, bt, _ = self._coeffs(t)
        return bt * bt

    def optimum(self, t: int) -> np.ndarray:
        return np.array([self.c.at(t)], dtype=np.float64)

    def value_series(self, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
        a = np.asarray([self.a.at(int(t)) for t in ts])
        b = np.asarray([self.b.at(int(t)) for t in ts])
        c = np.asarray([self.c.at(int(t)) for t in ts])
        u = b * (np.asarray(xs).reshape(len(ts), -1)[:, 0] - c)
        return np.log(2.0 * a) + _log_cosh_array(u)


class SwitchingRegression(TimeVaryingObjective):
    """Streaming least squares (1 - D_t^T x)^2 with a scheduled data vector."""

    def __init__(self, data):
        self.data = as_schedule(data)
        first = self.data.at(0)
        if not isinstance(first, tuple):
            raise ObjectiveError("data schedule must hold vectors")
        self.dim = len(first)
        for _, v in self.data.segments:
            if len(v) != self.dim:
                raise ObjectiveError("data vectors must share one dimension")

    @classmethod
    def two_phase(cls, tau: int, before=(1.0, 0.0), after=(0.0, 1.0)) -> "SwitchingRegression":
        """Data equal to ``before`` for t < tau and ``after`` from t = tau on."""
        return cls(ParamSchedule(((0, tuple(before)), (tau, tuple(after)))))

    def _residual(self, t: int, x) -> tuple[tuple, float]:
        d = self.data.at(t)
        xv = as_vector(x, self.dim)
        acc = 0.0
        for i in range(self.dim):
            acc = acc + d[i] * float(xv[i])
        return d, 1.0 - acc

    def value(self, t: int, x) -> float:
        _, r = self._residual(t, x)
        return r * r

    def grad(self, t: int, x) -> np.ndarray:
        d, r = self._residual(t, x)
        s = -2.0 * r
        return np.array([s * d[i] for i in range(self.dim)], dtype=np.float64)

    def smoothness_bound(self, t: int) -> float:
        d = self.data.at(t)
        acc = 0.0
        for v in d:
            acc = acc + v * v
        return 2.0 * acc

    def value_series(self, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
        d = np.asarray([self.data.at(int(t)) for t in ts])
        r = 1.0 - np.einsum("ij,ij->i", d, np.asarray(xs).reshape(len(ts), -1))
        return r * r


class DiagonalQuadratic(TimeVaryingObjective):
    """0.5 * sum_i w_i (x_i - c_{t,i})^2 with positive weights and a scheduled center.

    Strongly convex test bed: min(w) is the strong-convexity modulus, max(w)
    the smoothness bound, and the center is the per-step optimum.
    """

    def __init__(self, weights, center=None):
        self.weights = tuple(float(w) for w in np.atleast_1d(weights))
        if not all(w > 0 for w in self.weights):
            raise ObjectiveError(f"weights must be positive, got {self.weights}")
        self.dim = len(self.weights)
        if center is None:
            center = tuple(0.0 for _ in self.weights)
        if not isinstance(center, ParamSchedule):
            center = ParamSchedule.constant(tuple(np.atleast_1d(center)))
        self.center = center
        for _, v in self.center.segments:
            if not isinstance(v, tuple) or len(v) != self.dim:
                raise ObjectiveError("center schedule must hold vectors matching the weights")

    def value(self, t: int, x) -> float:
        c = self.center.at(t)
        xv = as_vector(x, self.dim)
        acc = 0.0
        for i, w in enumerate(self.weights):
            diff = float(xv[i]) - c[i]
            acc = acc + w * (diff * diff)
        return 0.5 * acc

    def grad(self, t: int, x) -> np.ndarray:
        c = self.center.at(t)
        xv = as_vector(x, self.dim)
        return np.array(
            [w * (float(xv[i]) - c[i]) for i, w in enumerate(self.weights)],
            dtype=np.float64,
        )

    def smoothness_bound(self, t: int) -> float:
        return max(self.weights)

    def strong_convexity(self, t: int) -> float:
        return min(self.weights)

    def optimum(self, t: int) -> np.ndarray:
        return np.asarray(self.center.at(t), dtype=np.float64)

    def value_series(self, ts: np.ndarray, xs: np.ndarray) -> np.ndarray:
        c = np.asarray([self.center.at(int(t)) for t in ts])
        diff = np.asarray(xs).reshape(len(ts), -1) - c
        return 0.5 * np.einsum("ij,ij->i", diff * np.asarray(self.weights), diff)


# Contract-level aliases for the 1-D and regression evaluations.

def lse_value(obj: LogSumExpObjective, t: int, x) -> float:
    return obj.value(t, x)


def lse_grad(obj: LogSumExpObjective, t: int, x) -> float:
    return float(obj.grad(t, x)[0])


def regression_grad(obj: SwitchingRegression, t: int, x) -> np.ndarray:
    return obj.grad(t, x)


def fd_gradient(obj: TimeVaryingObjective, t: int, x, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient, componentwise (f(x+h e_i) - f(x-h e_i)) / 2h."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    xv = as_vector(x, obj.dim)
    out = np.empty(obj.dim, dtype=np.float64)
    for i in range(obj.dim):
        xp = xv.copy()
        xm = xv.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (obj.value(t, xp) - obj.value(t, xm)) / (2.0 * h)
    return out


def hessian_trace_bound(obj: TimeVaryingObjective, t: int, x, h: float = 1e-5) -> float:
    """Estimate trace of the Hessian at ``x`` by central differences of the gradient.

    For convex objectives the trace upper-bounds the largest eigenvalue, so
    the estimate is usable as a smoothness-normalizer candidate.
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    xv = as_vector(x, obj.dim)
    acc = 0.0
    for i in range(obj.dim):
        xp = xv.copy()
        xm = xv.copy()
        xp[i] += h
        xm[i] -= h
        acc += (obj.grad(t, xp)[i] - obj.grad(t, xm)[i]) / (2.0 * h)
    if not math.isfinite(acc):
        raise EstimationError(f"non-finite Hessian-trace estimate at x={xv!r}")
    return acc


@dataclass(frozen=True)
class ProbeCheck:
    name: str
    slack: float
    passed: bool


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of the convexity/smoothness inequality probe at one (t, x, y)."""

    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[ProbeCheck]:
        return [c for c in self.checks if not c.passed]


PROBE_TOL = 1e-9  # absolute slack treated as a pass (tight quadratic cases)


def convexity_probe(
    obj: TimeVaryingObjective, t: int, x, y, tol: float = PROBE_TOL
) -> ProbeReport:
    """Evaluate the standard smooth-convex inequalities between two points.

    Checks first-order convexity, the smoothness upper bound, co-coercivity,
    the strong-convexity analogues when a modulus is available, the
    distance-to-minimizer bounds when the optimum is available, and the
    lambda-interpolated minimizer bound at lambda in {0, 1/2, 1}.  Failures
    are recorded in the report, never raised.
    """
    xv = as_vector(x, obj.dim)
    yv = as_vector(y, obj.dim)
    if np.array_equal(xv, yv):
        raise ValueError("probe needs two distinct points")

    fx, fy = obj.value(t, xv), obj.value(t, yv)
    gx, gy = obj.grad(t, xv), obj.grad(t, yv)
    L = obj.smoothness_bound(t)
    sigma = obj.strong_convexity(t)
    xstar = obj.optimum(t)

    dxy = xv - yv
    dg = gx - gy
    gap_lin = float(gx @ (yv - xv))
    checks = []

    def add(name: str, slack: float):
        checks.append(ProbeCheck(name, float(slack), bool(slack >= -tol)))

    add("first_order_convexity", fy - fx - gap_lin)
    add("smoothness_upper_bound", fx + gap_lin + 0.5 * L * float(dxy @ dxy) - fy)
    add("cocoercivity", float(dg @ dxy) - float(dg @ dg) / L)
    add("upper_gradient_gap", float(gx @ dxy) - 0.5 / L * float(dg @ dg) - (fx - fy))
    if sigma is not None:
        add("strong_monotonicity", float(dg @ dxy) - sigma * float(dxy @ dxy))
        add(
            "cocoercivity_strong",
            float(dg @ dxy)
            - (sigma * L / (sigma + L)) * float(dxy @ dxy)
            - float(dg @ dg) / (sigma + L),
        )
    if xstar is not None:
        fstar = obj.value(t, xstar)
        gap = fx - fstar
        d2 = float((xv - xstar) @ (xv - xstar))
        g2 = float(gx @ gx)
        add("dist_min_lower", gap - 0.5 / L * g2)
        add("dist_min_upper", 0.5 * L * d2 - gap)
        if sigma is not None:
            add("dist_min_strong_lower", gap - 0.5 * sigma * d2)
            add("dist_min_strong_upper", 0.5 / sigma * g2 - gap)
        lhs = float(gx @ (xstar - xv))
        interp0 = None
        for lam in (0.0, 0.5, 1.0):
            bound = (1.0 - lam) * (fstar - fx) - (1.0 + lam) / (2.0 * L) * g2
            if lam == 0.0:
                interp0 = bound
            add(f"interp_minimizer_lam_{lam:g}", bound - lhs)
        # lambda = 0 must reproduce the plain minimizer bound exactly
        plain = (fstar - fx) - 1.0 / (2.0 * L) * g2
        add("interp_lam0_identity", -abs(interp0 - plain))
    return ProbeReport(tuple(checks))


class CountingObjective(TimeVaryingObjective):
    """Wrapper recording every value/grad call; used to audit gradient budgets."""

    def __init__(self, inner: TimeVaryingObjective):
        self.inner = inner
        self.dim = inner.dim
        self.value_times: list[int] = []
        self.grad_times: list[int] = []

    def value(self, t: int, x) -> float:
        self.value_times.append(t)
        return self.inner.value(t, x)

    def grad(self, t: int, x) -> np.ndarray:
        self.grad_times.append(t)
        return self.inner.grad(t, x)

    def smoothness_bound(self, t: int) -> float:
        return self.inner.smoothness_bound(t)

    def strong_convexity(self, t: int):
        return self.inner.strong_convexity(t)

    def optimum(self, t: int):
        return self.inner.optimum(t)
