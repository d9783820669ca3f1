"""Step functions for the high-order tuner and the baseline optimizers.

Every function here is a pure transition: it takes a state and the objective
at step ``t`` and returns the next state, so runs are trivially reproducible
and independent runs can execute in parallel.  One call to :func:`ht_step`
advances the tuner from ``(y_t, z_t)`` to ``(y_{t+1}, z_{t+1})`` and reports
the blended iterate ``x_t`` together with the gradient taken there; telemetry
rows are keyed by the step whose gradient was evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import HtHyperParams, as_vector
from .objectives import TimeVaryingObjective

# Infinity-norm guard: states beyond this are reported as diverged by the
# harness instead of crashing the run (deliberately unstable baselines must
# still produce a trace).
DIVERGENCE_LIMIT = 1e8


class DivergenceError(RuntimeError):
    """A step produced a non-finite gradient or state.

    Carries the offending quantities so the harness can record a final
    flagged trace row instead of aborting the experiment.
    """

    def __init__(self, message, t=None, x=None, grad=None, state=None):
        super().__init__(message)
        self.t = t
        self.x = x
        self.grad = grad
        self.state = state


@dataclass(frozen=True)
class HtState:
    """Tuner state pair plus the iterate emitted at the most recent step."""

    y: np.ndarray
    z: np.ndarray
    last_x: np.ndarray | None = None

    @classmethod
    def from_point(cls, x0) -> "HtState":
        v = as_vector(x0)
        return cls(y=v.copy(), z=v.copy())


@dataclass
class AccumulatorState:
    """State for the accumulator-based baselines.

    ``grad_sq_sum`` feeds adagrad; ``m``/``v``/``step_count`` feed adam.  All
    accumulators start at zero.
    """

    x: np.ndarray
    grad_sq_sum: np.ndarray = field(default=None)
    m: np.ndarray = field(default=None)
    v: np.ndarray = field(default=None)
    step_count: int = 0

    def __post_init__(self):
        self.x = as_vector(self.x)
        d = self.x.shape[0]
        if self.grad_sq_sum is None:
            self.grad_sq_sum = np.zeros(d)
        if self.m is None:
            self.m = np.zeros(d)
        if self.v is None:
            self.v = np.zeros(d)


def _require_finite(arr: np.ndarray, t: int, x, state, label: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise DivergenceError(
            f"non-finite {label} at step {t}", t=t, x=x, grad=arr, state=state
        )


def ht_step(
    state: HtState, t: int, obj: TimeVaryingObjective, h: HtHyperParams
) -> tuple[HtState, np.ndarray, np.ndarray]:
    """One high-order tuner transition.

    x = beta*z + (1-beta)*y, then a single gradient g at x drives both
    updates: y' = x - (mu/N) g and z' = z - (gamma/N) g.
    """
    beta = h.beta
    x = beta * state.z + (1.0 - beta) * state.y
    g = obj.grad(t, x)
    _require_finite(g, t, x, state, "gradient")
    alpha = h.mu / h.normalizer
    eta = h.gamma / h.normalizer
    y_next = x - alpha * g
    z_next = state.z - eta * g
    return HtState(y=y_next, z=z_next, last_x=x), x, g


def legacy_ht_step(
    state: HtState,
    t: int,
    obj: TimeVaryingObjective,
    gamma: float,
    beta: float,
    normalizer: float,
) -> tuple[HtState, np.ndarray]:
    """Earlier two-gradient tuner variant, kept as a comparison optimizer.

    Uses the objective at two adjacent steps: y' = x - (gamma*beta/N) grad_{t+1}(x)
    and z' = z - (gamma/N) grad_t(x).  With a time-invariant objective this
    collapses to :func:`ht_step` with mu = gamma*beta.
    """
    x = beta * state.z + (1.0 - beta) * state.y
    g_next = obj.grad(t + 1, x)
    g_cur = obj.grad(t, x)
    _require_finite(g_next, t, x, state, "gradient")
    _require_finite(g_cur, t, x, state, "gradient")
    ay = (gamma * beta) / normalizer
    eta = gamma / normalizer
    y_next = x - ay * g_next
    z_next = state.z - eta * g_cur
    return HtState(y=y_next, z=z_next, last_x=x), x


def gd_step(x, t: int, obj: TimeVaryingObjective, normalizer: float) -> np.ndarray:
    """Plain normalized gradient descent: x - (1/N) grad_t(x)."""
    xv = as_vector(x, obj.dim)
    g = obj.grad(t, xv)
    _require_finite(g, t, xv, None, "gradient")
    rate = 1.0 / normalizer
    out = xv - rate * g
    _require_finite(out, t, xv, None, "iterate")
    return out


def tn_gd_step(x, t: int, obj: TimeVaryingObjective) -> np.ndarray:
    """Gradient descent whose normalizer tracks the current smoothness bound."""
    return gd_step(x, t, obj, obj.smoothness_bound(t))


def nagd_hyper(t: int, normalizer: float) -> HtHyperParams:
    """Accelerated-gradient parameterization of the tuner at step t >= 1.

    mu = 1, gamma = t/2, beta = 2/(t+1).  The schedule is singular at t = 0
    (gamma would vanish and beta leave [0, 1]), so the time index starts at 1.
    Note gamma grows without bound, which is exactly what the tuner's
    certified region disallows.
    """
    if t < 1:
        raise ValueError(f"accelerated schedule starts at t = 1, got {t}")
    return HtHyperParams(gamma=t / 2.0, mu=1.0, beta=2.0 / (t + 1.0), normalizer=normalizer)


def nagd_schedule(T: int, normalizer: float = 1.0) -> list[HtHyperParams]:
    """Hyper-parameters for steps t = 1 .. T of the accelerated schedule."""
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    return [nagd_hyper(t, normalizer) for t in range(1, T + 1)]


def adagrad_step(
    s: AccumulatorState,
    t: int,
    obj: TimeVaryingObjective,
    alpha: float,
    eps: float = 1e-8,
) -> AccumulatorState:
    """Accumulated-squared-gradient step: x - alpha * g / (sqrt(sum g^2) + eps)."""
    if not (alpha > 0 and eps > 0):
        raise ValueError("alpha and eps must be positive")
    g = obj.grad(t, s.x)
    _require_finite(g, t, s.x, s, "gradient")
    sq = s.grad_sq_sum + g * g
    x_next = s.x - alpha * (g / (np.sqrt(sq) + eps))
    _require_finite(x_next, t, s.x, s, "iterate")
    return AccumulatorState(
        x=x_next, grad_sq_sum=sq, m=s.m, v=s.v, step_count=s.step_count + 1
    )


def adam_step(
    s: AccumulatorState,
    t: int,
    obj: TimeVaryingObjective,
    alpha: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> AccumulatorState:
    """Bias-corrected moment step with decaying rate alpha / sqrt(n).

    ``n`` is the 1-based count of steps taken so far (state.step_count + 1);
    the gradient is evaluated on the objective at step ``t``.
    """
    if not (0 <= beta1 < 1 and 0 <= beta2 < 1):
        raise ValueError("beta1 and beta2 must lie in [0, 1)")
    g = obj.grad(t, s.x)
    _require_finite(g, t, s.x, s, "gradient")
    n = s.step_count + 1
    m = beta1 * s.m + (1.0 - beta1) * g
    v = beta2 * s.v + (1.0 - beta2) * (g * g)
    m_hat = m / (1.0 - beta1 ** n)
    v_hat = v / (1.0 - beta2 ** n)
    lr = alpha / np.sqrt(float(n))
    x_next = s.x - lr * (m_hat / (np.sqrt(v_hat) + eps))
    _require_finite(x_next, t, s.x, s, "iterate")
    return AccumulatorState(x=x_next, grad_sq_sum=s.grad_sq_sum, m=m, v=v, step_count=n)
