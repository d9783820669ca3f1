"""Shared numeric types: piecewise-constant schedules and tuner hyper-parameters.

Every quantity that changes over time in this package (learning-rate knobs,
objective coefficients, normalizers) is represented by a :class:`ParamSchedule`,
a left-closed piecewise-constant function of the integer step counter.
Vectors are plain float64 numpy arrays throughout.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

ScheduleValue = Union[float, tuple]


class InvalidHyperParamError(ValueError):
    """A hyper-parameter is outside its admissible range."""


class ScheduleError(ValueError):
    """A schedule violates the segment invariants."""


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce a scalar or sequence to a float64 vector, checking ``dim``."""
    v = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.shape[0]}")
    return v


def _check_value(value) -> ScheduleValue:
    if isinstance(value, (tuple, list, np.ndarray)):
        vals = tuple(float(v) for v in value)
        if not all(math.isfinite(v) for v in vals):
            raise ScheduleError(f"non-finite schedule value {value!r}")
        return vals
    v = float(value)
    if not math.isfinite(v):
        raise ScheduleError(f"non-finite schedule value {value!r}")
    return v


@dataclass(frozen=True)
class ParamSchedule:
    """Piecewise-constant, left-closed time function.

    ``segments`` is an ordered tuple of ``(start_step, value)`` pairs; the
    value at step ``t`` is the value of the last segment whose
    ``start_step <= t``.  The first segment must start at 0, so every
    ``t >= 0`` is covered.  Values are scalars, or tuples for vector-valued
    schedules (objective centers, data vectors).
    """

    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise ScheduleError("schedule needs at least one segment")
        norm = []
        prev = None
        for seg in self.segments:
            start, value = seg
            start = int(start)
            if prev is None:
                if start != 0:
                    raise ScheduleError("first segment must start at step 0")
            elif start <= prev:
                raise ScheduleError("segment start steps must be strictly increasing")
            prev = start
            norm.append((start, _check_value(value)))
        object.__setattr__(self, "segments", tuple(norm))
        object.__setattr__(self, "_starts", tuple(s for s, _ in norm))

    @classmethod
    def constant(cls, value) -> "ParamSchedule":
        return cls(((0, value),))

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "ParamSchedule":
        return cls(tuple((int(s), v) for s, v in pairs))

    def at(self, t: int):
        """Value of the governing segment at step ``t >= 0``."""
        if t < 0:
            raise ScheduleError(f"negative step {t}")
        i = bisect_right(self._starts, t) - 1
        return self.segments[i][1]

    def array(self, length: int) -> np.ndarray:
        """Materialize steps ``0 .. length-1`` as a float64 array.

        Scalar schedules give shape ``(length,)``; vector schedules
        ``(length, d)``.
        """
        return np.asarray([self.at(t) for t in range(length)], dtype=np.float64)


def schedule_at(schedule: ParamSchedule, t: int):
    """Piecewise-constant lookup; see :meth:`ParamSchedule.at`."""
    return schedule.at(t)


def as_schedule(value) -> ParamSchedule:
    """Wrap a bare scalar/vector as a constant schedule; pass schedules through."""
    if isinstance(value, ParamSchedule):
        return value
    return ParamSchedule.constant(value)


@dataclass(frozen=True)
class HtHyperParams:
    """One step's worth of high-order tuner design parameters.

    ``gamma`` scales the slow (momentum) state update, ``mu`` the fast
    gradient step, ``beta`` mixes the two states, and ``normalizer`` is the
    running upper bound on the objective's smoothness that divides both
    learning rates.
    """

    gamma: float
    mu: float
    beta: float
    normalizer: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidHyperParamError(f"gamma must be positive, got {self.gamma}")
        if not (0 < self.mu <= 1):
            raise InvalidHyperParamError(f"mu must lie in (0, 1], got {self.mu}")
        if not (0 <= self.beta <= 1):
            raise InvalidHyperParamError(f"beta must lie in [0, 1], got {self.beta}")
        if not (self.normalizer > 0 and math.isfinite(self.normalizer)):
            raise InvalidHyperParamError(
                f"normalizer must be positive, got {self.normalizer}"
            )

    @property
    def alpha(self) -> float:
        """Gradient-step rate mu / normalizer."""
        return self.mu / self.normalizer

    @property
    def eta(self) -> float:
        """Momentum-state rate gamma / normalizer."""
        return self.gamma / self.normalizer

    @property
    def beta_bar(self) -> float:
        return 1.0 - self.beta

    @property
    def mu_bar(self) -> float:
        return 1.0 - self.mu


def derived_rates(h: HtHyperParams) -> tuple[float, float]:
    """Return ``(alpha, eta) = (mu/normalizer, gamma/normalizer)``."""
    if not h.normalizer > 0:
        raise InvalidHyperParamError(f"normalizer must be positive, got {h.normalizer}")
    return h.mu / h.normalizer, h.gamma / h.normalizer


@dataclass(frozen=True)
class AnalysisParams:
    """Free parameters of the stability analysis (not of the algorithm).

    ``lam`` weights the certified decrease, ``xi`` weights the state-offset
    term of the Lyapunov candidate, ``nu`` splits the contraction budget in
    the strongly convex rate, and ``epsilon`` is the strict margin keeping
    rates bounded away from their degenerate endpoints.
    """

    lam: float = 1.0
    xi: float = 1.0
    nu: float = 0.5
    epsilon: float = 0.01

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidHyperParamError(f"epsilon must be > 0, got {self.epsilon}")
        if not (0 <= self.lam <= 1 - self.epsilon or self.lam == 1.0):
            # lam == 1 is the boundedness-only setting; anything else must
            # keep the epsilon margin below 1.
            raise InvalidHyperParamError(f"lam must lie in [0, 1-eps] or equal 1, got {self.lam}")
        if not self.xi >= self.epsilon:
            raise InvalidHyperParamError(f"xi must be >= epsilon, got {self.xi}")
        if not (self.epsilon <= self.nu <= 1 - self.epsilon):
            raise InvalidHyperParamError(f"nu must lie in [eps, 1-eps], got {self.nu}")
