"""Backend selection: compiled stepping kernel with pure-Python fallback.

The compiled extension (``hotuner._fastloop``) is picked automatically when
importable; set ``HOTUNER_BACKEND=python`` to force the fallback or
``HOTUNER_BACKEND=cython`` to fail loudly when the extension is missing.
Both engines implement identical arithmetic, so a run's trajectory does not
depend on which one executed it.

The compiled kernels only understand the bundled objective types; runs on a
custom :class:`~hotuner.objectives.TimeVaryingObjective` transparently use
the Python engine.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pyloop
from .objectives import (
    DiagonalQuadratic,
    LogSumExpObjective,
    SwitchingRegression,
    TimeVaryingObjective,
)
from .optimizers import DIVERGENCE_LIMIT

KIND_LSE = 0
KIND_QUAD = 1
KIND_REGRESS = 2

_requested = os.environ.get("HOTUNER_BACKEND", "auto").lower()
try:
    from . import _fastloop
except ImportError:
    _fastloop = None

if _requested == "python":
    _fastloop = None
elif _requested == "cython" and _fastloop is None:
    raise ImportError(
        "HOTUNER_BACKEND=cython but the compiled extension is not available; "
        "reinstall with a C toolchain or drop the override"
    )
elif _requested not in ("auto", "cython", "python", ""):
    raise ValueError(f"unknown HOTUNER_BACKEND value {_requested!r}")

DEFAULT_BACKEND = "cython" if _fastloop is not None else "python"


def available_backends() -> tuple[str, ...]:
    return ("python",) if _fastloop is None else ("cython", "python")


def _descriptor(obj: TimeVaryingObjective, length: int):
    """Kernel arrays for a bundled objective, or None when unsupported."""
    if isinstance(obj, LogSumExpObjective):
        mat = np.column_stack([obj.b.array(length), obj.c.array(length)])
        return KIND_LSE, np.ascontiguousarray(mat), np.zeros(0)
    if isinstance(obj, DiagonalQuadratic):
        mat = obj.center.array(length).reshape(length, obj.dim)
        return KIND_QUAD, np.ascontiguousarray(mat), np.asarray(obj.weights, dtype=np.float64)
    if isinstance(obj, SwitchingRegression):
        mat = obj.data.array(length).reshape(length, obj.dim)
        return KIND_REGRESS, np.ascontiguousarray(mat), np.zeros(0)
    return None


@dataclass
class RawRun:
    """Raw trajectories of one optimizer run.

    ``xs[t]`` is the iterate whose gradient was taken at step ``t`` (for
    state-only methods ``xs`` has one extra trailing row, the final state).
    ``ys``/``zs`` hold the tuner state pair for steps ``0..T`` and are None
    for methods without a second state.  ``diverged_at`` is the step index
    of the flagged row, or None.
    """

    xs: np.ndarray
    gs: np.ndarray
    ys: np.ndarray | None
    zs: np.ndarray | None
    diverged_at: int | None


def _pick(backend: str | None) -> str:
    if backend is None:
        return DEFAULT_BACKEND
    if backend not in ("cython", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "cython" and _fastloop is None:
        raise RuntimeError("compiled backend requested but not available")
    return backend


def _wrap(res, with_state: bool) -> RawRun:
    if with_state:
        xs, gs, ys, zs, div = res
        return RawRun(xs, gs, ys, zs, None if div < 0 else div)
    xs, gs, div = res
    return RawRun(xs, gs, None, None, None if div < 0 else div)


def _as_step_array(value, T: int) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        return np.full(T, float(arr))
    if arr.shape[0] < T:
        raise ValueError(f"per-step array too short: {arr.shape[0]} < {T}")
    return np.ascontiguousarray(arr[:T])


def run_ht(
    obj: TimeVaryingObjective,
    gamma,
    mu,
    beta,
    nrm,
    y0,
    z0,
    T: int,
    guard: float = DIVERGENCE_LIMIT,
    backend: str | None = None,
) -> RawRun:
    """Run the high-order tuner for T steps with per-step hyper-parameters."""
    gamma, mu, beta, nrm = (_as_step_array(v, T) for v in (gamma, mu, beta, nrm))
    y0 = np.asarray(y0, dtype=np.float64)
    z0 = np.asarray(z0, dtype=np.float64)
    which = _pick(backend)
    desc = _descriptor(obj, T + 1) if which == "cython" else None
    if desc is not None:
        kind, mat, aux = desc
        res = _fastloop.run_ht(kind, mat, aux, gamma, mu, beta, nrm, y0, z0, T, guard)
    else:
        res = _pyloop.run_ht(obj, gamma, mu, beta, nrm, y0, z0, T, guard)
    return _wrap(res, with_state=True)


def run_legacy(
    obj: TimeVaryingObjective,
    gamma: float,
    beta: float,
    nrm,
    x0,
    T: int,
    guard: float = DIVERGENCE_LIMIT,
    backend: str | None = None,
) -> RawRun:
    """Run the two-gradient tuner variant (constant gamma, beta)."""
    nrm = _as_step_array(nrm, T)
    x0 = np.asarray(x0, dtype=np.float64)
    which = _pick(backend)
    desc = _descriptor(obj, T + 2) if which == "cython" else None
    if desc is not None:
        kind, mat, aux = desc
        res = _fastloop.run_legacy(kind, mat, aux, float(gamma), float(beta), nrm, x0, T, guard)
    else:
        res = _pyloop.run_legacy(obj, float(gamma), float(beta), nrm, x0, T, guard)
    return _wrap(res, with_state=True)


def run_gd(
    obj: TimeVaryingObjective,
    nrm,
    x0,
    T: int,
    guard: float = DIVERGENCE_LIMIT,
    backend: str | None = None,
) -> RawRun:
    """Run normalized gradient descent with a per-step normalizer."""
    nrm = _as_step_array(nrm, T)
    x0 = np.asarray(x0, dtype=np.float64)
    which = _pick(backend)
    desc = _descriptor(obj, T + 1) if which == "cython" else None
    if desc is not None:
        kind, mat, aux = desc
        res = _fastloop.run_gd(kind, mat, aux, nrm, x0, T, guard)
    else:
        res = _pyloop.run_gd(obj, nrm, x0, T, guard)
    return _wrap(res, with_state=False)


def run_adagrad(
    obj: TimeVaryingObjective,
    alpha: float,
    eps: float,
    x0,
    T: int,
    guard: float = DIVERGENCE_LIMIT,
    backend: str | None = None,
) -> RawRun:
    x0 = np.asarray(x0, dtype=np.float64)
    which = _pick(backend)
    desc = _descriptor(obj, T + 1) if which == "cython" else None
    if desc is not None:
        kind, mat, aux = desc
        res = _fastloop.run_adagrad(kind, mat, aux, float(alpha), float(eps), x0, T, guard)
    else:
        res = _pyloop.run_adagrad(obj, float(alpha), float(eps), x0, T, guard)
    return _wrap(res, with_state=False)


def run_adam(
    obj: TimeVaryingObjective,
    alpha: float,
    beta1: float,
    beta2: float,
    eps: float,
    x0,
    T: int,
    guard: float = DIVERGENCE_LIMIT,
    backend: str | None = None,
) -> RawRun:
    x0 = np.asarray(x0, dtype=np.float64)
    which = _pick(backend)
    desc = _descriptor(obj, T + 1) if which == "cython" else None
    if desc is not None:
        kind, mat, aux = desc
        res = _fastloop.run_adam(
            kind, mat, aux, float(alpha), float(beta1), float(beta2), float(eps), x0, T, guard
        )
    else:
        res = _pyloop.run_adam(obj, float(alpha), float(beta1), float(beta2), float(eps), x0, T, guard)
    return _wrap(res, with_state=False)
