"""Experiment configuration, run execution, CSV traces, and built-in presets.

A config is a single JSON document (``schema_version`` 1) naming one
objective, a list of optimizers with piecewise-constant hyper-parameter
schedules, a horizon, and monitor flags.  Running it steps every optimizer
over the horizon, evaluates the Lyapunov monitors whenever the objective
exposes its per-step optimum, records divergence instead of aborting, and
serializes one CSV row per (optimizer, step).

CSV contract: header row, columns exactly

    t,optimizer,x0..x{d-1},f,grad_norm,V,W,delta_V,decrease_bound,certified,diverged

floats printed with 17 significant digits so reruns are byte-identical.
``delta_V`` in row t is V_t - V_{t-1}; ``decrease_bound`` is the certified
cap on that same difference, taken from the hyper-parameters at step t-1
(both 0 in the first row).  Columns that do not apply (no optimum, no
certificate theory for the optimizer) are empty strings.  Rows are grouped
per optimizer in declaration order, steps ascending.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .core import AnalysisParams, ParamSchedule, ScheduleError, as_schedule
from .metrics import RegretSeries, regret_series
from .objectives import (
    DiagonalQuadratic,
    LogSumExpObjective,
    SwitchingRegression,
    TimeVaryingObjective,
)
from .metrics import UnsupportedMetricError
from .stability import certify_general, check_legacy

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_MONITOR = 4

MONITOR_TOL_SCALE = 1e-9  # relative tolerance 1e-9 * (1 + V_t) on decrease checks

HT_KINDS = ("ht", "nagd", "tn_nagd")
GD_KINDS = ("gd", "tn_gd")
ALL_KINDS = HT_KINDS + GD_KINDS + ("adagrad", "adam", "legacy_ht")


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


def _parse_schedule(raw, name: str) -> ParamSchedule:
    try:
        if isinstance(raw, (int, float)):
            return ParamSchedule.constant(float(raw))
        if isinstance(raw, (list, tuple)):
            pairs = []
            for item in raw:
                start, value = item[0], item[1]
                if isinstance(value, (list, tuple)):
                    value = tuple(float(v) for v in value)
                pairs.append((int(start), value))
            return ParamSchedule.from_pairs(pairs)
    except (ScheduleError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad schedule for {name!r}: {exc}") from exc
    raise ConfigError(f"bad schedule for {name!r}: expected scalar or [[start, value], ...]")


def _build_objective(cfg: dict) -> TimeVaryingObjective:
    kind = cfg.get("kind")
    try:
        if kind == "log_sum_exp":
            return LogSumExpObjective(
                a=_parse_schedule(cfg.get("a", 1.0), "a"),
                b=_parse_schedule(cfg.get("b", 1.0), "b"),
                c=_parse_schedule(cfg.get("c", 0.0), "c"),
            )
        if kind == "diagonal_quadratic":
            center = cfg.get("center")
            return DiagonalQuadratic(
                weights=cfg["weights"],
                center=None if center is None else _parse_schedule(center, "center"),
            )
        if kind == "switching_regression":
            return SwitchingRegression(_parse_schedule(cfg["data"], "data"))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad objective spec: {exc}") from exc
    raise ConfigError(f"unknown objective kind {kind!r}")


@dataclass
class OptimizerSpec:
    name: str
    kind: str
    init: np.ndarray
    gamma: ParamSchedule | None = None
    mu: ParamSchedule | None = None
    beta: ParamSchedule | None = None
    normalizer: ParamSchedule | None = None
    alpha: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    legacy_gamma: float | None = None
    legacy_beta: float | None = None

    @classmethod
    def from_dict(cls, d: dict, dim: int) -> "OptimizerSpec":
        name = d.get("name")
        kind = d.get("kind")
        if not name:
            raise ConfigError("optimizer needs a name")
        if kind not in ALL_KINDS:
            raise ConfigError(f"unknown optimizer kind {kind!r} for {name!r}")
        init = np.asarray(d.get("init", [0.0] * dim), dtype=np.float64).reshape(-1)
        if init.shape[0] != dim:
            raise ConfigError(
                f"init for {name!r} has dim {init.shape[0]}, objective has dim {dim}"
            )
        spec = cls(name=name, kind=kind, init=init)
        if kind == "ht":
            for fname in ("gamma", "mu", "beta", "normalizer"):
                if fname not in d:
                    raise ConfigError(f"{name!r}: ht optimizer needs {fname!r}")
                setattr(spec, fname, _parse_schedule(d[fname], f"{name}.{fname}"))
        elif kind == "nagd":
            if "normalizer" not in d:
                raise ConfigError(f"{name!r}: nagd needs a normalizer")
            spec.normalizer = _parse_schedule(d["normalizer"], f"{name}.normalizer")
        elif kind == "gd":
            if "normalizer" not in d:
                raise ConfigError(f"{name!r}: gd needs a normalizer")
            spec.normalizer = _parse_schedule(d["normalizer"], f"{name}.normalizer")
        elif kind in ("adagrad", "adam"):
            spec.alpha = float(d.get("alpha", 1.0))
            spec.eps = float(d.get("eps", 1e-8))
            spec.beta1 = float(d.get("beta1", 0.9))
            spec.beta2 = float(d.get("beta2", 0.999))
            if not spec.alpha > 0:
                raise ConfigError(f"{name!r}: alpha must be positive")
        elif kind == "legacy_ht":
            try:
                spec.legacy_gamma = float(d["gamma"])
                spec.legacy_beta = float(d["beta"])
            except KeyError as exc:
                raise ConfigError(f"{name!r}: legacy_ht needs scalar gamma and beta") from exc
            if "normalizer" not in d:
                raise ConfigError(f"{name!r}: legacy_ht needs a normalizer")
            spec.normalizer = _parse_schedule(d["normalizer"], f"{name}.normalizer")
        # tn_gd / tn_nagd take the normalizer from the objective's smoothness
        return spec


@dataclass
class ExperimentConfig:
    objective: TimeVaryingObjective
    optimizers: list
    horizon: int
    analysis: AnalysisParams = field(default_factory=AnalysisParams)
    monitors: dict = field(default_factory=lambda: {"lyapunov": True, "certificate": True})
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        names = [s.name for s in self.optimizers]
        if len(set(names)) != len(names):
            raise ConfigError(f"optimizer names must be unique, got {names}")
        if not self.optimizers:
            raise ConfigError("config needs at least one optimizer")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r}")
        if "objective" not in d or "optimizers" not in d or "horizon" not in d:
            raise ConfigError("config needs objective, optimizers, and horizon")
        obj = _build_objective(d["objective"])
        horizon = int(d["horizon"])
        opts = [OptimizerSpec.from_dict(o, obj.dim) for o in d["optimizers"]]
        analysis_d = d.get("analysis", {})
        try:
            analysis = AnalysisParams(
                lam=float(analysis_d.get("lambda", 1.0)),
                xi=float(analysis_d.get("xi", 1.0)),
                nu=float(analysis_d.get("nu", 0.5)),
                epsilon=float(analysis_d.get("epsilon", 0.01)),
            )
        except ValueError as exc:
            raise ConfigError(f"bad analysis parameters: {exc}") from exc
        monitors = {"lyapunov": True, "certificate": True}
        monitors.update(d.get("monitors", {}))
        return cls(
            objective=obj,
            optimizers=opts,
            horizon=horizon,
            analysis=analysis,
            monitors=monitors,
            seed=int(d.get("seed", 0)),
            output=d.get("output"),
        )

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)


@dataclass
class OptimizerRun:
    """Post-processed trace of one optimizer over the horizon.

    Arrays are truncated at the diverged row when the run was flagged; after
    that row no further rows exist for the optimizer.
    """

    name: str
    kind: str
    rows: int
    xs: np.ndarray
    f: np.ndarray
    grad_norm: np.ndarray
    V: np.ndarray | None
    W: np.ndarray | None
    delta_v: np.ndarray | None
    decrease_bound: np.ndarray | None  # nan where not applicable
    certified: np.ndarray
    diverged_at: int | None
    violations: int

    def gaps(self, obj: TimeVaryingObjective) -> np.ndarray:
        """f_t(x_t) - f_t(x*_t); needs the per-step optimum."""
        opts = obj.optimum_series(np.arange(self.rows))
        if opts is None:
            raise UnsupportedMetricError("objective has no per-step optimum")
        fstar = obj.value_series(np.arange(self.rows), opts)
        return self.f - fstar


@dataclass
class RunTrace:
    config: ExperimentConfig
    runs: list

    @property
    def total_violations(self) -> int:
        return sum(r.violations for r in self.runs)

    def run(self, name: str) -> OptimizerRun:
        for r in self.runs:
            if r.name == name:
                return r
        raise KeyError(name)

    def csv_text(self) -> str:
        dim = self.config.objective.dim
        cols = (
            ["t", "optimizer"]
            + [f"x{i}" for i in range(dim)]
            + ["f", "grad_norm", "V", "W", "delta_V", "decrease_bound", "certified", "diverged"]
        )
        lines = [",".join(cols)]
        for run in self.runs:
            for t in range(run.rows):
                row = [str(t), run.name]
                row += [_fmt(run.xs[t, i]) for i in range(dim)]
                row.append(_fmt(run.f[t]))
                row.append(_fmt(run.grad_norm[t]))
                row.append("" if run.V is None else _fmt(run.V[t]))
                row.append("" if run.W is None else _fmt(run.W[t]))
                row.append("" if run.delta_v is None else _fmt(run.delta_v[t]))
                bound = None if run.decrease_bound is None else run.decrease_bound[t]
                row.append("" if bound is None or math.isnan(bound) else _fmt(bound))
                row.append("true" if run.certified[t] else "false")
                row.append("true" if run.diverged_at == t else "false")
                lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.csv_text())


def _fmt(v: float) -> str:
    return "%.17g" % v


def _ht_param_arrays(spec: OptimizerSpec, obj: TimeVaryingObjective, T: int):
    """Per-step (gamma, mu, beta, normalizer) arrays for the tuner family."""
    ts = np.arange(T)
    if spec.kind == "ht":
        return (
            spec.gamma.array(T),
            spec.mu.array(T),
            spec.beta.array(T),
            spec.normalizer.array(T),
        )
    # accelerated-gradient schedules; internal time index starts at 1
    internal = ts + 1.0
    gamma = internal / 2.0
    mu = np.ones(T)
    beta = 2.0 / (internal + 1.0)
    if spec.kind == "nagd":
        nrm = spec.normalizer.array(T)
    else:  # tn_nagd
        nrm = obj.smoothness_series(ts)
    return gamma, mu, beta, nrm


def _execute(spec: OptimizerSpec, obj: TimeVaryingObjective, T: int) -> tuple:
    """Dispatch one optimizer run; returns (RawRun, param arrays or None)."""
    if spec.kind in HT_KINDS:
        gamma, mu, beta, nrm = _ht_param_arrays(spec, obj, T)
        raw = backend.run_ht(obj, gamma, mu, beta, nrm, spec.init, spec.init, T)
        return raw, (gamma, mu, beta, nrm)
    if spec.kind in GD_KINDS:
        if spec.kind == "gd":
            nrm = spec.normalizer.array(T)
        else:
            nrm = obj.smoothness_series(np.arange(T))
        raw = backend.run_gd(obj, nrm, spec.init, T)
        gamma = np.ones(T)
        mu = np.ones(T)
        beta = np.ones(T)
        return raw, (gamma, mu, beta, nrm)
    if spec.kind == "legacy_ht":
        nrm = spec.normalizer.array(T)
        raw = backend.run_legacy(obj, spec.legacy_gamma, spec.legacy_beta, nrm, spec.init, T)
        gamma = np.full(T, spec.legacy_gamma)
        mu = np.full(T, spec.legacy_gamma * spec.legacy_beta)
        beta = np.full(T, spec.legacy_beta)
        return raw, (gamma, mu, beta, nrm)
    if spec.kind == "adagrad":
        raw = backend.run_adagrad(obj, spec.alpha, spec.eps, spec.init, T)
        return raw, None
    raw = backend.run_adam(obj, spec.alpha, spec.beta1, spec.beta2, spec.eps, spec.init, T)
    return raw, None


def _postprocess(
    spec: OptimizerSpec,
    obj: TimeVaryingObjective,
    raw: backend.RawRun,
    params,
    T: int,
    analysis: AnalysisParams,
    monitor: bool,
) -> OptimizerRun:
    rows = T if raw.diverged_at is None else raw.diverged_at + 1
    ts = np.arange(rows)
    xs = raw.xs[:rows]
    f = obj.value_series(ts, xs)
    grad_norm = np.sqrt(np.einsum("ij,ij->i", raw.gs[:rows], raw.gs[:rows]))

    # per-step certificates: hyper-parameter conditions plus the normalizer
    # actually dominating the smoothness bound
    certified = np.zeros(rows, dtype=bool)
    basic = np.zeros(rows, dtype=bool)
    if params is not None and spec.kind != "legacy_ht":
        gamma, mu, beta, nrm = params
        smooth = obj.smoothness_series(ts)
        n_ok = nrm[:rows] >= smooth - 1e-12
        for t in range(rows):
            cert = certify_general(
                float(gamma[t]),
                float(mu[t]),
                float(beta[t]),
                lam=analysis.lam,
                xi_t=analysis.xi,
                xi_next=analysis.xi,
                epsilon=analysis.epsilon,
            )
            basic[t] = cert.basic_ok and n_ok[t]
            certified[t] = (cert.ok or cert.basic_ok) and n_ok[t]
    elif spec.kind == "legacy_ht":
        gamma, mu, beta, nrm = params
        smooth = obj.smoothness_series(ts)
        n_ok = nrm[:rows] >= smooth - 1e-12
        certified[:] = n_ok & check_legacy(float(gamma[0]), float(beta[0]))

    V = W = delta_v = bound = None
    violations = 0
    opts_ext = obj.optimum_series(np.arange(rows + 1)) if monitor else None
    if opts_ext is not None:
        # state pair: tuner family carries (y, z); single-state methods are
        # monitored with y = z = x
        n_states = rows if raw.diverged_at is not None else rows + 1
        if raw.ys is not None:
            ys = raw.ys[:n_states]
            zs = raw.zs[:n_states]
        else:
            ys = raw.xs[:n_states]
            zs = ys
        star = opts_ext[:n_states]
        dz = zs - star
        dy = ys - zs
        dy2 = np.einsum("ij,ij->i", dy, dy)
        v_full = np.einsum("ij,ij->i", dz, dz) + dy2
        w_full = np.einsum("ij,ij->i", dz, dz) + analysis.xi * dy2
        V = v_full[:rows]
        W = w_full[:rows]
        # The certified decrease compares both endpoint states against the
        # SAME optimum (the one active while the step was taken); a jump in
        # the optimum re-initializes the analysis rather than violating it.
        n_trans = n_states - 1
        dz_end = zs[1:n_states] - star[:n_trans]
        dy_end = dy[1:n_states]
        dy_end2 = np.einsum("ij,ij->i", dy_end, dy_end)
        v_end = np.einsum("ij,ij->i", dz_end, dz_end) + dy_end2
        w_end = np.einsum("ij,ij->i", dz_end, dz_end) + analysis.xi * dy_end2
        dv_trans = v_end - v_full[:n_trans]
        dw_trans = w_end - w_full[:n_trans]
        delta_v = np.zeros(rows)
        delta_v[1:] = dv_trans[: rows - 1]
        if params is not None:
            gamma, mu, beta, nrm = params
            fstar = obj.value_series(ts, opts_ext[:rows])
            gap = fstar - f
            step_bound_v = 2.0 * (gamma[:rows] / nrm[:rows]) * gap
            step_bound_w = 2.0 * (1.0 - analysis.lam) * (gamma[:rows] / nrm[:rows]) * gap
            # row t records the bound governing the transition into row t
            bound = np.full(rows, np.nan)
            bound[0] = 0.0
            use_basic = basic[: rows - 1] if rows > 1 else basic[:0]
            bound[1:] = np.where(use_basic, step_bound_v[: rows - 1], step_bound_w[: rows - 1])
            # monitor every certified transition available in the state arrays
            for t in range(n_trans):
                if not certified[t]:
                    continue
                if basic[t]:
                    delta, cap, ref = dv_trans[t], step_bound_v[t], v_full[t]
                else:
                    delta, cap, ref = dw_trans[t], step_bound_w[t], w_full[t]
                if delta > cap + MONITOR_TOL_SCALE * (1.0 + ref):
                    violations += 1
        else:
            bound = np.full(rows, np.nan)

    return OptimizerRun(
        name=spec.name,
        kind=spec.kind,
        rows=rows,
        xs=xs,
        f=f,
        grad_norm=grad_norm,
        V=V,
        W=W,
        delta_v=delta_v,
        decrease_bound=bound,
        certified=certified,
        diverged_at=raw.diverged_at,
        violations=violations,
    )


def run_experiment(cfg: ExperimentConfig) -> RunTrace:
    """Step every optimizer over the horizon and post-process telemetry."""
    monitor = bool(cfg.monitors.get("lyapunov", True))
    runs = []
    for spec in cfg.optimizers:
        raw, params = _execute(spec, cfg.objective, cfg.horizon)
        runs.append(
            _postprocess(spec, cfg.objective, raw, params, cfg.horizon, cfg.analysis, monitor)
        )
    return RunTrace(config=cfg, runs=runs)


# ---------------------------------------------------------------------------
# condition sweep


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    c_grad: float
    c_cross: float
    c_dist: float
    discriminant: float
    verdict: bool


def sweep_gamma(gamma_min: float, gamma_max: float, steps: int) -> list:
    """Evaluate the general conditions across a gamma grid in the simple family.

    Settings: mu = 1, beta = 1/gamma, analysis weights lam = xi = 1.  The
    grid is ``steps`` evenly spaced points including both endpoints.
    """
    if not (1.0 <= gamma_min < gamma_max):
        raise ConfigError(f"need 1 <= gamma_min < gamma_max, got [{gamma_min}, {gamma_max}]")
    if steps < 2:
        raise ConfigError(f"need at least 2 grid points, got {steps}")
    rows = []
    for g in np.linspace(gamma_min, gamma_max, steps):
        g = float(g)
        cert = certify_general(g, 1.0, 1.0 / g, lam=1.0, xi_t=1.0, xi_next=1.0)
        rows.append(
            SweepRow(
                gamma=g,
                c_grad=cert.c_grad,
                c_cross=cert.c_cross,
                c_dist=cert.c_dist,
                discriminant=cert.discriminant,
                verdict=cert.ok,
            )
        )
    return rows


def sweep_csv_text(rows) -> str:
    lines = ["gamma,c_grad,c_cross,c_dist,discriminant,verdict"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.gamma),
                    _fmt(r.c_grad),
                    _fmt(r.c_cross),
                    _fmt(r.c_dist),
                    _fmt(r.discriminant),
                    "true" if r.verdict else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in reproductions


def _ht_spec(name, gamma, normalizer, init, mu=1.0, beta=None):
    beta = 1.0 / gamma if beta is None else beta
    return {
        "name": name,
        "kind": "ht",
        "gamma": gamma,
        "mu": mu,
        "beta": beta,
        "normalizer": normalizer,
        "init": init,
    }


def preset(name: str, tau: int = 100) -> ExperimentConfig:
    """Built-in experiment configurations for the comparison studies."""
    if name == "fig1":
        opts = [
            {"name": "gd", "kind": "gd", "normalizer": 49.0, "init": [5.0]},
            {"name": "nagd", "kind": "nagd", "normalizer": 49.0, "init": [5.0]},
        ]
        for g in range(1, 11):
            opts.append(_ht_spec(f"ht_gamma_{g}", float(g), 49.0, [5.0]))
        opts.append(_ht_spec("ht_gamma_1.5", 1.5, 49.0, [5.0]))
        return ExperimentConfig.from_dict(
            {
                "schema_version": 1,
                "horizon": 100,
                "objective": {
                    "kind": "log_sum_exp",
                    "a": 5.0,
                    "b": 7.0,
                    "c": [[0, 0.0], [50, 5.0]],
                },
                "optimizers": opts,
            }
        )
    if name == "fig2":
        n_sched = [[0, 49.0], [50, 441.0]]
        return ExperimentConfig.from_dict(
            {
                "schema_version": 1,
                "horizon": 250,
                "objective": {
                    "kind": "log_sum_exp",
                    "a": 5.0,
                    "b": [[0, 7.0], [50, 21.0]],
                    "c": 0.0,
                },
                "optimizers": [
                    {"name": "gd", "kind": "gd", "normalizer": 49.0, "init": [7.0]},
                    {"name": "nagd", "kind": "nagd", "normalizer": 49.0, "init": [7.0]},
                    {"name": "tn_gd", "kind": "tn_gd", "init": [7.0]},
                    {"name": "tn_nagd", "kind": "tn_nagd", "init": [7.0]},
                    _ht_spec("ht", 1.5, n_sched, [7.0]),
                ],
            }
        )
    if name == "fig3":
        return ExperimentConfig.from_dict(
            {
                "schema_version": 1,
                "horizon": 400,
                "objective": {
                    "kind": "log_sum_exp",
                    "a": 5.0,
                    "b": 7.0,
                    "c": [[0, 0.0], [50, 5.0], [150, -4.0], [300, 0.0]],
                },
                "optimizers": [
                    _ht_spec("ht", 1.5, 49.0, [5.0]),
                    {"name": "adagrad", "kind": "adagrad", "alpha": 1.0, "init": [5.0]},
                    {"name": "adam", "kind": "adam", "alpha": 1.0, "init": [5.0]},
                ],
            }
        )
    if name == "example1":
        if tau < 1:
            raise ConfigError(f"tau must be >= 1, got {tau}")
        horizon = 2 * tau + 100
        data = [[0, [1.0, 0.0]], [tau, [0.0, 1.0]]]
        init = [0.0, 0.0]
        return ExperimentConfig.from_dict(
            {
                "schema_version": 1,
                "horizon": horizon,
                "objective": {"kind": "switching_regression", "data": data},
                "optimizers": [
                    _ht_spec("ht", 1.5, 2.0, init),
                    {"name": "gd", "kind": "gd", "normalizer": 2.0, "init": init},
                    {"name": "adagrad", "kind": "adagrad", "alpha": 1.0, "init": init},
                    {"name": "adam", "kind": "adam", "alpha": 1.0, "init": init},
                ],
            }
        )
    raise ConfigError(f"unknown preset {name!r}")


PRESET_SWITCHES = {"fig1": (50,), "fig2": (50,), "fig3": (50, 150, 300)}


def repro(name: str, tau: int = 100) -> RunTrace:
    """Run a built-in preset and return its trace."""
    return run_experiment(preset(name, tau=tau))


def fig3_regret(trace: RunTrace, tol: float = 1e-2) -> RegretSeries:
    """Prefix regret series for every optimizer in a trace."""
    costs = {r.name: r.f for r in trace.runs}
    T = min(r.rows for r in trace.runs)
    return regret_series(costs, trace.config.objective, T, tol=tol)


def regret_csv_text(series: RegretSeries, xstar: np.ndarray | None) -> str:
    """Companion CSV: per-prefix comparator point, average costs, and regrets."""
    names = sorted(series.avg_regret)
    dim = series.x_bar.shape[1]
    cols = ["t"] + [f"xbar{i}" for i in range(dim)]
    if xstar is not None:
        cols += [f"xstar{i}" for i in range(dim)]
    cols += ["avg_comparator_cost"]
    cols += [f"avg_regret_{n}" for n in names]
    if series.regret_floor is not None:
        cols.append("regret_floor")
    lines = [",".join(cols)]
    for i, t in enumerate(series.ts):
        row = [str(int(t))]
        row += [_fmt(series.x_bar[i, j]) for j in range(dim)]
        if xstar is not None:
            row += [_fmt(xstar[i, j]) for j in range(dim)]
        row.append(_fmt(series.avg_comparator_cost[i]))
        row += [_fmt(series.avg_regret[n][i]) for n in names]
        if series.regret_floor is not None:
            row.append(_fmt(series.regret_floor[i]))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
