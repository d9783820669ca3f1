"""Command-line interface.

Subcommands:

- ``run --config cfg.json [--out trace.csv]``: execute a config, write the trace
- ``repro {fig1,fig2,fig3,example1} [--out path] [--tau N]``: built-in presets
  (fig3 also writes a ``*_regret.csv`` companion next to the trace)
- ``sweep --gamma-min A --gamma-max B --steps N --out path``: condition sweep
- ``certify --config cfg.json``: per-step certificate summary, no execution

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 a Lyapunov
monitor was violated under certified hyper-parameters.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import harness
from .harness import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_MONITOR,
    EXIT_OK,
    ConfigError,
    ExperimentConfig,
)
from .stability import certify_general


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IoFailure(str(exc)) from exc


class _IoFailure(Exception):
    pass


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    out = args.out or cfg.output
    trace = harness.run_experiment(cfg)
    if out:
        _write(out, trace.csv_text())
        print(f"wrote {sum(r.rows for r in trace.runs)} rows to {out}")
    if trace.total_violations:
        print(
            f"monitor violation: {trace.total_violations} certified decrease "
            "check(s) failed",
            file=sys.stderr,
        )
        return EXIT_MONITOR
    return EXIT_OK


def _cmd_repro(args) -> int:
    trace = harness.repro(args.name, tau=args.tau)
    out = args.out or f"{args.name}.csv"
    _write(out, trace.csv_text())
    print(f"wrote {sum(r.rows for r in trace.runs)} rows to {out}")
    if args.name == "fig3":
        series = harness.fig3_regret(trace)
        T = len(series.ts)
        xstar = trace.config.objective.optimum_series(np.arange(T))
        stem, ext = os.path.splitext(out)
        companion = f"{stem}_regret{ext or '.csv'}"
        _write(companion, harness.regret_csv_text(series, xstar))
        print(f"wrote regret series to {companion}")
    if trace.total_violations:
        print("monitor violation under certified settings", file=sys.stderr)
        return EXIT_MONITOR
    return EXIT_OK


def _cmd_sweep(args) -> int:
    rows = harness.sweep_gamma(args.gamma_min, args.gamma_max, args.steps)
    _write(args.out, harness.sweep_csv_text(rows))
    crossing = next((r.gamma for r in rows if not r.verdict), None)
    print(f"wrote {len(rows)} grid points to {args.out}")
    if crossing is not None:
        print(f"first uncertified gamma: {crossing:.6g}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    trace_kinds = harness.HT_KINDS + harness.GD_KINDS + ("legacy_ht",)
    any_printed = False
    for spec in cfg.optimizers:
        if spec.kind not in trace_kinds:
            continue
        any_printed = True
        if spec.kind == "legacy_ht":
            gamma = np.full(cfg.horizon, spec.legacy_gamma)
            mu = gamma * spec.legacy_beta
            beta = np.full(cfg.horizon, spec.legacy_beta)
            nrm = spec.normalizer.array(cfg.horizon)
        elif spec.kind in harness.GD_KINDS:
            gamma = np.ones(cfg.horizon)
            mu = np.ones(cfg.horizon)
            beta = np.ones(cfg.horizon)
            nrm = (
                spec.normalizer.array(cfg.horizon)
                if spec.kind == "gd"
                else cfg.objective.smoothness_series(np.arange(cfg.horizon))
            )
        else:
            gamma, mu, beta, nrm = harness._ht_param_arrays(spec, cfg.objective, cfg.horizon)
        smooth = cfg.objective.smoothness_series(np.arange(cfg.horizon))
        ok_steps = 0
        first_bad = None
        for t in range(cfg.horizon):
            cert = certify_general(
                float(gamma[t]),
                float(mu[t]),
                float(beta[t]),
                lam=cfg.analysis.lam,
                xi_t=cfg.analysis.xi,
                xi_next=cfg.analysis.xi,
                epsilon=cfg.analysis.epsilon,
            )
            step_ok = (cert.ok or cert.basic_ok) and nrm[t] >= smooth[t] - 1e-12
            if step_ok:
                ok_steps += 1
            elif first_bad is None:
                first_bad = t
        status = "certified" if ok_steps == cfg.horizon else f"first failure at t={first_bad}"
        print(
            f"{spec.name}: {ok_steps}/{cfg.horizon} steps certified ({status}); "
            f"gamma_0={gamma[0]:g} mu_0={mu[0]:g} beta_0={beta[0]:g} N_0={nrm[0]:g}"
        )
    if not any_printed:
        print("no certifiable optimizers in config")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hotuner", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a JSON experiment config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", default=None)
    run_p.set_defaults(func=_cmd_run)

    repro_p = sub.add_parser("repro", help="run a built-in preset")
    repro_p.add_argument("name", choices=["fig1", "fig2", "fig3", "example1"])
    repro_p.add_argument("--out", default=None)
    repro_p.add_argument("--tau", type=int, default=100)
    repro_p.set_defaults(func=_cmd_repro)

    sweep_p = sub.add_parser("sweep", help="stability-condition sweep over gamma")
    sweep_p.add_argument("--gamma-min", type=float, required=True)
    sweep_p.add_argument("--gamma-max", type=float, required=True)
    sweep_p.add_argument("--steps", type=int, required=True)
    sweep_p.add_argument("--out", required=True)
    sweep_p.set_defaults(func=_cmd_sweep)

    cert_p = sub.add_parser("certify", help="print per-step certificate summary")
    cert_p.add_argument("--config", required=True)
    cert_p.set_defaults(func=_cmd_certify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _IoFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
