#!/usr/bin/env python3
"""Benchmark the compiled stepping kernel against the pure-Python fallback.

Times repeated tuner and gradient-descent runs on the 1-D log-sum-exp
objective (the workload that dominates the test and reproduction suites)
and prints per-backend timings with the speedup.

Usage: python benchmarks/bench_backends.py [--runs N] [--steps T]
"""

import argparse
import time

from hotuner import backend
from hotuner.core import ParamSchedule
from hotuner.objectives import LogSumExpObjective


def _workload(which: str, runs: int, steps: int) -> float:
    obj = LogSumExpObjective(
        a=5.0, b=7.0, c=ParamSchedule.from_pairs([(0, 0.0), (steps // 2, 5.0)])
    )
    start = time.perf_counter()
    for i in range(runs):
        x0 = [5.0 + 0.01 * i]
        backend.run_ht(obj, 1.5, 1.0, 1.0 / 1.5, 49.0, x0, x0, steps, backend=which)
        backend.run_gd(obj, 49.0, x0, steps, backend=which)
    return time.perf_counter() - start


def run_benchmark(runs: int = 200, steps: int = 500) -> dict:
    results = {}
    for which in backend.available_backends():
        _workload(which, runs=2, steps=steps)  # warm up
        results[which] = _workload(which, runs=runs, steps=steps)
    return results


def print_table(results: dict) -> None:
    base = results.get("python")
    print(f"{'backend':<10} {'total s':>10} {'speedup':>9}")
    for which, seconds in sorted(results.items()):
        speedup = "" if base is None or seconds == 0 else f"{base / seconds:8.1f}x"
        print(f"{which:<10} {seconds:>10.4f} {speedup:>9}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=200)
    parser.add_argument("--steps", type=int, default=500)
    args = parser.parse_args()
    print(f"default backend: {backend.DEFAULT_BACKEND}")
    print_table(run_benchmark(runs=args.runs, steps=args.steps))


if __name__ == "__main__":
    main()
