"""High-order tuner toolkit for explicitly time-varying convex objectives.

Subpackages:

- :mod:`hotuner.core` - schedules and hyper-parameter types
- :mod:`hotuner.objectives` - objectives plus gradient/convexity oracles
- :mod:`hotuner.optimizers` - tuner and baseline step functions
- :mod:`hotuner.stability` - stability certificates and Lyapunov monitors
- :mod:`hotuner.metrics` - regret and convergence-time measurements
- :mod:`hotuner.harness` - experiment configs, presets, CSV traces
- :mod:`hotuner.backend` - compiled/pure-Python run loops
"""

from .core import (
    AnalysisParams,
    HtHyperParams,
    InvalidHyperParamError,
    ParamSchedule,
    ScheduleError,
    as_schedule,
    derived_rates,
    schedule_at,
)
from .objectives import (
    DiagonalQuadratic,
    LogSumExpObjective,
    SwitchingRegression,
    TimeVaryingObjective,
    convexity_probe,
    fd_gradient,
    hessian_trace_bound,
)
from .optimizers import (
    AccumulatorState,
    DivergenceError,
    HtState,
    adagrad_step,
    adam_step,
    gd_step,
    ht_step,
    legacy_ht_step,
    nagd_hyper,
    nagd_schedule,
    tn_gd_step,
)
from .stability import (
    StabilityCertificate,
    certify_general,
    check_basic,
    check_exponential,
    check_legacy,
    decrease_coeffs,
    exponential_rate,
    legacy_gamma_cap,
    lyapunov_v,
    lyapunov_w,
    monitor_decrease,
)

__version__ = "0.1.0"
