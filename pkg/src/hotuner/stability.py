"""Sufficient stability conditions, Lyapunov candidates, and runtime monitors.

The certified decrease of the tuner's Lyapunov candidate is controlled by a
quadratic form in the normalized gradient ``a = grad/N`` and the state offset
``b = x - z``.  :func:`decrease_coeffs` computes the three coefficients of
that form; the general condition is "gradient coefficient negative and the
form negative semidefinite", which we evaluate through the determinant-style
discriminant ``4*c_grad*c_dist - c_cross^2 >= 0`` to avoid dividing by a
small leading coefficient.

Monitors re-check the certified per-step decrease along executed runs; a
violation under certified hyper-parameters is the one condition that should
never happen.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import as_vector

#: Relative slack admitted when classifying the boundary of the certified
#: region: the mathematical region is closed, but at its edge the computed
#: discriminant lands within a few ulp of zero (e.g. the simple family at
#: gamma = 1.5 evaluates to -3.6e-16-scale noise through beta = 1/gamma).
BOUNDARY_TOL = 1e-9

#: Default strict margin for rate ranges; exposed rather than hidden because
#: no canonical value exists.
DEFAULT_EPSILON = 0.01


class DegenerateBetaError(ValueError):
    """beta = 1 makes the state-offset coefficient undefined (x coincides with z)."""


class ZeroRateWarning(UserWarning):
    """The exponential rate degenerated to zero (beta = 0 decouples the states)."""


def decrease_coeffs(
    gamma: float, mu: float, beta: float, lam: float, xi_t: float, xi_next: float
) -> tuple[float, float, float]:
    """Coefficients (c_grad, c_cross, c_dist) of the Lyapunov-decrease quadratic form.

    c_grad multiplies ||grad/N||^2, c_cross the mixed term, c_dist ||x - z||^2:

        c_grad  = gamma^2 + xi_next*(gamma - mu)^2 - (1 + lam)*gamma
        c_cross = 2*[xi_next*(gamma - mu) + gamma]
        c_dist  = xi_next - xi_t / (1 - beta)^2

    Raises :class:`DegenerateBetaError` at beta = 1, where c_dist is
    undefined; callers handle that case as degenerate-stable because the
    offset x - z is identically zero there.
    """
    if beta == 1.0:
        raise DegenerateBetaError("beta = 1: (1-beta)^-2 is infinite")
    c_grad = gamma * gamma + xi_next * (gamma - mu) ** 2 - (1.0 + lam) * gamma
    c_cross = 2.0 * (xi_next * (gamma - mu) + gamma)
    bb = 1.0 - beta
    c_dist = xi_next - xi_t / (bb * bb)
    return c_grad, c_cross, c_dist


def check_basic(beta: float, mu: float, gamma: float, epsilon: float) -> bool:
    """Simple sufficient conditions: beta in [0,1], mu in [eps,1], gamma = mu/2.

    The equality is accepted within 1e-12 absolute.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return (
        0.0 <= beta <= 1.0
        and epsilon <= mu <= 1.0
        and abs(gamma - 0.5 * mu) <= 1e-12
    )


def simple_family_ok(gamma: float, mu: float, beta: float) -> bool:
    """Membership in the sweepable family mu = 1, beta = 1/gamma, gamma in [1, 1.5]."""
    return (
        mu == 1.0
        and 1.0 <= gamma <= 1.5
        and abs(beta - 1.0 / gamma) <= 1e-12
    )


def legacy_gamma_cap(beta: float) -> float:
    """Stability cap for the two-gradient tuner: beta(2-beta) / (16 + beta^2)."""
    return beta * (2.0 - beta) / (16.0 + beta * beta)


def check_legacy(gamma: float, beta: float) -> bool:
    """Constraint for the two-gradient variant: beta in (0,1), 0 < gamma <= cap."""
    return 0.0 < beta < 1.0 and 0.0 < gamma <= legacy_gamma_cap(beta)


@dataclass(frozen=True)
class StabilityCertificate:
    """Raw coefficient values and verdicts for one step's hyper-parameters.

    ``discriminant`` is ``4*c_grad*c_dist - c_cross^2``; ``discriminant_ok``
    is only meaningful when ``c_grad_negative``.  ``ok`` is the overall
    general-condition verdict; ``degenerate_beta`` marks the beta = 1 case,
    where the offset term vanishes and the verdict rests on c_grad alone.
    """

    gamma: float
    mu: float
    beta: float
    c_grad: float
    c_cross: float
    c_dist: float
    c_grad_negative: bool
    discriminant: float
    discriminant_ok: bool
    ok: bool
    basic_ok: bool
    simple_family_ok: bool
    legacy_ok: bool
    degenerate_beta: bool = False
    note: str = ""


def certify_general(
    gamma: float,
    mu: float,
    beta: float,
    lam: float = 1.0,
    xi_t: float = 1.0,
    xi_next: float = 1.0,
    epsilon: float = DEFAULT_EPSILON,
) -> StabilityCertificate:
    """Evaluate the general sufficient conditions and return a full certificate.

    The condition set is c_grad < 0 together with negative semidefiniteness
    of the decrease form, checked as discriminant >= 0 (with a relative
    boundary slack, see :data:`BOUNDARY_TOL`).
    """
    basic = check_basic(beta, mu, gamma, epsilon)
    family = simple_family_ok(gamma, mu, beta)
    legacy = check_legacy(gamma, beta)
    if beta == 1.0:
        # x_t = z_t exactly, the offset term vanishes, and the decrease bound
        # reduces to the gradient term alone: stable iff c_grad < 0.
        c_grad = gamma * gamma + xi_next * (gamma - mu) ** 2 - (1.0 + lam) * gamma
        c_cross = 2.0 * (xi_next * (gamma - mu) + gamma)
        neg = c_grad < 0.0
        note = (
            "beta = 1: x coincides with z, offset term vanishes; degenerate-stable"
            if neg
            else "beta = 1 and c_grad >= 0"
        )
        return StabilityCertificate(
            gamma=gamma,
            mu=mu,
            beta=beta,
            c_grad=c_grad,
            c_cross=c_cross,
            c_dist=float("-inf"),
            c_grad_negative=neg,
            discriminant=float("inf") if neg else float("-inf"),
            discriminant_ok=neg,
            ok=neg,
            basic_ok=basic,
            simple_family_ok=family,
            legacy_ok=legacy,
            degenerate_beta=True,
            note=note,
        )
    c_grad, c_cross, c_dist = decrease_coeffs(gamma, mu, beta, lam, xi_t, xi_next)
    disc = 4.0 * c_grad * c_dist - c_cross * c_cross
    tol = BOUNDARY_TOL * (1.0 + c_cross * c_cross + abs(4.0 * c_grad * c_dist))
    neg = c_grad < 0.0
    disc_ok = disc >= -tol
    return StabilityCertificate(
        gamma=gamma,
        mu=mu,
        beta=beta,
        c_grad=c_grad,
        c_cross=c_cross,
        c_dist=c_dist,
        c_grad_negative=neg,
        discriminant=disc,
        discriminant_ok=disc_ok,
        ok=neg and disc_ok,
        basic_ok=basic,
        simple_family_ok=family,
        legacy_ok=legacy,
    )


def exponential_rate(
    mu: float, sigma: float, normalizer: float, beta: float, nu: float
) -> tuple[float, float]:
    """Contraction data for the strongly convex setting: returns (rho, omega).

    rho = (mu/2) * (sigma/normalizer); with bb = 1 - beta,

        omega = min( (1-nu)*(1-bb^2),
                     rho*nu*(1-bb^2) / (rho*bb^2 + nu*(1-bb^2)) )

    and the Lyapunov candidate contracts as V_{t+1} <= (1 - omega) V_t.
    beta = 0 collapses omega to zero (the states decouple); that degenerate
    rate is reported with a :class:`ZeroRateWarning`.
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not normalizer >= sigma:
        raise ValueError("normalizer must dominate the strong-convexity modulus")
    if not (0.0 < nu < 1.0):
        raise ValueError("nu must lie strictly inside (0, 1)")
    if not (0.0 <= beta <= 1.0):
        raise ValueError("beta must lie in [0, 1]")
    rho = (mu / 2.0) * (sigma / normalizer)
    bb = 1.0 - beta
    bb2 = bb * bb
    term1 = (1.0 - nu) * (1.0 - bb2)
    denom = rho * bb2 + nu * (1.0 - bb2)
    term2 = rho * nu * (1.0 - bb2) / denom if denom > 0 else 0.0
    omega = min(term1, term2)
    if omega == 0.0:
        warnings.warn("contraction rate degenerated to zero", ZeroRateWarning)
    return rho, omega


def lyapunov_v(y, z, xstar) -> float:
    """||z - xstar||^2 + ||y - z||^2; zero iff y = z = xstar."""
    yv = as_vector(y)
    zv = as_vector(z, yv.shape[0])
    xs = as_vector(xstar, yv.shape[0])
    dz = zv - xs
    dy = yv - zv
    return float(dz @ dz) + float(dy @ dy)


def lyapunov_w(y, z, xstar, xi: float) -> float:
    """||z - xstar||^2 + xi * ||y - z||^2 (weighted candidate)."""
    yv = as_vector(y)
    zv = as_vector(z, yv.shape[0])
    xs = as_vector(xstar, yv.shape[0])
    dz = zv - xs
    dy = yv - zv
    return float(dz @ dz) + xi * float(dy @ dy)


@dataclass(frozen=True)
class MonitorVerdict:
    delta: float
    bound: float
    tol: float
    ok: bool


def monitor_decrease(
    v_t: float,
    v_next: float,
    gamma: float,
    normalizer: float,
    f_at_x: float,
    f_at_xstar: float,
    lam: float | None = None,
) -> MonitorVerdict:
    """Check one certified decrease: V_{t+1} - V_t <= bound + tol.

    With ``lam`` omitted the bound is the basic-condition form
    2*(gamma/N)*(f(xstar) - f(x)); with ``lam`` given it is the general form
    2*(1-lam)*(gamma/N)*(f(xstar) - f(x)) applied to the weighted candidate.
    The tolerance is relative, 1e-9 * (1 + V_t), because V spans orders of
    magnitude across experiments.
    """
    factor = 2.0 if lam is None else 2.0 * (1.0 - lam)
    bound = factor * (gamma / normalizer) * (f_at_xstar - f_at_x)
    tol = 1e-9 * (1.0 + v_t)
    delta = v_next - v_t
    return MonitorVerdict(delta=delta, bound=bound, tol=tol, ok=delta <= bound + tol)


def check_exponential(
    v_seq: Sequence[float], omegas: Sequence[float] | float
) -> bool:
    """True iff V_{t+1} <= (1 - omega_t) V_t + 1e-9*(1 + V_t) along the run."""
    v = np.asarray(v_seq, dtype=np.float64)
    if np.isscalar(omegas):
        om = np.full(len(v) - 1, float(omegas))
    else:
        om = np.asarray(omegas, dtype=np.float64)[: len(v) - 1]
    lhs = v[1:]
    rhs = (1.0 - om) * v[:-1] + 1e-9 * (1.0 + v[:-1])
    return bool(np.all(lhs <= rhs))
