"""Closed-form success probability and its independent quadrature oracle.

Success means both users' offloaded bits fit their achievable rates and all
execution finishes inside the execute phase.  Over unit-mean exponential
fading the probability has the closed form

    P_s = [rho_a e^(-eps_b/rho_b - eps_a (1+eps_b)/rho_a)
           - rho_b e^(-eps_a/rho_a - eps_b (1+eps_a)/rho_b)] / (rho_a - rho_b)

which splits into a protected-regime component (Case I) and a rate-splitting
component (Case II); the blocked regime (Case III) contributes exactly zero.
The rho_a = rho_b point is a removable singularity, evaluated through a
first-order expansion validated against perturbation brackets.

Every function broadcasts over numpy arrays; scalar inputs return floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import dblquad

# Relative half-width of the removable-singularity window around rho_a = rho_b.
SINGULAR_WINDOW = 1e-9

# Beyond this exponent magnitude the two-term bracket is rescaled before
# exponentiation so its relative shape survives even when e^a underflows.
_EXP_SCALE_LIMIT = 700.0

_QUAD_TOL = 1e-9  # advertised absolute accuracy of the oracle


class OracleError(RuntimeError):
    """Quadrature failed to reach the advertised accuracy; tests must fail loudly."""


@dataclass(frozen=True)
class PsBreakdown:
    """Success probability split by operating regime; ps_case3 is identically 0."""

    ps_case1: float
    ps_case2: float
    ps_case3: float
    ps_total: float


def _validate_inputs(rho_a, rho_b, eps_a, eps_b):
    if np.any(np.asarray(rho_a) <= 0) or np.any(np.asarray(rho_b) <= 0):
        raise ValueError("transmit SNRs must be > 0")
    if np.any(np.asarray(eps_a) < 0) or np.any(np.asarray(eps_b) < 0):
        raise ValueError("SNR thresholds must be >= 0")


def _as_float(value, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(value)
    return value


def _exponents(rho_a, rho_b, eps_a, eps_b):
    a1 = -eps_b / rho_b - eps_a * (1.0 + eps_b) / rho_a
    a2 = -eps_a / rho_a - eps_b * (1.0 + eps_a) / rho_b
    return a1, a2


def _scaled_bracket(coef1, a1, coef2, a2):
    """coef1 e^a1 - coef2 e^a2 without losing the bracket to double underflow."""
    shift = np.where(np.minimum(a1, a2) < -_EXP_SCALE_LIMIT, np.maximum(a1, a2), 0.0)
    return np.exp(shift) * (coef1 * np.exp(a1 - shift) - coef2 * np.exp(a2 - shift))


def ps_case1_closed(rho_a, rho_b, eps_a, eps_b):
    """Probability of success through the protected regime (Case I)."""
    _validate_inputs(rho_a, rho_b, eps_a, eps_b)
    a1, _ = _exponents(rho_a, rho_b, eps_a, eps_b)
    out = np.clip(rho_a * np.exp(a1) / (rho_b * eps_a + rho_a), 0.0, 1.0)
    return _as_float(out, rho_a, rho_b, eps_a, eps_b)


def _ps_total_limit(rho, eps_a, eps_b, gap):
    """First-order expansion of the total around rho_a = rho_b = rho."""
    c = eps_a * (1.0 + eps_b)
    base = np.exp(-(eps_a + eps_b + eps_a * eps_b) / rho)
    slope = 0.5 * ((c * c - eps_a * eps_a) / rho**3 + 2.0 * eps_a / rho**2)
    return base * (1.0 + eps_a * eps_b / rho + gap * slope)


def ps_total_closed(rho_a, rho_b, eps_a, eps_b):
    """Total success probability in closed form, safe at rho_a = rho_b."""
    _validate_inputs(rho_a, rho_b, eps_a, eps_b)
    rho_a, rho_b, eps_a, eps_b = np.broadcast_arrays(
        *map(np.asarray, (rho_a, rho_b, eps_a, eps_b)))
    gap = rho_a - rho_b
    near = np.abs(gap) < SINGULAR_WINDOW * rho_a
    a1, a2 = _exponents(rho_a, rho_b, eps_a, eps_b)
    direct = _scaled_bracket(rho_a, a1, rho_b, a2) / np.where(near, 1.0, gap)
    out = np.clip(np.where(near, _ps_total_limit(rho_b, eps_a, eps_b, gap), direct), 0.0, 1.0)
    return _as_float(out, rho_a, rho_b, eps_a, eps_b)


def ps_case2_closed(rho_a, rho_b, eps_a, eps_b):
    """Probability of success through the rate-splitting regime (Case II).

    Inside the singular window this is evaluated as total minus Case I, which
    keeps the three-way identity exact there.
    """
    _validate_inputs(rho_a, rho_b, eps_a, eps_b)
    rho_a, rho_b, eps_a, eps_b = np.broadcast_arrays(
        *map(np.asarray, (rho_a, rho_b, eps_a, eps_b)))
    gap = rho_a - rho_b
    near = np.abs(gap) < SINGULAR_WINDOW * rho_a
    a1, a2 = _exponents(rho_a, rho_b, eps_a, eps_b)
    diff_term = _scaled_bracket(rho_b, a1, rho_b, a2) / np.where(near, 1.0, gap)
    direct = diff_term + rho_b * eps_a * np.exp(a1) / (rho_b * eps_a + rho_a)
    case1 = rho_a * np.exp(a1) / (rho_b * eps_a + rho_a)
    limit = _ps_total_limit(rho_b, eps_a, eps_b, gap) - case1
    out = np.clip(np.where(near, limit, direct), 0.0, 1.0)
    return _as_float(out, rho_a, rho_b, eps_a, eps_b)


def ps_breakdown_closed(rho_a, rho_b, eps_a, eps_b) -> PsBreakdown:
    return PsBreakdown(
        ps_case1=ps_case1_closed(rho_a, rho_b, eps_a, eps_b),
        ps_case2=ps_case2_closed(rho_a, rho_b, eps_a, eps_b),
        ps_case3=0.0,
        ps_total=ps_total_closed(rho_a, rho_b, eps_a, eps_b),
    )


def ps_high_snr(ell_a, ell_b, eps_a):
    """(case1, case2) asymptotes when both transmit powers grow without bound.

    Only the path-loss ratio survives; the pair sums to exactly 1, so the
    total success probability tends to 1.
    """
    if np.any(np.asarray(ell_a) <= 0) or np.any(np.asarray(ell_b) <= 0):
        raise ValueError("path-loss factors must be > 0")
    ps1 = ell_a / (ell_b * eps_a + ell_a)
    ps2 = 1.0 - ps1
    return _as_float(ps1, ell_a, ell_b, eps_a), _as_float(ps2, ell_a, ell_b, eps_a)


def _dblquad_checked(func, lo, hi, inner_lo, inner_hi):
    value, abserr = dblquad(func, lo, hi, inner_lo, inner_hi,
                            epsabs=1e-12, epsrel=1e-12)
    if abserr > _QUAD_TOL:
        raise OracleError(f"quadrature error {abserr:.3e} exceeds {_QUAD_TOL:.0e}")
    return value


def ps_quadrature_oracle(rho_a: float, rho_b: float, eps_a: float, eps_b: float) -> PsBreakdown:
    """Success probability by adaptive 2-D quadrature of the region integrals.

    Integrates the joint exponential density e^(-x-y) directly over the
    per-regime success regions in the (|h_a|^2, |h_b|^2) plane, independently
    of the closed forms; used only as a test oracle.
    """
    _validate_inputs(rho_a, rho_b, eps_a, eps_b)
    density = lambda inner, outer: np.exp(-inner - outer)

    # Protected regime: integrate over g_b (outer), g_a above the line where
    # the PU still clears its target through the SU's full-power interference.
    p1 = _dblquad_checked(density, eps_b / rho_b, np.inf,
                          lambda gb: eps_a * (1.0 + rho_b * gb) / rho_a, np.inf)

    if eps_a == 0.0:
        # tau is unbounded: the splitting regime has zero probability.
        return PsBreakdown(p1, 0.0, 0.0, p1 + 0.0)

    # Splitting regime, outer variable g_a.  Above the corner the binding
    # constraint on g_b is being in the regime at all (power above threshold);
    # below it the binding constraint is the SU sum-rate target.
    corner = eps_a * (1.0 + eps_b) / rho_a
    p2_upper = _dblquad_checked(density, corner, np.inf,
                                lambda ga: (rho_a * ga / eps_a - 1.0) / rho_b, np.inf)
    p2_lower = _dblquad_checked(density, eps_a / rho_a, corner,
                                lambda ga: max(0.0, (eps_a + eps_b + eps_a * eps_b - rho_a * ga) / rho_b),
                                np.inf)
    p2 = p2_upper + p2_lower
    return PsBreakdown(p1, p2, 0.0, p1 + p2)
