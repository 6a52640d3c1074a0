"""Per-channel-draw rate-splitting decision for the shared uplink.

The secondary user (SU) splits its signal into a protected stream decoded
last (after the primary user, interference-free up to the threshold) and an
opportunistic stream decoded first.  The MEC server announces an interference
threshold tau chosen so the primary user's (PU) offloading succeeds exactly
as often as if it transmitted alone; the SU then picks its power split alpha
and rate split beta from its own channel state.

Three operating regimes, keyed on the SU's received power v_b = rho_b * g_b:

* Case I   (0 < v_b <= tau): the SU sends everything on the protected stream
  at full power; decoding degrades to PU-first SIC.
* Case II  (0 < tau < v_b): the SU loads the protected stream up to tau and
  puts the remaining power on the early stream, or stays silent when the
  early stream cannot carry its share of the target.
* Case III (tau = 0): the PU cannot meet its target even alone; the SU sends
  everything on the early stream, i.e. SU-first SIC.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .optimizer import OffloadPlan
from .system import ChannelDraw, SystemParams


class Case(enum.Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class RateTargets:
    """Per-draw rate targets in bits and the matching SNR thresholds."""

    target_a: float      # eta_a * M_a
    target_b: float      # eta_b * M_b
    target_b1: float     # beta * target_b, early-stream share
    target_b2: float     # (1 - beta) * target_b, protected-stream share
    eps_a: float         # 2^(target_a / (t2 B)) - 1
    eps_b: float


@dataclass(frozen=True)
class RsmaDecision:
    """Resolved splitting decision and achievable rates for one draw."""

    case_label: Case
    tau: float
    alpha: float
    beta: float
    su_silent: bool
    rate_a: float
    rate_b1: float
    rate_b2: float
    rate_b: float


def epsilon(target_bits: float, t2: float, bandwidth_hz: float) -> float:
    """SNR threshold 2^(target / (t2 B)) - 1 that makes the target rate achievable."""
    if t2 <= 0:
        raise ValueError(f"t2 must be > 0, got {t2}")
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_hz}")
    if target_bits < 0:
        raise ValueError(f"target bits must be >= 0, got {target_bits}")
    return 2.0 ** (target_bits / (t2 * bandwidth_hz)) - 1.0


def interference_threshold(rho_a_ga: float, eps_a: float) -> float:
    """Largest residual interference power that leaves the PU target reachable.

    With eps_a = 0 the PU poses no constraint at all; callers must shortcut
    that to tau = +inf instead of calling here.
    """
    if rho_a_ga < 0:
        raise ValueError(f"received PU power must be >= 0, got {rho_a_ga}")
    if eps_a <= 0:
        raise ValueError(f"eps_a must be > 0, got {eps_a}")
    return max(0.0, rho_a_ga / eps_a - 1.0)


def classify_case(rho_b_gb: float, tau: float) -> Case:
    """Operating regime from the SU's received power against the threshold."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return Case.III
    return Case.I if rho_b_gb <= tau else Case.II


def optimal_split(case: Case, rho_a_ga: float, rho_b_gb: float, eps_a: float,
                  t2: float, bandwidth_hz: float, target_b: float) -> tuple[float, float, bool]:
    """(alpha, beta, su_silent) maximizing the SU rate within the regime.

    Case II: the protected stream is loaded to exactly tau, which pins
    alpha = 1 - tau / (rho_b g_b) and leaves the protected stream carrying
    t2 B log2(1 + tau) bits; beta covers the remainder, clamped to 0 when the
    protected stream alone already covers the whole SU target.  The SU goes
    silent when the early stream's achievable rate falls strictly below its
    share of the target (equality counts as transmit).
    """
    if case is Case.I:
        return 0.0, 0.0, False
    if case is Case.III:
        return 1.0, 1.0, False

    tau = rho_a_ga / eps_a - 1.0
    alpha = 1.0 - tau / rho_b_gb
    protected_bits = t2 * bandwidth_hz * math.log2(1.0 + tau)
    beta = max(0.0, 1.0 - protected_bits / target_b) if target_b > 0 else 0.0
    early_target = max(0.0, target_b - protected_bits)
    early_rate = t2 * bandwidth_hz * math.log2(1.0 + (rho_b_gb - tau) / (rho_a_ga + tau + 1.0))
    return alpha, beta, early_rate < early_target


def achievable_rates(case: Case, alpha: float, su_silent: bool, rho_a_ga: float,
                     rho_b_gb: float, tau: float, t2: float,
                     bandwidth_hz: float) -> tuple[float, float, float]:
    """(rate_a, rate_b1, rate_b2) in bits over the offloading phase."""
    t2b = t2 * bandwidth_hz
    if case is Case.I:
        rate_a = t2b * math.log2(1.0 + rho_a_ga / (rho_b_gb + 1.0))
        return rate_a, 0.0, t2b * math.log2(1.0 + rho_b_gb)
    if case is Case.III:
        rate_a = t2b * math.log2(1.0 + rho_a_ga)
        return rate_a, t2b * math.log2(1.0 + rho_b_gb / (rho_a_ga + 1.0)), 0.0
    if su_silent:
        return t2b * math.log2(1.0 + rho_a_ga), 0.0, 0.0
    rate_a = t2b * math.log2(1.0 + rho_a_ga / (tau + 1.0))
    rate_b1 = t2b * math.log2(1.0 + (rho_b_gb - tau) / (rho_a_ga + tau + 1.0))
    rate_b2 = t2b * math.log2(1.0 + tau)
    return rate_a, rate_b1, rate_b2


def offload_outcome(decision: RsmaDecision, targets: RateTargets) -> tuple[bool, bool]:
    """(pu_ok, su_ok): each user's offloaded bits fit its achievable rate.

    Case III always fails the PU: tau = 0 means its target is out of reach
    even without the SU on the air.  In Case II with the SU transmitting two
    outcomes are identities of the construction, not random events: the
    threshold pins the PU SINR at exactly eps_a (rate_a = target_a), and
    transmission is granted precisely when the early stream covers the rest
    of the SU target (rate_b >= target_b).  Re-deriving either through a
    differently rounded comparison would turn designed equalities into
    per-draw coin flips, so they resolve structurally here.
    """
    splitting = decision.case_label is Case.II and not decision.su_silent
    if decision.case_label is Case.III:
        pu_ok = False
    else:
        pu_ok = splitting or decision.rate_a >= targets.target_a
    if decision.su_silent:
        su_ok = False
    else:
        su_ok = splitting or decision.rate_b >= targets.target_b
    return pu_ok, su_ok


def plan_thresholds(plan: OffloadPlan, p: SystemParams) -> tuple[float, float]:
    """(eps_a, eps_b) induced by an offloading plan on this scenario."""
    return (epsilon(plan.eta_a * p.task_a_bits, plan.t2, p.bandwidth_hz),
            epsilon(plan.eta_b * p.task_b_bits, plan.t2, p.bandwidth_hz))


def decide(draw: ChannelDraw, plan: OffloadPlan, p: SystemParams) -> tuple[RsmaDecision, RateTargets]:
    """Full per-draw decision: thresholds, regime, split, and achievable rates."""
    target_a = plan.eta_a * p.task_a_bits
    target_b = plan.eta_b * p.task_b_bits
    if plan.t2 == 0.0:
        # Local-only plan: there is no offload phase, so nothing is sent and
        # the outcome reduces to whether the targets are zero.
        decision = RsmaDecision(Case.I, math.inf, 0.0, 0.0, False, 0.0, 0.0, 0.0, 0.0)
        eps_a = 0.0 if target_a == 0.0 else math.inf
        eps_b = 0.0 if target_b == 0.0 else math.inf
        return decision, RateTargets(target_a, target_b, 0.0, target_b, eps_a, eps_b)
    eps_a = epsilon(target_a, plan.t2, p.bandwidth_hz)
    eps_b = epsilon(target_b, plan.t2, p.bandwidth_hz)
    va = draw.rho_a * draw.g_a
    vb = draw.rho_b * draw.g_b

    # A zero PU target protects nothing: the SU is unconstrained, which is the
    # tau -> inf limit and lands in Case I.
    tau = math.inf if eps_a == 0.0 else interference_threshold(va, eps_a)
    case = classify_case(vb, tau)
    alpha, beta, su_silent = optimal_split(case, va, vb, eps_a, plan.t2, p.bandwidth_hz, target_b)
    rate_a, rate_b1, rate_b2 = achievable_rates(case, alpha, su_silent, va, vb, tau,
                                                plan.t2, p.bandwidth_hz)
    decision = RsmaDecision(case, tau, alpha, beta, su_silent,
                            rate_a, rate_b1, rate_b2, rate_b1 + rate_b2)
    target_b1 = beta * target_b
    targets = RateTargets(target_a, target_b, target_b1, target_b - target_b1, eps_a, eps_b)
    return decision, targets
