"""Closed-form offloading plans and a brute-force grid oracle.

The planner picks the offloading ratios (eta_a, eta_b) and the phase split
(t2 offload, t3 execute) that maximize the success probability.  When every
task fits locally within the budget the plan is trivially "compute locally".
Otherwise the maximizer equalizes the three execution times (both local
computations and the MEC batch all take exactly t3) and uses the whole
budget, which pins every quantity in closed form:

    eta_a = ((N+1) M_a - M_b) / ((N+2) M_a)
    eta_b = ((N+1) M_b - M_a) / ((N+2) M_b)
    t3    = (M_a + M_b) C / ((N+2) f_user)
    t2    = T - t3

Interior ratios require comparable task sizes, 1/N < M_a/M_b < N+1, and a
total load that fits the pooled compute, M_a + M_b < (N+2) f_user T / C.
Violations are reported, never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import analytics
from .system import SystemParams, channel_snrs


class InfeasibleParameters(ValueError):
    """Raised when no interior offloading plan exists; carries the reasons."""

    def __init__(self, diagnostics: list[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class OffloadPlan:
    """Offloading split and phase allocation: 0 <= eta <= 1, t2 >= 0 < t3."""

    eta_a: float
    eta_b: float
    t2: float
    t3: float


@dataclass(frozen=True)
class ExecutionTimes:
    """How long the execute phase actually takes at each compute site."""

    t_mec: float
    t_ua: float
    t_ub: float

    def longest(self) -> float:
        return max(self.t_mec, self.t_ua, self.t_ub)


# Closed-form plans equalize the three execution times exactly in algebra;
# a deadline check with bit-exact <= would let last-ulp rounding flip the
# (deterministic) success event, so boundary equality gets this much grace.
DEADLINE_REL_TOL = 1e-12


def execution_times(plan: OffloadPlan, p: SystemParams) -> ExecutionTimes:
    """Execute-phase durations: offloaded batch at the MEC, remainders locally."""
    offloaded_bits = plan.eta_a * p.task_a_bits + plan.eta_b * p.task_b_bits
    t_mec = offloaded_bits * p.cycles_per_bit / p.mec_cpu_hz
    t_ua = (1.0 - plan.eta_a) * p.task_a_bits * p.cycles_per_bit / p.user_cpu_hz
    t_ub = (1.0 - plan.eta_b) * p.task_b_bits * p.cycles_per_bit / p.user_cpu_hz
    return ExecutionTimes(t_mec, t_ua, t_ub)


def deadline_met(times: ExecutionTimes, t3: float) -> bool:
    return times.longest() <= t3 * (1.0 + DEADLINE_REL_TOL)


def feasibility_diagnostics(p: SystemParams) -> list[str]:
    """Why the interior closed-form plan would not exist (empty when it does)."""
    n = p.mec_cpu_ratio
    ratio = p.task_a_bits / p.task_b_bits
    issues = []
    if ratio >= n + 1:
        issues.append(f"eta_b* would be negative: task ratio M_a/M_b = {ratio:.4g} >= N+1 = {n + 1:.4g}")
    if ratio <= 1.0 / n:
        issues.append(f"task ratio M_a/M_b = {ratio:.4g} <= 1/N = {1.0 / n:.4g}: tasks not comparable")
    load_cap = (n + 2.0) * p.user_cpu_hz * p.latency_budget_s / p.cycles_per_bit
    if p.task_a_bits + p.task_b_bits >= load_cap:
        issues.append(f"t2* would be non-positive: M_a + M_b = {p.task_a_bits + p.task_b_bits:.4g}"
                      f" >= (N+2) f_user T / C = {load_cap:.4g}")
    return issues


def optimal_offload_plan(p: SystemParams) -> OffloadPlan:
    """Success-probability-maximizing plan, or InfeasibleParameters with reasons.

    A scenario where even the larger task computes locally within the budget
    needs no offloading at all and returns the local-only plan.
    """
    local_time = max(p.task_a_bits, p.task_b_bits) * p.cycles_per_bit / p.user_cpu_hz
    if local_time <= p.latency_budget_s:
        return OffloadPlan(0.0, 0.0, 0.0, local_time)

    issues = feasibility_diagnostics(p)
    if issues:
        raise InfeasibleParameters(issues)

    n = p.mec_cpu_ratio
    eta_a = ((n + 1.0) * p.task_a_bits - p.task_b_bits) / ((n + 2.0) * p.task_a_bits)
    eta_b = ((n + 1.0) * p.task_b_bits - p.task_a_bits) / ((n + 2.0) * p.task_b_bits)
    t3 = (p.task_a_bits + p.task_b_bits) * p.cycles_per_bit / ((n + 2.0) * p.user_cpu_hz)
    return OffloadPlan(eta_a, eta_b, p.latency_budget_s - t3, t3)


@dataclass(frozen=True)
class GridSearchResult:
    plan: OffloadPlan
    ps: float
    feasible_points: int
    total_points: int


def grid_search_oracle(p: SystemParams, grid_resolution: int = 40, *,
                       objective: str = "closed_form", trials: int = 100_000,
                       seed: int = 0) -> GridSearchResult:
    """Exhaustive search over interior (eta_a, eta_b, t2) grid points.

    t3 = T - t2 at every point; points whose execution times overrun t3 are
    discarded.  Ties resolve to the lexicographically smallest
    (eta_a, eta_b, t2), so the result is independent of evaluation order.
    The default objective scores points with the closed-form success
    probability; ``objective="monte_carlo"`` re-scores with the trial engine
    (slow, meant for small grids that distrust the closed form end to end).
    """
    if grid_resolution < 20:
        raise ValueError(f"grid_resolution must be >= 20, got {grid_resolution}")
    if objective not in ("closed_form", "monte_carlo"):
        raise ValueError(f"unknown objective {objective!r}")

    etas = np.linspace(0.0, 1.0, grid_resolution + 2)[1:-1]
    t2s = np.linspace(0.0, p.latency_budget_s, grid_resolution + 2)[1:-1]
    eta_a, eta_b, t2 = np.meshgrid(etas, etas, t2s, indexing="ij")
    t3 = p.latency_budget_s - t2

    cycles = p.cycles_per_bit
    t_ua = (1.0 - eta_a) * p.task_a_bits * cycles / p.user_cpu_hz
    t_ub = (1.0 - eta_b) * p.task_b_bits * cycles / p.user_cpu_hz
    t_mec = (eta_a * p.task_a_bits + eta_b * p.task_b_bits) * cycles / p.mec_cpu_hz
    feasible = (t_ua <= t3) & (t_ub <= t3) & (t_mec <= t3)
    n_feasible = int(feasible.sum())
    if n_feasible == 0:
        raise InfeasibleParameters(["empty feasible grid: every point overruns its execute phase"])

    rho_a, rho_b = channel_snrs(p)
    t2b = t2 * p.bandwidth_hz
    eps_a = 2.0 ** (eta_a * p.task_a_bits / t2b) - 1.0
    eps_b = 2.0 ** (eta_b * p.task_b_bits / t2b) - 1.0
    scores = np.where(feasible, analytics.ps_total_closed(rho_a, rho_b, eps_a, eps_b), -1.0)

    if objective == "monte_carlo":
        from .montecarlo import Scheme, estimate_psucc

        # Re-score only the feasible points, visiting them in lexicographic
        # order so the first-max tie-break matches the closed-form path.
        scores = np.full(scores.shape, -1.0)
        for idx in np.argwhere(feasible):
            plan = OffloadPlan(etas[idx[0]], etas[idx[1]], t2s[idx[2]],
                               p.latency_budget_s - t2s[idx[2]])
            est = estimate_psucc(p, plan, Scheme.RSMA, trials, seed)
            scores[tuple(idx)] = est.mean

    best = np.unravel_index(np.argmax(scores), scores.shape)  # first max in lex order
    best_t2 = float(t2s[best[2]])
    plan = OffloadPlan(float(etas[best[0]]), float(etas[best[1]]),
                       best_t2, p.latency_budget_s - best_t2)
    return GridSearchResult(plan, float(scores[best]), n_feasible, scores.size)
