"""Rate-splitting uplink offloading simulator for cognitive-radio MEC.

A primary and a secondary user offload computation tasks to one MEC server
over a shared uplink.  The secondary user splits its signal so that its
transmission never degrades the primary user's offloading, and the package
provides the per-draw decision rules, closed-form success probabilities, the
closed-form offloading plan, matching Monte Carlo machinery, and a CLI for
the standard experiment sweeps.
"""

from .analytics import (PsBreakdown, ps_breakdown_closed, ps_case1_closed,
                        ps_case2_closed, ps_high_snr, ps_quadrature_oracle,
                        ps_total_closed)
from .montecarlo import PsEstimate, Scheme, SimCounts, TrialOutcome, estimate_psucc, run_trial
from .noma import SicOrder, noma_outcome, noma_rates
from .optimizer import (ExecutionTimes, GridSearchResult, InfeasibleParameters,
                        OffloadPlan, execution_times, grid_search_oracle,
                        optimal_offload_plan)
from .rsma import (Case, RateTargets, RsmaDecision, achievable_rates, classify_case,
                   decide, epsilon, interference_threshold, offload_outcome,
                   optimal_split, plan_thresholds)
from .system import (ChannelDraw, SystemParams, channel_snrs, draw_fading,
                     fading_generator, path_loss, transmit_snr, validate_params)

__version__ = "0.1.0"
