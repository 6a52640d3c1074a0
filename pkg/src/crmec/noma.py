"""Fixed-decoding-order two-user uplink NOMA baseline.

Both users transmit their whole messages at full power and the receiver
applies SIC in one fixed order.  The user decoded first absorbs the other's
full interference; the user decoded second is interference-free.  The
rate-splitting scheme's protected regime coincides with PU-first decoding and
its blocked regime with SU-first decoding, which anchors the comparison.
"""

from __future__ import annotations

import enum
import math


class SicOrder(enum.Enum):
    PU_FIRST = "pu_first"   # PU decoded first, suffers the SU's interference
    SU_FIRST = "su_first"


def noma_rates(order: SicOrder, rho_a_ga: float, rho_b_gb: float,
               t2: float, bandwidth_hz: float) -> tuple[float, float]:
    """(rate_a, rate_b) in bits for one draw under the given decoding order."""
    t2b = t2 * bandwidth_hz
    if order is SicOrder.PU_FIRST:
        rate_a = t2b * math.log2(1.0 + rho_a_ga / (rho_b_gb + 1.0))
        rate_b = t2b * math.log2(1.0 + rho_b_gb)
    else:
        rate_a = t2b * math.log2(1.0 + rho_a_ga)
        rate_b = t2b * math.log2(1.0 + rho_b_gb / (rho_a_ga + 1.0))
    return rate_a, rate_b


def noma_outcome(rates: tuple[float, float], targets: tuple[float, float],
                 times_ok: bool) -> bool:
    """Success: both offloaded targets met and all execution within deadline."""
    rate_a, rate_b = rates
    target_a, target_b = targets
    return rate_a >= target_a and rate_b >= target_b and times_ok
