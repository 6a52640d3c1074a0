"""Scenario parameters, the channel model, and the deterministic fading stream.

Two single-antenna users share an uplink to one MEC server.  The channel from
user k is ell_k * h_k with ell_k = 1 / (1 + d_k^upsilon) and h_k a zero-mean
unit-variance complex Gaussian, so |h_k|^2 is a unit-mean exponential variate.
Everything downstream works with the equivalent transmit SNRs
rho_k = P_k * ell_k / sigma^2 in linear scale; dB only appears at the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    """Static scenario constants, SI units throughout."""

    bandwidth_hz: float = 1e6
    cycles_per_bit: float = 1000.0
    mec_cpu_ratio: float = 5.0        # MEC CPU runs this many times faster than a user CPU (> 1)
    latency_budget_s: float = 10e-3
    distance_a_m: float = 5.0
    distance_b_m: float = 25.0
    pathloss_exponent: float = 4.0
    user_cpu_hz: float = 0.5e9
    power_a_w: float = 0.1
    power_b_w: float = 0.1
    noise_w: float = 1e-9
    task_a_bits: float = 20_000.0
    task_b_bits: float = 5_000.0

    @property
    def mec_cpu_hz(self) -> float:
        """MEC CPU frequency, defined through the ratio to keep the pair consistent."""
        return self.mec_cpu_ratio * self.user_cpu_hz

    def with_overrides(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of squared fading magnitudes plus the fixed SNR scale.

    g_a, g_b are |h_k|^2 samples (unit-mean exponential); rho_a, rho_b are the
    equivalent transmit SNRs P_k * ell_k / sigma^2 of the same scenario.
    """

    g_a: float
    g_b: float
    rho_a: float
    rho_b: float


def path_loss(distance_m: float, exponent: float) -> float:
    """Distance attenuation 1 / (1 + d^upsilon); equals 1 at d = 0."""
    if distance_m < 0:
        raise ValueError(f"distance must be >= 0, got {distance_m}")
    if exponent <= 0:
        raise ValueError(f"path-loss exponent must be > 0, got {exponent}")
    return 1.0 / (1.0 + distance_m ** exponent)


def transmit_snr(power_w: float, loss: float, noise_w: float) -> float:
    """Equivalent transmit SNR P * ell / sigma^2 (dimensionless, linear scale)."""
    if power_w <= 0:
        raise ValueError(f"power must be > 0, got {power_w}")
    if not 0 < loss <= 1:
        raise ValueError(f"loss factor must be in (0, 1], got {loss}")
    if noise_w <= 0:
        raise ValueError(f"noise power must be > 0, got {noise_w}")
    return power_w * loss / noise_w


def channel_snrs(p: SystemParams) -> tuple[float, float]:
    """(rho_a, rho_b) for the given scenario."""
    rho_a = transmit_snr(p.power_a_w, path_loss(p.distance_a_m, p.pathloss_exponent), p.noise_w)
    rho_b = transmit_snr(p.power_b_w, path_loss(p.distance_b_m, p.pathloss_exponent), p.noise_w)
    return rho_a, rho_b


# Fading stream contract: one master 64-bit seed feeds a counter-based Philox
# generator; trial i consumes 64-bit words 2i (g_a) and 2i+1 (g_b).  Philox
# advances in blocks of 4 words, so any worker can jump to a trial index that
# is a multiple of 2 and reproduce exactly the same draws.
_WORDS_PER_BLOCK = 4


def fading_generator(seed: int, skip_draws: int = 0) -> np.random.Generator:
    """Deterministic generator positioned ``skip_draws`` variates into the stream.

    skip_draws must be a multiple of 4 (the Philox block size) when non-zero.
    """
    if skip_draws % _WORDS_PER_BLOCK:
        raise ValueError(f"skip_draws must be a multiple of {_WORDS_PER_BLOCK}, got {skip_draws}")
    bitgen = np.random.Philox(key=seed)
    if skip_draws:
        bitgen.advance(skip_draws // _WORDS_PER_BLOCK)
    return np.random.Generator(bitgen)


def draw_fading(rng: np.random.Generator) -> float:
    """One unit-mean exponential |h|^2 sample; consumes exactly one stream word."""
    return float(rng.standard_exponential(method="inv"))


def draw_fading_block(rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` consecutive fading samples, identical to repeated draw_fading calls."""
    return rng.standard_exponential(count, method="inv")


def validate_params(p: SystemParams) -> list[str]:
    """Names of every violated scenario constraint; empty list means valid."""
    issues = []
    for name in ("bandwidth_hz", "cycles_per_bit", "latency_budget_s", "user_cpu_hz",
                 "noise_w", "task_a_bits", "task_b_bits", "power_a_w", "power_b_w"):
        if getattr(p, name) <= 0:
            issues.append(f"{name} > 0 required")
    if p.mec_cpu_ratio <= 1:
        issues.append("mec_cpu_ratio (N) > 1 required")
    if p.pathloss_exponent < 2:
        issues.append("pathloss_exponent >= 2 required")
    if p.distance_a_m < 0:
        issues.append("distance_a_m >= 0 required")
    if p.distance_b_m < 0:
        issues.append("distance_b_m >= 0 required")
    return issues
