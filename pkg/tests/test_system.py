import numpy as np
import pytest
from scipy import stats

from crmec.system import (ChannelDraw, SystemParams, channel_snrs, draw_fading,
                          draw_fading_block, fading_generator, path_loss,
                          transmit_snr, validate_params)


def test_path_loss_zero_distance_is_unity():
    for exponent in (2.0, 3.0, 4.0, 5.5):
        assert path_loss(0.0, exponent) == 1.0


def test_path_loss_reference_distances():
    assert path_loss(5.0, 4.0) == pytest.approx(1.0 / 626.0, rel=1e-15)
    assert path_loss(25.0, 4.0) == pytest.approx(1.0 / 390626.0, rel=1e-15)


def test_path_loss_monotone_decreasing():
    distances = np.linspace(0.0, 100.0, 200)
    for exponent in (2.0, 4.0):
        losses = [path_loss(d, exponent) for d in distances]
        assert all(a > b for a, b in zip(losses, losses[1:]))


def test_path_loss_rejects_bad_domain():
    with pytest.raises(ValueError):
        path_loss(-1.0, 4.0)
    with pytest.raises(ValueError):
        path_loss(5.0, 0.0)


def test_transmit_snr_values():
    assert transmit_snr(1e-9, 1.0, 1e-9) == pytest.approx(1.0)
    assert transmit_snr(0.1, 1.0 / 626.0, 1e-9) == pytest.approx(1e8 / 626.0, rel=1e-12)
    assert transmit_snr(0.1, 1.0 / 390626.0, 1e-9) == pytest.approx(1e8 / 390626.0, rel=1e-12)


def test_transmit_snr_exact_scaling():
    base = transmit_snr(0.05, 0.25, 1e-9)
    assert transmit_snr(0.1, 0.25, 1e-9) == 2.0 * base
    assert transmit_snr(0.05, 0.5, 1e-9) == 2.0 * base
    assert transmit_snr(0.05, 0.25, 2e-9) == 0.5 * base


def test_transmit_snr_rejects_bad_domain():
    for args in ((0.0, 0.5, 1e-9), (0.1, 0.0, 1e-9), (0.1, 1.5, 1e-9), (0.1, 0.5, 0.0)):
        with pytest.raises(ValueError):
            transmit_snr(*args)


def test_channel_snrs_match_components(default_params):
    rho_a, rho_b = channel_snrs(default_params)
    assert rho_a == transmit_snr(0.1, path_loss(5.0, 4.0), 1e-9)
    assert rho_b == transmit_snr(0.1, path_loss(25.0, 4.0), 1e-9)


def test_fading_is_unit_mean_exponential():
    rng = fading_generator(20260811)
    samples = draw_fading_block(rng, 1_000_000)
    assert abs(samples.mean() - 1.0) < 0.005
    assert abs((samples > 1.0).mean() - np.exp(-1.0)) < 0.002


def test_fading_cdf_kolmogorov_smirnov():
    samples = draw_fading_block(fading_generator(7), 200_000)
    statistic = stats.kstest(samples, "expon").statistic
    assert statistic < 0.005


def test_fading_replay_is_identical():
    first = [draw_fading(fading_generator(99)) for _ in range(1)]
    again = [draw_fading(fading_generator(99)) for _ in range(1)]
    assert first == again
    seq_a = draw_fading_block(fading_generator(99), 64)
    seq_b = draw_fading_block(fading_generator(99), 64)
    assert np.array_equal(seq_a, seq_b)


def test_fading_scalar_matches_block():
    rng = fading_generator(31415)
    scalars = np.array([draw_fading(rng) for _ in range(32)])
    assert np.array_equal(scalars, draw_fading_block(fading_generator(31415), 32))


def test_fading_skip_reproduces_tail():
    full = draw_fading_block(fading_generator(555), 64)
    tail = draw_fading_block(fading_generator(555, skip_draws=16), 48)
    assert np.array_equal(full[16:], tail)
    with pytest.raises(ValueError):
        fading_generator(555, skip_draws=6)


def test_validate_params_defaults_ok(default_params):
    assert validate_params(default_params) == []


def test_validate_params_flags_violations(default_params):
    bad = default_params.with_overrides(mec_cpu_ratio=0.5)
    assert any("mec_cpu_ratio" in msg for msg in validate_params(bad))
    bad = default_params.with_overrides(latency_budget_s=0.0)
    assert any("latency_budget_s" in msg for msg in validate_params(bad))
    bad = default_params.with_overrides(latency_budget_s=-1.0, bandwidth_hz=0.0)
    assert len(validate_params(bad)) == 2


def test_mec_cpu_follows_ratio(default_params):
    assert default_params.mec_cpu_hz == 5.0 * default_params.user_cpu_hz
    scaled = default_params.with_overrides(mec_cpu_ratio=8.0)
    assert scaled.mec_cpu_hz == 8.0 * scaled.user_cpu_hz


def test_channel_draw_carries_fields():
    draw = ChannelDraw(g_a=0.5, g_b=1.5, rho_a=100.0, rho_b=10.0)
    assert draw.g_a == 0.5 and draw.rho_b == 10.0
