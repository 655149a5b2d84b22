import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from lpwus.channel.channel_profile import ChannelProfile, Fading, apply, complex_noise, delay
from lpwus.codec.frame import encode_frame
from lpwus.procedures.monitoring import resolve_mos
from lpwus.receiver.energy_detector import ed_demodulate
from lpwus.waveform.wus_modulator import modulate_frame


@pytest.fixture()
def wus_signal(default_cfg):
    frame = encode_frame((1, 1, 0), default_cfg)
    return modulate_frame(frame, default_cfg, resolve_mos(default_cfg))


def test_noise_variance():
    assert ChannelProfile().noise_variance == 0.0
    assert ChannelProfile(snr_db=10.0).noise_variance == pytest.approx(0.1)
    assert ChannelProfile(snr_db=-3.0).noise_variance == pytest.approx(10**0.3)


def test_identity_channel(wus_signal):
    y = apply(wus_signal, ChannelProfile())
    assert_array_equal(y.samples, wus_signal.samples)
    assert y.annotations == wus_signal.annotations


def test_noise_only(wus_signal):
    y = apply(wus_signal, ChannelProfile(snr_db=3.0), np.random.default_rng(1), noise_only=True)
    power = np.mean(np.abs(y.samples) ** 2)
    assert power == pytest.approx(10 ** -0.3, rel=0.07)
    assert abs(np.mean(y.samples)) < 0.05


def test_noise_only_without_snr(wus_signal):
    y = apply(wus_signal, ChannelProfile(), np.random.default_rng(2), noise_only=True)
    assert np.mean(np.abs(y.samples) ** 2) == pytest.approx(1.0, rel=0.07)


def test_complex_noise_is_circular():
    w = complex_noise(np.random.default_rng(4), 200_000, 2.0)
    assert np.var(w.real) == pytest.approx(1.0, rel=0.02)
    assert np.var(w.imag) == pytest.approx(1.0, rel=0.02)
    assert abs(np.mean(w.real * w.imag)) < 0.02


def test_delay():
    x = np.array([1.0, 2.0, 3.0])
    assert delay(x, 1).tolist() == [0.0, 1.0, 2.0]
    assert delay(x, -1).tolist() == [2.0, 3.0, 0.0]
    assert delay(x, 0).tolist() == [1.0, 2.0, 3.0]


def test_timing_offset(wus_signal):
    y = apply(wus_signal, ChannelProfile(timing_offset_samples=5))
    assert_array_equal(y.samples[5:], wus_signal.samples[:-5])
    assert_array_equal(y.samples[:5], 0)


def test_cfo_keeps_modulus(wus_signal):
    y = apply(wus_signal, ChannelProfile(cfo_hz=1500.0))
    assert_allclose(np.abs(y.samples), np.abs(wus_signal.samples), atol=1e-12)
    n = 100
    expected = wus_signal.samples[n] * np.exp(2j * math.pi * 1500.0 * n / wus_signal.sample_rate_hz)
    assert y.samples[n] == pytest.approx(expected)


def test_block_fading_is_one_tap(wus_signal):
    y = apply(wus_signal, ChannelProfile(fading=Fading.RAYLEIGH_BLOCK, seed=9))
    nz = np.abs(wus_signal.samples) > 1e-3
    h = y.samples[nz] / wus_signal.samples[nz]
    assert_allclose(h, h[0])


def test_seeded_profile_is_reproducible(wus_signal):
    prof = ChannelProfile(snr_db=0.0, fading=Fading.RAYLEIGH_BLOCK, seed=21)
    assert_array_equal(apply(wus_signal, prof).samples, apply(wus_signal, prof).samples)


def test_noise_variance_over_a_million_samples(wus_signal):
    rng = np.random.default_rng(31)
    prof = ChannelProfile(snr_db=10.0)
    w = np.concatenate([apply(wus_signal, prof, rng, noise_only=True).samples for _ in range(300)])
    assert w.size >= 1_000_000
    assert np.mean(np.abs(w) ** 2) == pytest.approx(0.1, rel=0.01)


def test_on_off_energy_ratio_at_10_db(default_cfg, wus_signal):
    g = encode_frame((1, 1, 0), default_cfg).g.astype(bool)
    rng = np.random.default_rng(32)
    prof = ChannelProfile(snr_db=10.0)
    e = np.stack([ed_demodulate(apply(wus_signal, prof, rng), default_cfg) for _ in range(200)])
    assert np.mean(e[:, g]) / np.mean(e[:, ~g]) == pytest.approx(11.0, rel=0.03)
