"""Channel statistics, SNR scaling and real-valued decomposition."""

import numpy as np
import pytest

from dsmgs.constellation import build_alphabet
from dsmgs.stopping import residual_quality
from dsmgs.system import (
    ComplexSystemDraw,
    draw_channel,
    draw_complex_trial,
    draw_trial,
    noise_variance_for_snr,
    real_block_channel,
    realify,
)


class TestDrawChannel:
    def test_entry_moments(self):
        rng = np.random.default_rng(2024)
        h = draw_channel(100, 1000, rng)  # 1e5 entries
        assert abs(h.mean()) < 0.01
        assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, rel=0.02)
        # each real part carries half the variance
        assert np.var(h.real) == pytest.approx(0.5, rel=0.05)

    def test_seed_replay(self):
        a = draw_channel(5, 7, np.random.default_rng(42))
        b = draw_channel(5, 7, np.random.default_rng(42))
        assert np.array_equal(a, b)

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            draw_channel(0, 4, np.random.default_rng(0))


class TestNoiseVariance:
    def test_reference_value(self):
        alph = build_alphabet(4)
        got = noise_variance_for_snr(3.0, 1, alph)
        assert got == pytest.approx(2.0 / 10 ** 0.3)
        assert got == pytest.approx(1.0024, abs=1e-3)

    def test_vanishes_at_high_snr(self):
        alph = build_alphabet(64)
        assert noise_variance_for_snr(300.0, 8, alph) < 1e-20

    def test_linear_in_users(self):
        alph = build_alphabet(16)
        one = noise_variance_for_snr(10.0, 3, alph)
        two = noise_variance_for_snr(10.0, 6, alph)
        assert two == pytest.approx(2 * one)

    def test_rejects_non_finite_snr(self):
        with pytest.raises(ValueError):
            noise_variance_for_snr(np.inf, 1, build_alphabet(4))


class TestRealify:
    def test_scalar_block_pattern(self):
        h = real_block_channel(np.array([[1 + 2j]]))
        assert h.tolist() == [[1.0, -2.0], [2.0, 1.0]]

    def test_real_path_matches_complex_path(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            draw = draw_complex_trial(4, 6, 16, 12.0, rng)
            sysm = realify(draw)
            y_c = draw.channel @ draw.symbols + draw.noise
            y_from_complex = np.concatenate([y_c.real, y_c.imag])
            y_real_path = sysm.H @ sysm.s + np.concatenate([draw.noise.real, draw.noise.imag])
            assert np.max(np.abs(sysm.y - y_from_complex)) < 1e-12
            assert np.max(np.abs(sysm.y - y_real_path)) < 1e-10

    def test_noiseless_consistency(self):
        rng = np.random.default_rng(9)
        channel = draw_channel(3, 5, rng)
        alph = build_alphabet(16)
        symbols = alph.levels[rng.integers(0, 4, 3)] + 1j * alph.levels[rng.integers(0, 4, 3)]
        draw = ComplexSystemDraw(channel, symbols, np.zeros(5, complex), 0.0, np.inf)
        sysm = realify(draw)
        assert np.allclose(sysm.y, sysm.H @ sysm.s, atol=1e-12)

    def test_rejects_mismatched_dimensions(self):
        bad = ComplexSystemDraw(np.eye(3, dtype=complex), np.ones(2, complex), np.zeros(3, complex), 1.0, 0.0)
        with pytest.raises(ValueError):
            realify(bad)


class TestDrawTrial:
    def test_symbols_stay_on_alphabet(self):
        alph = build_alphabet(64)
        rng = np.random.default_rng(1)
        for _ in range(50):
            sysm = draw_trial(6, 8, 64, 20.0, rng)
            assert np.isin(sysm.s, alph.levels).all()
            assert sysm.s.shape == (12,)

    def test_residual_energy_matches_noise_floor(self):
        # mean ||y - H s||^2 equals N sigma^2 under the sigma^2/2-per-real-dim split
        rng = np.random.default_rng(77)
        n_users, n_rx = 4, 8
        total, count = 0.0, 400
        sigma2 = None
        for _ in range(count):
            sysm = draw_trial(n_users, n_rx, 16, 10.0, rng)
            total += float(np.sum((sysm.y - sysm.H @ sysm.s) ** 2))
            sigma2 = sysm.noise_var
        assert total / count == pytest.approx(n_rx * sigma2, rel=0.05)

    def test_seed_reproducibility(self):
        a = draw_trial(3, 4, 16, 8.0, np.random.default_rng(123))
        b = draw_trial(3, 4, 16, 8.0, np.random.default_rng(123))
        assert np.array_equal(a.y, b.y)
        assert np.array_equal(a.H, b.H)
        assert np.array_equal(a.s, b.s)

    def test_quality_metric_centered_at_truth(self):
        rng = np.random.default_rng(31)
        total = 0.0
        trials = 10_000
        for _ in range(trials):
            sysm = draw_trial(4, 8, 16, 15.0, rng)
            total += residual_quality(sysm, sysm.s)
        assert abs(total / trials) < 0.1
