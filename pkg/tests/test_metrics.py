"""Complexity formulas, iteration averaging and the tradeoff score."""

import math

import numpy as np
import pytest

from dsmgs.metrics import (
    ComplexityModel,
    effective_iterations,
    mmse_rops,
    per_iteration_rops,
    rops_per_symbol,
    tradeoff_score,
    wilson_interval,
)


def _model(kind, k=16, n=32, a=8, samples=1, init=0.0):
    return ComplexityModel(kind, k, n, alphabet_size=a, samples_per_update=samples, init_rops=init)


class TestRopsFormulas:
    def test_mmse_reference_value(self):
        assert mmse_rops(16, 32) == pytest.approx(859.5)
        assert rops_per_symbol(_model("mmse"), 0.0) == pytest.approx(859.5)

    def test_zero_iterations_charge_only_the_init(self):
        model = _model("dsmgs", init=123.25)
        assert rops_per_symbol(model, 0.0) == 123.25

    def test_amgs_exceeds_dsmgs_by_sampling_term(self):
        eni = 37.0
        dsmgs = rops_per_symbol(_model("dsmgs"), eni)
        amgs = rops_per_symbol(_model("amgs", samples=2), eni)
        assert amgs - dsmgs == pytest.approx(eni * 6.0)

    def test_dsmgs_bracket_closed_form(self):
        k, n, a = 8, 16, 4
        got = per_iteration_rops(_model("dsmgs", k=k, n=n, a=a))
        assert got == pytest.approx(16 * k * n + 16 * n + a * (16 * n + 2) + 24 / k)

    def test_mgs_bracket_closed_form(self):
        k, n, a = 8, 16, 4
        got = per_iteration_rops(_model("mgs", k=k, n=n, a=a))
        assert got == pytest.approx(16 * k * n - 4 * n + a * (16 * n + 1450) + (10 * n + 24) / k)

    def test_monotone_in_every_argument(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            k, n = int(rng.integers(1, 100)), int(rng.integers(1, 100))
            a = int(rng.choice([2, 4, 8, 16]))
            eni = float(rng.uniform(0, 500))
            for kind in ("dsmgs", "amgs", "mgs"):
                base = rops_per_symbol(_model(kind, k=k, n=n, a=a), eni)
                assert rops_per_symbol(_model(kind, k=k, n=n, a=a), eni + 1) > base
                assert rops_per_symbol(_model(kind, k=k + 1, n=n, a=a), eni + 1) > base
                assert rops_per_symbol(_model(kind, k=k, n=n + 1, a=a), eni + 1) > base
                assert rops_per_symbol(_model(kind, k=k, n=n, a=2 * a), eni + 1) > base

    def test_mgs_costlier_than_dsmgs_on_supported_geometries(self):
        # holds across the supported experiment range (N up to 128)
        for k in range(1, 129, 7):
            for n in range(1, 129, 7):
                for a in (2, 4, 8, 16):
                    mgs = per_iteration_rops(_model("mgs", k=k, n=n, a=a))
                    dsmgs = per_iteration_rops(_model("dsmgs", k=k, n=n, a=a))
                    assert mgs > dsmgs

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            rops_per_symbol(_model("sphere"), 1.0)

    def test_rejects_negative_eni(self):
        with pytest.raises(ValueError):
            rops_per_symbol(_model("dsmgs"), -0.5)


class TestEffectiveIterations:
    def test_mean(self):
        assert effective_iterations([10, 20, 30]) == 20.0

    def test_single_trial(self):
        assert effective_iterations([17]) == 17.0

    def test_saturated_runs(self):
        cap = 1024 * 20
        assert effective_iterations([cap] * 5) == cap

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            effective_iterations([])


class TestTradeoffScore:
    def test_reference_value(self):
        assert tradeoff_score(1e-3, 1e8) == pytest.approx(30.0)

    def test_zero_at_ber_one(self):
        assert tradeoff_score(1.0, 5e6) == 0.0

    def test_inverse_in_complexity(self):
        assert tradeoff_score(1e-2, 2e7) == pytest.approx(tradeoff_score(1e-2, 1e7) / 2)

    def test_zero_ber_saturates(self):
        assert tradeoff_score(0.0, 1e7) == math.inf

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            tradeoff_score(1.5, 1e7)


class TestWilsonInterval:
    def test_contains_point_estimate(self):
        lo, hi = wilson_interval(20, 1000)
        assert lo < 0.02 < hi

    def test_zero_errors(self):
        lo, hi = wilson_interval(0, 500)
        assert lo == pytest.approx(0.0, abs=1e-15)
        assert 0.0 < hi < 0.02

    def test_narrows_with_samples(self):
        lo1, hi1 = wilson_interval(10, 100)
        lo2, hi2 = wilson_interval(1000, 10000)
        assert (hi2 - lo2) < (hi1 - lo1)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            wilson_interval(0, 0)
