"""
Tests du lissage et de l'ajustement du modèle de réactivité
"""

import math

import numpy as np
import pytest

from parafis.calculations.fitting import (
    smooth, fit_phase, fit_phases, fit_with_boundaries, summarize, summary_dataframe, PhaseFit
)
from parafis.utils.errors import FitError


def _curve(S, tau, s_min, n=2000):
    t = np.arange(n, dtype=float)
    return S * (1.0 - np.exp(-t / tau)) + s_min


def _log_tau_std(S, tau, sigma, n=2000):
    """Écart type asymptotique de log(tau) pour un bruit blanc sigma."""
    t = np.arange(n, dtype=float)
    decay = np.exp(-t / tau)
    jacobian = np.column_stack([1.0 - decay, np.ones_like(t), -S * (t / tau) * decay])
    covariance = sigma ** 2 * np.linalg.inv(jacobian.T @ jacobian)
    return math.sqrt(covariance[2, 2])


class TestSmooth:

    def test_window_of_one_is_identity(self):
        values = [0.0, 1.0, 1.0, 0.0]
        np.testing.assert_array_equal(smooth(values, 1), values)

    def test_prefix_average(self):
        np.testing.assert_allclose(smooth([1, 1, 0, 0], 2), [1.0, 1.0, 0.5, 0.0])

    def test_bounds(self):
        rng = np.random.default_rng(0)
        values = rng.integers(0, 2, 500).astype(float)
        smoothed = smooth(values, 5)
        assert smoothed.min() >= 0.0 and smoothed.max() <= 1.0

    def test_invalid_window(self):
        with pytest.raises(ValueError):
            smooth([1.0, 0.0], 0)


class TestFitPhase:

    def test_noiseless_curve(self):
        fit = fit_phase(_curve(0.2, 300.0, 0.75))
        assert fit.S == pytest.approx(0.2, rel=1e-6)
        assert fit.tau == pytest.approx(300.0, rel=1e-6)
        assert fit.s_min == pytest.approx(0.75, rel=1e-6)
        assert fit.steady_state == pytest.approx(0.95, rel=1e-6)
        assert fit.residual < 1e-6

    def test_curve_reaches_63_percent_at_tau(self):
        fit = fit_phase(_curve(0.3, 120.0, 0.5))
        gain = fit.evaluate(np.array([fit.tau]))[0] - fit.s_min
        assert gain == pytest.approx(fit.S * (1.0 - math.exp(-1.0)))

    def test_flat_curve(self):
        fit = fit_phase(np.full(500, 0.9))
        assert not fit.identifiable
        assert math.isnan(fit.tau)
        assert fit.S == 0.0
        assert fit.s_min == pytest.approx(0.9)

    def test_scale_and_shift(self):
        y = _curve(0.25, 80.0, 0.6, n=1000)
        base = fit_phase(y)
        scaled = fit_phase(0.5 * y)
        shifted = fit_phase(y + 0.1)
        assert scaled.S == pytest.approx(0.5 * base.S, rel=1e-6)
        assert scaled.s_min == pytest.approx(0.5 * base.s_min, rel=1e-6)
        assert scaled.tau == pytest.approx(base.tau, rel=1e-6)
        assert shifted.s_min == pytest.approx(base.s_min + 0.1, rel=1e-6)
        assert shifted.tau == pytest.approx(base.tau, rel=1e-6)

    def test_random_noiseless_round_trip(self):
        rng = np.random.default_rng(20)
        for _ in range(50):
            S, tau = rng.uniform(0.05, 0.5), rng.uniform(20.0, 2000.0)
            s_min = rng.uniform(0.4, min(0.9, 1.0 - S))
            fit = fit_phase(_curve(S, tau, s_min))
            assert fit.S == pytest.approx(S, rel=1e-4)
            assert fit.s_min == pytest.approx(s_min, rel=1e-4)
            assert fit.tau == pytest.approx(tau, rel=1e-4)

    def test_noisy_curve(self):
        rng = np.random.default_rng(21)
        for tau in (30.0, 150.0, 500.0):
            y = _curve(0.3, tau, 0.6) + rng.normal(0.0, 0.02, 2000)
            fit = fit_phase(y)
            assert fit.tau == pytest.approx(tau, rel=0.15)

    def test_random_noisy_curves(self):
        # Tolérance de 15 %, élargie à 4 écarts types asymptotiques de log(tau)
        # quand la courbe est peu informative (S petit devant le bruit, phase
        # plus courte que quelques tau)
        rng = np.random.default_rng(22)
        sigma = 0.02
        for _ in range(50):
            S, tau = rng.uniform(0.05, 0.5), rng.uniform(20.0, 2000.0)
            s_min = rng.uniform(0.4, min(0.9, 1.0 - S))
            fit = fit_phase(_curve(S, tau, s_min) + rng.normal(0.0, sigma, 2000))
            tolerance = max(math.log(1.15), 4.0 * _log_tau_std(S, tau, sigma))
            assert abs(math.log(fit.tau / tau)) <= tolerance, (S, tau, s_min, fit.tau)

    def test_rising_phase_respects_bounds(self):
        t = np.arange(500, dtype=float)
        fit = fit_phase(0.5 + 0.001 * t)
        assert fit.S >= 0.0 and fit.s_min >= 0.0
        assert fit.steady_state <= 1.0 + 1e-9
        assert fit.tau < 30000.0

    def test_falling_phase_respects_bounds(self):
        t = np.arange(500, dtype=float)
        fit = fit_phase(0.95 - 0.0005 * t)
        assert fit.S == 0.0
        assert 0.0 <= fit.steady_state <= 1.0
        assert not fit.identifiable

    def test_tau_on_search_bound_not_converged(self):
        t = np.arange(100, dtype=float)
        fit = fit_phase(0.3 + 1e-5 * t)
        assert fit.identifiable
        assert fit.tau == pytest.approx(30000.0, rel=0.01)
        assert not fit.converged

    def test_interior_tau_converged(self):
        assert fit_phase(_curve(0.2, 300.0, 0.75)).converged

    def test_short_phase(self):
        with pytest.raises(FitError):
            fit_phase(np.ones(9))

    def test_non_finite(self):
        values = _curve(0.2, 50.0, 0.5, n=100)
        values[10] = np.nan
        with pytest.raises(FitError):
            fit_phase(values)


class TestPhases:

    def test_fit_phases_restarts_time(self):
        series = np.concatenate([_curve(0.2, 50.0, 0.7, n=400), _curve(0.4, 100.0, 0.5, n=600)])
        fits = fit_phases(series, ['A'] * 400 + ['B'] * 600)
        assert [fit.phase for fit in fits] == ['A', 'B']
        assert fits[1].tau == pytest.approx(100.0, rel=1e-5)
        assert fits[1].s_min == pytest.approx(0.5, rel=1e-5)

    def test_boundaries(self):
        series = np.concatenate([_curve(0.2, 50.0, 0.7, n=300), _curve(0.3, 40.0, 0.6, n=300)])
        fits = fit_with_boundaries(series, [300])
        assert [fit.phase for fit in fits] == ['A', 'B']
        assert fits[1].steady_state == pytest.approx(0.9, rel=1e-5)

    def test_trailing_boundary_marks_end(self):
        series = np.concatenate([_curve(0.2, 50.0, 0.7, n=2000), _curve(0.3, 40.0, 0.6, n=4000),
                                 _curve(0.1, 300.0, 0.8, n=4000)])
        fits = fit_with_boundaries(series, [2000, 6000, 10000])
        assert [fit.phase for fit in fits] == ['A', 'B', 'C']
        assert fits[2].tau == pytest.approx(300.0, rel=1e-5)
        assert fits[2].steady_state == pytest.approx(0.9, rel=1e-5)

    def test_boundary_out_of_range(self):
        with pytest.raises(FitError):
            fit_with_boundaries(np.ones(100), [150])

    def test_boundary_too_close(self):
        with pytest.raises(FitError):
            fit_with_boundaries(_curve(0.2, 50.0, 0.7, n=300), [5])


class TestSummary:

    def test_single_phase_summary_equals_fit(self):
        fit = fit_phase(_curve(0.2, 60.0, 0.7, n=500))
        rows = summarize({'ParaFIS': [fit]}, {'ParaFIS': 0.91})
        assert rows[0].mean_steady_state == pytest.approx(fit.steady_state)
        assert rows[0].mean_tau == pytest.approx(fit.tau)
        assert rows[0].mean_acc == pytest.approx(0.91)

    def test_flat_phases_excluded_from_tau(self):
        fits = [PhaseFit('A', 0.2, 0.7, 100.0, 0.0),
                PhaseFit('B', 0.0, 0.8, math.nan, 0.0, identifiable=False),
                PhaseFit('C', 0.1, 0.8, 300.0, 0.0)]
        row = summarize({'I2': fits}, {'I2': 0.8})[0]
        assert row.mean_tau == pytest.approx(200.0)
        assert row.mean_steady_state == pytest.approx((0.9 + 0.8 + 0.9) / 3)

    def test_dataframe_columns(self):
        fits = [PhaseFit('A', 0.2, 0.7, 100.0, 0.0)]
        df = summary_dataframe(summarize({'a': fits, 'b': fits}, {'a': 0.5, 'b': 0.6}))
        assert list(df.columns) == ['config', 'S_plus_smin', 'tau', 'mean_acc']
        assert df['config'].tolist() == ['a', 'b']
