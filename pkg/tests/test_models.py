"""Closed-form layer: parameters, moment laws, characteristic functions."""

import math

import numpy as np
import pytest

from transientq import (
    ModelParams,
    NumericalInstabilityError,
    TailMassError,
    analytic_pmf_poisson,
    binomial_cf,
    cf_autonomous,
    cf_poisson_general,
    cf_poisson_matched,
    matched_intensity,
    mean_occupancy,
    poisson_cf,
)
from transientq.models import _autonomous_ratio, _ipow, _poisson_parameter

U_GRID = np.linspace(-math.pi, math.pi, 181)
CASES = [(0.8, 0.4), (1.2, 1.0), (1.5, 0.6), (1.9, 1.0), (1.0, 0.5)]


class TestModelParams:
    def test_fields(self):
        p = ModelParams(b=1.2, mu=1.0, n0=15)
        assert (p.b, p.mu, p.n0) == (1.2, 1.0, 15)

    def test_frozen(self, params_std):
        with pytest.raises(AttributeError):
            params_std.b = 2.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(b=-0.1, mu=1.0, n0=15),
            dict(b=1.0, mu=0.0, n0=15),
            dict(b=1.0, mu=-1.0, n0=15),
            dict(b=1.0, mu=1.0, n0=-1),
            dict(b=1.0, mu=1.0, n0=2.5),
            dict(b=math.nan, mu=1.0, n0=15),
            dict(b=1.0, mu=math.inf, n0=15),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises((ValueError, TypeError)):
            ModelParams(**kwargs)

    def test_b_zero_allowed(self):
        assert ModelParams(b=0.0, mu=1.0, n0=3).b == 0.0


class TestMeanLaws:
    def test_balanced_rates_mean_constant(self, params_crit):
        for t in (0.0, 0.3, 1.0, 7.0):
            assert mean_occupancy(params_crit, t) == pytest.approx(15.0, rel=1e-14)

    def test_growth_example(self, params_std):
        assert mean_occupancy(params_std, 1.0) == pytest.approx(
            15.0 * math.exp(0.2), rel=1e-14
        )

    def test_decay_example(self):
        p = ModelParams(b=0.0, mu=1.0, n0=15)
        assert mean_occupancy(p, math.log(2.0)) == pytest.approx(7.5, rel=1e-12)

    def test_time_zero(self, params_sub):
        assert mean_occupancy(params_sub, 0.0) == 15.0

    def test_intensity_is_rate_times_mean_bitwise(self):
        for b, t in CASES:
            p = ModelParams(b=b, mu=1.0, n0=15)
            assert matched_intensity(p, t) == b * mean_occupancy(p, t)

    def test_negative_time_rejected(self, params_std):
        with pytest.raises(ValueError):
            mean_occupancy(params_std, -0.1)

    def test_exponent_overflow_rejected(self):
        p = ModelParams(b=800.0, mu=1.0, n0=15)
        with pytest.raises(ValueError):
            mean_occupancy(p, 1.0)


class TestCfBasics:
    @pytest.mark.parametrize("b,t", CASES)
    def test_normalized_exactly(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        assert cf_autonomous(p, 0.0, t) == 1.0 + 0.0j
        assert cf_poisson_matched(p, 0.0, t) == 1.0 + 0.0j

    def test_component_cfs_normalized_exactly(self):
        assert binomial_cf(0.0, 15, 0.37) == 1.0 + 0.0j
        assert poisson_cf(0.0, 4.2) == 1.0 + 0.0j

    @pytest.mark.parametrize("b,t", CASES)
    def test_modulus_bounded(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        assert np.all(np.abs(cf_autonomous(p, U_GRID, t)) <= 1.0 + 1e-12)
        assert np.all(np.abs(cf_poisson_matched(p, U_GRID, t)) <= 1.0 + 1e-12)

    @pytest.mark.parametrize("b,t", CASES)
    def test_hermitian(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        u = U_GRID[U_GRID > 0]
        for cf in (cf_autonomous, cf_poisson_matched):
            np.testing.assert_allclose(
                cf(p, -u, t), np.conj(cf(p, u, t)), rtol=0, atol=1e-14
            )

    def test_time_zero_is_pure_phase(self, params_std):
        expected = np.exp(1j * U_GRID * 15)
        np.testing.assert_allclose(
            cf_autonomous(params_std, U_GRID, 0.0), expected, atol=1e-13
        )
        np.testing.assert_allclose(
            cf_poisson_matched(params_std, U_GRID, 0.0), expected, atol=1e-13
        )

    def test_scalar_in_scalar_out(self, params_std):
        assert isinstance(cf_autonomous(params_std, 0.3, 0.5), complex)
        assert isinstance(cf_poisson_matched(params_std, 0.3, 0.5), complex)

    def test_array_in_array_out(self, params_std):
        out = cf_autonomous(params_std, U_GRID, 0.5)
        assert isinstance(out, np.ndarray) and out.shape == U_GRID.shape


class TestCfStructure:
    def test_matched_cf_is_binomial_times_poisson(self, params_std):
        t = 0.7
        p_surv = math.exp(-t)
        a = _poisson_parameter(params_std, t)
        w = np.exp(1j * U_GRID)
        direct = ((1.0 - p_surv) + p_surv * w) ** 15 * np.exp(a * (w - 1.0))
        np.testing.assert_allclose(
            cf_poisson_matched(params_std, U_GRID, t), direct, rtol=0, atol=1e-12
        )

    def test_critical_branch_formula(self, params_crit):
        t = 0.5
        w = np.exp(1j * U_GRID)
        direct = (((w - 1.0) * t - w) / ((w - 1.0) * t - 1.0)) ** 15
        np.testing.assert_allclose(
            cf_autonomous(params_crit, U_GRID, t), direct, rtol=0, atol=1e-12
        )

    @pytest.mark.parametrize("b,t", CASES)
    def test_fd_mean_autonomous(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        m = mean_occupancy(p, t)
        fd = {
            h: (cf_autonomous(p, h, t) - cf_autonomous(p, -h, t)).imag / (2 * h)
            for h in (1e-4, 1e-5)
        }
        assert abs(fd[1e-4] - m) / m < 1e-5
        ratio = abs(fd[1e-4] - m) / max(abs(fd[1e-5] - m), 1e-300)
        assert 50 < ratio < 200  # central differences: error ~ h^2

    def test_fd_mean_matched(self, params_std):
        t = 0.6
        m = mean_occupancy(params_std, t)
        h = 1e-4
        fd = (
            cf_poisson_matched(params_std, h, t)
            - cf_poisson_matched(params_std, -h, t)
        ).imag / (2 * h)
        assert abs(fd - m) / m < 1e-5

    def test_ipow_matches_complex_power(self):
        rng = np.random.default_rng(3)
        z = rng.normal(size=8) + 1j * rng.normal(size=8)
        for n in (0, 1, 2, 7, 15, 32):
            np.testing.assert_allclose(_ipow(z, n), z.astype(complex) ** n, rtol=1e-12)


class TestGeneralPoissonCf:
    def test_matches_closed_form_for_matched_intensity(self, params_std):
        t = 0.8
        rate = lambda s: matched_intensity(params_std, s)
        for u in (0.3, 1.7, -2.4):
            got = cf_poisson_general(params_std, rate, u, t)
            want = cf_poisson_matched(params_std, u, t)
            assert abs(got - want) < 1e-10

    def test_constant_intensity(self):
        # constant rate c with empty start: occupancy is Poisson with
        # parameter (c/mu) * (1 - exp(-mu*t))
        p = ModelParams(b=1.0, mu=2.0, n0=0)
        c, t = 3.0, 0.9
        a = (c / 2.0) * -math.expm1(-2.0 * t)
        for u in (0.5, 2.0):
            got = cf_poisson_general(p, lambda s: c, u, t)
            assert abs(got - poisson_cf(u, a)) < 1e-12

    def test_rejects_negative_intensity(self, params_std):
        with pytest.raises(ValueError):
            cf_poisson_general(params_std, lambda s: -1.0, 0.5, 1.0)


class TestAnalyticPmf:
    def test_mass_and_mean(self, params_std):
        t = 0.6
        pmf = analytic_pmf_poisson(params_std, t, 120)
        assert pmf.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert pmf.mean() == pytest.approx(mean_occupancy(params_std, t), rel=1e-12)

    def test_time_zero_is_point_mass(self, params_std):
        pmf = analytic_pmf_poisson(params_std, 0.0, 30)
        assert pmf.probs[15] == pytest.approx(1.0, abs=1e-15)
        assert pmf.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_truncation_guard(self, params_std):
        with pytest.raises(TailMassError):
            analytic_pmf_poisson(params_std, 1.0, 5)


class TestInstabilityGuard:
    def test_denominator_floor_raises_off_circle(self, params_std):
        # the CF denominator only vanishes at a real point s* > 1, never on
        # the unit circle; evaluating the ratio there must trip the guard
        E = math.exp(0.2)
        s_star = (1.2 * E - 1.0) / (1.2 * (E - 1.0))
        with pytest.raises(NumericalInstabilityError):
            _autonomous_ratio(params_std, np.array([s_star + 0.0j]), 1.0)

    def test_unit_circle_is_safe(self, params_std):
        value = cf_autonomous(params_std, U_GRID, 1.0)
        assert np.all(np.isfinite(value))
