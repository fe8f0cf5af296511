"""Spectral layer: truncation selection and CF-to-pmf inversion."""

import numpy as np
import pytest

from transientq import (
    AliasingError,
    InversionConfig,
    ModelParams,
    NonRealProbabilityError,
    analytic_pmf_poisson,
    autonomous_cf,
    cf_from_pmf,
    choose_truncation,
    invert_cf,
    mean_occupancy,
    point_mass,
    poisson_matched_cf,
)

CASES = [(0.8, 0.1), (0.8, 1.0), (1.2, 0.4), (1.5, 0.6), (1.9, 1.0), (1.0, 0.5)]


class TestInversionConfig:
    def test_valid(self):
        cfg = InversionConfig(kmax=10, grid_size=32, tail_tol=1e-9)
        assert cfg.grid_size == 32

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(kmax=10, grid_size=33, tail_tol=1e-9),  # not a power of two
            dict(kmax=10, grid_size=16, tail_tol=1e-9),  # < 2 * kmax
            dict(kmax=10, grid_size=32, tail_tol=0.0),
            dict(kmax=10, grid_size=32, tail_tol=-1e-9),
            dict(kmax=-1, grid_size=32, tail_tol=1e-9),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            InversionConfig(**kwargs)


class TestChooseTruncation:
    @pytest.mark.parametrize("b,t", CASES)
    def test_config_contract(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        cfg = choose_truncation(p, t, 1e-9)
        assert cfg.grid_size >= 2 * cfg.kmax
        assert cfg.grid_size & (cfg.grid_size - 1) == 0
        assert cfg.kmax >= 15

    def test_time_zero_covers_initial_state(self):
        p = ModelParams(b=1.9, mu=1.0, n0=15)
        cfg = choose_truncation(p, 0.0, 1e-9)
        assert cfg.kmax >= 15

    def test_actual_tail_is_small(self):
        # widest case on the reference grid: the discarded tail of both
        # distributions must sit well under tail_tol
        p = ModelParams(b=1.9, mu=1.0, n0=15)
        cfg = choose_truncation(p, 1.0, 1e-9)
        wide = analytic_pmf_poisson(p, 1.0, cfg.kmax + 300, tail_tol=1.0)
        assert wide.probs[cfg.kmax + 1 :].sum() < 1e-10

    def test_tightens_with_tolerance(self):
        p = ModelParams(b=1.5, mu=1.0, n0=15)
        loose = choose_truncation(p, 0.6, 1e-6)
        tight = choose_truncation(p, 0.6, 1e-12)
        assert tight.kmax >= loose.kmax


class TestInvertCf:
    def test_point_mass_round_trip(self):
        pm = point_mass(7, kmax=12)
        cfg = InversionConfig(kmax=12, grid_size=32, tail_tol=1e-9)
        got = invert_cf(cf_from_pmf(pm.probs), 0.0, cfg)
        np.testing.assert_allclose(got.probs, pm.probs, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("b,t", CASES)
    def test_matched_matches_convolution(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        cfg = choose_truncation(p, t, 1e-9)
        inv = invert_cf(poisson_matched_cf(p), t, cfg)
        conv = analytic_pmf_poisson(p, t, cfg.kmax)
        assert np.max(np.abs(inv.probs - conv.probs)) < 1e-10

    @pytest.mark.parametrize("b,t", CASES)
    def test_inverted_means(self, b, t):
        p = ModelParams(b=b, mu=1.0, n0=15)
        cfg = choose_truncation(p, t, 1e-9)
        m = mean_occupancy(p, t)
        for cf in (autonomous_cf(p), poisson_matched_cf(p)):
            pmf = invert_cf(cf, t, cfg)
            assert abs(pmf.mean() - m) / m < 1e-6

    def test_round_trips_random_pmfs(self):
        rng = np.random.default_rng(2026)
        for _ in range(10):
            k = int(rng.integers(1, 40))
            raw = rng.random(k + 1)
            probs = raw / raw.sum()
            size = 1 << int(2 * (k + 1) - 1).bit_length()
            cfg = InversionConfig(kmax=k, grid_size=size, tail_tol=1e-9)
            got = invert_cf(cf_from_pmf(probs), 0.0, cfg)
            assert np.max(np.abs(got.probs - probs)) < 1e-12

    def test_pmf_invariants(self, params_std):
        cfg = choose_truncation(params_std, 1.0, 1e-9)
        pmf = invert_cf(autonomous_cf(params_std), 1.0, cfg)
        assert np.all(pmf.probs >= 0.0)
        assert 1.0 - pmf.tail_bound - 1e-9 <= pmf.probs.sum() <= 1.0 + 1e-9

    def test_aliasing_detected(self, params_std):
        cfg = InversionConfig(kmax=4, grid_size=16, tail_tol=1e-9)
        with pytest.raises(AliasingError):
            invert_cf(autonomous_cf(params_std), 1.0, cfg)

    def test_aliasing_shrinks_with_grid(self, params_std):
        # doubling the retained support cannot increase the unexplained mass
        t = 1.0
        tails = []
        for kmax in (60, 120):
            size = 1 << int(2 * (kmax + 1) - 1).bit_length()
            cfg = InversionConfig(kmax=kmax, grid_size=size, tail_tol=0.9)
            tails.append(invert_cf(autonomous_cf(params_std), t, cfg).tail_bound)
        assert tails[1] <= tails[0] + 1e-15

    def test_non_lattice_cf_rejected(self):
        cf = lambda u, t: np.exp(1j * np.asarray(u) * 5.5)
        cfg = InversionConfig(kmax=15, grid_size=64, tail_tol=0.5)
        with pytest.raises(NonRealProbabilityError):
            invert_cf(cf, 0.0, cfg)

    def test_unnormalized_cf_rejected(self, params_std):
        bad = lambda u, t: 1.001 * np.asarray(
            np.exp(1j * np.asarray(u) * 3), dtype=complex
        )
        cfg = InversionConfig(kmax=15, grid_size=64, tail_tol=0.5)
        with pytest.raises(ValueError):
            invert_cf(bad, 0.0, cfg)

    def test_scalar_only_cf_supported(self):
        # evaluators that choke on arrays get evaluated pointwise
        def scalar_cf(u, t):
            if np.ndim(u) != 0:
                raise TypeError("scalar only")
            return complex(np.exp(1j * u * 3))

        cfg = InversionConfig(kmax=8, grid_size=32, tail_tol=1e-9)
        got = invert_cf(scalar_cf, 0.0, cfg)
        assert got.probs[3] == pytest.approx(1.0, abs=1e-12)


class TestCfFromPmf:
    def test_matches_direct_sum(self):
        probs = np.array([0.2, 0.5, 0.3])
        cf = cf_from_pmf(probs)
        for u in (0.0, 0.7, -1.9):
            direct = sum(p * np.exp(1j * u * i) for i, p in enumerate(probs))
            assert abs(cf(u, 0.0) - direct) < 1e-14

    def test_array_input(self):
        probs = np.array([0.5, 0.5])
        u = np.linspace(-2, 2, 9)
        out = cf_from_pmf(probs)(u, 0.0)
        assert out.shape == u.shape
