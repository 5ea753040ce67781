import math
import warnings

import numpy as np
import pytest

from wormsim.abm import SimConfig
from wormsim.experiments import (
    OUTBREAK_FRACTION,
    ComparisonMetrics,
    EnsembleSpec,
    compare_sim_ode,
    derive_seed,
    fit_growth_rate,
    model_beta,
    profile_ratio_experiment,
    r_sweep,
    run_ensemble,
    threshold_scan,
)
from wormsim.kinetics import Constant, KineticParams, beta_basic, beta_chord


def small_config(**overrides):
    kwargs = dict(n=300, rho=2e-3, R=5.0, p=0.2, delta=1.0,
                  speed=Constant(2000.0), profile="uniform",
                  dt=0.001, t_end=1.0, seed=7, initial_infected=3)
    kwargs.update(overrides)
    return SimConfig(**kwargs)


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kwargs)


class TestSeeds:
    def test_deterministic(self):
        assert derive_seed(42, 3) == derive_seed(42, 3)

    def test_distinct_across_runs_and_bases(self):
        seeds = {derive_seed(b, k) for b in range(5) for k in range(20)}
        assert len(seeds) == 100


class TestEnsemble:
    def test_order_and_count(self):
        spec = EnsembleSpec(small_config(t_end=0.2), runs=3, seed_base=5)
        outputs = quiet(run_ensemble, spec)
        assert len(outputs) == 3
        assert [o.config.seed for o in outputs] == \
            [derive_seed(5, k) for k in range(3)]

    def test_parallelism_invariant(self):
        cfg = small_config(t_end=0.2)
        serial = quiet(run_ensemble, EnsembleSpec(cfg, 3, 5, parallelism=1))
        parallel = quiet(run_ensemble, EnsembleSpec(cfg, 3, 5, parallelism=2))
        for a, b in zip(serial, parallel):
            assert np.array_equal(a.counts, b.counts)
            assert a.infection_events == b.infection_events

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            EnsembleSpec(small_config(), runs=0, seed_base=1)
        with pytest.raises(ValueError):
            EnsembleSpec(small_config(), runs=1, seed_base=1, parallelism=0)


class TestModelBeta:
    def test_uniform(self):
        cfg = small_config()
        params = KineticParams(cfg.rho, cfg.R, 2000.0, cfg.p, cfg.delta)
        assert model_beta(cfg) == pytest.approx(beta_basic(params))

    def test_chord(self):
        cfg = small_config(profile="chord")
        params = KineticParams(cfg.rho, cfg.R, 2000.0, cfg.p, cfg.delta)
        assert model_beta(cfg) == pytest.approx(beta_chord(params))


class TestGrowthFit:
    def test_recovers_exponential_rate(self):
        t = np.linspace(0.0, 5.0, 500)
        i = 1.0 * np.exp(2.5 * t)
        got = fit_growth_rate(t, i, n=100_000)
        assert got == pytest.approx(2.5, rel=1e-6)

    def test_window_bounds(self):
        t = np.linspace(0.0, 5.0, 500)
        i = np.exp(2.0 * t)
        # n/20 = 5 <= 10: no usable window
        assert fit_growth_rate(t, i, n=100) is None

    def test_curve_never_reaches_window(self):
        t = np.linspace(0.0, 5.0, 100)
        i = np.full(100, 3.0)
        assert fit_growth_rate(t, i, n=10_000) is None

    def test_ignores_saturation(self):
        """The fit stops at n/20, before logistic bending matters."""
        n = 100_000
        t = np.linspace(0.0, 10.0, 2000)
        r, i0 = 2.0, 1.0
        i = n / (1.0 + (n / i0 - 1.0) * np.exp(-r * t))
        got = fit_growth_rate(t, i, n)
        assert got == pytest.approx(r, rel=0.05)


class TestCompareSimOde:
    def test_no_transmission_all_errors_zero(self):
        cfg = small_config(p=0.0, delta=0.0, t_end=0.2)
        metrics = quiet(compare_sim_ode, EnsembleSpec(cfg, 2, 3))
        assert metrics.linf_norm == pytest.approx(0.0, abs=1e-12)
        assert metrics.peak_time_err == 0.0
        assert metrics.peak_height_err == pytest.approx(0.0, abs=1e-12)
        assert metrics.n_outbreaks == 0

    def test_metrics_structure(self):
        cfg = small_config(t_end=0.8)
        metrics = quiet(compare_sim_ode, EnsembleSpec(cfg, 3, 11))
        assert isinstance(metrics, ComparisonMetrics)
        assert metrics.n_runs == 3
        assert 0 <= metrics.n_outbreaks <= 3
        assert metrics.beta_model == pytest.approx(model_beta(cfg))
        assert metrics.linf_norm >= 0.0
        assert metrics.final_size_eq19 > 0.0


class TestRSweep:
    def test_singleton_matches_compare(self):
        cfg = small_config(t_end=0.5)
        rows = quiet(r_sweep, cfg, [cfg.R], runs=2, seed_base=9)
        direct = quiet(compare_sim_ode, EnsembleSpec(cfg, 2, 9))
        assert len(rows) == 1
        R, metrics, diag = rows[0]
        assert R == cfg.R and diag == ""
        assert metrics == direct

    def test_invalid_radius_skipped_with_diagnostic(self):
        cfg = small_config(t_end=0.5)
        # L = sqrt(300/2e-3) ~ 387 m, so R = 300 violates minimum image
        rows = quiet(r_sweep, cfg, [300.0, cfg.R], runs=2, seed_base=9)
        assert rows[0][1] is None and "minimum-image" in rows[0][2]
        assert rows[1][1] is not None


class TestThresholdScan:
    def test_sub_vs_supercritical(self):
        cfg = small_config(n=400, delta=4.0, t_end=1.5, dt=0.001,
                           initial_infected=1)
        points = quiet(threshold_scan, cfg, [0.25, 4.0], runs=12, seed_base=17)
        sub, sup = points
        assert sub.density_factor == 0.25 and sup.density_factor == 4.0
        # rho_c = delta / (2 R v p) = 4 / (2 * 5 * 2000 * 0.2) = 1e-3
        assert sub.rho == pytest.approx(0.25 * 1e-3)
        assert sup.rho == pytest.approx(4.0 * 1e-3)
        assert sub.outbreak_probability <= sup.outbreak_probability
        assert sub.mean_final_fraction < sup.mean_final_fraction
        assert sup.outbreak_probability > 0.0
        assert 0.0 < sup.outbreak_mean_final_fraction <= 1.0

    def test_rejects_nonpositive_factor(self):
        with pytest.raises(ValueError):
            quiet(threshold_scan, small_config(), [0.0], runs=1)

    def test_no_outbreaks_gives_nan(self):
        cfg = small_config(n=300, delta=4.0, t_end=0.5, initial_infected=1)
        points = quiet(threshold_scan, cfg, [0.1], runs=3, seed_base=23)
        assert points[0].outbreak_probability == 0.0
        assert math.isnan(points[0].outbreak_mean_final_fraction)


class TestProfileRatio:
    def test_entry_acceptance_route(self):
        cfg = small_config(n=400, t_end=0.5)
        result = quiet(profile_ratio_experiment, cfg, runs=1, seed_base=31,
                       min_entries=20_000)
        assert result.n_entries >= 20_000
        assert result.expected == pytest.approx(math.pi / 4.0)
        # ~0.4% standard error at 2e4 entries; allow 3%
        assert result.entry_acceptance_ratio == \
            pytest.approx(math.pi / 4.0, rel=0.03)
