import numpy as np
import pytest

from itsa.arma import ar1, arma11, iid, unconstrain
from itsa.design import build_design
from itsa.estimation import (
    FitResult,
    fit_gls,
    fit_gls_ml,
    fit_ols,
    hac_se,
    least_squares,
    p_value,
    profile_log_likelihood,
)
from itsa.exceptions import ConfigError, SingularDesignError
from itsa.simulate import SimulationSpec, gen_its_dataset


def sim_design(beta=(1.0, 0.5, -2.0, 0.3), error=None, seed=0, n=39, iv=26):
    spec = SimulationSpec(
        n=n, intervention_index=iv, beta=beta,
        error=error if error is not None else iid(1.0), seed=seed,
    )
    return build_design(gen_its_dataset(spec), "y", spec.intervention_spec())


class TestOLS:
    def test_noiseless_trend_interpolated(self):
        # y = 2 + 3T with no intervention effect
        design = sim_design(beta=(2.0, 3.0, 0.0, 0.0), error=iid(0.0))
        fit = fit_ols(design)
        np.testing.assert_allclose(fit.beta, [2.0, 3.0, 0.0, 0.0], atol=1e-9)

    def test_intercept_only_recovers_mean(self):
        X = np.ones((5, 1))
        y = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        beta, rss, cov = least_squares(X, y)
        assert beta[0] == pytest.approx(3.0, abs=1e-12)

    def test_hand_dataset_matches_normal_equations(self):
        t = np.arange(1, 9, dtype=float)
        x = (t >= 5).astype(float)
        s = np.where(x > 0, t - 4, 0.0)
        X = np.column_stack([np.ones(8), t, x, x * s])
        y = np.array([3.1, 4.9, 7.2, 8.8, 6.0, 6.9, 8.1, 8.7])
        # frozen solution of the 4x4 normal equations (X'X) b = X'y,
        # computed independently by a dense linear solve
        frozen = np.array([1.15, 1.94, -3.81, -1.01])
        oracle = np.linalg.solve(X.T @ X, X.T @ y)
        np.testing.assert_allclose(oracle, frozen, atol=1e-12)
        beta, _, _ = least_squares(X, y)
        np.testing.assert_allclose(beta, oracle, atol=1e-9)

    def test_residuals_orthogonal_to_design(self):
        for seed in range(5):
            design = sim_design(error=iid(2.0), seed=seed)
            fit = fit_ols(design)
            bound = 1e-8 * np.linalg.norm(design.response)
            assert np.all(np.abs(design.matrix.T @ fit.residuals_raw) <= bound)

    def test_rank_deficiency_rejected(self):
        X = np.ones((10, 2))
        with pytest.raises(SingularDesignError):
            least_squares(X, np.arange(10.0))

    def test_sigma2_unbiased_convention(self):
        design = sim_design(error=iid(4.0), seed=1)
        fit = fit_ols(design)
        rss = float(fit.residuals_raw @ fit.residuals_raw)
        assert fit.sigma2 == pytest.approx(rss / (design.n - 4), rel=1e-12)
        assert fit.df == design.n - 4

    def test_t_stats_identity(self):
        fit = fit_ols(sim_design(error=iid(1.0), seed=2))
        mask = fit.se > 0
        np.testing.assert_allclose(
            fit.t_stats[mask], fit.beta[mask] / fit.se[mask], rtol=1e-12
        )


class TestGLS:
    def test_iid_correlation_reproduces_ols_beta(self):
        design = sim_design(error=ar1(0.5, 1.0), seed=3)
        f_ols = fit_ols(design)
        f_gls = fit_gls(design, iid(1.0))
        np.testing.assert_allclose(f_gls.beta, f_ols.beta, rtol=1e-10)
        # documented variance-convention gap: ML (RSS/n) vs unbiased (RSS/df)
        np.testing.assert_allclose(
            f_gls.se * np.sqrt(design.n / (design.n - 4.0)), f_ols.se, rtol=1e-10
        )

    def test_known_phi_se_larger_for_trend_under_autocorrelation(self):
        model = ar1(0.9, 1.0)
        bigger = 0
        for r in range(1000):
            design = sim_design(error=model, seed=606 ^ r)
            bigger += fit_gls(design, model).se[1] > fit_ols(design).se[1]
        assert bigger >= 950

    def test_whitened_residuals_pass_ljung_box(self):
        from itsa.diagnostics import ljung_box

        model = ar1(0.6, 1.0)
        passed = 0
        for r in range(500):
            design = sim_design(error=model, seed=11 ^ r)
            fit = fit_gls(design, model)
            passed += ljung_box(fit.residuals_whitened, 10).p_value > 0.05
        assert passed >= 450

    def test_raw_residuals_match_definition(self):
        design = sim_design(error=ar1(0.4, 1.0), seed=4)
        fit = fit_gls(design, ar1(0.4, 1.0))
        np.testing.assert_allclose(
            fit.residuals_raw, design.response - design.matrix @ fit.beta, atol=1e-12
        )

    def test_innovation_variance_rescaled_from_process_variance(self):
        model = ar1(0.6, 1.0)
        design = sim_design(error=model, seed=5)
        fit = fit_gls(design, model)
        rss_w = float(fit.residuals_whitened @ fit.residuals_whitened)
        assert fit.sigma2 == pytest.approx((rss_w / design.n) * (1 - 0.6**2), rel=1e-10)


class TestGLSML:
    def test_iid_data_recovers_small_phi(self):
        # n=39 sampling spread keeps the ML estimate within +-0.35 of zero
        for r in range(10):
            design = sim_design(
                beta=(5.0, 1.0, -3.0, 0.4), error=iid(1.0), seed=2020 ^ r
            )
            fit = fit_gls_ml(design, "ar1")
            assert abs(fit.error_params.phi) <= 0.35
            assert fit.log_lik >= profile_log_likelihood(design, "ar1", [0.0]) - 1e-12

    def test_consistency_phi_0_6_n_500(self):
        hits = 0
        for r in range(200):
            design = sim_design(
                beta=(10.0, 0.2, -5.0, 0.1), error=ar1(0.6, 1.0),
                seed=909 ^ r, n=500, iv=251,
            )
            hits += 0.5 < fit_gls_ml(design, "ar1").error_params.phi < 0.7
        assert hits >= 190

    def test_optimum_dominates_random_parameter_points(self):
        rng = np.random.default_rng(77)
        design = sim_design(error=ar1(0.5, 1.0), seed=6)
        fit = fit_gls_ml(design, "ar1")
        for _ in range(20):
            u = unconstrain(rng.uniform(-0.95, 0.95))
            assert fit.log_lik >= profile_log_likelihood(design, "ar1", [u]) - 1e-9

    def test_interior_gradient_vanishes(self):
        design = sim_design(error=ar1(0.5, 1.0), seed=7)
        fit = fit_gls_ml(design, "ar1")
        assert not fit.boundary
        u = unconstrain(fit.error_params.phi)
        h = 1e-4
        grad = (
            profile_log_likelihood(design, "ar1", [u + h])
            - profile_log_likelihood(design, "ar1", [u - h])
        ) / (2 * h)
        assert abs(grad) <= 1e-3

    def test_arma11_fit_dominates_truth(self):
        model = arma11(0.5, 0.3, 1.0)
        design = sim_design(error=model, seed=8, n=200, iv=101)
        fit = fit_gls_ml(design, "arma11")
        u_true = [unconstrain(0.5), unconstrain(0.3)]
        assert fit.log_lik >= profile_log_likelihood(design, "arma11", u_true) - 1e-6
        assert fit.error_params is not None

    def test_unsupported_kind_rejected(self):
        with pytest.raises(ConfigError):
            fit_gls_ml(sim_design(), kind="iid")

    def test_nonconvergence_raises_with_best_iterate(self, monkeypatch):
        import itsa.estimation as est
        from itsa.exceptions import ConvergenceError

        real = est.minimize

        def never_converges(*args, **kwargs):
            res = real(*args, **kwargs)
            res.success = False
            return res

        monkeypatch.setattr(est, "minimize", never_converges)
        design = sim_design(error=ar1(0.5, 1.0), seed=21)
        with pytest.raises(ConvergenceError) as excinfo:
            fit_gls_ml(design, "ar1")
        best = excinfo.value.best_result
        assert best is not None and abs(best.error_params.phi) < 1

    def test_method_and_loglik_consistent_with_fixed_fit(self):
        design = sim_design(error=ar1(0.5, 1.0), seed=9)
        fit = fit_gls_ml(design, "ar1")
        fixed = fit_gls(design, ar1(fit.error_params.phi, 1.0))
        assert fit.method == "gls-ml"
        np.testing.assert_allclose(fit.beta, fixed.beta, rtol=1e-12)
        assert fit.log_lik == pytest.approx(fixed.log_lik, abs=1e-7)


class TestHAC:
    def test_bandwidth_zero_equals_white(self):
        design = sim_design(error=iid(1.0), seed=10)
        fit = fit_ols(design)
        X, e = design.matrix, fit.residuals_raw
        gram_inv = np.linalg.inv(X.T @ X)  # test-side oracle; fine to invert here
        white = np.sqrt(np.diag(gram_inv @ (X * e[:, None] ** 2).T @ X @ gram_inv))
        np.testing.assert_allclose(hac_se(fit, 0), white, rtol=1e-10)

    def test_iid_data_hac_close_to_ols(self):
        gaps = []
        for r in range(500):
            design = sim_design(
                beta=(1.0, 0.2, -1.0, 0.1), error=iid(1.0), seed=321 ^ r,
                n=200, iv=101,
            )
            fit = fit_ols(design)
            gaps.append(np.abs(hac_se(fit) - fit.se) / fit.se)
        assert np.all(np.median(np.array(gaps), axis=0) < 0.25)

    def test_ar1_data_hac_exceeds_naive_for_trend(self):
        count = 0
        for r in range(500):
            design = sim_design(
                beta=(1.0, 0.2, -1.0, 0.1), error=ar1(0.6, 1.0), seed=654 ^ r,
                n=200, iv=101,
            )
            fit = fit_ols(design)
            count += hac_se(fit)[1] > fit.se[1]
        assert count >= 450

    def test_auto_bandwidth_rule(self):
        design = sim_design(n=100, iv=51, error=iid(1.0), seed=11)
        fit = fit_ols(design)
        # floor(4 * (100/100)^(2/9)) = 4: manual bandwidth must agree
        np.testing.assert_allclose(hac_se(fit), hac_se(fit, 4), rtol=1e-14)

    def test_bandwidth_bounds(self):
        fit = fit_ols(sim_design(error=iid(1.0), seed=12))
        with pytest.raises(ConfigError):
            hac_se(fit, 39)
        with pytest.raises(ConfigError):
            hac_se(fit, -1)

    def test_requires_ols(self):
        design = sim_design(error=ar1(0.5, 1.0), seed=13)
        with pytest.raises(ConfigError):
            hac_se(fit_gls(design, ar1(0.5, 1.0)))


class TestPValue:
    def test_zero_statistic_gives_one(self):
        assert p_value(0.0, 7) == 1.0

    def test_large_statistic_reproduces_stars(self):
        assert p_value(16.199, 35) < 1e-10

    def test_quadrature_cross_check(self):
        # two-sided tail for t=2.030, df=35 integrated numerically (frozen)
        assert p_value(2.030, 35) == pytest.approx(0.05001152910144514, abs=1e-10)
        assert abs(p_value(2.030, 35) - 0.05) <= 0.002

    def test_monotone_decreasing_in_magnitude(self):
        ts = np.linspace(0, 10, 101)
        ps = p_value(ts, 35)
        assert np.all(np.diff(ps) < 0)

    def test_symmetric(self):
        assert p_value(-2.5, 10) == pytest.approx(p_value(2.5, 10), rel=1e-14)

    def test_infinite_statistic(self):
        assert p_value(np.inf, 5) == 0.0

    def test_df_must_be_positive(self):
        with pytest.raises(ConfigError):
            p_value(1.0, 0)


def test_parallel_fits_match_serial_fits():
    # fits share no mutable state; concurrent execution is bit-identical
    from concurrent.futures import ThreadPoolExecutor

    designs = [sim_design(error=ar1(0.5, 1.0), seed=s) for s in range(8)]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda d: fit_gls_ml(d, "ar1"), designs))
    for design, fit in zip(designs, parallel):
        again = fit_gls_ml(design, "ar1")
        np.testing.assert_array_equal(fit.beta, again.beta)
        assert fit.log_lik == again.log_lik


def test_from_coefficients_carries_beta_only():
    fit = FitResult.from_coefficients((1.0, 2.0, 3.0, 4.0))
    np.testing.assert_array_equal(fit.beta, [1.0, 2.0, 3.0, 4.0])
    assert np.all(np.isnan(fit.se))
    with pytest.raises(ConfigError):
        FitResult.from_coefficients((1.0, 2.0))
