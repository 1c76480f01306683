import math

import numpy as np
import pytest
from scipy.optimize import least_squares

from photonmix.analytic import DelayModel, k_of_delay
from photonmix.estimators import (
    GaussianFit,
    UndefinedEstimateError,
    estimate_g2,
    estimate_k,
    fit_gaussian,
)
from photonmix.montecarlo import CountRecord


class TestEstimateG2:
    def test_arithmetic_identity(self):
        rec = CountRecord(10**6, 10**3, 10**3, 1)
        assert estimate_g2(rec).value == pytest.approx(1.0, rel=1e-15)

    def test_zero_triples_reports_one_sided_scale(self):
        rec = CountRecord(10**6, 10**3, 10**3, 0)
        est = estimate_g2(rec)
        assert est.value == 0.0
        assert est.std_error == pytest.approx(1.0, rel=1e-12)  # one-count scale

    def test_dominant_error_term(self):
        rec = CountRecord(10**6, 10**3, 10**3, 2)
        est = estimate_g2(rec)
        assert est.value == pytest.approx(2.0, rel=1e-15)
        assert est.std_error == pytest.approx(2.0 / math.sqrt(2.0), rel=5e-3)

    def test_delta_method_against_bootstrap(self):
        rec = CountRecord(10**6, 2000, 1900, 25)
        est = estimate_g2(rec)
        rng = np.random.default_rng(17)
        trials = 40_000
        na = rng.poisson(rec.n_a, trials)
        n1 = rng.poisson(rec.n_ab1, trials)
        n2 = rng.poisson(rec.n_ab2, trials)
        n3 = rng.poisson(rec.n_ab1b2, trials)
        ok = (na > 0) & (n1 > 0) & (n2 > 0)
        vals = n3[ok] * na[ok] / (n1[ok] * n2[ok])
        assert est.std_error == pytest.approx(vals.std(ddof=1), rel=0.1)

    def test_scale_invariance(self):
        rec = CountRecord(10**6, 2000, 1900, 25)
        big = CountRecord(16 * 10**6, 16 * 2000, 16 * 1900, 16 * 25)
        a, b = estimate_g2(rec), estimate_g2(big)
        assert b.value == pytest.approx(a.value, rel=1e-12)
        assert b.std_error == pytest.approx(a.std_error / 4.0, rel=1e-6)

    def test_zero_denominator_rejected(self):
        with pytest.raises(UndefinedEstimateError):
            estimate_g2(CountRecord(10, 0, 5, 0))
        with pytest.raises(UndefinedEstimateError):
            estimate_g2(CountRecord(0, 0, 0, 0))


class TestEstimateK:
    def test_measured_value(self):
        est = estimate_k(93, 50)
        assert est.value == pytest.approx(0.86, abs=1e-12)

    def test_no_enhancement(self):
        assert estimate_k(100, 100).value == 0.0

    def test_perfect_bunching_ceiling(self):
        assert estimate_k(200, 100).value == pytest.approx(1.0, abs=1e-12)

    def test_identity_for_any_count(self):
        for x in (1, 7, 5000):
            assert estimate_k(x, x).value == 0.0

    def test_poisson_propagation(self):
        est = estimate_k(93, 50)
        assert est.std_error == pytest.approx(
            math.sqrt(93 / 50**2 + 93**2 / 50**3), rel=1e-12
        )

    def test_zero_reference_rejected(self):
        with pytest.raises(UndefinedEstimateError):
            estimate_k(10, 0)


def synth_points(model, taus, sigma, rng=None):
    pts = []
    for t in taus:
        v = k_of_delay(model, float(t))
        if rng is not None:
            v = v + rng.normal(0.0, sigma)
        pts.append((float(t), v, sigma))
    return pts


class TestFitGaussian:
    MODEL = DelayModel(k_peak=0.86, tau0=425.1, center=0.0)
    TAUS = np.linspace(-1000.0, 1000.0, 21)

    def test_noiseless_round_trip(self):
        pts = synth_points(self.MODEL, self.TAUS, sigma=1.0)
        fit = fit_gaussian(pts)
        assert fit.converged
        assert fit.k_hat == pytest.approx(0.86, rel=1e-6)
        assert fit.tau0_hat == pytest.approx(425.1, rel=1e-6)
        assert fit.center_hat == pytest.approx(0.0, abs=1e-3)

    def test_noiseless_off_center(self):
        model = DelayModel(k_peak=0.6, tau0=300.0, center=120.0)
        pts = synth_points(model, np.linspace(-900, 1100, 25), sigma=0.5)
        fit = fit_gaussian(pts)
        assert fit.converged
        assert fit.k_hat == pytest.approx(0.6, rel=1e-6)
        assert fit.tau0_hat == pytest.approx(300.0, rel=1e-6)
        assert fit.center_hat == pytest.approx(120.0, abs=1e-3)

    def test_center_fixed_mode(self):
        pts = synth_points(self.MODEL, self.TAUS, sigma=1.0)
        fit = fit_gaussian(pts, fix_center=0.0)
        assert fit.converged
        assert fit.center_hat == 0.0
        assert fit.k_hat == pytest.approx(0.86, rel=1e-6)
        assert fit.tau0_hat == pytest.approx(425.1, rel=1e-6)
        assert np.all(fit.covariance[2, :] == 0.0)

    def test_matches_scipy_reference(self):
        rng = np.random.default_rng(4)
        pts = synth_points(self.MODEL, self.TAUS, sigma=0.02, rng=rng)
        fit = fit_gaussian(pts)
        tau = np.array([p[0] for p in pts])
        y = np.array([p[1] for p in pts])

        def resid(theta):
            k, tau0, c = theta
            return (y - k * np.exp(-(((tau - c) / tau0) ** 2))) / 0.02

        ref = least_squares(resid, x0=[0.8, 400.0, 10.0], method="lm")
        assert fit.k_hat == pytest.approx(ref.x[0], rel=1e-6)
        assert fit.tau0_hat == pytest.approx(abs(ref.x[1]), rel=1e-6)
        assert fit.center_hat == pytest.approx(ref.x[2], abs=1e-3)

    def test_cost_history_is_monotone(self):
        rng = np.random.default_rng(9)
        pts = synth_points(self.MODEL, self.TAUS, sigma=0.05, rng=rng)
        fit = fit_gaussian(pts)
        hist = fit.cost_history
        assert len(hist) >= 2
        assert all(b < a for a, b in zip(hist[:-1], hist[1:]))

    def test_covariance_is_symmetric_psd(self):
        rng = np.random.default_rng(21)
        pts = synth_points(self.MODEL, self.TAUS, sigma=0.02, rng=rng)
        fit = fit_gaussian(pts)
        cov = fit.covariance
        assert np.allclose(cov, cov.T, atol=1e-12)
        assert np.linalg.eigvalsh(cov).min() >= -1e-12

    def test_one_sigma_coverage(self):
        # with 2% noise the 1-sigma interval from the normal matrix should
        # cover the truth at a roughly nominal rate for every parameter
        rng = np.random.default_rng(123)
        hits = np.zeros(3)
        trials = 100
        truth = np.array([0.86, 425.1, 0.0])
        for _ in range(trials):
            pts = synth_points(self.MODEL, self.TAUS, sigma=0.02, rng=rng)
            fit = fit_gaussian(pts)
            est = np.array([fit.k_hat, fit.tau0_hat, fit.center_hat])
            err = np.sqrt(np.diag(fit.covariance))
            hits += (np.abs(est - truth) <= err).astype(float)
        for rate in hits / trials:
            assert 0.55 <= rate <= 0.80

    def test_flat_data_flagged(self):
        pts = [(float(t), 0.4, 0.01) for t in self.TAUS]
        fit = fit_gaussian(pts)
        assert not fit.converged

    def test_degenerate_delays_rejected(self):
        pts = [(0.0, 0.5, 0.01)] * 6
        with pytest.raises(ValueError):
            fit_gaussian(pts)

    def test_too_few_points_rejected(self):
        pts = synth_points(self.MODEL, [-100.0, 0.0, 100.0], sigma=1.0)
        with pytest.raises(ValueError):
            fit_gaussian(pts)

    def test_nonpositive_sigma_rejected(self):
        pts = [(t, 0.5, 0.0) for t in (-1.0, 0.0, 1.0, 2.0)]
        with pytest.raises(ValueError):
            fit_gaussian(pts)

    def test_result_type(self):
        pts = synth_points(self.MODEL, self.TAUS, sigma=1.0)
        fit = fit_gaussian(pts)
        assert isinstance(fit, GaussianFit)
        assert fit.tau0_hat > 0
        assert fit.residual_norm >= 0.0
