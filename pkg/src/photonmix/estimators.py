"""Estimators that turn coincidence tallies into physics.

Covers the heralded-HBT g2 estimator with delta-method uncertainty, the
overlap estimator built from the triple-coincidence enhancement, and a
weighted Gaussian peak fit for overlap-vs-delay scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .montecarlo import CountRecord

__all__ = [
    "UndefinedEstimateError",
    "G2Estimate",
    "KEstimate",
    "GaussianFit",
    "estimate_g2",
    "estimate_k",
    "fit_gaussian",
]


class UndefinedEstimateError(Exception):
    """An estimator's denominator vanished; no value can be reported."""


@dataclass(frozen=True)
class G2Estimate:
    value: float
    std_error: float


@dataclass(frozen=True)
class KEstimate:
    value: float
    std_error: float


@dataclass(frozen=True)
class GaussianFit:
    """Result of fitting k(tau) = k * exp(-((tau - center)/tau0)^2)."""

    k_hat: float
    tau0_hat: float
    center_hat: float
    covariance: np.ndarray  # 3x3, parameter order (k, tau0, center)
    residual_norm: float
    converged: bool
    cost_history: list = field(default_factory=list, repr=False)


def estimate_g2(record: CountRecord) -> G2Estimate:
    """g2(0) = N_ab1b2 * N_a / (N_ab1 * N_ab2) with Poisson error propagation.

    The reported standard error treats the four tallies as independent
    Poisson counts; the triple count dominates in all weak-field regimes.
    A run with zero triples reports value 0 with the one-count upper scale
    as a one-sided error bar.
    """
    if record.n_a <= 0 or record.n_ab1 <= 0 or record.n_ab2 <= 0:
        raise UndefinedEstimateError(
            f"need positive n_a, n_ab1, n_ab2; got {record}"
        )
    scale = record.n_a / (record.n_ab1 * record.n_ab2)
    if record.n_ab1b2 == 0:
        return G2Estimate(value=0.0, std_error=scale)
    value = record.n_ab1b2 * scale
    rel_var = (
        1.0 / record.n_ab1b2
        + 1.0 / record.n_ab1
        + 1.0 / record.n_ab2
        + 1.0 / record.n_a
    )
    return G2Estimate(value=value, std_error=value * math.sqrt(rel_var))


def estimate_k(n_zero: float, n_far: float) -> KEstimate:
    """Overlap from the zero-delay triple-count enhancement: n0/nfar - 1.

    ``n_far`` may be a mean over several far-delay reference points.
    Uncertainty from Poisson propagation on both counts.
    """
    if n_far <= 0:
        raise UndefinedEstimateError("far-delay reference count must be positive")
    if n_zero < 0:
        raise ValueError("counts must be nonnegative")
    value = n_zero / n_far - 1.0
    var = n_zero / n_far ** 2 + n_zero ** 2 / n_far ** 3
    return KEstimate(value=value, std_error=math.sqrt(var))


_MAX_ITER = 200
_LAMBDA0 = 1e-3
_LAMBDA_STEP = 3.0


def _model_and_jacobian(theta, tau, fixed_center):
    k, tau0, center = theta
    u = (tau - center) / tau0
    e = np.exp(-u * u)
    m = k * e
    jac = np.empty((tau.size, 3))
    jac[:, 0] = e
    jac[:, 1] = m * 2.0 * u * u / tau0
    jac[:, 2] = m * 2.0 * u / tau0
    if fixed_center:
        jac[:, 2] = 0.0
    return m, jac


def _initial_guess(tau, y):
    k0 = float(y.max() - y.min())
    c0 = float(tau[int(np.argmax(y))])  # tau is sorted, ties pick smallest
    span = float(tau.max() - tau.min())
    half = y.min() + k0 / 2.0
    above = tau[y >= half]
    width = float(above.max() - above.min()) if above.size else 0.0
    if width <= 0.0:
        width = span / 4.0
    tau0 = max(width / (2.0 * math.sqrt(math.log(2.0))), 1e-9 * span)
    return np.array([k0, tau0, c0]), span


def fit_gaussian(points, fix_center: float | None = None) -> GaussianFit:
    """Weighted least-squares Gaussian peak fit by damped Gauss-Newton.

    ``points`` is a sequence of (tau_fs, k_hat, sigma) triples with sigma > 0.
    Pass ``fix_center`` to freeze the peak position and fit only the height
    and width.  The returned covariance comes from the normal matrix at the
    solution (k, tau0, center ordering); ``converged`` is true when the
    gradient norm fell below 1e-10 * (1 + cost) within the iteration budget.
    """
    pts = sorted((float(t), float(v), float(s)) for t, v, s in points)
    n_free = 2 if fix_center is not None else 3
    if len(pts) < n_free + 1:
        raise ValueError(f"need at least {n_free + 1} points, got {len(pts)}")
    tau = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    sigma = np.array([p[2] for p in pts])
    if np.any(sigma <= 0):
        raise ValueError("all point uncertainties must be positive")
    if tau.max() == tau.min():
        raise ValueError("degenerate scan: all delays are equal")

    theta, span = _initial_guess(tau, y)
    if fix_center is not None:
        theta[2] = fix_center
    tau0_cap = 1e3 * span

    fixed = fix_center is not None

    def evaluate(th):
        m, jac = _model_and_jacobian(th, tau, fixed)
        r = (y - m) / sigma
        jw = jac / sigma[:, None]
        cost = float(r @ r)
        grad = jw.T @ r
        return cost, grad, jw

    cost, grad, jw = evaluate(theta)
    history = [cost]
    lam = _LAMBDA0
    converged = False
    hit_cap = False
    for _ in range(_MAX_ITER):
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < 1e-10 * (1.0 + cost):
            converged = True
            break
        jtj = jw.T @ jw
        accepted = False
        for _ in range(60):
            damp = lam * np.diag(np.maximum(np.diag(jtj), 1e-30))
            try:
                delta = np.linalg.solve(jtj + damp, grad)
            except np.linalg.LinAlgError:
                delta = np.linalg.lstsq(jtj + damp, grad, rcond=None)[0]
            trial = theta + delta
            trial[1] = min(abs(trial[1]), tau0_cap)
            trial[1] = max(trial[1], 1e-9 * span)
            if fixed:
                trial[2] = fix_center
            trial_cost, trial_grad, trial_jw = evaluate(trial)
            # Strict cost decrease, or, once the cost has hit its float
            # resolution plateau, a strictly smaller gradient: the second
            # clause lets Gauss-Newton refinement reach the gradient
            # criterion without ever increasing the recorded objective.
            plateau_ok = (
                trial_cost <= cost * (1.0 + 1e-14)
                and float(np.linalg.norm(trial_grad)) < 0.5 * grad_norm
            )
            if trial_cost < cost or plateau_ok:
                if trial_cost < cost:
                    history.append(trial_cost)
                    cost = trial_cost
                theta = trial
                grad, jw = trial_grad, trial_jw
                lam = max(lam / _LAMBDA_STEP, 1e-14)
                accepted = True
                break
            lam *= _LAMBDA_STEP
        if not accepted:
            break
        if theta[1] >= 0.99 * tau0_cap:
            hit_cap = True

    if hit_cap:
        converged = False

    cost, _, jw = evaluate(theta)
    jtj = jw.T @ jw
    if fixed:
        sub = jtj[:2, :2]
        try:
            cov2 = np.linalg.inv(sub)
        except np.linalg.LinAlgError:
            cov2 = np.linalg.pinv(sub)
        cov = np.zeros((3, 3))
        cov[:2, :2] = cov2
    else:
        try:
            cov = np.linalg.inv(jtj)
        except np.linalg.LinAlgError:
            cov = np.linalg.pinv(jtj)

    return GaussianFit(
        k_hat=float(theta[0]),
        tau0_hat=float(theta[1]),
        center_hat=float(theta[2]),
        covariance=cov,
        residual_norm=math.sqrt(cost),
        converged=converged,
        cost_history=history,
    )
