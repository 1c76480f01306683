"""Builders for the sweep tables behind the canonical figure presets."""

from __future__ import annotations

import math

from . import presets
from .analytic import DelayModel, SourceParams, g2_partial, k_of_delay
from .estimators import estimate_g2, estimate_k, fit_gaussian
from .montecarlo import (
    RunConfig,
    child_seed,
    click_probabilities,
    run_delay_scan,
    run_hbt,
)
from .oracle import PartialStateSpec, photon_number_distribution
from .sweep import SweepTable

__all__ = ["delay_scan_result", "build_figure_table"]


def _mc_estimate(r, k, eta, n_max, pulses, seed, sampler):
    spec = PartialStateSpec(SourceParams(eta=eta, alpha_sq=r * eta), k=k, n_max=n_max)
    rec = run_hbt(RunConfig(spec=spec, pulses=pulses, seed=seed, sampler=sampler))
    return rec, estimate_g2(rec)


def delay_scan_result(
    delays,
    model: DelayModel,
    eta: float,
    alpha_sq: float,
    pulses: int,
    seed: int,
    n_max: int = presets.DEFAULT_N_MAX,
    sampler: str = "aggregate",
    method: str = "montecarlo",
):
    """Scan overlap versus delay, estimate k per point and fit the Gaussian.

    Far-delay points (|tau - center| > 5 tau0) provide the baseline triple
    rate; the scan fails if none are present.  Returns (table, fit_summary).
    """
    delays = sorted(float(t) for t in delays)
    if not delays:
        raise ValueError("no delays given")
    far = [t for t in delays if abs(t - model.center) > 5.0 * model.tau0]

    if method == "analytic":
        spec0 = PartialStateSpec(
            SourceParams(eta=eta, alpha_sq=alpha_sq), k=0.0, n_max=n_max
        )
        table = SweepTable(["tau_fs", "k_model", "triple_prob", "g2"])
        points = []
        for tau in delays:
            k = k_of_delay(model, tau)
            p = photon_number_distribution(
                PartialStateSpec(SourceParams(eta=eta, alpha_sq=alpha_sq), k=k, n_max=n_max)
            )
            _, _, p12 = click_probabilities(p, RunConfig(spec0, 1, 0).detectors)
            r = alpha_sq / eta
            table.add(tau_fs=tau, k_model=k, triple_prob=p12, g2=g2_partial(r, k))
            points.append((tau, k, 1.0))
        fit = fit_gaussian(points)
        summary = _fit_summary(fit, far_reference=None, n_far=len(far))
        return table, summary

    if not far:
        raise ValueError(
            "insufficient far-delay reference points: need |tau - center| > 5*tau0"
        )
    base_spec = PartialStateSpec(
        SourceParams(eta=eta, alpha_sq=alpha_sq), k=0.0, n_max=n_max
    )
    base = RunConfig(spec=base_spec, pulses=pulses, seed=seed, sampler=sampler)
    scan = run_delay_scan(base, delays, model)
    triples = {tau: rec.n_ab1b2 for tau, rec in scan}
    reference = sum(triples[t] for t in far) / len(far)
    if reference <= 0:
        raise ValueError("far-delay reference registered no triple coincidences")
    sigma_floor = estimate_k(1.0, reference).std_error

    table = SweepTable(
        [
            "tau_fs",
            "k_model",
            "n_a",
            "n_ab1",
            "n_ab2",
            "n_ab1b2",
            "k_hat",
            "k_hat_err",
            "g2_mc",
            "g2_mc_err",
        ]
    )
    points = []
    for tau, rec in scan:
        k_est = estimate_k(rec.n_ab1b2, reference)
        g2 = estimate_g2(rec)
        sigma = max(k_est.std_error, sigma_floor)
        table.add(
            tau_fs=tau,
            k_model=k_of_delay(model, tau),
            n_a=rec.n_a,
            n_ab1=rec.n_ab1,
            n_ab2=rec.n_ab2,
            n_ab1b2=rec.n_ab1b2,
            k_hat=k_est.value,
            k_hat_err=sigma,
            g2_mc=g2.value,
            g2_mc_err=g2.std_error,
        )
        points.append((tau, k_est.value, sigma))
    fit = fit_gaussian(points)
    summary = _fit_summary(fit, far_reference=reference, n_far=len(far))
    return table, summary


def _fit_summary(fit, far_reference, n_far):
    err = [math.sqrt(max(fit.covariance[i, i], 0.0)) for i in range(3)]
    return {
        "k_hat": fit.k_hat,
        "tau0_hat": fit.tau0_hat,
        "center_hat": fit.center_hat,
        "k_err": err[0],
        "tau0_err": err[1],
        "center_err": err[2],
        "converged": fit.converged,
        "residual_norm": fit.residual_norm,
        "far_reference_mean": far_reference,
        "n_far_points": n_far,
    }


def _fig1():
    table = SweepTable(["r", "k", "g2"])
    for r in presets.FIG1_R:
        for k in presets.FIG1_K:
            table.add(r=r, k=k, g2=g2_partial(r, k))
    return table, {}


def _fig3(seed):
    model = DelayModel(
        k_peak=presets.SCAN_K_PEAK,
        tau0=presets.SCAN_TAU0_FS,
        center=presets.SCAN_CENTER_FS,
    )
    inner, summary = delay_scan_result(
        presets.scan_delays(),
        model,
        eta=presets.SCAN_ETA,
        alpha_sq=presets.SCAN_ALPHA_SQ,
        pulses=presets.SCAN_PULSES,
        seed=seed,
        sampler="aggregate",
    )
    table = SweepTable(
        ["tau_fs", "n_ab1b2", "n_err", "k_hat", "k_hat_err", "triples_fit"]
    )
    ref = summary["far_reference_mean"]
    for row in inner.rows:
        tau = row["tau_fs"]
        u = (tau - summary["center_hat"]) / summary["tau0_hat"]
        fit_curve = ref * (1.0 + summary["k_hat"] * math.exp(-u * u))
        table.add(
            tau_fs=tau,
            n_ab1b2=row["n_ab1b2"],
            n_err=math.sqrt(row["n_ab1b2"]) if row["n_ab1b2"] > 0 else 1.0,
            k_hat=row["k_hat"],
            k_hat_err=row["k_hat_err"],
            triples_fit=fit_curve,
        )
    return table, {"fit": summary, "delay_model": {
        "k_peak": model.k_peak, "tau0": model.tau0, "center": model.center}}


def _fig4(seed):
    model = DelayModel(
        k_peak=presets.SCAN_K_PEAK,
        tau0=presets.SCAN_TAU0_FS,
        center=presets.SCAN_CENTER_FS,
    )
    table = SweepTable(
        ["r", "tau_fs", "k", "g2_analytic", "g2_mc", "g2_mc_err"]
    )
    index = 0
    for r in presets.FIG4_R:
        for tau in presets.FIG4_DELAYS:
            k = k_of_delay(model, tau)
            rec, est = _mc_estimate(
                r,
                k,
                presets.DEFAULT_ETA,
                presets.DEFAULT_N_MAX,
                presets.FIG4_PULSES,
                child_seed(seed, index),
                "aggregate",
            )
            table.add(
                r=r,
                tau_fs=tau,
                k=k,
                g2_analytic=g2_partial(r, k),
                g2_mc=est.value,
                g2_mc_err=est.std_error,
            )
            index += 1
    return table, {}


def _fig5(seed, axis):
    if axis == "a":
        pairs = [(r, k) for k in presets.FIG5A_K for r in presets.FIG5A_R]
        columns = ["k", "r", "g2_analytic", "g2_mc", "g2_mc_err"]
        pulses = presets.FIG5A_PULSES
    else:
        pairs = [(r, k) for r in presets.FIG5B_R for k in presets.FIG5B_K]
        columns = ["r", "k", "g2_analytic", "g2_mc", "g2_mc_err"]
        pulses = presets.FIG5B_PULSES
    table = SweepTable(columns)
    for index, (r, k) in enumerate(pairs):
        rec, est = _mc_estimate(
            r,
            k,
            presets.DEFAULT_ETA,
            presets.DEFAULT_N_MAX,
            pulses,
            child_seed(seed, index),
            "aggregate",
        )
        table.add(
            r=r,
            k=k,
            g2_analytic=g2_partial(r, k),
            g2_mc=est.value,
            g2_mc_err=est.std_error,
        )
    return table, {}


def build_figure_table(figure_id: str, seed: int):
    """Build the (table, manifest_extras) pair for one figure preset."""
    if figure_id == "fig1":
        return _fig1()
    if figure_id == "fig3":
        return _fig3(seed)
    if figure_id == "fig4":
        return _fig4(seed)
    if figure_id == "fig5a":
        return _fig5(seed, "a")
    if figure_id == "fig5b":
        return _fig5(seed, "b")
    raise ValueError(f"unknown figure id {figure_id!r}")
