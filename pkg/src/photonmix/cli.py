"""Command line front end.

Subcommands: ``eval`` (closed form / oracle grids), ``simulate`` (Monte
Carlo grids), ``delay-scan`` (overlap-vs-delay scan plus Gaussian fit),
``reproduce`` (frozen figure presets) and ``fit`` (Gaussian fit of a
3-column CSV).  Exit codes: 0 success, 2 configuration error, 3 runtime
error (cutoff, undefined estimate, missing reference points).

Configuration is JSON (see README for the grammar); command line flags win
over config-file values.  Relative output paths resolve against the
``PHOTONMIX_OUTDIR`` environment variable when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, presets
from .analytic import DelayModel, SourceParams, g2_partial
from .estimators import UndefinedEstimateError, estimate_g2, fit_gaussian
from .figures import build_figure_table, delay_scan_result
from .fock import CutoffError
from .montecarlo import (
    DetectorConfig,
    RunConfig,
    child_seed,
    run_hbt,
)
from .oracle import PartialStateSpec, g2_oracle
from .sweep import SweepTable, write_manifest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

OUTDIR_ENV = "PHOTONMIX_OUTDIR"

EVAL_METHODS = ("analytic", "oracle")
SIM_METHODS = ("montecarlo", "analytic", "oracle")


class ConfigError(Exception):
    pass


def parse_grid(value):
    """Grid grammar: JSON list, 'a,b,c' values, or 'start:stop:count'."""
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    text = str(value).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ConfigError(f"grid {text!r} has a nonpositive count")
        return np.linspace(start, stop, count).tolist()
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}: {exc}") from None


def parse_methods(value, allowed):
    if value is None:
        return None
    items = value if isinstance(value, (list, tuple)) else str(value).split(",")
    methods = [str(m).strip() for m in items if str(m).strip()]
    bad = [m for m in methods if m not in allowed]
    if bad:
        raise ConfigError(f"unknown method(s) {bad}; allowed: {', '.join(allowed)}")
    if not methods:
        raise ConfigError("at least one method is required")
    return methods


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        ) from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path}: top level must be a JSON object")
    return cfg


def setting(args, cfg, name, default=None):
    """Flag value if given, else config-file value, else default."""
    v = getattr(args, name.replace("-", "_"), None)
    if v is not None:
        return v
    if name in cfg:
        return cfg[name]
    return default


def resolve_out(path, default_name):
    base = Path(os.environ.get(OUTDIR_ENV, "."))
    p = Path(path) if path else Path(default_name)
    return p if p.is_absolute() else base / p


def _versions():
    return {
        "photonmix": __version__,
        "numpy": np.__version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
    }


def _emit(table, out, fmt, manifest):
    out = Path(out)
    table.write(out, fmt)
    manifest = dict(manifest)
    manifest["columns"] = table.columns
    manifest["versions"] = _versions()
    manifest["preset_version"] = presets.PRESET_VERSION
    mpath = out.with_suffix(out.suffix + ".manifest.json")
    write_manifest(mpath, manifest)
    return out, mpath


def eval_table(r_grid, k_grid, methods, eta, n_max):
    columns = ["r", "k"]
    if "analytic" in methods:
        columns.append("g2_analytic")
    if "oracle" in methods:
        columns.append("g2_oracle")
    if "analytic" in methods and "oracle" in methods:
        columns.append("residual")
    table = SweepTable(columns)
    for r in sorted(r_grid):
        for k in sorted(k_grid):
            row = {"r": r, "k": k}
            if "analytic" in methods:
                row["g2_analytic"] = g2_partial(r, k)
            if "oracle" in methods:
                spec = PartialStateSpec(
                    SourceParams(eta=eta, alpha_sq=r * eta), k=k, n_max=n_max
                )
                row["g2_oracle"] = (
                    g2_oracle(spec) if r > 0 or eta > 0 else 0.0
                )
            if "residual" in columns:
                row["residual"] = row["g2_oracle"] - row["g2_analytic"]
            table.add(**row)
    return table


def simulate_table(
    r_grid, k_grid, methods, eta, n_max, pulses, seed, sampler, detectors=None
):
    detectors = detectors or DetectorConfig()
    columns = ["r", "k"]
    if "analytic" in methods:
        columns.append("g2_analytic")
    if "oracle" in methods:
        columns.append("g2_oracle")
    columns += ["g2_mc", "g2_mc_err", "n_a", "n_ab1", "n_ab2", "n_ab1b2"]
    table = SweepTable(columns)
    index = 0
    for r in sorted(r_grid):
        for k in sorted(k_grid):
            spec = PartialStateSpec(
                SourceParams(eta=eta, alpha_sq=r * eta), k=k, n_max=n_max
            )
            rec = run_hbt(
                RunConfig(
                    spec=spec,
                    pulses=pulses,
                    seed=child_seed(seed, index),
                    detectors=detectors,
                    sampler=sampler,
                )
            )
            est = estimate_g2(rec)
            row = {
                "r": r,
                "k": k,
                "g2_mc": est.value,
                "g2_mc_err": est.std_error,
                "n_a": rec.n_a,
                "n_ab1": rec.n_ab1,
                "n_ab2": rec.n_ab2,
                "n_ab1b2": rec.n_ab1b2,
            }
            if "analytic" in methods:
                row["g2_analytic"] = g2_partial(r, k)
            if "oracle" in methods:
                row["g2_oracle"] = g2_oracle(spec)
            table.add(**row)
            index += 1
    return table


def _config_payload(**kv):
    return {k: v for k, v in kv.items() if v is not None}


def cmd_eval(args):
    cfg = load_config(args.config) if args.config else {}
    r_grid = parse_grid(setting(args, cfg, "r"))
    k_grid = parse_grid(setting(args, cfg, "k"))
    if not r_grid or not k_grid:
        raise ConfigError("eval needs nonempty r and k grids")
    methods = parse_methods(
        setting(args, cfg, "method", "analytic,oracle"), SIM_METHODS
    )
    if "montecarlo" in methods:
        raise ConfigError("method montecarlo belongs to the simulate command")
    eta = float(setting(args, cfg, "eta", presets.DEFAULT_ETA))
    n_max = int(setting(args, cfg, "n_max", presets.DEFAULT_N_MAX))
    fmt = setting(args, cfg, "format", "csv")
    table = eval_table(r_grid, k_grid, methods, eta, n_max)
    out = resolve_out(setting(args, cfg, "out"), f"eval.{fmt}")
    _emit(
        table,
        out,
        fmt,
        {
            "command": "eval",
            "config": _config_payload(
                r=r_grid, k=k_grid, method=methods, eta=eta, n_max=n_max, format=fmt
            ),
        },
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_simulate(args):
    cfg = load_config(args.config) if args.config else {}
    r_grid = parse_grid(setting(args, cfg, "r"))
    k_grid = parse_grid(setting(args, cfg, "k"))
    if not r_grid or not k_grid:
        raise ConfigError("simulate needs nonempty r and k grids")
    methods = parse_methods(setting(args, cfg, "method", "montecarlo"), SIM_METHODS)
    if "montecarlo" not in methods:
        methods = ["montecarlo"] + methods
    eta = float(setting(args, cfg, "eta", presets.DEFAULT_ETA))
    n_max = int(setting(args, cfg, "n_max", presets.DEFAULT_N_MAX))
    pulses = int(setting(args, cfg, "pulses", 10**6))
    seed = int(setting(args, cfg, "seed", presets.DEFAULT_SEED))
    sampler = setting(args, cfg, "sampler", "pulse")
    fmt = setting(args, cfg, "format", "csv")
    detectors = DetectorConfig(
        efficiency_b1=float(cfg.get("efficiency_b1", 1.0)),
        efficiency_b2=float(cfg.get("efficiency_b2", 1.0)),
    )
    table = simulate_table(
        r_grid, k_grid, methods, eta, n_max, pulses, seed, sampler, detectors
    )
    out = resolve_out(setting(args, cfg, "out"), f"simulate.{fmt}")
    _emit(
        table,
        out,
        fmt,
        {
            "command": "simulate",
            "config": _config_payload(
                r=r_grid,
                k=k_grid,
                method=methods,
                eta=eta,
                n_max=n_max,
                pulses=pulses,
                seed=seed,
                sampler=sampler,
                format=fmt,
            ),
        },
    )
    print(f"wrote {out}")
    return EXIT_OK


def cmd_delay_scan(args):
    cfg = load_config(args.config) if args.config else {}
    delays = parse_grid(setting(args, cfg, "delays"))
    if delays is None:
        delays = presets.scan_delays()
    model = DelayModel(
        k_peak=float(setting(args, cfg, "k_peak", presets.SCAN_K_PEAK)),
        tau0=float(setting(args, cfg, "tau0", presets.SCAN_TAU0_FS)),
        center=float(setting(args, cfg, "center", presets.SCAN_CENTER_FS)),
    )
    eta = float(setting(args, cfg, "eta", presets.SCAN_ETA))
    alpha_sq = float(setting(args, cfg, "alpha_sq", presets.SCAN_ALPHA_SQ))
    n_max = int(setting(args, cfg, "n_max", presets.DEFAULT_N_MAX))
    pulses = int(setting(args, cfg, "pulses", presets.SCAN_PULSES))
    seed = int(setting(args, cfg, "seed", presets.DEFAULT_SEED))
    sampler = setting(args, cfg, "sampler", "aggregate")
    method = setting(args, cfg, "method", "montecarlo")
    if method not in ("montecarlo", "analytic"):
        raise ConfigError("delay-scan method must be montecarlo or analytic")
    fmt = setting(args, cfg, "format", "csv")
    table, fit = delay_scan_result(
        delays,
        model,
        eta=eta,
        alpha_sq=alpha_sq,
        pulses=pulses,
        seed=seed,
        n_max=n_max,
        sampler=sampler,
        method=method,
    )
    out = resolve_out(setting(args, cfg, "out"), f"delay_scan.{fmt}")
    _emit(
        table,
        out,
        fmt,
        {
            "command": "delay-scan",
            "fit": fit,
            "config": _config_payload(
                delays=delays,
                k_peak=model.k_peak,
                tau0=model.tau0,
                center=model.center,
                eta=eta,
                alpha_sq=alpha_sq,
                n_max=n_max,
                pulses=pulses,
                seed=seed,
                sampler=sampler,
                method=method,
                format=fmt,
            ),
        },
    )
    print(f"wrote {out}")
    print(
        "fit: k={k_hat:.4f}+-{k_err:.4f} tau0={tau0_hat:.1f}+-{tau0_err:.1f} fs "
        "center={center_hat:.1f} fs converged={converged}".format(**fit)
    )
    return EXIT_OK


def cmd_reproduce(args):
    cfg = load_config(args.config) if args.config else {}
    seed = int(setting(args, cfg, "seed", presets.DEFAULT_SEED))
    out_dir = setting(args, cfg, "out_dir")
    base = Path(out_dir) if out_dir else Path(os.environ.get(OUTDIR_ENV, "."))
    table, extra = build_figure_table(args.figure, seed)
    out = base / f"{args.figure}.csv"
    manifest = {
        "command": "reproduce",
        "figure": args.figure,
        "config": _config_payload(seed=seed),
        "rerun": ["reproduce", args.figure, "--seed", str(seed)],
    }
    manifest.update(extra)
    _emit(table, out, "csv", manifest)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_fit(args):
    path = Path(args.data)
    try:
        lines = path.read_text(encoding="utf-8").strip().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    points = []
    for i, line in enumerate(lines):
        parts = [p.strip() for p in line.split(",")]
        if i == 0 and not _is_float(parts[0]):
            expected = ["tau_fs", "k_hat", "k_hat_err"]
            if [p.lower() for p in parts[:3]] != expected:
                raise ConfigError(
                    f"{path}: expected header {','.join(expected)} or bare numbers, "
                    f"got {line!r}"
                )
            continue
        if len(parts) < 3:
            raise ConfigError(f"{path} line {i + 1}: need tau,k,sigma; got {line!r}")
        try:
            points.append((float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError:
            raise ConfigError(f"{path} line {i + 1}: non-numeric field in {line!r}")
    if not points:
        raise ConfigError(f"{path}: no data rows")
    fix_center = None if args.fix_center is None else float(args.fix_center)
    try:
        fit = fit_gaussian(points, fix_center=fix_center)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    from .figures import _fit_summary

    summary = _fit_summary(fit, far_reference=None, n_far=0)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = resolve_out(args.out, "fit.json")
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)
    if not fit.converged:
        return EXIT_RUNTIME
    return EXIT_OK


def _is_float(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def build_parser():
    parser = argparse.ArgumentParser(
        prog="photonmix",
        description=(
            "Photon statistics of a heralded single photon mixed with a weak "
            "coherent state: closed forms, an exact Fock-space oracle and "
            "Monte Carlo coincidence counting."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grids=True):
        p.add_argument("--config", help="JSON config file (flags win over it)")
        p.add_argument("--out", help="output table path (csv or json)")
        p.add_argument("--format", choices=("csv", "json"), help="table format")
        p.add_argument("--seed", type=int, help="64-bit random seed")
        p.add_argument("--pulses", type=int, help="pulses per Monte Carlo point")
        p.add_argument("--n-max", type=int, help="per-mode Fock cutoff")
        p.add_argument(
            "--method", help="comma list from: analytic, oracle, montecarlo"
        )
        p.add_argument("--eta", type=float, help="heralded mean photon number")
        if grids:
            p.add_argument("--r", help="mixing-ratio grid: a,b,c or start:stop:count")
            p.add_argument("--k", help="overlap grid: a,b,c or start:stop:count")

    p_eval = sub.add_parser("eval", help="closed-form / oracle g2 over an (r, k) grid")
    common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_sim = sub.add_parser("simulate", help="Monte Carlo g2 over an (r, k) grid")
    common(p_sim)
    p_sim.add_argument("--sampler", choices=("pulse", "aggregate"))
    p_sim.set_defaults(func=cmd_simulate)

    p_scan = sub.add_parser(
        "delay-scan", help="overlap-vs-delay scan with Gaussian fit"
    )
    common(p_scan, grids=False)
    p_scan.add_argument("--delays", help="delay grid in fs: a,b,c or start:stop:count")
    p_scan.add_argument("--k-peak", type=float, help="peak overlap of the model")
    p_scan.add_argument("--tau0", type=float, help="Gaussian width in fs")
    p_scan.add_argument("--center", type=float, help="delay offset in fs")
    p_scan.add_argument("--alpha-sq", type=float, help="coherent mean photon number")
    p_scan.add_argument("--sampler", choices=("pulse", "aggregate"))
    p_scan.set_defaults(func=cmd_delay_scan)

    p_rep = sub.add_parser("reproduce", help="write a frozen figure preset table")
    p_rep.add_argument("figure", choices=presets.FIGURE_IDS)
    p_rep.add_argument("--config", help="JSON config file (flags win over it)")
    p_rep.add_argument("--seed", type=int, help="64-bit random seed")
    p_rep.add_argument("--out-dir", help="directory for <figure>.csv and manifest")
    p_rep.set_defaults(func=cmd_reproduce)

    p_fit = sub.add_parser("fit", help="Gaussian fit of a tau,k,sigma CSV")
    p_fit.add_argument("data", help="3-column CSV: tau_fs,k_hat,k_hat_err")
    p_fit.add_argument("--fix-center", type=float, help="freeze the peak position")
    p_fit.add_argument("--out", help="write the fit summary JSON here")
    p_fit.set_defaults(func=cmd_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CutoffError, UndefinedEstimateError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
