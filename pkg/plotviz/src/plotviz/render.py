"""Render photonmix figure tables into images with numeric sidecars.

Every render writes three artifacts next to each other:

* the image itself (PNG or SVG; bytes are not pinned),
* ``<image>.summary.txt``  one line per plotted series with its min/max,
  deterministic for identical input bytes,
* ``<image>.plot.json``    a declarative manifest of the drawn elements
  (series names, reference lines, shading) for test assertions.

Input validation happens before any file is created, so a schema error
never leaves a partial artifact behind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import SchemaError, load_table

__all__ = ["PlotJob", "render", "SchemaError"]

GREY = (0.82, 0.82, 0.82, 0.45)


@dataclass(frozen=True)
class PlotJob:
    figure_id: str
    csv_path: str
    out_path: str
    shade: bool = True
    errorbars: bool = True


def _series_entry(values) -> dict:
    arr = np.asarray(values, dtype=float)
    return {"min": float(arr.min()), "max": float(arr.max()), "n": int(arr.size)}


def _groups(table, by):
    """Row indices grouped by a key column, insertion-ordered."""
    order = []
    groups = {}
    for i, v in enumerate(table[by]):
        if v not in groups:
            groups[v] = []
            order.append(v)
        groups[v].append(i)
    return [(v, groups[v]) for v in order]


def _pick(table, col, idx):
    return [table[col][i] for i in idx]


def _fig1(table, ax, job, series, elements):
    r = sorted(set(table["r"]))
    k = sorted(set(table["k"]))
    grid = np.full((len(k), len(r)), np.nan)
    ri = {v: i for i, v in enumerate(r)}
    ki = {v: i for i, v in enumerate(k)}
    for rr, kk, g in zip(table["r"], table["k"], table["g2"]):
        grid[ki[kk], ri[rr]] = g
    if np.isnan(grid).any():
        raise SchemaError("fig1 table is not a complete (r, k) grid")
    mesh = ax.pcolormesh(r, k, grid, shading="nearest", cmap="viridis")
    plt.colorbar(mesh, ax=ax, label="g2(0)")
    if grid.min() < 1.0 < grid.max():
        ax.contour(r, k, grid, levels=[1.0], colors="white", linewidths=1.5)
    elements.append({"type": "reference_line", "axis": "g2", "value": 1.0})
    ax.set_xlabel("mixing ratio r")
    ax.set_ylabel("overlap k")
    ax.set_title("g2(0) of the mixed field")
    series["g2"] = _series_entry(table["g2"])


def _fig3(table, ax, job, series, elements):
    tau = table["tau_fs"]
    if job.errorbars:
        ax.errorbar(tau, table["n_ab1b2"], yerr=table["n_err"], fmt="o",
                    ms=3.5, capsize=2, label="triple coincidences")
    else:
        ax.plot(tau, table["n_ab1b2"], "o", ms=3.5, label="triple coincidences")
    ax.plot(tau, table["triples_fit"], "-", label="Gaussian fit")
    ax.set_xlabel("delay (fs)")
    ax.set_ylabel("triple coincidences per scan point")
    ax.set_title("overlap-induced triple-coincidence enhancement")
    ax.legend()
    series["triples"] = _series_entry(table["n_ab1b2"])
    series["triples_fit"] = _series_entry(table["triples_fit"])
    elements.append({"type": "fit_curve", "series": "triples_fit"})


def _family(table, ax, job, series, elements, by, x_col, x_label):
    for value, idx in _groups(table, by):
        x = _pick(table, x_col, idx)
        name = f"[{by}={value:g}]"
        (line,) = ax.plot(
            x, _pick(table, "g2_analytic", idx), "-", label=f"{by}={value:g}"
        )
        if job.errorbars:
            ax.errorbar(
                x, _pick(table, "g2_mc", idx),
                yerr=_pick(table, "g2_mc_err", idx),
                fmt="o", ms=3, capsize=2, color=line.get_color(),
            )
        else:
            ax.plot(x, _pick(table, "g2_mc", idx), "o", ms=3,
                    color=line.get_color())
        series[f"g2_analytic{name}"] = _series_entry(_pick(table, "g2_analytic", idx))
        series[f"g2_mc{name}"] = _series_entry(_pick(table, "g2_mc", idx))
    ax.axhline(1.0, color="black", lw=1.0, ls="--")
    elements.append({"type": "reference_line", "axis": "g2", "value": 1.0})
    if job.shade:
        lo = min(min(table["g2_analytic"]), min(table["g2_mc"]))
        ax.axhspan(min(0.0, lo), 1.0, color=GREY, zorder=0)
        elements.append({"type": "shaded_region", "label": "nonclassical g2 < 1"})
    ax.set_xlabel(x_label)
    ax.set_ylabel("g2(0)")
    ax.legend(fontsize=8)


def _fig4(table, ax, job, series, elements):
    _family(table, ax, job, series, elements, by="r", x_col="tau_fs",
            x_label="delay (fs)")
    ax.set_title("g2(0) versus delay, one curve per mixing ratio")


def _fig5a(table, ax, job, series, elements):
    _family(table, ax, job, series, elements, by="k", x_col="r",
            x_label="mixing ratio r")
    ax.set_xscale("log")
    ax.set_title("g2(0) versus mixing ratio at fixed overlap")


def _fig5b(table, ax, job, series, elements):
    _family(table, ax, job, series, elements, by="r", x_col="k",
            x_label="overlap k")
    ax.set_title("g2(0) versus overlap at fixed mixing ratio")
    # cross-section of the plotted model curves at k = 0: the fully
    # distinguishable mix stays nonclassical for every ratio
    k0 = [g for g, k in zip(table["g2_analytic"], table["k"]) if k == 0.0]
    if k0:
        series["g2_analytic[k=0]"] = _series_entry(k0)


_RENDERERS = {
    "fig1": _fig1,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5a": _fig5a,
    "fig5b": _fig5b,
}


def render(job: PlotJob):
    """Render one figure; returns (image, sidecar, manifest) paths."""
    table = load_table(job.csv_path, job.figure_id)
    out = Path(job.out_path)
    if out.suffix.lower() not in (".png", ".svg"):
        raise SchemaError(f"output {out} must end in .png or .svg")

    series: dict = {}
    elements: list = []
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=130)
    try:
        _RENDERERS[job.figure_id](table, ax, job, series, elements)
        fig.tight_layout()
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
    finally:
        plt.close(fig)

    sidecar = Path(str(out) + ".summary.txt")
    lines = [f"figure {job.figure_id}"]
    for name in sorted(series):
        s = series[name]
        lines.append(
            f"series {name}: min={s['min']!r} max={s['max']!r} n={s['n']}"
        )
    sidecar.write_text("\n".join(lines) + "\n", encoding="utf-8")

    manifest = Path(str(out) + ".plot.json")
    manifest.write_text(
        json.dumps(
            {
                "figure": job.figure_id,
                "input": str(job.csv_path),
                "output": out.name,
                "style": {"shade": job.shade, "errorbars": job.errorbars},
                "elements": elements,
                "series": {k: series[k] for k in sorted(series)},
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    return out, sidecar, manifest
