import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from plotviz.cli import main
from plotviz.schemas import FIGURES

G2_FIGURES = ("fig1", "fig4", "fig5a", "fig5b")


@pytest.fixture(scope="session")
def tables(tmp_path_factory):
    """Fresh figure tables produced through the photonmix CLI only."""
    out = tmp_path_factory.mktemp("tables")
    for fig in FIGURES:
        res = subprocess.run(
            [sys.executable, "-m", "photonmix", "reproduce", fig,
             "--seed", "42", "--out-dir", str(out)],
            capture_output=True,
            text=True,
        )
        assert res.returncode == 0, res.stderr
    return out


def parse_sidecar(path):
    series = {}
    for line in Path(path).read_text().splitlines()[1:]:
        m = re.match(r"series (.+): min=(\S+) max=(\S+) n=(\d+)$", line)
        assert m, line
        series[m.group(1)] = (
            float(m.group(2)),
            float(m.group(3)),
            int(m.group(4)),
        )
    return series


class TestRenderAll:
    @pytest.mark.parametrize("fig", FIGURES)
    def test_renders_with_exit_zero(self, fig, tables, tmp_path):
        out = tmp_path / f"{fig}.png"
        code = main([fig, "--csv", str(tables / f"{fig}.csv"), "--out", str(out)])
        assert code == 0
        assert out.exists() and out.stat().st_size > 0
        assert Path(str(out) + ".summary.txt").exists()
        assert Path(str(out) + ".plot.json").exists()

    def test_svg_output(self, tables, tmp_path):
        out = tmp_path / "fig1.svg"
        assert main(["fig1", "--csv", str(tables / "fig1.csv"),
                     "--out", str(out)]) == 0
        assert out.read_bytes().lstrip().startswith(b"<?xml")


class TestSidecarSummaries:
    def test_fig1_surface_respects_global_bound(self, tables, tmp_path):
        out = tmp_path / "fig1.png"
        main(["fig1", "--csv", str(tables / "fig1.csv"), "--out", str(out)])
        series = parse_sidecar(str(out) + ".summary.txt")
        assert series["g2"][1] <= 4.0 / 3.0 + 1e-6

    def test_fig5b_distinguishable_slice_stays_nonclassical(self, tables, tmp_path):
        out = tmp_path / "fig5b.png"
        main(["fig5b", "--csv", str(tables / "fig5b.csv"), "--out", str(out)])
        series = parse_sidecar(str(out) + ".summary.txt")
        assert series["g2_analytic[k=0]"][1] < 1.0

    def test_fig3_fit_curve_peak_to_baseline(self, tables, tmp_path):
        out = tmp_path / "fig3.png"
        main(["fig3", "--csv", str(tables / "fig3.csv"), "--out", str(out)])
        series = parse_sidecar(str(out) + ".summary.txt")
        lo, hi, _ = series["triples_fit"]
        fit = json.loads((tables / "fig3.csv.manifest.json").read_text())["fit"]
        assert hi / lo == pytest.approx(1.0 + fit["k_hat"], rel=0.02)

    def test_every_plotted_series_is_summarized(self, tables, tmp_path):
        out = tmp_path / "fig4.png"
        main(["fig4", "--csv", str(tables / "fig4.csv"), "--out", str(out)])
        series = parse_sidecar(str(out) + ".summary.txt")
        for r in ("0.25", "0.5", "1", "2", "4"):
            assert f"g2_mc[r={r}]" in series
            assert f"g2_analytic[r={r}]" in series


class TestPlotManifest:
    @pytest.mark.parametrize("fig", G2_FIGURES)
    def test_reference_line_present_on_g2_plots(self, fig, tables, tmp_path):
        out = tmp_path / f"{fig}.png"
        main([fig, "--csv", str(tables / f"{fig}.csv"), "--out", str(out)])
        manifest = json.loads(Path(str(out) + ".plot.json").read_text())
        refs = [e for e in manifest["elements"]
                if e["type"] == "reference_line" and e["value"] == 1.0]
        assert refs, manifest["elements"]

    def test_shading_togglable(self, tables, tmp_path):
        out = tmp_path / "fig5b.png"
        main(["fig5b", "--csv", str(tables / "fig5b.csv"), "--out", str(out),
              "--no-shade"])
        manifest = json.loads(Path(str(out) + ".plot.json").read_text())
        assert manifest["style"]["shade"] is False
        assert not [e for e in manifest["elements"]
                    if e["type"] == "shaded_region"]


class TestIdempotency:
    def test_same_input_same_sidecar_bytes(self, tables, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        main(["fig5a", "--csv", str(tables / "fig5a.csv"), "--out", str(a)])
        main(["fig5a", "--csv", str(tables / "fig5a.csv"), "--out", str(b)])
        assert Path(str(a) + ".summary.txt").read_bytes() == Path(
            str(b) + ".summary.txt"
        ).read_bytes()
        ma = json.loads(Path(str(a) + ".plot.json").read_text())
        mb = json.loads(Path(str(b) + ".plot.json").read_text())
        assert ma["series"] == mb["series"]


class TestSchemaErrors:
    def test_missing_column_named(self, tmp_path, capsys):
        bad = tmp_path / "fig1.csv"
        bad.write_text("r,k\n1.0,0.5\n")
        out = tmp_path / "fig1.png"
        assert main(["fig1", "--csv", str(bad), "--out", str(out)]) == 2
        assert "g2" in capsys.readouterr().err
        assert not out.exists()
        assert not Path(str(out) + ".summary.txt").exists()

    def test_empty_table_rejected_without_partial_files(self, tmp_path, capsys):
        bad = tmp_path / "fig5b.csv"
        bad.write_text("r,k,g2_analytic,g2_mc,g2_mc_err\n")
        out = tmp_path / "fig5b.png"
        assert main(["fig5b", "--csv", str(bad), "--out", str(out)]) == 2
        assert "no data rows" in capsys.readouterr().err
        assert not out.exists()

    def test_non_numeric_cell_rejected(self, tmp_path):
        bad = tmp_path / "fig1.csv"
        bad.write_text("r,k,g2\n1.0,0.5,oops\n")
        assert main(["fig1", "--csv", str(bad), "--out",
                     str(tmp_path / "x.png")]) == 2

    def test_missing_file(self, tmp_path):
        assert main(["fig1", "--csv", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "x.png")]) == 2
