"""Full chain: simulation CLI writes CSVs, figure scripts consume them.

Skipped when the simulation package is not installed; the rest of this
suite runs on synthetic files precisely so that it does not need it.
"""

import pytest

relsr_cli = pytest.importorskip("relsr.cli", reason="simulation package not installed")

from relsr_plots.cli import main_kernel, main_scan, main_transient


def run_primary(args):
    assert relsr_cli.main(args) == 0


def test_kernel_chain(tmp_path):
    csvs = []
    for beta in ("0", "0.8", "0.95"):
        out = tmp_path / f"kernel_{beta}.csv"
        run_primary(
            ["kernel", "--beta", beta, "--delta-v", "1", "--q-max", "0.5",
             "--dq", "0.05", "--out", str(out)]
        )
        csvs.append(str(out))
    assert main_kernel(csvs + ["--out", str(tmp_path / "fig1")]) == 0
    assert (tmp_path / "fig1.svg").exists()
    assert (tmp_path / "fig1.png").exists()


def test_transient_chain(tmp_path):
    csvs = []
    for delta_v in ("0", "100"):
        out = tmp_path / f"transient_{delta_v}.csv"
        run_primary(
            ["transient", "--beta", "0", "--delta-v", delta_v, "--q-max", "1",
             "--dq", "0.05", "--out", str(out)]
        )
        csvs.append(str(out))
    assert main_transient(csvs + ["--out", str(tmp_path / "fig4")]) == 0
    assert (tmp_path / "fig4.svg").exists()


def test_scan_chain(tmp_path):
    csvs = []
    for beta in ("0", "0.8"):
        out = tmp_path / f"scan_{beta}.csv"
        run_primary(
            ["scan", "--beta", beta, "--delta-v-max", "16", "--delta-v-step", "4",
             "--q-max", "2", "--dq", "0.02", "--workers", "1", "--out", str(out)]
        )
        csvs.append(str(out))
    assert main_scan(csvs + ["--out", str(tmp_path / "fig5")]) == 0
    assert (tmp_path / "fig5.svg").exists()
