"""CLI contract: flags, exit codes, reproducibility, files on disk."""

import json

import pytest

from courantlab.cli import main
from courantlab.images import read_pbm


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestSpectrum:
    def test_rect_to_10_has_12_modes_ending_in_double_10(self, capsys):
        code, out = run(capsys, "spectrum", "--p1", "1/4", "--p2", "1",
                        "--qmax", "10", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        entries = doc["result"]["entries"]
        assert sum(len(e["modes"]) for e in entries) == 12
        assert entries[-1]["q"] == "10" and len(entries[-1]["modes"]) == 2

    def test_square_qmax_2_single_entry(self, capsys):
        code, out = run(capsys, "spectrum", "--p1", "1", "--p2", "1",
                        "--qmax", "2", "--format", "json")
        assert code == 0
        assert len(json.loads(out)["result"]["entries"]) == 1

    def test_bad_rational_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["spectrum", "--p1", "zebra", "--p2", "1", "--qmax", "2"])
        assert err.value.code == 1


class TestCheck:
    def test_equality_banner_and_exit_zero(self, capsys):
        code, out = run(capsys, "check", "--lam", "5", "--mode", "main")
        assert code == 0
        assert "EQUALITY" in out

    def test_off_spectrum_is_tagged(self, capsys):
        code, out = run(capsys, "check", "--lam", "3", "--mode", "main")
        assert code == 0
        assert "off-spectrum" in out

    def test_modes_all_run(self, capsys):
        for mode in ("weak", "converse", "subset"):
            code, _ = run(capsys, "check", "--lam", "5", "--mode", mode)
            assert code == 0

    def test_missing_spectrum_file_is_exit_1(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["check", "--lam", "5", "--spec0", "no-such.json",
                  "--sub", "also-missing.json"])
        assert err.value.code == 1

    def test_violation_exit_2_on_inflated_subdomains(self, capsys, tmp_path):
        # three copies of the square against the rectangle overcount on purpose
        from courantlab.fixtures import fixture_exact_spectrum

        rect = fixture_exact_spectrum("sec61-rect", 10)
        square = fixture_exact_spectrum("pi-square", 10)
        rect.dump(tmp_path / "rect.json")
        square.dump(tmp_path / "sq.json")
        code, out = run(capsys, "check", "--lam", "5",
                        "--spec0", str(tmp_path / "rect.json"),
                        "--sub", str(tmp_path / "sq.json"), str(tmp_path / "sq.json"),
                        str(tmp_path / "sq.json"), "--format", "json")
        assert code == 2
        assert json.loads(out)["result"]["holds"] is False


class TestSolveAndNodal:
    def test_solve_emits_values_and_images(self, capsys, tmp_path):
        code, out = run(capsys, "solve", "--fixture", "pi-square", "--divisor", "16",
                        "--k", "3", "--image", str(tmp_path / "img"))
        assert code == 0
        doc = json.loads(out)
        assert len(doc["result"]["values"]) == 3
        assert doc["config"]["seed"] == 0
        mask = read_pbm(tmp_path / "img" / "pi-square-mask.pbm")
        assert mask.sum() == 15 * 15
        assert (tmp_path / "img" / "pi-square-u3.pgm").exists()

    def test_nodal_sec62_k4_mu3(self, capsys):
        code, out = run(capsys, "nodal", "--fixture", "sec62", "--k", "4")
        assert code == 0
        rows = json.loads(out)["result"]["rows"]
        assert rows[3]["mu"] == 3 and rows[3]["n_mid"] == 4
        assert rows[3]["holds"] and not rows[3]["sharp"]

    def test_byte_identical_given_config_and_seed(self, capsys, tmp_path):
        argv = ["solve", "--fixture", "pi-square", "--divisor", "16", "--k", "4",
                "--seed", "3"]
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(argv + ["--output", str(a)]) == 0
        assert main(argv + ["--output", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


class TestScansAndConfig:
    def test_sharp_scan_contains_5_and_10(self, capsys):
        code, out = run(capsys, "sharp-scan", "--lmax", "100")
        assert code == 0
        eq = json.loads(out)["result"]["equalities"]
        assert "5" in eq and "10" in eq

    def test_lattice_csv_shape(self, capsys):
        code, out = run(capsys, "lattice", "--lmax", "1000", "--points", "5")
        assert code == 0
        lines = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert lines[0] == "lam,A0_plus,A1_plus,deficit,ratio"
        assert len(lines) >= 4

    def test_config_file_defaults_and_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("qmax = 12\nformat = json\n")
        code, out = run(capsys, "check", "--lam", "5", "--config", str(cfg))
        assert code == 0
        assert json.loads(out)["config"]["qmax"] == "12"
        cfg.write_text("no_such_key = 1\n")
        with pytest.raises(SystemExit) as err:
            main(["check", "--lam", "5", "--config", str(cfg)])
        assert err.value.code == 1

    def test_version_embedded_everywhere(self, capsys):
        _, out = run(capsys, "sharp-scan", "--lmax", "10")
        doc = json.loads(out)
        assert doc["tool"] == "courantlab"
        assert doc["version"]


class TestReport:
    def test_report_writes_figures_and_csv(self, capsys, tmp_path):
        outdir = tmp_path / "rep"
        code, _ = run(capsys, "report", "--outdir", str(outdir), "--divisor", "16")
        assert code == 0
        names = {p.name for p in outdir.iterdir()}
        assert {"sec61_partition.csv", "sec61_staircase.png",
                "pi_square_eigs.csv", "pi_square_u1.png", "pi_square_nodal_1.png",
                "lattice_deficit.csv", "lattice_deficit.png",
                "capacity_polar.csv", "capacity_fit.png",
                "manifest.json"} <= names
        manifest = json.loads((outdir / "manifest.json").read_text())
        assert manifest["result"]["polar_r_squared"] > 0.9
        header = (outdir / "pi_square_eigs.csv").read_text().splitlines()[0]
        assert header.startswith("# tool=courantlab")
