import csv
import json

import pytest

from kgcoherent.cli import main


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


class TestFreeCommand:
    def test_vdot_single_row(self, tmp_path):
        assert main(["free", "--lambda", "1", "--p-mean", "1", "--observable", "vdot",
                     "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "observable_vdot.csv")
        assert len(rows) == 1
        assert float(rows[0]["vdot"]) == pytest.approx(0.6421, abs=5e-4)

    def test_table_one(self, tmp_path):
        assert main(["free", "--table", "1", "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "table1_free_energy.csv")
        assert len(rows) == 6  # 12 ratio cells across two columns
        for row in rows:
            assert abs(float(row["E_dev"])) < 1e-4
            assert abs(float(row["E_nr_dev"])) < 1e-4

    def test_empty_tau_grid_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["free", "--tau-step", "0", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_moment_and_density_grids(self, tmp_path):
        assert main(["free", "--lambda", "0.5", "--p-mean", "1",
                     "--tau-max", "4", "--tau-step", "2",
                     "--x-min", "-5", "--x-max", "8", "--x-step", "0.5",
                     "--p-max", "2", "--p-step", "1",
                     "--out", str(tmp_path)]) == 0
        assert (tmp_path / "moments_vs_p.csv").exists()
        assert (tmp_path / "moments_vs_tau.csv").exists()
        dens = read_rows(tmp_path / "density_grid.csv")
        assert {"tau", "x", "rho", "kg_density"} <= set(dens[0])

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["free", "--table", "1", "--out", str(a)])
        main(["free", "--table", "1", "--out", str(b)])
        assert (a / "table1_free_energy.csv").read_bytes() == (b / "table1_free_energy.csv").read_bytes()

    def test_config_file_defaults_and_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"lambda": 0.5, "p-mean": 1.0, "observable": "vdot"}))
        out1 = tmp_path / "o1"
        assert main(["free", "--config", str(cfg), "--out", str(out1)]) == 0
        rows = read_rows(out1 / "observable_vdot.csv")
        assert float(rows[0]["vdot"]) == pytest.approx(0.6903, abs=5e-4)
        out2 = tmp_path / "o2"
        assert main(["free", "--config", str(cfg), "--lambda", "1.0", "--out", str(out2)]) == 0
        rows = read_rows(out2 / "observable_vdot.csv")
        assert float(rows[0]["vdot"]) == pytest.approx(0.6421, abs=5e-4)


class TestMagneticCommand:
    def test_table_two(self, tmp_path):
        assert main(["magnetic", "--table", "2", "--threads", "2", "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "table2_uniform_field.csv")
        assert len(rows) == 12
        for row in rows:
            for key in ("E_ratio_dev", "v3_ratio_dev", "R_ratio_dev", "R2_ratio_dev", "dR_ratio_dev"):
                assert abs(float(row[key])) < 2e-3

    def test_helix_figure(self, tmp_path):
        assert main(["magnetic", "--fig", "helix", "--periods", "1", "--steps", "9",
                     "--out", str(tmp_path)]) == 0
        for tag in ("narrow", "wide"):
            rows = read_rows(tmp_path / f"helix_{tag}.csv")
            assert len(rows) == 9
            assert set(rows[0]) == {
                "tau_over_tau_cl", "x1_over_Rcl", "x2_over_Rcl", "x3",
                "p1_over_Piperp", "p2_over_Piperp", "Pi1_over_Piperp", "Pi2_over_Piperp",
            }

    def test_gyration_center_check(self, capsys):
        assert main(["magnetic", "--check", "gyration-center", "--Lambda", "0.01",
                     "--lambda-perp", "0.25", "--lambda3", "0.25",
                     "--p1", "1.2", "--p3", "1.6"]) == 0
        out = capsys.readouterr().out
        assert "max drift" in out

    def test_default_trajectory_outputs(self, tmp_path):
        assert main(["magnetic", "--Lambda", "0.01", "--lambda-perp", "0.25",
                     "--lambda3", "0.25", "--p1", "1.2", "--p3", "1.6",
                     "--periods", "1", "--steps", "5", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "trajectory.csv").exists()
        assert (tmp_path / "conserved.csv").exists()
        assert (tmp_path / "x3_uncertainty.csv").exists()


class TestNeutralCommand:
    def test_reality_check(self, capsys):
        assert main(["neutral", "--reality-check", "--lambda", "0.5", "--p-mean", "1",
                     "--tau-max", "5", "--tau-step", "2.5",
                     "--x-min", "-6", "--x-max", "8", "--x-step", "0.5"]) == 0
        assert "max |Im|" in capsys.readouterr().out

    def test_field_grid(self, tmp_path):
        assert main(["neutral", "--lambda", "0.5", "--p-mean", "0.5",
                     "--tau-max", "2", "--tau-step", "1",
                     "--x-min", "-3", "--x-max", "3", "--x-step", "1",
                     "--out", str(tmp_path)]) == 0
        rows = read_rows(tmp_path / "neutral_field.csv")
        assert len(rows) == 3 * 7
        assert max(abs(float(r["im_psi"])) for r in rows) < 1e-10


class TestValidateCommand:
    def test_tables_only(self, tmp_path):
        assert main(["validate", "--tables", "--out", str(tmp_path)]) == 0
        report = json.loads((tmp_path / "validation_report.json").read_text())
        assert all(rec["passed"] for rec in report)
        assert (tmp_path / "validation_report.txt").read_text().count("[PASS]") == len(report)

    def test_units_preamble_present(self, tmp_path):
        main(["free", "--table", "1", "--out", str(tmp_path)])
        first = (tmp_path / "table1_free_energy.csv").read_text().splitlines()[0]
        assert first.startswith("#") and "units" in first
