"""Command-line interface, exercised in-process via main(argv)."""

import json

import pytest

from transientq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTable:
    def test_markdown_default(self, capsys):
        code, out, _ = run(capsys, "table", "--b-grid", "0.8,1.2", "--t-grid", "0.1,1.0")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("| b \\ t |")
        assert lines[2].startswith("| 0.8 | 0.009 |")
        assert lines[3].startswith("| 1.2 | 0.014 |")

    def test_csv_schema(self, capsys):
        code, out, _ = run(capsys, "table", "--b-grid", "0.8", "--t-grid", "0.1", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "b,t,rho,kmax,grid_size,tail_bound"
        assert len(lines) == 2
        assert float(lines[1].split(",")[2]) == pytest.approx(0.0091, abs=5e-4)

    def test_time_zero_cell(self, capsys):
        code, out, _ = run(capsys, "table", "--b-grid", "1.5", "--t-grid", "0,0.1")
        assert code == 0
        assert "| 1.5 | 0.000 |" in out

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run(
            capsys, "table", "--b-grid", "0.8", "--t-grid", "0.1",
            "--format", "csv", "--out", str(target),
        )
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("b,t,rho,")

    def test_deterministic_bytes(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert run(
                capsys, "table", "--b-grid", "0.8,1.2", "--t-grid", "0.2,0.6",
                "--format", "csv", "--out", str(p),
            )[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestPmf:
    def test_markdown_contains_verdict(self, capsys):
        code, out, _ = run(capsys, "pmf", "--b", "0.8", "--t", "0.1")
        assert code == 0
        assert "Admissible" in out
        assert "rho" in out

    def test_inexpedient_cell(self, capsys):
        code, out, _ = run(capsys, "pmf", "--b", "1.9", "--t", "1.0", "--format", "jsonl")
        assert code == 0
        summary = json.loads(out.strip().splitlines()[-1])
        assert summary["verdict"] == "Inexpedient"
        assert summary["rho"] == pytest.approx(0.208, abs=2e-3)

    def test_csv_keeps_schema_pure(self, capsys):
        code, out, err = run(capsys, "pmf", "--b", "0.8", "--t", "0.1", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "i,p_autonomous,p_poisson"
        assert "verdict" not in out
        assert "Admissible" in err

    def test_custom_threshold_flips_verdict(self, capsys):
        code, out, _ = run(
            capsys, "pmf", "--b", "0.8", "--t", "0.1", "--threshold", "0.001"
        )
        assert code == 0
        assert "Inexpedient" in out

    def test_missing_required_flag(self, capsys):
        code, _, err = run(capsys, "pmf", "--t", "0.5")
        assert code == 1
        assert "--b" in err


class TestMean:
    def test_single_time(self, capsys):
        code, out, _ = run(capsys, "mean", "--b", "1.2", "--t", "1.0", "--format", "csv")
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert float(row[1]) == pytest.approx(18.3210, abs=1e-4)
        assert float(row[2]) == pytest.approx(1.2 * 18.3210, abs=1e-3)

    def test_time_grid(self, capsys):
        code, out, _ = run(
            capsys, "mean", "--b", "1.2", "--t-grid", "0.1,0.2,0.4", "--format", "csv"
        )
        assert code == 0
        assert len(out.strip().splitlines()) == 4


class TestSimulate:
    def test_histogram_and_summary(self, capsys):
        code, out, err = run(
            capsys, "simulate", "--b", "1.2", "--t", "0.5",
            "--reps", "2000", "--seed", "7", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "i,count"
        total = sum(int(line.split(",")[1]) for line in lines[1:])
        assert total == 2000
        assert "empirical_mean=" in err and "seed=7" in err

    def test_mtminf_system(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--b", "1.0", "--t", "0.3", "--system", "mtminf",
            "--reps", "500", "--seed", "3", "--format", "csv",
        )
        assert code == 0

    def test_deterministic_output_files(self, capsys, tmp_path):
        paths = [tmp_path / "s1.csv", tmp_path / "s2.csv"]
        for p in paths:
            code = run(
                capsys, "simulate", "--b", "1.5", "--t", "0.4", "--reps", "3000",
                "--seed", "123", "--format", "csv", "--out", str(p),
            )[0]
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_seed_changes_output(self, capsys, tmp_path):
        paths = [tmp_path / "s1.csv", tmp_path / "s2.csv"]
        for p, seed in zip(paths, ("1", "2")):
            run(
                capsys, "simulate", "--b", "1.5", "--t", "0.4", "--reps", "3000",
                "--seed", seed, "--format", "csv", "--out", str(p),
            )
        assert paths[0].read_bytes() != paths[1].read_bytes()

    def test_backend_flag(self, capsys):
        for backend in ("numpy", "numba"):
            code, _, err = run(
                capsys, "simulate", "--b", "1.2", "--t", "0.3", "--reps", "200",
                "--seed", "5", "--backend", backend, "--format", "csv",
            )
            assert code == 0
            assert f"backend={backend}" in err


class TestValidate:
    def test_small_run_passes(self, capsys, tmp_path):
        target = tmp_path / "report.jsonl"
        code, out, err = run(
            capsys, "validate", "--b-grid", "0.8", "--t-grid", "0.4",
            "--reps", "400", "--out", str(target),
        )
        assert code == 0
        assert "PASS inversion-vs-convolution" in out
        assert "all checks passed" in err
        records = [json.loads(line) for line in target.read_text().splitlines()]
        assert all(rec["passed"] for rec in records)

    def test_perturbation_fails(self, capsys):
        code, out, err = run(
            capsys, "validate", "--b-grid", "0.8", "--t-grid", "0.4",
            "--reps", "300", "--inject-cf-perturbation", "autonomous",
        )
        assert code == 1
        assert "FAIL" in out
        assert "FAILED" in err


class TestConfigFile:
    def test_config_supplies_values(self, capsys, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text(
            "[model]\nb = 1.2\nmu = 1.0\nn0 = 15\n"
            "[simulation]\nreps = 700\nseed = 9\n"
            "[output]\nformat = csv\n"
        )
        code, out, err = run(capsys, "simulate", "--t", "0.3", "--config", str(cfg))
        assert code == 0
        assert out.startswith("i,count")
        assert "replications=700" in err and "seed=9" in err

    def test_cli_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[model]\nb = 1.2\n[simulation]\nreps = 700\nseed = 9\n")
        _, _, err = run(
            capsys, "simulate", "--t", "0.3", "--config", str(cfg),
            "--reps", "250", "--format", "csv",
        )
        assert "replications=250" in err

    def test_missing_config_file(self, capsys):
        code, _, err = run(capsys, "table", "--config", "/nonexistent.ini")
        assert code == 1
        assert "config" in err


class TestErrorHandling:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_bad_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["table", "--no-such-flag"])
        assert err.value.code == 2

    def test_bad_grid_value_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["table", "--b-grid", "fast"])
        assert err.value.code == 2

    def test_unknown_format_exits_1(self, capsys):
        code, _, err = run(capsys, "mean", "--b", "1.0", "--format", "yaml")
        assert code == 1
        assert "format" in err

    def test_invalid_model_exits_1(self, capsys):
        code, _, err = run(capsys, "pmf", "--b", "-1", "--t", "0.5")
        assert code == 1
        assert "error" in err

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert "transientq" in capsys.readouterr().out
