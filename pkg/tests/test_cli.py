import json

import pytest

from ddforge.cli import main
from ddforge.sequences import cudd, schedule_from_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_cpmg(self, capsys, tmp_path):
        out_file = tmp_path / "schedule.json"
        code, out, _ = run(capsys, "gen", "cpmg", "--t", "1.0", "--out", str(out_file))
        assert code == 0
        assert "CPMG: 2 pulses" in out
        assert "grid: D=4" in out
        seq = schedule_from_json(out_file.read_text())
        assert seq.pulse_count == 2

    def test_cudd_counts(self, capsys, tmp_path):
        out_file = tmp_path / "cudd.json"
        code, out, _ = run(capsys, "gen", "cudd", "--m", "2", "--n", "2", "--t", "1.0", "--out", str(out_file))
        assert code == 0
        assert "10 pulses" in out and "2 X" in out and "8 Z" in out
        written = schedule_from_json(out_file.read_text())
        reference = cudd(2, 2, 1.0)
        assert [(p.instant, p.axis) for p in written.pulses] == [
            (p.instant, p.axis) for p in reference.pulses
        ]

    def test_udd2(self, capsys):
        code, out, _ = run(capsys, "gen", "udd2", "--n", "1")
        assert code == 0
        assert "9 pulses" in out

    def test_not_commensurate(self, capsys):
        code, out, _ = run(capsys, "gen", "udd", "--n", "3")
        assert code == 0
        assert "not commensurate" in out

    def test_missing_param_is_usage_error(self, capsys):
        code, _, err = run(capsys, "gen", "udd")
        assert code == 2
        assert "requires" in err

    def test_unknown_family_is_usage_error(self, capsys):
        code, _, _ = run(capsys, "gen", "xy8")
        assert code == 2


class TestCounts:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "counts", "--m-max", "3")
        assert code == 0
        line = [ln for ln in out.splitlines() if ln.strip().startswith("3")][0]
        assert line.split() == ["3", "4", "64", "30", "195"]

    def test_csv(self, capsys, tmp_path):
        out_file = tmp_path / "counts.csv"
        code, _, _ = run(capsys, "counts", "--m-max", "2", "--out", str(out_file), "--no-meta")
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "m,claimed_order,cdd,cudd,udd2"
        assert lines[1] == "1,2,4,4,9"

    def test_m_zero_is_usage_error(self, capsys):
        code, _, err = run(capsys, "counts", "--m-max", "0")
        assert code == 2
        assert "m_max" in err


class TestCrossover:
    def test_value(self, capsys):
        code, out, _ = run(capsys, "crossover")
        assert code == 0
        assert "n = 11" in out

    def test_not_found(self, capsys):
        code, _, err = run(capsys, "crossover", "--n-max", "5")
        assert code == 2
        assert "no crossover" in err


class TestOrder:
    def test_free_slope_one(self, capsys, tmp_path):
        csv_file = tmp_path / "scan.csv"
        summary_file = tmp_path / "fit.json"
        code, out, _ = run(
            capsys,
            "order", "none", "--points", "4", "--seed", "7",
            "--out", str(csv_file), "--summary", str(summary_file), "--no-meta",
        )
        assert code == 0
        assert "E_total slope" not in out  # default functional is flip
        summary = json.loads(summary_file.read_text())
        assert set(summary) == {"slope", "intercept", "r2", "pairwise"}

    def test_total_functional_and_determinism(self, capsys, tmp_path):
        files = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            code, out, _ = run(
                capsys,
                "order", "none", "--functional", "total", "--points", "4",
                "--seed", "7", "--out", str(path), "--no-meta",
            )
            assert code == 0
            assert "E_total slope: 1.0" in out
            files.append(path.read_text())
        assert files[0] == files[1]

    def test_branch_exit_code(self, capsys):
        code, _, err = run(capsys, "order", "none", "--at-max", "2.0", "--seed", "7")
        assert code == 3
        assert "shrink" in err

    def test_degenerate_prints_not_defined(self, capsys):
        code, out, _ = run(
            capsys,
            "order", "udd", "--n", "2", "--preset", "pure_dephasing",
            "--functional", "flip", "--points", "4", "--seed", "7",
        )
        assert code == 0
        assert "not defined" in out

    def test_seed_ensemble_and_jobs(self, capsys, tmp_path):
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        for path, jobs in ((serial, "1"), (threaded, "3")):
            code, _, _ = run(
                capsys,
                "order", "none", "--points", "4", "--seeds", "1,2,3",
                "--jobs", jobs, "--out", str(path), "--no-meta",
            )
            assert code == 0
        assert serial.read_text() == threaded.read_text()

    def test_seed_env_fallback(self, capsys, tmp_path, monkeypatch):
        env_csv = tmp_path / "env.csv"
        flag_csv = tmp_path / "flag.csv"
        monkeypatch.setenv("DDFORGE_SEED", "42")
        code, _, _ = run(capsys, "order", "none", "--points", "4", "--out", str(env_csv), "--no-meta")
        assert code == 0
        monkeypatch.delenv("DDFORGE_SEED")
        code, _, _ = run(capsys, "order", "none", "--points", "4", "--seed", "42", "--out", str(flag_csv), "--no-meta")
        assert code == 0
        assert env_csv.read_text() == flag_csv.read_text()

    def test_config_precedence(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"n": 1, "points": 4, "seed": 7, "functional": "flip"}))
        def printed_slope(text):
            line = [ln for ln in text.splitlines() if ln.startswith("E_flip slope:")][0]
            return float(line.split()[2])

        code, out, _ = run(capsys, "order", "udd", "--config", str(config))
        assert code == 0
        assert printed_slope(out) == pytest.approx(2.0, abs=0.25)  # n=1 from config
        code, out, _ = run(capsys, "order", "udd", "--config", str(config), "--n", "2")
        assert code == 0
        assert printed_slope(out) == pytest.approx(3.0, abs=0.25)  # flag overrides config


class TestPredictMagnus:
    def test_ratio_output(self, capsys):
        code, out, _ = run(capsys, "predict-magnus", "--level", "1", "--tau0", "0.01", "--halvings", "2", "--seed", "7")
        assert code == 0
        assert "deviation ratio" in out
        ratios = [float(ln.rsplit(" ", 1)[1]) for ln in out.splitlines() if ln.startswith("deviation ratio")]
        assert all(r == pytest.approx(4.0, abs=0.5) for r in ratios)


class TestCompare:
    def test_table(self, capsys):
        code, out, _ = run(
            capsys,
            "compare", "--seq", "udd,n=2", "--seq", "cpmg,axis=Z", "--t", "0.01", "--seed", "7",
        )
        assert code == 0
        assert "UDD-2" in out and "CPMG" in out

    def test_needs_seq(self, capsys):
        code, _, err = run(capsys, "compare", "--t", "0.01")
        assert code == 2
        assert "--seq" in err
