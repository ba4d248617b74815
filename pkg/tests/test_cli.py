"""CLI behavior: files, determinism, config merging, exit codes."""

import json

import pytest
from click.testing import CliRunner

from donation_ca.cli import main
from donation_ca.formats import parse_pbm


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kw):
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    return result


class TestRunCommand:
    def test_writes_three_files(self, runner, tmp_path):
        out = tmp_path / "demo"
        result = invoke(runner, ["run", "--rule", "RBA:both", "--n", "50",
                                 "--steps", "50", "--seed", "7", "--out", str(out)])
        assert result.exit_code == 0
        assert "Wolfram 251" in result.output
        matrix = parse_pbm((tmp_path / "demo.pbm").read_text())
        assert matrix.shape == (51, 50)
        assert (tmp_path / "demo.metrics.csv").exists()
        meta = json.loads((tmp_path / "demo.meta.json").read_text())
        assert meta["command"] == "run"
        assert meta["config"]["seed"] == 7

    def test_byte_identical_reruns(self, runner, tmp_path):
        args = ["run", "--rule", "IGB:both", "--n", "30", "--steps", "20",
                "--seed", "11", "--er", "0.1"]
        invoke(runner, args + ["--out", str(tmp_path / "a")])
        invoke(runner, args + ["--out", str(tmp_path / "b")])
        for suffix in (".pbm", ".metrics.csv", ".meta.json"):
            assert (tmp_path / f"a{suffix}").read_bytes() == \
                   (tmp_path / f"b{suffix}").read_bytes()

    def test_meta_json_reproduces_run(self, runner, tmp_path):
        invoke(runner, ["run", "--rule", "FS:both", "--n", "24", "--steps", "15",
                        "--seed", "3", "--swap", "2", "--out", str(tmp_path / "a")])
        result = invoke(runner, ["run", "--config", str(tmp_path / "a.meta.json"),
                                 "--out", str(tmp_path / "b")])
        assert result.exit_code == 0
        assert (tmp_path / "a.pbm").read_bytes() == (tmp_path / "b.pbm").read_bytes()
        assert (tmp_path / "a.metrics.csv").read_bytes() == \
               (tmp_path / "b.metrics.csv").read_bytes()

    def test_flags_override_config_file(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"rule": "FS:both", "n": 12, "steps": 5, "seed": 1}))
        invoke(runner, ["run", "--config", str(cfg), "--seed", "2",
                        "--out", str(tmp_path / "x")])
        meta = json.loads((tmp_path / "x.meta.json").read_text())
        assert meta["config"]["seed"] == 2
        assert meta["config"]["n"] == 12

    def test_init_file(self, runner, tmp_path):
        states = tmp_path / "init.txt"
        states.write_text("1010\n")
        invoke(runner, ["run", "--rule", "FS:both", "--n", "4", "--steps", "1",
                        "--init", "file", "--init-file", str(states),
                        "--out", str(tmp_path / "x")])
        assert parse_pbm((tmp_path / "x.pbm").read_text()).tolist() == \
            [[1, 0, 1, 0], [0, 1, 0, 1]]

    def test_bad_rule_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "--rule", "WAT:both",
                                      "--out", str(tmp_path / "x")])
        assert result.exit_code == 2

    def test_missing_rule_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "--out", str(tmp_path / "x")])
        assert result.exit_code == 2

    def test_directed_odd_n_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["run", "--rule", "RBA:both", "--n", "9",
                                      "--directed", "--out", str(tmp_path / "x")])
        assert result.exit_code == 2


class TestSweepCommand:
    def test_sweep_csv(self, runner, tmp_path):
        result = invoke(runner, ["sweep", "--rules", "RBA:both:h", "--axis", "swap",
                                 "--values", "0,20", "--n", "20", "--steps", "10",
                                 "--replicates", "2", "--seed", "1",
                                 "--out", str(tmp_path / "s")])
        assert result.exit_code == 0
        lines = (tmp_path / "s.csv").read_text().strip().splitlines()
        assert len(lines) == 3
        assert lines[1].startswith("72,0,")

    def test_worker_pool_size_does_not_change_bytes(self, runner, tmp_path):
        args = ["sweep", "--rules", "IGB:both,FS:both", "--axis", "er",
                "--values", "0,0.3", "--n", "16", "--steps", "8",
                "--replicates", "3", "--seed", "9"]
        invoke(runner, args + ["--out", str(tmp_path / "w1")],
               env={"DONATION_CA_THREADS": "1"})
        invoke(runner, args + ["--out", str(tmp_path / "w4")],
               env={"DONATION_CA_THREADS": "4"})
        assert (tmp_path / "w1.csv").read_bytes() == (tmp_path / "w4.csv").read_bytes()

    def test_values_required(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep", "--axis", "swap",
                                      "--out", str(tmp_path / "s")])
        assert result.exit_code == 2


class TestEvolveCommand:
    def test_evolve_outputs(self, runner, tmp_path):
        result = invoke(runner, ["evolve", "--population", "16", "--generations", "3",
                                 "--gen-iters", "8", "--seed", "2", "--bitmap",
                                 "--out", str(tmp_path / "e")])
        assert result.exit_code == 0
        lines = (tmp_path / "e.csv").read_text().strip().splitlines()
        assert len(lines) == 5
        assert (tmp_path / "e.pbm").exists()
        meta = json.loads((tmp_path / "e.meta.json").read_text())
        assert meta["rule_numbers"][0] == 219


class TestImageScoreCommand:
    def test_imagescore_csv(self, runner, tmp_path):
        result = invoke(runner, ["imagescore", "--population", "12", "--rounds", "100",
                                 "--replicates", "2", "--noise", "0,0.2",
                                 "--swaps", "0,2", "--seed", "4",
                                 "--out", str(tmp_path / "i")])
        assert result.exit_code == 0
        lines = (tmp_path / "i.csv").read_text().strip().splitlines()
        assert len(lines) == 9

    def test_bad_noise_list_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, ["imagescore", "--noise", "0,zebra",
                                      "--out", str(tmp_path / "i")])
        assert result.exit_code == 2
