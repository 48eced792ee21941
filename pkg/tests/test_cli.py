import json

import numpy as np
import pytest

from stochpp.cli import main, parse_config, read_samples, write_samples
from stochpp.samplers import SampleBatch


def run_args(out, *extra):
    return ["run", "--model", "ball", "--variant", "deterministic", "--sampler", "hmc",
            "--step-size", "0.2", "--samples", "60", "--burnin", "10", "--seed", "5",
            "--out", str(out), *extra]


class TestParse:
    def test_defaults(self):
        cfg = parse_config(["run", "--model", "ball", "--variant", "stochastic",
                            "--sampler", "sghmc"])
        assert cfg.step_size == 0.01 and cfg.n_draws is None and cfg.chains == 1

    @pytest.mark.parametrize("argv, message", [
        (["--model", "ball", "--variant", "stochastic", "--sampler", "hmc"],
         "hmc requires deterministic variant"),
        (["--model", "gmm", "--variant", "stochastic", "--sampler", "mhmc"],
         "--data is required"),
        (["--model", "ball", "--variant", "stochastic", "--sampler", "mhmc"],
         "mhmc requires a marginalization model"),
        (["--model", "ball", "--variant", "blackbox", "--sampler", "mhmc"],
         "blackbox"),
        (["--model", "ball", "--variant", "deterministic", "--sampler", "hmc",
          "--step-size", "-1"], "--step-size must be positive"),
    ])
    def test_errors(self, argv, message, capsys):
        with pytest.raises(SystemExit) as info:
            parse_config(["run", *argv])
        assert info.value.code == 2
        assert message in capsys.readouterr().err


class TestRun:
    def test_outputs(self, tmp_path, capsys):
        assert main(run_args(tmp_path / "a")) == 0
        doc = json.loads((tmp_path / "a" / "summary.json").read_text())
        assert json.loads(capsys.readouterr().out) == doc
        assert doc["samples"] == 60 and doc["seconds"] is None
        assert set(doc) >= {"model", "variant", "sampler", "seed", "mean", "sd", "ess", "mcse",
                            "divergences", "accept_rate", "config"}
        lines = (tmp_path / "a" / "samples.csv").read_text().splitlines()
        assert lines[0] == "chain,iter,logp,x0" and len(lines) == 61

    def test_byte_identical(self, tmp_path):
        main(run_args(tmp_path / "a", "--chains", "2"))
        main(run_args(tmp_path / "b", "--chains", "2"))
        for name in ("samples.csv", "summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_record_time(self, tmp_path):
        main(run_args(tmp_path / "a", "--record-time"))
        assert json.loads((tmp_path / "a" / "summary.json").read_text())["seconds"] > 0

    def test_survey_from_file(self, tmp_path):
        data = tmp_path / "y.csv"
        data.write_text("answer\ntrue\ntrue\nfalse\n")
        argv = ["run", "--model", "survey", "--variant", "stochastic", "--sampler", "mhmc",
                "--data", str(data), "--samples", "30", "--burnin", "5",
                "--out", str(tmp_path / "s")]
        assert main(argv) == 0

    def test_gmm_rejects_boolean_data(self, tmp_path):
        data = tmp_path / "y.csv"
        data.write_text("true\nfalse\n")
        argv = ["run", "--model", "gmm", "--variant", "deterministic", "--sampler", "hmc",
                "--data", str(data), "--samples", "20"]
        assert main(argv) == 2

    def test_missing_data_file(self, tmp_path):
        argv = ["run", "--model", "survey", "--variant", "deterministic", "--sampler", "hmc",
                "--data", str(tmp_path / "nope.csv")]
        assert main(argv) == 2


class TestCompare:
    def write(self, path, mean, seed):
        r = np.random.default_rng(seed)
        s = mean + r.normal(size=(2000, 1))
        write_samples(path, [SampleBatch(s, np.zeros(2000), seed, np.arange(2000))])

    def test_round_trip(self, tmp_path):
        s = np.array([[0.1, 1 / 3], [2.5, -7e-12]] * 6)
        b = SampleBatch(s, np.arange(12.0), 1, np.arange(12), chain=3)
        write_samples(tmp_path / "s.csv", [b])
        (back,) = read_samples(tmp_path / "s.csv")
        assert back.chain == 3 and back.samples.tobytes() == s.tobytes()

    def test_exit_codes(self, tmp_path, capsys):
        self.write(tmp_path / "a.csv", 0.0, 1)
        self.write(tmp_path / "b.csv", 0.0, 2)
        self.write(tmp_path / "c.csv", 1.0, 3)
        assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 0
        assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "c.csv")]) == 1
        assert '"ok": false' in capsys.readouterr().out

    def test_not_a_samples_file(self, tmp_path):
        (tmp_path / "x.csv").write_text("a,b\n1,2\n")
        assert main(["compare", str(tmp_path / "x.csv"), str(tmp_path / "x.csv")]) == 2
