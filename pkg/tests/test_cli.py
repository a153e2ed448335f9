from __future__ import annotations

import csv
import io
import json

import pytest
from click.testing import CliRunner

from qa_auth.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


class TestEntropy:
    def test_default_six_probes(self, runner):
        result = runner.invoke(main, ["entropy", "--k", "6"])
        assert result.exit_code == 0
        assert "theoretical_bits=28.20" in result.output

    def test_with_model(self, runner, tmp_path):
        model = tmp_path / "two_point.txt"
        model.write_text("a:0.5\nb:0.5\n")
        result = runner.invoke(main, ["entropy", "--k", "6", "--model", str(model)])
        assert result.exit_code == 0
        assert "effective_bits_per_letter=1.0000" in result.output
        assert "effective_bits_total=6.00" in result.output
        assert "model=two_point" in result.output

    def test_three_probes(self, runner):
        result = runner.invoke(main, ["entropy", "--k", "3"])
        assert "theoretical_bits=14.10" in result.output


class TestSimulateObserve:
    def test_zero_sessions(self, runner):
        result = runner.invoke(
            main, ["simulate", "observe", "--sessions", "0", "--trials", "1000", "--seed", "3"]
        )
        assert result.exit_code == 0
        assert "empirical=0" in result.output
        assert "analytic=0" in result.output

    def test_csv_output(self, runner):
        result = runner.invoke(
            main,
            ["simulate", "observe", "--sessions", "1", "--trials", "500", "--seed", "5", "--output", "csv"],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(io.StringIO(result.output.splitlines()[0] + "\n" + result.output.splitlines()[1])))
        assert rows[0]["kind"] == "observe"
        assert rows[0]["sessions"] == "1"

    def test_json_output(self, runner):
        result = runner.invoke(
            main,
            ["simulate", "observe", "--sessions", "1", "--trials", "200", "--seed", "5", "--output", "json"],
        )
        payload = json.loads(result.output[: result.output.rindex("]") + 1])
        assert payload[0]["trials"] == 200

    def test_byte_identical_reruns(self, runner):
        args = ["simulate", "observe", "--sessions", "2", "--trials", "800", "--seed", "11", "--lengths", "3,4,5"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == second.exit_code == 0
        assert first.output == second.output

    def test_different_seeds_differ(self, runner):
        base = ["simulate", "observe", "--sessions", "1", "--trials", "3000", "--lengths", "3,3,3"]
        first = runner.invoke(main, base + ["--seed", "1"])
        second = runner.invoke(main, base + ["--seed", "2"])
        assert first.output != second.output


class TestSimulateBruteforce:
    def test_single_letter(self, runner):
        result = runner.invoke(
            main,
            ["simulate", "bruteforce", "--k", "1", "--attempts", "1", "--trials", "20000", "--seed", "7"],
        )
        assert result.exit_code == 0
        assert "analytic=0.03846" in result.output

    def test_byte_identical_reruns(self, runner):
        args = ["simulate", "bruteforce", "--k", "2", "--attempts", "3", "--trials", "5000", "--seed", "9"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_table_output_has_header(self, runner):
        result = runner.invoke(
            main, ["simulate", "bruteforce", "--k", "1", "--attempts", "2", "--trials", "100", "--seed", "1"]
        )
        header = result.output.splitlines()[0]
        for column in ("kind", "trials", "empirical", "analytic", "stderr"):
            assert column in header


class TestErrors:
    def test_machine_readable_error_line(self, runner):
        result = runner.invoke(main, ["simulate", "observe", "--sessions", "-1", "--trials", "10"])
        assert result.exit_code == 1
        line = result.output.strip().splitlines()[-1]
        payload = json.loads(line)
        assert payload["error"] == "ValueError"
        assert "sessions" in payload["message"]

    def test_bad_lengths(self, runner):
        result = runner.invoke(main, ["simulate", "observe", "--sessions", "1", "--trials", "10", "--lengths", "2,2,2"])
        assert result.exit_code == 1
        payload = json.loads(result.output.strip().splitlines()[-1])
        assert payload["error"] in ("AnswerRuleError", "ValueError")


class TestInteractiveFlows:
    @pytest.fixture()
    def config_file(self, tmp_path):
        config = tmp_path / "qa.yaml"
        config.write_text(
            "\n".join(
                [
                    f"store_path: {tmp_path / 'store.json'}",
                    "policy:",
                    "  position_strategy: uniform-capped",
                    "  max_position: 1",  # pins probes to position 1 so input is scriptable
                ]
            )
        )
        return config

    @pytest.fixture()
    def env(self):
        return {"QA_SEALING_PASSPHRASE": "test-passphrase"}

    ANSWERS = ["Anderson", "NewYork", "Biscuit", "Springfield", "Lisbon", "Maya"]

    def test_register_then_login(self, runner, config_file, env):
        register_input = "\n".join(
            [str(i) for i in range(1, 7)] + [a for answer in self.ANSWERS for a in (answer, answer)]
        )
        result = runner.invoke(
            main, ["register", "--account", "alice", "--config", str(config_file)],
            input=register_input + "\n", env=env,
        )
        assert result.exit_code == 0, result.output
        assert "registered 'alice' with 6 questions" in result.output

        login_input = "\n".join(answer[0].lower() for answer in self.ANSWERS)
        result = runner.invoke(
            main, ["login", "--account", "alice", "--config", str(config_file)],
            input=login_input + "\n", env=env,
        )
        assert result.exit_code == 0, result.output
        assert "outcome=success" in result.output

    def test_login_wrong_letter_exits_nonzero(self, runner, config_file, env):
        register_input = "\n".join(
            [str(i) for i in range(1, 7)] + [a for answer in self.ANSWERS for a in (answer, answer)]
        )
        runner.invoke(
            main, ["register", "--account", "alice", "--config", str(config_file)],
            input=register_input + "\n", env=env,
        )
        login_input = "\n".join(["z"] * 6)
        result = runner.invoke(
            main, ["login", "--account", "alice", "--config", str(config_file)],
            input=login_input + "\n", env=env,
        )
        assert result.exit_code == 1
        assert "outcome=failure" in result.output

    def test_register_duplicate_answer_rejected(self, runner, config_file, env):
        answers = ["Anderson", "Anderson", "Biscuit", "Springfield", "Lisbon", "Maya"]
        register_input = "\n".join(
            [str(i) for i in range(1, 7)] + [a for answer in answers for a in (answer, answer)]
        )
        result = runner.invoke(
            main, ["register", "--account", "bob", "--config", str(config_file)],
            input=register_input + "\n", env=env,
        )
        assert result.exit_code == 1
        assert "DuplicateAnswer" in result.output


class TestReport:
    def test_writes_figures_and_delimited_output(self, runner, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(main, ["report", "--out-dir", str(out), "--trials", "300", "--seed", "4"])
        assert result.exit_code == 0, result.output
        names = {p.name for p in out.iterdir()}
        assert {"observation.csv", "observation.json", "observation.png", "bruteforce.csv", "bruteforce.json", "bruteforce.png", "entropy.png"} <= names
        with open(out / "observation.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 7
        assert rows[0]["kind"] == "observe"
        assert (out / "observation.png").stat().st_size > 1000
        assert (out / "entropy.png").stat().st_size > 1000

    def test_deterministic_records(self, runner, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        args = lambda d: ["report", "--out-dir", str(d), "--trials", "200", "--seed", "12"]
        assert runner.invoke(main, args(first)).exit_code == 0
        assert runner.invoke(main, args(second)).exit_code == 0
        assert (first / "observation.csv").read_bytes() == (second / "observation.csv").read_bytes()
        assert (first / "bruteforce.csv").read_bytes() == (second / "bruteforce.csv").read_bytes()
