"""End-to-end runs of every ``lumbound`` command through ``main``."""

from __future__ import annotations

import csv
import io
import json
import sys
from collections.abc import Iterator
from pathlib import Path

import pytest

from lumbound.cli.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from lumbound.io.codec import dumps_payload
from lumbound.observability.logging import LogLevel, configure
from lumbound.verification import verifier
from lumbound.verification.verifier import VerificationError

pytestmark = pytest.mark.integration


@pytest.fixture(autouse=True)
def restore_logging() -> Iterator[None]:
    """main() binds the logger to the current stderr; rebind it once capture ends."""
    stream = sys.stderr
    yield
    configure(LogLevel.WARN, stream=stream, json=False)


def _document(text: str) -> dict:
    document = json.loads(text)
    assert set(document) == {"metadata", "payload"}
    return document["payload"]


def _csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:
    def test_help_exits_ok(self, capsys):
        """Test that --help is a successful run."""
        code, out, _ = _run(capsys, "--help")
        assert code == EXIT_OK
        assert "verify" in out

    def test_unknown_command(self, capsys):
        """Test that argparse errors map to the usage exit code."""
        code, _, _ = _run(capsys, "explode")
        assert code == EXIT_USAGE

    def test_bad_flag_value(self, capsys):
        """Test that a malformed option value is a usage error."""
        code, _, _ = _run(capsys, "tabulate", "--resolution", "many")
        assert code == EXIT_USAGE

    def test_config_error_is_reported(self, capsys):
        """Test that validation issues exit 2 with their locations on stderr."""
        code, out, err = _run(capsys, "verify", "--p", "1")
        assert code == EXIT_USAGE
        assert out == ""
        assert "verify.p" in err
        assert "cli.config_error" in err

    def test_config_file(self, capsys, tmp_path: Path):
        """Test settings from a config file nested under the command name."""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"tabulate": {"p": 0, "q": "inf", "resolution": 5}}), encoding="utf-8")
        code, out, _ = _run(capsys, "tabulate", "--config", str(config), "--format", "json")
        assert code == EXIT_OK
        payload = _document(out)
        assert payload["regime"] == "p_zero_q_inf"
        assert len(payload["rows"]) == 5

    def test_config_file_unknown_key(self, capsys, tmp_path: Path):
        """Test that an unknown key in the file is rejected."""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"resolutoin": 5}), encoding="utf-8")
        code, _, err = _run(capsys, "tabulate", "--config", str(config))
        assert code == EXIT_USAGE
        assert "tabulate.resolutoin" in err

    def test_missing_config_file(self, capsys, tmp_path: Path):
        """Test that an unreadable config file is a usage error."""
        code, _, _ = _run(capsys, "tabulate", "--config", str(tmp_path / "absent.json"))
        assert code == EXIT_USAGE

    def test_log_level_alias(self, capsys):
        """Test that --log-level accepts lower case and the warning alias."""
        code, _, err = _run(capsys, "tabulate", "--resolution", "3", "--log-level", "warning")
        assert code == EXIT_OK
        assert "cli.done" not in err


class TestTabulate:
    def test_csv_to_stdout(self, capsys):
        """Test the default CSV table, its endpoints and the midpoint where f_P = p/(1+p)."""
        code, out, err = _run(capsys, "tabulate", "--p", "1", "--q", "1", "--resolution", "5")
        assert code == EXIT_OK
        rows = _csv_rows(out)
        assert [float(r["eta"]) for r in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
        middle = rows[2]
        assert float(middle["f_p"]) == pytest.approx(0.5)
        assert float(middle["minimal_risk"]) == pytest.approx(1.0)
        assert float(middle["g"]) == 0.0
        assert float(rows[-1]["f_p"]) == float("inf")
        assert float(rows[-1]["g_prime"]) == float("inf")
        assert "cli.done" in err

    def test_hinge_has_no_lower_bound(self, capsys):
        """Test that the hinge row leaves the lower-bound column as nan."""
        code, out, _ = _run(capsys, "tabulate", "--p", "inf", "--q", "1", "--resolution", "3")
        assert code == EXIT_OK
        assert all(r["lower_bound"] == "nan" for r in _csv_rows(out))

    def test_json_to_file(self, capsys, tmp_path: Path):
        """Test --out with the JSON document; non-finite values become strings."""
        target = tmp_path / "table.json"
        code, out, _ = _run(capsys, "tabulate", "--resolution", "3", "--format", "json", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        document = json.loads(target.read_text(encoding="utf-8"))
        assert document["metadata"]["run_id"].startswith("tabulate_")
        assert document["payload"]["rows"][0]["f_p"] == "-inf"


class TestVerify:
    def test_general_sweep(self, capsys, tmp_path: Path):
        """Test a small general sweep over the default grid with a per-trial CSV."""
        trials = tmp_path / "trials.csv"
        code, out, _ = _run(capsys, "verify", "--trials", "40", "--seed", "3", "--trials-csv", str(trials))
        assert code == EXIT_OK
        payload = _document(out)
        assert payload["mode"] == "general"
        assert payload["general"]["trials"] == 40
        assert payload["general"]["violations"] == 0
        assert payload["general"]["seed"] == 3
        rows = _csv_rows(trials.read_text(encoding="utf-8"))
        assert [int(r["index"]) for r in rows] == list(range(40))

    def test_payload_is_reproducible(self, capsys):
        """Test that the payload depends only on the inputs and the seed."""
        argv = ("verify", "--p", "0", "--q", "2", "--trials", "25", "--seed", "11")
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        # "payload" sorts after "metadata", so each document ends with the payload text
        first_text = first[first.index('"payload":') :]
        second_text = second[second.index('"payload":') :]
        assert first_text == second_text
        assert dumps_payload(_document(first)) == dumps_payload(_document(second))
        assert json.loads(first)["metadata"] != json.loads(second)["metadata"]

    def test_noise_sweep_csv(self, capsys):
        """Test a noise sweep with one (tau, c_tau) pair and a fixed q."""
        code, out, _ = _run(
            capsys,
            "verify",
            "--mode", "noise",
            "--p", "0",
            "--q", "inf",
            "--tau", "1",
            "--c-tau", "1",
            "--noise-trials", "15",
            "--n-atoms", "40",
            "--format", "csv",
        )  # fmt: skip
        assert code == EXIT_OK
        (row,) = _csv_rows(out)
        assert row["sweep"] == "noise"
        assert int(row["trials"]) == 15
        assert int(row["violations"]) == 0

    def test_violation_exits_one(self, capsys, monkeypatch):
        """Test that a failing sweep exits 1 but still writes its report."""
        original = verifier._check

        def inflated(dist, f, params, bound):
            check = original(dist, f, params, bound)
            return verifier.BoundCheck(check.rhs + 1.0, check.rhs, -1.0, check.excess_generalization)

        monkeypatch.setattr(verifier, "_check", inflated)
        code, out, err = _run(capsys, "verify", "--trials", "3")
        assert code == EXIT_FAILURE
        assert _document(out)["general"]["violations"] == 3
        assert "cli.violations" in err

    def test_verification_error_exits_one(self, capsys, monkeypatch):
        """Test that an inconsistent computation aborts with exit 1."""

        def broken(dist, f, params, bound):
            raise VerificationError("negative excess generalization risk")

        monkeypatch.setattr(verifier, "_check", broken)
        code, out, err = _run(capsys, "verify", "--trials", "2")
        assert code == EXIT_FAILURE
        assert out == ""
        assert "negative excess" in err


class TestSampleTrainEvaluate:
    def test_pipeline(self, capsys, tmp_path: Path):
        """Test sample -> train -> evaluate on a grid distribution."""
        samples = tmp_path / "samples.csv"
        dist = tmp_path / "dist.json"
        model = tmp_path / "model.json"
        trace = tmp_path / "trace.csv"

        code, _, _ = _run(capsys, "sample", "--n", "200", "--n-atoms", "21", "--format", "csv", "--out", str(samples))
        assert code == EXIT_OK
        header = samples.read_text(encoding="utf-8").splitlines()[0]
        assert header == "x0,label"

        code, _, _ = _run(capsys, "sample", "--emit", "distribution", "--n-atoms", "21", "--out", str(dist))
        assert code == EXIT_OK
        assert len(_document(dist.read_text(encoding="utf-8"))["distribution"]["etas"]) == 21

        code, _, _ = _run(
            capsys,
            "train",
            "--data", str(samples),
            "--max-iters", "100",
            "--out", str(model),
            "--trace", str(trace),
        )  # fmt: skip
        assert code == EXIT_OK
        trained = _document(model.read_text(encoding="utf-8"))
        assert trained["params"] == {"p": 1.0, "q": 1.0}
        assert trained["iterations"] <= 100
        trace_rows = _csv_rows(trace.read_text(encoding="utf-8"))
        assert len(trace_rows) == trained["iterations"] + 1

        code, out, _ = _run(capsys, "evaluate", "--model", str(model), "--dist", str(dist))
        assert code == EXIT_OK
        evaluated = _document(out)
        assert evaluated["slack"] >= 0.0
        assert evaluated["risk"]["excess_generalization"] >= -1e-12

        code, out, _ = _run(capsys, "evaluate", "--model", str(model), "--samples", str(samples), "--format", "csv")
        assert code == EXIT_OK
        (row,) = _csv_rows(out)
        assert int(row["n"]) == 200
        assert 0.0 <= float(row["misclassification"]) <= 1.0

    def test_json_outputs_chain(self, capsys, tmp_path: Path):
        """Test that JSON written by sample and train is accepted by train, evaluate and sample."""
        samples = tmp_path / "samples.json"
        dist = tmp_path / "dist.json"
        model = tmp_path / "model.json"
        resampled = tmp_path / "resampled.json"

        code, _, _ = _run(capsys, "sample", "--n", "120", "--n-atoms", "15", "--seed", "2", "--out", str(samples))
        assert code == EXIT_OK
        code, _, _ = _run(capsys, "sample", "--emit", "distribution", "--n-atoms", "15", "--out", str(dist))
        assert code == EXIT_OK

        code, _, _ = _run(capsys, "train", "--data", str(samples), "--max-iters", "200", "--out", str(model))
        assert code == EXIT_OK
        assert len(_document(model.read_text(encoding="utf-8"))["model"]["w"]) == 1

        code, out, _ = _run(capsys, "evaluate", "--model", str(model), "--dist", str(dist))
        assert code == EXIT_OK
        assert _document(out)["slack"] >= 0.0

        code, out, _ = _run(capsys, "evaluate", "--model", str(model), "--samples", str(samples))
        assert code == EXIT_OK
        assert _document(out)["empirical"]["n"] == 120

        code, _, _ = _run(
            capsys,
            "sample",
            "--source", "file",
            "--dist", str(dist),
            "--n", "40",
            "--out", str(resampled),
        )  # fmt: skip
        assert code == EXIT_OK
        assert len(_document(resampled.read_text(encoding="utf-8"))["samples"]["labels"]) == 40

    def test_sample_is_seeded(self, capsys):
        """Test that equal seeds draw equal samples."""
        argv = ("sample", "--n", "30", "--seed", "4", "--format", "csv")
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        assert first == second

    def test_sample_from_tsybakov(self, capsys):
        """Test the noise-condition source."""
        code, out, _ = _run(capsys, "sample", "--source", "tsybakov", "--tau", "2", "--c-tau", "0.5", "--n", "10")
        assert code == EXIT_OK
        assert len(_document(out)["samples"]["labels"]) == 10

    def test_train_synthetic(self, capsys):
        """Test training on the default Gaussian clouds."""
        code, out, _ = _run(capsys, "train", "--max-iters", "50", "--n-per-class", "20")
        assert code == EXIT_OK
        payload = _document(out)
        assert len(payload["model"]["w"]) == 2
        assert payload["training_error"] <= 0.1

    def test_evaluate_missing_model(self, capsys, tmp_path: Path):
        """Test that a missing model file is an input error."""
        samples = tmp_path / "s.csv"
        samples.write_text("x0,label\n1.0,1\n", encoding="utf-8")
        code, _, _ = _run(capsys, "evaluate", "--model", str(tmp_path / "absent.json"), "--samples", str(samples))
        assert code == EXIT_USAGE

    def test_evaluate_dimension_mismatch(self, capsys, tmp_path: Path):
        """Test that a model of the wrong width is an input error."""
        model = tmp_path / "model.json"
        model.write_text(json.dumps({"w": [1.0, 2.0], "b": 0.0}), encoding="utf-8")
        samples = tmp_path / "s.csv"
        samples.write_text("x0,label\n1.0,1\n", encoding="utf-8")
        code, _, _ = _run(capsys, "evaluate", "--model", str(model), "--samples", str(samples))
        assert code == EXIT_USAGE


class TestPiling:
    def test_small_run(self, capsys):
        """Test a cheap piling comparison; the direction is reported, not enforced."""
        code, out, _ = _run(
            capsys,
            "piling",
            "--d", "20",
            "--n-per-class", "4",
            "--n-seeds", "2",
            "--max-iters", "30",
            "--format", "csv",
        )  # fmt: skip
        assert code == EXIT_OK
        rows = _csv_rows(out)
        assert [int(r["seed"]) for r in rows] == [0, 1]
