"""Command-line contract: outputs, schema, exit codes, determinism."""

from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "swh.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def load_schema():
    with resources.files("swh").joinpath("run_report_schema.json").open() as handle:
        return json.load(handle)


SCHEMA = load_schema()


def json_doc(*args):
    proc = run_cli(*args, "--format", "json")
    assert proc.returncode == 0, proc.stderr
    document = json.loads(proc.stdout)
    jsonschema.validate(document, SCHEMA)
    return document


class TestExactCommand:
    def test_rational_text(self):
        proc = run_cli("exact", "--n", "4", "--k", "2", "--beta", "0.5", "--rational")
        assert proc.returncode == 0
        assert "2/3" in proc.stdout and "0.666667" in proc.stdout

    def test_json_document(self):
        document = json_doc("exact", "--n", "4", "--k", "2", "--beta", "0.5")
        (record,) = document["results"]
        assert record["numerator"] == 2 and record["denominator"] == 3
        assert record["value"] == pytest.approx(2 / 3, abs=1e-6)

    def test_nondivisor_rejected(self):
        proc = run_cli("exact", "--n", "5", "--k", "2", "--beta", "0.5")
        assert proc.returncode == 2
        assert proc.stdout == ""
        assert len(proc.stderr.strip().splitlines()) == 1
        assert "divide" in proc.stderr

    def test_k1_warns_and_ignores_beta(self):
        proc = run_cli("exact", "--n", "4", "--k", "1", "--beta", "0.9", "--rational")
        assert proc.returncode == 0
        assert "11/24" in proc.stdout
        assert "ignored" in proc.stderr


class TestAsymptoticCommand:
    def test_reported_values(self):
        for k, expected in ((2, 0.47), (10, 0.55)):
            document = json_doc("asymptotic", "--k", str(k), "--beta", "0.63")
            (record,) = document["results"]
            assert record["q"] == pytest.approx(expected, abs=0.005)
            assert record["terms"] > 0
            assert record["residual"] <= 1e-6

    def test_k1_is_constant(self):
        proc = run_cli("asymptotic", "--k", "1")
        assert proc.returncode == 0
        assert "0.367879" in proc.stdout
        assert "1/e" in proc.stdout
        document = json_doc("asymptotic", "--k", "1")
        assert document["results"][0]["terms"] == 0

    def test_nonconvergence_exit_code(self):
        proc = run_cli("asymptotic", "--k", "2", "--beta", "0.000001", "--tol", "1e-12")
        assert proc.returncode == 3
        assert "error" in proc.stderr


class TestSimulateCommand:
    ARGS = (
        "simulate", "--n", "20", "--k", "2", "--beta", "0.63",
        "--trials", "150000", "--seed", "7",
    )

    def test_fixed_seed_is_byte_identical(self):
        first = run_cli(*self.ARGS, "--format", "json")
        second = run_cli(*self.ARGS, "--format", "json")
        results_first = json.dumps(json.loads(first.stdout)["results"])
        results_second = json.dumps(json.loads(second.stdout)["results"])
        assert results_first == results_second

    def test_worker_count_does_not_change_results(self):
        one = json_doc(*self.ARGS, "--workers", "1")
        two = json_doc(*self.ARGS, "--workers", "2")
        assert one["results"] == two["results"]

    def test_matches_exact_value(self):
        from swh.exact import exact_r

        document = json_doc(*self.ARGS)
        (record,) = document["results"]
        reference = float(exact_r(20, 2, "0.63"))
        assert abs(record["mean"] - reference) <= 4 * record["std_error"]
        assert document["metadata"]["seed"] == 7


class TestTableCommand:
    def test_reported_row_values(self):
        document = json_doc("table", "--k", "2,3,10", "--beta", "0.63")
        rows = {record["k"]: record["q"] for record in document["results"]}
        assert rows[2] == pytest.approx(0.47, abs=0.005)
        assert rows[3] == pytest.approx(0.51, abs=0.005)
        assert rows[10] == pytest.approx(0.55, abs=0.005)

    def test_beta_sweep_csv_shape(self):
        proc = run_cli("table", "--k", "2", "--beta", "0.1:0.9:0.1", "--format", "csv")
        assert proc.returncode == 0
        reader = csv.reader(io.StringIO(proc.stdout))
        header = next(reader)
        assert header == ["k", "beta", "q", "terms", "residual"]
        rows = list(reader)
        assert len(rows) == 9
        assert [row[1] for row in rows] == [
            "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9",
        ]

    def test_empty_k_list_is_usage_error(self):
        proc = run_cli("table", "--k", "", "--beta", "0.63")
        assert proc.returncode == 2

    def test_k_range_syntax(self):
        document = json_doc("table", "--k", "2:6:2", "--beta", "0.5")
        assert [record["k"] for record in document["results"]] == [2, 4, 6]


class TestOptimizeCommand:
    def test_beats_recommended_point(self):
        from swh.asymptotic import q_value

        document = json_doc("optimize", "--k", "2", "--tol", "1e-5")
        (record,) = document["results"]
        assert record["q_star"] >= q_value(2, 0.63, 1e-9).value - 1e-9
        assert 0.0 < record["beta_star"] < 1.0

    def test_k1_rejected(self):
        proc = run_cli("optimize", "--k", "1")
        assert proc.returncode == 2
        assert "K must be >= 2" in proc.stderr


class TestReportPlumbing:
    def test_documents_validate_and_round_trip(self):
        documents = [
            json_doc("exact", "--n", "8", "--k", "2", "--beta", "0.25"),
            json_doc("asymptotic", "--k", "3"),
            json_doc("table", "--k", "2,3", "--beta", "0.5,0.63"),
            json_doc("optimize", "--k", "2", "--tol", "1e-4"),
        ]
        for document in documents:
            assert document == json.loads(json.dumps(document))

    def test_output_file(self, tmp_path):
        target = tmp_path / "report.json"
        proc = run_cli(
            "exact", "--n", "4", "--k", "2", "--beta", "0.5",
            "--format", "json", "--output", str(target),
        )
        assert proc.returncode == 0 and proc.stdout == ""
        jsonschema.validate(json.loads(target.read_text()), SCHEMA)

    def test_precision_flag(self):
        proc = run_cli("exact", "--n", "4", "--k", "2", "--beta", "0.5", "--precision", "3")
        assert "0.667" in proc.stdout

    def test_unknown_command_usage_error(self):
        proc = run_cli("nonsense")
        assert proc.returncode == 2
