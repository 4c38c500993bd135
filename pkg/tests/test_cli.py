"""
CLI Tests
End-to-end runs of `isqp solve|gen|bench|svm` through main().
"""

import csv
import io
import json
import logging
from pathlib import Path

import numpy as np
import pytest

from src.cli import main
from src.core.benchmark import BENCH_COLUMNS
from src.core.problem import CqpProblem, save_problem
from src.core.solver_types import TRACE_COLUMNS
from src.utils.logger import get_logger

SCHEMA_DIR = Path(__file__).parent / "data"


def _shape(obj):
    """{key: JSON kind} of one report object."""
    def kind(value):
        if value is None:
            return "null"
        if isinstance(value, bool):
            return "bool"
        if isinstance(value, (int, float)):
            return "number"
        if isinstance(value, str):
            return "string"
        return "array" if isinstance(value, list) else "object"
    return {key: kind(value) for key, value in obj.items()}


@pytest.fixture
def problem_file(tmp_path):
    def _write(problem: CqpProblem, name: str = "problem.json") -> str:
        path = tmp_path / name
        save_problem(problem, str(path))
        return str(path)
    return _write


class TestSolveCommand:

    def test_optimal_exit_code(self, problem_file, scalar_qp, capsys):
        code = main(["solve", problem_file(scalar_qp), "--x0", "random:3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["status"] == "optimal"
        assert out["x"][0] == pytest.approx(1.0, abs=1e-6)
        assert set(out["duals"]) == {"pi", "omega", "eta", "zeta"}

    def test_infeasible_exit_code(self, problem_file, inconsistent_pair, capsys):
        code = main(["solve", problem_file(inconsistent_pair)])
        out = json.loads(capsys.readouterr().out)
        assert code == 2
        assert out["status"] == "infeasible"
        assert out["certificate"]["valid"]
        assert out["relaxation"] is not None

    def test_iteration_limit_exit_code(self, problem_file, scalar_qp, capsys):
        code = main(["solve", problem_file(scalar_qp), "--x0", "random:1", "--max-iter", "1"])
        capsys.readouterr()
        assert code == 3

    def test_trace_file(self, problem_file, equality_qp, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        code = main(["solve", problem_file(equality_qp), "--trace", str(trace)])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(trace.read_text())))
        assert tuple(rows[0]) == TRACE_COLUMNS
        assert rows[0]["iter"] == "0"
        assert int(rows[-1]["iter"]) == out["iterations"]

    def test_x0_from_file(self, problem_file, equality_qp, tmp_path, capsys):
        x0 = tmp_path / "x0.json"
        x0.write_text("[3.0, -1.0]")
        assert main(["solve", problem_file(equality_qp), "--x0", str(x0)]) == 0
        capsys.readouterr()

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "absent.json")]) == 1
        assert capsys.readouterr().out == ""

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["solve"]) == 1
        capsys.readouterr()

    def test_invalid_option_value(self, problem_file, scalar_qp, capsys):
        assert main(["solve", problem_file(scalar_qp), "--tol", "-1"]) == 1
        capsys.readouterr()

    def test_report_matches_stored_schema(self, problem_file, inconsistent_pair, capsys):
        """Key set and value kinds of the infeasible report are fixed"""
        schema = json.loads((SCHEMA_DIR / "solve_report_schema.json").read_text())
        assert main(["solve", problem_file(inconsistent_pair)]) == 2
        out = json.loads(capsys.readouterr().out)

        assert _shape(out) == schema["report"]
        assert _shape(out["duals"]) == schema["duals"]
        assert _shape(out["certificate"]) == schema["certificate"]
        assert _shape(out["relaxation"]) == schema["relaxation"]
        for row in out["trace"]:
            assert _shape(row) == schema["trace_row"]
        for entry in out["diagnostics"]:
            assert _shape(entry) == schema["diagnostic"]

    def test_log_level_flag(self, problem_file, scalar_qp, capsys):
        logger = get_logger()
        before = logger.console_level
        try:
            assert main(["--log-level", "error", "solve", problem_file(scalar_qp)]) == 0
            assert logger.console_level == logging.ERROR
        finally:
            logger.console_handler.setLevel(before)
        capsys.readouterr()

    def test_unknown_log_level_is_usage_error(self, problem_file, scalar_qp, capsys):
        assert main(["--log-level", "loud", "solve", problem_file(scalar_qp)]) == 1
        capsys.readouterr()


class TestGenCommand:

    def test_byte_identical_output(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["gen", "--m", "20", "--n", "4", "--p", "2", "--seed", "9", "-o", str(a)]) == 0
        assert main(["gen", "--m", "20", "--n", "4", "--p", "2", "--seed", "9", "-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.xfeas.json").read_bytes() == (tmp_path / "b.xfeas.json").read_bytes()

    def test_feasible_witness(self, tmp_path):
        path = tmp_path / "inst.json"
        main(["gen", "--m", "15", "--n", "3", "--seed", "2", "-o", str(path)])
        data = json.loads(path.read_text())
        x = np.asarray(json.loads((tmp_path / "inst.xfeas.json").read_text())["x_feas"])
        A, b = np.asarray(data["A"]), np.asarray(data["b"])
        assert np.min(A @ x - b) > 1.0 - 1e-12

    def test_infeasible_needs_two_rows(self, tmp_path):
        assert main(["gen", "--m", "1", "--n", "2", "--infeasible", "-o", str(tmp_path / "x.json")]) == 1
        assert not (tmp_path / "x.json").exists()

    def test_infeasible_instance_solves_to_certificate(self, tmp_path, capsys):
        path = tmp_path / "inf.json"
        assert main(["gen", "--m", "12", "--n", "3", "--infeasible", "--seed", "4", "-o", str(path)]) == 0
        assert main(["solve", str(path), "--x0", "random:2"]) == 2
        out = json.loads(capsys.readouterr().out)
        assert out["certificate"]["residual"] <= 1e-6


class TestBenchCommand:

    def test_zero_reps_rejected(self, capsys):
        assert main(["bench", "--reps", "0"]) == 1
        capsys.readouterr()

    def test_csv_is_deterministic(self, capsys):
        argv = ["bench", "--m", "25", "--n", "2,3", "--reps", "2", "--seed", "1"]
        assert main(argv) == 0
        first = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert main(argv + ["--workers", "2"]) == 0
        second = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert tuple(first[0]) == BENCH_COLUMNS
        assert [r["n"] for r in first] == ["2", "3"]
        for a, b in zip(first, second):
            a.pop("mean_time_ms")
            b.pop("mean_time_ms")
            assert a == b

    def test_output_file(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert main(["bench", "--m", "20", "--n", "2", "--reps", "1", "-o", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert out.read_text().splitlines()[0] == ",".join(BENCH_COLUMNS)


class TestSvmCommand:

    def test_separable_toy(self, tmp_path, capsys):
        data = tmp_path / "sep.csv"
        data.write_text("1.0,1\n-1.0,-1\n")
        assert main(["svm", str(data)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["formulation"] == "hard"
        assert out["w"][0] == pytest.approx(1.0, abs=1e-6)
        assert out["beta"] == pytest.approx(0.0, abs=1e-6)
        assert out["training_accuracy"] == 1.0

    def test_overlapping_toy_falls_back_to_relaxed(self, tmp_path, capsys):
        data = tmp_path / "overlap.csv"
        data.write_text("1.0,1\n1.0,-1\n")
        assert main(["svm", str(data), "--tau", "1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["hard_margin_status"] == "infeasible"
        assert out["hard_margin_certificate"]["valid"]
        assert out["formulation"] == "relaxed"
        assert out["objective"] == pytest.approx(1.0, abs=1e-6)
        for key in ("w", "beta", "nu", "tau", "margin", "report"):
            assert key in out

    def test_hard_only(self, tmp_path, capsys):
        data = tmp_path / "overlap.csv"
        data.write_text("1.0,1\n1.0,-1\n")
        assert main(["svm", str(data), "--hard-only"]) == 2
        assert json.loads(capsys.readouterr().out)["formulation"] == "hard"

    def test_nonpositive_tau_rejected(self, tmp_path, capsys):
        data = tmp_path / "sep.csv"
        data.write_text("1.0,1\n-1.0,-1\n")
        assert main(["svm", str(data), "--tau", "0"]) == 1
        capsys.readouterr()
