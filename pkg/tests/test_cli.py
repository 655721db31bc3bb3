import json

import pytest

from enrichfem.main import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, main
from tests.test_orchestrator import CONSTANT, DEGENERATE
from tests.test_parsers import TWO_LAYER


def test_csv_to_stdout(capsys) -> None:
    assert main(["--problem", "1", "--levels", "2"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "h,l2,h1_broken,nodal,cond,order_l2,order_h1,order_nodal"
    assert len(lines) == 3
    assert lines[1].startswith("1.25000e-01,")


def test_markdown_with_compare(capsys) -> None:
    assert main(["--problem", "1", "--levels", "2", "--cond", "--format", "md", "--compare"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "condition number" in out
    assert "L2 vs reference" in out
    assert "| h=1/16" in out


def test_json_to_file(tmp_path, capsys) -> None:
    target = tmp_path / "table.json"
    assert main(["--problem", "2", "--levels", "2", "--format", "json", "--out", str(target)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    data = json.loads(target.read_text())
    assert data["metadata"]["problem"] == "2"
    assert len(data["rows"]) == 2


def test_repeated_runs_are_identical(capsys) -> None:
    main(["--problem", "3", "--levels", "2", "--format", "md"])
    first = capsys.readouterr().out
    main(["--problem", "3", "--levels", "2", "--format", "md"])
    assert capsys.readouterr().out == first


def test_problem_file(tmp_path, capsys) -> None:
    path = tmp_path / "two_layer.json"
    path.write_text(json.dumps(TWO_LAYER))
    assert main(["--problem", str(path), "--levels", "2", "--format", "md"]) == EXIT_OK
    assert "Problem two-layer" in capsys.readouterr().out


def test_exact_discrete_solution_exits_ok(tmp_path, capsys) -> None:
    path = tmp_path / "constant.json"
    path.write_text(CONSTANT)
    assert main(["--problem", str(path), "--levels", "2"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["--problem", "7"],
        ["--problem", "1", "--format", "xml"],
        ["--problem", "1", "--degree", "3"],
        ["--problem", "1", "--h0", "abc"],
        ["--problem", "1", "--levels", "0"],
        ["--problem", "1", "--quad", "40"],
        ["--problem", "missing.json"],
    ],
)
def test_input_errors(argv, capsys) -> None:
    assert main(argv) == EXIT_INPUT
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "error" in captured.err


def test_interface_on_node(capsys) -> None:
    assert main(["--problem", "1", "--h0", "1/9", "--levels", "1"]) == EXIT_INPUT
    captured = capsys.readouterr()
    assert "coincides with node" in captured.err
    assert captured.out == ""


def test_numerical_failure(tmp_path, capsys) -> None:
    path = tmp_path / "degenerate.json"
    path.write_text(DEGENERATE)
    assert main(["--problem", str(path), "--h0", "1/4", "--levels", "1"]) == EXIT_NUMERICAL
    captured = capsys.readouterr()
    assert "degenerate enrichment denominator" in captured.err
    assert captured.out == ""


def test_no_partial_output_file(tmp_path) -> None:
    target = tmp_path / "table.csv"
    assert main(["--problem", "1", "--h0", "1/9", "--out", str(target)]) == EXIT_INPUT
    assert not target.exists()
