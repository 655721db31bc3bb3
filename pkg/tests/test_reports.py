import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from enrichfem.adapters.utils import format_mesh_size, format_sci
from enrichfem.core.exceptions import ReportFormatError
from enrichfem.repositories.benchmarks import ReferenceRow
from enrichfem.schemas.models import ConvergenceRow, ConvergenceTable, TableMetadata

HEADER = "h,l2,h1_broken,nodal,cond,order_l2,order_h1,order_nodal"


def _metadata(**changes) -> TableMetadata:
    fields = dict(problem="1", degree=1, quad_points=6, h0="1/8", levels=3, version="0.1.0")
    fields.update(changes)
    return TableMetadata(**fields)


def _row(n: int, l2: float, cond=None) -> ConvergenceRow:
    return ConvergenceRow(h=1 / n, n_elements=n, n_dofs=n + 2, l2=l2, h1_broken=10 * l2, nodal=2 * l2, cond=cond)


@pytest.fixture
def table() -> ConvergenceTable:
    return ConvergenceTable(
        metadata=_metadata(timestamp="2026-01-01T00:00:00+00:00"),
        rows=[_row(8, 1.43943e-03, 1.2e5), _row(16, 3.6e-04, 1.4e5), _row(32, 9.0e-05, 2.7e5)],
        order_l2=[1.99943, 2.0],
        order_h1=[1.99943, 2.0],
        order_nodal=[1.99943, 2.0],
    )


def test_formatting_helpers() -> None:
    assert format_sci(1.43943e-03) == "1.43943e-03"
    assert format_sci(None) == ""
    assert format_sci(float("inf")) == "inf"
    assert format_mesh_size(0.125) == "1/8"
    assert format_mesh_size(float(Fraction(1, 512))) == "1/512"


def test_csv_single_row(orchestrator) -> None:
    table = ConvergenceTable(metadata=_metadata(levels=1), rows=[_row(8, 1e-3)])
    lines = orchestrator.emit_report(table, "csv").splitlines()
    assert lines == [HEADER, "1.25000e-01,1.00000e-03,1.00000e-02,2.00000e-03,,,,"]


def test_csv_orders(orchestrator, table) -> None:
    lines = orchestrator.emit_report(table, "csv").splitlines()
    assert len(lines) == 4
    assert lines[1].endswith(",1.20000e+05,,,")
    assert lines[2].split(",")[5:] == ["1.99943e+00"] * 3
    assert "2026" not in "\n".join(lines)


def test_json_round_trip(orchestrator, table) -> None:
    data = json.loads(orchestrator.emit_report(table, "json"))
    assert data["metadata"]["problem"] == "1"
    assert data["metadata"]["timestamp"] == "2026-01-01T00:00:00+00:00"
    for parsed, row in zip(data["rows"], table.rows):
        assert parsed["h"] == row.h
        assert parsed["l2"] == row.l2
        assert parsed["cond"] == row.cond
    assert data["order_l2"] == table.order_l2
    assert ConvergenceTable.model_validate(data) == table


def test_markdown_layout(orchestrator, table) -> None:
    text = orchestrator.emit_report(table, "md")
    lines = text.splitlines()
    for column in ("L2 error", "broken H1 error", "nodal error", "condition number"):
        assert column in lines[0]
    assert lines[1].startswith("|--")
    assert lines[2].startswith("| h=1/8 ")
    assert lines[-1].startswith("| order ")
    assert len({len(line) for line in lines}) == 1
    assert orchestrator.emit_report(table, "markdown") == text


def test_markdown_without_condition_numbers(orchestrator) -> None:
    table = ConvergenceTable(
        metadata=_metadata(levels=2),
        rows=[_row(8, 1e-3), _row(16, 2.5e-4)],
        order_l2=[2.0], order_h1=[2.0], order_nodal=[2.0],
    )
    text = orchestrator.emit_report(table, "md")
    assert "condition number" not in text
    assert "2.00" in text.splitlines()[-1]


def test_markdown_reference_column(orchestrator, table) -> None:
    reference = (ReferenceRow(Fraction(1, 8), 1.43943e-03, 6.6e-02, 4.9e-03, 1.4e5),)
    text = orchestrator.emit_report(table, "md", reference)
    lines = text.splitlines()
    assert "L2 vs reference" in lines[0]
    assert "+0.00%" in lines[2]


def test_reports_are_byte_stable(orchestrator, table) -> None:
    for format in ("csv", "md", "json"):
        assert orchestrator.emit_report(table, format) == orchestrator.emit_report(table, format)


def test_unknown_format(orchestrator, table) -> None:
    with pytest.raises(ReportFormatError, match="csv, json, md"):
        orchestrator.emit_report(table, "xml")


def test_table_validation() -> None:
    with pytest.raises(ValidationError):
        ConvergenceTable(metadata=_metadata(), rows=[])
    with pytest.raises(ValidationError):
        ConvergenceTable(metadata=_metadata(), rows=[_row(8, 1e-3), _row(32, 1e-4)], order_l2=[1.0], order_h1=[1.0], order_nodal=[1.0])
    with pytest.raises(ValidationError):
        ConvergenceTable(metadata=_metadata(), rows=[_row(8, 1e-3), _row(16, 1e-4)])
    with pytest.raises(ValidationError):
        ConvergenceRow(h=0.125, n_elements=8, n_dofs=10, l2=-1.0, h1_broken=0.0, nodal=0.0)


def test_adapters_registered_by_name(orchestrator) -> None:
    assert sorted(orchestrator.adapters) == ["csv", "json", "md"]
    assert all(adapter.name == key for key, adapter in orchestrator.adapters.items())
