from typing import List, Optional

from enrichfem.adapters.base import BaseReportAdapter
from enrichfem.adapters.utils import format_mesh_size, format_order, format_sci
from enrichfem.repositories.benchmarks import ReferenceRow
from enrichfem.schemas.models import ConvergenceTable
from enrichfem.services.analysis import mean_final_orders


class MarkdownReportAdapter(BaseReportAdapter):
    name = "md"

    def _columns(self, table: ConvergenceTable) -> List[str]:
        columns = [f"Problem {table.metadata.problem}", "L2 error", "broken H1 error", "nodal error"]
        if any(row.cond is not None for row in table.rows):
            columns.append("condition number")
        return columns

    def render(self, table: ConvergenceTable, reference: Optional[tuple[ReferenceRow, ...]] = None) -> str:
        columns = self._columns(table)
        with_cond = "condition number" in columns
        compare = bool(reference)
        if compare:
            columns.append("L2 vs reference")

        body: List[List[str]] = []
        for row in table.rows:
            cells = [f"h={format_mesh_size(row.h)}", format_sci(row.l2), format_sci(row.h1_broken), format_sci(row.nodal)]
            if with_cond:
                cells.append(format_sci(row.cond))
            if compare:
                match = next((r for r in reference if float(r.h) == row.h), None)
                cells.append("" if match is None else f"{(row.l2 - match.l2) / match.l2:+.2%}")
            body.append(cells)

        if len(table.rows) > 1:
            order_row = ["order"] + [
                format_order(mean_final_orders(orders)) if any(o is not None for o in orders) else ""
                for orders in (table.order_l2, table.order_h1, table.order_nodal)
            ]
            order_row += ["-"] * (len(columns) - len(order_row))
            body.append(order_row)

        widths = [max(len(columns[i]), *(len(r[i]) for r in body)) for i in range(len(columns))]

        def line(cells: List[str]) -> str:
            return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

        lines = [line(columns), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
        lines += [line(cells) for cells in body]
        return "\n".join(lines) + "\n"
