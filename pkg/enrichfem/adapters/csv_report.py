import csv
import io
from typing import Optional

from enrichfem.adapters.base import BaseReportAdapter
from enrichfem.adapters.utils import format_sci, shifted
from enrichfem.repositories.benchmarks import ReferenceRow
from enrichfem.schemas.models import ConvergenceTable

HEADER = ["h", "l2", "h1_broken", "nodal", "cond", "order_l2", "order_h1", "order_nodal"]


class CsvReportAdapter(BaseReportAdapter):
    name = "csv"

    def render(self, table: ConvergenceTable, reference: Optional[tuple[ReferenceRow, ...]] = None) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HEADER)
        orders = zip(shifted(table.order_l2), shifted(table.order_h1), shifted(table.order_nodal))
        for row, (o_l2, o_h1, o_nodal) in zip(table.rows, orders):
            writer.writerow([
                format_sci(row.h),
                format_sci(row.l2),
                format_sci(row.h1_broken),
                format_sci(row.nodal),
                format_sci(row.cond),
                format_sci(o_l2),
                format_sci(o_h1),
                format_sci(o_nodal),
            ])
        return buffer.getvalue()
