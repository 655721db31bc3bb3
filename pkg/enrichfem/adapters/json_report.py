import json
from typing import Optional

from enrichfem.adapters.base import BaseReportAdapter
from enrichfem.repositories.benchmarks import ReferenceRow
from enrichfem.schemas.models import ConvergenceTable


class JsonReportAdapter(BaseReportAdapter):
    name = "json"

    def render(self, table: ConvergenceTable, reference: Optional[tuple[ReferenceRow, ...]] = None) -> str:
        # json.dumps writes floats with repr, so parsing reproduces them bit for bit.
        return json.dumps(table.model_dump(mode="python"), indent=2) + "\n"
