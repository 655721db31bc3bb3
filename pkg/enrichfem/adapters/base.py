from abc import ABC, abstractmethod
from typing import Optional

from enrichfem.repositories.benchmarks import ReferenceRow
from enrichfem.schemas.models import ConvergenceTable


class BaseReportAdapter(ABC):
    name: str

    @abstractmethod
    def render(self, table: ConvergenceTable, reference: Optional[tuple[ReferenceRow, ...]] = None) -> str:
        pass
