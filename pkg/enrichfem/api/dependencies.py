from enrichfem.services.orchestrator import StudyOrchestrator
from enrichfem.adapters.csv_report import CsvReportAdapter
from enrichfem.adapters.markdown_report import MarkdownReportAdapter
from enrichfem.adapters.json_report import JsonReportAdapter

_csv_adapter = CsvReportAdapter()
_md_adapter = MarkdownReportAdapter()
_json_adapter = JsonReportAdapter()

def get_orchestrator() -> StudyOrchestrator:
    adapters = {
        adapter.name: adapter
        for adapter in (_csv_adapter, _md_adapter, _json_adapter)
    }
    return StudyOrchestrator(adapters=adapters)
