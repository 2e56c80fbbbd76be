import json
import logging
from pathlib import Path
from typing import List

from app.core.exceptions import ReportPersistenceException
from app.domain.entities.run_report import RunReport
from app.domain.repositories.report_repository import IReportRepository

logger = logging.getLogger(__name__)


class JsonLinesReportRepository(IReportRepository):
    """One JSON object per report, carrying the full RunReport."""

    def __init__(self, path: str):
        self.path = Path(path)

    def save(self, reports: List[RunReport]) -> str:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w", encoding="utf-8") as handle:
                for report in reports:
                    handle.write(json.dumps(report.to_dict(), sort_keys=True))
                    handle.write("\n")
        except OSError as exc:
            raise ReportPersistenceException(
                f"Could not write JSON-lines report: {exc.strerror}", str(self.path)
            ) from exc

        logger.info("Wrote %d reports to %s", len(reports), self.path)
        return str(self.path)

    def load(self) -> List[RunReport]:
        try:
            with self.path.open(encoding="utf-8") as handle:
                lines = [line for line in handle if line.strip()]
        except OSError as exc:
            raise ReportPersistenceException(
                f"Could not read JSON-lines report: {exc.strerror}", str(self.path)
            ) from exc

        try:
            return [RunReport.from_dict(json.loads(line)) for line in lines]
        except (ValueError, KeyError, TypeError) as exc:
            raise ReportPersistenceException(
                f"Malformed JSON-lines report: {exc}", str(self.path)
            ) from exc
