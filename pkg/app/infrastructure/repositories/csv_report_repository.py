import csv
import logging
from pathlib import Path
from typing import List

from app.core.exceptions import ReportPersistenceException
from app.domain.entities.run_report import CSV_COLUMNS, RunReport
from app.domain.repositories.report_repository import IReportRepository

logger = logging.getLogger(__name__)


class CsvReportRepository(IReportRepository):
    """Plot-ready CSV, one row per report.

    The file only carries the summary columns; ``load`` is therefore unsupported.
    """

    def __init__(self, path: str):
        self.path = Path(path)

    def save(self, reports: List[RunReport]) -> str:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for report in reports:
                    writer.writerow([_cell(v) for v in report.to_csv_row()])
        except OSError as exc:
            raise ReportPersistenceException(
                f"Could not write CSV report: {exc.strerror}", str(self.path)
            ) from exc

        logger.info("Wrote %d rows to %s", len(reports), self.path)
        return str(self.path)

    def load(self) -> List[RunReport]:
        raise ReportPersistenceException(
            "CSV reports hold summary columns only; use JSON lines to reload", str(self.path)
        )

    def read_rows(self) -> List[dict]:
        """Raw rows as strings, keyed by column."""

        try:
            with self.path.open(newline="", encoding="utf-8") as handle:
                return list(csv.DictReader(handle))
        except OSError as exc:
            raise ReportPersistenceException(
                f"Could not read CSV report: {exc.strerror}", str(self.path)
            ) from exc


def _cell(value):
    if isinstance(value, float):
        return repr(float(value))
    return value
