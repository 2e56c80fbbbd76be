import logging
from pathlib import Path
from typing import Callable, List, Optional

from app.core.enums import ReportFormat
from app.database.db_connection import get_session_factory
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.run_report import RunReport
from app.domain.repositories.report_repository import IReportRepository
from app.infrastructure.repositories.csv_report_repository import CsvReportRepository
from app.infrastructure.repositories.jsonl_report_repository import JsonLinesReportRepository
from app.infrastructure.repositories.sql_report_repository import SqlReportRepository

logger = logging.getLogger(__name__)

_EXTENSIONS = {ReportFormat.CSV: "csv", ReportFormat.JSONLINES: "jsonl"}


def report_path(config: ExperimentConfig, output_dir: Optional[str] = None) -> Path:
    """``<out>/<protocol>_<mode>_seed<seed>.<ext>`` for file formats."""

    extension = _EXTENSIONS[config.report_format]
    name = f"{config.protocol.value}_{config.mode.value}_seed{config.seed}.{extension}"
    return Path(output_dir or config.output_dir) / name


class EmitReportUseCase:
    """Use case for persisting run reports in the configured format"""

    def __init__(self, sql_repository_factory: Optional[Callable[[], IReportRepository]] = None):
        self.sql_repository_factory = sql_repository_factory

    def repository_for(self, config: ExperimentConfig) -> IReportRepository:
        if config.report_format == ReportFormat.SQLITE:
            if self.sql_repository_factory is None:
                return SqlReportRepository(get_session_factory())
            return self.sql_repository_factory()

        path = str(report_path(config))
        if config.report_format == ReportFormat.JSONLINES:
            return JsonLinesReportRepository(path)
        return CsvReportRepository(path)

    def execute(self, config: ExperimentConfig, reports: List[RunReport]) -> str:
        """Execute the emit report use case"""

        repository = self.repository_for(config)
        location = repository.save(reports)
        logger.info("Emitted %d %s reports to %s", len(reports), config.report_format.value, location)
        return location
