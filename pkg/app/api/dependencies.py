"""API-specific dependencies for FastAPI routes."""

from typing import Annotated

from fastapi import Depends

from app.application.services.montecarlo_engine import resolve_workers
from app.application.services.preset_catalog import PresetCatalog
from app.application.services.report_builder import ReportBuilder
from app.application.use_cases.run_experiment import RunExperimentUseCase
from app.core.config import settings
from app.database.db_connection import get_session_factory
from app.infrastructure.config.config_loader import ConfigLoader
from app.infrastructure.repositories.sql_report_repository import SqlReportRepository


def get_report_repository() -> SqlReportRepository:
    return SqlReportRepository(get_session_factory(), settings.database_url)


def get_preset_catalog() -> PresetCatalog:
    return PresetCatalog()


def get_config_loader(catalog: Annotated[PresetCatalog, Depends(get_preset_catalog)]) -> ConfigLoader:
    return ConfigLoader(catalog)


def get_run_experiment_use_case() -> RunExperimentUseCase:
    return RunExperimentUseCase(
        ReportBuilder(), settings.batch_size, resolve_workers(settings.threads)
    )


ReportRepositoryDep = Annotated[SqlReportRepository, Depends(get_report_repository)]
PresetCatalogDep = Annotated[PresetCatalog, Depends(get_preset_catalog)]
ConfigLoaderDep = Annotated[ConfigLoader, Depends(get_config_loader)]
RunExperimentDep = Annotated[RunExperimentUseCase, Depends(get_run_experiment_use_case)]
