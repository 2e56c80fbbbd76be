import logging

from fastapi import APIRouter, HTTPException, Query

from app.api.dependencies import ConfigLoaderDep, ReportRepositoryDep, RunExperimentDep
from app.api.schemas.experiment_schemas import (
    MAX_HTTP_MONTECARLO_FRAMES,
    ExperimentRunRequest,
    ExperimentSweepRequest,
    ReportListResponse,
    RunReportResponse,
    SweepResponse,
)
from app.application.use_cases.sweep_distance import SweepDistanceUseCase
from app.core.enums import SimulationMode
from app.core.exceptions import (
    ConfigurationException,
    DomainValueException,
    EstimationException,
    ReportPersistenceException,
)
from app.domain.entities.experiment_config import ExperimentConfig
from app.infrastructure.config.config_loader import ConfigLoader, validate_config_tree

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/experiments", tags=["experiments"])


def _build_config(request: ExperimentRunRequest, loader: ConfigLoader) -> ExperimentConfig:
    """Preset, then config sections, then the top-level fields."""

    experiment = request.model_dump(
        include={"protocol", "frames", "seed", "mode"}, exclude_none=True
    )
    tree = {**request.config, "experiment": experiment}
    config = loader.build(validate_config_tree(tree, "request"), request.preset)
    if request.distance_km is not None:
        config = config.with_distance(request.distance_km)

    if config.mode == SimulationMode.MONTECARLO and config.frames > MAX_HTTP_MONTECARLO_FRAMES:
        raise ConfigurationException(
            f"HTTP Monte Carlo runs are limited to {MAX_HTTP_MONTECARLO_FRAMES} frames"
        )
    return config


@router.post("/run", response_model=RunReportResponse, status_code=201)
def run_experiment(
    request: ExperimentRunRequest,
    loader: ConfigLoaderDep,
    run_use_case: RunExperimentDep,
    repository: ReportRepositoryDep,
):
    """Executa um experimento e persiste o relatório."""

    try:
        config = _build_config(request, loader)
        report = run_use_case.execute(config)
        repository.save([report])
        return report.to_dict()

    except (ConfigurationException, DomainValueException) as e:
        raise HTTPException(status_code=422, detail=e.message)
    except EstimationException as e:
        raise HTTPException(status_code=409, detail=e.message)
    except ReportPersistenceException as e:
        logger.error(f"Report persistence failed: {e.message}")
        raise HTTPException(status_code=500, detail="Could not store report")
    except Exception as e:
        logger.error(f"Unexpected error running experiment: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail="Internal server error")


@router.post("/sweep", response_model=SweepResponse, status_code=201)
def sweep_experiment(
    request: ExperimentSweepRequest,
    loader: ConfigLoaderDep,
    run_use_case: RunExperimentDep,
    repository: ReportRepositoryDep,
):
    """Executa um experimento por distância; pontos com falha são listados."""

    try:
        config = _build_config(request, loader)
        result = SweepDistanceUseCase(run_use_case).execute(config, request.distances)
        if result.reports:
            repository.save(result.reports)
        return {
            "reports": [report.to_dict() for report in result.reports],
            "failures": [
                {"distance_km": f.distance_km, "message": f.message} for f in result.failures
            ],
        }

    except (ConfigurationException, DomainValueException) as e:
        raise HTTPException(status_code=422, detail=e.message)
    except ReportPersistenceException as e:
        logger.error(f"Report persistence failed: {e.message}")
        raise HTTPException(status_code=500, detail="Could not store reports")
    except Exception as e:
        logger.error(f"Unexpected error running sweep: {str(e)}", exc_info=True)
        raise HTTPException(status_code=500, detail="Internal server error")


@router.get("/reports", response_model=ReportListResponse)
def list_reports(
    repository: ReportRepositoryDep,
    page: int = Query(1, ge=1, description="Page number"),
    limit: int = Query(50, ge=1, le=500, description="Items per page"),
):
    """Lista os relatórios persistidos com paginação."""

    try:
        reports = repository.list_page(page, limit)
        total_count = repository.count()
        total_pages = (total_count + limit - 1) // limit

        return {
            "reports": [report.to_dict() for report in reports],
            "pagination": {
                "page": page,
                "limit": limit,
                "total_count": total_count,
                "total_pages": total_pages,
                "has_next": page < total_pages,
                "has_prev": page > 1,
            },
        }

    except ReportPersistenceException as e:
        logger.error(f"Could not read reports: {e.message}")
        raise HTTPException(status_code=500, detail="Could not read reports")
