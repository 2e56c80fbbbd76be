import logging
from dataclasses import dataclass, field
from typing import List, Sequence

from app.application.use_cases.run_experiment import RunExperimentUseCase
from app.core.exceptions import ConfigurationException, QKDBenchException
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.run_report import RunReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepFailure:
    distance_km: float
    message: str


@dataclass
class SweepResult:
    reports: List[RunReport] = field(default_factory=list)
    failures: List[SweepFailure] = field(default_factory=list)


class SweepDistanceUseCase:
    """Use case for running one experiment per channel length"""

    def __init__(self, run_experiment: RunExperimentUseCase):
        self.run_experiment = run_experiment

    def execute(self, config: ExperimentConfig, distances: Sequence[float]) -> SweepResult:
        """Execute the sweep; failing points are recorded and skipped."""

        if not distances:
            raise ConfigurationException("A sweep needs at least one distance")

        result = SweepResult()
        for distance in distances:
            try:
                point = config.with_distance(float(distance))
                result.reports.append(self.run_experiment.execute(point))
            except QKDBenchException as exc:
                logger.warning("Sweep point %g km failed: %s", distance, exc.message)
                result.failures.append(SweepFailure(float(distance), exc.message))

        logger.info(
            "Sweep finished: %d points, %d failures", len(result.reports), len(result.failures)
        )
        return result
