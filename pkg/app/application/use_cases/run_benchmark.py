import logging
from dataclasses import dataclass, replace

from app.application.use_cases.run_experiment import RunExperimentUseCase
from app.core.enums import SimulationMode
from app.domain.entities.experiment_config import ExperimentConfig

logger = logging.getLogger(__name__)

BENCHMARK_FRAMES = 2_000_000


@dataclass(frozen=True)
class BenchmarkResult:
    protocol: str
    frames: int
    workers: int
    wall_time_s: float
    frames_per_second: float

    @property
    def frames_per_second_per_worker(self) -> float:
        return self.frames_per_second / self.workers


class RunBenchmarkUseCase:
    """Use case for measuring Monte Carlo throughput"""

    def __init__(self, run_experiment: RunExperimentUseCase):
        self.run_experiment = run_experiment

    def execute(self, config: ExperimentConfig, frames: int = BENCHMARK_FRAMES) -> BenchmarkResult:
        """Execute the benchmark on the configured engine."""

        bench_config = replace(config, frames=frames, mode=SimulationMode.MONTECARLO)
        report = self.run_experiment.execute(bench_config)
        result = BenchmarkResult(
            protocol=config.protocol.value,
            frames=frames,
            workers=self.run_experiment.workers,
            wall_time_s=report.wall_time_s,
            frames_per_second=report.frames_per_second,
        )
        logger.info(
            "Benchmark: %.3g frames/s on %d worker(s)", result.frames_per_second, result.workers
        )
        return result
