import logging
import time

from app.application.services.analytic_oracle import AnalyticOracle
from app.application.services.montecarlo_engine import MonteCarloEngine
from app.application.services.protocol_pipelines import build_pipeline
from app.application.services.report_builder import ReportBuilder
from app.core.enums import SimulationMode
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.run_report import RunReport
from app.domain.entities.sifted_stats import SiftedStats

logger = logging.getLogger(__name__)


class RunExperimentUseCase:
    """Use case for running one experiment in Monte Carlo or analytic mode"""

    def __init__(
        self,
        report_builder: ReportBuilder,
        batch_size: int = 65536,
        workers: int = 1,
    ):
        self.report_builder = report_builder
        self.batch_size = batch_size
        self.workers = workers

    def simulate(self, config: ExperimentConfig) -> SiftedStats:
        if config.mode == SimulationMode.MONTECARLO:
            engine = MonteCarloEngine(build_pipeline(config), self.batch_size, self.workers)
            return engine.run()
        return AnalyticOracle(config).expected_stats()

    def execute(self, config: ExperimentConfig) -> RunReport:
        """Execute the run experiment use case"""

        logger.info(
            "Running %s (%s) at %g km: %d frames, seed %d",
            config.protocol.value,
            config.mode.value,
            config.channel.length_km,
            config.frames,
            config.seed,
        )

        started = time.perf_counter()
        stats = self.simulate(config)
        wall_time = time.perf_counter() - started

        report = self.report_builder.build(config, stats, wall_time)
        logger.info(
            "Finished %s in %.3fs (%.3g frames/s): raw %.4g bps, secret %.4g bps",
            config.protocol.value,
            wall_time,
            report.frames_per_second,
            report.raw_bps,
            report.secret_bps,
        )
        return report
