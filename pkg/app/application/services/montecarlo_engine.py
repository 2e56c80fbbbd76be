import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Optional

from app.application.services.protocol_pipelines import (
    CandidateBatch,
    ProtocolPipeline,
)
from app.core.exceptions import ConfigurationException
from app.domain.entities.sifted_stats import SiftedStats

logger = logging.getLogger(__name__)


def resolve_workers(threads: Optional[int]) -> int:
    """Worker count from settings; ``None`` means one per CPU."""

    if threads is None:
        return os.cpu_count() or 1
    return max(1, int(threads))


class MonteCarloEngine:
    """Runs a protocol pipeline over independent batches and reduces the statistics.

    Candidate clicks of each batch are generated concurrently; dead time and sifting
    are applied in batch order so results do not depend on the worker count.
    """

    def __init__(self, pipeline: ProtocolPipeline, batch_size: int = 65536, workers: int = 1):
        if batch_size < 1:
            raise ConfigurationException("Batch size must be positive")
        self.pipeline = pipeline
        self.batch_size = batch_size
        self.workers = workers

    def _candidates(self, plans) -> Iterator[CandidateBatch]:
        if self.workers <= 1 or len(plans) <= 1:
            yield from map(self.pipeline.simulate_batch, plans)
            return

        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            yield from executor.map(self.pipeline.simulate_batch, plans)

    def run(self) -> SiftedStats:
        plans = self.pipeline.plan_batches(self.batch_size)
        logger.debug(
            "Simulating %d batches of up to %d frames on %d workers",
            len(plans),
            self.batch_size,
            self.workers,
        )

        states = {}
        parts = []
        for candidate in self._candidates(plans):
            stats, states = self.pipeline.finalize(candidate, states)
            parts.append(stats)
            logger.debug(
                "Batch %d done (%d candidate clicks)",
                candidate.plan.index,
                len(candidate.events),
            )
        return SiftedStats.reduce(parts)

