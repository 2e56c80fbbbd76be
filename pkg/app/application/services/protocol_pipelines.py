import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

import numpy as np

from app.core.enums import Protocol
from app.domain.entities.detection_event import DetectorState, EventBatch
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.frame_records import Bb84Records, CowRecords, DpsRecords
from app.domain.entities.sifted_stats import SiftedStats
from app.domain.services.channel import attenuate
from app.domain.services.detector import (
    DetectorModel,
    assign_slots,
    default_crosstalk_probability,
)
from app.domain.services.receiver import amzi_transform_batch, path_loss, route_tbs_batch
from app.domain.services.sifting import sift_bb84, sift_cow, sift_dps
from app.domain.services.transmitter import (
    encode_bb84_batch,
    encode_cow_batch,
    encode_dps_batch,
)
from app.domain.value_objects.rng_stream import RngStream

logger = logging.getLogger(__name__)

Records = Union[Bb84Records, CowRecords, DpsRecords]
DetectorStates = Dict[int, DetectorState]


@dataclass(frozen=True)
class BatchPlan:
    """One independently simulated block of frames (DPS: trains)."""

    index: int
    offset: int
    size: int


@dataclass
class CandidateBatch:
    """Alice's records plus candidate clicks of one batch, before dead time."""

    plan: BatchPlan
    records: Records
    events: EventBatch


def crosstalk_probability(config: ExperimentConfig) -> float:
    """Configured slot crosstalk, or the value implied by jitter and pulse width."""

    if config.receiver.slot_crosstalk_prob is not None:
        return config.receiver.slot_crosstalk_prob
    return default_crosstalk_probability(
        config.detector.jitter_sigma,
        config.transmitter.pulse_fwhm,
        config.bin_separation,
        config.receiver.slot_window,
    )


class ProtocolPipeline(ABC):
    """Transmitter -> channel -> receiver -> detectors -> sifting for one protocol.

    ``simulate_batch`` is pure and runs in worker processes; ``finalize`` applies the
    stateful dead-time filter and must see batches in order.
    """

    protocol: Protocol

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.crosstalk = crosstalk_probability(config)
        self.detector = DetectorModel(
            config.detector, config.receiver.slot_window, self.crosstalk
        )
        self.bin_separation = config.bin_separation

    @property
    @abstractmethod
    def n_slots(self) -> int:
        """Slots examined per frame."""

    @property
    @abstractmethod
    def frame_period(self) -> float:
        """Time between consecutive frame starts."""

    @property
    def units_per_frame(self) -> int:
        """Key-bit opportunities per simulated frame."""

        return 1

    def total_units(self) -> int:
        """Frames that are actually simulated for the configured frame count."""

        return self.config.frames

    def plan_batches(self, batch_size: int) -> List[BatchPlan]:
        frames = math.ceil(self.total_units() / self.units_per_frame)
        per_batch = max(1, batch_size // self.units_per_frame)
        plans = []
        for index, offset in enumerate(range(0, frames, per_batch)):
            plans.append(BatchPlan(index, offset, min(per_batch, frames - offset)))
        return plans

    def duration(self, plan: BatchPlan) -> float:
        """Emission time covered by a batch."""

        return plan.size * self.config.transmitter.frame_period

    def simulate_batch(self, plan: BatchPlan) -> CandidateBatch:
        rng = RngStream(self.config.seed, plan.index).generator()
        records, slot_means = self.emit(plan, rng)
        events = self.detector.sample_clicks(
            slot_means, rng, plan.offset, self.frame_period, self.bin_separation
        )
        return CandidateBatch(plan=plan, records=records, events=events)

    def finalize(
        self, candidate: CandidateBatch, states: DetectorStates
    ) -> Tuple[SiftedStats, DetectorStates]:
        survivors, states = self.detector.apply_dead_time(candidate.events, states)
        slots, accepted = assign_slots(
            survivors.timestamp,
            survivors.frame * self.frame_period,
            self.bin_separation,
            self.n_slots,
            self.config.receiver.slot_window,
        )
        survivors.slot = slots.astype(np.int32)
        accepted_events = survivors.select(accepted)
        return self.sift(candidate, accepted_events), states

    def _amzi_path(self, amplitudes: np.ndarray) -> np.ndarray:
        receiver = self.config.receiver
        _, amzi = route_tbs_batch(amplitudes, receiver.tbs_monitor_fraction)
        return path_loss(amzi, receiver.insertion_loss_db)

    @abstractmethod
    def emit(self, plan: BatchPlan, rng: np.random.Generator) -> Tuple[Records, np.ndarray]:
        """Alice's records and per-detector slot mean photons ``[frames, detectors, slots]``."""

    @abstractmethod
    def sift(self, candidate: CandidateBatch, events: EventBatch) -> SiftedStats:
        pass


class Bb84Pipeline(ProtocolPipeline):
    protocol = Protocol.BB84

    @property
    def n_slots(self) -> int:
        return 2 + self.config.delay_bins

    @property
    def frame_period(self) -> float:
        return self.config.transmitter.frame_period

    def emit(self, plan, rng):
        amps, bits, bases, classes = encode_bb84_batch(
            self.config.transmitter, rng, plan.size
        )
        amps = self._amzi_path(attenuate(amps, self.config.channel.transmission))
        out = amzi_transform_batch(
            amps,
            self.config.delay_bins,
            self.config.receiver.amzi_phase,
            self.config.receiver.amzi_arm_imbalance_db,
        )
        records = Bb84Records(bits, bases, classes, frame_offset=plan.offset)
        return records, np.abs(out) ** 2

    def sift(self, candidate, events):
        return sift_bb84(
            candidate.records,
            events,
            self.config.transmitter.class_names,
            duration=self.duration(candidate.plan),
        )


class CowPipeline(ProtocolPipeline):
    """Detector 0 is the data line; detectors 1 and 2 sit on the monitor AMZI."""

    protocol = Protocol.COW

    @property
    def n_slots(self) -> int:
        return 2

    @property
    def frame_period(self) -> float:
        return self.config.transmitter.frame_period

    def emit(self, plan, rng):
        receiver = self.config.receiver
        amps, symbols = encode_cow_batch(self.config.transmitter, rng, plan.size)
        amps = attenuate(amps, self.config.channel.transmission)

        key, _ = route_tbs_batch(amps, receiver.tbs_monitor_fraction)
        key = path_loss(key, receiver.key_path_loss_db)

        # the monitor sees the batch as one continuous pulse train
        train = self._amzi_path(amps).reshape(1, -1)
        out = amzi_transform_batch(
            train,
            self.config.delay_bins,
            receiver.amzi_phase,
            receiver.amzi_arm_imbalance_db,
        )[0, :, : 2 * plan.size]
        monitor = (np.abs(out) ** 2).reshape(2, plan.size, 2).transpose(1, 0, 2)

        means = np.concatenate([(np.abs(key) ** 2)[:, None, :], monitor], axis=1)
        return CowRecords(symbols, frame_offset=plan.offset), means

    def sift(self, candidate, events):
        key = events.select(events.detector == 0)
        monitor = events.select(events.detector > 0)
        return sift_cow(
            candidate.records,
            key,
            monitor,
            class_name=self.config.transmitter.class_names[0],
            delay_bins=self.config.delay_bins,
            duration=self.duration(candidate.plan),
        )


class DpsPipeline(ProtocolPipeline):
    """Frames are whole pulse trains; each train carries ``dps_train_length`` bits."""

    protocol = Protocol.DPS

    @property
    def train_length(self) -> int:
        return self.config.transmitter.dps_train_length

    @property
    def n_slots(self) -> int:
        return self.train_length + 1 + self.config.delay_bins

    @property
    def frame_period(self) -> float:
        # one guard slot keeps the trailing edge slot off the next train
        return self.n_slots * self.bin_separation

    @property
    def units_per_frame(self) -> int:
        return self.train_length

    def duration(self, plan: BatchPlan) -> float:
        return plan.size * self.train_length / self.config.transmitter.clock_rate

    def emit(self, plan, rng):
        amps, bits = encode_dps_batch(self.config.transmitter, rng, plan.size)
        amps = self._amzi_path(attenuate(amps, self.config.channel.transmission))
        out = amzi_transform_batch(
            amps,
            self.config.delay_bins,
            self.config.receiver.amzi_phase,
            self.config.receiver.amzi_arm_imbalance_db,
        )
        return DpsRecords(bits, frame_offset=plan.offset), np.abs(out) ** 2

    def sift(self, candidate, events):
        return sift_dps(
            candidate.records,
            events,
            class_name=self.config.transmitter.class_names[0],
            duration=self.duration(candidate.plan),
        )


_PIPELINES = {
    Protocol.BB84: Bb84Pipeline,
    Protocol.COW: CowPipeline,
    Protocol.DPS: DpsPipeline,
}


def build_pipeline(config: ExperimentConfig) -> ProtocolPipeline:
    return _PIPELINES[config.protocol](config)
