import logging
import math
from collections import defaultdict
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.application.services.protocol_pipelines import build_pipeline
from app.core.enums import Protocol
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.sifted_stats import ClassTally, SiftedStats
from app.domain.services.detector import (
    click_probability,
    combined_click_probability,
    slot_acceptance,
)
from app.domain.services.receiver import amzi_mean_photons
from app.domain.services.transmitter import extinction_leak_fraction

logger = logging.getLogger(__name__)

Outcome = Tuple[int, ...]
OutcomeDistribution = Dict[Outcome, float]


def landing_distribution(click_probs: Sequence[float], crosstalk: float) -> OutcomeDistribution:
    """Distribution of the set of positions where one detector's clicks land in a frame.

    Each slot clicks independently; a click moves to a neighbouring position with
    probability ``crosstalk`` (half each side). Positions may fall outside the frame.
    """

    per_slot = []
    for slot, p in enumerate(click_probs):
        options = [(None, 1.0 - p), (slot, p * (1.0 - crosstalk))]
        if crosstalk > 0:
            options += [(slot - 1, p * crosstalk / 2.0), (slot + 1, p * crosstalk / 2.0)]
        per_slot.append([o for o in options if o[1] > 0])

    distribution: OutcomeDistribution = defaultdict(float)
    for combo in product(*per_slot):
        prob = math.prod(o[1] for o in combo)
        landed = tuple(sorted({o[0] for o in combo if o[0] is not None}))
        distribution[landed] += prob
    return distribution


def accepted_distribution(
    landings: OutcomeDistribution,
    n_slots: int,
    dead_slots: float,
    acceptance: float,
    alive: float,
) -> OutcomeDistribution:
    """Distribution of accepted slot sets after dead time and the slot window.

    ``dead_slots`` is the dead time in units of the slot spacing; ``alive`` is the
    probability the detector has recovered from earlier frames at frame start.
    """

    result: OutcomeDistribution = defaultdict(float)
    result[()] += 1.0 - alive
    for landed, prob in landings.items():
        kept: List[int] = []
        for position in landed:
            if not kept or position - kept[-1] >= dead_slots:
                kept.append(position)
        inside = [p for p in kept if 0 <= p < n_slots]

        for mask in product((True, False), repeat=len(inside)):
            q = prob * alive
            chosen = []
            for position, take in zip(inside, mask):
                q *= acceptance if take else 1.0 - acceptance
                if take:
                    chosen.append(position)
            if q > 0:
                result[tuple(chosen)] += q
    return result


def any_click_probability(click_probs: Sequence[float]) -> float:
    return 1.0 - math.prod(1.0 - p for p in click_probs)


class AnalyticOracle:
    """Expected sifting statistics of the full device model, without sampling.

    Produces the same ``SiftedStats`` the Monte Carlo engine would on average, with
    expected (non-integer) counts. Dead time across frames enters through the
    non-paralyzable factor 1 / (1 + R·τ) per detector.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.pipeline = build_pipeline(config)
        self.crosstalk = self.pipeline.crosstalk
        self.dark = self.pipeline.detector.dark_probability
        self.acceptance = slot_acceptance(
            config.detector.jitter_sigma, config.receiver.slot_window
        )
        self.dead_time = config.detector.dead_time
        self.dead_slots = self.dead_time / config.bin_separation

    def expected_stats(self) -> SiftedStats:
        handler = {
            Protocol.BB84: self._bb84,
            Protocol.COW: self._cow,
            Protocol.DPS: self._dps,
        }[self.config.protocol]
        return handler()

    def _click_probs(self, means: np.ndarray) -> np.ndarray:
        photon = click_probability(means, self.config.detector.efficiency)
        return combined_click_probability(photon, self.dark)

    def _alive(self, click_rate: float) -> float:
        return 1.0 / (1.0 + click_rate * self.dead_time)

    def _coherence(self, steps: int = 1) -> float:
        sigma = self.config.transmitter.phase_noise_sigma
        return math.exp(-steps * sigma * sigma / 2.0)

    def _amzi_scale(self) -> float:
        receiver = self.config.receiver
        return (
            self.config.channel.transmission
            * receiver.tbs_monitor_fraction
            * 10.0 ** (-receiver.insertion_loss_db / 10.0)
        )

    def _amzi_means(self, amplitudes: np.ndarray, coherence: float) -> np.ndarray:
        receiver = self.config.receiver
        return amzi_mean_photons(
            amplitudes[None, :] * math.sqrt(self._amzi_scale()),
            self.config.delay_bins,
            receiver.amzi_phase,
            receiver.amzi_arm_imbalance_db,
            coherence,
        )[0]

    def _bb84(self) -> SiftedStats:
        config = self.config
        transmitter = config.transmitter
        frames = config.frames
        n_slots = self.pipeline.n_slots
        leak = math.sqrt(extinction_leak_fraction(transmitter.extinction_db))
        p_z = transmitter.z_basis_probability

        states = []
        for class_index, intensity in enumerate(transmitter.intensity_classes):
            root = math.sqrt(intensity.mean_photons)
            half = root / math.sqrt(2.0)
            for basis, basis_weight in ((0, p_z), (1, 1.0 - p_z)):
                for bit in (0, 1):
                    weight = intensity.probability * basis_weight * 0.5
                    if weight == 0:
                        continue
                    if basis == 0:
                        amps = np.array([root, root * leak] if bit == 0 else [root * leak, root])
                    else:
                        amps = np.array([half, half if bit == 0 else -half])
                    means = self._amzi_means(amps.astype(np.complex128), self._coherence())
                    states.append((class_index, basis, bit, weight, self._click_probs(means)))

        rates = [
            transmitter.clock_rate
            * sum(w * any_click_probability(probs[k]) for _, _, _, w, probs in states)
            for k in range(2)
        ]
        alive = [self._alive(r) for r in rates]

        names = transmitter.class_names
        totals = {name: defaultdict(float) for name in names}
        detector_events = [0.0, 0.0]

        for class_index, basis, bit, weight, probs in states:
            per_detector = [
                accepted_distribution(
                    landing_distribution(probs[k], self.crosstalk),
                    n_slots,
                    self.dead_slots,
                    self.acceptance,
                    alive[k],
                )
                for k in range(2)
            ]
            tally = totals[names[class_index]]
            count = frames * weight

            for (slots0, p0), (slots1, p1) in product(
                per_detector[0].items(), per_detector[1].items()
            ):
                prob = p0 * p1 * count
                events = [(0, s) for s in slots0] + [(1, s) for s in slots1]
                detector_events[0] += p0 * p1 * count * len(slots0)
                detector_events[1] += p0 * p1 * count * len(slots1)
                if not events:
                    continue

                tally["detections"] += prob
                tally["events"] += prob * len(events)
                if len(events) > 1:
                    tally["multi_event_frames"] += prob
                    continue

                detector, slot = events[0]
                measured_x = slot == 1
                if measured_x != (basis == 1):
                    continue
                measured_bit = detector if measured_x else int(slot == 2)
                suffix = "_x" if measured_x else "_z"
                tally["sifted"] += prob
                tally["sifted" + suffix] += prob
                if measured_bit != bit:
                    tally["errors"] += prob
                    tally["errors" + suffix] += prob

        classes = {
            name: ClassTally(frames_sent=frames * c.probability, **totals[name])
            for name, c in zip(names, transmitter.intensity_classes)
        }
        return SiftedStats(
            protocol=Protocol.BB84,
            classes=classes,
            detector_events=tuple(detector_events),
            duration=frames / transmitter.clock_rate,
        )

    def _cow_symbol_weights(self) -> List[Tuple[int, float]]:
        decoy = self.config.transmitter.cow_decoy_probability
        return [(0, (1.0 - decoy) / 2.0), (1, (1.0 - decoy) / 2.0), (2, decoy)]

    def _cow(self) -> SiftedStats:
        config = self.config
        transmitter = config.transmitter
        receiver = config.receiver
        frames = config.frames
        root = math.sqrt(transmitter.signal_class.mean_photons)
        leak = root * math.sqrt(extinction_leak_fraction(transmitter.extinction_db))
        weights = self._cow_symbol_weights()

        def bins(symbol: int) -> List[float]:
            return [leak if symbol == 1 else root, leak if symbol == 0 else root]

        key_scale = math.sqrt(
            config.channel.transmission
            * (1.0 - receiver.tbs_monitor_fraction)
            * 10.0 ** (-receiver.key_path_loss_db / 10.0)
        )
        key_probs = {
            symbol: self._click_probs(np.abs(np.array(bins(symbol)) * key_scale) ** 2)
            for symbol, _ in weights
        }
        key_alive = self._alive(
            transmitter.clock_rate
            * sum(w * any_click_probability(key_probs[s]) for s, w in weights)
        )

        tally = defaultdict(float)
        key_events = 0.0
        for symbol, weight in weights:
            outcomes = accepted_distribution(
                landing_distribution(key_probs[symbol], self.crosstalk),
                2,
                self.dead_slots,
                self.acceptance,
                key_alive,
            )
            for slots, p in outcomes.items():
                prob = p * weight * frames
                key_events += prob * len(slots)
                if not slots:
                    continue
                tally["detections"] += prob
                tally["events"] += prob * len(slots)
                if len(slots) > 1:
                    tally["multi_event_frames"] += prob
                    continue
                if symbol == 2:
                    continue
                tally["sifted"] += prob
                tally["sifted_z"] += prob
                if slots[0] != symbol:
                    tally["errors"] += prob
                    tally["errors_z"] += prob

        monitor_max, monitor_min, monitor_events = self._cow_monitor(bins, weights)

        name = transmitter.class_names[0]
        return SiftedStats(
            protocol=Protocol.COW,
            classes={name: ClassTally(frames_sent=float(frames), **tally)},
            monitor_max=monitor_max * frames,
            monitor_min=monitor_min * frames,
            detector_events=(key_events, monitor_events[0] * frames, monitor_events[1] * frames),
            duration=frames / transmitter.clock_rate,
        )

    def _cow_monitor(self, bins, weights) -> Tuple[float, float, Tuple[float, float]]:
        """Per-frame expected monitor counts at interfering occupied pairs."""

        if self.config.receiver.tbs_monitor_fraction == 0:
            return 0.0, 0.0, (0.0, 0.0)

        delay = self.config.delay_bins
        history = (delay + 1) // 2
        coherence = self._coherence(delay)
        start = 2 * history

        cases = []
        for symbols in product(weights, repeat=history + 1):
            weight = math.prod(w for _, w in symbols)
            train = np.array([b for s, _ in symbols for b in bins(s)], dtype=np.complex128)
            occupancy = []
            for s, _ in symbols:
                occupancy += [s != 1, s != 0]
            means = self._amzi_means(train, coherence)[:, start : start + 2]
            pairs = [occupancy[start + j] and occupancy[start + j - delay] for j in range(2)]
            cases.append((weight, self._click_probs(means), pairs))

        rates = [
            self.config.transmitter.clock_rate
            * sum(w * any_click_probability(probs[k]) for w, probs, _ in cases)
            for k in range(2)
        ]
        alive = [self._alive(r) for r in rates]

        counts = [0.0, 0.0]
        events = [0.0, 0.0]
        for weight, probs, pairs in cases:
            for k in range(2):
                outcomes = accepted_distribution(
                    landing_distribution(probs[k], self.crosstalk),
                    2,
                    self.dead_slots,
                    self.acceptance,
                    alive[k],
                )
                for slots, p in outcomes.items():
                    events[k] += weight * p * len(slots)
                    counts[k] += weight * p * sum(1 for j in slots if pairs[j])
        return counts[0], counts[1], (events[0], events[1])

    def _dps(self) -> SiftedStats:
        config = self.config
        transmitter = config.transmitter
        length = transmitter.dps_train_length
        bits_sent = math.ceil(config.frames / length) * length
        root = math.sqrt(transmitter.signal_class.mean_photons)
        c = self.crosstalk

        probs = {}
        for bit in (0, 1):
            pair = np.array([root, root * (1 - 2 * bit)], dtype=np.complex128)
            means = self._amzi_means(pair, self._coherence())[:, 1]
            probs[bit] = self._click_probs(means)

        slot_time = config.bin_separation
        dead_slots = max(0, math.ceil(self.dead_time / slot_time) - 1)
        alive = [
            1.0 / (1.0 + 0.5 * (probs[0][k] + probs[1][k]) * dead_slots) for k in range(2)
        ]

        tally = defaultdict(float)
        detector_events = [0.0, 0.0]
        for before, bit, after in product((0, 1), repeat=3):
            weight = bits_sent / 8.0
            accepted = []
            for k in range(2):
                landing = 1.0 - (
                    (1.0 - probs[bit][k] * (1.0 - c))
                    * (1.0 - probs[before][k] * c / 2.0)
                    * (1.0 - probs[after][k] * c / 2.0)
                )
                accepted.append(alive[k] * self.acceptance * landing)
                detector_events[k] += weight * accepted[k]

            single = [accepted[k] * (1.0 - accepted[1 - k]) for k in range(2)]
            both = accepted[0] * accepted[1]
            tally["detections"] += weight * (1.0 - (1.0 - accepted[0]) * (1.0 - accepted[1]))
            tally["events"] += weight * (accepted[0] + accepted[1])
            tally["multi_event_frames"] += weight * both
            tally["sifted"] += weight * (single[0] + single[1])
            tally["errors"] += weight * single[1 - bit]

        tally["sifted_x"] = tally["sifted"]
        tally["errors_x"] = tally["errors"]
        name = transmitter.class_names[0]
        return SiftedStats(
            protocol=Protocol.DPS,
            classes={name: ClassTally(frames_sent=float(bits_sent), **tally)},
            wrong_port=tally["errors"],
            detector_events=tuple(detector_events),
            duration=bits_sent / transmitter.clock_rate,
        )
