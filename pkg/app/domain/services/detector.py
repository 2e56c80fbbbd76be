import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate, special, stats

from app.core.exceptions import DomainValueException
from app.domain.entities.detection_event import DetectionEvent, DetectorState, EventBatch
from app.domain.entities.receiver_params import DetectorParams

FWHM_TO_SIGMA = 1.0 / (2.0 * math.sqrt(2.0 * math.log(2.0)))


def click_probability(mean_photons, efficiency: float):
    """Probability that a coherent pulse of the given mean photon number clicks."""

    return -np.expm1(-efficiency * np.asarray(mean_photons, dtype=np.float64))


def combined_click_probability(photon_probability, dark_probability: float):
    """Click probability with an independent dark count in the same slot."""

    return 1.0 - (1.0 - np.asarray(photon_probability)) * (1.0 - dark_probability)


def slot_acceptance(jitter_sigma: float, slot_window: float) -> float:
    """Fraction of events whose jittered time stays inside their slot window."""

    if jitter_sigma == 0:
        return 1.0
    return float(special.erf(slot_window / (2.0 * math.sqrt(2.0) * jitter_sigma)))


def slot_acceptance_numeric(jitter_sigma: float, slot_window: float) -> float:
    """slot_acceptance by direct integration of the Gaussian density."""

    if jitter_sigma == 0:
        return 1.0
    value, _ = integrate.quad(
        stats.norm(scale=jitter_sigma).pdf, -slot_window / 2.0, slot_window / 2.0
    )
    return float(value)


def default_crosstalk_probability(
    jitter_sigma: float, pulse_fwhm: float, bin_separation: float, slot_window: float
) -> float:
    """Probability that a click falls inside a neighbouring slot's window.

    The arrival spread combines detector jitter with the optical pulse width.
    """

    sigma = math.hypot(jitter_sigma, pulse_fwhm * FWHM_TO_SIGMA)
    if sigma == 0:
        return 0.0
    density = stats.norm(scale=sigma).pdf
    one_side, _ = integrate.quad(
        density, bin_separation - slot_window / 2.0, bin_separation + slot_window / 2.0
    )
    return float(min(1.0, 2.0 * one_side))


def assign_slot(
    timestamp: float,
    frame_start: float,
    bin_separation: float,
    n_slots: int,
    slot_window: float,
) -> Optional[int]:
    """Slot whose window contains ``timestamp``, or ``None`` (discard)."""

    offset = timestamp - frame_start
    slot = int(round(offset / bin_separation))
    if 0 <= slot < n_slots and abs(offset - slot * bin_separation) < slot_window / 2.0:
        return slot
    return None


def assign_slots(
    timestamps: np.ndarray,
    frame_starts: np.ndarray,
    bin_separation: float,
    n_slots: int,
    slot_window: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized assign_slot: ``(slots, accepted_mask)``."""

    offsets = timestamps - frame_starts
    slots = np.rint(offsets / bin_separation).astype(np.int64)
    accepted = (
        (slots >= 0)
        & (slots < n_slots)
        & (np.abs(offsets - slots * bin_separation) < slot_window / 2.0)
    )
    return slots, accepted


class DetectorModel:
    """Threshold single-photon detectors with dark counts, crosstalk, jitter and dead time."""

    def __init__(
        self, params: DetectorParams, slot_window: float, crosstalk_probability: float = 0.0
    ):
        self.params = params
        self.slot_window = slot_window
        self.crosstalk_probability = crosstalk_probability
        self.dark_probability = params.dark_probability(slot_window)

    def click_probabilities(self, slot_means: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """``(photon_click, any_click)`` probabilities per slot."""

        photon = click_probability(slot_means, self.params.efficiency)
        return photon, combined_click_probability(photon, self.dark_probability)

    def sample_clicks(
        self,
        slot_means: np.ndarray,
        rng: np.random.Generator,
        frame_offset: int,
        frame_period: float,
        bin_separation: float,
    ) -> EventBatch:
        """Candidate clicks for ``slot_means[frames, detectors, slots]``.

        Crosstalk may move a click one slot left or right (possibly outside the frame);
        timestamps carry Gaussian jitter. Dead time is not applied here.
        """

        photon, total = self.click_probabilities(slot_means)
        u = rng.random(slot_means.shape)
        frame, detector, slot = np.nonzero(u < total)
        is_dark = u[frame, detector, slot] >= photon[frame, detector, slot]
        n_slots = slot_means.shape[2]

        if self.crosstalk_probability > 0 and frame.size:
            moved = rng.random(frame.size) < self.crosstalk_probability
            step = np.where(rng.random(frame.size) < 0.5, -1, 1)
            slot = slot + np.where(moved, step, 0)

            # a slot hit twice on one detector is a single click
            key = (frame * slot_means.shape[1] + detector) * (n_slots + 2) + (slot + 1)
            _, first = np.unique(key, return_index=True)
            first.sort()
            frame, detector, slot, is_dark = frame[first], detector[first], slot[first], is_dark[first]

        frame = frame.astype(np.int64) + frame_offset
        timestamp = frame * frame_period + slot * bin_separation
        if self.params.jitter_sigma > 0 and frame.size:
            timestamp = timestamp + rng.normal(0.0, self.params.jitter_sigma, frame.size)

        return EventBatch(
            detector=detector.astype(np.int8),
            frame=frame,
            slot=slot.astype(np.int32),
            timestamp=timestamp,
            is_dark=is_dark,
        )

    def apply_dead_time(
        self, events: EventBatch, states: Dict[int, DetectorState]
    ) -> Tuple[EventBatch, Dict[int, DetectorState]]:
        """Suppress clicks within the dead time of the previous click, per detector.

        Must see each detector's events in emission order; ``states`` carries the
        dead-time clocks across batches.
        """

        dead_time = self.params.dead_time
        keep = np.zeros(len(events), dtype=bool)
        new_states = dict(states)

        for detector_id in np.unique(events.detector).tolist():
            idx = np.flatnonzero(events.detector == detector_id)
            idx = idx[np.argsort(events.timestamp[idx], kind="stable")]
            state = new_states.get(detector_id, DetectorState(detector_id))
            last = state.last_click_time
            times = events.timestamp[idx].tolist()

            for position, t in zip(idx.tolist(), times):
                if t - last >= dead_time and (dead_time > 0 or t > last):
                    keep[position] = True
                    last = t

            new_states[detector_id] = DetectorState(detector_id, last)

        survivors = events.select(keep)
        order = np.lexsort((survivors.timestamp, survivors.detector))
        return survivors.select(order), new_states

    def detect(
        self,
        slot_means,
        state: DetectorState,
        rng: np.random.Generator,
        frame_index: int = 0,
        frame_period: float = 0.0,
        bin_separation: float = 600e-12,
    ) -> Tuple[List[DetectionEvent], DetectorState]:
        """Detection events of one detector for one frame's per-slot mean photons."""

        means = np.asarray(slot_means, dtype=np.float64)
        if np.any(means < 0):
            raise DomainValueException("Slot mean photon numbers cannot be negative")

        candidates = self.sample_clicks(
            means[None, None, :], rng, frame_index, frame_period, bin_separation
        )
        candidates.detector[:] = state.detector_id
        survivors, states = self.apply_dead_time(candidates, {state.detector_id: state})

        starts = survivors.frame * frame_period
        slots, accepted = assign_slots(
            survivors.timestamp, starts, bin_separation, means.size, self.slot_window
        )
        survivors.slot = slots.astype(np.int32)
        return survivors.select(accepted).to_events(), states[state.detector_id]
