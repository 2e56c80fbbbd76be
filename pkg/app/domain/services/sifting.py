import logging
from typing import Sequence

import numpy as np

from app.core.enums import Protocol
from app.core.exceptions import EstimationException
from app.domain.entities.detection_event import EventBatch
from app.domain.entities.frame_records import COW_DECOY_CODE, Bb84Records, CowRecords, DpsRecords
from app.domain.entities.sifted_stats import ClassTally, SiftedStats

logger = logging.getLogger(__name__)

EARLY_SLOT, MIDDLE_SLOT, LATE_SLOT = 0, 1, 2
COW_DATA_DETECTOR = 0
COW_MONITOR_DETECTORS = (1, 2)


def _detector_counts(events: EventBatch) -> tuple:
    if len(events) == 0:
        return ()
    return tuple(float(c) for c in np.bincount(events.detector.astype(np.int64)))


def _in_block(events: EventBatch, offset: int, size: int) -> EventBatch:
    local = events.frame - offset
    return events.select((local >= 0) & (local < size))


def sift_bb84(
    records: Bb84Records,
    events: EventBatch,
    class_names: Sequence[str],
    duration: float = 0.0,
) -> SiftedStats:
    """Sift accepted BB84 events against Alice's record.

    Early/late slots measure Z (bit = slot position), the middle slot measures X
    (bit = AMZI port). Frames with more than one accepted event are discarded.
    """

    n = len(records)
    events = _in_block(events, records.frame_offset, n)
    local = events.frame - records.frame_offset

    per_frame = np.bincount(local, minlength=n)
    detected = per_frame > 0
    multi = per_frame > 1

    single = ~multi[local]
    frame = local[single]
    slot = events.slot[single]
    detector = events.detector[single].astype(np.int8)

    measured_x = slot == MIDDLE_SLOT
    measured_bit = np.where(measured_x, detector, (slot == LATE_SLOT).astype(np.int8))
    encoded_x = records.bases[frame] == 1
    sifted = measured_x == encoded_x
    error = sifted & (measured_bit != records.bits[frame])

    classes = records.classes
    size = len(class_names)
    sifted_class = classes[frame[sifted]]
    error_class = classes[frame[error]]
    sifted_is_x = measured_x[sifted]
    error_is_x = measured_x[error]

    def count(values: np.ndarray) -> np.ndarray:
        return np.bincount(values, minlength=size).astype(np.float64)

    frames_sent = count(classes)
    detections = count(classes[detected])
    event_counts = np.bincount(classes[local], minlength=size).astype(np.float64)
    multi_frames = count(classes[multi])
    sifted_z = count(sifted_class[~sifted_is_x])
    sifted_x = count(sifted_class[sifted_is_x])
    errors_z = count(error_class[~error_is_x])
    errors_x = count(error_class[error_is_x])

    tallies = {
        name: ClassTally(
            frames_sent=frames_sent[i],
            detections=detections[i],
            events=event_counts[i],
            sifted=sifted_z[i] + sifted_x[i],
            errors=errors_z[i] + errors_x[i],
            sifted_z=sifted_z[i],
            errors_z=errors_z[i],
            sifted_x=sifted_x[i],
            errors_x=errors_x[i],
            multi_event_frames=multi_frames[i],
        )
        for i, name in enumerate(class_names)
    }
    return SiftedStats(
        protocol=Protocol.BB84,
        classes=tallies,
        detector_events=_detector_counts(events),
        duration=duration,
    )


def sift_cow(
    records: CowRecords,
    key_events: EventBatch,
    monitor_events: EventBatch,
    class_name: str = "signal",
    delay_bins: int = 1,
    duration: float = 0.0,
) -> SiftedStats:
    """Sift COW data-line events and accumulate monitor interference counts.

    Key bits come from the arrival bin on non-decoy frames; decoy frames are
    excluded from the key. Monitor clicks count towards visibility only in slots
    where two occupied bins of the block interfere, inside or across frames.
    """

    n = len(records)
    key_events = _in_block(key_events, records.frame_offset, n)
    local = key_events.frame - records.frame_offset

    per_frame = np.bincount(local, minlength=n)
    detected = per_frame > 0
    multi = per_frame > 1

    single = ~multi[local]
    frame = local[single]
    bit = key_events.slot[single]
    symbol = records.symbols[frame]
    keyed = symbol != COW_DECOY_CODE
    sifted = int(np.count_nonzero(keyed))
    errors = int(np.count_nonzero(keyed & (bit != symbol)))

    tally = ClassTally(
        frames_sent=float(n),
        detections=float(np.count_nonzero(detected)),
        events=float(local.size),
        sifted=float(sifted),
        errors=float(errors),
        sifted_z=float(sifted),
        errors_z=float(errors),
        multi_event_frames=float(np.count_nonzero(multi)),
    )

    monitor = _in_block(monitor_events, records.frame_offset, n)
    occupied = records.occupied_bins()
    position = 2 * (monitor.frame - records.frame_offset) + monitor.slot
    earlier = position - delay_bins
    valid = (earlier >= 0) & (position >= 0) & (position < occupied.size)
    pair = np.zeros(position.size, dtype=bool)
    pair[valid] = occupied[position[valid]] & occupied[earlier[valid]]
    monitor_max = int(np.count_nonzero(pair & (monitor.detector == COW_MONITOR_DETECTORS[0])))
    monitor_min = int(np.count_nonzero(pair & (monitor.detector == COW_MONITOR_DETECTORS[1])))

    return SiftedStats(
        protocol=Protocol.COW,
        classes={class_name: tally},
        monitor_max=float(monitor_max),
        monitor_min=float(monitor_min),
        detector_events=_detector_counts(EventBatch.concatenate([key_events, monitor])),
        duration=duration,
    )


def sift_dps(
    records: DpsRecords,
    events: EventBatch,
    class_name: str = "signal",
    duration: float = 0.0,
) -> SiftedStats:
    """Decode DPS bits from the AMZI port of each click.

    Slot k of a train carries the phase step between pulses k-1 and k; the two edge
    slots hold a single pulse and are discarded. Slots with clicks on both ports
    are discarded as double clicks.
    """

    trains, length = records.bits.shape
    events = _in_block(events, records.frame_offset, trains)
    inner = (events.slot >= 1) & (events.slot <= length)
    events = events.select(inner)

    position = (events.frame - records.frame_offset) * length + (events.slot - 1)
    per_slot = np.bincount(position, minlength=trains * length)
    detected = int(np.count_nonzero(per_slot))
    multi = per_slot > 1

    single = ~multi[position]
    truth = records.bits.reshape(-1)[position[single]]
    wrong = int(np.count_nonzero(events.detector[single] != truth))
    sifted = int(np.count_nonzero(single))

    tally = ClassTally(
        frames_sent=float(trains * length),
        detections=float(detected),
        events=float(position.size),
        sifted=float(sifted),
        errors=float(wrong),
        sifted_x=float(sifted),
        errors_x=float(wrong),
        multi_event_frames=float(np.count_nonzero(multi)),
    )
    return SiftedStats(
        protocol=Protocol.DPS,
        classes={class_name: tally},
        wrong_port=float(wrong),
        detector_events=_detector_counts(events),
        duration=duration,
    )


def estimate_visibility(max_counts: float, min_counts: float) -> float:
    """Interference visibility (max - min) / (max + min)."""

    total = max_counts + min_counts
    if total <= 0:
        raise EstimationException("Visibility needs at least one monitor count")
    return (max_counts - min_counts) / total
