import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from app.core.enums import SlotLabel

_THREE_SLOT_LABELS = (SlotLabel.EARLY, SlotLabel.MIDDLE, SlotLabel.LATE)


@dataclass(frozen=True)
class DetectionEvent:
    """One accepted click of a single-photon detector."""

    detector_id: int
    frame_index: int
    slot: int
    timestamp: float
    is_dark: bool = False

    @property
    def slot_label(self) -> Union[SlotLabel, int]:
        """Early/middle/late label behind a one-bin AMZI, bin index otherwise."""

        if 0 <= self.slot < len(_THREE_SLOT_LABELS):
            return _THREE_SLOT_LABELS[self.slot]
        return self.slot


@dataclass(frozen=True)
class DetectorState:
    """Dead-time clock of one detector."""

    detector_id: int
    last_click_time: float = -math.inf


@dataclass
class EventBatch:
    """Columnar detection events of one simulation batch.

    Frame indices are global (batch offset included) so batches concatenate directly.
    """

    detector: np.ndarray = field(default_factory=lambda: np.empty(0, np.int8))
    frame: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    slot: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))
    timestamp: np.ndarray = field(default_factory=lambda: np.empty(0, np.float64))
    is_dark: np.ndarray = field(default_factory=lambda: np.empty(0, bool))

    def __len__(self) -> int:
        return int(self.frame.size)

    def select(self, mask: np.ndarray) -> "EventBatch":
        return EventBatch(
            detector=self.detector[mask],
            frame=self.frame[mask],
            slot=self.slot[mask],
            timestamp=self.timestamp[mask],
            is_dark=self.is_dark[mask],
        )

    def to_events(self) -> list[DetectionEvent]:
        return [
            DetectionEvent(
                detector_id=int(d),
                frame_index=int(f),
                slot=int(s),
                timestamp=float(t),
                is_dark=bool(k),
            )
            for d, f, s, t, k in zip(
                self.detector, self.frame, self.slot, self.timestamp, self.is_dark
            )
        ]

    @classmethod
    def concatenate(cls, batches: list["EventBatch"]) -> "EventBatch":
        if not batches:
            return cls()
        return cls(
            detector=np.concatenate([b.detector for b in batches]),
            frame=np.concatenate([b.frame for b in batches]),
            slot=np.concatenate([b.slot for b in batches]),
            timestamp=np.concatenate([b.timestamp for b in batches]),
            is_dark=np.concatenate([b.is_dark for b in batches]),
        )
