from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, Tuple

from app.core.enums import Protocol
from app.core.exceptions import DomainValueException


@dataclass(frozen=True)
class ClassTally:
    """Counters of one intensity class.

    Counts are floats so the analytic oracle can fill them with expectations.
    """

    frames_sent: float = 0.0
    detections: float = 0.0
    events: float = 0.0
    sifted: float = 0.0
    errors: float = 0.0
    sifted_z: float = 0.0
    errors_z: float = 0.0
    sifted_x: float = 0.0
    errors_x: float = 0.0
    multi_event_frames: float = 0.0

    def __post_init__(self):
        slack = 1e-9 * max(self.frames_sent, 1.0)
        if not (
            self.errors <= self.sifted + slack
            and self.sifted <= self.detections + slack
            and self.detections <= self.frames_sent + slack
        ):
            raise DomainValueException(
                "Tally must satisfy errors <= sifted <= detections <= frames_sent, "
                f"got {self.errors}, {self.sifted}, {self.detections}, {self.frames_sent}"
            )

    def merge(self, other: "ClassTally") -> "ClassTally":
        return ClassTally(
            **{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)}
        )

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class SiftedStats:
    """Mergeable sifting statistics of a run.

    ``wrong_port`` counts DPS bits decoded at the wrong AMZI output; ``monitor_max`` /
    ``monitor_min`` count COW monitor clicks at the constructive/destructive port in
    slots where two successive occupied pulses interfere. ``duration`` is the emission
    time covered, in seconds.
    """

    protocol: Protocol
    classes: Dict[str, ClassTally] = field(default_factory=dict)
    wrong_port: float = 0.0
    monitor_max: float = 0.0
    monitor_min: float = 0.0
    detector_events: Tuple[float, ...] = ()
    duration: float = 0.0

    def merge(self, other: "SiftedStats") -> "SiftedStats":
        """Associative, commutative combination of two partial statistics."""

        if other.protocol != self.protocol:
            raise DomainValueException("Cannot merge statistics of different protocols")

        classes = dict(self.classes)
        for name, tally in other.classes.items():
            classes[name] = classes[name].merge(tally) if name in classes else tally

        width = max(len(self.detector_events), len(other.detector_events))
        detector_events = tuple(
            _at(self.detector_events, i) + _at(other.detector_events, i)
            for i in range(width)
        )

        return SiftedStats(
            protocol=self.protocol,
            classes=classes,
            wrong_port=self.wrong_port + other.wrong_port,
            monitor_max=self.monitor_max + other.monitor_max,
            monitor_min=self.monitor_min + other.monitor_min,
            detector_events=detector_events,
            duration=self.duration + other.duration,
        )

    def tally(self, name: str) -> ClassTally:
        return self.classes.get(name, ClassTally())

    def total(self) -> ClassTally:
        result = ClassTally()
        for tally in self.classes.values():
            result = result.merge(tally)
        return result

    @classmethod
    def reduce(cls, parts: Iterable["SiftedStats"]) -> "SiftedStats":
        parts = list(parts)
        if not parts:
            raise DomainValueException("Nothing to reduce")
        result = parts[0]
        for part in parts[1:]:
            result = result.merge(part)
        return result


def _at(values: Tuple[float, ...], index: int) -> float:
    return values[index] if index < len(values) else 0.0
