from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional, Tuple

from app.core.enums import Protocol, SimulationMode
from app.domain.entities.experiment_config import _plain

CSV_COLUMNS = (
    "protocol",
    "distance_km",
    "clock_hz",
    "mu_signal",
    "raw_bps",
    "sifted_bps",
    "secret_bps",
    "qber_time",
    "qber_phase",
    "visibility",
    "y1_lower",
    "e1_upper",
    "frames",
    "seed",
)

Interval = Tuple[float, float]


@dataclass(frozen=True)
class ClassReport:
    """Per-intensity-class figures of a run."""

    name: str
    mean_photons: float
    probability: float
    frames_sent: float
    detections: float
    gain: float
    gain_ci: Interval
    qber: Optional[float] = None
    qber_ci: Optional[Interval] = None


@dataclass(frozen=True)
class RunReport:
    """Result of one experiment run."""

    protocol: Protocol
    mode: SimulationMode
    distance_km: float
    clock_hz: float
    mu_signal: float
    transmission: float
    frames: int
    seed: int
    raw_bps: float
    sifted_bps: float
    secret_bps: float
    qber_time: Optional[float] = None
    qber_time_ci: Optional[Interval] = None
    qber_phase: Optional[float] = None
    qber_phase_ci: Optional[Interval] = None
    visibility: Optional[float] = None
    visibility_ci: Optional[Interval] = None
    sifted_fraction: float = 0.0
    sifted_fraction_ci: Interval = (0.0, 1.0)
    secret_fraction: float = 0.0
    y0: Optional[float] = None
    y1_lower: Optional[float] = None
    e1_upper: Optional[float] = None
    eve_bound: str = ""
    ec_efficiency: float = 1.2
    classes: Tuple[ClassReport, ...] = ()
    wall_time_s: float = 0.0
    frames_per_second: float = 0.0
    config: dict = field(default_factory=dict)

    def class_report(self, name: str) -> ClassReport:
        for report in self.classes:
            if report.name == name:
                return report
        raise KeyError(name)

    def to_csv_row(self) -> list:
        """Values in CSV_COLUMNS order; ``None`` becomes an empty cell."""

        row = []
        for column in CSV_COLUMNS:
            value = getattr(self, column)
            if isinstance(value, (Protocol, SimulationMode)):
                value = value.value
            row.append("" if value is None else value)
        return row

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        values: dict[str, Any] = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if f.name.endswith("_ci") and value is not None:
                value = tuple(value)
            values[f.name] = value

        values["protocol"] = Protocol(values["protocol"])
        values["mode"] = SimulationMode(values["mode"])
        values["classes"] = tuple(
            ClassReport(
                **{
                    **c,
                    "gain_ci": tuple(c["gain_ci"]),
                    "qber_ci": tuple(c["qber_ci"]) if c.get("qber_ci") is not None else None,
                }
            )
            for c in data.get("classes", [])
        )
        return cls(**values)
