from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, validator

from app.core.enums import Protocol, SimulationMode

MAX_HTTP_MONTECARLO_FRAMES = 2_000_000

Interval = Tuple[float, float]


class ExperimentRunRequest(BaseModel):
    """Schema for running one experiment: a preset and/or config sections."""

    preset: Optional[str] = Field(None, description="Device preset, e.g. bb84-table1")
    protocol: Optional[Protocol] = Field(None, description="Required without a preset")
    frames: Optional[int] = Field(None, gt=0, description="Frames to simulate")
    seed: Optional[int] = Field(None, ge=0)
    mode: Optional[SimulationMode] = None
    distance_km: Optional[float] = Field(None, ge=0, description="Fibre length override")
    config: Dict[str, Dict[str, Any]] = Field(
        default_factory=dict,
        description="Config sections as in the flat file, e.g. {'channel': {'excess_loss_db': 5}}",
    )

    @validator("config")
    def validate_sections(cls, v):
        """The experiment section is given through the top-level fields."""

        if "experiment" in v:
            raise ValueError("Use the top-level fields instead of an experiment section")
        return v

    class Config:
        schema_extra = {
            "example": {
                "preset": "bb84-table1",
                "frames": 1000000,
                "seed": 7,
                "mode": "analytic",
                "distance_km": 20,
                "config": {"channel": {"excess_loss_db": 4.9}},
            }
        }


class ExperimentSweepRequest(ExperimentRunRequest):
    """Schema for a distance sweep."""

    distances: List[float] = Field(..., min_length=1, description="Fibre lengths in km")

    @validator("distances")
    def validate_distances(cls, v):
        if any(d < 0 for d in v):
            raise ValueError("Distances cannot be negative")
        return v

    class Config:
        schema_extra = {
            "example": {"preset": "cow-table1", "distances": [0, 10, 20, 30]}
        }


class ClassReportSchema(BaseModel):
    name: str
    mean_photons: float
    probability: float
    frames_sent: float
    detections: float
    gain: float
    gain_ci: Interval
    qber: Optional[float] = None
    qber_ci: Optional[Interval] = None


class RunReportResponse(BaseModel):
    """Schema for a run report."""

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
    sifted_fraction: float
    sifted_fraction_ci: Interval
    secret_fraction: float
    y0: Optional[float] = None
    y1_lower: Optional[float] = None
    e1_upper: Optional[float] = None
    eve_bound: str
    ec_efficiency: float
    classes: List[ClassReportSchema]
    wall_time_s: float
    frames_per_second: float
    config: dict


class SweepFailureSchema(BaseModel):
    distance_km: float
    message: str


class SweepResponse(BaseModel):
    """Schema for sweep results; failed points are listed, not raised."""

    reports: List[RunReportResponse]
    failures: List[SweepFailureSchema]


class ReportListResponse(BaseModel):
    """Schema for persisted reports with pagination."""

    reports: List[RunReportResponse]
    pagination: dict

    class Config:
        schema_extra = {
            "example": {
                "reports": [],
                "pagination": {
                    "page": 1,
                    "limit": 50,
                    "total_count": 0,
                    "total_pages": 0,
                    "has_next": False,
                    "has_prev": False,
                },
            }
        }
