import math
from dataclasses import dataclass
from typing import Optional

from app.core.exceptions import DomainValueException


@dataclass(frozen=True)
class KeyRateReport:
    """Rates and error figures of one protocol run."""

    raw_rate: float
    sifted_rate: float
    qber_time: Optional[float]
    qber_phase: Optional[float]
    visibility: Optional[float]
    secret_rate: float
    ec_efficiency: float = 1.2
    secret_fraction: float = 0.0
    eve_bound: str = ""

    def __post_init__(self):
        """Validate rate ordering."""

        if self.ec_efficiency < 1.0:
            raise DomainValueException("Error-correction efficiency must be >= 1")
        if self.secret_rate < 0:
            raise DomainValueException("Secret rate cannot be negative")
        if self.secret_rate > self.sifted_rate * (1 + 1e-12) + 1e-12:
            raise DomainValueException("Secret rate cannot exceed the sifted rate")
        if self.sifted_rate > self.raw_rate * (1 + 1e-12) + 1e-12:
            raise DomainValueException("Sifted rate cannot exceed the raw rate")
        for name in ("qber_time", "qber_phase", "visibility"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise DomainValueException(f"{name} must lie in [0, 1], got {value}")
