import math
from dataclasses import dataclass

from app.core.exceptions import DomainValueException


@dataclass(frozen=True)
class DecoyEstimate:
    """Vacuum + weak decoy bounds on the single-photon contribution."""

    y0: float
    y0_upper: float
    y1_lower: float
    e1_upper: float
    q1_lower: float
    mu: float

    def __post_init__(self):
        for name in ("y0", "y0_upper", "y1_lower", "e1_upper", "q1_lower"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainValueException(f"{name} must lie in [0, 1], got {value}")

        expected = self.y1_lower * self.mu * math.exp(-self.mu)
        if abs(self.q1_lower - expected) > 1e-12:
            raise DomainValueException("q1_lower must equal y1_lower * mu * exp(-mu)")
