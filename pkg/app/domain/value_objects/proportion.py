import math
from dataclasses import dataclass
from typing import Tuple

from scipy.stats import beta

from app.core.exceptions import DomainValueException


@dataclass(frozen=True)
class Proportion:
    """Estimated fraction ``successes / trials`` with a Clopper-Pearson interval.

    Counts may be expected (non-integer) values when produced by the analytic oracle.
    """

    successes: float
    trials: float
    confidence: float = 0.95

    def __post_init__(self):
        if self.trials < 0 or self.successes < 0:
            raise DomainValueException("Counts cannot be negative")
        if self.successes > self.trials * (1 + 1e-12):
            raise DomainValueException("Successes cannot exceed trials")

    @property
    def value(self) -> float:
        if self.trials == 0:
            return math.nan
        return self.successes / self.trials

    @property
    def interval(self) -> Tuple[float, float]:
        """Two-sided Clopper-Pearson interval."""

        if self.trials == 0:
            return (0.0, 1.0)

        alpha = 1.0 - self.confidence
        k, n = min(self.successes, self.trials), self.trials
        lower = 0.0 if k <= 0 else float(beta.ppf(alpha / 2.0, k, n - k + 1))
        upper = 1.0 if k >= n else float(beta.ppf(1.0 - alpha / 2.0, k + 1, n - k))
        return (lower, upper)

    @property
    def sigma(self) -> float:
        """Binomial standard error of the estimate."""

        if self.trials == 0:
            return math.nan
        p = self.value
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.trials)

    def to_dict(self) -> dict:
        lower, upper = self.interval
        return {"value": self.value, "ci_lower": lower, "ci_upper": upper}
