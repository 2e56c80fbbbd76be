from abc import ABC, abstractmethod
from typing import List

from app.domain.entities.run_report import RunReport


class IReportRepository(ABC):
    """Report repository interface defining the persistence contract for run reports."""

    @abstractmethod
    def save(self, reports: List[RunReport]) -> str:
        """Persist reports and return where they went."""
        pass

    @abstractmethod
    def load(self) -> List[RunReport]:
        """Read back every persisted report."""
        pass
