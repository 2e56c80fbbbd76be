import json
import logging
from datetime import datetime, timezone
from typing import List

from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import sessionmaker

from app.core.exceptions import ReportPersistenceException
from app.domain.entities.run_report import RunReport
from app.domain.repositories.report_repository import IReportRepository
from app.models.models import RunReportModel

logger = logging.getLogger(__name__)


class SqlReportRepository(IReportRepository):
    """SQLAlchemy report repository; the full report is kept as a JSON payload."""

    def __init__(self, session_factory: sessionmaker, location: str = "database"):
        self.session_factory = session_factory
        self.location = location

    def save(self, reports: List[RunReport]) -> str:
        db = self.session_factory()
        try:
            for report in reports:
                db.add(self._to_model(report))
            db.commit()
        except SQLAlchemyError as exc:
            db.rollback()
            raise ReportPersistenceException(
                f"Could not store reports: {exc}", self.location
            ) from exc
        finally:
            db.close()

        logger.info("Stored %d reports in %s", len(reports), self.location)
        return self.location

    def load(self) -> List[RunReport]:
        return self.list_page(page=1, limit=None)

    def list_page(self, page: int = 1, limit: int = 50) -> List[RunReport]:
        """Reports in insertion order with pagination."""

        db = self.session_factory()
        try:
            query = db.query(RunReportModel).order_by(RunReportModel.id)
            if limit is not None:
                query = query.offset((page - 1) * limit).limit(limit)
            rows = query.all()
            return [RunReport.from_dict(json.loads(row.payload)) for row in rows]
        except SQLAlchemyError as exc:
            raise ReportPersistenceException(
                f"Could not read reports: {exc}", self.location
            ) from exc
        finally:
            db.close()

    def count(self) -> int:
        db = self.session_factory()
        try:
            return db.query(RunReportModel).count()
        finally:
            db.close()

    @staticmethod
    def _to_model(report: RunReport) -> RunReportModel:
        return RunReportModel(
            protocol=report.protocol.value,
            mode=report.mode.value,
            distance_km=report.distance_km,
            clock_hz=report.clock_hz,
            mu_signal=report.mu_signal,
            raw_bps=report.raw_bps,
            sifted_bps=report.sifted_bps,
            secret_bps=report.secret_bps,
            qber_time=report.qber_time,
            qber_phase=report.qber_phase,
            visibility=report.visibility,
            y1_lower=report.y1_lower,
            e1_upper=report.e1_upper,
            frames=report.frames,
            seed=report.seed,
            payload=json.dumps(report.to_dict(), sort_keys=True),
            created_at=datetime.now(timezone.utc),
        )
