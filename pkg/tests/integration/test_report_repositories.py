"""
Integration tests for report repositories.

Tests the CSV, JSON-lines and SQL report sinks against real files and a
SQLite database.
"""

from unittest.mock import Mock

import pytest
from freezegun import freeze_time
from sqlalchemy.exc import SQLAlchemyError

from app.core.enums import Protocol
from app.core.exceptions import ReportPersistenceException
from app.domain.entities.run_report import CSV_COLUMNS
from app.infrastructure.repositories.csv_report_repository import CsvReportRepository
from app.infrastructure.repositories.jsonl_report_repository import JsonLinesReportRepository
from app.infrastructure.repositories.sql_report_repository import SqlReportRepository
from app.models.models import RunReportModel
from tests.conftest import make_report


class TestCsvReportRepository:
    """Test the plot-ready CSV sink."""

    def test_save_writes_header_and_rows(self, tmp_path):
        """Should write one row per report under the fixed header."""
        # Arrange
        repository = CsvReportRepository(str(tmp_path / "out" / "sweep.csv"))
        reports = [make_report(distance_km=0.0), make_report(distance_km=10.0)]

        # Act
        location = repository.save(reports)

        # Assert
        assert location == str(tmp_path / "out" / "sweep.csv")
        rows = repository.read_rows()
        assert list(rows[0].keys()) == list(CSV_COLUMNS)
        assert [float(r["distance_km"]) for r in rows] == [0.0, 10.0]
        assert rows[0]["protocol"] == "bb84"

    def test_missing_values_are_empty(self, tmp_path):
        """Should leave None columns empty."""
        repository = CsvReportRepository(str(tmp_path / "dps.csv"))

        repository.save([make_report(protocol=Protocol.DPS, visibility=None, y1_lower=None)])

        row = repository.read_rows()[0]
        assert row["visibility"] == ""
        assert row["y1_lower"] == ""

    def test_floats_keep_full_precision(self, tmp_path):
        """Should write floats with repr precision."""
        repository = CsvReportRepository(str(tmp_path / "r.csv"))

        repository.save([make_report(secret_bps=1.0 / 3.0)])

        assert float(repository.read_rows()[0]["secret_bps"]) == 1.0 / 3.0

    def test_load_unsupported(self, tmp_path):
        """Should refuse to rebuild reports from summary columns."""
        with pytest.raises(ReportPersistenceException):
            CsvReportRepository(str(tmp_path / "r.csv")).load()

    def test_unwritable_path(self, tmp_path):
        """Should raise ReportPersistenceException carrying the path."""
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        repository = CsvReportRepository(str(blocker / "r.csv"))

        with pytest.raises(ReportPersistenceException) as exc_info:
            repository.save([make_report()])

        assert exc_info.value.path == str(blocker / "r.csv")


class TestJsonLinesReportRepository:
    """Test the full-fidelity JSON-lines sink."""

    def test_save_and_load(self, tmp_path):
        """Should reload the reports it wrote."""
        repository = JsonLinesReportRepository(str(tmp_path / "reports.jsonl"))
        reports = [make_report(), make_report(distance_km=30.0, qber_phase=None)]

        repository.save(reports)

        assert repository.load() == reports

    def test_one_object_per_line(self, tmp_path):
        """Should write one JSON object per line."""
        path = tmp_path / "reports.jsonl"
        JsonLinesReportRepository(str(path)).save([make_report(), make_report()])

        assert len(path.read_text().splitlines()) == 2

    def test_malformed_file(self, tmp_path):
        """Should raise ReportPersistenceException for malformed lines."""
        path = tmp_path / "broken.jsonl"
        path.write_text('{"protocol": "bb84"}\n')

        with pytest.raises(ReportPersistenceException, match="Malformed"):
            JsonLinesReportRepository(str(path)).load()

    def test_missing_file(self, tmp_path):
        """Should raise ReportPersistenceException for a missing file."""
        with pytest.raises(ReportPersistenceException):
            JsonLinesReportRepository(str(tmp_path / "absent.jsonl")).load()


class TestSqlReportRepository:
    """Test the SQLAlchemy sink."""

    def test_save_and_load(self, sql_repository):
        """Should store reports and load them in insertion order."""
        reports = [make_report(distance_km=d) for d in (0.0, 10.0, 20.0)]

        location = sql_repository.save(reports)

        assert location == "test-db"
        assert sql_repository.count() == 3
        assert sql_repository.load() == reports

    def test_pagination(self, sql_repository):
        """Should page through stored reports."""
        sql_repository.save([make_report(distance_km=float(d)) for d in range(5)])

        page = sql_repository.list_page(page=2, limit=2)

        assert [r.distance_km for r in page] == [2.0, 3.0]

    def test_summary_columns(self, sql_repository, session_factory):
        """Should fill the indexed summary columns."""
        sql_repository.save([make_report(distance_km=25.0)])

        db = session_factory()
        try:
            row = db.query(RunReportModel).one()
        finally:
            db.close()

        assert row.protocol == "bb84"
        assert row.distance_km == 25.0
        assert row.y1_lower == pytest.approx(0.0061)

    @freeze_time("2024-01-15 10:30:00")
    def test_created_at(self, sql_repository, session_factory, fixed_datetime):
        """Should stamp reports with the storage time."""
        sql_repository.save([make_report()])

        db = session_factory()
        try:
            row = db.query(RunReportModel).one()
        finally:
            db.close()

        assert row.created_at.replace(tzinfo=None) == fixed_datetime.replace(tzinfo=None)

    def test_commit_failure(self):
        """Should roll back and raise ReportPersistenceException."""
        # Arrange
        mock_session = Mock()
        mock_session.commit.side_effect = SQLAlchemyError("disk full")
        repository = SqlReportRepository(lambda: mock_session, "broken-db")

        # Act
        with pytest.raises(ReportPersistenceException) as exc_info:
            repository.save([make_report()])

        # Assert
        assert exc_info.value.path == "broken-db"
        mock_session.rollback.assert_called_once()
        mock_session.close.assert_called_once()
