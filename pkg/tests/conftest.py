"""
Pytest configuration and shared fixtures for testing.

This module provides the fixtures shared by unit and integration tests:
preset and noiseless experiment configurations, report factories, a SQLite-backed
report repository and the FastAPI test client.
"""

import math
from dataclasses import replace
from datetime import datetime, timezone
from typing import Generator

import pytest
from fastapi.testclient import TestClient
from sqlalchemy.orm import sessionmaker

from app.api.dependencies import get_report_repository
from app.application.services.preset_catalog import PresetCatalog
from app.core.enums import Protocol, SimulationMode
from app.database.db_connection import make_session_factory
from app.domain.entities.channel_params import ChannelParams
from app.domain.entities.experiment_config import ExperimentConfig
from app.domain.entities.receiver_params import DetectorParams, ReceiverParams
from app.domain.entities.run_report import ClassReport, RunReport
from app.domain.entities.transmitter_params import IntensityClass, TransmitterParams
from app.infrastructure.repositories.sql_report_repository import SqlReportRepository
from app.main import app


def noiseless_config(protocol: Protocol, **changes) -> ExperimentConfig:
    """Ideal devices: no dark counts, jitter, crosstalk, dead time or leakage."""

    if protocol == Protocol.BB84:
        classes = (
            IntensityClass("signal", 0.5, 0.8),
            IntensityClass("decoy", 0.1, 0.15),
            IntensityClass("vacuum", 0.0, 0.05),
        )
    else:
        classes = (IntensityClass("signal", 0.5, 1.0),)

    config = ExperimentConfig(
        protocol=protocol,
        transmitter=TransmitterParams(
            clock_rate=1.0 / 600e-12 if protocol == Protocol.DPS else 500e6,
            bin_separation=600e-12,
            extinction_db=math.inf,
            intensity_classes=classes,
            phase_randomize=protocol != Protocol.COW,
            cow_decoy_probability=0.1,
            dps_train_length=16,
        ),
        channel=ChannelParams(length_km=0.0, atten_db_per_km=0.2, excess_loss_db=0.0),
        receiver=ReceiverParams(
            tbs_monitor_fraction=0.5 if protocol == Protocol.COW else 1.0,
            amzi_delay_steps=2,
            amzi_phase=0.0,
            insertion_loss_db=0.0,
            key_path_loss_db=0.0,
            slot_crosstalk_prob=0.0,
        ),
        detector=DetectorParams(
            efficiency=1.0, dark_count_rate=0.0, jitter_sigma=0.0, dead_time=0.0
        ),
        frames=20_000,
        seed=3,
        mode=SimulationMode.MONTECARLO,
    )
    return replace(config, **changes) if changes else config


@pytest.fixture
def catalog() -> PresetCatalog:
    """Preset catalog shipped with the simulator."""
    return PresetCatalog()


@pytest.fixture
def bb84_config(catalog: PresetCatalog) -> ExperimentConfig:
    return catalog.build("bb84-table1")


@pytest.fixture
def cow_config(catalog: PresetCatalog) -> ExperimentConfig:
    return catalog.build("cow-table1")


@pytest.fixture
def dps_config(catalog: PresetCatalog) -> ExperimentConfig:
    return catalog.build("dps-table1")


def make_report(**overrides) -> RunReport:
    """RunReport with plausible BB84 values."""

    values = dict(
        protocol=Protocol.BB84,
        mode=SimulationMode.ANALYTIC,
        distance_km=20.0,
        clock_hz=560e6,
        mu_signal=0.45,
        transmission=0.398107,
        frames=1_000_000,
        seed=1,
        raw_bps=1.51e6,
        sifted_bps=7.5e5,
        secret_bps=3.3e5,
        qber_time=0.0117,
        qber_time_ci=(0.0115, 0.0119),
        qber_phase=0.0092,
        qber_phase_ci=(0.0090, 0.0094),
        sifted_fraction=0.5,
        sifted_fraction_ci=(0.49, 0.51),
        secret_fraction=0.44,
        y0=2.5e-7,
        y1_lower=0.0061,
        e1_upper=0.012,
        eve_bound="decoy",
        classes=(
            ClassReport(
                name="signal",
                mean_photons=0.45,
                probability=0.8,
                frames_sent=800_000.0,
                detections=2157.0,
                gain=0.00269625,
                gain_ci=(0.0026, 0.0028),
                qber=0.0105,
                qber_ci=(0.007, 0.015),
            ),
        ),
        wall_time_s=0.25,
        frames_per_second=4e6,
        config={"protocol": "bb84"},
    )
    values.update(overrides)
    return RunReport(**values)


@pytest.fixture
def sample_report() -> RunReport:
    return make_report()


@pytest.fixture
def session_factory(tmp_path) -> sessionmaker:
    """Session factory on a fresh SQLite file per test."""
    return make_session_factory(f"sqlite:///{tmp_path / 'reports.db'}")


@pytest.fixture
def sql_repository(session_factory: sessionmaker) -> SqlReportRepository:
    return SqlReportRepository(session_factory, "test-db")


@pytest.fixture
def client(sql_repository: SqlReportRepository) -> Generator[TestClient, None, None]:
    """Create FastAPI test client with dependency overrides."""

    app.dependency_overrides[get_report_repository] = lambda: sql_repository

    client = TestClient(app)

    yield client

    # Cleanup
    app.dependency_overrides.clear()


@pytest.fixture
def fixed_datetime():
    """Fixed datetime for consistent testing."""
    return datetime(2024, 1, 15, 10, 30, 0, tzinfo=timezone.utc)
