from sqlalchemy import Column, DateTime, Float, Index, Integer, String, Text
from sqlalchemy.ext.declarative import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()


class RunReportModel(Base):
    """SQLAlchemy model for persisted run reports."""

    __tablename__ = "run_reports"

    id = Column(Integer, primary_key=True, autoincrement=True)
    protocol = Column(String(8), nullable=False)
    mode = Column(String(16), nullable=False)
    distance_km = Column(Float, nullable=False)
    clock_hz = Column(Float, nullable=False)
    mu_signal = Column(Float, nullable=False)
    raw_bps = Column(Float, nullable=False)
    sifted_bps = Column(Float, nullable=False)
    secret_bps = Column(Float, nullable=False)
    qber_time = Column(Float, nullable=True)
    qber_phase = Column(Float, nullable=True)
    visibility = Column(Float, nullable=True)
    y1_lower = Column(Float, nullable=True)
    e1_upper = Column(Float, nullable=True)
    frames = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    payload = Column(Text, nullable=False)
    created_at = Column(DateTime, nullable=False, default=func.now())

    __table_args__ = (
        Index("idx_protocol_distance", "protocol", "distance_km"),
        Index("idx_created_at", "created_at"),
    )
