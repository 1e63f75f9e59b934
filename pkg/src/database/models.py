"""
SQLAlchemy database models for the run catalogue.
"""

from datetime import datetime

from sqlalchemy import (
    Boolean,
    Column,
    DateTime,
    Float,
    ForeignKey,
    Index,
    Integer,
    String,
    Text,
    UniqueConstraint,
)
from sqlalchemy.orm import relationship

from .base import Base


class DBRun(Base):
    """Database model for one simulation run."""

    __tablename__ = "runs"

    id = Column(String, primary_key=True)
    name = Column(String, nullable=False)
    output_dir = Column(String, nullable=False)
    created_at = Column(DateTime, nullable=False, default=datetime.now)
    finished_at = Column(DateTime)
    status = Column(String, nullable=False, default="running")  # running/passed/failed/aborted
    exit_code = Column(Integer)
    t_final = Column(Float)
    steps = Column(Integer)
    p = Column(Float, nullable=False)
    kappa = Column(Float, nullable=False)
    epsilon = Column(Float, nullable=False)
    pair = Column(String, nullable=False)
    config_json = Column(Text, nullable=False)
    message = Column(Text)

    # Relationships
    reports = relationship(
        "DBReport", back_populates="run", cascade="all, delete-orphan", order_by="DBReport.t"
    )
    verdicts = relationship(
        "DBVerdict", back_populates="run", cascade="all, delete-orphan"
    )


class DBReport(Base):
    """Database model for one energy report of a run."""

    __tablename__ = "reports"
    __table_args__ = (
        UniqueConstraint("run_id", "report_index"),
        Index("idx_reports_run", "run_id", "t"),
    )

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey("runs.id"), nullable=False)
    report_index = Column(Integer, nullable=False)
    t = Column(Float, nullable=False)
    mass_n = Column(Float, nullable=False)
    min_n = Column(Float, nullable=False)
    max_c = Column(Float, nullable=False)
    decay_functional = Column(Float, nullable=False)
    e_kin = Column(Float, nullable=False)
    d_plap_power = Column(Float, nullable=False)
    floored_cells = Column(Integer, nullable=False, default=0)

    # Relationships
    run = relationship("DBRun", back_populates="reports")


class DBVerdict(Base):
    """Database model for one auditor verdict of a run."""

    __tablename__ = "verdicts"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey("runs.id"), nullable=False)
    name = Column(String, nullable=False)
    passed = Column(Boolean, nullable=False)
    detail = Column(Text, nullable=False, default="")
    measured = Column(Float)

    # Relationships
    run = relationship("DBRun", back_populates="verdicts")
