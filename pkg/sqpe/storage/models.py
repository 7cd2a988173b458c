from __future__ import annotations

from datetime import datetime

from sqlalchemy import Boolean, DateTime, Float, ForeignKey, Integer, JSON, String, Text, func
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    """Base declarative class for SQLAlchemy models."""


class SqpeRun(Base):
    __tablename__ = "sqpe_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), server_default=func.now())
    completed_at: Mapped[datetime | None] = mapped_column(DateTime(timezone=True), nullable=True)
    command: Mapped[str] = mapped_column(String(32))
    hamiltonian_path: Mapped[str] = mapped_column(String(1024))
    seed: Mapped[int] = mapped_column(Integer)
    config_hash: Mapped[str] = mapped_column(String(64), index=True)
    output_dir: Mapped[str | None] = mapped_column(String(1024), nullable=True)
    status: Mapped[str] = mapped_column(String(32), default="running")
    config: Mapped[dict] = mapped_column(JSON, default=dict)

    gse_estimate: Mapped[float | None] = mapped_column(Float, nullable=True)
    beta0_reference: Mapped[float | None] = mapped_column(Float, nullable=True)
    delta0: Mapped[float | None] = mapped_column(Float, nullable=True)
    report: Mapped[dict | None] = mapped_column(JSON, nullable=True)

    search_iterations: Mapped[list[SearchIterationRecord]] = relationship(
        back_populates="run", cascade="all, delete-orphan", lazy="selectin"
    )
    changepoint_passes: Mapped[list[ChangepointPassRecord]] = relationship(
        back_populates="run", cascade="all, delete-orphan", lazy="selectin"
    )
    logs: Mapped[list[RunLogRecord]] = relationship(back_populates="run", cascade="all, delete-orphan", lazy="selectin")


class SearchIterationRecord(Base):
    __tablename__ = "search_iterations"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("sqpe_runs.id", ondelete="CASCADE"), index=True)
    iteration: Mapped[int] = mapped_column(Integer)
    x: Mapped[float] = mapped_column(Float)
    estimate: Mapped[float] = mapped_column(Float)
    std_error: Mapped[float] = mapped_column(Float)
    flag: Mapped[int] = mapped_column(Integer)
    x0: Mapped[float] = mapped_column(Float)
    x1: Mapped[float] = mapped_column(Float)

    run: Mapped[SqpeRun] = relationship(back_populates="search_iterations")


class ChangepointPassRecord(Base):
    __tablename__ = "changepoint_passes"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("sqpe_runs.id", ondelete="CASCADE"), index=True)
    pass_index: Mapped[int] = mapped_column(Integer)
    split_index: Mapped[int] = mapped_column(Integer)
    deviation_drop: Mapped[float] = mapped_column(Float)
    significant: Mapped[bool] = mapped_column(Boolean, default=False)

    run: Mapped[SqpeRun] = relationship(back_populates="changepoint_passes")


class RunLogRecord(Base):
    __tablename__ = "run_logs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    run_id: Mapped[int] = mapped_column(ForeignKey("sqpe_runs.id", ondelete="CASCADE"), index=True)
    level: Mapped[str] = mapped_column(String(32))
    message: Mapped[str] = mapped_column(Text)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), server_default=func.now())

    run: Mapped[SqpeRun] = relationship(back_populates="logs")
