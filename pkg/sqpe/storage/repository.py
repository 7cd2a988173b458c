from __future__ import annotations

import logging
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Generator, List

from sqlalchemy import create_engine, select
from sqlalchemy.orm import Session, sessionmaker

from schema import GseReport

from .models import Base, ChangepointPassRecord, RunLogRecord, SearchIterationRecord, SqpeRun

logger = logging.getLogger(__name__)


class SqpeRunRepository:
    """Manages persistence of runs, their reports, solver traces and logs."""

    def __init__(self, database_url: str) -> None:
        self._engine = create_engine(database_url, future=True)
        self._session_factory = sessionmaker(self._engine, expire_on_commit=False)

    def create_schema(self) -> None:
        Base.metadata.create_all(self._engine)

    @contextmanager
    def session(self) -> Generator[Session, None, None]:
        session = self._session_factory()
        try:
            yield session
            session.commit()
        except Exception:  # pragma: no cover - passthrough for CLI
            session.rollback()
            raise
        finally:
            session.close()

    def start_run(
        self,
        *,
        command: str,
        hamiltonian_path: str,
        seed: int,
        config_hash: str,
        output_dir: str | None,
        config: dict,
    ) -> SqpeRun:
        with self.session() as session:
            run = SqpeRun(
                command=command,
                hamiltonian_path=hamiltonian_path,
                seed=seed,
                config_hash=config_hash,
                output_dir=output_dir,
                config=config,
            )
            session.add(run)
            session.flush()
            session.refresh(run)
            return run

    def complete_run(self, run_id: int, status: str = "completed") -> None:
        with self.session() as session:
            run = session.get(SqpeRun, run_id)
            if not run:
                logger.warning("Run %s not found when attempting to complete.", run_id)
                return
            run.status = status
            run.completed_at = datetime.now(timezone.utc)
            session.add(run)

    def save_report(self, run_id: int, report: GseReport) -> None:
        with self.session() as session:
            run = session.get(SqpeRun, run_id)
            if not run:
                logger.warning("Run %s not found when saving its report.", run_id)
                return
            run.gse_estimate = report.gse_estimate
            run.beta0_reference = report.beta0_reference
            run.delta0 = report.delta0
            run.report = report.model_dump(mode="json")
            for row in report.search_trace:
                session.add(SearchIterationRecord(run_id=run_id, **row.model_dump()))
            for row in report.changepoint_trace:
                session.add(ChangepointPassRecord(run_id=run_id, **row.model_dump()))
            session.add(run)

    def persist_log(self, run_id: int, level: str, message: str) -> None:
        with self.session() as session:
            session.add(RunLogRecord(run_id=run_id, level=level, message=message))

    def list_runs(self, limit: int = 25) -> List[Dict[str, Any]]:
        with self.session() as session:
            stmt = select(SqpeRun).order_by(SqpeRun.created_at.desc(), SqpeRun.id.desc()).limit(limit)
            runs = session.scalars(stmt).all()
            return [self._serialize_run(run) for run in runs]

    def fetch_run_details(self, run_id: int) -> Dict[str, Any] | None:
        with self.session() as session:
            run = session.scalars(select(SqpeRun).where(SqpeRun.id == run_id)).first()
            if not run:
                return None
            return self._serialize_run(run, include_details=True)

    def _serialize_run(self, run: SqpeRun, include_details: bool = False) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "id": run.id,
            "command": run.command,
            "hamiltonian_path": run.hamiltonian_path,
            "seed": run.seed,
            "config_hash": run.config_hash,
            "created_at": run.created_at.isoformat() if run.created_at else None,
            "completed_at": run.completed_at.isoformat() if run.completed_at else None,
            "status": run.status,
            "output_dir": run.output_dir,
            "gse_estimate": run.gse_estimate,
            "beta0_reference": run.beta0_reference,
            "delta0": run.delta0,
        }
        if include_details:
            payload["config"] = run.config or {}
            payload["report"] = run.report or {}
            payload["search_iterations"] = [
                self._serialize_iteration(row) for row in sorted(run.search_iterations, key=lambda row: row.iteration)
            ]
            payload["changepoint_passes"] = [
                self._serialize_pass(row) for row in sorted(run.changepoint_passes, key=lambda row: row.pass_index)
            ]
            payload["logs"] = [self._serialize_log(log) for log in run.logs]
        return payload

    @staticmethod
    def _serialize_iteration(row: SearchIterationRecord) -> Dict[str, Any]:
        return {
            "iteration": row.iteration,
            "x": row.x,
            "estimate": row.estimate,
            "std_error": row.std_error,
            "flag": row.flag,
            "x0": row.x0,
            "x1": row.x1,
        }

    @staticmethod
    def _serialize_pass(row: ChangepointPassRecord) -> Dict[str, Any]:
        return {
            "pass_index": row.pass_index,
            "split_index": row.split_index,
            "deviation_drop": row.deviation_drop,
            "significant": row.significant,
        }

    @staticmethod
    def _serialize_log(log: RunLogRecord) -> Dict[str, Any]:
        return {
            "level": log.level,
            "message": log.message,
            "created_at": log.created_at.isoformat() if log.created_at else None,
        }


class DatabaseLogHandler(logging.Handler):
    """Logging handler that forwards log records into the database."""

    def __init__(self, repository: SqpeRunRepository, run_id: int) -> None:
        super().__init__()
        self._repository = repository
        self._run_id = run_id

    def emit(self, record: logging.LogRecord) -> None:  # pragma: no cover - side-effect only
        if record.name.startswith("sqlalchemy"):
            return
        try:
            msg = self.format(record)
            self._repository.persist_log(self._run_id, record.levelname, msg)
        except Exception:  # Never raise inside logging handler
            self.handleError(record)
