"""
Database module for stored verification runs
"""
import datetime
import logging

import pandas as pd
from sqlalchemy import JSON, Column, DateTime, Float, Integer, String, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from settings import DATABASE_URL

logger = logging.getLogger(__name__)

Base = declarative_base()

# Engine and session factory; configure() rebinds both
engine = None
Session = sessionmaker()


class VerificationRun(Base):
    """
    Model for storing the outcome of one verify (or sharpness) run
    """
    __tablename__ = "verification_run"

    id = Column(Integer, primary_key=True)

    # Run info
    command = Column(String(50))
    suite_path = Column(String(500))
    seed = Column(Integer)

    # Timestamp
    created_at = Column(DateTime, default=lambda: datetime.datetime.now(datetime.timezone.utc))

    # Summary counts
    total = Column(Integer)
    passed = Column(Integer)
    failed = Column(Integer)
    errored = Column(Integer)
    worst_ratio = Column(Float)
    max_violation = Column(Float)

    # Full payloads (JSON for flexibility)
    config = Column(JSON)
    summary = Column(JSON)
    reports = Column(JSON)


def configure(url=None):
    """
    Bind the module to a database URL (default: OSTROWSKI_DATABASE_URL) and
    create the tables.
    """
    global engine
    engine = create_engine(url or DATABASE_URL)
    Session.configure(bind=engine)
    Base.metadata.create_all(engine)
    logger.debug("run history at %s", engine.url)
    return engine


def _session():
    if engine is None:
        configure()
    return Session()


def save_run(command, summary, config, reports, suite_path=None):
    """
    Save a verification run to the database

    Parameters:
    - command: CLI subcommand that produced the run
    - summary: SuiteSummary dict
    - config: RunConfig header dict
    - reports: List of report dicts
    - suite_path: Suite file, if any

    Returns:
    - id: ID of the saved record
    """
    session = _session()
    try:
        run = VerificationRun(
            command=command,
            suite_path=str(suite_path) if suite_path is not None else None,
            seed=config.get("seed"),
            total=summary["total"],
            passed=summary["passed"],
            failed=summary["failed"],
            errored=summary.get("errored", 0),
            worst_ratio=summary["worst_ratio"],
            max_violation=summary["max_violation"],
            config=config,
            summary=summary,
            reports=reports,
        )
        session.add(run)
        session.commit()
        return run.id
    finally:
        session.close()


def get_all_runs():
    """
    Get all stored runs, oldest first

    Returns:
    - DataFrame with one row per run (payload columns omitted)
    """
    session = _session()
    try:
        runs = session.query(VerificationRun).order_by(VerificationRun.id).all()
        results = [{
            "id": run.id,
            "command": run.command,
            "suite_path": run.suite_path,
            "seed": run.seed,
            "created_at": run.created_at,
            "total": run.total,
            "passed": run.passed,
            "failed": run.failed,
            "errored": run.errored,
            "worst_ratio": run.worst_ratio,
            "max_violation": run.max_violation,
        } for run in runs]
    finally:
        session.close()
    return pd.DataFrame(results)


def get_run_by_id(record_id):
    """
    Get a stored run by ID

    Returns:
    - Dictionary with the run, payloads included, or None if not found
    """
    session = _session()
    try:
        run = session.get(VerificationRun, record_id)
        if run is None:
            return None
        return {
            "id": run.id,
            "command": run.command,
            "suite_path": run.suite_path,
            "seed": run.seed,
            "created_at": run.created_at,
            "total": run.total,
            "passed": run.passed,
            "failed": run.failed,
            "errored": run.errored,
            "worst_ratio": run.worst_ratio,
            "max_violation": run.max_violation,
            "config": run.config,
            "summary": run.summary,
            "reports": run.reports,
        }
    finally:
        session.close()
