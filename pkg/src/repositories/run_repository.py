"""
Repository for the run catalogue.
"""

from datetime import datetime
from typing import Optional, Sequence

from sqlalchemy.orm import Session

from database.models import DBReport, DBRun, DBVerdict
from models.reports import CheckVerdict, EnergyReport, ExitReport


class RunRepository:
    """Repository for managing runs, their reports and verdicts."""

    def __init__(self, session: Session):
        """Initialize repository with database session."""
        self.session = session

    def get(self, run_id: str) -> Optional[DBRun]:
        """Get a run by ID."""
        return self.session.query(DBRun).filter_by(id=run_id).first()

    def get_all(self) -> list[DBRun]:
        """Get all runs, oldest first."""
        return self.session.query(DBRun).order_by(DBRun.created_at).all()

    def get_many(self, run_ids: Sequence[str]) -> list[DBRun]:
        """Get the given runs ordered by decreasing epsilon."""
        return (
            self.session.query(DBRun)
            .filter(DBRun.id.in_(list(run_ids)))
            .order_by(DBRun.epsilon.desc())
            .all()
        )

    def start(
        self,
        run_id: str,
        name: str,
        output_dir: str,
        p: float,
        kappa: float,
        epsilon: float,
        pair: str,
        config_json: str,
    ) -> DBRun:
        """Register a new run in the running state."""
        run = DBRun(
            id=run_id,
            name=name,
            output_dir=output_dir,
            p=p,
            kappa=kappa,
            epsilon=epsilon,
            pair=pair,
            config_json=config_json,
        )
        self.session.add(run)
        self.session.commit()
        return run

    def add_report(self, run_id: str, index: int, report: EnergyReport) -> None:
        """Add one energy report to a run."""
        self.session.add(
            DBReport(
                run_id=run_id,
                report_index=index,
                t=report.t,
                mass_n=report.mass_n,
                min_n=report.min_n,
                max_c=report.max_c,
                decay_functional=report.decay_functional,
                e_kin=report.e_kin,
                d_plap_power=report.d_plap_power,
                floored_cells=report.floored_cells,
            )
        )
        self.session.commit()

    def finish(self, exit_report: ExitReport) -> None:
        """Record the outcome and verdicts of a run."""
        run = self.get(exit_report.run_id)
        if run is None:
            return
        run.status = exit_report.status
        run.exit_code = int(exit_report.exit_code)
        run.t_final = exit_report.t_final
        run.steps = exit_report.steps
        run.message = exit_report.message
        run.finished_at = datetime.now()
        for verdict in exit_report.verdicts:
            self.session.add(self._verdict_row(run.id, verdict))
        self.session.commit()

    @staticmethod
    def _verdict_row(run_id: str, verdict: CheckVerdict) -> DBVerdict:
        return DBVerdict(
            run_id=run_id,
            name=verdict.name,
            passed=verdict.passed,
            detail=verdict.detail,
            measured=verdict.measured,
        )

    def delete(self, run_id: str) -> None:
        """Delete a run by ID."""
        run = self.get(run_id)
        if run:
            self.session.delete(run)
            self.session.commit()
