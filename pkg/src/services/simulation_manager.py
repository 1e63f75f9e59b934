"""
Simulation manager - runs the time loop, schedules reports, snapshots and
checkpoints, and turns the auditor checks into an exit report.
"""

import uuid
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from sqlalchemy.orm import Session
from tqdm import tqdm

from config.constants import AuditConstants, OutputConstants, SolverConstants
from config.enums import DiffusionRegime, ExitCode
from config.run_config import RunConfig
from database import init_database
from logger import add_run_log, logger
from models.params import ModelParams
from models.reports import CheckVerdict, CumulativeLedger, EnergyReport, ExitReport
from models.state import State
from rendering.field_plotter import plot_state
from repositories import (
    Checkpoint,
    CheckpointRepository,
    DiagnosticsRepository,
    RunRepository,
    SnapshotRepository,
)
from services.dt_controller import dt_constraints, select_dt
from services.estimate_auditor import (
    check_lemma31_decay,
    check_linear_growth,
    check_mass_and_max,
    energy_report,
    plap_inequality_holds,
)
from services.flow_solver import FlowSolver
from services.grid_operators import cell_divergence
from services.regularization import require_structural_conditions
from services.scenarios import build_initial_state
from services.transport_solver import TransportSolver, fill_state_ghosts
from services.weak_form import SpaceTimeBump, WeakFormAccumulator, WeakResidual
from utils.exceptions import (
    BlowUpError,
    DiagnosticOverflowError,
    FastDiffusionUnsupportedError,
    SolverConvergenceError,
    StiffnessAbortError,
)

NUMERICAL_FAILURES = (
    BlowUpError,
    StiffnessAbortError,
    SolverConvergenceError,
    DiagnosticOverflowError,
)


def catalogue_path(config: RunConfig) -> Path:
    """The run catalogue lives next to the run directories."""
    return config.output_path().parent / OutputConstants.CATALOGUE_FILE


class SimulationManager:
    """
    Orchestrates one run.

    Reports are written at t = 0, at every multiple of report_interval and at
    t_end; the step size is clipped so the clock lands on those times exactly,
    which makes a run resumed from a checkpoint repeat the uninterrupted one.
    In verify mode a report follows every step, snapshots are skipped and the
    growth check (which needs a long horizon) is not run.
    """

    def __init__(
        self,
        config: RunConfig,
        session: Optional[Session] = None,
        verify_only: bool = False,
    ):
        self.config = config
        self.verify_only = verify_only
        self.output_dir = config.output_path()
        self.run_id = str(uuid.uuid4())

        self.diagnostics = DiagnosticsRepository(self.output_dir / OutputConstants.DIAGNOSTICS_FILE)
        self.checkpoints = CheckpointRepository(self.output_dir / OutputConstants.CHECKPOINT_FILE)
        self.snapshots = SnapshotRepository(self.output_dir / OutputConstants.SNAPSHOT_DIR)
        self.runs: Optional[RunRepository] = None
        if session is None and config.output.catalogue:
            session = init_database(str(catalogue_path(config)))
        if session is not None:
            self.runs = RunRepository(session)

        self.ledger = CumulativeLedger()
        self.history: list[EnergyReport] = []
        self.report_count = 0
        self.snapshot_count = 0
        self.last_dt = 0.0
        self.weak_result: Optional[WeakResidual] = None
        self._weak: Optional[WeakFormAccumulator] = None

    def _setup(self) -> tuple[State, ModelParams, TransportSolver]:
        """
        Realize the initial data and run the gates that precede any stepping.

        Raises:
            StructuralConditionError: If the sensitivity pair fails its conditions
            FastDiffusionUnsupportedError: If p < 2
        """
        state, params = build_initial_state(self.config)
        if params.regime is DiffusionRegime.FAST_DIFFUSION:
            raise FastDiffusionUnsupportedError(f"p = {params.p} < 2 is not supported")
        if params.regime is DiffusionRegime.SLOW:
            logger.warning(f"p = {params.p} lies outside the existence regime p > 32/15")
        require_structural_conditions(params.sensitivity, params.s0)

        flow = None
        if self.config.flow.enabled:
            flow = FlowSolver(
                state.grid,
                poisson_method=self.config.flow.poisson_method,
                yosida_method=self.config.flow.yosida_method,
                poisson_tol=self.config.flow.poisson_tol,
                yosida_tol=self.config.flow.yosida_tol,
            )
        return state, params, TransportSolver(flow)

    def _next_report_time(self) -> float:
        return min(self.report_count * self.config.time.report_interval, self.config.time.t_end)

    def _next_snapshot_time(self) -> float:
        interval = self.config.time.snapshot_interval
        if interval <= 0.0 or self.verify_only:
            return np.inf
        return self.snapshot_count * interval

    @staticmethod
    def _reached(t: float, target: float) -> bool:
        return t >= target - SolverConstants.TIME_EPS * max(1.0, abs(target))

    def _report(self, state: State, params: ModelParams) -> EnergyReport:
        fill_state_ghosts(state)
        report = energy_report(state, params, self.config.audit.r)
        self.ledger.record(report)
        self.history.append(report)

        div_u = cell_divergence(state.u).interior if self.config.flow.enabled else np.zeros(1)
        row = report.to_dict()
        row.update({f"cum_{q}": v for q, v in self.ledger.snapshot().items()})
        row.update(
            dt=self.last_dt,
            div_u_max=float(np.max(np.abs(div_u))),
            coupled_functional=report.coupled_functional,
        )
        self.diagnostics.append(row)
        if self.runs is not None:
            self.runs.add_report(self.run_id, self.report_count, report)
        self.report_count += 1

        logger.info(
            f"t={state.t:.6g} step={state.step} mass={report.mass_n:.12g} "
            f"max_c={report.max_c:.6g} E={report.decay_functional:.6g} e_kin={report.e_kin:.3e}"
        )
        if report.floored_cells:
            logger.debug(f"{report.floored_cells} floored cells in report {self.report_count - 1}")
        self.checkpoints.save(
            Checkpoint(
                state=state,
                ledger=self.ledger,
                history=self.history,
                report_count=self.report_count,
                snapshot_count=self.snapshot_count,
            )
        )
        return report

    def _snapshot(self, state: State) -> None:
        self.snapshots.save(state, self.snapshot_count)
        if self.config.output.vtk:
            self.snapshots.save_vtk(state, self.snapshot_count)
        if self.config.output.plot:
            plot_state(
                state,
                self.output_dir / OutputConstants.PLOT_DIR / f"state_{self.snapshot_count:05d}.png",
            )
        logger.debug(f"Snapshot {self.snapshot_count} written at t={state.t:.6g}")
        self.snapshot_count += 1

    def _resume(self) -> State:
        checkpoint = self.checkpoints.load()
        self.ledger = checkpoint.ledger
        self.history = checkpoint.history
        self.report_count = checkpoint.report_count
        self.snapshot_count = checkpoint.snapshot_count
        kept = self.diagnostics.truncate_after(checkpoint.state.t)
        logger.info(
            f"Resuming from checkpoint at t={checkpoint.state.t:.6g} "
            f"(step {checkpoint.state.step}, {kept} diagnostics rows kept)"
        )
        return fill_state_ghosts(checkpoint.state)

    def _start_weak_residual(self, state: State, params: ModelParams, transport: TransportSolver) -> None:
        grid = state.grid
        lo, hi = AuditConstants.WEAK_SUPPORT
        bump = SpaceTimeBump(
            lower=tuple(lo * e for e in grid.extents),
            upper=tuple(hi * e for e in grid.extents),
            t_cut=AuditConstants.WEAK_T_CUT * (self.config.time.t_end - state.t),
        )
        self._weak = WeakFormAccumulator(grid, bump, params, transport.flow)
        self._weak.add(state)

    def _verdicts(self, params: ModelParams) -> list[CheckVerdict]:
        verdicts: list[CheckVerdict] = []
        if len(self.history) < 2:
            logger.warning("Fewer than 2 reports; invariant checks skipped")
            return verdicts
        verdicts.append(check_mass_and_max(self.history, s0=params.s0))
        if all(rep.e_kin == 0.0 for rep in self.history):
            verdicts.append(check_lemma31_decay(self.history))
        bad = [k for k, rep in enumerate(self.history) if not plap_inequality_holds(rep, params.p)]
        verdicts.append(
            CheckVerdict(
                name="plap_inequality",
                passed=not bad,
                detail=f"{len(bad)} reports violate it" if bad else "holds at every report",
                first_violation=bad[0] if bad else None,
            )
        )
        if not self.verify_only:
            growth = check_linear_growth(
                self.ledger,
                window=self.config.audit.growth_window,
                factor=self.config.audit.growth_factor,
            )
            verdicts.extend(growth.values())
        return verdicts

    def run(self, resume: bool = False) -> ExitReport:
        """
        Execute the step loop until t_end (or max_steps).

        Args:
            resume: Continue from the checkpoint in the output directory

        Returns:
            ExitReport with the verdicts of every auditor check

        Raises:
            ConfigError, StructuralConditionError, FastDiffusionUnsupportedError:
                Before any stepping
        """
        handler = add_run_log(self.output_dir)
        try:
            return self._run(resume)
        finally:
            logger.remove(handler)

    def _run(self, resume: bool) -> ExitReport:
        config = self.config
        state, params, transport = self._setup()
        if self.runs is not None:
            self.runs.start(
                self.run_id,
                config.name,
                str(self.output_dir),
                params.p,
                params.kappa,
                params.epsilon,
                config.model.pair,
                config.to_json(),
            )
        logger.info(
            f"Run '{config.name}' ({self.run_id}) on {state.grid.cells} cells: "
            f"p={params.p}, kappa={params.kappa}, eps={params.epsilon}, regime={params.regime.value}"
        )

        if resume and self.checkpoints.exists():
            state = self._resume()
        else:
            self.diagnostics.start()
            if np.isfinite(self._next_snapshot_time()):
                self._snapshot(state)
            self._report(state, params)
        if config.audit.weak_residual:
            self._start_weak_residual(state, params, transport)

        t_end = config.time.t_end
        max_steps = config.time.max_steps
        steps_taken = 0
        status, exit_code, message = "passed", ExitCode.PASS, ""
        progress = tqdm(total=t_end, initial=state.t, desc=config.name, unit="t", leave=False)
        try:
            while not self._reached(state.t, t_end):
                if self.verify_only and steps_taken >= AuditConstants.VERIFY_HORIZON_STEPS:
                    break
                if max_steps is not None and steps_taken >= max_steps:
                    break
                fill_state_ghosts(state)
                dt, limiting = select_dt(dt_constraints(state, params), config.time.cfl_safety)
                boundary = min(self._next_report_time(), self._next_snapshot_time(), t_end)
                landed = self._reached(state.t + dt, boundary)
                if landed:
                    dt = boundary - state.t
                logger.debug(f"step {state.step}: dt={dt:.3e} ({limiting})")

                state = transport.step(state, params, dt)
                if landed:
                    state.t = boundary
                self.last_dt = dt
                steps_taken += 1
                progress.update(dt)

                if self._weak is not None:
                    self._weak.add(state)
                # snapshot first so the checkpoint written by the report counts it
                if self._reached(state.t, self._next_snapshot_time()):
                    self._snapshot(state)
                if self.verify_only or self._reached(state.t, self._next_report_time()):
                    self._report(state, params)
        except NUMERICAL_FAILURES as e:
            logger.error(f"Run aborted at t={state.t:.6g}: {e}")
            status, exit_code, message = "aborted", ExitCode.BLOW_UP, str(e)
        finally:
            progress.close()

        verdicts: list[CheckVerdict] = []
        if exit_code == ExitCode.PASS:
            if self.history[-1].t != state.t:
                self._report(state, params)
            verdicts = self._verdicts(params)
            for verdict in verdicts:
                log = logger.info if verdict.passed else logger.warning
                log(f"{verdict.name}: {'pass' if verdict.passed else 'FAIL'} ({verdict.detail})")
            if not all(v.passed for v in verdicts):
                status, exit_code = "failed", ExitCode.INVARIANT_VIOLATION
            if self._weak is not None:
                self.weak_result = self._weak.residual()
                logger.info(
                    "weak residuals n={:.3e} c={:.3e} u={:.3e}".format(*self.weak_result.as_tuple())
                )

        exit_report = ExitReport(
            run_id=self.run_id,
            status=status,
            exit_code=exit_code,
            t_final=state.t,
            steps=state.step,
            verdicts=tuple(verdicts),
            output_dir=str(self.output_dir),
            message=message,
        )
        if self.runs is not None:
            self.runs.finish(exit_report)
        logger.info(f"Run '{config.name}' finished: {status} (exit {int(exit_code)})")
        return exit_report


def run(config: RunConfig, resume: bool = False) -> ExitReport:
    """Run a configuration to t_end."""
    return SimulationManager(config).run(resume=resume)


def verify(config: RunConfig) -> ExitReport:
    """Short-horizon invariant suite: a report after each of the first steps."""
    return SimulationManager(config, verify_only=True).run()


def sweep_epsilon(config: RunConfig, values: Sequence[float]) -> list[ExitReport]:
    """
    Run one member of the epsilon family per value.

    Member directories are siblings of the base directory so they share its
    run catalogue.
    """
    reports = []
    for eps in values:
        member = config.with_epsilon(eps, directory=f"{config.output.directory}-eps{eps:g}")
        logger.info(f"Sweep member eps={eps:g} -> {member.output.directory}")
        reports.append(SimulationManager(member).run())
    return reports
