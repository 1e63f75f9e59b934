"""
CLI rendering of exponent tables, verdicts and sweep summaries.
"""

import csv
import sys
from typing import Sequence

from database.models import DBRun
from models.exponents import BootstrapSchedule, ExponentTable, MRange
from models.reports import ExitReport
from utils.colors import Colors
from utils.helpers import format_float


class CLIRenderer:
    """Handles terminal output of the command-line tools."""

    def __init__(self, width: int = 72):
        self.width = width

    def _header(self, title: str) -> None:
        print("\n" + Colors.heading(f"{' ' + title + ' ':=^{self.width}}"))

    def _rule(self) -> None:
        print("=" * self.width + "\n")

    def draw_m_range(self, m_range: MRange) -> None:
        self._header(f"ADMISSIBLE m  (m0={m_range.m0:g}, p={m_range.p:g})")
        print(f"  lower bound (exclusive)  {format_float(m_range.lower)}")
        print(f"  upper bound (inclusive)  {format_float(m_range.upper)}")
        print(f"  nonempty                 {Colors.verdict(m_range.nonempty)}")
        print(f"  gap identity residual    {Colors.measured(f'{m_range.gap_identity_residual:.3e}')}")
        self._rule()

    def draw_exponent_table(self, table: ExponentTable) -> None:
        """Print every exponent of the table with its validity flags."""
        self._header(f"EXPONENTS  (m0={table.m0:g}, m={table.m:g}, p={table.p:g})")
        rows = (
            ("p'", table.p_prime),
            ("m_*", table.m_star),
            ("beta", table.beta),
            ("alpha", table.alpha),
            ("alpha'", table.alpha_prime),
            ("theta", table.theta51),
            ("young slack", table.young_slack),
        )
        for name, value in rows:
            print(f"  {name:<24} {format_float(value)}")
        print(f"  {'range ok':<24} {Colors.verdict(table.valid.range_ok)}")
        print(f"  {'theta in (0,1)':<24} {Colors.verdict(table.valid.theta_in_unit_interval)}")
        print(f"  {'young ok':<24} {Colors.verdict(table.valid.young_ok)}")
        print(f"  {'max identity residual':<24} {Colors.measured(f'{table.max_identity_residual():.3e}')}")
        self._rule()

    def draw_bootstrap(self, schedule: BootstrapSchedule) -> None:
        self._header(f"BOOTSTRAP  (delta={schedule.delta:g}, p={schedule.p:g})")
        for k, m in enumerate(schedule.m_values):
            marker = "  <- first m_k >= 2" if k == schedule.crossing_index else ""
            print(f"  m_{k:<3} {format_float(m)}{marker}")
        print(f"  delta_1              {format_float(schedule.delta1)}")
        print(f"  limit                {format_float(schedule.limit)}")
        print(f"  closed-form residual {Colors.measured(f'{schedule.closed_form_residual:.3e}')}")
        print(f"  steps admissible     {Colors.verdict(schedule.all_steps_admissible)}")
        self._rule()

    def write_csv(self, rows: Sequence[tuple[str, float]]) -> None:
        """Plain name,value rows on stdout for scripting."""
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(("quantity", "value"))
        for name, value in rows:
            writer.writerow((name, format_float(value)))

    def draw_exit_report(self, report: ExitReport) -> None:
        """Print the verdicts of a run."""
        self._header(f"RUN {report.status.upper()}  (exit {int(report.exit_code)})")
        print(f"  run id     {report.run_id}")
        print(f"  output     {report.output_dir}")
        print(f"  t_final    {report.t_final:.6g} after {report.steps} steps")
        if report.message:
            print(f"  message    {Colors.failed(report.message)}")
        for verdict in report.verdicts:
            measured = "" if verdict.measured is None else f"  [{verdict.measured:.4g}]"
            print(f"  {Colors.verdict(verdict.passed)}  {verdict.name:<32} {verdict.detail}{Colors.measured(measured)}")
        self._rule()

    def draw_sweep(self, runs: Sequence[DBRun]) -> None:
        """One line per member of an epsilon family, read back from the catalogue."""
        self._header("EPSILON SWEEP")
        print(f"  {'epsilon':>10} {'status':>8} {'t_final':>10} {'steps':>7} {'mass':>20} {'E(t_final)':>14}")
        for run in runs:
            last = run.reports[-1] if run.reports else None
            mass = f"{last.mass_n:.14g}" if last else "-"
            energy = f"{last.decay_functional:.6g}" if last else "-"
            status = Colors.passed(f"{run.status:>8}") if run.status == "passed" else Colors.failed(f"{run.status:>8}")
            t_final = f"{run.t_final:.4g}" if run.t_final is not None else "-"
            print(f"  {run.epsilon:>10g} {status} {t_final:>10} {run.steps or 0:>7} {mass:>20} {energy:>14}")
        self._rule()
