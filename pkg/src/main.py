"""
Command-line entry point: run, verify, exponents and sweep-eps.
"""

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from config.enums import ExitCode
from config.run_config import RunConfig, load_run_config
from database import init_database
from logger import logger
from rendering import CLIRenderer
from repositories import RunRepository
from services.exponent_calculator import (
    admissible_m_range,
    bootstrap_schedule,
    lemma32_theta,
    lemma51_exponents,
    lemma53_theta,
    max_integrability_exponent,
)
from services.simulation_manager import SimulationManager, catalogue_path, sweep_epsilon
from utils.exceptions import (
    ConfigError,
    DomainError,
    FastDiffusionUnsupportedError,
    InvalidSensitivityPairError,
    PreconditionError,
    StructuralConditionError,
)

CONFIG_FAILURES = (
    ConfigError,
    StructuralConditionError,
    InvalidSensitivityPairError,
    FastDiffusionUnsupportedError,
    DomainError,
    PreconditionError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemotaxis-ns",
        description="Regularized chemotaxis-Navier-Stokes simulator with p-Laplacian diffusion and estimate auditor.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configuration to t_end")
    run.add_argument("config", help="TOML run configuration")
    run.add_argument("--resume", action="store_true", help="continue from the checkpoint in the output directory")
    run.add_argument("--plot", action="store_true", help="write PNG panels at every snapshot")
    run.add_argument("--vtk", action="store_true", help="write legacy VTK files at every snapshot")

    verify = sub.add_parser("verify", help="short-horizon invariant suite")
    verify.add_argument("config", help="TOML run configuration")

    exponents = sub.add_parser("exponents", help="exponent and bootstrap arithmetic")
    exponents.add_argument("--m0", type=float, default=1.0)
    exponents.add_argument("--p", type=float)
    exponents.add_argument("--m", type=float, help="target exponent for the full table")
    exponents.add_argument("--r", type=float, help="integrability exponent of the space-time bound")
    exponents.add_argument("--delta", type=float, help="bootstrap schedule at p = 32/15 + delta")
    exponents.add_argument("--csv", action="store_true", help="plain CSV output")

    sweep = sub.add_parser("sweep-eps", help="run an epsilon family")
    sweep.add_argument("config", help="TOML run configuration")
    sweep.add_argument("--values", type=float, nargs="+", required=True)
    return parser


def _with_output_flags(config: RunConfig, plot: bool, vtk: bool) -> RunConfig:
    if not (plot or vtk):
        return config
    output = replace(config.output, plot=config.output.plot or plot, vtk=config.output.vtk or vtk)
    return replace(config, output=output)


def cmd_run(args: argparse.Namespace, renderer: CLIRenderer) -> int:
    config = _with_output_flags(load_run_config(args.config), args.plot, args.vtk)
    report = SimulationManager(config).run(resume=args.resume)
    renderer.draw_exit_report(report)
    return int(report.exit_code)


def cmd_verify(args: argparse.Namespace, renderer: CLIRenderer) -> int:
    config = load_run_config(args.config)
    report = SimulationManager(config, verify_only=True).run()
    renderer.draw_exit_report(report)
    return int(report.exit_code)


def cmd_exponents(args: argparse.Namespace, renderer: CLIRenderer) -> int:
    if args.delta is not None:
        schedule = bootstrap_schedule(args.delta)
        if args.csv:
            rows = [(f"m_{k}", m) for k, m in enumerate(schedule.m_values)]
            rows += [("delta1", schedule.delta1), ("limit", schedule.limit)]
            renderer.write_csv(rows)
        else:
            renderer.draw_bootstrap(schedule)
        return int(ExitCode.PASS)

    if args.p is None:
        raise ConfigError("exponents needs --p (with --m0) or --delta")
    m_range = admissible_m_range(args.m0, args.p)
    rows = [("lower", m_range.lower), ("upper", m_range.upper), ("gap", m_range.gap)]
    table = None
    if args.m is not None:
        table = lemma51_exponents(args.m0, args.m, args.p, strict=False)
        rows += [
            ("p_prime", table.p_prime),
            ("m_star", table.m_star),
            ("beta", table.beta),
            ("alpha", table.alpha),
            ("alpha_prime", table.alpha_prime),
            ("theta", table.theta51),
            ("young_slack", table.young_slack),
        ]
    extras = []
    if args.p > 1.5:
        try:
            extras.append(("gradient_theta", lemma32_theta(args.p)))
        except DomainError as e:
            logger.warning(str(e))
    if args.r is not None:
        extras.append(("integrability_theta", lemma53_theta(args.r, args.p)))
        extras.append(("r_max", max_integrability_exponent(args.p)))

    if args.csv:
        renderer.write_csv(rows + extras)
    else:
        renderer.draw_m_range(m_range)
        if table is not None:
            renderer.draw_exponent_table(table)
        for name, value in extras:
            print(f"  {name:<24} {value!r}")
    if table is not None and not table.valid.all_ok:
        return int(ExitCode.INVARIANT_VIOLATION)
    return int(ExitCode.PASS)


def cmd_sweep(args: argparse.Namespace, renderer: CLIRenderer) -> int:
    config = load_run_config(args.config)
    reports = sweep_epsilon(config, args.values)
    if config.output.catalogue:
        session = init_database(str(catalogue_path(config)))
        renderer.draw_sweep(RunRepository(session).get_many([r.run_id for r in reports]))
    else:
        for report in reports:
            renderer.draw_exit_report(report)
    return max(int(r.exit_code) for r in reports)


COMMANDS = {
    "run": cmd_run,
    "verify": cmd_verify,
    "exponents": cmd_exponents,
    "sweep-eps": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    renderer = CLIRenderer()
    try:
        return COMMANDS[args.command](args, renderer)
    except CONFIG_FAILURES as e:
        logger.error(f"{type(e).__name__}: {e}")
        return int(ExitCode.CONFIG_ERROR)


if __name__ == "__main__":
    sys.exit(main())
