import csv
from dataclasses import replace
from pathlib import Path

import pytest

from config.constants import AuditConstants, OutputConstants
from config.enums import ExitCode
from config.run_config import AuditSpec, FlowSpec, ModelSpec, OutputSpec, RunConfig, TimeSpec, load_run_config
from database import init_database
from repositories import RunRepository
from services import simulation_manager
from services.simulation_manager import SimulationManager, sweep_epsilon, verify
from utils.exceptions import FastDiffusionUnsupportedError, StiffnessAbortError, StructuralConditionError

from conftest import small_config

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"

# a short horizon cannot tell linear from super-linear growth at the default factor
LENIENT = AuditSpec(growth_factor=10.0)


def _rows(config) -> list[dict[str, str]]:
    with (config.output_path() / OutputConstants.DIAGNOSTICS_FILE).open(newline="") as f:
        return list(csv.DictReader(f))


def _names(report) -> list[str]:
    return [v.name for v in report.verdicts]


def _shipped(name: str, tmp_path, **time) -> RunConfig:
    """A shipped configuration writing into tmp_path, optionally with a different horizon."""
    config = load_run_config(CONFIG_DIR / name)
    config = replace(config, output=replace(config.output, directory=str(tmp_path / config.name), catalogue=False))
    return config.with_time(**time) if time else config


class TestSchedule:
    def test_single_clipped_step(self, tmp_path):
        config = small_config(tmp_path, time=TimeSpec(t_end=1e-5, report_interval=0.005), audit=LENIENT)
        report = SimulationManager(config).run()
        assert report.exit_code == ExitCode.PASS
        assert report.steps == 1
        assert report.t_final == 1e-5
        assert [float(r["t"]) for r in _rows(config)] == [0.0, 1e-5]

    def test_reports_land_on_interval(self, tmp_path):
        config = small_config(tmp_path, audit=LENIENT)
        report = SimulationManager(config).run()
        assert report.exit_code == ExitCode.PASS
        times = [float(r["t"]) for r in _rows(config)]
        assert times == pytest.approx([0.0, 0.005, 0.01, 0.015, 0.02], abs=1e-15)
        assert report.t_final == 0.02
        assert (config.output_path() / OutputConstants.CHECKPOINT_FILE).exists()
        assert (config.output_path() / OutputConstants.RUN_LOG_FILE).exists()

    def test_max_steps_adds_final_report(self, tmp_path):
        config = small_config(tmp_path, time=TimeSpec(t_end=0.02, report_interval=0.005, max_steps=3), audit=LENIENT)
        report = SimulationManager(config).run()
        assert report.steps == 3
        assert report.t_final < 0.005
        rows = _rows(config)
        assert len(rows) == 2
        assert float(rows[-1]["t"]) == report.t_final

    def test_snapshots_and_visual_output(self, tmp_path):
        config = small_config(
            tmp_path,
            time=TimeSpec(t_end=0.02, report_interval=0.005, snapshot_interval=0.01),
            output=OutputSpec(directory=str(tmp_path / "snap"), vtk=True, plot=True, catalogue=False),
            audit=LENIENT,
        )
        SimulationManager(config).run()
        out = config.output_path()
        for k in range(3):
            assert (out / OutputConstants.SNAPSHOT_DIR / f"n_{k:05d}.bin").exists()
            assert (out / OutputConstants.SNAPSHOT_DIR / f"state_{k:05d}.vtk").exists()
            assert (out / OutputConstants.PLOT_DIR / f"state_{k:05d}.png").exists()
        assert not (out / OutputConstants.SNAPSHOT_DIR / "n_00003.bin").exists()


class TestReproducibility:
    def test_repeat_runs_are_identical(self, tmp_path):
        first = small_config(tmp_path, name="first")
        second = small_config(tmp_path, name="second")
        SimulationManager(first).run()
        SimulationManager(second).run()
        path = OutputConstants.DIAGNOSTICS_FILE
        assert (first.output_path() / path).read_bytes() == (second.output_path() / path).read_bytes()

    def test_resume_matches_uninterrupted_run(self, tmp_path):
        full = small_config(tmp_path, name="full")
        split = small_config(tmp_path, name="split")
        whole = SimulationManager(full).run()

        half = SimulationManager(split.with_time(t_end=0.01)).run()
        assert half.t_final == 0.01
        resumed = SimulationManager(split).run(resume=True)
        assert resumed.steps == whole.steps
        assert resumed.t_final == whole.t_final

        expected, actual = _rows(full), _rows(split)
        assert len(actual) == len(expected)
        for row_a, row_e in zip(actual, expected):
            for column in OutputConstants.DIAGNOSTICS_COLUMNS:
                assert float(row_a[column]) == pytest.approx(float(row_e[column]), rel=1e-12, abs=1e-300)

    def test_resume_without_checkpoint_starts_fresh(self, tmp_path):
        config = small_config(tmp_path, time=TimeSpec(t_end=0.005, report_interval=0.005), audit=LENIENT)
        report = SimulationManager(config).run(resume=True)
        assert report.exit_code == ExitCode.PASS
        assert len(_rows(config)) == 2


class TestExitCodes:
    def test_flow_disabled_run_checks_decay(self, tmp_path):
        config = small_config(
            tmp_path,
            model=ModelSpec(p=2.2, kappa=0.0, epsilon=0.05, phi_gradient=(0.0, 0.0)),
            flow=FlowSpec(enabled=False),
            audit=LENIENT,
        )
        report = SimulationManager(config).run()
        verdicts = {v.name: v for v in report.verdicts}
        assert verdicts["energy_decay"].passed
        assert verdicts["mass_and_max"].passed
        assert all(float(r["e_kin"]) == 0.0 for r in _rows(config))
        assert report.exit_code == ExitCode.PASS

    def test_flow_enabled_run_skips_decay(self, tmp_path):
        report = SimulationManager(small_config(tmp_path, audit=LENIENT)).run()
        assert "energy_decay" not in _names(report)
        assert "plap_inequality" in _names(report)
        assert any(name.startswith("linear_growth[") for name in _names(report))

    def test_failed_check_exits_with_invariant_code(self, tmp_path):
        strict = AuditSpec(growth_window=1.0, growth_factor=1.0)
        report = SimulationManager(small_config(tmp_path, audit=strict)).run()
        assert report.exit_code == ExitCode.INVARIANT_VIOLATION
        assert report.status == "failed"
        assert not report.passed

    def test_numerical_failure_aborts(self, tmp_path, monkeypatch):
        def stiff(bounds, cfl_safety):
            raise StiffnessAbortError(1e-16, "diffusion_n")

        monkeypatch.setattr(simulation_manager, "select_dt", stiff)
        config = small_config(tmp_path)
        report = SimulationManager(config).run()
        assert report.exit_code == ExitCode.BLOW_UP
        assert report.status == "aborted"
        assert "diffusion_n" in report.message
        assert report.verdicts == ()
        assert len(_rows(config)) == 1

    def test_fast_diffusion_is_rejected_before_stepping(self, tmp_path):
        config = small_config(tmp_path, model=ModelSpec(p=1.8, phi_gradient=(0.0, -0.1)))
        with pytest.raises(FastDiffusionUnsupportedError):
            SimulationManager(config).run()
        assert not (config.output_path() / OutputConstants.DIAGNOSTICS_FILE).exists()

    def test_structural_gate(self, tmp_path):
        model = ModelSpec(
            pair="affine-table",
            pair_coefficients={"chi0": -1.0, "chi1": 0.0, "f1": 1.0, "f2": 0.0},
            phi_gradient=(0.0, -0.1),
        )
        with pytest.raises(StructuralConditionError):
            SimulationManager(small_config(tmp_path, model=model)).run()


class TestVerifyMode:
    def test_report_after_every_step(self, tmp_path):
        config = small_config(
            tmp_path, time=TimeSpec(t_end=1.0, report_interval=0.005, snapshot_interval=0.01)
        )
        report = verify(config)
        assert report.exit_code == ExitCode.PASS
        assert report.steps == AuditConstants.VERIFY_HORIZON_STEPS
        assert len(_rows(config)) == AuditConstants.VERIFY_HORIZON_STEPS + 1
        assert not any(name.startswith("linear_growth") for name in _names(report))
        assert not (config.output_path() / OutputConstants.SNAPSHOT_DIR).exists()


class TestCatalogue:
    def test_run_is_recorded(self, tmp_path):
        config = small_config(
            tmp_path, output=OutputSpec(directory=str(tmp_path / "cat"), catalogue=True), audit=LENIENT
        )
        report = SimulationManager(config).run()
        runs = RunRepository(init_database(str(tmp_path / OutputConstants.CATALOGUE_FILE)))
        run = runs.get(report.run_id)
        assert run.status == "passed"
        assert run.steps == report.steps
        assert len(run.reports) == 5
        assert {v.name for v in run.verdicts} == set(_names(report))

    def test_sweep_members_share_catalogue(self, tmp_path):
        config = small_config(
            tmp_path,
            time=TimeSpec(t_end=0.005, report_interval=0.005),
            output=OutputSpec(directory=str(tmp_path / "base"), catalogue=True),
            audit=LENIENT,
        )
        reports = sweep_epsilon(config, [0.1, 0.01])
        assert [Path(r.output_dir).name for r in reports] == ["base-eps0.1", "base-eps0.01"]
        runs = RunRepository(init_database(str(tmp_path / OutputConstants.CATALOGUE_FILE)))
        members = runs.get_many([r.run_id for r in reports])
        assert [m.epsilon for m in members] == [0.1, 0.01]


@pytest.mark.slow
@pytest.mark.parametrize("name", ["default_2d.toml", "smoke_3d.toml", "no_flow_2d.toml"])
def test_shipped_configs_verify(tmp_path, name):
    report = verify(_shipped(name, tmp_path))
    assert report.exit_code == ExitCode.PASS


@pytest.mark.slow
class TestShippedRuns:
    def test_default_2d_conserves_mass_and_consumes_oxygen(self, tmp_path):
        config = _shipped("default_2d.toml", tmp_path)
        report = SimulationManager(config).run()
        assert report.exit_code == ExitCode.PASS, report.message
        assert report.t_final == config.time.t_end

        rows = _rows(config)
        mass = [float(r["mass_n"]) for r in rows]
        assert max(abs(m - mass[0]) for m in mass) <= 1e-12 * mass[0]
        max_c = [float(r["max_c"]) for r in rows]
        assert all(c <= max_c[0] * (1.0 + 1e-12) for c in max_c)
        assert all(later < earlier for earlier, later in zip(max_c, max_c[1:]))

    def test_default_2d_cumulative_integrals_grow_linearly(self, tmp_path):
        report = SimulationManager(_shipped("default_2d.toml", tmp_path, t_end=2.0)).run()
        assert report.exit_code == ExitCode.PASS, report.message
        growth = {v.name: v for v in report.verdicts if v.name.startswith("linear_growth[")}
        assert {name[len("linear_growth["):-1] for name in growth} == set(OutputConstants.LEDGER_QUANTITIES)
        assert all(v.passed for v in growth.values())

    def test_no_flow_entropy_decays_over_500_steps(self, tmp_path):
        report = SimulationManager(_shipped("no_flow_2d.toml", tmp_path, max_steps=500)).run()
        assert report.steps == 500
        verdicts = {v.name: v for v in report.verdicts}
        assert verdicts["energy_decay"].passed
        assert verdicts["mass_and_max"].passed

    def test_no_flow_full_run(self, tmp_path):
        report = SimulationManager(_shipped("no_flow_2d.toml", tmp_path)).run()
        assert report.passed, report.verdicts

    def test_smoke_3d(self, tmp_path):
        report = SimulationManager(_shipped("smoke_3d.toml", tmp_path)).run()
        assert report.passed, report.message
        assert report.t_final == 0.25
        names = {v.name for v in report.verdicts}
        assert {"mass_and_max", "plap_inequality"} <= names
