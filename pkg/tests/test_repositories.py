import numpy as np
import pytest

from config.enums import ExitCode
from database import init_database
from models.reports import CheckVerdict, CumulativeLedger, ExitReport
from repositories import Checkpoint, CheckpointRepository, DiagnosticsRepository, RunRepository, SnapshotRepository
from repositories.snapshot_repository import END_HEADER
from services.estimate_auditor import energy_report
from services.scenarios import vortex

from conftest import make_state, random_scalar


@pytest.fixture
def state(grid2, rng):
    return make_state(grid2, random_scalar(grid2, rng), random_scalar(grid2, rng), vortex(grid2, 0.3))


class TestDiagnosticsRepository:
    def test_header_and_rows(self, tmp_path):
        repo = DiagnosticsRepository(tmp_path / "out" / "diag.csv", columns=("t", "mass_n", "floored_cells"))
        repo.start()
        repo.append({"t": 0.0, "mass_n": 0.1, "floored_cells": 3, "ignored": 1.0})
        repo.append({"t": 0.5, "mass_n": 1.0 / 3.0, "floored_cells": 0})
        lines = repo.path.read_text().splitlines()
        assert lines[0] == "t,mass_n,floored_cells"
        assert lines[1] == "0.0,0.1,3"
        rows = repo.read()
        assert float(rows[1]["mass_n"]) == 1.0 / 3.0

    def test_append_creates_file(self, tmp_path):
        repo = DiagnosticsRepository(tmp_path / "diag.csv", columns=("t",))
        repo.append({"t": 1.0})
        assert repo.read() == [{"t": "1.0"}]

    def test_truncate_after(self, tmp_path):
        repo = DiagnosticsRepository(tmp_path / "diag.csv", columns=("t", "e_kin"))
        repo.start()
        for k in range(6):
            repo.append({"t": 0.1 * k, "e_kin": float(k)})
        kept = repo.truncate_after(0.25)
        assert kept == 3
        assert [row["e_kin"] for row in repo.read()] == ["0.0", "1.0", "2.0"]

    def test_missing_file_reads_empty(self, tmp_path):
        assert DiagnosticsRepository(tmp_path / "none.csv").read() == []


class TestSnapshotRepository:
    def test_header_and_values(self, tmp_path, state):
        state.t = 0.125
        state.step = 7
        repo = SnapshotRepository(tmp_path / "snapshots")
        paths = repo.save(state, 3)
        assert sorted(p.name for p in paths) == sorted(
            f"{name}_00003.bin" for name in ("n", "c", "u0", "u1", "pressure")
        )
        header, values = SnapshotRepository.load(tmp_path / "snapshots" / "n_00003.bin")
        assert header["field"] == "n"
        assert header["dims"] == "8 8"
        assert header["time"] == "0.125"
        assert header["step"] == "7"
        assert header["dtype"] == "float64-le"
        np.testing.assert_array_equal(values, state.n.interior)

    def test_raw_layout(self, tmp_path, state):
        repo = SnapshotRepository(tmp_path)
        path = [p for p in repo.save(state, 0) if p.name.startswith("c_")][0]
        raw = path.read_bytes()
        marker = (END_HEADER + "\n").encode("ascii")
        body = raw[raw.index(marker) + len(marker):]
        assert len(body) == 8 * state.grid.cell_count
        np.testing.assert_array_equal(np.frombuffer(body, dtype="<f8"), state.c.interior.ravel())

    def test_vtk_file(self, tmp_path, state):
        path = SnapshotRepository(tmp_path).save_vtk(state, 2)
        lines = path.read_text().splitlines()
        assert lines[0] == "# vtk DataFile Version 3.0"
        assert "DIMENSIONS 9 9 2" in lines
        assert "CELL_DATA 64" in lines
        assert lines.count("LOOKUP_TABLE default") == 2
        assert len(lines) == 8 + 2 * (2 + 64) + 1 + 64


class TestCheckpointRepository:
    def test_round_trip(self, tmp_path, state, params):
        state.t = 0.3
        state.step = 12
        report = energy_report(state, params)
        ledger = CumulativeLedger()
        ledger.record(report)
        repo = CheckpointRepository(tmp_path / "checkpoint.npz")
        assert not repo.exists()
        repo.save(Checkpoint(state=state, ledger=ledger, history=[report], report_count=1, snapshot_count=4))
        assert repo.exists()

        loaded = repo.load()
        assert loaded.state.t == 0.3
        assert loaded.state.step == 12
        assert loaded.state.grid == state.grid
        np.testing.assert_array_equal(loaded.state.n.data, state.n.data)
        for a in range(state.grid.dim):
            np.testing.assert_array_equal(loaded.state.u.components[a], state.u.components[a])
        assert loaded.history == [report]
        assert loaded.report_count == 1
        assert loaded.snapshot_count == 4
        assert loaded.ledger.times == ledger.times
        assert loaded.ledger.last_values == ledger.last_values
        assert not (tmp_path / "checkpoint.tmp.npz").exists()


class TestRunRepository:
    @pytest.fixture
    def repo(self, tmp_path):
        return RunRepository(init_database(str(tmp_path / "db" / "runs.db")))

    def _start(self, repo, run_id, eps):
        return repo.start(run_id, "case", "/tmp/case", 2.2, 1.0, eps, "linear", "{}")

    def test_start_report_finish(self, repo, grid2, rng, params):
        self._start(repo, "run-1", 0.05)
        state = make_state(grid2, random_scalar(grid2, rng), random_scalar(grid2, rng))
        repo.add_report("run-1", 0, energy_report(state, params))
        verdict = CheckVerdict(name="mass_and_max", passed=True, detail="ok", measured=1e-15)
        repo.finish(
            ExitReport(run_id="run-1", status="passed", exit_code=ExitCode.PASS, t_final=1.0, steps=10, verdicts=(verdict,))
        )
        run = repo.get("run-1")
        assert run.status == "passed"
        assert run.exit_code == 0
        assert run.finished_at is not None
        assert [r.report_index for r in run.reports] == [0]
        assert [(v.name, v.passed) for v in run.verdicts] == [("mass_and_max", True)]

    def test_sweep_order_and_delete(self, repo):
        for run_id, eps in (("a", 0.01), ("b", 0.1), ("c", 0.05)):
            self._start(repo, run_id, eps)
        assert [r.id for r in repo.get_many(["a", "b", "c"])] == ["b", "c", "a"]
        assert len(repo.get_all()) == 3
        repo.delete("b")
        assert repo.get("b") is None

    def test_finish_unknown_run_is_ignored(self, repo):
        repo.finish(ExitReport(run_id="missing", status="passed", exit_code=ExitCode.PASS, t_final=0.0, steps=0))
        assert repo.get_all() == []
