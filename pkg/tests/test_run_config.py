import json
from pathlib import Path

import pytest

from config.enums import DensityProfile, SolveMethod, VelocityProfile
from config.run_config import RunConfig, load_run_config, parse_run_config
from utils.exceptions import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def _document(**sections) -> dict:
    doc = {
        "name": "case",
        "grid": {"extents": [1.0, 1.0], "cells": [8, 8]},
        "model": {"p": 2.2, "kappa": 1.0, "epsilon": 0.05, "phi_gradient": [0.0, -0.1]},
    }
    doc.update(sections)
    return doc


class TestShippedConfigs:
    def test_default_2d(self):
        config = load_run_config(CONFIG_DIR / "default_2d.toml")
        assert config.name == "default-2d"
        assert config.grid.cells == (64, 64)
        assert config.model.phi_gradient == (0.0, -0.1)
        assert config.n0.kind is DensityProfile.GAUSSIAN
        assert config.u0.kind is VelocityProfile.ZERO
        assert config.flow.poisson_method is SolveMethod.DIRECT
        assert config.time.snapshot_interval == 0.25
        assert config.output.catalogue

    def test_no_flow(self):
        config = load_run_config(CONFIG_DIR / "no_flow_2d.toml")
        assert not config.flow.enabled
        assert config.model.kappa == 0.0
        assert config.time.report_interval == 0.005

    def test_smoke_3d(self):
        config = load_run_config(CONFIG_DIR / "smoke_3d.toml")
        grid = config.build_grid()
        assert grid.dim == 3
        assert grid.cells == (16, 16, 16)
        assert config.build_params(s0=1.0).phi_gradient == (0.0, 0.0, -0.1)


class TestParsing:
    def test_defaults(self):
        config = parse_run_config({})
        assert config == RunConfig()

    def test_initial_tables(self):
        config = parse_run_config(
            _document(
                initial={
                    "n0": {"kind": "gaussian", "amplitude": 2.0, "center": [0.3, 0.7]},
                    "u0": {"kind": "vortex", "amplitude": 0.5},
                }
            )
        )
        assert config.n0.center == (0.3, 0.7)
        assert config.u0.kind is VelocityProfile.VORTEX

    def test_affine_pair(self):
        config = parse_run_config(
            _document(
                model={
                    "p": 2.5,
                    "kappa": 1.0,
                    "epsilon": 0.1,
                    "pair": "affine-table",
                    "pair_coefficients": {"chi0": 1.0, "chi1": 0.5, "f1": 1.0, "f2": 0.0},
                    "phi_gradient": [0.0, -0.1],
                }
            )
        )
        assert config.build_params().sensitivity.chi(2.0) == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "doc",
        [
            {"grid": {"extents": [1.0, 1.0], "cells": [8, 8], "spacing": 0.1}},
            {"solver": {}},
            {"initial": {"n1": {}}},
            {"initial": {"n0": {"kind": "triangle"}}},
            {"initial": {"u0": {"kind": "spiral"}}},
            {"flow": {"poisson_method": "multigrid"}},
        ],
        ids=["unknown-key", "unknown-section", "unknown-initial", "bad-profile", "bad-velocity", "bad-method"],
    )
    def test_rejects_unknown_names(self, doc):
        with pytest.raises(ConfigError):
            parse_run_config(_document(**doc))

    def test_bad_enum_lists_choices(self):
        with pytest.raises(ConfigError, match="direct"):
            parse_run_config(_document(flow={"yosida_method": "lu"}))


class TestValidation:
    @pytest.mark.parametrize("cfl", [0.0, -0.5, 1.5])
    def test_cfl_range(self, cfl):
        with pytest.raises(ConfigError, match="cfl_safety"):
            parse_run_config(_document(time={"cfl_safety": cfl}))

    def test_cfl_upper_end_allowed(self):
        assert parse_run_config(_document(time={"cfl_safety": 1.0})).time.cfl_safety == 1.0

    @pytest.mark.parametrize(
        "grid",
        [
            {"extents": [1.0], "cells": [8]},
            {"extents": [1.0, 1.0], "cells": [8, 8, 8]},
            {"extents": [1.0, 1.0], "cells": [8, 3]},
            {"extents": [1.0, 0.0], "cells": [8, 8]},
        ],
    )
    def test_grid(self, grid):
        with pytest.raises(ConfigError):
            parse_run_config(_document(grid=grid))

    def test_phi_length(self):
        doc = _document()
        doc["model"]["phi_gradient"] = [0.0, 0.0, -0.1]
        with pytest.raises(ConfigError, match="phi_gradient"):
            parse_run_config(doc)

    @pytest.mark.parametrize("key,value", [("epsilon", 1.0), ("epsilon", 0.0), ("p", 1.0), ("pair", "cubic")])
    def test_model(self, key, value):
        doc = _document()
        doc["model"][key] = value
        with pytest.raises(ConfigError):
            parse_run_config(doc)

    @pytest.mark.parametrize(
        "section,table",
        [
            ("time", {"t_end": 0.0}),
            ("time", {"report_interval": 0.0}),
            ("time", {"max_steps": 0}),
            ("audit", {"r": 0.5}),
            ("audit", {"growth_window": 0.0}),
            ("audit", {"growth_factor": 0.9}),
            ("flow", {"poisson_tol": 0.0}),
        ],
    )
    def test_ranges(self, section, table):
        with pytest.raises(ConfigError):
            parse_run_config(_document(**{section: table}))


class TestFiles:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_run_config(tmp_path / "absent.toml")

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[grid\ncells = [8, 8]\n")
        with pytest.raises(ConfigError, match="malformed"):
            load_run_config(path)


class TestDerivedConfigs:
    def test_output_root(self, monkeypatch, tmp_path):
        config = parse_run_config(_document(output={"directory": "runs/case"}))
        assert config.output_path() == Path("runs/case")
        monkeypatch.setenv("CNS_OUTPUT_ROOT", str(tmp_path))
        assert config.output_path() == tmp_path / "runs" / "case"
        absolute = parse_run_config(_document(output={"directory": str(tmp_path / "abs")}))
        assert absolute.output_path() == tmp_path / "abs"

    def test_with_epsilon(self):
        config = parse_run_config(_document(output={"directory": "runs/case"}))
        member = config.with_epsilon(0.01, directory="runs/case-eps0.01")
        assert member.name == "case-eps0.01"
        assert member.model.epsilon == 0.01
        assert member.model.p == config.model.p
        assert member.output.directory == "runs/case-eps0.01"

    def test_with_time(self):
        config = parse_run_config(_document(time={"t_end": 1.0, "report_interval": 0.1}))
        shorter = config.with_time(t_end=0.5)
        assert shorter.time.t_end == 0.5
        assert shorter.time.report_interval == 0.1
        assert shorter.grid == config.grid

    def test_json_form(self):
        data = json.loads(load_run_config(CONFIG_DIR / "default_2d.toml").to_json())
        assert data["grid"]["cells"] == [64, 64]
        assert data["n0"]["kind"] == "gaussian"
        assert data["flow"]["yosida_method"] == "direct"
