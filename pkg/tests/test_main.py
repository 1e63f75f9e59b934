import pytest

from config.enums import ExitCode
from main import build_parser, main

SMALL_RUN = """
name = "cli"

[grid]
extents = [1.0, 1.0]
cells = [8, 8]

[model]
p = 2.2
kappa = 1.0
epsilon = 0.05
phi_gradient = [0.0, -0.1]

[initial.n0]
kind = "gaussian"
background = 0.0
amplitude = 1.0
width = 0.2

[time]
t_end = 0.005
report_interval = 0.005

[output]
directory = "{directory}"
catalogue = false
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL_RUN.format(directory=(tmp_path / "cli").as_posix()))
    return path


def _csv(out: str) -> dict[str, str]:
    rows = [line.split(",") for line in out.splitlines() if line.count(",") == 1]
    assert rows[0] == ["quantity", "value"]
    return dict(rows[1:])


class TestExponents:
    def test_valid_table(self, capsys):
        assert main(["exponents", "--m0", "1", "--p", "3", "--m", "2", "--csv"]) == ExitCode.PASS
        values = _csv(capsys.readouterr().out)
        assert float(values["lower"]) == 1.125
        assert float(values["upper"]) == pytest.approx(14.0 / 3.0)
        assert "theta" in values
        assert "gradient_theta" in values

    def test_out_of_range_table(self, capsys):
        assert main(["exponents", "--p", "3", "--m", "10"]) == ExitCode.INVARIANT_VIOLATION
        assert "range ok" in capsys.readouterr().out

    def test_bootstrap(self, capsys):
        assert main(["exponents", "--delta", "0.01", "--csv"]) == ExitCode.PASS
        values = _csv(capsys.readouterr().out)
        assert float(values["m_0"]) == 1.0
        assert float(values["m_1"]) == pytest.approx(1.24)

    def test_integrability(self, capsys):
        assert main(["exponents", "--p", "2.2", "--r", "6", "--csv"]) == ExitCode.PASS
        values = _csv(capsys.readouterr().out)
        assert float(values["r_max"]) == pytest.approx(8.25)

    @pytest.mark.parametrize(
        "argv",
        [
            ["exponents"],
            ["exponents", "--delta", "0.2"],
            ["exponents", "--p", "2.5", "--r", "15"],
            ["exponents", "--m0", "0.5", "--p", "2.5"],
        ],
    )
    def test_bad_arguments(self, argv):
        assert main(argv) == ExitCode.CONFIG_ERROR


class TestRunCommands:
    def test_run(self, config_file, tmp_path, capsys):
        assert main(["run", str(config_file), "--vtk"]) == ExitCode.PASS
        assert (tmp_path / "cli" / "diagnostics.csv").exists()
        assert "RUN PASSED" in capsys.readouterr().out

    def test_verify(self, config_file):
        assert main(["verify", str(config_file)]) == ExitCode.PASS

    def test_sweep(self, config_file, tmp_path):
        assert main(["sweep-eps", str(config_file), "--values", "0.1", "0.05"]) == ExitCode.PASS
        assert (tmp_path / "cli-eps0.1" / "diagnostics.csv").exists()
        assert (tmp_path / "cli-eps0.05" / "diagnostics.csv").exists()

    def test_missing_config(self, tmp_path):
        assert main(["run", str(tmp_path / "absent.toml")]) == ExitCode.CONFIG_ERROR

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])
