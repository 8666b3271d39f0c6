import json

import pytest

from main import build_parser, main
from quench_complexity import experiments
from quench_complexity.commands import (
    EXIT_CONFIG_ERROR, EXIT_IO_ERROR, EXIT_NUMERIC_ERROR, EXIT_OK,
    apply_overrides, parse_grid, parse_outputs, parse_window,
)
from quench_complexity.errors import ConfigError, ConsistencyError, IntegrationInstabilityError
from quench_complexity.experiments import GridSpec
from quench_complexity.figure_presets import figure_preset

N1_DOC = """
chain: {n: 1, omega0: 3.0, k0: 0.0}
segments:
  - {omega: 5.0, k: 0.0}
grid: {start: 0, end: 1, samples: 11}
"""


@pytest.fixture
def n1_config(tmp_path):
    path = tmp_path / "n1.yaml"
    path.write_text(N1_DOC, encoding="utf-8")
    return str(path)


class TestFlagParsing:
    def test_grid(self):
        assert parse_grid("0:10:11") == GridSpec(0.0, 10.0, 11)

    @pytest.mark.parametrize("text", ["0:10", "a:b:c", "5:1:10", "0:1:1"])
    def test_bad_grid(self, text):
        with pytest.raises(ConfigError):
            parse_grid(text)

    def test_window(self):
        assert parse_window("4:8") == (4.0, 8.0)
        with pytest.raises(ConfigError):
            parse_window("8:4")
        with pytest.raises(ConfigError):
            parse_window("4")

    def test_outputs(self):
        assert parse_outputs("total, modes") == ("total", "modes")
        with pytest.raises(ConfigError):
            parse_outputs("total,entropy")

    def test_overrides(self):
        args = build_parser().parse_args(
            ["figure", "fig7", "--policy", "literal-segment", "--grid", "0:20:21", "--outputs", "modes,total"])
        scenario = apply_overrides(figure_preset("fig7", 1), args)
        assert scenario.schedule == figure_preset("fig8", 1).schedule
        assert scenario.policy is figure_preset("fig8", 1).policy
        assert scenario.grid == GridSpec(0.0, 20.0, 21)
        assert scenario.outputs == ("total", "modes")

    def test_no_overrides(self):
        args = build_parser().parse_args(["figure", "fig7"])
        assert apply_overrides(figure_preset("fig7", 1), args) == figure_preset("fig7", 1)


class TestMain:
    def test_figure_list(self, capsys):
        assert main(["figure", "--list"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "fig1 " in out and "fig11" in out

    def test_figure_needs_id(self):
        assert main(["figure"]) == EXIT_CONFIG_ERROR

    def test_unknown_figure(self):
        assert main(["figure", "fig99"]) == EXIT_CONFIG_ERROR

    def test_figure_json_to_stdout(self, capsys):
        assert main(["--quiet", "figure", "fig1", "--grid", "0:10:11", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["metadata"]["figure"] == "fig1/1"
        assert len(doc["samples"]) == 11

    def test_run_to_file(self, n1_config, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["run", "--config", n1_config, "--out", str(out)]) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,c_total,c_zero,c_rest"
        assert len(lines) == 12

    def test_run_bad_config(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text(N1_DOC.replace("omega0: 3.0", "omega0: -3.0"), encoding="utf-8")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG_ERROR

    def test_run_bad_grid_flag(self, n1_config):
        assert main(["run", "--config", n1_config, "--grid", "0:1"]) == EXIT_CONFIG_ERROR

    def test_run_missing_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == EXIT_IO_ERROR

    def test_run_unwritable_output(self, n1_config, tmp_path):
        out = tmp_path / "missing" / "curve.csv"
        assert main(["run", "--config", n1_config, "--out", str(out)]) == EXIT_IO_ERROR

    def test_expand(self, n1_config, capsys):
        assert main(["--quiet", "expand", "--config", n1_config]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["a2"] == pytest.approx(64 / 9, rel=1e-12)
        assert payload["a4"] == pytest.approx(-143.5391, abs=1e-4)
        assert payload["offsets"] == {"1": 0.0}
        assert payload["policy"] == "fixed-initial"

    def test_crossover_against_itself(self, n1_config, capsys):
        code = main(["--quiet", "crossover", "--config", n1_config, "--against", n1_config, "--window", "0:1"])
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["crossings"] == []

    def test_crossover_grid_mismatch(self, n1_config, capsys):
        code = main(["crossover", "--config", n1_config, "--against", n1_config,
                     "--window", "0:1", "--shift", "0.5"])
        assert code == EXIT_CONFIG_ERROR

    def test_validate_unknown_profile(self):
        assert main(["validate", "--profile", "strictest"]) == EXIT_CONFIG_ERROR

    @pytest.mark.parametrize("error", [ConsistencyError, IntegrationInstabilityError])
    def test_numerical_failure_exit_code(self, n1_config, monkeypatch, error):
        def failing(scenario):
            raise error("b² became non-positive")

        monkeypatch.setattr("quench_complexity.commands.evaluate_scenario", failing)
        assert main(["run", "--config", n1_config]) == EXIT_NUMERIC_ERROR

    def test_successive_figure_evaluated_once(self, monkeypatch, capsys):
        calls = []
        original = experiments.scenario_curve

        def counting(*args, **kwargs):
            calls.append(args[0])
            return original(*args, **kwargs)

        monkeypatch.setattr(experiments, "scenario_curve", counting)
        assert main(["--quiet", "figure", "fig9", "--grid", "1:8:8", "--format", "json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert len(calls) == 1
        assert doc["metadata"]["nonpositive_denominators"] >= 0
