"""
Tests for the command-line interface.
"""

import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

import yaml

from qktdiscord.cli import build_scenario, main, setup_cli_parser
from qktdiscord.core.result import CSV_COLUMNS, read_csv

SMALL = ["--j", "10", "--epsilon", "0.01", "--kicks", "5", "--theta0", "1", "--phi0", "1"]


class CLITestCase(unittest.TestCase):
    """Runs main() with captured stdout and stderr."""

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        patcher = patch("qktdiscord.cli.setup_logging")
        self.mock_setup_logging = patcher.start()
        self.addCleanup(patcher.stop)

    def tearDown(self):
        self.tmpdir.cleanup()

    def path(self, name):
        return os.path.join(self.tmpdir.name, name)

    def run_cli(self, *argv):
        with patch("sys.stdout", new_callable=io.StringIO) as stdout, patch(
            "sys.stderr", new_callable=io.StringIO
        ) as stderr:
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()


class TestRunCommands(CLITestCase):
    """Tests for fd, dynamics, channel-compare and oracle."""

    def test_dynamics_to_stdout(self):
        code, out, err = self.run_cli("dynamics", *SMALL)
        self.assertEqual(code, 0)
        lines = out.splitlines()
        body = [line for line in lines if not line.startswith("# ")]
        self.assertEqual(body[0], ",".join(CSV_COLUMNS))
        self.assertEqual(len(body), 7)
        self.assertIn("# seed: 12345", lines)

    def test_dynamics_to_file(self):
        target = self.path("runs/run.json")
        code, out, _ = self.run_cli("dynamics", *SMALL, "--format", "json", "--out", target)
        self.assertEqual(code, 0)
        self.assertIn(f"Dataset written to {target}", out)
        with open(target) as f:
            data = json.load(f)
        self.assertEqual(len(data["rows"]), 6)
        self.assertEqual(data["metadata"]["kind"], "dynamics")

    def test_fd(self):
        target = self.path("fd.csv")
        code, _, _ = self.run_cli("fd", *SMALL, "--out", target)
        self.assertEqual(code, 0)
        self.assertEqual(read_csv(target).columns, ["n", "F", "alpha", "alpha_unwrapped", "phase_factor"])

    def test_channel_compare_and_oracle(self):
        code, out, _ = self.run_cli("channel-compare", *SMALL, "--gamma", "0.01")
        self.assertEqual(code, 0)
        self.assertIn("F_markovian", out)
        code, out, _ = self.run_cli("oracle", *SMALL)
        self.assertEqual(code, 0)
        self.assertIn("Q_numeric", out)

    def test_settings_file(self):
        settings = self.path("settings.yml")
        with open(settings, "w") as f:
            yaml.dump({"runner": {"seed": 7}, "general": {"log_level": "DEBUG"}}, f)
        code, out, _ = self.run_cli("--settings", settings, "dynamics", *SMALL)
        self.assertEqual(code, 0)
        self.assertIn("# seed: 7", out.splitlines())
        self.mock_setup_logging.assert_called_once_with(level="DEBUG", log_file=None)

    def test_log_level_flag(self):
        self.run_cli("--log-level", "ERROR", "presets")
        self.mock_setup_logging.assert_called_once_with(level="ERROR", log_file=None)


class TestExitCodes(CLITestCase):
    """Tests for error handling and exit codes."""

    def test_invalid_parameter(self):
        code, out, err = self.run_cli("dynamics", "--j", "0.2")
        self.assertEqual(code, 2)
        self.assertIn("j", err)
        self.assertEqual(out, "")

    def test_missing_scenario_document(self):
        code, _, err = self.run_cli("dynamics", "--config", self.path("absent.json"))
        self.assertEqual(code, 2)
        self.assertIn("config", err)

    @patch("qktdiscord.core.runner.unitarity_residual", return_value=1e-6)
    def test_numerical_invariant(self, mock_residual):
        code, out, err = self.run_cli("dynamics", *SMALL)
        self.assertEqual(code, 3)
        self.assertIn("unitarity", err)
        self.assertEqual(out, "")

    def test_unwritable_output(self):
        blocker = self.path("file")
        with open(blocker, "w") as f:
            f.write("x")
        code, _, err = self.run_cli("dynamics", *SMALL, "--out", os.path.join(blocker, "run.csv"))
        self.assertEqual(code, 4)
        self.assertIn("I/O error", err)

    def test_no_command(self):
        code, out, _ = self.run_cli()
        self.assertEqual(code, 1)
        self.assertIn("usage", out)


class TestOtherCommands(CLITestCase):
    """Tests for sweep, presets, sources and config."""

    def test_presets(self):
        code, out, _ = self.run_cli("presets")
        self.assertEqual(code, 0)
        for name in ("fig1-chaotic", "fig1-regular", "fig2", "fig3"):
            self.assertIn(name, out)

    def test_sources(self):
        code, out, _ = self.run_cli("sources")
        self.assertEqual(code, 0)
        self.assertIn("qkt", out)
        self.assertIn("markovian", out)

    def test_config_generate(self):
        target = self.path("sample.json")
        code, out, _ = self.run_cli("config", "generate", "--output", target, "--format", "json")
        self.assertEqual(code, 0)
        with open(target) as f:
            self.assertEqual(json.load(f)["runner"]["seed"], 12345)

    def test_sweep_without_values(self):
        code, out, _ = self.run_cli("sweep", *SMALL, "--sweep-axis", "eta")
        self.assertEqual(code, 0)
        self.assertIn("nothing to run", out)

    def test_sweep_writes_runs_and_summary(self):
        runs_dir = self.path("runs")
        summary = self.path("summary.csv")
        code, out, _ = self.run_cli(
            "sweep",
            *SMALL,
            "--sweep-axis",
            "eta",
            "--sweep-values",
            "0.1,20",
            "--runs-dir",
            runs_dir,
            "--out",
            summary,
        )
        self.assertEqual(code, 0)
        self.assertEqual(sorted(os.listdir(runs_dir)), ["eta-000.csv", "eta-001.csv"])
        table = read_csv(summary)
        self.assertEqual(table.columns[0], "eta")
        self.assertEqual(len(table), 2)

    def test_sweep_failed_point_still_exits_zero(self):
        code, out, _ = self.run_cli("sweep", *SMALL, "--sweep-axis", "j", "--sweep-values", "10,0.2")
        self.assertEqual(code, 0)
        self.assertIn("1 of 2 sweep points failed", out)

    def test_sweep_bad_values(self):
        code, _, _ = self.run_cli("sweep", *SMALL, "--sweep-axis", "eta", "--sweep-values", "a,b")
        self.assertEqual(code, 2)


class TestBuildScenario(unittest.TestCase):
    """Tests for preset, document and flag precedence."""

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.parser = setup_cli_parser()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_precedence(self):
        document = os.path.join(self.tmpdir.name, "scenario.json")
        with open(document, "w") as f:
            json.dump({"eta": 0.1, "n_kicks": 10}, f)
        args = self.parser.parse_args(
            ["dynamics", "--preset", "fig2", "--config", document, "--kicks", "3", "--oracle"]
        )
        cfg = build_scenario(args)
        self.assertEqual(cfg.name, "fig2")
        self.assertEqual(cfg.c_x, 0.95)
        self.assertEqual(cfg.eta, 0.1)
        self.assertEqual(cfg.n_kicks, 3)
        self.assertTrue(cfg.oracle)


if __name__ == "__main__":
    unittest.main()
