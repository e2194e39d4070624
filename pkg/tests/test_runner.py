"""
Tests for scenario execution and dataset emission.
"""

import json
import math
import os
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from qktdiscord import __version__
from qktdiscord.channels import MarkovianSource
from qktdiscord.config import config
from qktdiscord.core.correlations import correlation_record
from qktdiscord.core.errors import ConfigError, NumericalInvariantError, OutputError
from qktdiscord.core.result import CSV_COLUMNS, RunOutput, read_csv
from qktdiscord.core.runner import (
    channel_compare,
    check_operators,
    fidelity_only,
    final_window,
    oracle_diagnostic,
    resolve_seed,
    run_scenario,
    summarize,
)
from qktdiscord.core.scenario import ScenarioConfig, preset, scenario_from_dict
from qktdiscord.core.spin_algebra import SpinParams, build_spin_operators


def small_scenario(**overrides) -> ScenarioConfig:
    data = {"j": 10, "eta": 20.0, "epsilon": 0.01, "n_kicks": 60, "theta0": 1.0, "phi0": 1.0}
    data.update(overrides)
    return scenario_from_dict(data)


class TestHelpers(unittest.TestCase):
    """Tests for runner helper functions."""

    def test_final_window(self):
        self.assertEqual(final_window(3000), (2000, 3000))
        self.assertEqual(final_window(0), (0, 0))
        self.assertEqual(final_window(11, 0.5), (6, 11))
        with self.assertRaises(ValueError):
            final_window(100, 0.0)

    def test_final_window_setting(self):
        config.config["runner"]["final_window_fraction"] = 0.5
        self.assertEqual(final_window(100), (50, 100))

    def test_resolve_seed(self):
        self.assertEqual(resolve_seed(ScenarioConfig(seed=4)), 4)
        self.assertEqual(resolve_seed(ScenarioConfig()), 12345)

    @patch("qktdiscord.core.runner.operator_residuals")
    def test_check_operators(self, mock_residuals):
        ops = build_spin_operators(SpinParams(2))
        mock_residuals.return_value = {"commutator": 0.0, "casimir": 1e-8, "jx_orthogonality": 0.0}
        check_operators(ops)
        mock_residuals.return_value = {"commutator": 1e-3, "casimir": 0.0, "jx_orthogonality": 0.0}
        with self.assertRaises(NumericalInvariantError) as ctx:
            check_operators(ops)
        self.assertEqual(ctx.exception.invariant, "commutator")

    @patch("qktdiscord.core.runner.operator_residuals")
    def test_casimir_bound_is_absolute(self, mock_residuals):
        ops = build_spin_operators(SpinParams(2))
        mock_residuals.return_value = {"commutator": 0.0, "casimir": 2e-8, "jx_orthogonality": 0.0}
        with self.assertRaises(NumericalInvariantError) as ctx:
            check_operators(ops)
        self.assertEqual(ctx.exception.invariant, "casimir")
        self.assertEqual(ctx.exception.tolerance, 1e-8)


class TestRunScenario(unittest.TestCase):
    """Tests for run_scenario()."""

    def test_zero_kicks(self):
        """Test that a run without kicks is the initial Bell-diagonal state."""
        cfg = small_scenario(n_kicks=0)
        output = run_scenario(cfg)
        self.assertEqual(len(output), 1)
        row = output.rows[0]
        self.assertEqual(row["n"], 0)
        self.assertEqual(row["F"], 1.0)
        self.assertEqual(row["alpha"], 0.0)
        expected = correlation_record(cfg.correlations(), 1.0)
        for name in ("Q", "CC", "REE", "MI", "concurrence"):
            self.assertAlmostEqual(row[name], getattr(expected, name), delta=1e-12)
        self.assertEqual(output.columns, list(CSV_COLUMNS))

    def test_metadata(self):
        output = run_scenario(small_scenario())
        metadata = output.metadata
        self.assertEqual(metadata["kind"], "dynamics")
        self.assertEqual(metadata["version"], __version__)
        self.assertEqual(metadata["seed"], 12345)
        self.assertEqual(metadata["scenario"]["j"], 10.0)
        self.assertEqual(metadata["regime"], "chaotic")
        self.assertEqual(metadata["cc_class"], "sudden_change")
        self.assertEqual(metadata["final_window"], [40, 60])
        self.assertLess(metadata["unitarity_residual"], 1e-10)
        self.assertTrue(metadata["initial_angles"]["explicit"])
        self.assertAlmostEqual(metadata["initial_bloch"][2], math.cos(1.0), delta=1e-10)
        self.assertIn("revivals", metadata)
        self.assertIn("discord_zero_candidates", metadata)
        self.assertNotIn("max_oracle_discrepancy", metadata)

    def test_row_invariants(self):
        output = run_scenario(small_scenario())
        self.assertEqual(len(output), 61)
        for row in output.rows:
            self.assertAlmostEqual(row["CC"], row["MI"] - row["Q"], delta=1e-9)
            self.assertAlmostEqual(row["l1"] + row["l2"] + row["l3"] + row["l4"], 1.0, delta=1e-10)
            self.assertGreater(row["alpha"], -math.pi)
            self.assertLessEqual(row["alpha"], math.pi)
        output.check_cc_identity()

    def test_deterministic(self):
        """Test that identical scenarios produce byte-identical CSV."""
        cfg = preset("fig2", n_kicks=150)
        self.assertEqual(run_scenario(cfg).to_csv(), run_scenario(cfg).to_csv())

    def test_seeded_initial_state(self):
        first = run_scenario(small_scenario(theta0=None, phi0=None, seed=3))
        second = run_scenario(small_scenario(theta0=None, phi0=None, seed=3))
        other = run_scenario(small_scenario(theta0=None, phi0=None, seed=4))
        np.testing.assert_array_equal(first.column("F"), second.column("F"))
        self.assertFalse(np.array_equal(first.column("F"), other.column("F")))
        self.assertFalse(first.metadata["initial_angles"]["explicit"])

    def test_selected_columns(self):
        output = run_scenario(small_scenario(outputs=["Q", "F"]))
        self.assertEqual(output.columns, ["n", "F", "Q"])
        self.assertEqual(set(output.rows[0]), {"n", "F", "Q"})
        output = run_scenario(small_scenario(outputs=["lambdas"]))
        self.assertEqual(output.columns, ["n", "l1", "l2", "l3", "l4"])
        with self.assertRaises(KeyError):
            output.column("Q")

    def test_markovian_source(self):
        gamma = 0.001
        output = run_scenario(
            scenario_from_dict({"source": "markovian", "gamma": gamma, "n_kicks": 300, "oracle": True})
        )
        n = output.column("n")
        np.testing.assert_allclose(output.column("F"), np.exp(-2 * gamma * n), rtol=1e-12)
        np.testing.assert_array_equal(output.column("alpha"), np.zeros(301))
        change = output.metadata["sudden_change"]
        self.assertAlmostEqual(change["first_crossing"], math.log(0.95 / 0.85) / gamma, delta=1.0)
        self.assertNotIn("regime", output.metadata)
        self.assertLess(output.metadata["max_oracle_discrepancy"], 2e-3)

    def test_chaotic_sudden_change(self):
        """Test the figure 2 setup: CC changes branch early, REE follows F."""
        output = run_scenario(preset("fig2"))
        self.assertNotEqual(output.metadata["sudden_change"]["first_crossing"], "none")
        order = np.argsort(output.column("F"), kind="stable")
        ree = output.column("REE")[order]
        self.assertTrue(np.all(np.diff(ree) >= -1e-12))

    def test_regular_entanglement_death_and_birth(self):
        """Test that REE vanishes mid-cycle and returns after the fidelity revives."""
        output = run_scenario(preset("fig3", theta0=1.0, phi0=1.0))
        ree = output.column("REE")
        lambda_max = np.max(np.column_stack([output.column(f"l{i}") for i in range(1, 5)]), axis=1)
        np.testing.assert_array_equal(ree == 0.0, lambda_max <= 0.5)
        dead = np.flatnonzero(ree == 0.0)
        self.assertGreater(dead.size, 0)
        self.assertTrue(np.any(ree[dead[-1] + 1 :] > 0.0))
        self.assertEqual(output.metadata["regime"], "regular")

    @patch("qktdiscord.core.runner.unitarity_residual", return_value=1e-6)
    def test_unitarity_breach(self, mock_residual):
        with self.assertRaises(NumericalInvariantError) as ctx:
            run_scenario(small_scenario())
        self.assertEqual(ctx.exception.invariant, "unitarity")
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_summarize(self):
        output = run_scenario(scenario_from_dict({"source": "markovian", "gamma": 0.001, "n_kicks": 300}))
        summary = summarize(output)
        self.assertAlmostEqual(summary["mean_final_F"], output.metadata["mean_final_F"])
        self.assertAlmostEqual(summary["sudden_change_time"], 111.22, delta=1.0)
        self.assertIsNone(summary["revival_period"])
        self.assertIsNone(summary["max_oracle_discrepancy"])
        self.assertIsNone(summary["error"])


class TestOtherEntryPoints(unittest.TestCase):
    """Tests for fidelity_only(), channel_compare() and oracle_diagnostic()."""

    def test_fidelity_only(self):
        output = fidelity_only(small_scenario())
        self.assertEqual(output.columns, ["n", "F", "alpha", "alpha_unwrapped", "phase_factor"])
        self.assertEqual(len(output), 61)
        self.assertEqual(output.metadata["kind"], "fd")
        self.assertIn("decay_fit", output.metadata)
        factors = output.column("phase_factor")
        self.assertTrue(np.all(factors >= 1.0 - 1e-12))
        self.assertTrue(np.all(factors <= math.sqrt(2.0) + 1e-12))

    def test_channel_compare_with_gamma(self):
        output = channel_compare(small_scenario(gamma=0.005))
        self.assertEqual(output.metadata["gamma"], 0.005)
        self.assertEqual(output.metadata["gamma_origin"], "config")
        self.assertIn("F_qkt", output.columns)
        self.assertIn("CC_markovian", output.columns)
        self.assertEqual(len(output), 61)
        np.testing.assert_allclose(
            output.column("F_markovian"), np.exp(-0.01 * output.column("n")), rtol=1e-12
        )
        self.assertIn("fluctuation_qkt", output.metadata)

    def test_channel_compare_fits_gamma(self):
        with patch(
            "qktdiscord.core.runner.MarkovianSource.from_decay_fit",
            wraps=MarkovianSource.from_decay_fit,
        ) as mock_from_fit:
            output = channel_compare(small_scenario(j=20, n_kicks=200))
        mock_from_fit.assert_called_once()
        fit = mock_from_fit.call_args[0][0]
        self.assertEqual(fit.model, "exponential")
        self.assertEqual(output.metadata["gamma_origin"], "fit")
        self.assertAlmostEqual(output.metadata["gamma"], fit.rate / 2.0)
        self.assertGreater(output.metadata["gamma"], 0.0)

    def test_channel_compare_without_decay_needs_gamma(self):
        with self.assertRaises(ConfigError) as ctx:
            channel_compare(small_scenario(epsilon=0.0))
        self.assertEqual(ctx.exception.key, "gamma")

    def test_fig1_chaotic_preset_plateau(self):
        """Test the seeded chaotic preset settles below F = 0.1."""
        output = fidelity_only(preset("fig1-chaotic"))
        self.assertEqual(output.metadata["final_window"], [2000, 3000])
        self.assertLess(output.metadata["mean_final_F"], 0.1)
        self.assertEqual(output.metadata["regime"], "chaotic")
        self.assertGreater(output.metadata["decay_fit"]["rate"], 0.0)

    def test_oracle_diagnostic(self):
        config.config["runner"]["oracle_stride"] = 25
        output = oracle_diagnostic(small_scenario(n_kicks=50))
        self.assertEqual(list(output.column("n")), [0, 25, 50])
        self.assertEqual(output.metadata["oracle_stride"], 25)
        first = output.rows[0]
        self.assertAlmostEqual(first["abs_diff"], 0.0, delta=2e-3)
        for row in output.rows:
            self.assertAlmostEqual(row["abs_diff"], abs(row["Q_closed"] - row["Q_numeric"]))
        sweep = output.metadata["alpha_sweep"]
        self.assertEqual(len(sweep["alphas"]), 33)
        self.assertLess(sweep["numeric_variation"], 2e-3)
        self.assertEqual(output.metadata["max_oracle_discrepancy"], max(output.column("abs_diff")))


class TestEmission(unittest.TestCase):
    """Tests for writing datasets."""

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_csv_layout(self):
        output = run_scenario(small_scenario(n_kicks=5))
        path = output.write(os.path.join(self.tmpdir.name, "run.csv"))
        with open(path) as f:
            lines = f.read().splitlines()
        metadata_lines = [line for line in lines if line.startswith("# ")]
        self.assertEqual(len(lines), len(metadata_lines) + 1 + 6)
        self.assertEqual(lines[len(metadata_lines)], ",".join(CSV_COLUMNS))

        loaded = read_csv(path)
        self.assertEqual(loaded.columns, output.columns)
        self.assertEqual(loaded.metadata["seed"], 12345)
        self.assertEqual(loaded.rows[3]["n"], 3)
        self.assertAlmostEqual(loaded.rows[3]["Q"], output.rows[3]["Q"], delta=1e-14)

    def test_json(self):
        output = run_scenario(small_scenario(n_kicks=3))
        data = json.loads(output.render("json"))
        self.assertEqual(data["columns"], list(CSV_COLUMNS))
        self.assertEqual(len(data["rows"]), 4)
        self.assertEqual(data["metadata"]["kind"], "dynamics")
        with self.assertRaises(ValueError):
            output.render("xml")

    def test_unwritable_path(self):
        blocker = os.path.join(self.tmpdir.name, "file")
        with open(blocker, "w") as f:
            f.write("x")
        output = RunOutput(columns=["n"], rows=[{"n": 0}])
        with self.assertRaises(OutputError) as ctx:
            output.write(os.path.join(blocker, "run.csv"))
        self.assertEqual(ctx.exception.exit_code, 4)

    @patch("qktdiscord.core.result.os.replace", side_effect=OSError(13, "Permission denied"))
    def test_failed_rename_cleans_up(self, mock_replace):
        path = os.path.join(self.tmpdir.name, "run.csv")
        output = RunOutput(columns=["n"], rows=[{"n": 0}])
        with self.assertRaises(OutputError) as ctx:
            output.write(path)
        self.assertEqual(ctx.exception.reason, "Permission denied")
        self.assertEqual(os.listdir(self.tmpdir.name), [])

    def test_identity_rechecked_at_emission(self):
        output = RunOutput(
            columns=["n", "Q", "CC", "MI"], rows=[{"n": 0, "Q": 0.5, "CC": 0.2, "MI": 1.0}]
        )
        with self.assertRaises(NumericalInvariantError):
            output.write(os.path.join(self.tmpdir.name, "run.csv"))
        self.assertEqual(os.listdir(self.tmpdir.name), [])


if __name__ == "__main__":
    unittest.main()
