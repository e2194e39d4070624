"""
Tests for the correlation measures module.
"""

import math
import unittest

import numpy as np

from qktdiscord.core.correlations import (
    BellDiagonalParams,
    CorrelationRecord,
    XState,
    binary_entropy,
    classical_correlation,
    concurrence,
    concurrence_wootters,
    correlation_record,
    discord_alpha_diagnostic,
    discord_numeric,
    discord_zero_candidates,
    mutual_information,
    partial_trace,
    partial_transpose,
    quantum_discord,
    ree,
    theta_values,
    xstate,
    xstate_eigenvalues,
)
from tests.helpers import amplitude, random_inputs

BELL = BellDiagonalParams(1.0, -1.0, 1.0)
MIXED = BellDiagonalParams(0.0, 0.0, 0.0)
FIG2 = BellDiagonalParams(0.95, -0.85, 0.85)


class TestBellDiagonalParams(unittest.TestCase):
    """Tests for BellDiagonalParams validation."""

    def test_physical_boundary_accepted(self):
        self.assertEqual(min(BELL.validity_numbers), 0.0)
        self.assertEqual(FIG2.as_tuple(), (0.95, -0.85, 0.85))

    def test_unphysical_rejected(self):
        for c in ((1.0, 1.0, 1.0), (1.5, 0.0, 0.0), (0.0, 0.0, float("nan")), (0.9, 0.9, 0.9)):
            with self.assertRaises(ValueError):
                BellDiagonalParams(*c)


class TestXState(unittest.TestCase):
    """Tests for xstate() and XState."""

    def test_bell_projector(self):
        rho = xstate(BELL, 1.0).rho
        bell = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
        np.testing.assert_allclose(rho, np.outer(bell, bell), atol=1e-15)

    def test_maximally_mixed(self):
        for f in (1.0, 0.3j, 0.0):
            np.testing.assert_array_equal(xstate(MIXED, f).rho, np.eye(4) / 4)

    def test_layout(self):
        f = 0.6 * np.exp(0.4j)
        rho = xstate(FIG2, f).rho
        self.assertAlmostEqual(rho[0, 0].real, 1.85 / 4)
        self.assertAlmostEqual(rho[1, 1].real, 0.15 / 4)
        self.assertAlmostEqual(rho[0, 3], 1.8 * f / 4)
        self.assertAlmostEqual(rho[1, 2], 0.1 * f / 4)
        self.assertAlmostEqual(rho[3, 0], np.conj(rho[0, 3]))

    def test_smallest_eigenvalue(self):
        state = xstate(FIG2, 1.0).validate()
        self.assertAlmostEqual(np.min(state.eigenvalues()), 0.05 / 4, delta=1e-12)

    def test_marginals_maximally_mixed(self):
        for c, F, alpha in random_inputs(11, 50):
            state = xstate(c, amplitude(F, alpha))
            np.testing.assert_allclose(state.reduced("A"), np.eye(2) / 2, atol=1e-12)
            np.testing.assert_allclose(state.reduced("B"), np.eye(2) / 2, atol=1e-12)

    def test_invalid_amplitude(self):
        with self.assertRaises(ValueError):
            xstate(FIG2, 1.01)
        with self.assertRaises(ValueError):
            xstate(FIG2, complex(float("nan"), 0.0))

    def test_validate_rejects_bad_matrices(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 1] = 0.01
        rho[1, 0] = 0.01
        with self.assertRaises(ValueError):
            XState(rho).validate()
        with self.assertRaises(ValueError):
            XState(np.eye(4, dtype=complex) / 2).validate()
        with self.assertRaises(ValueError):
            XState(np.diag([0.6, 0.5, 0.0, -0.1]).astype(complex)).validate()

    def test_partial_trace_keep(self):
        with self.assertRaises(ValueError):
            partial_trace(np.eye(4) / 4, "C")


class TestEigenvalues(unittest.TestCase):
    """Tests for xstate_eigenvalues()."""

    def test_examples(self):
        np.testing.assert_allclose(xstate_eigenvalues(BELL, 1.0), (1.0, 0.0, 0.0, 0.0))
        np.testing.assert_allclose(xstate_eigenvalues(MIXED, 0.4), (0.25,) * 4)

    def test_match_numeric_spectrum(self):
        for c, F, alpha in random_inputs(1, 1000):
            closed = np.sort(xstate_eigenvalues(c, F))
            numeric = xstate(c, amplitude(F, alpha)).eigenvalues()
            np.testing.assert_allclose(closed, numeric, atol=1e-10)
            self.assertAlmostEqual(sum(closed), 1.0, delta=1e-10)
            self.assertGreaterEqual(min(closed), -1e-12)

    def test_fidelity_range(self):
        with self.assertRaises(ValueError):
            xstate_eigenvalues(FIG2, 1.5)
        with self.assertRaises(ValueError):
            xstate_eigenvalues(FIG2, float("nan"))


class TestClassicalCorrelation(unittest.TestCase):
    """Tests for classical_correlation() and theta_values()."""

    def test_pure_bell(self):
        self.assertAlmostEqual(classical_correlation(BELL, 1.0, 0.0), 1.0)

    def test_real_amplitude_reduction(self):
        for c, F, _ in random_inputs(2, 200):
            _, theta_2 = theta_values(c, F, 0.0)
            self.assertAlmostEqual(
                theta_2, math.sqrt(F) * max(abs(c.c_x), abs(c.c_y)), delta=1e-12
            )

    def test_z_only_correlations(self):
        c = BellDiagonalParams(0.0, 0.0, 0.85)
        expected = 1.0 - float(binary_entropy(0.925))
        for F, alpha in ((0.0, 0.0), (0.3, 1.0), (1.0, -2.5)):
            self.assertAlmostEqual(classical_correlation(c, F, alpha), expected, delta=1e-14)

    def test_constant_when_z_dominates(self):
        c = BellDiagonalParams(0.3, -0.2, 0.8)
        expected = 1.0 - float(binary_entropy(0.9))
        for F in np.linspace(0.0, 1.0, 21):
            for alpha in np.linspace(-3.0, 3.0, 13):
                self.assertEqual(classical_correlation(c, F, alpha), expected)

    def test_non_increasing_as_fidelity_drops(self):
        c = BellDiagonalParams(0.6, -0.3, 0.0)
        values = [classical_correlation(c, F, 0.0) for F in np.linspace(1.0, 0.0, 101)]
        self.assertTrue(np.all(np.diff(values) <= 1e-15))

    def test_theta_clamp_warning(self):
        c = BellDiagonalParams(1.0, 0.0, 0.0)
        _, theta_2 = theta_values(c, 1.0, math.pi / 8)
        self.assertGreater(theta_2, 1.09)
        with self.assertLogs("qktdiscord.correlations", level="WARNING") as logs:
            value = classical_correlation(c, 1.0, math.pi / 8)
        self.assertEqual(value, 1.0)
        self.assertTrue(any("theta_2" in line for line in logs.output))

    def test_nan_phase_rejected(self):
        with self.assertRaises(ValueError):
            classical_correlation(FIG2, 0.5, float("nan"))


class TestDiscordAndMutualInformation(unittest.TestCase):
    """Tests for quantum_discord(), mutual_information() and their identities."""

    def test_examples(self):
        self.assertAlmostEqual(quantum_discord(BELL, 1.0, 0.0), 1.0, delta=1e-12)
        self.assertAlmostEqual(quantum_discord(MIXED, 0.7, 0.3), 0.0, delta=1e-12)
        self.assertAlmostEqual(mutual_information(xstate(MIXED, 0.5)), 0.0, delta=1e-12)
        self.assertAlmostEqual(mutual_information(xstate(BELL, 1.0)), 2.0, delta=1e-10)

    def test_classical_quantum_states_have_zero_discord(self):
        for c_z in np.linspace(-1.0, 1.0, 41):
            c = BellDiagonalParams(0.0, 0.0, float(c_z))
            for F in (0.0, 0.5, 1.0):
                self.assertAlmostEqual(quantum_discord(c, F, 0.2), 0.0, delta=1e-12)

    def test_identities_over_random_inputs(self):
        for c, F, alpha in random_inputs(3, 1000):
            record = correlation_record(c, amplitude(F, alpha))
            lambdas = xstate_eigenvalues(c, record.F)
            entropy_sum = sum(x * math.log2(x) for x in lambdas if x > 0)
            self.assertAlmostEqual(record.MI, 2.0 + entropy_sum, delta=1e-10)
            self.assertAlmostEqual(record.CC, record.MI - record.Q, delta=1e-9)
            problems = [p for p in record.check_invariants() if p != "discord_bounds"]
            self.assertEqual(problems, [])

    def test_discord_bounds_for_real_amplitudes(self):
        for c, F, _ in random_inputs(4, 1000):
            record = correlation_record(c, math.sqrt(F))
            self.assertEqual(record.check_invariants(), [])
            self.assertGreaterEqual(record.Q, -1e-9)
            self.assertLessEqual(record.Q, record.MI + 1e-9)


class TestEntanglement(unittest.TestCase):
    """Tests for ree() and concurrence()."""

    def test_examples(self):
        self.assertAlmostEqual(ree(BELL, 1.0), 1.0, delta=1e-12)
        self.assertEqual(ree(MIXED, 0.9), 0.0)
        self.assertAlmostEqual(concurrence(xstate(BELL, 1.0)), 1.0, delta=1e-12)
        self.assertEqual(concurrence(xstate(MIXED, 1.0)), 0.0)

    def test_ppt_criterion(self):
        checked = 0
        for c, F, alpha in random_inputs(5, 1000):
            lambda_max = max(xstate_eigenvalues(c, F))
            if abs(lambda_max - 0.5) < 1e-6:
                continue
            state = xstate(c, amplitude(F, alpha))
            negative = np.min(np.linalg.eigvalsh(partial_transpose(state.rho))) < 0
            self.assertEqual(ree(c, F) > 0, negative)
            self.assertEqual(concurrence(state) > 0, negative)
            checked += 1
        self.assertGreater(checked, 900)

    def test_matches_wootters(self):
        for c, F, alpha in random_inputs(6, 300, margin=0.02):
            state = xstate(c, amplitude(F, alpha))
            self.assertAlmostEqual(
                concurrence(state), concurrence_wootters(state.rho), delta=1e-10
            )

    def test_independent_of_phase(self):
        alphas = np.linspace(-math.pi, math.pi, 100)
        for c, F, _ in random_inputs(7, 20):
            reference = correlation_record(c, math.sqrt(F))
            for alpha in alphas:
                record = correlation_record(c, amplitude(F, alpha))
                self.assertAlmostEqual(record.REE, reference.REE, delta=1e-12)
                self.assertAlmostEqual(record.concurrence, reference.concurrence, delta=1e-12)
                self.assertAlmostEqual(record.MI, reference.MI, delta=1e-10)

    def test_monotone_in_fidelity(self):
        fidelities = np.linspace(0.0, 1.0, 51)
        records = [correlation_record(FIG2, math.sqrt(F)) for F in fidelities]
        for name in ("MI", "REE", "concurrence"):
            values = [getattr(record, name) for record in records]
            self.assertTrue(np.all(np.diff(values) >= -1e-12), msg=name)


class TestDiscordOracle(unittest.TestCase):
    """Tests for the brute-force discord minimization."""

    def test_examples(self):
        self.assertAlmostEqual(discord_numeric(xstate(BELL, 1.0)).quantum_discord, 1.0, delta=2e-3)
        self.assertAlmostEqual(
            discord_numeric(xstate(BellDiagonalParams(0, 0, 0.5), 1.0)).quantum_discord,
            0.0,
            delta=2e-3,
        )
        self.assertAlmostEqual(
            discord_numeric(xstate(FIG2, 1.0)).quantum_discord,
            quantum_discord(FIG2, 1.0, 0.0),
            delta=2e-3,
        )

    def test_matches_closed_form_for_real_amplitudes(self):
        for c, F, _ in random_inputs(8, 30, margin=0.01):
            result = discord_numeric(xstate(c, math.sqrt(F)))
            self.assertAlmostEqual(result.quantum_discord, quantum_discord(c, F, 0.0), delta=2e-3)
            self.assertAlmostEqual(np.linalg.norm(result.direction), 1.0)

    def test_matches_closed_form_where_phase_factor_is_one(self):
        for c, F, _ in random_inputs(21, 100, margin=0.01):
            for alpha in (0.0, math.pi / 2, math.pi):
                result = discord_numeric(xstate(c, amplitude(F, alpha)))
                self.assertAlmostEqual(
                    result.quantum_discord,
                    quantum_discord(c, F, alpha),
                    delta=2e-3,
                    msg=f"c={c.as_tuple()} F={F} alpha={alpha}",
                )

    def test_phase_invariance(self):
        alphas = np.linspace(0.0, math.pi, 9)
        diagnostic = discord_alpha_diagnostic(FIG2, 1.0, alphas)
        self.assertLess(diagnostic.numeric_variation, 2e-3)
        self.assertGreater(diagnostic.closed_form_variation, 0.0)
        self.assertAlmostEqual(diagnostic.closed_form[0], diagnostic.numeric[0], delta=2e-3)
        self.assertEqual(len(diagnostic.to_dict()["alphas"]), 9)
        self.assertGreaterEqual(diagnostic.max_discrepancy, diagnostic.closed_form_variation / 2 - 2e-3)

    def test_grid_size_checked(self):
        with self.assertRaises(ValueError):
            discord_numeric(xstate(FIG2, 1.0), coarse_grid=1)


class TestRecord(unittest.TestCase):
    """Tests for CorrelationRecord and zero candidates."""

    def test_to_dict_flattens_lambdas(self):
        row = correlation_record(FIG2, 0.5).to_dict()
        self.assertNotIn("lambdas", row)
        self.assertEqual(
            sorted(row),
            sorted(["F", "alpha", "Q", "CC", "MI", "REE", "concurrence", "l1", "l2", "l3", "l4"]),
        )

    def test_check_invariants_reports_names(self):
        record = CorrelationRecord(
            F=1.0, alpha=0.0, lambdas=(0.5, 0.5, 0.1, 0.0), Q=-0.5, CC=0.3, MI=0.5, REE=0.0, concurrence=0.0
        )
        self.assertEqual(record.check_invariants(), ["lambda_sum", "cc_identity", "discord_bounds"])

    def test_principal_phase(self):
        record = correlation_record(FIG2, complex(-0.5, -0.0))
        self.assertAlmostEqual(record.alpha, math.pi)
        self.assertAlmostEqual(record.F, 0.25)

    def test_zero_candidates(self):
        self.assertEqual(discord_zero_candidates([0.5, 0.0005, 0.3, 0.2, 0.0, 0.1]), [1, 4])
        self.assertEqual(discord_zero_candidates([0.0, 0.2]), [0])
        self.assertEqual(discord_zero_candidates([0.5, 0.4]), [])


if __name__ == "__main__":
    unittest.main()
