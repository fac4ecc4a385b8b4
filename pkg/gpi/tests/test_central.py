import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from pydantic import ValidationError

from ..central import (
    GpiConfig,
    Scenario,
    build_modified_laplacian,
    epsilon_sweep,
    init_central,
    run_centralized,
    run_power_iteration,
    scenario_settled_at,
    select_branch,
    step_central,
)
from ..exceptions import AssumptionViolation, NonConvergence
from ..graphs import WeightedDigraph
from ..reference_networks import EXAMPLE_1, EXAMPLE_2, TRI_COMPLEX, TRI_REAL
from ..spectral import DominantKind
from .fuzz import fuzz_delta, fuzz_graphs, well_posed


def reference_config(network, **overrides):
    fields = {'delta': network.delta, 'epsilon': network.epsilon, 'x0': network.x0}
    fields.update(overrides)
    return GpiConfig(**fields)


class GpiConfigTests(SimpleTestCase):
    def test_field_constraints(self):
        for fields in ({'delta': 0.1, 'epsilon': 0.0}, {'delta': -1.0, 'epsilon': 1e-3},
                       {'delta': 0.1, 'epsilon': 1e-3, 'max_iter': 2}):
            with self.subTest(fields=fields), self.assertRaises(ValidationError):
                GpiConfig(**fields)

    def test_delta_checked_against_graph(self):
        g = EXAMPLE_1.graph()
        with self.assertRaises(AssumptionViolation):
            GpiConfig(delta=0.5, epsilon=1e-3).check_against(g)
        with self.assertRaises(AssumptionViolation):
            GpiConfig(delta=0.2, epsilon=1e-3, x0=(1.0, 2.0)).check_against(g)
        GpiConfig(delta=0.2, epsilon=1e-3).check_against(g)


class SelectBranchTests(SimpleTestCase):
    def test_ties_go_to_the_real_branch(self):
        d, lam, scenario = select_branch(0.1, 0.1, math.e, 2.0, math.nan, 0.5)
        self.assertEqual(scenario, Scenario.REAL)
        self.assertEqual(d, 0.1)
        self.assertAlmostEqual(lam, 0.0)

    def test_imaginary_branch_uses_lam_hat(self):
        d, lam, scenario = select_branch(0.3, 0.01, 5.0, 1.0, math.nan, 0.25)
        self.assertEqual(scenario, Scenario.IMAGINARY)
        self.assertEqual(d, 0.01)
        self.assertAlmostEqual(lam, 4.0)

    def test_unusable_magnitude_keeps_previous_estimate(self):
        for bad in (0.0, -1.0, math.nan):
            _, lam, _ = select_branch(0.5, 0.1, 2.0, bad, 1.25, 0.3)
            self.assertEqual(lam, 1.25)


class StepCentralTests(SimpleTestCase):
    def setUp(self):
        self.Lt = build_modified_laplacian(EXAMPLE_1.graph(), EXAMPLE_1.delta)
        self.cfg = reference_config(EXAMPLE_1)

    def test_first_step(self):
        state = init_central(self.Lt, self.cfg)
        self.assertEqual(state.k, 0)
        self.assertEqual(state.d_next, self.cfg.epsilon)
        state = step_central(state, self.Lt)
        x0 = np.asarray(EXAMPLE_1.x0) / np.linalg.norm(EXAMPLE_1.x0)
        xbar = self.Lt.matrix @ x0
        assert_allclose(state.x_cur, xbar / np.linalg.norm(xbar), atol=1e-14)
        assert_allclose(state.x_prev, x0)
        self.assertIsNone(state.x_prev2)
        self.assertEqual(state.d_hat, 1.0)
        cosine = abs(np.dot(x0, xbar)) / np.linalg.norm(xbar)
        self.assertAlmostEqual(state.d_check, math.sqrt(1 - cosine ** 2), places=12)
        self.assertEqual(state.scenario, Scenario.REAL)

    def test_iterates_stay_unit(self):
        state = init_central(self.Lt, self.cfg)
        for _ in range(10):
            state = step_central(state, self.Lt)
            self.assertAlmostEqual(np.linalg.norm(state.x_cur), 1.0, places=12)
            self.assertLessEqual(state.d_next, min(state.d_check, state.d_hat))

    def test_raw_matrix_accepted(self):
        state = init_central(self.Lt, self.cfg)
        assert_allclose(step_central(state, self.Lt.matrix).x_cur, step_central(state, self.Lt).x_cur)


class ReferenceRunTests(SimpleTestCase):
    def test_complex_pair_network(self):
        result = run_centralized(EXAMPLE_1.graph(), reference_config(EXAMPLE_1))
        self.assertTrue(result.converged)
        self.assertEqual(result.scenario, Scenario.IMAGINARY)
        self.assertAlmostEqual(result.estimate, 1.192, delta=5e-3)
        self.assertGreaterEqual(result.iterations, 32)
        self.assertLessEqual(result.iterations, 60)
        self.assertLessEqual(scenario_settled_at(result.trace), 20)
        # the one-dimensional distance keeps rotating with the dominant pair
        self.assertGreater(min(r.d_check for r in result.trace[-10:]), 2 * EXAMPLE_1.epsilon)
        self.assertLess(result.trace[-1].d_hat, EXAMPLE_1.epsilon)

    def test_real_network(self):
        result = run_centralized(EXAMPLE_2.graph(), reference_config(EXAMPLE_2))
        self.assertTrue(result.converged)
        self.assertEqual(result.scenario, Scenario.REAL)
        self.assertAlmostEqual(result.estimate, 1.255, delta=5e-3)
        self.assertGreaterEqual(result.iterations, 34)
        self.assertLessEqual(result.iterations, 64)
        self.assertLessEqual(scenario_settled_at(result.trace), 20)
        self.assertLess(result.trace[-1].d_check, EXAMPLE_2.epsilon)

    def test_three_node_networks(self):
        # the deflated operator has rank two, so the 2-d subspace settles after three steps
        for network in (TRI_COMPLEX, TRI_REAL):
            with self.subTest(network=network.name):
                result = run_centralized(network.graph(), reference_config(network))
                self.assertEqual(result.scenario, Scenario.IMAGINARY)
                self.assertLessEqual(result.iterations, 4)
                self.assertAlmostEqual(result.estimate, network.gac, delta=2e-3)

    def test_trace_is_deterministic(self):
        cfg = GpiConfig(delta=EXAMPLE_2.delta, epsilon=1e-4, seed=42)
        first = run_centralized(EXAMPLE_2.graph(), cfg)
        second = run_centralized(EXAMPLE_2.graph(), cfg)
        self.assertEqual(first.trace, second.trace)

    def test_scaling_weights_scales_the_estimate(self):
        factor = 2.5
        base = run_centralized(EXAMPLE_1.graph(), reference_config(EXAMPLE_1))
        scaled = run_centralized(
            EXAMPLE_1.graph().scaled(factor), reference_config(EXAMPLE_1, delta=EXAMPLE_1.delta / factor))
        self.assertEqual(scaled.iterations, base.iterations)
        self.assertAlmostEqual(scaled.estimate, factor * base.estimate, delta=1e-8)


class FailureTests(SimpleTestCase):
    def test_non_convergence_keeps_the_partial_trace(self):
        with self.assertRaises(NonConvergence) as ctx:
            run_centralized(EXAMPLE_1.graph(), reference_config(EXAMPLE_1, max_iter=5))
        partial = ctx.exception.result
        self.assertFalse(partial.converged)
        self.assertEqual(partial.iterations, 5)
        self.assertEqual([r.k for r in partial.trace], [1, 2, 3, 4, 5])

    def test_not_strongly_connected(self):
        g = WeightedDigraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 1, 1.0)])
        with self.assertRaises(AssumptionViolation):
            run_centralized(g, GpiConfig(delta=0.4, epsilon=1e-3))


class RandomGraphTests(SimpleTestCase):
    epsilon = 1e-4

    def test_estimate_tracks_the_oracle(self):
        checked = 0
        for g in fuzz_graphs(50):
            delta = fuzz_delta(g)
            posed = well_posed(g, delta)
            if posed is None:
                continue
            report, Lt, ratio = posed
            cfg = GpiConfig(delta=delta, epsilon=self.epsilon, seed=g.n, max_iter=3000)
            result = run_power_iteration(Lt, cfg)
            tolerance = 10 * self.epsilon / (delta * (1 - ratio))
            self.assertLess(abs(result.estimate - report.gac), tolerance,
                            msg=f"n={g.n} gac={report.gac} ratio={ratio:.3f}")
            if report.kind == DominantKind.COMPLEX_PAIR:
                self.assertEqual(result.scenario, Scenario.IMAGINARY)
                self.assertLess(result.trace[-1].d_hat, self.epsilon)
            checked += 1
        self.assertGreater(checked, 0)


class SweepTests(SimpleTestCase):
    def test_smaller_thresholds_need_more_iterations(self):
        epsilons = [1e-2, 1e-3, 1e-4, 1e-5]
        rows = epsilon_sweep(EXAMPLE_2.graph(), reference_config(EXAMPLE_2), epsilons, EXAMPLE_2.gac)
        self.assertEqual([row.epsilon for row in rows], epsilons)
        iterations = [row.iterations for row in rows]
        self.assertEqual(iterations, sorted(iterations))
        self.assertLess(rows[-1].abs_error, 5e-3)

    def test_unconverged_threshold_is_reported(self):
        cfg = reference_config(EXAMPLE_2, max_iter=3)
        with self.assertLogs('gpi.central', level='WARNING'):
            rows = epsilon_sweep(EXAMPLE_2.graph(), cfg, [1e-12], EXAMPLE_2.gac)
        self.assertEqual(rows[0].iterations, 3)


class ScenarioSettledTests(SimpleTestCase):
    def test_settling_point(self):
        class Rec:
            def __init__(self, k, scenario):
                self.k, self.scenario = k, scenario

        trace = [Rec(1, 'R'), Rec(2, 'I'), Rec(3, 'R'), Rec(4, 'I'), Rec(5, 'I')]
        self.assertEqual(scenario_settled_at(trace), 4)
        self.assertIsNone(scenario_settled_at([]))
