import networkx as nx
import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from ..exceptions import GraphFormatError
from ..graphs import (
    WeightedDigraph,
    default_delta,
    dump_edge_list,
    from_json,
    is_strongly_connected,
    laplacian,
    load_edge_list,
    max_weighted_indegree,
    random_strongly_connected,
    to_json,
    validate_delta,
)
from ..reference_networks import EXAMPLE_1


class LoadEdgeListTests(SimpleTestCase):
    def test_vertex_count_and_in_neighbors(self):
        g = load_edge_list("# triangle\n0,1,0.5\n1,2,1.5\n\n2,0,2.0\n0,2,0.25\n")
        self.assertEqual(g.n, 3)
        self.assertEqual(g.in_neighbors[2], ((0, 0.25), (1, 1.5)))
        self.assertEqual(g.in_neighbors[0], ((2, 2.0),))

    def test_self_loop_reports_line(self):
        with self.assertRaises(GraphFormatError) as ctx:
            load_edge_list("0,1,1.0\n2,2,1.0\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn("self-loop", str(ctx.exception))

    def test_nonpositive_weight(self):
        with self.assertRaises(GraphFormatError) as ctx:
            load_edge_list("0,1,1.0\n1,0,0\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_duplicate_edge(self):
        with self.assertRaises(GraphFormatError) as ctx:
            load_edge_list("0,1,1.0\n1,0,1.0\n0,1,3.0\n")
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn("line 1", str(ctx.exception))

    def test_malformed_rows(self):
        for text in ("0,1\n", "a,1,1.0\n", "0,1,inf\n", "-1,0,1.0\n", "# only a comment\n"):
            with self.subTest(text=text), self.assertRaises(GraphFormatError):
                load_edge_list(text)

    def test_dump_then_load_keeps_every_weight(self):
        g = random_strongly_connected(7, 0.4, seed=3)
        reloaded = load_edge_list(dump_edge_list(g))
        self.assertEqual(reloaded.edges, g.edges)

    def test_header_keeps_vertices_without_edges(self):
        g = WeightedDigraph.from_weight_matrix([[0, 1.5, 0, 0], [2.0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
        reloaded = load_edge_list(dump_edge_list(g))
        self.assertEqual(reloaded.n, 4)
        self.assertEqual(reloaded.edges, g.edges)
        assert_array_equal(reloaded.weight_matrix(), g.weight_matrix())

    def test_header_smaller_than_the_ids_used(self):
        with self.assertRaises(GraphFormatError) as ctx:
            load_edge_list("# n=2\n0,1,1.0\n1,2,1.0\n")
        self.assertEqual(ctx.exception.line, 1)


class WeightedDigraphTests(SimpleTestCase):
    def test_weight_matrix_orientation(self):
        # W[i][j] is the weight of the edge j -> i
        g = WeightedDigraph.from_weight_matrix([[0, 2.0], [0.5, 0]])
        self.assertEqual(sorted(g.edges), [(0, 1, 0.5), (1, 0, 2.0)])
        self.assertEqual(g.out_neighbors(), ((1,), (0,)))
        assert_array_equal(g.weight_matrix(), [[0, 2.0], [0.5, 0]])

    def test_rejects_out_of_range_and_tiny_graphs(self):
        with self.assertRaises(GraphFormatError):
            WeightedDigraph.from_edges(2, [(0, 2, 1.0)])
        with self.assertRaises(GraphFormatError):
            WeightedDigraph.from_edges(1, [])
        with self.assertRaises(GraphFormatError):
            WeightedDigraph.from_weight_matrix([[0, 1, 0]])

    def test_laplacian_uses_weighted_in_degree(self):
        g = EXAMPLE_1.graph()
        L = laplacian(g)
        assert_allclose(L.sum(axis=1), 0.0, atol=1e-15)
        in_degree = dict(g.to_networkx().in_degree(weight='weight'))
        assert_allclose(np.diag(L), [in_degree[i] for i in range(g.n)])
        self.assertAlmostEqual(max_weighted_indegree(g), 3.15)

    def test_json_export(self):
        g = random_strongly_connected(5, 0.3, seed=11)
        self.assertEqual(from_json(to_json(g)).edges, g.edges)
        with self.assertRaises(GraphFormatError):
            from_json('{"edges": []}')
        with self.assertRaises(GraphFormatError):
            from_json('not json')

    def test_scaled(self):
        g = EXAMPLE_1.graph()
        assert_allclose(laplacian(g.scaled(2.5)), 2.5 * laplacian(g))


class DeltaTests(SimpleTestCase):
    def setUp(self):
        self.g = EXAMPLE_1.graph()

    def test_admissible(self):
        self.assertEqual(validate_delta(self.g, 0.235), (True, None))
        ok, _ = validate_delta(self.g, default_delta(self.g))
        self.assertTrue(ok)

    def test_boundary_and_negative_are_rejected(self):
        for delta in (1 / 3.15, 0.5, 0.0, -0.1):
            ok, violation = validate_delta(self.g, delta)
            self.assertFalse(ok)
            self.assertAlmostEqual(violation.upper, 1 / 3.15)
            self.assertIn("open interval", violation.message)


class ConnectivityTests(SimpleTestCase):
    def test_path_is_not_strongly_connected(self):
        g = WeightedDigraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
        self.assertFalse(is_strongly_connected(g))

    def test_generator_is_seeded_and_strongly_connected(self):
        for seed in range(30):
            n = 2 + seed % 9
            g = random_strongly_connected(n, 0.3, seed)
            self.assertTrue(nx.is_strongly_connected(g.to_networkx()))
            self.assertTrue(all(0 < w <= 1 for _, _, w in g.edges))
            self.assertEqual(g.edges, random_strongly_connected(n, 0.3, seed).edges)

    def test_generator_without_extra_edges_is_a_cycle(self):
        g = random_strongly_connected(6, 0.0, seed=4)
        self.assertEqual(len(g.edges), 6)
        self.assertTrue(is_strongly_connected(g))

    def test_generator_rejects_single_vertex(self):
        with self.assertRaises(GraphFormatError):
            random_strongly_connected(1, 0.5, 0)
