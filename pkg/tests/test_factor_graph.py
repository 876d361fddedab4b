# MIT License
#
# Copyright (c) 2018 Jared Gillespie
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import unittest

import numpy as np

from lptight.errors import (
    DimensionMismatchError,
    InvalidAssignmentError
)
from lptight.factor_graph import (
    FactorGraph,
    Instance,
    assignment_to_mu,
    build_score_vector,
    decode_assignment,
    feature_norm_bound,
    joint_feature,
    score_of,
    weight_norm
)
from tests.models import all_labelings


class TestFactorGraph(unittest.TestCase):
    def test_triangle_layout(self):
        graph = FactorGraph.fully_connected(3)

        self.assertEqual(((0, 1), (0, 2), (1, 2)), graph.factors)
        self.assertEqual(18, graph.q)
        self.assertEqual(3, graph.variable_coordinate(1, 1))
        self.assertEqual(8, graph.factor_coordinate(0, (1, 0)))
        self.assertEqual(slice(10, 14), graph.factor_slice(1))

    def test_describe_coordinate_inverts_coordinates(self):
        graph = FactorGraph([2, 3, 2], [(0, 1), (1, 2)])
        for i in range(graph.n_vars):
            for s in range(graph.cardinalities[i]):
                self.assertEqual(('variable', i, (s,)), graph.describe_coordinate(graph.variable_coordinate(i, s)))
        for c in range(graph.n_factors):
            for assignment in graph.factor_assignments(c):
                k = graph.factor_coordinate(c, assignment)
                self.assertEqual(('factor', c, assignment), graph.describe_coordinate(k))

    def test_describe_coordinate_out_of_range(self):
        with self.assertRaises(IndexError):
            FactorGraph.chain(2).describe_coordinate(8)

    def test_higher_arity_factor(self):
        graph = FactorGraph([2, 3, 4], [(0, 1, 2)])

        self.assertEqual(24, graph.state_space_size)
        self.assertEqual(9 + 24, graph.q)
        self.assertFalse(graph.is_binary_pairwise)
        self.assertFalse(graph.is_forest)
        self.assertEqual(9 + 1 * 12 + 2 * 4 + 3, graph.factor_coordinate(0, (1, 2, 3)))

    def test_is_forest(self):
        self.assertTrue(FactorGraph.chain(5).is_forest)
        self.assertTrue(FactorGraph.from_edges(4, [(0, 1), (2, 3)]).is_forest)
        self.assertFalse(FactorGraph.fully_connected(3).is_forest)
        self.assertFalse(FactorGraph.from_edges(2, [(0, 1), (1, 0)]).is_forest)

    def test_neighbors(self):
        graph = FactorGraph.fully_connected(3)
        self.assertEqual([(0, 0), (2, 2)], graph.neighbors(1))

    def test_grid(self):
        graph = FactorGraph.grid(2, 3)

        self.assertEqual(6, graph.n_vars)
        self.assertEqual(((0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)), graph.factors)
        self.assertEqual([1, 3], sorted(j for _, j in graph.neighbors(0)))
        self.assertEqual([1, 3, 5], sorted(j for _, j in graph.neighbors(4)))
        self.assertFalse(graph.is_forest)
        self.assertTrue(FactorGraph.grid(1, 4).is_forest)

    def test_grid_rejects_empty_side(self):
        with self.assertRaises(ValueError):
            FactorGraph.grid(0, 3)

    def test_dict_round_trip(self):
        graph = FactorGraph([2, 3], [(1, 0)])
        self.assertEqual(graph, FactorGraph.from_dict(graph.to_dict()))

    def test_graphs_are_hashable(self):
        self.assertEqual(hash(FactorGraph.chain(3)), hash(FactorGraph.chain(3)))

    def test_rejects_unary_cardinality(self):
        with self.assertRaises(ValueError):
            FactorGraph([2, 1])

    def test_rejects_repeated_scope_variable(self):
        with self.assertRaises(ValueError):
            FactorGraph([2, 2], [(0, 0)])

    def test_rejects_unknown_scope_variable(self):
        with self.assertRaises(ValueError):
            FactorGraph([2, 2], [(0, 2)])

    def test_factor_coordinate_rejects_bad_state(self):
        with self.assertRaises(InvalidAssignmentError):
            FactorGraph.chain(2).factor_coordinate(0, (0, 2))


class TestAssignments(unittest.TestCase):
    def test_mu_is_indicator_of_labeling(self):
        graph = FactorGraph([2, 3, 2], [(0, 1), (1, 2), (0, 2)])
        for y in all_labelings(graph):
            mu = assignment_to_mu(graph, y)
            self.assertEqual(graph.n_vars + graph.n_factors, mu.sum())
            self.assertEqual(tuple(y), decode_assignment(graph, mu))

    def test_rejects_short_assignment(self):
        with self.assertRaises(InvalidAssignmentError):
            assignment_to_mu(FactorGraph.chain(3), (0, 1))

    def test_rejects_out_of_range_state(self):
        with self.assertRaises(InvalidAssignmentError):
            assignment_to_mu(FactorGraph.chain(3), (0, 1, 2))

    def test_rejects_fractional_state(self):
        with self.assertRaises(InvalidAssignmentError):
            assignment_to_mu(FactorGraph.chain(2), (0.5, 1))

    def test_active_coordinates_match_mu(self):
        graph = FactorGraph.fully_connected(4)
        labelings = np.array(all_labelings(graph))
        active = graph.active_coordinates(labelings)
        for y, coords in zip(labelings, active):
            self.assertEqual(sorted(coords.tolist()), np.flatnonzero(assignment_to_mu(graph, y)).tolist())


class TestScores(unittest.TestCase):
    def setUp(self):
        self.graph = FactorGraph.chain(3)
        random_state = np.random.RandomState(3)
        self.inst = Instance(random_state.normal(size=(self.graph.q, 5)), (1, 0, 1))
        self.w = random_state.normal(size=5)

    def test_score_vector_is_features_times_weights(self):
        theta = build_score_vector(self.w, self.inst)
        np.testing.assert_allclose(self.inst.features.dot(self.w), theta)

    def test_joint_feature_scores_labeling(self):
        theta = build_score_vector(self.w, self.inst)
        mu = assignment_to_mu(self.graph, self.inst.label)
        phi = joint_feature(self.graph, self.inst, self.inst.label)
        self.assertAlmostEqual(score_of(theta, mu), phi.dot(self.w), places=10)

    def test_score_vector_rejects_wrong_dimension(self):
        with self.assertRaises(DimensionMismatchError):
            build_score_vector(np.ones(4), self.inst)

    def test_score_of_rejects_shape_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            score_of(np.ones(3), np.ones(4))

    def test_instance_rejects_vector_features(self):
        with self.assertRaises(DimensionMismatchError):
            Instance(np.ones(4))

    def test_instance_rejects_non_finite_features(self):
        with self.assertRaises(ValueError):
            Instance(np.array([[1.0], [np.inf]]))

    def test_instance_features_are_read_only(self):
        with self.assertRaises(ValueError):
            self.inst.features[0, 0] = 1.0

    def test_norms(self):
        inst = Instance(np.array([[3.0, 4.0], [0.0, 1.0]]))
        self.assertEqual(5.0, feature_norm_bound(inst))
        self.assertEqual(5.0, weight_norm([3.0, 4.0]))


if __name__ == '__main__':
    unittest.main()
