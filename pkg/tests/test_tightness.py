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

import math
import unittest

import numpy as np

from lptight.data_io import (
    Dataset,
    counterexample_dataset,
    dataset_from_scores,
    gen_attractive,
    gen_strong_singleton
)
from lptight.errors import (
    EmptyDatasetError,
    InvalidAssignmentError,
    UnsupportedModelClassError
)
from lptight.factor_graph import (
    FactorGraph,
    assignment_to_mu,
    build_score_vector
)
from lptight.ssvm import hamming_loss_vector
from lptight.tightness import (
    bound_chain_check,
    fractionality_report,
    generalization_bound,
    hinge_decomposition,
    instance_decomposition,
    integrality_margin_histogram,
    mean_decomposition,
    ramp_loss,
    random_weights_probe,
    tightness_fraction
)
from tests.models import (
    random_binary_model,
    random_labeling,
    random_multiclass_chain
)

ONES = np.ones(4)


class TestHingeDecomposition(unittest.TestCase):
    def test_counterexample(self):
        ds = counterexample_dataset()
        parts = [instance_decomposition(ds.graph, ONES, inst) for inst in ds.instances]

        np.testing.assert_allclose([0.0, 1.0], [p.relaxed_hinge for p in parts], atol=1e-8)
        np.testing.assert_allclose([0.0, 0.0], [p.exact_hinge for p in parts], atol=1e-8)
        np.testing.assert_allclose([0.0, 1.0], [p.integrality_gap for p in parts], atol=1e-8)

    def test_mean_decomposition(self):
        mean = mean_decomposition(counterexample_dataset(), ONES)
        np.testing.assert_allclose([0.5, 0.5, 0.0], list(mean), atol=1e-8)

    def test_identity_on_random_models(self):
        for seed in range(40):
            graph, theta = random_binary_model(3 + seed % 4, seed, edge_prob=0.8)
            anchor = assignment_to_mu(graph, random_labeling(graph, seed))
            parts = hinge_decomposition(graph, theta, anchor)

            self.assertAlmostEqual(parts.relaxed_hinge, parts.integrality_gap + parts.exact_hinge, places=9)
            self.assertGreaterEqual(parts.integrality_gap, -1e-9)
            self.assertGreaterEqual(parts.exact_hinge, -1e-9)

    def test_rejects_fractional_anchor(self):
        graph, theta = random_binary_model(3, seed=0)
        with self.assertRaises(InvalidAssignmentError):
            hinge_decomposition(graph, theta, np.full(graph.q, 0.5))

    def test_unlabeled_instance(self):
        ds = counterexample_dataset()
        with self.assertRaises(InvalidAssignmentError):
            instance_decomposition(ds.graph, ONES, ds.instances[0].with_label(None))


class TestBoundChain(unittest.TestCase):
    def test_chain_is_monotone(self):
        for seed in range(40):
            graph, theta = random_binary_model(3 + seed % 4, seed, edge_prob=0.8)
            y = random_labeling(graph, seed)
            chain = bound_chain_check(graph, theta, assignment_to_mu(graph, y), hamming_loss_vector(graph, y))
            for low, high in zip(chain, chain[1:]):
                self.assertLessEqual(low, high + 1e-9)

    def test_counterexample_chain(self):
        ds = counterexample_dataset()
        inst = ds.instances[1]
        theta = build_score_vector(ONES, inst)
        chain = bound_chain_check(ds.graph, theta, assignment_to_mu(ds.graph, inst.label),
                                  np.zeros(ds.graph.q))

        self.assertAlmostEqual(1.0, chain.integrality_gap, places=8)
        self.assertAlmostEqual(1.0, chain.relaxed_hinge, places=8)
        self.assertAlmostEqual(1.0, chain.loss_augmented, places=8)

    def test_rejects_negative_loss(self):
        graph, theta = random_binary_model(3, seed=0)
        with self.assertRaises(ValueError):
            bound_chain_check(graph, theta, assignment_to_mu(graph, (0, 0, 0)), np.full(graph.q, -1.0))


class TestRampLoss(unittest.TestCase):
    def test_pieces(self):
        self.assertEqual(1.0, ramp_loss(0.5, 1.0))
        self.assertEqual(1.0, ramp_loss(0.0, 1.0))
        self.assertEqual(0.5, ramp_loss(-0.5, 1.0))
        self.assertEqual(0.0, ramp_loss(-1.0, 1.0))
        self.assertEqual(0.0, ramp_loss(-np.inf, 0.1))

    def test_dominates_fractionality_loss(self):
        for D in np.linspace(-2.0, 2.0, 41):
            self.assertGreaterEqual(ramp_loss(D, 0.3), float(D > 0))

    def test_grows_with_gamma(self):
        gammas = [0.1, 0.3, 1.0, 3.0]
        for D in np.linspace(-4.0, 1.0, 26):
            values = [ramp_loss(D, g) for g in gammas]
            for low, high in zip(values, values[1:]):
                self.assertLessEqual(low, high)
            self.assertTrue(0.0 <= values[0] and values[-1] <= 1.0)

    def test_rejects_non_positive_gamma(self):
        with self.assertRaises(ValueError):
            ramp_loss(0.0, 0.0)


class TestFractionalityReport(unittest.TestCase):
    def test_loose_instance(self):
        ds = counterexample_dataset()
        report = fractionality_report(ds.graph, build_score_vector(ONES, ds.instances[1]), 0.1)

        self.assertAlmostEqual(2.0, report.I_star, places=9)
        self.assertAlmostEqual(3.0, report.F_star, places=9)
        self.assertAlmostEqual(1.0, report.D, places=9)
        self.assertEqual(1, report.loss_L)
        self.assertEqual(1.0, report.ramp_phi)
        self.assertTrue(report.exact)

    def test_forest_is_always_tight(self):
        graph = FactorGraph.chain(4)
        theta = np.random.RandomState(1).normal(size=graph.q)
        report = fractionality_report(graph, theta, 1.0)

        self.assertEqual(-np.inf, report.D)
        self.assertEqual(0, report.loss_L)
        self.assertEqual(0.0, report.ramp_phi)

    def test_degrades_outside_binary_pairwise(self):
        graph, theta = random_multiclass_chain(3, 3, seed=0)
        report = fractionality_report(graph, theta, 1.0)

        self.assertFalse(report.exact)
        self.assertIsNone(report.F_star)
        self.assertIsNone(report.ramp_phi)
        self.assertEqual(0, report.loss_L)

    def test_strict_mode(self):
        graph, theta = random_multiclass_chain(3, 3, seed=0)
        with self.assertRaises(UnsupportedModelClassError):
            fractionality_report(graph, theta, 1.0, strict=True)

    def test_scaling_scores_scales_every_term(self):
        for seed in range(8):
            graph, theta = random_binary_model(4, seed, scale=3.0)
            anchor = assignment_to_mu(graph, random_labeling(graph, seed))
            report = fractionality_report(graph, theta, 1.0)
            parts = hinge_decomposition(graph, theta, anchor)

            for t in (0.5, 4.0):
                scaled = fractionality_report(graph, t * theta, 1.0)
                self.assertAlmostEqual(t * report.I_star, scaled.I_star, delta=1e-7)
                self.assertAlmostEqual(t * report.F_star, scaled.F_star, delta=1e-7)
                self.assertAlmostEqual(t * report.D, scaled.D, delta=1e-7)
                self.assertEqual(report.loss_L, scaled.loss_L)

                scaled_parts = hinge_decomposition(graph, t * theta, anchor)
                np.testing.assert_allclose(t * np.array(parts), np.array(scaled_parts), atol=1e-7)

    def test_rejects_non_positive_gamma(self):
        graph, theta = random_binary_model(3, seed=0)
        with self.assertRaises(ValueError):
            fractionality_report(graph, theta, -1.0)


def mixed_dataset():
    """One frustrated triangle (loose) and one attractive triangle (tight), as score vectors."""
    graph = FactorGraph.fully_connected(3)
    loose = np.zeros(graph.q)
    tight = np.zeros(graph.q)
    for c in range(graph.n_factors):
        loose[graph.factor_coordinate(c, (0, 1))] = 1.0
        loose[graph.factor_coordinate(c, (1, 0))] = 1.0
        tight[graph.factor_coordinate(c, (1, 1))] = 1.0
    tight[graph.variable_coordinate(0, 1)] = 0.5
    return dataset_from_scores(graph, [loose, tight])


class TestTightnessFraction(unittest.TestCase):
    def test_attractive_models_are_tight(self):
        ds = gen_attractive(n_vars=5, n_instances=6, seed=2)
        report = tightness_fraction(ds, np.ones(1))

        self.assertEqual(1.0, report.tight_fraction)
        self.assertEqual(1.0, report.near_integral_fraction)
        self.assertEqual(6, report.n_instances)

    def test_mixed_dataset(self):
        report = tightness_fraction(mixed_dataset(), np.ones(1))

        self.assertEqual(0.5, report.tight_fraction)
        self.assertEqual(0.5, report.near_integral_fraction)

    def test_near_integral_threshold(self):
        report = tightness_fraction(mixed_dataset(), np.ones(1), max_fraction=1.0)
        self.assertEqual(1.0, report.near_integral_fraction)

    def test_empty_dataset(self):
        with self.assertRaises(EmptyDatasetError):
            tightness_fraction(Dataset(FactorGraph.chain(2), []), np.ones(1))


class TestMarginHistogram(unittest.TestCase):
    def test_strong_singleton_margins_are_positive(self):
        ds = gen_strong_singleton(n_vars=4, n_instances=5, seed=1)
        histogram = integrality_margin_histogram(ds, np.ones(1), bins=4)

        self.assertEqual(5, len(histogram.margins))
        self.assertTrue(all(m > 0 for m in histogram.margins))
        self.assertEqual(5, sum(histogram.counts))
        self.assertEqual(5, len(histogram.bin_edges))
        self.assertEqual(0, histogram.skipped)

    def test_forest_margins_are_not_binned(self):
        graph = FactorGraph.chain(3)
        thetas = np.random.RandomState(0).normal(size=(3, graph.q))
        histogram = integrality_margin_histogram(dataset_from_scores(graph, thetas), np.ones(1))

        self.assertEqual([np.inf] * 3, histogram.margins)
        self.assertEqual([], histogram.counts)

    def test_multiclass_instances_are_skipped(self):
        graph, theta = random_multiclass_chain(3, 3, seed=0)
        histogram = integrality_margin_histogram(dataset_from_scores(graph, [theta, -theta]), np.ones(1))

        self.assertEqual(2, histogram.skipped)
        self.assertEqual([], histogram.margins)

    def test_loose_instance_has_negative_margin(self):
        histogram = integrality_margin_histogram(mixed_dataset(), np.ones(1), bins=2)
        self.assertAlmostEqual(-1.0, histogram.margins[0], places=9)
        self.assertGreater(histogram.margins[1], 0.0)


class TestRandomWeightsProbe(unittest.TestCase):
    def test_probe_is_seeded(self):
        ds = counterexample_dataset()
        first = random_weights_probe(ds, trials=4, seed=3)
        second = random_weights_probe(ds, trials=4, seed=3)

        self.assertEqual(4, len(first.fractions))
        self.assertEqual(first, second)
        self.assertTrue(0.0 <= first.mean <= 1.0)


class TestGeneralizationBound(unittest.TestCase):
    def test_terms(self):
        report = generalization_bound(100, 4, 1.0, 1.0, 1.0, 0.05, 0.2)

        self.assertAlmostEqual(1.6, report.rademacher_term, places=12)
        self.assertAlmostEqual(math.sqrt(8.0 * math.log(40.0) / 100.0), report.confidence_term, places=12)
        self.assertAlmostEqual(0.2 + report.rademacher_term + report.confidence_term, report.bound_value, places=12)

    def test_bound_shrinks_with_samples_and_margin(self):
        base = generalization_bound(100, 10, 2.0, 1.5, 0.5, 0.1, 0.3).bound_value
        self.assertLess(generalization_bound(400, 10, 2.0, 1.5, 0.5, 0.1, 0.3).bound_value, base)
        self.assertLess(generalization_bound(100, 10, 2.0, 1.5, 1.0, 0.1, 0.3).bound_value, base)

    def test_constant_scales_complexity(self):
        one = generalization_bound(100, 4, 1.0, 1.0, 1.0, 0.05, 0.2)
        three = generalization_bound(100, 4, 1.0, 1.0, 1.0, 0.05, 0.2, constant=3.0)
        self.assertAlmostEqual(3.0 * one.rademacher_term, three.rademacher_term, places=12)

    def test_rejects_bad_arguments(self):
        bad = [
            (0, 4, 1.0, 1.0, 1.0, 0.05, 0.2),
            (10, 4, -1.0, 1.0, 1.0, 0.05, 0.2),
            (10, 4, 1.0, 1.0, 0.0, 0.05, 0.2),
            (10, 4, 1.0, 1.0, 1.0, 1.0, 0.2),
            (10, 4, 1.0, 1.0, 1.0, 0.05, 1.5)
        ]
        for args in bad:
            with self.assertRaises(ValueError):
                generalization_bound(*args)


if __name__ == '__main__':
    unittest.main()
