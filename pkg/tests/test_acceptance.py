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

"""Larger sweeps over random models and end-to-end training runs.

These take minutes; set LPTIGHT_SLOW_TESTS=1 to run them.
"""

import math
import os
import unittest

import numpy as np

from lptight.data_io import (
    counterexample_dataset,
    gen_multilabel,
    gen_strong_singleton,
    randomize_labels
)
from lptight.factor_graph import (
    assignment_to_mu,
    build_score_vector
)
from lptight.inference import (
    exact_map,
    exhaustive_map,
    ilp_map,
    lp_map
)
from lptight.minimal_rep import (
    BALANCED_PROP1,
    SINGLETON_PROP2,
    brute_force_F_star,
    prop1_certificate,
    prop2_certificate
)
from lptight.ssvm import (
    TrainConfig,
    bcfw_train,
    hamming_loss_vector,
    predict,
    task_accuracy
)
from lptight.tightness import (
    bound_chain_check,
    generalization_bound,
    hinge_decomposition,
    random_weights_probe,
    tightness_fraction
)
from tests.models import (
    random_balanced_model,
    random_binary_model,
    random_labeling
)

SLOW = os.environ.get('LPTIGHT_SLOW_TESTS') == '1'


def sweep(count, max_vars=8):
    for seed in range(count):
        n_vars = 3 + seed % (max_vars - 2)
        graph, theta = random_binary_model(n_vars, seed, edge_prob=0.7, scale=2.0)
        yield seed, graph, theta


@unittest.skipUnless(SLOW, 'set LPTIGHT_SLOW_TESTS=1 to run')
class TestModelSweeps(unittest.TestCase):
    def test_counterexample_values(self):
        ds = counterexample_dataset()
        w = np.ones(4)
        decompositions = [hinge_decomposition(ds.graph, build_score_vector(w, inst),
                                              assignment_to_mu(ds.graph, inst.label)) for inst in ds.instances]

        np.testing.assert_allclose([0.0, 1.0], [d.relaxed_hinge for d in decompositions], atol=1e-8)
        np.testing.assert_allclose([0.0, 0.0], [d.exact_hinge for d in decompositions], atol=1e-8)
        np.testing.assert_allclose([0.0, 1.0], [d.integrality_gap for d in decompositions], atol=1e-8)

    def test_decomposition_and_bound_chain(self):
        for seed, graph, theta in sweep(500, max_vars=10):
            y = random_labeling(graph, seed)
            anchor = assignment_to_mu(graph, y)
            d = hinge_decomposition(graph, theta, anchor)

            self.assertAlmostEqual(d.relaxed_hinge, d.integrality_gap + d.exact_hinge, delta=1e-9)
            self.assertTrue(min(d) >= -1e-9)

            chain = bound_chain_check(graph, theta, anchor, hamming_loss_vector(graph, y))
            for low, high in zip(chain, chain[1:]):
                self.assertLessEqual(low, high + 1e-9)

    def test_simplex_vertices_are_half_integral(self):
        for _, graph, theta in sweep(500, max_vars=10):
            mu = lp_map(graph, theta).mu
            distance = np.min(np.abs(mu[:, None] - np.array([0.0, 0.5, 1.0])[None, :]), axis=1)
            self.assertLessEqual(distance.max(), 1e-6)

    def test_exact_solvers_agree(self):
        for _, graph, theta in sweep(200):
            self.assertAlmostEqual(exhaustive_map(graph, theta).value, ilp_map(graph, theta).value, delta=1e-9)

    def test_fractional_oracle_dominates_vertices(self):
        checked = 0
        for seed in range(100):
            graph, theta = random_binary_model(3 + seed % 2, seed, scale=3.0)
            relaxed = lp_map(graph, theta)
            if not relaxed.integral:
                checked += 1
                self.assertGreaterEqual(brute_force_F_star(graph, theta) + 1e-9, relaxed.value)
        self.assertGreater(checked, 0)

    def test_balanced_models_keep_half_margin(self):
        for seed in range(100):
            graph, theta, _ = random_balanced_model(3 + seed % 6, seed)
            certificate = prop1_certificate(graph, theta)
            self.assertEqual(BALANCED_PROP1, certificate.kind)

            margin = exact_map(graph, theta).value - brute_force_F_star(graph, theta, vertices_only=False)
            self.assertGreaterEqual(margin, certificate.gamma - 1e-9)

    def test_strong_singleton_models_keep_half_beta(self):
        for seed in range(10):
            ds = gen_strong_singleton(n_vars=3 + seed % 6, n_instances=10, seed=seed)
            for inst in ds.instances:
                theta = inst.features[:, 0]
                certificate = prop2_certificate(ds.graph, theta)
                self.assertEqual(SINGLETON_PROP2, certificate.kind)

                margin = exact_map(ds.graph, theta).value - brute_force_F_star(ds.graph, theta, vertices_only=False)
                self.assertGreaterEqual(margin, certificate.witness['beta'] / 2.0 - 1e-9)

    def test_bound_shrinks_with_data_and_margin(self):
        args = dict(M=100, q=40, B=3.0, R_hat=2.0, gamma=0.5, delta=0.05, empirical_ramp_mean=0.1)
        base = generalization_bound(**args)

        self.assertLess(generalization_bound(**dict(args, M=400)).bound_value, base.bound_value)
        self.assertLess(generalization_bound(**dict(args, gamma=1.0)).bound_value, base.bound_value)
        self.assertAlmostEqual(math.sqrt(8 * math.log(2 / 0.05) / 100), base.confidence_term, delta=1e-12)


@unittest.skipUnless(SLOW, 'set LPTIGHT_SLOW_TESTS=1 to run')
class TestTightnessInducingTraining(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.ds = gen_multilabel(n_labels=8, n_train=100, n_test=100, label_noise=0.1, seed=0)
        cls.train, cls.test = cls.ds.split('train'), cls.ds.split('test')
        cls.cfg = TrainConfig(passes=30, seed=0)
        cls.state, cls.records = bcfw_train(cls.train, cls.cfg, cls.test)

    def f1(self, data, w):
        predictions = [predict(data.graph, build_score_vector(w, inst)) for inst in data.instances]
        return task_accuracy(data.labels(), predictions)

    def test_training_makes_relaxation_tight(self):
        train_tight = tightness_fraction(self.train, self.state.w).tight_fraction
        test_tight = tightness_fraction(self.test, self.state.w).tight_fraction

        self.assertGreaterEqual(train_tight, 0.9)
        self.assertLessEqual(abs(train_tight - test_tight), 0.15)

    def test_random_weights_are_less_tight(self):
        probe = random_weights_probe(self.train, trials=20, seed=1)
        self.assertLess(probe.mean, tightness_fraction(self.train, self.state.w).tight_fraction)

    def test_random_labels_stay_tight_but_do_not_generalize(self):
        shuffled = randomize_labels(self.ds, seed=2, split='train')
        state, _ = bcfw_train(shuffled.split('train'), self.cfg)

        true_tight = tightness_fraction(self.train, self.state.w).tight_fraction
        random_tight = tightness_fraction(shuffled.split('train'), state.w).tight_fraction
        self.assertLessEqual(abs(true_tight - random_tight), 0.1)
        self.assertGreaterEqual(self.f1(self.test, self.state.w) - self.f1(self.test, state.w), 0.2)


if __name__ == '__main__':
    unittest.main()
