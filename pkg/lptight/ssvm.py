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

"""Structured SVM training with block-coordinate Frank-Wolfe under relaxed or exact loss-augmented inference."""

__all__ = ['MetricsRecord', 'TASK_LOSSES', 'TrainConfig', 'TrainState', 'bcfw_train', 'evaluate',
           'exact_objective', 'hamming_loss_vector', 'loss_vector', 'predict', 'relaxed_objective', 'task_accuracy']


import functools
import logging

import attr
import numpy as np
from sklearn.metrics import (
    accuracy_score,
    f1_score
)

from .errors import (
    ConfigValidationError,
    EmptyDatasetError,
    InvalidAssignmentError,
    NumericalError,
    TrainingError
)
from .factor_graph import (
    assignment_to_mu,
    build_score_vector,
    decode_assignment,
    score_of,
    weight_norm
)
from .inference import (
    EXACT,
    RELAXED,
    exact_map,
    loss_augmented_map,
    lp_map,
    round_solution
)
from .shared import (
    INTEGRALITY_TOL,
    TIE_TOL,
    parallel_map
)

logger = logging.getLogger(__name__)

TASK_LOSSES = ('hamming', 'zero')
ACCURACY_KINDS = ('f1', 'node')
SOLVERS = ('auto', 'ilp', 'exhaustive')


def _one_of(choices):
    def validate(instance, attribute, value):
        if value not in choices:
            raise ConfigValidationError('{} must be one of {}, got {!r}'.format(attribute.name, choices, value))
    return validate


def _positive(instance, attribute, value):
    if not value > 0:
        raise ConfigValidationError('{} must be positive, got {}'.format(attribute.name, value))


def _at_least_one(instance, attribute, value):
    if value < 1:
        raise ConfigValidationError('{} must be at least 1, got {}'.format(attribute.name, value))


def _to_fixed(values):
    if isinstance(values, dict):
        values = values.items()
    return tuple(sorted((int(k), float(v)) for k, v in values))


@attr.s(frozen=True)
class TrainConfig:
    """Training settings.

    :param regularization:
        lambda, the weight of ||w||^2 / 2.
    :param passes:
        The number of passes over the training set.
    :param inference_mode:
        'relaxed' (LP) or 'exact' (integral) loss-augmented inference.
    :param seed:
        Seeds the block sampling.
    :param averaging:
        Report the weighted average of the iterates instead of the last one.
    :param task_loss:
        'hamming' (normalized Hamming distance) or 'zero'.
    :param fixed_weights:
        (index, value) pairs of weights held fixed during training.
    :param accuracy:
        'f1' (per-sample F1 of multi-label predictions) or 'node' (share of correctly labeled variables).
    :param solver:
        The exact MAP solver.
    :param tol:
        The integrality tolerance.
    """
    regularization = attr.ib(default=0.01, converter=float, validator=_positive)
    passes = attr.ib(default=50, converter=int, validator=_at_least_one)
    inference_mode = attr.ib(default=RELAXED, validator=_one_of((RELAXED, EXACT)))
    seed = attr.ib(default=0, converter=int)
    averaging = attr.ib(default=False, converter=bool)
    task_loss = attr.ib(default='hamming', validator=_one_of(TASK_LOSSES))
    fixed_weights = attr.ib(default=(), converter=_to_fixed)
    accuracy = attr.ib(default='f1', validator=_one_of(ACCURACY_KINDS))
    solver = attr.ib(default='auto', validator=_one_of(SOLVERS))
    tol = attr.ib(default=INTEGRALITY_TOL, converter=float, validator=_positive)


@attr.s
class TrainState:
    """The BCFW iterate: one dual block per example.

    `blocks[i]` and `block_losses[i]` are the weight and loss contributions of example i; the learned part of `w` is
    their sum and `w` adds the fixed weights on top.
    """
    w = attr.ib()
    fixed = attr.ib()
    blocks = attr.ib()
    block_losses = attr.ib()
    w_average = attr.ib(default=None)
    iteration = attr.ib(default=0)

    @classmethod
    def initial(cls, n_examples, dim, fixed_weights):
        fixed = np.zeros(dim)
        for index, value in fixed_weights:
            fixed[index] = value
        return cls(fixed.copy(), fixed, np.zeros((n_examples, dim)), np.zeros(n_examples), fixed.copy())

    @property
    def learned(self):
        return self.w - self.fixed

    @property
    def dual_loss(self):
        return float(self.block_losses.sum())

    def consistency_residual(self):
        """Relative distance between the learned weights and the sum of the dual blocks."""
        total = self.blocks.sum(axis=0)
        return float(np.linalg.norm(self.learned - total) / max(1.0, np.linalg.norm(total)))


@attr.s(frozen=True)
class MetricsRecord:
    """The training quantities logged after every pass; field order fixes the metrics columns."""
    iteration = attr.ib()
    relaxed_objective = attr.ib()
    exact_objective = attr.ib()
    relaxed_hinge = attr.ib()
    exact_hinge = attr.ib()
    integrality_gap = attr.ib()
    train_tight_fraction = attr.ib()
    test_tight_fraction = attr.ib()
    task_accuracy = attr.ib()
    duality_gap = attr.ib(default=None)
    primal_objective = attr.ib(default=None)
    weight_norm = attr.ib(default=None)

    def to_dict(self):
        return attr.asdict(self)


def hamming_loss_vector(graph, y_true):
    """Decomposes the normalized Hamming distance to `y_true` over the singleton coordinates."""
    y_true = decode_assignment(graph, assignment_to_mu(graph, y_true))
    loss = np.full(graph.q, 0.0)
    for i, state in enumerate(y_true):
        block = graph.variable_slice(i)
        loss[block] = 1.0 / graph.n_vars
        loss[block.start + state] = 0.0
    return loss


def loss_vector(graph, y_true, task_loss='hamming'):
    if task_loss == 'hamming':
        return hamming_loss_vector(graph, y_true)
    if task_loss == 'zero':
        return np.zeros(graph.q)
    raise ConfigValidationError('unknown task loss {!r}'.format(task_loss))


def predict(graph, theta, mode=RELAXED, solver='auto'):
    """Predicts a labeling: relaxed inference followed by rounding, or exact inference."""
    if mode == RELAXED:
        return round_solution(graph, lp_map(graph, theta).mu)
    return decode_assignment(graph, exact_map(graph, theta, solver=solver).mu)


def _labeled(dataset):
    if not len(dataset.instances):
        raise EmptyDatasetError('the dataset holds no instances')
    for k, inst in enumerate(dataset.instances):
        if inst.label is None:
            raise InvalidAssignmentError('instance {} has no label'.format(k))


def _instance_objective(graph, w, mode, task_loss, solver, inst):
    theta = build_score_vector(w, inst)
    anchor = assignment_to_mu(graph, inst.label)
    loss = loss_vector(graph, inst.label, task_loss)
    return loss_augmented_map(graph, theta, loss, mode, anchor, solver).objective


def _mean_objective(w, data, mode, task_loss, solver, workers):
    _labeled(data)
    func = functools.partial(_instance_objective, data.graph, np.asarray(w, dtype=float), mode, task_loss, solver)
    return float(np.mean(parallel_map(func, data.instances, workers)))


def relaxed_objective(w, data, task_loss='hamming', solver='auto', workers=None):
    """Mean relaxed structured hinge (no regularizer)."""
    return _mean_objective(w, data, RELAXED, task_loss, solver, workers)


def exact_objective(w, data, task_loss='hamming', solver='auto', workers=None):
    """Mean exact structured hinge (no regularizer)."""
    return _mean_objective(w, data, EXACT, task_loss, solver, workers)


def task_accuracy(y_true, y_pred, kind='f1'):
    """Scores predicted labelings.

    :param y_true:
        True labelings, shape (M, n).
    :param y_pred:
        Predicted labelings, shape (M, n).
    :param kind:
        (optional) 'f1' for per-sample F1 of binary multi-label data, 'node' for variable accuracy.
    :type y_true: numpy.ndarray
    :type y_pred: numpy.ndarray
    :type kind: string
    :rtype: float
    """
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if kind == 'node':
        return float(accuracy_score(y_true.ravel(), y_pred.ravel()))
    if kind == 'f1':
        if y_true.max(initial=0) > 1 or y_pred.max(initial=0) > 1:
            raise ConfigValidationError('F1 accuracy needs binary labels, use node accuracy instead')
        return float(f1_score(y_true, y_pred, average='samples', zero_division=1))
    raise ConfigValidationError('unknown accuracy kind {!r}'.format(kind))


def _train_metrics(graph, w, cfg, inst):
    theta = build_score_vector(w, inst)
    anchor_value = score_of(theta, assignment_to_mu(graph, inst.label))
    loss = loss_vector(graph, inst.label, cfg.task_loss)

    relaxed = lp_map(graph, theta, tol=cfg.tol)
    exact = exact_map(graph, theta, solver=cfg.solver)
    if loss.any():
        anchor = assignment_to_mu(graph, inst.label)
        relaxed_objective_term = loss_augmented_map(graph, theta, loss, RELAXED, anchor).objective
        exact_objective_term = loss_augmented_map(graph, theta, loss, EXACT, anchor, cfg.solver).objective
    else:
        relaxed_objective_term = relaxed.value - anchor_value
        exact_objective_term = exact.value - anchor_value

    return (relaxed.value - anchor_value, relaxed.value - exact.value, exact.value - anchor_value,
            relaxed_objective_term, exact_objective_term, relaxed.integral)


def _test_metrics(graph, w, cfg, inst):
    theta = build_score_vector(w, inst)
    relaxed = lp_map(graph, theta, tol=cfg.tol)
    if cfg.inference_mode == RELAXED:
        prediction = round_solution(graph, relaxed.mu)
    else:
        prediction = decode_assignment(graph, exact_map(graph, theta, solver=cfg.solver).mu)
    return relaxed.integral, prediction


def evaluate(w, train, cfg, test=None, iteration=0, duality_gap=None, primal_objective=None, workers=None):
    """Computes one MetricsRecord for weights `w`.

    Accuracy is measured on the labeled test set when there is one, otherwise on the training set.

    :rtype: MetricsRecord
    """
    w = np.asarray(w, dtype=float)
    rows = np.array(parallel_map(functools.partial(_train_metrics, train.graph, w, cfg), train.instances, workers),
                    dtype=float)
    relaxed_hinge, gap, exact_hinge, relaxed_obj, exact_obj, tight = rows.mean(axis=0).tolist()

    test_tight = None
    scored = train
    if test is not None and len(test.instances):
        results = parallel_map(functools.partial(_test_metrics, test.graph, w, cfg), test.instances, workers)
        test_tight = float(np.mean([integral for integral, _ in results]))
        if all(inst.label is not None for inst in test.instances):
            scored = test
            predictions = [prediction for _, prediction in results]

    if scored is train:
        predictions = parallel_map(functools.partial(_test_metrics, train.graph, w, cfg), train.instances, workers)
        predictions = [prediction for _, prediction in predictions]

    accuracy = task_accuracy([inst.label for inst in scored.instances], predictions, cfg.accuracy)
    return MetricsRecord(iteration, relaxed_obj, exact_obj, relaxed_hinge, exact_hinge, gap, tight, test_tight,
                         accuracy, duality_gap, primal_objective, weight_norm(w))


def _oracle(graph, w, fixed, free, cfg, inst):
    """Loss-augmented corner of one example: (hinge, psi, corner loss)."""
    theta = build_score_vector(w, inst)
    anchor = assignment_to_mu(graph, inst.label)
    loss = loss_vector(graph, inst.label, cfg.task_loss)
    result = loss_augmented_map(graph, theta, loss, cfg.inference_mode, anchor, cfg.solver)

    mu_hat = result.result.mu
    psi = inst.features.T.dot(anchor - mu_hat) * free
    fixed_scores = inst.features.dot(fixed)
    corner_loss = score_of(loss, mu_hat) + score_of(fixed_scores, mu_hat - anchor)
    return result.objective, psi, corner_loss


def _duality_gap(state, train, cfg, free, workers):
    corners = parallel_map(functools.partial(_oracle, train.graph, state.w, state.fixed, free, cfg),
                           train.instances, workers)
    learned = state.learned
    regularizer = 0.5 * cfg.regularization * learned.dot(learned)
    primal = regularizer + float(np.mean([hinge for hinge, _, _ in corners]))
    gap = primal - (state.dual_loss - regularizer)
    if -TIE_TOL < gap < 0:
        gap = 0.0
    return gap, primal


def bcfw_train(train, cfg, test=None, on_record=None, workers=None):
    """Trains a structured SVM with block-coordinate Frank-Wolfe.

    Each pass makes one block step per training example, with blocks drawn uniformly at random, and then logs a
    MetricsRecord.

    :param train:
        The labeled training set.
    :param cfg:
        The training settings.
    :param test:
        (optional) A held-out set for tightness and accuracy.
    :param on_record:
        (optional) Called with every MetricsRecord as soon as it is computed.
    :param workers:
        (optional) Worker processes for metric evaluation.
    :type train: Dataset
    :type cfg: TrainConfig
    :type test: Dataset or None
    :type on_record: function or None
    :type workers: int or None
    :return:
        The final state and one record per pass.
    :rtype: tuple
    :raises TrainingError:
        If inference fails; the error carries the iteration.
    """
    _labeled(train)
    n = len(train.instances)
    dim = train.instances[0].feature_dim
    for index, _ in cfg.fixed_weights:
        if not 0 <= index < dim:
            raise ConfigValidationError('fixed weight index {} is out of range for dimension {}'.format(index, dim))

    state = TrainState.initial(n, dim, cfg.fixed_weights)
    free = np.ones(dim)
    free[[index for index, _ in cfg.fixed_weights]] = 0.0
    lam = cfg.regularization
    random_state = np.random.RandomState(cfg.seed)
    records = []

    for p in range(cfg.passes):
        for i in random_state.randint(n, size=n):
            try:
                _, psi, corner_loss = _oracle(train.graph, state.w, state.fixed, free, cfg, train.instances[i])
            except NumericalError as e:
                raise TrainingError('loss-augmented inference failed: {}'.format(e), state.iteration)

            w_s = psi / (lam * n)
            loss_s = corner_loss / n
            direction = state.blocks[i] - w_s
            denominator = lam * direction.dot(direction)
            if denominator > 0:
                step = (lam * direction.dot(state.learned) - state.block_losses[i] + loss_s) / denominator
                step = min(1.0, max(0.0, step))
            else:
                step = 0.0

            new_block = (1.0 - step) * state.blocks[i] + step * w_s
            state.w = state.w + new_block - state.blocks[i]
            state.blocks[i] = new_block
            state.block_losses[i] = (1.0 - step) * state.block_losses[i] + step * loss_s

            state.iteration += 1
            rho = 2.0 / (state.iteration + 1.0)
            state.w_average = (1.0 - rho) * state.w_average + rho * state.w

        try:
            gap, primal = _duality_gap(state, train, cfg, free, workers)
            reported = state.w_average if cfg.averaging else state.w
            record = evaluate(reported, train, cfg, test, p + 1, gap, primal, workers)
        except NumericalError as e:
            raise TrainingError('evaluation failed: {}'.format(e), state.iteration)

        logger.info('pass %d: relaxed %.6g exact %.6g gap %.6g tight %.3f duality gap %.3g', p + 1,
                    record.relaxed_objective, record.exact_objective, record.integrality_gap,
                    record.train_tight_fraction, gap)
        records.append(record)
        if on_record is not None:
            on_record(record)

    return state, records
