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

"""Tightness diagnostics: hinge decomposition, fractionality losses, margins and the generalization bound."""

__all__ = ['BoundChain', 'BoundReport', 'DEFAULT_GAMMAS', 'Decomposition', 'FractionalityReport', 'MarginHistogram',
           'ProbeReport', 'TightnessReport', 'bound_chain_check', 'fractionality_report', 'generalization_bound',
           'hinge_decomposition', 'instance_decomposition', 'integrality_margin_histogram', 'mean_decomposition',
           'ramp_loss', 'random_weights_probe', 'tightness_fraction']


from collections import namedtuple
import functools
import logging
import math

import numpy as np

from .errors import (
    BoundChainViolationError,
    EmptyDatasetError,
    InvalidAssignmentError,
    StateSpaceTooLargeError,
    UnsupportedModelClassError
)
from .factor_graph import (
    assignment_to_mu,
    build_score_vector,
    check_score_vector,
    decode_assignment,
    score_of
)
from .inference import (
    RELAXED,
    exact_map,
    loss_augmented_map,
    lp_map
)
from .minimal_rep import (
    ORACLE_MAX_VARS,
    brute_force_F_star
)
from .polytope_lp import classify_integrality
from .shared import (
    INTEGRALITY_TOL,
    TIE_TOL,
    parallel_map
)

logger = logging.getLogger(__name__)

DEFAULT_GAMMAS = (0.01, 0.1, 1.0)
MAX_FRACTION = 0.1

Decomposition = namedtuple('Decomposition', ['relaxed_hinge', 'integrality_gap', 'exact_hinge'])
BoundChain = namedtuple('BoundChain', ['integrality_gap', 'relaxed_hinge', 'relaxed_hinge_plus_loss',
                                       'loss_augmented'])
FractionalityReport = namedtuple('FractionalityReport', ['I_star', 'F_star', 'D', 'loss_L', 'ramp_phi', 'gamma',
                                                         'exact'])
BoundReport = namedtuple('BoundReport', ['M', 'q', 'B', 'R_hat', 'gamma', 'delta', 'empirical_ramp_mean',
                                         'rademacher_term', 'confidence_term', 'bound_value'])
TightnessReport = namedtuple('TightnessReport', ['tight_fraction', 'near_integral_fraction', 'max_fraction',
                                                 'n_instances'])
MarginHistogram = namedtuple('MarginHistogram', ['margins', 'bin_edges', 'counts', 'skipped'])
ProbeReport = namedtuple('ProbeReport', ['fractions', 'mean'])


def _check_anchor(graph, mu_anchor):
    mu_anchor = check_score_vector(graph, mu_anchor, 'anchor')
    if not np.array_equal(mu_anchor, assignment_to_mu(graph, decode_assignment(graph, mu_anchor))):
        raise InvalidAssignmentError('the anchor is not an integral point of the local polytope')
    return mu_anchor


def hinge_decomposition(graph, theta, mu_anchor, solver='auto'):
    """Splits the relaxed hinge at an integral anchor into integrality gap plus exact hinge.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :param mu_anchor:
        An integral point, usually the ground truth.
    :param solver:
        (optional) The exact MAP solver.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type mu_anchor: numpy.ndarray
    :type solver: string
    :rtype: Decomposition
    :raises InvalidAssignmentError:
        If the anchor is not integral.
    """
    theta = check_score_vector(graph, theta)
    anchor = score_of(theta, _check_anchor(graph, mu_anchor))
    relaxed = lp_map(graph, theta).value
    exact = exact_map(graph, theta, solver=solver).value
    return Decomposition(relaxed - anchor, relaxed - exact, exact - anchor)


def bound_chain_check(graph, theta, mu_anchor, loss, tol=TIE_TOL, solver='auto'):
    """Evaluates gap <= relaxed hinge <= relaxed hinge + loss . mu_L <= loss-augmented maximum.

    :return:
        The four links of the chain.
    :rtype: BoundChain
    :raises BoundChainViolationError:
        If a link decreases by more than `tol`.
    """
    theta = check_score_vector(graph, theta)
    loss = check_score_vector(graph, loss, 'loss vector')
    if np.any(loss < 0):
        raise ValueError('the loss vector must be nonnegative')

    mu_anchor = _check_anchor(graph, mu_anchor)
    relaxed = lp_map(graph, theta)
    exact = exact_map(graph, theta, solver=solver)
    relaxed_hinge = relaxed.value - score_of(theta, mu_anchor)
    augmented = loss_augmented_map(graph, theta, loss, RELAXED, mu_anchor)

    chain = BoundChain(relaxed.value - exact.value, relaxed_hinge, relaxed_hinge + score_of(loss, relaxed.mu),
                       augmented.objective)
    for low, high in zip(chain, chain[1:]):
        if high < low - tol:
            raise BoundChainViolationError('bound chain decreases: {}'.format(chain))
    return chain


def ramp_loss(D, gamma):
    """Returns the ramp surrogate of the fractionality loss.

    :param D:
        F* - I*, possibly -inf.
    :param gamma:
        The margin, positive.
    :type D: float
    :type gamma: float
    :rtype: float
    """
    if gamma <= 0:
        raise ValueError('gamma must be positive, got {}'.format(gamma))
    if D > 0:
        return 1.0
    if D <= -gamma:
        return 0.0
    return 1.0 + D / gamma


def fractionality_report(graph, theta, gamma, strict=False, solver='auto'):
    """Computes I*, F*, D and both fractionality losses.

    F* is exact for binary pairwise models of up to 16 variables. Elsewhere it is exact only when the LP optimum is
    fractional (F* is then the LP value); with an integral LP optimum the loss is 0 and the ramp is None.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :param gamma:
        The ramp margin.
    :param strict:
        (optional) Raise instead of degrading outside the exact class. Defaults to False.
    :param solver:
        (optional) The exact MAP solver.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type gamma: float
    :type strict: bool
    :type solver: string
    :rtype: FractionalityReport
    :raises UnsupportedModelClassError:
        With `strict`, if the model is not binary pairwise with at most 16 variables.
    """
    if gamma <= 0:
        raise ValueError('gamma must be positive, got {}'.format(gamma))

    theta = check_score_vector(graph, theta)
    I_star = exact_map(graph, theta, solver=solver).value

    if graph.is_binary_pairwise and graph.n_vars <= ORACLE_MAX_VARS:
        F_star = brute_force_F_star(graph, theta)
    elif strict:
        raise UnsupportedModelClassError('exact F* needs a binary pairwise model with at most {} variables'.format(
            ORACLE_MAX_VARS))
    else:
        relaxed = lp_map(graph, theta)
        if relaxed.integral:
            logger.warning('F* unavailable for %r with an integral LP optimum', graph)
            return FractionalityReport(I_star, None, None, 0, None, gamma, False)
        F_star = relaxed.value

    D = F_star - I_star
    return FractionalityReport(I_star, F_star, D, int(D > TIE_TOL), ramp_loss(D, gamma), gamma, True)


def _require_instances(dataset):
    if not len(dataset.instances):
        raise EmptyDatasetError('the dataset holds no instances')


def _label_mu(graph, inst):
    if inst.label is None:
        raise InvalidAssignmentError('the instance has no label')
    return assignment_to_mu(graph, inst.label)


def instance_decomposition(graph, w, inst, solver='auto'):
    """Decomposes the hinge of one labeled instance at its ground truth."""
    return hinge_decomposition(graph, build_score_vector(w, inst), _label_mu(graph, inst), solver)


def mean_decomposition(dataset, w, workers=None, solver='auto'):
    """Averages the hinge decomposition over a labeled dataset.

    :rtype: Decomposition
    """
    _require_instances(dataset)
    parts = parallel_map(functools.partial(instance_decomposition, dataset.graph, w, solver=solver),
                         dataset.instances, workers)
    return Decomposition(*np.mean(np.array(parts, dtype=float), axis=0).tolist())


def _instance_integrality(graph, w, tol, inst):
    return classify_integrality(graph, lp_map(graph, build_score_vector(w, inst), tol=tol).mu, tol)


def tightness_fraction(dataset, w, tol=INTEGRALITY_TOL, max_fraction=MAX_FRACTION, workers=None):
    """Measures how often the relaxation is tight on a dataset.

    :param dataset:
        The instances and their graph.
    :param w:
        The weights.
    :param tol:
        (optional) The integrality tolerance. Defaults to 1e-6.
    :param max_fraction:
        (optional) Vertices with at most this share of fractional variables count as near-integral.
    :param workers:
        (optional) The number of worker processes.
    :type dataset: Dataset
    :type w: numpy.ndarray
    :type tol: float
    :type max_fraction: float
    :type workers: int or None
    :rtype: TightnessReport
    :raises EmptyDatasetError:
        If the dataset has no instances.
    """
    _require_instances(dataset)
    reports = parallel_map(functools.partial(_instance_integrality, dataset.graph, w, tol), dataset.instances, workers)
    tight = np.mean([report.integral for report in reports])
    near = np.mean([report.fractional_fraction <= max_fraction for report in reports])
    return TightnessReport(float(tight), float(near), max_fraction, len(reports))


def _instance_margin(graph, w, inst):
    try:
        report = fractionality_report(graph, build_score_vector(w, inst), 1.0, strict=True)
    except (UnsupportedModelClassError, StateSpaceTooLargeError):
        return None
    return report.I_star - report.F_star


def integrality_margin_histogram(dataset, w, bins=10, workers=None):
    """Bins the integrality margins I* - F* of a dataset.

    Instances outside the exact F* class are skipped and counted. Models without fractional vertices have an
    infinite margin; it is listed but not binned.

    :rtype: MarginHistogram
    """
    _require_instances(dataset)
    margins = parallel_map(functools.partial(_instance_margin, dataset.graph, w), dataset.instances, workers)
    kept = [margin for margin in margins if margin is not None]
    skipped = len(margins) - len(kept)
    if skipped:
        logger.warning('skipped %d instances outside the exact F* class', skipped)

    finite = [margin for margin in kept if math.isfinite(margin)]
    if finite:
        counts, edges = np.histogram(finite, bins=bins)
    else:
        counts, edges = np.zeros(0, dtype=int), np.zeros(0)
    return MarginHistogram(kept, edges.tolist(), counts.tolist(), skipped)


def random_weights_probe(dataset, trials=20, scale=1.0, seed=0, tol=INTEGRALITY_TOL, workers=None):
    """Tightness fractions under random Gaussian weights.

    :rtype: ProbeReport
    """
    _require_instances(dataset)
    random_state = np.random.RandomState(seed)
    d = dataset.instances[0].feature_dim
    fractions = []
    for _ in range(trials):
        w = random_state.normal(0.0, scale, size=d)
        fractions.append(tightness_fraction(dataset, w, tol, workers=workers).tight_fraction)
    return ProbeReport(fractions, float(np.mean(fractions)) if fractions else float('nan'))


def generalization_bound(M, q, B, R_hat, gamma, delta, empirical_ramp_mean, constant=1.0):
    """Evaluates the tightness generalization bound.

    The complexity term is 2 (sqrt(q) / gamma) C q B R_hat / sqrt(M); `constant` is C, which the asymptotic statement
    leaves open.

    :param M:
        The sample count.
    :param q:
        The score dimension.
    :param B:
        The weight norm bound.
    :param R_hat:
        The feature norm bound.
    :param gamma:
        The ramp margin.
    :param delta:
        The failure probability.
    :param empirical_ramp_mean:
        The mean ramp loss on the sample.
    :param constant:
        (optional) C, defaults to 1.
    :type M: int
    :type q: int
    :type B: float
    :type R_hat: float
    :type gamma: float
    :type delta: float
    :type empirical_ramp_mean: float
    :type constant: float
    :rtype: BoundReport
    """
    if M < 1:
        raise ValueError('M must be at least 1, got {}'.format(M))
    if q < 1:
        raise ValueError('q must be at least 1, got {}'.format(q))
    if B < 0 or R_hat < 0:
        raise ValueError('B and R_hat must be nonnegative')
    if gamma <= 0:
        raise ValueError('gamma must be positive, got {}'.format(gamma))
    if not 0 < delta < 1:
        raise ValueError('delta must lie in (0, 1), got {}'.format(delta))
    if not 0 <= empirical_ramp_mean <= 1:
        raise ValueError('the empirical ramp mean must lie in [0, 1], got {}'.format(empirical_ramp_mean))
    if constant <= 0:
        raise ValueError('the constant must be positive, got {}'.format(constant))

    rademacher = 2.0 * (math.sqrt(q) / gamma) * constant * (q * B * R_hat / math.sqrt(M))
    confidence = math.sqrt(8.0 * math.log(2.0 / delta) / M)
    return BoundReport(M, q, B, R_hat, gamma, delta, empirical_ramp_mean, rademacher, confidence,
                       empirical_ramp_mean + rademacher + confidence)
