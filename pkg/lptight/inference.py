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

"""MAP inference: LP relaxation, branch-and-bound, exhaustive enumeration and rounding.

Fixings map singleton coordinates to 0 or 1 and restrict every solver the same way; they are how branch-and-bound
and the second-best search constrain a model.
"""

__all__ = ['EXACT', 'EXHAUSTIVE', 'LossAugmentedResult', 'MapResult', 'RELAXED', 'exact_map', 'exhaustive_map',
           'ilp_map', 'local_polytope', 'loss_augmented_map', 'lp_map', 'round_solution']


from collections import namedtuple
import functools
import heapq
import itertools
import logging

import numpy as np

from .errors import (
    InvalidAssignmentError,
    NodeLimitError,
    SolverError,
    StateSpaceTooLargeError
)
from .factor_graph import (
    assignment_to_mu,
    check_score_vector,
    decode_assignment,
    score_of
)
from .polytope_lp import (
    OPTIMAL,
    build_local_polytope,
    classify_integrality,
    simplex_solve
)
from .shared import (
    INTEGRALITY_TOL,
    TIE_TOL
)

logger = logging.getLogger(__name__)

RELAXED = 'relaxed'
EXACT = 'exact'
EXHAUSTIVE = 'exhaustive'

MAX_EXHAUSTIVE_STATES = 2 ** 20
AUTO_EXHAUSTIVE_STATES = 4096
# Largest state space that exact loss-augmented inference enumerates in auto mode
LOSS_AUGMENTED_EXHAUSTIVE_STATES = 256
OPEN_NODE_LIMIT = 10 ** 5
NODE_LIMIT = 10 ** 6
_CHUNK = 2 ** 14

MapResult = namedtuple('MapResult', ['mu', 'value', 'mode', 'integral'])
LossAugmentedResult = namedtuple('LossAugmentedResult', ['result', 'offset', 'objective'])


@functools.lru_cache(maxsize=128)
def local_polytope(graph):
    """Returns the (cached) local polytope of a graph."""
    return build_local_polytope(graph)


def _check_fixings(graph, fixings):
    fixings = dict(fixings or {})
    n_singleton = int(sum(graph.cardinalities))
    for k, value in fixings.items():
        if not 0 <= k < n_singleton:
            raise InvalidAssignmentError('only singleton coordinates can be fixed, got coordinate {}'.format(k))
        if value not in (0, 1):
            raise InvalidAssignmentError('coordinate {} can only be fixed to 0 or 1, got {}'.format(k, value))
    return fixings


def _allowed_states(graph, fixings):
    allowed = []
    for i in range(graph.n_vars):
        states = []
        forced = None
        for s in range(graph.cardinalities[i]):
            value = fixings.get(graph.variable_coordinate(i, s))
            if value == 1:
                forced = s
            if value != 0:
                states.append(s)
        if forced is not None:
            states = [forced] if forced in states else []
        allowed.append(np.array(states, dtype=int))
    return allowed


def _respects(graph, y, fixings):
    for k, value in fixings.items():
        _, i, (s,) = graph.describe_coordinate(k)
        if (y[i] == s) != (value == 1):
            return False
    return True


def _relaxation(graph, theta, fixings):
    return simplex_solve(local_polytope(graph).with_fixings(fixings), theta)


def lp_map(graph, theta, fixings=None, tol=INTEGRALITY_TOL):
    """Maximizes theta . mu over the local polytope.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :param fixings:
        (optional) Singleton coordinates pinned to 0 or 1.
    :param tol:
        (optional) The integrality tolerance. Defaults to 1e-6.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type fixings: dict or None
    :type tol: float
    :return:
        An optimal vertex, flagged integral or fractional.
    :rtype: MapResult
    :raises SolverError:
        If the relaxation has no optimum (only possible with contradictory fixings).
    """
    theta = check_score_vector(graph, theta)
    solution = _relaxation(graph, theta, _check_fixings(graph, fixings))
    if solution.status != OPTIMAL:
        raise SolverError('LP relaxation ended with status {}'.format(solution.status))

    report = classify_integrality(graph, solution.mu, tol)
    return MapResult(solution.mu, score_of(theta, solution.mu), RELAXED, report.integral)


def _branch_coordinate(graph, mu, tol):
    singleton = mu[:int(sum(graph.cardinalities))]
    fractional = np.flatnonzero(np.minimum(singleton, 1.0 - singleton) > tol)
    if fractional.size == 0:
        return None
    return int(fractional[np.argmin(np.abs(singleton[fractional] - 0.5))])


def ilp_map(graph, theta, fixings=None, node_limit=NODE_LIMIT, tol=INTEGRALITY_TOL):
    """Finds an optimal labeling by best-first branch-and-bound over LP bounds.

    Nodes branch on the fractional singleton coordinate nearest 1/2 (fixing it to 1, then 0). Once more than 10^5
    nodes are open the search continues depth-first.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :param fixings:
        (optional) Singleton coordinates pinned to 0 or 1.
    :param node_limit:
        (optional) The number of expanded nodes after which the search gives up.
    :param tol:
        (optional) The integrality tolerance.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type fixings: dict or None
    :type node_limit: int
    :type tol: float
    :rtype: MapResult
    :raises NodeLimitError:
        If `node_limit` nodes were expanded; the error carries the incumbent.
    :raises SolverError:
        If the fixings admit no labeling.
    """
    theta = check_score_vector(graph, theta)
    fixings = _check_fixings(graph, fixings)

    root = _relaxation(graph, theta, fixings)
    if root.status != OPTIMAL:
        raise SolverError('no labeling satisfies the fixings {}'.format(fixings))

    incumbent = None
    incumbent_value = -np.inf

    y = round_solution(graph, root.mu)
    if _respects(graph, y, fixings):
        incumbent = assignment_to_mu(graph, y)
        incumbent_value = score_of(theta, incumbent)

    counter = itertools.count()
    heap = [(-root.value, next(counter), fixings, root)]
    stack = None
    expanded = 0

    while heap or stack:
        if stack is None:
            _, _, node_fixings, solution = heapq.heappop(heap)
        else:
            node_fixings, solution = stack.pop()

        if solution.value <= incumbent_value + TIE_TOL:
            continue

        expanded += 1
        if expanded > node_limit:
            best = None if incumbent is None else MapResult(incumbent, incumbent_value, EXACT, True)
            raise NodeLimitError('branch-and-bound expanded {} nodes'.format(node_limit), incumbent=best)

        k = _branch_coordinate(graph, solution.mu, tol)
        if k is None:
            mu = assignment_to_mu(graph, decode_assignment(graph, solution.mu))
            value = score_of(theta, mu)
            if value > incumbent_value + TIE_TOL:
                incumbent, incumbent_value = mu, value
            continue

        children = []
        for fixed in (1, 0):
            child_fixings = dict(node_fixings)
            child_fixings[k] = fixed
            child = _relaxation(graph, theta, child_fixings)
            if child.status == OPTIMAL and child.value > incumbent_value + TIE_TOL:
                children.append((child_fixings, child))

        if stack is None:
            for child_fixings, child in children:
                heapq.heappush(heap, (-child.value, next(counter), child_fixings, child))
            if len(heap) > OPEN_NODE_LIMIT:
                logger.debug('%d open nodes, continuing depth-first', len(heap))
                stack = [(entry[2], entry[3]) for entry in sorted(heap, reverse=True)]
                heap = []
        else:
            stack.extend(reversed(children))

    if incumbent is None:
        raise SolverError('no labeling satisfies the fixings {}'.format(fixings))

    logger.debug('branch-and-bound expanded %d nodes', expanded)
    return MapResult(incumbent, incumbent_value, EXACT, True)


def exhaustive_map(graph, theta, fixings=None, max_states=MAX_EXHAUSTIVE_STATES):
    """Finds an optimal labeling by enumeration; ties go to the lexicographically smallest labeling.

    :raises StateSpaceTooLargeError:
        If the graph has more than `max_states` labelings.
    """
    theta = check_score_vector(graph, theta)
    fixings = _check_fixings(graph, fixings)
    if graph.state_space_size > max_states:
        raise StateSpaceTooLargeError('{} labelings exceed the enumeration limit of {}'.format(
            graph.state_space_size, max_states))

    allowed = _allowed_states(graph, fixings)
    sizes = [len(states) for states in allowed]
    total = int(np.prod(sizes, dtype=object))
    if total == 0:
        raise SolverError('no labeling satisfies the fixings {}'.format(fixings))

    best_value = -np.inf
    best_y = None
    for start in range(0, total, _CHUNK):
        remainder = np.arange(start, min(total, start + _CHUNK))
        labelings = np.empty((remainder.size, graph.n_vars), dtype=int)
        for i in reversed(range(graph.n_vars)):
            labelings[:, i] = allowed[i][remainder % sizes[i]]
            remainder = remainder // sizes[i]

        scores = theta[graph.active_coordinates(labelings)].sum(axis=1)
        top = scores.max()
        if top > best_value + TIE_TOL:
            best_value = top
            best_y = labelings[np.flatnonzero(scores >= top - TIE_TOL)[0]]

    mu = assignment_to_mu(graph, best_y)
    return MapResult(mu, score_of(theta, mu), EXHAUSTIVE, True)


def exact_map(graph, theta, fixings=None, solver='auto'):
    """Exact MAP through enumeration or branch-and-bound.

    :param solver:
        (optional) 'exhaustive', 'ilp' or 'auto' (enumeration up to 4096 labelings). Defaults to 'auto'.
    :type solver: string
    :rtype: MapResult
    """
    if solver == 'auto':
        solver = 'exhaustive' if graph.state_space_size <= AUTO_EXHAUSTIVE_STATES else 'ilp'

    if solver == 'exhaustive':
        return exhaustive_map(graph, theta, fixings)
    if solver == 'ilp':
        return ilp_map(graph, theta, fixings)
    raise ValueError('unknown exact solver {}'.format(solver))


def loss_augmented_map(graph, theta, loss, mode, mu_anchor=None, solver='auto'):
    """Solves max theta . (mu - mu_anchor) + loss . mu over the relaxed or integral feasible set.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :param loss:
        The decomposed task loss, shaped like `theta`.
    :param mode:
        'relaxed' for the LP, 'exact' for an integral optimum.
    :param mu_anchor:
        (optional) The integral anchor; when given the constant -theta . mu_anchor is reported as `offset`.
    :param solver:
        (optional) The exact solver used in 'exact' mode. 'auto' enumerates up to 256 labelings and runs
        branch-and-bound beyond that.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type loss: numpy.ndarray
    :type mode: string
    :type mu_anchor: numpy.ndarray or None
    :type solver: string
    :return:
        The maximizer of (theta + loss) . mu, the offset and the full objective.
    :rtype: LossAugmentedResult
    """
    theta = check_score_vector(graph, theta)
    loss = check_score_vector(graph, loss, 'loss vector')
    augmented = theta + loss

    if mode == RELAXED:
        result = lp_map(graph, augmented)
    elif mode == EXACT:
        if solver == 'auto':
            solver = 'exhaustive' if graph.state_space_size <= LOSS_AUGMENTED_EXHAUSTIVE_STATES else 'ilp'
        result = exact_map(graph, augmented, solver=solver)
    else:
        raise ValueError('unknown inference mode {}'.format(mode))

    offset = 0.0 if mu_anchor is None else -score_of(theta, check_score_vector(graph, mu_anchor, 'anchor'))
    return LossAugmentedResult(result, offset, result.value + offset)


def round_solution(graph, mu, tol=TIE_TOL):
    """Rounds a marginal vector to a labeling by per-variable argmax; near-ties go to the smallest state.

    :rtype: tuple
    """
    mu = check_score_vector(graph, mu, 'marginal vector')
    labeling = []
    for i in range(graph.n_vars):
        block = mu[graph.variable_slice(i)]
        labeling.append(int(np.flatnonzero(block >= block.max() - tol)[0]))
    return tuple(labeling)
