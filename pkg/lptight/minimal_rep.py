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

"""Minimal (eta, theta-bar) representation of binary pairwise models.

A labeling y scores offset + sum_i node[i] y_i + sum_ij edge[ij] y_i y_j. Edges are the graph's factors, in order.
Relaxed points are written eta: one value per variable and one per edge, the probability that both ends are 1.
"""

__all__ = ['ATTRACTIVE_RULE_TOL', 'BALANCED_PROP1', 'BalanceReport', 'Certificate', 'EtaPoint', 'FractionalOptimum',
           'MinimalScores', 'NO_CERTIFICATE', 'ORACLE_MAX_VARS', 'SINGLETON_PROP2', 'brute_force_F_star',
           'classify_and_balance', 'eta_objective', 'flip_minimal', 'fractional_optimum', 'from_minimal',
           'minimal_score', 'prop1_certificate', 'prop2_certificate', 'second_best', 'settle_edges', 'to_minimal']


from collections import namedtuple, deque
import logging

import attr
import numpy as np

from .errors import (
    StateSpaceTooLargeError,
    UnsupportedModelClassError
)
from .factor_graph import (
    check_score_vector,
    decode_assignment
)
from .inference import exact_map
from .shared import TIE_TOL

logger = logging.getLogger(__name__)

BALANCED_PROP1 = 'balanced_prop1'
SINGLETON_PROP2 = 'singleton_prop2'
NO_CERTIFICATE = 'none'

ATTRACTIVE_RULE_TOL = 0.0
ORACLE_MAX_VARS = 16
_PATTERN_CHUNK = 3 ** 10

BalanceReport = namedtuple('BalanceReport', ['attractive', 'balanced', 'flip_set'])
Certificate = namedtuple('Certificate', ['kind', 'gamma', 'witness', 'satisfied_fraction'])
FractionalOptimum = namedtuple('FractionalOptimum', ['value', 'eta'])


def _float_vector(values):
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@attr.s(frozen=True, eq=False)
class MinimalScores:
    """Minimal scores of a binary pairwise model.

    :param graph:
        The binary pairwise factor graph.
    :param node:
        theta-bar per variable.
    :param edge:
        theta-bar per edge, in factor order.
    :param offset:
        (optional) The score of the all-zeros labeling.
    :type graph: FactorGraph
    :type node: numpy.ndarray
    :type edge: numpy.ndarray
    :type offset: float
    """
    graph = attr.ib()
    node = attr.ib(converter=_float_vector)
    edge = attr.ib(converter=_float_vector)
    offset = attr.ib(default=0.0, converter=float)

    def __attrs_post_init__(self):
        if self.node.shape != (self.graph.n_vars,) or self.edge.shape != (self.graph.n_factors,):
            raise UnsupportedModelClassError('minimal scores do not match {!r}'.format(self.graph))

    @property
    def edges(self):
        return self.graph.factors


@attr.s(frozen=True, eq=False)
class EtaPoint:
    """A point of the minimal relaxed polytope."""
    node = attr.ib(converter=_float_vector)
    edge = attr.ib(converter=_float_vector)

    def is_feasible(self, edges, tol=TIE_TOL):
        if np.any(self.node < -tol) or np.any(self.node > 1 + tol):
            return False
        for value, (i, j) in zip(self.edge, edges):
            low = max(0.0, self.node[i] + self.node[j] - 1.0)
            high = min(self.node[i], self.node[j])
            if value < low - tol or value > high + tol:
                return False
        return True


def _require_binary_pairwise(graph):
    if not graph.is_binary_pairwise:
        raise UnsupportedModelClassError('{!r} is not a binary pairwise model'.format(graph))


def to_minimal(graph, theta):
    """Maps an overcomplete score vector of a binary pairwise model to its minimal representation.

    :param graph:
        The factor graph.
    :param theta:
        The score vector.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :rtype: MinimalScores
    :raises UnsupportedModelClassError:
        If a variable is not binary or a factor is not pairwise.
    """
    _require_binary_pairwise(graph)
    theta = check_score_vector(graph, theta)

    singles = np.array([theta[graph.variable_slice(i)] for i in range(graph.n_vars)])
    node = singles[:, 1] - singles[:, 0]
    offset = singles[:, 0].sum()

    edge = np.zeros(graph.n_factors)
    for c, (i, j) in enumerate(graph.factors):
        t00, t01, t10, t11 = theta[graph.factor_slice(c)]
        edge[c] = t11 + t00 - t01 - t10
        node[i] += t10 - t00
        node[j] += t01 - t00
        offset += t00

    return MinimalScores(graph, node, edge, offset)


def from_minimal(ms):
    """Maps minimal scores back to an overcomplete score vector (offset folded into variable 0)."""
    graph = ms.graph
    theta = np.zeros(graph.q)
    for i in range(graph.n_vars):
        theta[graph.variable_coordinate(i, 1)] = ms.node[i]
    for c in range(graph.n_factors):
        theta[graph.factor_coordinate(c, (1, 1))] = ms.edge[c]
    theta[graph.variable_slice(0)] += ms.offset
    return theta


def minimal_score(ms, y):
    """Scores a binary labeling in minimal form."""
    y = np.asarray(y, dtype=float)
    pairs = np.array([y[i] * y[j] for i, j in ms.edges])
    return float(ms.offset + ms.node.dot(y) + (ms.edge.dot(pairs) if pairs.size else 0.0))


def eta_objective(ms, eta):
    """Returns f(eta) = offset + node . eta_node + edge . eta_edge."""
    return float(ms.offset + ms.node.dot(eta.node) + ms.edge.dot(eta.edge))


def settle_edges(ms, eta_nodes):
    """Chooses the edge values maximizing f for fixed node values.

    Attractive edges (theta-bar >= 0) take min(eta_i, eta_j), repulsive ones max(0, eta_i + eta_j - 1).

    :param ms:
        The minimal scores.
    :param eta_nodes:
        One value in [0, 1] per variable.
    :type ms: MinimalScores
    :type eta_nodes: numpy.ndarray
    :rtype: EtaPoint
    """
    eta_nodes = np.asarray(eta_nodes, dtype=float)
    if eta_nodes.shape != (ms.graph.n_vars,):
        raise ValueError('expected {} node values, got shape {}'.format(ms.graph.n_vars, eta_nodes.shape))
    if np.any(eta_nodes < 0) or np.any(eta_nodes > 1):
        raise ValueError('node values must lie in [0, 1]')

    edge = np.zeros(ms.graph.n_factors)
    for c, (i, j) in enumerate(ms.edges):
        if ms.edge[c] >= ATTRACTIVE_RULE_TOL:
            edge[c] = min(eta_nodes[i], eta_nodes[j])
        else:
            edge[c] = max(0.0, eta_nodes[i] + eta_nodes[j] - 1.0)
    return EtaPoint(eta_nodes, edge)


def classify_and_balance(ms):
    """Labels edges attractive or repulsive and looks for a flip set making every edge attractive.

    Components are 2-colored by repulsive-edge parity starting from their smallest variable, which stays unflipped.

    :rtype: BalanceReport
    """
    attractive = ms.edge >= ATTRACTIVE_RULE_TOL
    n = ms.graph.n_vars
    color = [None] * n
    for root in range(n):
        if color[root] is not None:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for c, j in ms.graph.neighbors(i):
                parity = 0 if attractive[c] else 1
                if color[j] is None:
                    color[j] = color[i] ^ parity
                    queue.append(j)
                elif color[j] != color[i] ^ parity:
                    return BalanceReport(attractive, False, None)

    return BalanceReport(attractive, True, tuple(i for i in range(n) if color[i] == 1))


def flip_minimal(ms, flip_set):
    """Re-expresses the model in terms of y'_i = 1 - y_i for every i in `flip_set`.

    Each labeling keeps its score: minimal_score(ms, y) == minimal_score(flipped, y').

    :rtype: MinimalScores
    """
    flipped = np.zeros(ms.graph.n_vars, dtype=bool)
    flipped[list(flip_set)] = True

    node = np.where(flipped, -ms.node, ms.node)
    offset = ms.offset + ms.node[flipped].sum()
    edge = ms.edge.copy()

    for c, (i, j) in enumerate(ms.edges):
        value = ms.edge[c]
        if flipped[i] and flipped[j]:
            offset += value
            node[i] -= value
            node[j] -= value
        elif flipped[i]:
            node[j] += value
            edge[c] = -value
        elif flipped[j]:
            node[i] += value
            edge[c] = -value

    return MinimalScores(ms.graph, node, edge, offset)


def _best_and_second(graph, theta, solver):
    best = exact_map(graph, theta, solver=solver)
    y = decode_assignment(graph, best.mu)

    second = -np.inf
    for i in range(graph.n_vars):
        fixings = {graph.variable_coordinate(i, y[i]): 0}
        second = max(second, exact_map(graph, theta, fixings, solver=solver).value)
    return best.value, second


def second_best(graph, theta, solver='auto'):
    """Returns the best score among labelings that differ from the MAP labeling.

    Each variable in turn is forced away from its MAP state and the constrained MAP is recomputed; the maximum over
    these runs is the second-best score. Equal to I* when the optimum is not unique.
    """
    return _best_and_second(graph, theta, solver)[1]


def prop1_certificate(graph, theta, solver='auto'):
    """Certifies (alpha / 2)-tightness of a balanced model with a unique optimum.

    :rtype: Certificate
    """
    balance = classify_and_balance(to_minimal(graph, theta))
    if not balance.balanced:
        return Certificate(NO_CERTIFICATE, 0.0, None, None)

    best, second = _best_and_second(graph, theta, solver)
    alpha = best - second
    if alpha <= TIE_TOL:
        return Certificate(NO_CERTIFICATE, 0.0, {'flip_set': list(balance.flip_set), 'alpha': float(alpha)}, None)

    return Certificate(BALANCED_PROP1, alpha / 2.0, {'flip_set': list(balance.flip_set), 'alpha': float(alpha)}, None)


def prop2_certificate(graph, theta, beta_min=0.0):
    """Certifies (beta / 2)-tightness from strong singleton scores.

    Variable i has slack beta_i = max(node_i + sum of its repulsive edges, -node_i - sum of its attractive edges);
    beta is the smallest slack over all variables.

    :param graph:
        The binary pairwise graph.
    :param theta:
        The score vector.
    :param beta_min:
        (optional) The smallest beta worth certifying. Defaults to 0.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type beta_min: float
    :return:
        The certificate, whose `satisfied_fraction` is the share of variables with slack at least `beta_min`.
    :rtype: Certificate
    """
    ms = to_minimal(graph, theta)
    repulsive_sum = np.zeros(graph.n_vars)
    attractive_sum = np.zeros(graph.n_vars)
    for c, (i, j) in enumerate(ms.edges):
        target = attractive_sum if ms.edge[c] > 0 else repulsive_sum
        target[i] += ms.edge[c]
        target[j] += ms.edge[c]

    slack = np.maximum(ms.node + repulsive_sum, -ms.node - attractive_sum)
    beta = float(slack.min())
    satisfied = float(np.mean((slack > 0) & (slack >= beta_min)))
    witness = {'beta': beta, 'slack': slack.tolist()}

    if beta <= 0 or beta < beta_min:
        return Certificate(NO_CERTIFICATE, 0.0, witness, satisfied)
    return Certificate(SINGLETON_PROP2, beta / 2.0, witness, satisfied)


def _patterns(n, start, stop):
    digits = np.empty((stop - start, n))
    remainder = np.arange(start, stop)
    for i in reversed(range(n)):
        digits[:, i] = (remainder % 3) * 0.5
        remainder = remainder // 3
    return digits


def _settled_values(ms, patterns):
    values = ms.offset + patterns.dot(ms.node)
    for c, (i, j) in enumerate(ms.edges):
        if ms.edge[c] >= ATTRACTIVE_RULE_TOL:
            pair = np.minimum(patterns[:, i], patterns[:, j])
        else:
            pair = np.maximum(0.0, patterns[:, i] + patterns[:, j] - 1.0)
        values += ms.edge[c] * pair
    return values


def _connected_without(adjacency, nodes, skip, source, target):
    seen = {source}
    queue = deque([source])
    while queue:
        i = queue.popleft()
        if i == target:
            return True
        for j, c in adjacency[i]:
            if c != skip and j in nodes and j not in seen:
                seen.add(j)
                queue.append(j)
    return False


def _vertex_penalty(ms, pattern):
    """Returns the value lost by turning a settled half-integral point into a vertex, or None if impossible.

    Every component of the fractional subgraph must hold a cycle with an odd number of disagreeing edges; a
    component that has none gets its cheapest cycle edge switched.
    """
    fractional = set(np.flatnonzero(pattern == 0.5).tolist())
    adjacency = {i: [] for i in fractional}
    for c, (i, j) in enumerate(ms.edges):
        if i in fractional and j in fractional:
            adjacency[i].append((j, c))
            adjacency[j].append((i, c))

    penalty = 0.0
    color = {}
    for root in sorted(fractional):
        if root in color:
            continue

        color[root] = 0
        members = {root}
        component_edges = set()
        frustrated = False
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j, c in adjacency[i]:
                component_edges.add(c)
                parity = 0 if ms.edge[c] >= ATTRACTIVE_RULE_TOL else 1
                if j not in color:
                    color[j] = color[i] ^ parity
                    members.add(j)
                    queue.append(j)
                elif color[j] != color[i] ^ parity:
                    frustrated = True

        if frustrated:
            continue
        if len(component_edges) < len(members):
            return None

        costs = [abs(ms.edge[c]) / 2.0 for c in sorted(component_edges)
                 if _connected_without(adjacency, members, c, *ms.edges[c])]
        if not costs:
            return None
        penalty += min(costs)

    return penalty


def fractional_optimum(graph, theta, vertices_only=True, max_vars=ORACLE_MAX_VARS):
    """Finds the best fractional point by enumerating half-integral node patterns.

    With `vertices_only` the search is restricted to fractional vertices of the local polytope, which gives F*
    exactly. Otherwise every settled half-integral point with a fractional variable counts.

    :param graph:
        The binary pairwise graph.
    :param theta:
        The score vector.
    :param vertices_only:
        (optional) Whether to restrict the search to vertices. Defaults to True.
    :param max_vars:
        (optional) The largest model enumerated. Defaults to 16.
    :type graph: FactorGraph
    :type theta: numpy.ndarray
    :type vertices_only: bool
    :type max_vars: int
    :return:
        The best value (-inf when there is no fractional vertex) and its node pattern.
    :rtype: FractionalOptimum
    :raises StateSpaceTooLargeError:
        If the graph has more than `max_vars` variables.
    """
    ms = to_minimal(graph, theta)
    n = graph.n_vars
    if n > max_vars:
        raise StateSpaceTooLargeError('the fractional oracle handles at most {} variables, got {}'.format(max_vars, n))
    if vertices_only and graph.is_forest:
        return FractionalOptimum(-np.inf, None)

    best_value = -np.inf
    best_eta = None
    total = 3 ** n
    for start in range(0, total, _PATTERN_CHUNK):
        patterns = _patterns(n, start, min(total, start + _PATTERN_CHUNK))
        patterns = patterns[np.any(patterns == 0.5, axis=1)]
        if not len(patterns):
            continue

        values = _settled_values(ms, patterns)
        if not vertices_only:
            k = int(np.argmax(values))
            if values[k] > best_value:
                best_value, best_eta = float(values[k]), patterns[k]
            continue

        for k in np.argsort(-values, kind='stable'):
            if values[k] <= best_value:
                break
            penalty = _vertex_penalty(ms, patterns[k])
            if penalty is not None and values[k] - penalty > best_value:
                best_value, best_eta = float(values[k] - penalty), patterns[k]

    logger.debug('fractional optimum %s over %d variables', best_value, n)
    if best_eta is None:
        return FractionalOptimum(-np.inf, None)
    return FractionalOptimum(best_value, tuple(float(v) for v in best_eta))


def brute_force_F_star(graph, theta, vertices_only=True, max_vars=ORACLE_MAX_VARS):
    """Returns F*, the best score over fractional vertices of the local polytope (-inf if there is none)."""
    return fractional_optimum(graph, theta, vertices_only, max_vars).value
