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

"""Discrete factor graphs, per-assignment features and overcomplete score vectors.

Coordinates of a score vector are laid out variables first, then factors; inside every block local assignments are
in lexicographic order (the first variable of a scope is the most significant digit). Score vectors, loss vectors,
marginal vectors and weights are plain one-dimensional float `numpy` arrays.
"""

__all__ = ['FactorGraph', 'Instance', 'assignment_to_mu', 'build_score_vector', 'check_score_vector',
           'decode_assignment', 'feature_norm_bound', 'joint_feature', 'score_of', 'weight_norm']


import itertools

import attr
import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidAssignmentError
)


def _to_cardinalities(values):
    return tuple(int(v) for v in values)


def _to_scopes(values):
    return tuple(tuple(int(v) for v in scope) for scope in values)


def _validate_cardinalities(instance, attribute, value):
    if not value:
        raise ValueError('a factor graph needs at least one variable')
    for card in value:
        if card < 2:
            raise ValueError('variable cardinalities must be at least 2, got {}'.format(card))


def _validate_scopes(instance, attribute, value):
    n_vars = len(instance.cardinalities)
    for scope in value:
        if not scope:
            raise ValueError('factor scopes must hold at least one variable')
        if len(set(scope)) != len(scope):
            raise ValueError('factor scope {} repeats a variable'.format(scope))
        for i in scope:
            if not 0 <= i < n_vars:
                raise ValueError('factor scope {} references unknown variable {}'.format(scope, i))


@attr.s(frozen=True, repr=False)
class FactorGraph:
    """A discrete factor graph.

    Every variable owns a singleton block of coordinates; `factors` lists the remaining scopes.

    :param cardinalities:
        The number of states of every variable.
    :param factors:
        (optional) The factor scopes, each an ordered sequence of distinct variable indices.
    :type cardinalities: iterable
    :type factors: iterable
    """
    cardinalities = attr.ib(converter=_to_cardinalities, validator=_validate_cardinalities)
    factors = attr.ib(default=(), converter=_to_scopes, validator=_validate_scopes)

    _var_offsets = attr.ib(init=False, eq=False)
    _factor_offsets = attr.ib(init=False, eq=False)
    _factor_strides = attr.ib(init=False, eq=False)
    _q = attr.ib(init=False, eq=False)

    def __attrs_post_init__(self):
        var_offsets = np.concatenate([[0], np.cumsum(self.cardinalities)[:-1]]).astype(int)
        offset = int(sum(self.cardinalities))

        factor_offsets = []
        factor_strides = []
        for scope in self.factors:
            cards = [self.cardinalities[i] for i in scope]
            strides = [int(np.prod(cards[k + 1:], dtype=int)) for k in range(len(cards))]
            factor_offsets.append(offset)
            factor_strides.append(tuple(strides))
            offset += int(np.prod(cards, dtype=int))

        object.__setattr__(self, '_var_offsets', var_offsets)
        object.__setattr__(self, '_factor_offsets', np.array(factor_offsets, dtype=int))
        object.__setattr__(self, '_factor_strides', tuple(factor_strides))
        object.__setattr__(self, '_q', offset)

    def __repr__(self):
        return 'FactorGraph(n_vars={}, n_factors={}, q={})'.format(self.n_vars, self.n_factors, self.q)

    @classmethod
    def from_edges(cls, n_vars, edges, cardinality=2):
        """Creates a pairwise graph with uniform cardinality."""
        return cls([cardinality] * n_vars, edges)

    @classmethod
    def fully_connected(cls, n_vars, cardinality=2):
        """Creates a pairwise graph with an edge between every pair of variables."""
        return cls.from_edges(n_vars, itertools.combinations(range(n_vars), 2), cardinality)

    @classmethod
    def chain(cls, n_vars, cardinality=2):
        """Creates a pairwise chain 0 - 1 - ... - (n_vars - 1)."""
        return cls.from_edges(n_vars, [(i, i + 1) for i in range(n_vars - 1)], cardinality)

    @classmethod
    def grid(cls, height, width, cardinality=2):
        """Creates a 4-connected grid over `height` x `width` variables numbered row by row."""
        if height < 1 or width < 1:
            raise ValueError('grid sides must be positive, got {} x {}'.format(height, width))

        edges = []
        for r in range(height):
            for c in range(width):
                i = r * width + c
                if c + 1 < width:
                    edges.append((i, i + 1))
                if r + 1 < height:
                    edges.append((i, i + width))
        return cls.from_edges(height * width, edges, cardinality)

    @classmethod
    def from_dict(cls, data):
        return cls(data['cardinalities'], data.get('factors', ()))

    def to_dict(self):
        return {
            'cardinalities': list(self.cardinalities),
            'factors': [list(scope) for scope in self.factors]
        }

    @property
    def n_vars(self):
        return len(self.cardinalities)

    @property
    def n_factors(self):
        return len(self.factors)

    @property
    def q(self):
        """The number of coordinates of a score vector."""
        return self._q

    @property
    def state_space_size(self):
        return int(np.prod(self.cardinalities, dtype=object))

    @property
    def is_binary_pairwise(self):
        return all(c == 2 for c in self.cardinalities) and all(len(scope) == 2 for scope in self.factors)

    @property
    def is_forest(self):
        """Whether the pairwise factors form a forest (parallel edges count as a cycle)."""
        if any(len(scope) != 2 for scope in self.factors):
            return False

        parent = list(range(self.n_vars))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.factors:
            ri, rj = find(i), find(j)
            if ri == rj:
                return False
            parent[ri] = rj
        return True

    def neighbors(self, i):
        """Returns (factor index, other variable) pairs for the pairwise factors touching variable `i`."""
        return [(c, scope[1] if scope[0] == i else scope[0])
                for c, scope in enumerate(self.factors) if len(scope) == 2 and i in scope]

    def variable_slice(self, i):
        start = int(self._var_offsets[i])
        return slice(start, start + self.cardinalities[i])

    def factor_slice(self, c):
        start = int(self._factor_offsets[c])
        return slice(start, start + int(np.prod([self.cardinalities[i] for i in self.factors[c]], dtype=int)))

    def singleton_coordinates(self):
        """Returns the indices of all singleton coordinates."""
        return np.arange(int(sum(self.cardinalities)))

    def variable_coordinate(self, i, state):
        if not 0 <= state < self.cardinalities[i]:
            raise InvalidAssignmentError('state {} is out of range for variable {}'.format(state, i))
        return int(self._var_offsets[i]) + int(state)

    def factor_coordinate(self, c, assignment):
        scope = self.factors[c]
        if len(assignment) != len(scope):
            raise InvalidAssignmentError('factor {} expects {} states'.format(c, len(scope)))
        for i, state in zip(scope, assignment):
            if not 0 <= state < self.cardinalities[i]:
                raise InvalidAssignmentError('state {} is out of range for variable {}'.format(state, i))
        return int(self._factor_offsets[c]) + sum(int(s) * k for s, k in zip(assignment, self._factor_strides[c]))

    def factor_assignments(self, c):
        """Returns the local assignments of factor `c` in coordinate order."""
        return list(itertools.product(*[range(self.cardinalities[i]) for i in self.factors[c]]))

    def describe_coordinate(self, k):
        """Inverse of the assignment index.

        :return:
            ('variable', i, (state,)) or ('factor', c, local assignment).
        :rtype: tuple
        """
        if not 0 <= k < self.q:
            raise IndexError('coordinate {} is out of range'.format(k))

        n_singleton = int(sum(self.cardinalities))
        if k < n_singleton:
            i = int(np.searchsorted(self._var_offsets, k, side='right')) - 1
            return 'variable', i, (k - int(self._var_offsets[i]),)

        c = int(np.searchsorted(self._factor_offsets, k, side='right')) - 1
        return 'factor', c, self.factor_assignments(c)[k - int(self._factor_offsets[c])]

    def active_coordinates(self, labelings):
        """Returns the coordinates set to 1 by each labeling.

        :param labelings:
            Full assignments, shape (K, n_vars).
        :type labelings: numpy.ndarray
        :return:
            Coordinates, shape (K, n_vars + n_factors).
        :rtype: numpy.ndarray
        """
        labelings = np.asarray(labelings, dtype=int)
        columns = [self._var_offsets[None, :] + labelings]
        for c, scope in enumerate(self.factors):
            local = np.zeros(labelings.shape[0], dtype=int)
            for i, stride in zip(scope, self._factor_strides[c]):
                local += labelings[:, i] * stride
            columns.append((self._factor_offsets[c] + local)[:, None])
        return np.hstack(columns)


def _frozen_array(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


def _to_label(values):
    if values is None:
        return None
    return tuple(int(v) for v in values)


@attr.s(frozen=True, eq=False)
class Instance:
    """A single input with pre-evaluated features.

    :param features:
        Feature vectors for every coordinate, shape (q, d); row k holds phi_c(x, y_c) for the factor assignment of
        coordinate k.
    :param label:
        (optional) The full ground-truth assignment.
    :type features: numpy.ndarray
    :type label: iterable or None
    """
    features = attr.ib(converter=_frozen_array)
    label = attr.ib(default=None, converter=_to_label)

    @features.validator
    def _check_features(self, attribute, value):
        if value.ndim != 2:
            raise DimensionMismatchError('features must be a (q, d) matrix, got shape {}'.format(value.shape))
        if not np.all(np.isfinite(value)):
            raise ValueError('features must be finite')

    @property
    def feature_dim(self):
        return self.features.shape[1]

    def with_label(self, label):
        return Instance(self.features, label)

    def with_features(self, features):
        return Instance(features, self.label)


def check_score_vector(graph, vector, name='score vector'):
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (graph.q,):
        raise DimensionMismatchError('{} has shape {}, expected ({},)'.format(name, vector.shape, graph.q))
    return vector


def build_score_vector(w, inst):
    """Maps weights and an instance to the overcomplete score vector theta = Phi w.

    :param w:
        The weight vector of length d.
    :param inst:
        The instance.
    :type w: numpy.ndarray
    :type inst: Instance
    :return:
        The score vector of length q.
    :rtype: numpy.ndarray
    :raises DimensionMismatchError:
        If the feature dimension differs from the length of `w`.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.shape[0] != inst.feature_dim:
        raise DimensionMismatchError(
            'weights of shape {} do not match feature dimension {}'.format(w.shape, inst.feature_dim))
    return inst.features.dot(w)


def _check_assignment(graph, y):
    y = np.asarray(y)
    if y.shape != (graph.n_vars,):
        raise InvalidAssignmentError('assignment of shape {} does not cover {} variables'.format(y.shape, graph.n_vars))
    if not np.all(np.equal(np.mod(y, 1), 0)):
        raise InvalidAssignmentError('assignment {} holds non-integral states'.format(y.tolist()))

    y = y.astype(int)
    cards = np.array(graph.cardinalities)
    bad = np.flatnonzero((y < 0) | (y >= cards))
    if bad.size:
        raise InvalidAssignmentError('state {} is out of range for variable {}'.format(y[bad[0]], bad[0]))
    return y


def assignment_to_mu(graph, y):
    """Returns the 0/1 indicator vector of the local assignments consistent with `y`.

    :raises InvalidAssignmentError:
        If `y` does not assign a valid state to every variable.
    """
    y = _check_assignment(graph, y)
    mu = np.zeros(graph.q)
    mu[graph.active_coordinates(y[None, :])[0]] = 1.0
    return mu


def decode_assignment(graph, mu):
    """Reads an assignment off the singleton blocks of `mu` (first maximum per block)."""
    mu = check_score_vector(graph, mu, 'marginal vector')
    return tuple(int(np.argmax(mu[graph.variable_slice(i)])) for i in range(graph.n_vars))


def score_of(theta, mu):
    """Returns the inner product theta . mu."""
    theta = np.asarray(theta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if theta.shape != mu.shape:
        raise DimensionMismatchError('cannot score shape {} against shape {}'.format(theta.shape, mu.shape))
    return float(theta.dot(mu))


def joint_feature(graph, inst, y):
    """Returns phi(x, y), the sum of the per-factor features selected by `y`."""
    if inst.features.shape[0] != graph.q:
        raise DimensionMismatchError(
            'instance has {} feature rows but the graph has {} coordinates'.format(inst.features.shape[0], graph.q))
    return inst.features.T.dot(assignment_to_mu(graph, y))


def feature_norm_bound(inst):
    """Returns max_k ||phi_k||_2 over the rows of the instance (its contribution to R-hat)."""
    if inst.features.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(inst.features, axis=1)))


def weight_norm(w):
    """Returns ||w||_2."""
    return float(np.linalg.norm(np.asarray(w, dtype=float)))
