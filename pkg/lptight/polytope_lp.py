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

"""The local marginal polytope and a dense revised simplex method over it."""

__all__ = ['IntegralityReport', 'LinearProgram', 'VertexSolution', 'build_local_polytope', 'classify_integrality',
           'constraint_residual', 'simplex_solve', 'to_mps']


from collections import namedtuple
import logging

import attr
import numpy as np

from .errors import (
    DimensionMismatchError,
    IterationLimitError,
    SolverError
)
from .factor_graph import check_score_vector
from .shared import (
    INTEGRALITY_TOL,
    PIVOT_TOL
)

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
UNBOUNDED = 'unbounded'
INFEASIBLE = 'infeasible'

FEASIBILITY_TOL = 1e-7

VertexSolution = namedtuple('VertexSolution', ['mu', 'value', 'basis', 'status'])
IntegralityReport = namedtuple('IntegralityReport', ['integral', 'fractional_fraction'])


def _frozen_array(values):
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@attr.s(frozen=True, eq=False)
class LinearProgram:
    """An equality-form linear program max c.mu s.t. A mu = b, mu >= 0.

    :param matrix:
        The constraint matrix A, shape (m, q).
    :param rhs:
        The right-hand side b, shape (m,).
    :param objective:
        (optional) The default objective vector, shape (q,). Defaults to zeros.
    :param row_names:
        (optional) One name per row, used when dumping the program.
    :type matrix: numpy.ndarray
    :type rhs: numpy.ndarray
    :type objective: numpy.ndarray or None
    :type row_names: tuple
    """
    matrix = attr.ib(converter=_frozen_array)
    rhs = attr.ib(converter=_frozen_array)
    objective = attr.ib(default=None)
    row_names = attr.ib(default=(), converter=tuple)

    def __attrs_post_init__(self):
        if self.matrix.ndim != 2 or self.rhs.shape != (self.matrix.shape[0],):
            raise DimensionMismatchError(
                'constraint matrix {} and right-hand side {} disagree'.format(self.matrix.shape, self.rhs.shape))

        objective = np.zeros(self.n_cols) if self.objective is None else self.objective
        objective = _frozen_array(objective)
        if objective.shape != (self.n_cols,):
            raise DimensionMismatchError('objective of shape {} does not match {} columns'.format(
                objective.shape, self.n_cols))
        object.__setattr__(self, 'objective', objective)

        if not self.row_names:
            object.__setattr__(self, 'row_names', tuple('r{}'.format(r) for r in range(self.n_rows)))

    @property
    def n_rows(self):
        return self.matrix.shape[0]

    @property
    def n_cols(self):
        return self.matrix.shape[1]

    def with_fixings(self, fixings):
        """Returns a copy with an extra row mu[k] = value for every (k, value) in `fixings`.

        :param fixings:
            Coordinates mapped to the value they are pinned to.
        :type fixings: dict
        :rtype: LinearProgram
        """
        if not fixings:
            return self

        coords = sorted(fixings)
        rows = np.zeros((len(coords), self.n_cols))
        rows[np.arange(len(coords)), coords] = 1.0
        return LinearProgram(
            np.vstack([self.matrix, rows]),
            np.concatenate([self.rhs, [float(fixings[k]) for k in coords]]),
            self.objective,
            self.row_names + tuple('fix_{}'.format(k) for k in coords))


def build_local_polytope(graph):
    """Builds the local marginal polytope constraints of a factor graph.

    One normalization row per variable, then one marginalization row per (factor, member variable, member state).
    Redundant rows are kept.

    :param graph:
        The factor graph.
    :type graph: FactorGraph
    :rtype: LinearProgram
    """
    rows = []
    rhs = []
    names = []

    for i in range(graph.n_vars):
        row = np.zeros(graph.q)
        row[graph.variable_slice(i)] = 1.0
        rows.append(row)
        rhs.append(1.0)
        names.append('norm_{}'.format(i))

    for c, scope in enumerate(graph.factors):
        assignments = np.array(graph.factor_assignments(c), dtype=int)
        block = graph.factor_slice(c)
        for position, i in enumerate(scope):
            for state in range(graph.cardinalities[i]):
                row = np.zeros(graph.q)
                row[block.start + np.flatnonzero(assignments[:, position] == state)] = 1.0
                row[graph.variable_coordinate(i, state)] = -1.0
                rows.append(row)
                rhs.append(0.0)
                names.append('marg_{}_{}_{}'.format(c, i, state))

    return LinearProgram(np.array(rows), np.array(rhs), row_names=names)


def constraint_residual(lp, mu):
    """Returns max |A mu - b|."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (lp.n_cols,):
        raise DimensionMismatchError('vector of shape {} does not match {} columns'.format(mu.shape, lp.n_cols))
    if lp.n_rows == 0:
        return 0.0
    return float(np.max(np.abs(lp.matrix.dot(mu) - lp.rhs)))


class _RevisedSimplex:
    """Dense revised simplex on A x = b, x >= 0 with artificial-variable Phase I.

    The basis inverse is updated in product form and refactorized every `refactor_every` pivots. Pricing is Dantzig's
    rule; after 5n consecutive degenerate pivots it falls back to Bland's rule until progress resumes.
    """
    def __init__(self, matrix, rhs, pivot_tol, max_iterations, refactor_every=50):
        matrix = np.array(matrix, dtype=float)
        rhs = np.array(rhs, dtype=float)
        negative = rhs < 0
        matrix[negative] *= -1.0
        rhs[negative] *= -1.0

        m, n = matrix.shape
        self._n = n
        self._A = np.hstack([matrix, np.eye(m)])
        self._b = rhs
        self._basis = np.arange(n, n + m)
        self._pivot_tol = pivot_tol
        self._max_iterations = max_iterations or max(1000, 50 * (m + n))
        self._refactor_every = refactor_every
        self._bland_after = 5 * n
        self._B_inv = np.eye(m)
        self._since_refactor = 0
        self.iterations = 0

    def _refactor(self):
        try:
            self._B_inv = np.linalg.inv(self._A[:, self._basis])
        except np.linalg.LinAlgError:
            raise SolverError('basis became singular after {} pivots'.format(self.iterations))
        self._since_refactor = 0

    def _pivot(self, leaving, entering, direction):
        row = self._B_inv[leaving] / direction[leaving]
        self._B_inv -= np.outer(direction, row)
        self._B_inv[leaving] = row
        self._basis[leaving] = entering
        self.iterations += 1
        self._since_refactor += 1
        if self._since_refactor >= self._refactor_every:
            self._refactor()

    def _iterate(self, cost, allowed):
        degenerate = 0
        bland = False

        while True:
            x_basic = self._B_inv.dot(self._b)
            duals = cost[self._basis].dot(self._B_inv)
            reduced = cost - duals.dot(self._A)
            reduced[~allowed] = 0.0
            reduced[self._basis] = 0.0

            candidates = np.flatnonzero(reduced < -self._pivot_tol)
            if candidates.size == 0:
                return OPTIMAL

            if self.iterations >= self._max_iterations:
                raise IterationLimitError(
                    'simplex exceeded {} iterations'.format(self._max_iterations), basis=sorted(self._basis))

            if bland:
                entering = int(candidates[0])
            else:
                entering = int(candidates[np.argmin(reduced[candidates])])

            direction = self._B_inv.dot(self._A[:, entering])
            rows = np.flatnonzero(direction > self._pivot_tol)
            if rows.size == 0:
                return UNBOUNDED

            ratios = np.maximum(x_basic[rows], 0.0) / direction[rows]
            step = ratios.min()
            ties = rows[ratios <= step + self._pivot_tol]
            leaving = int(ties[np.argmin(self._basis[ties])])

            if step <= self._pivot_tol:
                degenerate += 1
                if not bland and degenerate > self._bland_after:
                    logger.debug('switching to Bland rule after %d degenerate pivots', degenerate)
                    bland = True
            else:
                degenerate = 0
                bland = False

            self._pivot(leaving, entering, direction)

    def _drive_out_artificials(self):
        redundant = []
        for r in range(len(self._basis)):
            if self._basis[r] < self._n:
                continue

            row = self._B_inv[r].dot(self._A[:, :self._n])
            candidates = np.flatnonzero(np.abs(row) > self._pivot_tol)
            if candidates.size:
                entering = int(candidates[np.argmax(np.abs(row[candidates]))])
                self._pivot(r, entering, self._B_inv.dot(self._A[:, entering]))
            else:
                redundant.append(r)

        if redundant:
            logger.debug('dropping %d redundant rows', len(redundant))
            keep = [r for r in range(len(self._basis)) if r not in set(redundant)]
            self._A = self._A[keep]
            self._b = self._b[keep]
            self._basis = self._basis[keep]
            self._refactor()

    def _solution(self):
        x = np.zeros(self._A.shape[1])
        if len(self._basis):
            x[self._basis] = np.linalg.solve(self._A[:, self._basis], self._b)
        x = x[:self._n]
        x[np.abs(x) < 1e-12] = 0.0
        return x

    def maximize(self, c):
        n, m = self._n, len(self._b)
        allowed = np.zeros(n + m, dtype=bool)
        allowed[:n] = True

        phase_one = np.zeros(n + m)
        phase_one[n:] = 1.0
        self._iterate(phase_one, allowed)

        infeasibility = float(phase_one[self._basis].dot(self._B_inv.dot(self._b)))
        if infeasibility > FEASIBILITY_TOL:
            logger.debug('phase one ended with infeasibility %g', infeasibility)
            return VertexSolution(None, float('nan'), tuple(sorted(self._basis)), INFEASIBLE)

        self._drive_out_artificials()
        logger.debug('phase one done after %d pivots', self.iterations)

        phase_two = np.zeros(n + m)
        phase_two[:n] = -c
        status = self._iterate(phase_two, allowed)
        basis = tuple(int(k) for k in sorted(self._basis))

        if status == UNBOUNDED:
            return VertexSolution(None, float('inf'), basis, UNBOUNDED)

        x = self._solution()
        return VertexSolution(x, float(c.dot(x)), basis, OPTIMAL)


def simplex_solve(lp, c, pivot_tol=PIVOT_TOL, max_iterations=None):
    """Maximizes c . mu over a linear program with the revised simplex method.

    :param lp:
        The linear program.
    :param c:
        The objective vector.
    :param pivot_tol:
        (optional) Entries below this magnitude are never pivoted on. Defaults to 1e-9.
    :param max_iterations:
        (optional) The pivot limit. Defaults to max(1000, 50 (m + q)).
    :type lp: LinearProgram
    :type c: numpy.ndarray
    :type pivot_tol: float
    :type max_iterations: int or None
    :return:
        An optimal basic feasible solution, or a solution with status unbounded / infeasible.
    :rtype: VertexSolution
    :raises IterationLimitError:
        If the pivot limit is reached; the error carries the last basis.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (lp.n_cols,):
        raise DimensionMismatchError('objective of shape {} does not match {} columns'.format(c.shape, lp.n_cols))
    return _RevisedSimplex(lp.matrix, lp.rhs, pivot_tol, max_iterations).maximize(c)


def classify_integrality(graph, mu, tol=INTEGRALITY_TOL):
    """Classifies a point of the local polytope as integral or fractional.

    :param graph:
        The factor graph that lays out `mu`.
    :param mu:
        The marginal vector.
    :param tol:
        (optional) Distance to {0, 1} tolerated for an integral coordinate. Defaults to 1e-6.
    :type graph: FactorGraph
    :type mu: numpy.ndarray
    :type tol: float
    :return:
        Whether every coordinate is integral, and the fraction of variables whose singleton block is fractional.
    :rtype: IntegralityReport
    """
    mu = check_score_vector(graph, mu, 'marginal vector')
    off = np.minimum(np.abs(mu), np.abs(mu - 1.0)) > tol
    fractional_vars = sum(1 for i in range(graph.n_vars) if off[graph.variable_slice(i)].any())
    return IntegralityReport(not off.any(), fractional_vars / float(graph.n_vars))


def _format_number(value):
    return repr(float(value))


def to_mps(lp, c=None, name='LPTIGHT'):
    """Dumps the program in free MPS format (maximization sense) for cross-checking with external solvers.

    :param lp:
        The linear program.
    :param c:
        (optional) The objective, defaults to the program's own objective.
    :param name:
        (optional) The problem name.
    :type lp: LinearProgram
    :type c: numpy.ndarray or None
    :type name: string
    :rtype: string
    """
    c = lp.objective if c is None else np.asarray(c, dtype=float)
    lines = ['NAME {}'.format(name), 'OBJSENSE', '    MAX', 'ROWS', ' N  OBJ']
    lines.extend(' E  {}'.format(row) for row in lp.row_names)
    lines.append('COLUMNS')

    for k in range(lp.n_cols):
        column = 'mu_{}'.format(k)
        if c[k] != 0:
            lines.append('    {} OBJ {}'.format(column, _format_number(c[k])))
        for r in np.flatnonzero(lp.matrix[:, k]):
            lines.append('    {} {} {}'.format(column, lp.row_names[r], _format_number(lp.matrix[r, k])))

    lines.append('RHS')
    for r in np.flatnonzero(lp.rhs):
        lines.append('    RHS {} {}'.format(lp.row_names[r], _format_number(lp.rhs[r])))
    lines.append('ENDATA')
    return '\n'.join(lines) + '\n'
