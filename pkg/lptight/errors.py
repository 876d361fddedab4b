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


class LPTightBaseException(Exception):
    """Base Exception for LP Tight."""


class ValidationError(LPTightBaseException):
    """Validation Error."""


class NumericalError(LPTightBaseException):
    """Numerical Error."""


class ConfigValidationError(ValidationError):
    """Config Validation Error."""


class DatasetFormatError(ValidationError):
    """Dataset Format Error."""


class DimensionMismatchError(ValidationError):
    """Dimension Mismatch Error."""


class EmptyDatasetError(ValidationError):
    """Empty Dataset Error."""


class GeneratorAlreadyDefinedError(ValidationError):
    """Generator Already Defined Error."""


class GeneratorNotFoundError(ValidationError):
    """Generator Not Found Error."""


class InvalidAssignmentError(ValidationError):
    """Invalid Assignment Error."""


class StateSpaceTooLargeError(ValidationError):
    """State Space Too Large Error."""


class UnsupportedModelClassError(ValidationError):
    """Unsupported Model Class Error."""


class BoundChainViolationError(NumericalError):
    """Bound Chain Violation Error."""


class IterationLimitError(NumericalError):
    """Iteration Limit Error.

    :param message:
        The error message.
    :param basis:
        The basic coordinates of the last basis reached before giving up.
    :type message: string
    :type basis: tuple
    """
    def __init__(self, message, basis=()):
        super(IterationLimitError, self).__init__(message)
        self.basis = tuple(basis)


class NodeLimitError(NumericalError):
    """Node Limit Error.

    :param message:
        The error message.
    :param incumbent:
        The best labeling found before giving up, or None.
    :type message: string
    :type incumbent: MapResult or None
    """
    def __init__(self, message, incumbent=None):
        super(NodeLimitError, self).__init__(message)
        self.incumbent = incumbent


class SolverError(NumericalError):
    """Solver Error."""


class TrainingError(NumericalError):
    """Training Error.

    :param message:
        The error message.
    :param iteration:
        The number of block steps taken before the failure.
    :type message: string
    :type iteration: int
    """
    def __init__(self, message, iteration):
        super(TrainingError, self).__init__(message)
        self.iteration = iteration


class RequestFailedError(LPTightBaseException):
    """Request Failed Error."""


class RequestNotOKError(LPTightBaseException):
    """Request Not OK Error."""
