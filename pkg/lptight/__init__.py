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

"""A laboratory for measuring when LP relaxations of structured prediction models are tight.

Basic usage:
    >>> import lptight
    >>> ds = lptight.generate('multilabel', n_labels=6, n_train=20, n_test=20)
    >>> state, records = lptight.bcfw_train(ds.split('train'), lptight.TrainConfig(passes=10))
    >>> lptight.tightness_fraction(ds.split('test'), state.w)

The main library components are:
    - FactorGraph - the graph template shared by the instances of a dataset
    - Inference - relaxed (local polytope LP) and exact MAP over a score vector
    - Training - a structured SVM trained with block-coordinate Frank-Wolfe
    - Diagnostics - hinge decompositions, fractionality losses, certificates and the generalization bound

This exports:
    - lp_map(...) / exact_map(...) solve the relaxed / exact MAP problem
    - loss_augmented_map(...) solves loss-augmented inference in either mode
    - bcfw_train(...) trains a structured SVM
    - hinge_decomposition(...) splits the relaxed hinge into the exact hinge and the integrality gap
    - fractionality_report(...) computes I*, F* and the fractionality losses
    - prop1_certificate(...) / prop2_certificate(...) certify tightness of binary pairwise models
    - generalization_bound(...) evaluates the tightness generalization bound
    - generate(...) / add_generator(...) run and register dataset generators
    - load_dataset(...) / save_dataset(...) read and write the dataset file format
"""

import logging
from os import path

from .data_io import (
    Dataset,
    add_feature_noise,
    add_generator,
    counterexample_dataset,
    fetch_dataset,
    generate,
    get_generators,
    load_dataset,
    randomize_labels,
    save_dataset
)
from .errors import (
    LPTightBaseException,
    BoundChainViolationError,
    ConfigValidationError,
    DatasetFormatError,
    DimensionMismatchError,
    EmptyDatasetError,
    GeneratorAlreadyDefinedError,
    GeneratorNotFoundError,
    InvalidAssignmentError,
    IterationLimitError,
    NodeLimitError,
    NumericalError,
    RequestFailedError,
    RequestNotOKError,
    SolverError,
    StateSpaceTooLargeError,
    TrainingError,
    UnsupportedModelClassError,
    ValidationError
)
from .factor_graph import (
    FactorGraph,
    Instance,
    assignment_to_mu,
    build_score_vector,
    decode_assignment
)
from .inference import (
    exact_map,
    loss_augmented_map,
    lp_map,
    round_solution
)
from .minimal_rep import (
    classify_and_balance,
    fractional_optimum,
    prop1_certificate,
    prop2_certificate,
    to_minimal
)
from .ssvm import (
    TrainConfig,
    bcfw_train,
    exact_objective,
    relaxed_objective
)
from .tightness import (
    bound_chain_check,
    fractionality_report,
    generalization_bound,
    hinge_decomposition,
    tightness_fraction
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

with open(path.join(path.dirname(__file__), 'VERSION')) as _f:
    __version__ = _f.read().strip()
