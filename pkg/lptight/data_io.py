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

"""Datasets: generators, perturbations and the JSON file format.

A dataset file is a JSON object with sorted keys::

    {"format": "lptight-dataset", "version": 1,
     "graph": {"cardinalities": [...], "factors": [[...], ...]},
     "feature_dim": d, "provenance": {...},
     "instances": [{"split": "train" | "test", "label": [...] (optional),
                    "features": {"shape": [q, d], "entries": [[row, column, value], ...]}}, ...]}

Feature rows follow the coordinate order of the graph; only nonzero entries are stored.
"""

__all__ = ['Dataset', 'FORMAT_NAME', 'FORMAT_VERSION', 'GENERATOR_MAP', 'SPLITS', 'add_feature_noise',
           'add_generator', 'counterexample_dataset', 'dataset_from_dict', 'dataset_from_scores', 'dataset_to_dict',
           'dumps_dataset', 'export_labels_csv', 'fetch_dataset', 'gen_attractive', 'gen_balanced', 'gen_multilabel',
           'gen_segmentation', 'gen_strong_singleton', 'generate', 'get_generators', 'load_dataset', 'loads_dataset',
           'randomize_labels', 'save_dataset']


import csv
import json
import logging
from threading import Lock

import attr
import numpy as np

from .errors import (
    DatasetFormatError,
    DimensionMismatchError,
    EmptyDatasetError,
    GeneratorAlreadyDefinedError,
    GeneratorNotFoundError,
    InvalidAssignmentError
)
from .factor_graph import (
    FactorGraph,
    Instance,
    assignment_to_mu,
    decode_assignment,
    feature_norm_bound
)
from .inference import exact_map
from .minimal_rep import (
    MinimalScores,
    flip_minimal,
    from_minimal
)
from .shared import request_dataset

logger = logging.getLogger(__name__)

FORMAT_NAME = 'lptight-dataset'
FORMAT_VERSION = 1
SPLITS = ('train', 'test')

_generator_lock = Lock()


@attr.s(frozen=True, eq=False)
class Dataset:
    """Instances sharing one graph template.

    :param graph:
        The graph template.
    :param instances:
        The instances.
    :param splits:
        (optional) 'train' or 'test' per instance. Defaults to all 'train'.
    :param provenance:
        (optional) How the dataset was made: generator, seed, noise.
    :type graph: FactorGraph
    :type instances: iterable
    :type splits: iterable or None
    :type provenance: dict or None
    """
    graph = attr.ib()
    instances = attr.ib(converter=tuple)
    splits = attr.ib(default=None)
    provenance = attr.ib(default=None)

    def __attrs_post_init__(self):
        splits = ('train',) * len(self.instances) if self.splits is None else tuple(self.splits)
        if len(splits) != len(self.instances):
            raise DimensionMismatchError('{} split tags for {} instances'.format(len(splits), len(self.instances)))
        for tag in splits:
            if tag not in SPLITS:
                raise ValueError('unknown split {!r}'.format(tag))
        object.__setattr__(self, 'splits', splits)
        object.__setattr__(self, 'provenance', dict(self.provenance or {}))

        dims = set()
        for k, inst in enumerate(self.instances):
            if inst.features.shape[0] != self.graph.q:
                raise DimensionMismatchError('instance {} has {} feature rows, the graph has {} coordinates'.format(
                    k, inst.features.shape[0], self.graph.q))
            dims.add(inst.feature_dim)
            if inst.label is not None:
                assignment_to_mu(self.graph, inst.label)
        if len(dims) > 1:
            raise DimensionMismatchError('instances disagree on the feature dimension: {}'.format(sorted(dims)))

    def __len__(self):
        return len(self.instances)

    @property
    def feature_dim(self):
        if not self.instances:
            raise EmptyDatasetError('the dataset holds no instances')
        return self.instances[0].feature_dim

    @property
    def feature_norm_bound(self):
        """R-hat, the largest feature norm over all instances."""
        return max([feature_norm_bound(inst) for inst in self.instances] or [0.0])

    @property
    def is_labeled(self):
        return all(inst.label is not None for inst in self.instances)

    def split(self, name):
        """Returns the instances tagged `name`."""
        if name not in SPLITS:
            raise ValueError('unknown split {!r}'.format(name))
        chosen = [k for k, tag in enumerate(self.splits) if tag == name]
        return Dataset(self.graph, [self.instances[k] for k in chosen], [name] * len(chosen), self.provenance)

    def labels(self):
        """Returns the label matrix, shape (M, n_vars)."""
        if not self.is_labeled:
            raise InvalidAssignmentError('the dataset holds unlabeled instances')
        return np.array([inst.label for inst in self.instances], dtype=int).reshape(len(self), self.graph.n_vars)

    def replace(self, instances=None, provenance=None):
        return Dataset(self.graph, self.instances if instances is None else instances, self.splits,
                       self.provenance if provenance is None else provenance)


def _label_by_map(graph, thetas):
    return [decode_assignment(graph, exact_map(graph, theta).mu) for theta in thetas]


def dataset_from_scores(graph, thetas, labels=None, splits=None, provenance=None):
    """Wraps score vectors as a dataset with a single feature, so that w = (1,) reproduces every score vector."""
    thetas = [np.asarray(theta, dtype=float) for theta in thetas]
    labels = [None] * len(thetas) if labels is None else labels
    instances = [Instance(theta[:, None], label) for theta, label in zip(thetas, labels)]
    return Dataset(graph, instances, splits, provenance)


def counterexample_dataset():
    """Two instances on a triangle on which LP training settles at a loose relaxation.

    Features 0..2 carry x_i on state 1 of variable i; feature 3 marks every disagreeing edge assignment. With
    w = (1, 1, 1, 1) the first instance is tight and the second has an integrality gap of 1.

    :rtype: Dataset
    """
    graph = FactorGraph.fully_connected(3)
    instances = []
    for x in ((2.0, 2.0, 2.0), (0.0, 0.0, 0.0)):
        features = np.zeros((graph.q, 4))
        for i in range(3):
            features[graph.variable_coordinate(i, 1), i] = x[i]
        for c in range(graph.n_factors):
            features[graph.factor_coordinate(c, (0, 1)), 3] = 1.0
            features[graph.factor_coordinate(c, (1, 0)), 3] = 1.0
        instances.append(Instance(features, (1, 1, 0)))
    return Dataset(graph, instances, provenance={'generator': 'counterexample'})


def _multilabel_features(graph, x):
    n_single = len(x) + 1
    dim = graph.n_vars * n_single + 4 * graph.n_factors
    features = np.zeros((graph.q, dim))
    for i in range(graph.n_vars):
        features[graph.variable_coordinate(i, 1), i * n_single:(i + 1) * n_single] = np.append(x, 1.0)
    block = graph.factor_slice(0).start if graph.n_factors else graph.q
    for c in range(graph.n_factors):
        for a in range(4):
            features[block + 4 * c + a, graph.n_vars * n_single + 4 * c + a] = 1.0
    return features


def gen_multilabel(n_labels=8, n_train=100, n_test=100, feature_dim=10, planted_w_scale=1.0, seed=0,
                   label_noise=0.0, pairwise_scale=0.25):
    """Generates multi-label data from a planted fully connected pairwise model.

    Every label has its own weights over the input x (plus a bias) on its state-1 coordinate, and every edge has one
    indicator feature per joint assignment. Inputs are standard normal, labels are the exact MAP labelings under a
    planted weight vector, then each label bit flips with probability `label_noise`. The planted biases are zero and
    the planted edge weights are shrunk by `pairwise_scale`, so the input decides most labels and both states are
    about equally frequent.

    :param n_labels:
        The number of binary labels.
    :param n_train:
        The number of training instances.
    :param n_test:
        The number of test instances.
    :param feature_dim:
        The input dimension.
    :param planted_w_scale:
        The standard deviation of the planted weights.
    :param seed:
        The random seed.
    :param label_noise:
        The bit-flip probability.
    :param pairwise_scale:
        The planted edge weights relative to the input weights.
    :type n_labels: int
    :type n_train: int
    :type n_test: int
    :type feature_dim: int
    :type planted_w_scale: float
    :type seed: int
    :type label_noise: float
    :type pairwise_scale: float
    :rtype: Dataset
    """
    if not 2 <= n_labels <= 16:
        raise ValueError('n_labels must lie in [2, 16], got {}'.format(n_labels))
    if not 0 <= label_noise <= 1:
        raise ValueError('label_noise must lie in [0, 1], got {}'.format(label_noise))
    if pairwise_scale < 0:
        raise ValueError('pairwise_scale must be nonnegative, got {}'.format(pairwise_scale))

    random_state = np.random.RandomState(seed)
    graph = FactorGraph.fully_connected(n_labels)
    dim = n_labels * (feature_dim + 1) + 4 * graph.n_factors
    planted = random_state.normal(0.0, planted_w_scale, size=dim)
    planted[feature_dim:n_labels * (feature_dim + 1):feature_dim + 1] = 0.0
    planted[n_labels * (feature_dim + 1):] *= pairwise_scale

    features = [_multilabel_features(graph, random_state.normal(size=feature_dim))
                for _ in range(n_train + n_test)]
    labels = _label_by_map(graph, [f.dot(planted) for f in features])
    flips = random_state.uniform(size=(len(labels), n_labels)) < label_noise
    labels = [tuple(int(v) for v in np.where(flip, 1 - np.array(y), y)) for y, flip in zip(labels, flips)]

    provenance = {
        'generator': 'multilabel',
        'seed': seed,
        'params': {'n_labels': n_labels, 'n_train': n_train, 'n_test': n_test, 'feature_dim': feature_dim,
                   'planted_w_scale': planted_w_scale, 'label_noise': label_noise,
                   'pairwise_scale': pairwise_scale},
        'planted_w': planted.tolist()
    }
    return Dataset(graph, [Instance(f, y) for f, y in zip(features, labels)],
                   ['train'] * n_train + ['test'] * n_test, provenance)


def _segmentation_features(graph, pixels):
    feature_dim = pixels.shape[1]
    features = np.zeros((graph.q, feature_dim + 5))
    for i in range(graph.n_vars):
        features[graph.variable_coordinate(i, 1), :feature_dim] = pixels[i]
        features[graph.variable_coordinate(i, 1), feature_dim] = 1.0
    for c in range(graph.n_factors):
        for a in range(4):
            features[graph.factor_slice(c).start + a, feature_dim + 1 + a] = 1.0
    return features


def _ellipse_mask(height, width, random_state):
    rows, cols = np.mgrid[0:height, 0:width]
    cy, cx = random_state.uniform(0, height), random_state.uniform(0, width)
    ry = random_state.uniform(height / 4.0, height / 2.0)
    rx = random_state.uniform(width / 4.0, width / 2.0)
    return (((rows - cy) / ry) ** 2 + ((cols - cx) / rx) ** 2 <= 1.0).astype(int).ravel()


def gen_segmentation(height=5, width=5, n_train=20, n_test=20, feature_dim=3, signal=1.0, noise=1.0, seed=0):
    """Generates foreground-background segmentation data on a 4-connected grid.

    The foreground of every image is a random ellipse. Pixel i sees x_i = signal * (2 y_i - 1) * u + N(0, noise^2),
    with u a random unit direction shared by the whole dataset. The weights are tied across pixels and edges: the
    state-1 row of a pixel holds x_i and a bias, and every edge has one indicator feature per joint assignment, so
    d = feature_dim + 5.

    :param height:
        The image height.
    :param width:
        The image width.
    :param n_train:
        The number of training images.
    :param n_test:
        The number of test images.
    :param feature_dim:
        The per-pixel input dimension.
    :param signal:
        The distance of each class mean from the origin along u.
    :param noise:
        The standard deviation of the pixel noise.
    :param seed:
        The random seed.
    :rtype: Dataset
    """
    if height < 1 or width < 1 or height * width < 2:
        raise ValueError('images need at least two pixels, got {} x {}'.format(height, width))
    if feature_dim < 1:
        raise ValueError('feature_dim must be positive, got {}'.format(feature_dim))
    if noise < 0:
        raise ValueError('noise must be nonnegative, got {}'.format(noise))

    random_state = np.random.RandomState(seed)
    graph = FactorGraph.grid(height, width)
    direction = random_state.normal(size=feature_dim)
    direction /= np.linalg.norm(direction)

    instances = []
    for _ in range(n_train + n_test):
        y = _ellipse_mask(height, width, random_state)
        pixels = signal * (2 * y - 1)[:, None] * direction[None, :]
        pixels = pixels + random_state.normal(0.0, noise, pixels.shape)
        instances.append(Instance(_segmentation_features(graph, pixels), tuple(int(v) for v in y)))

    provenance = {
        'generator': 'segmentation',
        'seed': seed,
        'params': {'height': height, 'width': width, 'n_train': n_train, 'n_test': n_test,
                   'feature_dim': feature_dim, 'signal': signal, 'noise': noise},
        'direction': direction.tolist()
    }
    return Dataset(graph, instances, ['train'] * n_train + ['test'] * n_test, provenance)


def _topology(n_vars, edge_prob, random_state):
    if edge_prob >= 1:
        return FactorGraph.fully_connected(n_vars)
    edges = [(i, j) for i in range(n_vars) for j in range(i + 1, n_vars) if random_state.uniform() < edge_prob]
    return FactorGraph.from_edges(n_vars, edges)


def _score_dataset(name, n_vars, n_instances, edge_prob, seed, make_minimal, params):
    random_state = np.random.RandomState(seed)
    graph = _topology(n_vars, edge_prob, random_state)
    thetas = [from_minimal(make_minimal(graph, random_state)) for _ in range(n_instances)]
    provenance = {'generator': name, 'seed': seed, 'params': dict(params, n_vars=n_vars, n_instances=n_instances,
                                                                    edge_prob=edge_prob)}
    return dataset_from_scores(graph, thetas, _label_by_map(graph, thetas), provenance=provenance)


def gen_attractive(n_vars=6, n_instances=10, edge_prob=1.0, scale=1.0, seed=0):
    """Generates binary pairwise models whose edges are all attractive (d = 1)."""
    def make(graph, random_state):
        return MinimalScores(graph, random_state.normal(0.0, scale, graph.n_vars),
                             np.abs(random_state.normal(0.0, scale, graph.n_factors)))
    return _score_dataset('attractive', n_vars, n_instances, edge_prob, seed, make, {'scale': scale})


def gen_balanced(n_vars=6, n_instances=10, edge_prob=1.0, scale=1.0, seed=0):
    """Generates balanced models: attractive models with a random subset of variables flipped (d = 1)."""
    def make(graph, random_state):
        attractive = MinimalScores(graph, random_state.normal(0.0, scale, graph.n_vars),
                                   np.abs(random_state.normal(0.0, scale, graph.n_factors)))
        flip_set = np.flatnonzero(random_state.uniform(size=graph.n_vars) < 0.5)
        return flip_minimal(attractive, flip_set)
    return _score_dataset('balanced', n_vars, n_instances, edge_prob, seed, make, {'scale': scale})


def gen_strong_singleton(n_vars=6, n_instances=10, edge_prob=1.0, scale=1.0, margin=1.0, seed=0):
    """Generates models whose singleton scores dominate their edges (d = 1).

    Edge scores are Gaussian with either sign; variable i gets a random sign times margin_i + sum_j |edge_ij|, with
    margin_i uniform in [margin / 2, margin], so every variable keeps a slack of at least margin / 2.
    """
    def make(graph, random_state):
        edge = random_state.normal(0.0, scale, graph.n_factors)
        total = np.zeros(graph.n_vars)
        for c, (i, j) in enumerate(graph.factors):
            total[i] += abs(edge[c])
            total[j] += abs(edge[c])
        signs = np.where(random_state.uniform(size=graph.n_vars) < 0.5, -1.0, 1.0)
        margins = random_state.uniform(margin / 2.0, margin, graph.n_vars)
        return MinimalScores(graph, signs * (margins + total), edge)
    return _score_dataset('strong-singleton', n_vars, n_instances, edge_prob, seed, make,
                          {'scale': scale, 'margin': margin})


def _noisy_multilabel(graph, features, feature_dim, random_state, sigma):
    x = features[graph.variable_coordinate(0, 1), :feature_dim]
    return _multilabel_features(graph, x + random_state.normal(0.0, sigma, feature_dim))


def _noisy_segmentation(graph, features, feature_dim, random_state, sigma):
    features = np.array(features)
    rows = [graph.variable_coordinate(i, 1) for i in range(graph.n_vars)]
    features[rows, :feature_dim] += random_state.normal(0.0, sigma, (len(rows), feature_dim))
    return features


# Generators whose singleton rows hold an input plus a bias column
_INPUT_NOISE = {
    'multilabel': _noisy_multilabel,
    'segmentation': _noisy_segmentation
}


def add_feature_noise(ds, sigma, seed=0):
    """Adds N(0, sigma^2) noise to the inputs behind the singleton features.

    Multilabel and segmentation data get noise on their raw inputs: one draw of x per multilabel instance, copied into
    every label block, and one draw per pixel. Bias and edge features stay as they are. Any other dataset gets noise on
    the support of its singleton rows (entries nonzero in any instance). Labels are left untouched.

    :rtype: Dataset
    """
    if sigma < 0:
        raise ValueError('sigma must be nonnegative, got {}'.format(sigma))
    if sigma == 0 or not len(ds):
        return ds

    random_state = np.random.RandomState(seed)
    perturb = _INPUT_NOISE.get(ds.provenance.get('generator'))
    if perturb is not None:
        feature_dim = ds.provenance['params']['feature_dim']
        instances = [inst.with_features(perturb(ds.graph, inst.features, feature_dim, random_state, sigma))
                     for inst in ds.instances]
        return ds.replace(instances, dict(ds.provenance, noise_sigma=sigma, noise_seed=seed))

    n_singleton = int(sum(ds.graph.cardinalities))
    support = np.zeros((n_singleton, ds.feature_dim), dtype=bool)
    for inst in ds.instances:
        support |= inst.features[:n_singleton] != 0

    instances = []
    for inst in ds.instances:
        features = np.array(inst.features)
        features[:n_singleton] += np.where(support, random_state.normal(0.0, sigma, support.shape), 0.0)
        instances.append(inst.with_features(features))
    return ds.replace(instances, dict(ds.provenance, noise_sigma=sigma, noise_seed=seed))



def randomize_labels(ds, seed=0, split=None):
    """Shuffles every label column independently across instances, keeping per-label counts.

    :param ds:
        A labeled dataset.
    :param seed:
        (optional) The random seed.
    :param split:
        (optional) Only shuffle within this split.
    :rtype: Dataset
    """
    labels = ds.labels()
    chosen = np.array([k for k, tag in enumerate(ds.splits) if split is None or tag == split], dtype=int)
    random_state = np.random.RandomState(seed)
    for i in range(ds.graph.n_vars):
        labels[chosen, i] = labels[random_state.permutation(chosen), i]

    instances = [inst.with_label(label) for inst, label in zip(ds.instances, labels)]
    return ds.replace(instances, dict(ds.provenance, labels_randomized=seed))


def _sparse(features):
    rows, cols = np.nonzero(features)
    return {
        'shape': list(features.shape),
        'entries': [[int(r), int(c), float(features[r, c])] for r, c in zip(rows, cols)]
    }


def dataset_to_dict(ds):
    instances = []
    for inst, tag in zip(ds.instances, ds.splits):
        entry = {'split': tag, 'features': _sparse(inst.features)}
        if inst.label is not None:
            entry['label'] = list(inst.label)
        instances.append(entry)

    return {
        'format': FORMAT_NAME,
        'version': FORMAT_VERSION,
        'graph': ds.graph.to_dict(),
        'feature_dim': ds.feature_dim if len(ds) else 0,
        'provenance': ds.provenance,
        'instances': instances
    }


def _field(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DatasetFormatError('missing field {}{}'.format(where, key))
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DatasetFormatError('field {}{} has the wrong type'.format(where, key))
    return value


def _features_from(entry, q, dim, where):
    features = _field(entry, 'features', dict, where)
    shape = _field(features, 'shape', list, where + 'features.')
    if shape != [q, dim]:
        raise DatasetFormatError('field {}features.shape is {}, expected [{}, {}]'.format(where, shape, q, dim))

    array = np.zeros((q, dim))
    for k, item in enumerate(_field(features, 'entries', list, where + 'features.')):
        if not isinstance(item, list) or len(item) != 3:
            raise DatasetFormatError('field {}features.entries[{}] is not a [row, column, value] triple'.format(
                where, k))
        row, col, value = item
        if not (isinstance(row, int) and isinstance(col, int) and 0 <= row < q and 0 <= col < dim):
            raise DatasetFormatError('field {}features.entries[{}] is out of range'.format(where, k))
        try:
            array[row, col] = float(value)
        except (TypeError, ValueError):
            raise DatasetFormatError('field {}features.entries[{}] has a non-numeric value {!r}'.format(
                where, k, value))
    return array


def dataset_from_dict(data):
    """Builds a dataset from its JSON document, naming the offending field on errors.

    :rtype: Dataset
    :raises DatasetFormatError:
        If the document does not follow the dataset schema.
    """
    if _field(data, 'format', str, '') != FORMAT_NAME:
        raise DatasetFormatError('field format must be {!r}'.format(FORMAT_NAME))
    if _field(data, 'version', int, '') != FORMAT_VERSION:
        raise DatasetFormatError('field version must be {}'.format(FORMAT_VERSION))

    try:
        graph = FactorGraph.from_dict(_field(data, 'graph', dict, ''))
    except (KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError('field graph is invalid: {}'.format(e))

    dim = _field(data, 'feature_dim', int, '')
    provenance = data.get('provenance', {})
    if not isinstance(provenance, dict):
        raise DatasetFormatError('field provenance has the wrong type')

    instances = []
    splits = []
    for k, entry in enumerate(_field(data, 'instances', list, '')):
        where = 'instances[{}].'.format(k)
        splits.append(entry.get('split', 'train') if isinstance(entry, dict) else None)
        if splits[-1] not in SPLITS:
            raise DatasetFormatError('field {}split must be one of {}'.format(where, SPLITS))

        features = _features_from(entry, graph.q, dim, where)
        label = entry.get('label')
        if label is not None:
            try:
                assignment_to_mu(graph, label)
            except (InvalidAssignmentError, TypeError, ValueError):
                raise DatasetFormatError('field {}label is not a valid assignment'.format(where))
        instances.append(Instance(features, label))

    return Dataset(graph, instances, splits, provenance)


def dumps_dataset(ds):
    return json.dumps(dataset_to_dict(ds), sort_keys=True, separators=(',', ':')) + '\n'


def loads_dataset(text, source='<string>'):
    try:
        data = json.loads(text)
    except ValueError as e:
        raise DatasetFormatError('{}: invalid JSON at line {} column {}: {}'.format(
            source, getattr(e, 'lineno', '?'), getattr(e, 'colno', '?'), getattr(e, 'msg', e)))
    return dataset_from_dict(data)


def save_dataset(ds, path):
    with open(path, 'w') as f:
        f.write(dumps_dataset(ds))
    logger.info('wrote %d instances to %s', len(ds), path)


def load_dataset(path):
    """Loads a dataset file.

    :raises DatasetFormatError:
        If the file is not valid JSON or breaks the schema.
    """
    with open(path) as f:
        return loads_dataset(f.read(), str(path))


def fetch_dataset(url, timeout=30):
    """Downloads a dataset file.

    :raises RequestFailedError:
        If the request could not be made.
    :raises RequestNotOKError:
        If the server did not answer 200.
    """
    return loads_dataset(request_dataset(url, timeout).text, url)


def export_labels_csv(ds, path):
    """Writes the label matrix as CSV with a split column."""
    labels = ds.labels()
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['split'] + ['label_{}'.format(i) for i in range(ds.graph.n_vars)])
        for tag, row in zip(ds.splits, labels):
            writer.writerow([tag] + row.tolist())


def add_generator(name, func):
    """Registers a dataset generator.

    :param name:
        An identifier for the generator.
    :param func:
        A function taking keyword parameters and returning a Dataset.
    :type name: string
    :type func: function
    :raises GeneratorAlreadyDefinedError:
        If 'name' is already a defined generator.
    """
    if name in GENERATOR_MAP:
        raise GeneratorAlreadyDefinedError('{} is already defined as a generator'.format(name))

    with _generator_lock:
        # Ensure not added by the time entered lock
        if name in GENERATOR_MAP:
            raise GeneratorAlreadyDefinedError('{} is already defined as a generator'.format(name))

        GENERATOR_MAP[name] = func


def get_generators():
    """Returns a set of the generator names.

    :rtype: set
    """
    return set(GENERATOR_MAP.keys())


def generate(name, **params):
    """Runs a registered generator.

    :raises GeneratorNotFoundError:
        If 'name' is not a defined generator.
    """
    if name not in GENERATOR_MAP:
        raise GeneratorNotFoundError('{} is not a defined generator'.format(name))
    return GENERATOR_MAP[name](**params)


GENERATOR_MAP = {
    'attractive': gen_attractive,
    'balanced': gen_balanced,
    'counterexample': counterexample_dataset,
    'multilabel': gen_multilabel,
    'segmentation': gen_segmentation,
    'strong-singleton': gen_strong_singleton
}
