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

"""Command-line front end.

Every command resolves a RunConfig (defaults, then a YAML/JSON config file, then flags), writes it to
`run_config.json` in the output directory and then runs. Exit codes: 0 on success, 1 when the counter-example
reproduction fails, 2 on validation errors, 3 on numerical failures.
"""

__all__ = ['EXIT_NUMERICAL', 'EXIT_VALIDATION', 'RunConfig', 'build_run_config', 'cli', 'cmd_bound', 'cmd_certify',
           'cmd_diagnose', 'cmd_gen_data', 'cmd_reproduce_counterexample', 'cmd_train', 'load_config_file', 'main']


import functools
import json
import logging
import os

import attr
import click
import numpy as np
import yaml

from .data_io import (
    SPLITS,
    add_feature_noise,
    counterexample_dataset,
    export_labels_csv,
    fetch_dataset,
    generate,
    load_dataset,
    randomize_labels,
    save_dataset
)
from .errors import (
    ConfigValidationError,
    NumericalError,
    RequestFailedError,
    RequestNotOKError,
    UnsupportedModelClassError,
    ValidationError
)
from .factor_graph import (
    assignment_to_mu,
    build_score_vector,
    weight_norm
)
from .inference import (
    exact_map,
    local_polytope,
    lp_map
)
from .minimal_rep import (
    fractional_optimum,
    prop1_certificate,
    prop2_certificate
)
from .polytope_lp import to_mps
from .shared import parallel_map
from .ssvm import (
    TrainConfig,
    bcfw_train,
    relaxed_objective
)
from .stores import (
    RunStore,
    WEIGHTS_FILE,
    jsonable
)
from .tightness import (
    DEFAULT_GAMMAS,
    MAX_FRACTION,
    fractionality_report,
    generalization_bound,
    hinge_decomposition,
    integrality_margin_histogram,
    ramp_loss,
    random_weights_probe,
    tightness_fraction
)

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

COMMANDS = ('train', 'diagnose', 'certify', 'bound', 'reproduce-counterexample', 'gen-data')
COUNTEREXAMPLE_TOL = 1e-8
DIAGNOSE_FILE = 'diagnose.json'


def _to_gammas(values):
    if isinstance(values, (int, float)):
        values = [values]
    return tuple(float(v) for v in values)


def _check_gammas(instance, attribute, value):
    if not value or any(g <= 0 for g in value):
        raise ConfigValidationError('gammas must be a non-empty list of positive values, got {}'.format(value))


def _check_delta(instance, attribute, value):
    if not 0 < value < 1:
        raise ConfigValidationError('delta must lie in (0, 1), got {}'.format(value))


def _check_nonnegative(instance, attribute, value):
    if value < 0:
        raise ConfigValidationError('{} must be nonnegative, got {}'.format(attribute.name, value))


def _check_positive(instance, attribute, value):
    if value <= 0:
        raise ConfigValidationError('{} must be positive, got {}'.format(attribute.name, value))


def _check_command(instance, attribute, value):
    if value not in COMMANDS:
        raise ConfigValidationError('unknown command {!r}'.format(value))


@attr.s(frozen=True)
class RunConfig:
    """Everything a command needs; written verbatim into the run directory."""
    command = attr.ib(validator=_check_command)
    dataset = attr.ib(default=None)
    generator = attr.ib(default=None)
    generator_params = attr.ib(default=attr.Factory(dict), converter=dict)
    train = attr.ib(default=attr.Factory(TrainConfig))
    gammas = attr.ib(default=DEFAULT_GAMMAS, converter=_to_gammas, validator=_check_gammas)
    delta = attr.ib(default=0.05, converter=float, validator=_check_delta)
    bound_constant = attr.ib(default=1.0, converter=float, validator=_check_positive)
    output = attr.ib(default='lptight-run', converter=str)
    weights = attr.ib(default=None)
    diagnostics = attr.ib(default=None)
    workers = attr.ib(default=None)
    seed = attr.ib(default=0, converter=int)
    noise = attr.ib(default=0.0, converter=float, validator=_check_nonnegative)
    random_labels = attr.ib(default=False, converter=bool)
    random_trials = attr.ib(default=0, converter=int, validator=_check_nonnegative)
    probe_scale = attr.ib(default=1.0, converter=float, validator=_check_nonnegative)
    bins = attr.ib(default=10, converter=int)
    beta_min = attr.ib(default=0.0, converter=float)
    max_fraction = attr.ib(default=MAX_FRACTION, converter=float)
    ramp_mean = attr.ib(default=None)
    counterexample_w = attr.ib(default=1.0, converter=float)
    labels_csv = attr.ib(default=None)
    dump_mps = attr.ib(default=False, converter=bool)

    def to_dict(self):
        return attr.asdict(self)


def load_config_file(path):
    """Reads a YAML (or JSON) mapping of RunConfig / TrainConfig fields."""
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigValidationError('cannot read config file {}: {}'.format(path, e))

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigValidationError('config file {} must hold a mapping'.format(path))
    return data


def build_run_config(command, config_file=None, **overrides):
    """Resolves a RunConfig from defaults, an optional config file and explicit overrides (None means unset).

    TrainConfig fields may appear at the top level or under a `train` key; `seed` seeds both.

    :rtype: RunConfig
    :raises ConfigValidationError:
        On unknown keys or invalid values.
    """
    values = load_config_file(config_file) if config_file else {}
    train_values = dict(values.pop('train', None) or {})
    values.update({k: v for k, v in overrides.items() if v is not None})

    run_keys = {a.name for a in attr.fields(RunConfig)}
    train_keys = {a.name for a in attr.fields(TrainConfig)}
    for key in list(values):
        if key in train_keys and key not in run_keys:
            train_values[key] = values.pop(key)

    unknown = set(values) - run_keys
    if unknown:
        raise ConfigValidationError('unknown config keys: {}'.format(', '.join(sorted(unknown))))
    if 'seed' in values:
        train_values.setdefault('seed', values['seed'])
    values.pop('command', None)

    try:
        return RunConfig(command, train=TrainConfig(**train_values), **values)
    except (TypeError, ValueError) as e:
        raise ConfigValidationError(str(e))


def _load_data(cfg):
    if cfg.dataset:
        if cfg.dataset.startswith(('http://', 'https://')):
            ds = fetch_dataset(cfg.dataset)
        else:
            try:
                ds = load_dataset(cfg.dataset)
            except OSError as e:
                raise ConfigValidationError('cannot read dataset {}: {}'.format(cfg.dataset, e))
    elif cfg.generator:
        try:
            ds = generate(cfg.generator, **cfg.generator_params)
        except (TypeError, ValueError) as e:
            raise ConfigValidationError('bad parameters for generator {}: {}'.format(cfg.generator, e))
    else:
        raise ConfigValidationError('a dataset path or a generator is required')

    if cfg.noise > 0:
        ds = add_feature_noise(ds, cfg.noise, cfg.seed)
    return ds


def _load_weights(cfg, dim):
    if cfg.weights is None:
        logger.info('no weights given, using w = 1')
        return np.ones(dim)

    if isinstance(cfg.weights, (list, tuple)):
        w = np.array(cfg.weights, dtype=float)
    elif os.path.isdir(str(cfg.weights)):
        w = np.array(RunStore(cfg.weights).read_json(WEIGHTS_FILE)['w'], dtype=float)
    elif os.path.isfile(str(cfg.weights)):
        with open(cfg.weights) as f:
            w = np.array(json.load(f)['w'], dtype=float)
    else:
        try:
            w = np.array([float(v) for v in str(cfg.weights).split(',')])
        except ValueError:
            raise ConfigValidationError('weights must be a weights file, a run directory or a comma-separated list')

    if w.shape != (dim,):
        raise ConfigValidationError('expected {} weights, got {}'.format(dim, w.size))
    return w


def _store(cfg):
    store = RunStore(cfg.output)
    store.write_config(cfg.to_dict())
    return store


def cmd_train(cfg):
    """Trains on the train split and logs metrics against the test split.

    :rtype: dict
    """
    store = _store(cfg)
    ds = _load_data(cfg)
    if cfg.random_labels:
        ds = randomize_labels(ds, cfg.seed, split='train')

    train, test = ds.split('train'), ds.split('test')
    state, records = bcfw_train(train, cfg.train, test if len(test) else None, store.append_metrics, cfg.workers)
    w = state.w_average if cfg.train.averaging else state.w
    store.write_weights(w)

    summary = {
        'passes': len(records),
        'final': records[-1],
        'weight_norm': weight_norm(w),
        'consistency_residual': state.consistency_residual(),
        'train_tightness': tightness_fraction(train, w, cfg.train.tol, cfg.max_fraction, cfg.workers),
        'test_tightness': tightness_fraction(test, w, cfg.train.tol, cfg.max_fraction, cfg.workers)
        if len(test) else None
    }
    store.write_json('summary.json', summary)
    return summary


def _diagnose_instance(graph, w, gammas, inst):
    theta = build_score_vector(w, inst)
    entry = {}
    if inst.label is not None:
        entry['decomposition'] = hinge_decomposition(graph, theta, assignment_to_mu(graph, inst.label))

    report = fractionality_report(graph, theta, gammas[0])
    entry['I_star'] = report.I_star
    entry['F_star'] = report.F_star
    entry['D'] = report.D
    entry['loss_L'] = report.loss_L
    entry['exact'] = report.exact
    entry['ramp'] = {str(g): (ramp_loss(report.D, g) if report.ramp_phi is not None else None) for g in gammas}
    return entry


def _ramp_means(entries, gammas):
    means = {}
    for g in gammas:
        values = [entry['ramp'][str(g)] for entry in entries if entry['ramp'][str(g)] is not None]
        means[str(g)] = float(np.mean(values)) if values else None
    return means


def cmd_diagnose(cfg):
    """Per-instance decompositions and fractionality, margin histogram and tightness fractions.

    :rtype: dict
    """
    store = _store(cfg)
    ds = _load_data(cfg)
    w = _load_weights(cfg, ds.feature_dim)

    entries = parallel_map(functools.partial(_diagnose_instance, ds.graph, w, cfg.gammas), ds.instances, cfg.workers)
    for k, (entry, tag) in enumerate(zip(entries, ds.splits)):
        entry['index'] = k
        entry['split'] = tag

    ramp_mean = {'all': _ramp_means(entries, cfg.gammas)}
    for name in SPLITS:
        ramp_mean[name] = _ramp_means([entry for entry in entries if entry['split'] == name], cfg.gammas)

    histogram = integrality_margin_histogram(ds, w, cfg.bins, cfg.workers)
    store.write_csv('margins.csv', ['bin_left', 'bin_right', 'count'],
                    zip(histogram.bin_edges[:-1], histogram.bin_edges[1:], histogram.counts))

    tightness = {'all': tightness_fraction(ds, w, cfg.train.tol, cfg.max_fraction, cfg.workers)}
    for name in ('train', 'test'):
        part = ds.split(name)
        if len(part):
            tightness[name] = tightness_fraction(part, w, cfg.train.tol, cfg.max_fraction, cfg.workers)

    report = {
        'n_instances': len(ds),
        'instances': entries,
        'ramp_mean': ramp_mean,
        'loss_mean': float(np.mean([entry['loss_L'] for entry in entries])),
        'margins': {'values': histogram.margins, 'skipped': histogram.skipped},
        'tightness': tightness
    }
    if cfg.random_trials:
        report['random_probe'] = random_weights_probe(ds, cfg.random_trials, cfg.probe_scale, cfg.seed,
                                                      cfg.train.tol, cfg.workers)
    if cfg.dump_mps:
        for k, inst in enumerate(ds.instances):
            with open(store.path('instance_{}.mps'.format(k)), 'w') as f:
                f.write(to_mps(local_polytope(ds.graph), build_score_vector(w, inst), 'INSTANCE{}'.format(k)))

    store.write_json(DIAGNOSE_FILE, report)
    return report


def _certify_instance(graph, w, beta_min, inst):
    theta = build_score_vector(w, inst)
    try:
        return {'prop1': prop1_certificate(graph, theta), 'prop2': prop2_certificate(graph, theta, beta_min)}
    except UnsupportedModelClassError as e:
        return {'unsupported': str(e)}


def cmd_certify(cfg):
    """Per-instance tightness certificates.

    :rtype: dict
    """
    store = _store(cfg)
    ds = _load_data(cfg)
    w = _load_weights(cfg, ds.feature_dim)

    entries = parallel_map(functools.partial(_certify_instance, ds.graph, w, cfg.beta_min), ds.instances,
                           cfg.workers)
    supported = [entry for entry in entries if 'unsupported' not in entry]
    kinds = {}
    for entry in supported:
        for key in ('prop1', 'prop2'):
            kinds[entry[key].kind] = kinds.get(entry[key].kind, 0) + 1

    report = {
        'instances': [dict(entry, index=k) for k, entry in enumerate(entries)],
        'certificate_counts': kinds,
        'unsupported': len(entries) - len(supported),
        'prop2_satisfied_fraction': float(np.mean([entry['prop2'].satisfied_fraction for entry in supported]))
        if supported else None
    }
    store.write_json('certificates.json', report)
    return report


def _train_ramp_means(directory):
    path = os.path.join(str(directory), DIAGNOSE_FILE)
    if not os.path.isfile(path):
        raise ConfigValidationError('no {} in diagnostics directory {}'.format(DIAGNOSE_FILE, directory))

    try:
        with open(path) as f:
            means = json.load(f)['ramp_mean']['train']
    except (OSError, ValueError) as e:
        raise ConfigValidationError('cannot read {}: {}'.format(path, e))
    except (KeyError, TypeError):
        raise ConfigValidationError('{} holds no train ramp means'.format(path))

    if not isinstance(means, dict):
        raise ConfigValidationError('{} holds no train ramp means'.format(path))
    return means


def cmd_bound(cfg):
    """Evaluates the generalization bound over the gamma grid.

    The empirical ramp means come from `ramp_mean`, from the train entry of a diagnose run directory given as
    `diagnostics`, or are computed on the train split.

    :rtype: dict
    """
    store = _store(cfg)
    ds = _load_data(cfg)
    train = ds.split('train')
    w = _load_weights(cfg, ds.feature_dim)

    if cfg.ramp_mean is not None:
        ramp_means = {str(g): float(cfg.ramp_mean) for g in cfg.gammas}
    elif cfg.diagnostics is not None:
        ramp_means = _train_ramp_means(cfg.diagnostics)
    else:
        entries = parallel_map(functools.partial(_diagnose_instance, ds.graph, w, cfg.gammas), train.instances,
                               cfg.workers)
        ramp_means = _ramp_means(entries, cfg.gammas)

    reports = []
    for g in cfg.gammas:
        mean = ramp_means.get(str(g))
        if mean is None:
            raise ConfigValidationError('no empirical ramp mean available for gamma {}'.format(g))
        reports.append(generalization_bound(len(train), ds.graph.q, weight_norm(w), ds.feature_norm_bound, g,
                                            cfg.delta, mean, cfg.bound_constant))

    result = {'bounds': reports}
    store.write_json('bound.json', result)
    return result


def cmd_reproduce_counterexample(cfg):
    """Rebuilds the two-instance counter-example and checks its hinge values at the given disagreement weight.

    At weight 1 every value is asserted; at other weights the values are only reported.

    :return:
        The report, with `passed` True / False at weight 1 and None otherwise.
    :rtype: dict
    """
    ds = counterexample_dataset()
    graph = ds.graph
    w = np.array([1.0, 1.0, 1.0, cfg.counterexample_w])

    decompositions = []
    values = []
    for inst in ds.instances:
        theta = build_score_vector(w, inst)
        decompositions.append(hinge_decomposition(graph, theta, assignment_to_mu(graph, inst.label)))
        values.append({'lp': lp_map(graph, theta).value, 'ilp': exact_map(graph, theta, solver='ilp').value})

    second_theta = build_score_vector(w, ds.instances[1])
    fractional = fractional_optimum(graph, second_theta)

    grid = np.round(np.linspace(0.0, 2.0, 41), 10)
    objective = [relaxed_objective(np.array([1.0, 1.0, 1.0, v]), ds, task_loss='zero') for v in grid]
    best = int(np.argmin(objective))

    report = {
        'w': w,
        'relaxed_hinge': [d.relaxed_hinge for d in decompositions],
        'exact_hinge': [d.exact_hinge for d in decompositions],
        'integrality_gap': [d.integrality_gap for d in decompositions],
        'values': values,
        'fractional_vertex': fractional.eta,
        'fractional_value': fractional.value,
        'objective_grid': {'w': grid, 'relaxed_objective': objective, 'argmin': float(grid[best])},
        'passed': None
    }

    if cfg.counterexample_w == 1.0:
        checks = {
            'relaxed_hinge': np.allclose(report['relaxed_hinge'], [0, 1], atol=COUNTEREXAMPLE_TOL),
            'exact_hinge': np.allclose(report['exact_hinge'], [0, 0], atol=COUNTEREXAMPLE_TOL),
            'integrality_gap': np.allclose(report['integrality_gap'], [0, 1], atol=COUNTEREXAMPLE_TOL),
            'fractional_value': abs(values[1]['lp'] - 3.0) <= COUNTEREXAMPLE_TOL,
            'integral_value': abs(values[1]['ilp'] - 2.0) <= COUNTEREXAMPLE_TOL,
            'fractional_vertex': fractional.eta == (0.5, 0.5, 0.5),
            'relaxed_objective_minimum': grid[best] == 1.0 and abs(objective[best] - 0.5) <= COUNTEREXAMPLE_TOL
        }
        report['checks'] = checks
        report['passed'] = all(bool(v) for v in checks.values())

    if cfg.output:
        _store(cfg).write_json('counterexample.json', report)
    return report


def cmd_gen_data(cfg):
    """Writes a generated dataset (and optionally its label matrix) to disk.

    :rtype: dict
    """
    ds = _load_data(cfg)
    if cfg.random_labels:
        ds = randomize_labels(ds, cfg.seed, split='train')

    store = _store(cfg)
    path = store.path('dataset.json')
    save_dataset(ds, path)
    if cfg.labels_csv:
        export_labels_csv(ds, cfg.labels_csv)
    return {'path': path, 'n_instances': len(ds), 'q': ds.graph.q, 'feature_dim': ds.feature_dim}


def _execute(func, cfg_factory):
    try:
        cfg = cfg_factory()
        result = func(cfg)
    except (ValidationError, ValueError) as e:
        click.echo('error: {}'.format(e), err=True)
        raise SystemExit(EXIT_VALIDATION)
    except (RequestFailedError, RequestNotOKError) as e:
        click.echo('error: {}'.format(e), err=True)
        raise SystemExit(EXIT_VALIDATION)
    except NumericalError as e:
        click.echo('numerical failure: {}'.format(e), err=True)
        raise SystemExit(EXIT_NUMERICAL)
    return result


def _echo(document):
    click.echo(json.dumps(jsonable(document), sort_keys=True, indent=2))


def _parse_pairs(pairs, name):
    parsed = {}
    for pair in pairs:
        key, sep, value = pair.partition('=')
        if not sep:
            raise click.BadParameter('expected KEY=VALUE, got {!r}'.format(pair), param_hint=name)
        parsed[key.strip()] = yaml.safe_load(value)
    return parsed


def _data_options(func):
    options = [
        click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False),
                     help='YAML or JSON config file.'),
        click.option('--dataset', help='Dataset file or http(s) URL.'),
        click.option('--generator', help='Registered dataset generator.'),
        click.option('--param', 'params', multiple=True, help='Generator parameter KEY=VALUE (repeatable).'),
        click.option('--output', '-o', help='Run directory.'),
        click.option('--seed', type=int, help='Random seed.'),
        click.option('--noise', type=float, help='Gaussian noise sigma added to singleton features.'),
        click.option('--workers', type=int, help='Worker processes (default: $LPTIGHT_WORKERS or 1).')
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _overrides(params, **values):
    if params:
        values['generator_params'] = _parse_pairs(params, '--param')
    return values


@click.group()
@click.option('--verbose', '-v', count=True, help='Increase log verbosity.')
@click.option('--quiet', '-q', is_flag=True, help='Only log errors.')
def cli(verbose, quiet):
    """LP relaxation tightness laboratory."""
    level = logging.ERROR if quiet else (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


@cli.command()
@_data_options
@click.option('--regularization', type=float, help='Regularization weight lambda.')
@click.option('--passes', type=int, help='Passes over the training set.')
@click.option('--mode', 'inference_mode', type=click.Choice(['relaxed', 'exact']), help='Loss-augmented inference.')
@click.option('--averaging/--no-averaging', default=None, help='Report averaged iterates.')
@click.option('--task-loss', type=click.Choice(['hamming', 'zero']), help='Task loss.')
@click.option('--accuracy', type=click.Choice(['f1', 'node']), help='Accuracy measure.')
@click.option('--fix-weight', 'fixed', multiple=True, help='Hold weight INDEX=VALUE fixed (repeatable).')
@click.option('--random-labels', is_flag=True, default=None, help='Shuffle training label columns.')
def train(config_file, params, fixed, **values):
    """Train a structured SVM with BCFW."""
    if fixed:
        values['fixed_weights'] = {int(k): float(v) for k, v in _parse_pairs(fixed, '--fix-weight').items()}
    _echo(_execute(cmd_train, lambda: build_run_config('train', config_file, **_overrides(params, **values))))


@cli.command()
@_data_options
@click.option('--weights', help='Weights file, run directory or comma-separated values (default: all ones).')
@click.option('--gamma', 'gammas', type=float, multiple=True, help='Ramp margin (repeatable).')
@click.option('--bins', type=int, help='Margin histogram bins.')
@click.option('--random-trials', type=int, help='Random-weight tightness trials.')
@click.option('--dump-mps', is_flag=True, default=None, help='Write every instance LP in free MPS format.')
def diagnose(config_file, params, gammas, **values):
    """Tightness diagnostics for fixed weights."""
    values['gammas'] = gammas or None
    _echo(_execute(cmd_diagnose, lambda: build_run_config('diagnose', config_file, **_overrides(params, **values))))


@cli.command()
@_data_options
@click.option('--weights', help='Weights file, run directory or comma-separated values (default: all ones).')
@click.option('--beta-min', type=float, help='Smallest singleton slack worth certifying.')
def certify(config_file, params, **values):
    """Tightness certificates for fixed weights."""
    _echo(_execute(cmd_certify, lambda: build_run_config('certify', config_file, **_overrides(params, **values))))


@cli.command()
@_data_options
@click.option('--weights', help='Weights file, run directory or comma-separated values (default: all ones).')
@click.option('--gamma', 'gammas', type=float, multiple=True, help='Ramp margin (repeatable).')
@click.option('--delta', type=float, help='Failure probability.')
@click.option('--constant', 'bound_constant', type=float, help='Constant of the complexity term.')
@click.option('--ramp-mean', type=float, help='Empirical ramp mean to use instead of computing it.')
@click.option('--diagnostics', help='Diagnose run directory to read ramp means from.')
def bound(config_file, params, gammas, **values):
    """Evaluate the tightness generalization bound."""
    values['gammas'] = gammas or None
    _echo(_execute(cmd_bound, lambda: build_run_config('bound', config_file, **_overrides(params, **values))))


@cli.command('reproduce-counterexample')
@click.option('--w', 'counterexample_w', type=float, help='Disagreement weight (checks run at 1).')
@click.option('--output', '-o', help='Run directory.')
def reproduce_counterexample(**values):
    """Reproduce the loose-relaxation counter-example."""
    report = _execute(cmd_reproduce_counterexample, lambda: build_run_config('reproduce-counterexample', **values))
    _echo(report)
    if report['passed'] is not None:
        click.echo('PASS' if report['passed'] else 'FAIL', err=True)
        if not report['passed']:
            raise SystemExit(EXIT_FAILED)


@cli.command('gen-data')
@_data_options
@click.option('--labels-csv', help='Also write the label matrix to this CSV file.')
@click.option('--random-labels', is_flag=True, default=None, help='Shuffle training label columns.')
def gen_data(config_file, params, **values):
    """Generate a dataset file."""
    _echo(_execute(cmd_gen_data, lambda: build_run_config('gen-data', config_file, **_overrides(params, **values))))


def main():
    cli(prog_name='lptight')
