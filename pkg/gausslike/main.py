# -*- coding: utf-8 -*-
"""
gausslike command line.

    gausslike dimension --potential power:1 --growth superexp:2 --d 2
    gausslike sweep --potential power:1 --growth superexp:2 --sweep beta \
        --range 1.01:4:0.01
    gausslike verify lemA --schedule t1-ii --potential power:1 \
        --growth superexp:2 --n-max 200
    gausslike root --schedule geometric --s0 10 --t0 5 --depth 40

Exit codes: 0 success, 1 bad input, 2 a regime without a value or a failed
verification.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import dataclasses
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import OUTPUT_DIR_ENV, VERSION
from .counting import (
    TupleConstraint, enumerate_A, g_bound, g_sum, ghat_bound, ghat_sum)
from .covering import dimension_root
from .dim_formulas import closed_form_dimension
from .enums import GrowthKind, PotentialKind, ScheduleCase, Verdict
from .input_output import (
    open_report, parse_config_file, parse_growth_spec, parse_potential_spec,
    parse_range)
from .models.ifs_core import IfsSystem
from .models.potentials import GrowthRate, Potential
from .registry import ResultRegistry
from .schedules import (
    DigitSchedule, EpsilonPolicy, convergence_profile, geometric_schedule,
    sample_word, schedule_case, theorem_schedule)
from .verification import LemmaCase, run_suite
from .warning import ConfigError, GausslikeError, WindowUndefinedError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_NO_VALUE = 2

COMMANDS = ('dimension', 'sweep', 'verify', 'sample', 'counting', 'root')
SWEEP_VARIABLES = ('alpha', 'beta', 'gamma', 'a', 'b', 'c', 'd')
SYSTEMS = ('affine', 'gauss')


@dataclasses.dataclass
class RunConfig(object):
    """
    Every field can be set in a key=value config file or by the flag of the
    same name (underscores become dashes). Flags win over the file, the file
    over these defaults.

    Parameters
    ------------
    potential, growth : str
        'power:1', 'logpower:2', 'stretched:0.5'; 'polyexp:0.5',
        'superexp:2', 'doubleexp:2'.

    epsilon : float, optional
        Fixed eps of an upper-bound schedule. Without it and without
        `epsilon_rate` each case uses its default policy.

    epsilon_rate : float, optional
        eps_n = n^-rate, for a lower-bound schedule.

    schedule : str, optional
        A schedule case ('t1-ii', 't3-iii', ...) or 'geometric'. By default
        the case of (potential, growth).

    depths : str, optional
        Range of depths for `root`, e.g. '10:40:10'; by default only `depth`.
    """
    command: str = 'dimension'
    potential: str = 'power:1'
    growth: str = 'superexp:2'
    d: float = 2.0
    system: str = 'affine'
    schedule: Optional[str] = None
    epsilon: Optional[float] = None
    epsilon_rate: Optional[float] = None
    depth: int = 30
    depths: Optional[str] = None
    n_max: int = 200
    k_max: int = 200
    seed: int = 0
    s0: float = 10.0
    t0: float = 5.0
    ratio: float = 2.0
    m: float = 10.0
    n: int = 2
    s: float = 1.0
    suite: Optional[str] = None
    sweep: Optional[str] = None
    range: Optional[str] = None
    tolerance: float = 1e-10
    workers: int = 1
    output: Optional[str] = None
    log_level: str = 'WARNING'

    @classmethod
    def from_sources(cls, file_values: Dict[str, str],
                     flag_values: Dict[str, Any]) -> 'RunConfig':
        """
        Raises
        ------------
        ConfigError
            Unknown key or a value of the wrong type.
        """
        converters = _field_converters()
        values: Dict[str, Any] = {}
        for source in (file_values, flag_values):
            for key, value in source.items():
                if key not in converters:
                    raise ConfigError('Unknown option "{}".'.format(key))
                if isinstance(value, str):
                    try:
                        value = converters[key](value)
                    except ValueError:
                        raise ConfigError('Bad value "{}" for {}.'.format(
                            value, key))
                values[key] = value
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError('Unknown command "{}".'.format(self.command))
        if self.system not in SYSTEMS:
            raise ConfigError('system must be one of {}, got "{}".'.format(
                SYSTEMS, self.system))
        if self.workers < 1:
            raise ConfigError('workers must be >= 1.')
        if self.sweep is not None and self.sweep not in SWEEP_VARIABLES:
            raise ConfigError('Cannot sweep "{}"; choose from {}.'.format(
                self.sweep, ', '.join(SWEEP_VARIABLES)))

    def metadata(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def _optional(convert: Callable[[str], Any]) -> Callable[[str], Any]:
    def wrapped(text: str):
        return None if text.strip().lower() in ('', 'none') else convert(text)
    return wrapped


def _field_converters() -> Dict[str, Callable[[str], Any]]:
    converters: Dict[str, Callable[[str], Any]] = {}
    for field in dataclasses.fields(RunConfig):
        if field.default is None:
            base = float if field.name.startswith('epsilon') else str
            converters[field.name] = _optional(base)
        elif type(field.default) in (int, float):
            converters[field.name] = type(field.default)
        else:
            converters[field.name] = str
    return converters


# shorthand flags: --a 1 is --potential power:1, --beta 2 is --growth
# superexp:2
_SHAPE_FLAGS = {'a': ('potential', 'power:{}'),
                'b': ('potential', 'logpower:{}'),
                'c': ('potential', 'stretched:{}'),
                'alpha': ('growth', 'polyexp:{}'),
                'beta': ('growth', 'superexp:{}'),
                'gamma': ('growth', 'doubleexp:{}')}


class _ShapeAction(argparse.Action):
    def __init__(self, option_strings, dest, template, **kwargs) -> None:
        self.template = template
        super().__init__(option_strings, dest, **kwargs)

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, self.template.format(values))


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False,
                                     argument_default=argparse.SUPPRESS)
    parent.add_argument('--config', help='key=value config file')
    parent.add_argument('-v', '--verbose', action='count',
                        help='log INFO (-v) or DEBUG (-vv) to stderr')
    for field in dataclasses.fields(RunConfig):
        if field.name in ('command', 'suite'):
            continue
        flags = ['--' + field.name.replace('_', '-')]
        if field.name == 'n_max':
            flags.append('--nmax')
        parent.add_argument(*flags, dest=field.name,
                            help='default: {}'.format(field.default))
    for flag, (dest, template) in _SHAPE_FLAGS.items():
        parent.add_argument('--' + flag, dest=dest, action=_ShapeAction,
                            template=template,
                            help='same as --{} {}'.format(
                                dest, template.format(flag.upper())))
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='gausslike',
        description='Multifractal level sets of d-decaying Gauss-like '
                    'systems.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(VERSION))
    commands = parser.add_subparsers(dest='command')
    parent = _common_options()
    for command in COMMANDS:
        sub = commands.add_parser(command, parents=[parent],
                                  argument_default=argparse.SUPPRESS)
        if command == 'verify':
            sub.add_argument('suite', help='axioms, counting, covering, '
                             'lemA, potentials, regimes or schedules')
    return parser


def parse_run_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as error:
        if error.code:
            raise ConfigError('Invalid command line.')
        raise
    flags = vars(namespace)
    if flags.get('command') is None:
        raise ConfigError('No command given; choose from {}.'.format(
            ', '.join(COMMANDS)))
    config_file = flags.pop('config', None)
    verbose = flags.pop('verbose', None)
    file_values = parse_config_file(config_file) if config_file else {}
    file_values.pop('command', None)
    config = RunConfig.from_sources(file_values, flags)
    if verbose:
        config.log_level = 'DEBUG' if verbose > 1 else 'INFO'
    return config


def _output_path(config: RunConfig) -> Optional[str]:
    if config.output is not None:
        return config.output
    directory = os.environ.get(OUTPUT_DIR_ENV)
    if directory:
        return os.path.join(directory, '{}.csv'.format(config.command))
    return None


def _write(config: RunConfig, columns: Sequence[str],
           rows: Sequence[Dict[str, Any]]) -> None:
    with open_report(_output_path(config), columns,
                     config.metadata()) as writer:
        writer.write_rows(rows)


def _system(config: RunConfig) -> IfsSystem:
    if config.system == 'gauss':
        return IfsSystem.mirrored_gauss()
    return IfsSystem.affine(config.d)


def _epsilon_policy(config: RunConfig) -> Optional[EpsilonPolicy]:
    if config.epsilon_rate is not None:
        return EpsilonPolicy.vanishing(config.epsilon_rate)
    if config.epsilon is not None:
        return EpsilonPolicy.fixed(config.epsilon)
    return None


def _schedule_case(name: str) -> ScheduleCase:
    key = name.strip().upper().replace('-', '_')
    try:
        return ScheduleCase[key]
    except KeyError:
        raise ConfigError('Unknown schedule "{}".'.format(name))


def _schedule(config: RunConfig) -> DigitSchedule:
    if config.schedule == 'geometric':
        return geometric_schedule(config.s0, config.t0, config.ratio)
    case = _schedule_case(config.schedule) if config.schedule else None
    return theorem_schedule(parse_potential_spec(config.potential),
                            parse_growth_spec(config.growth), case,
                            _epsilon_policy(config))


def _parallel_map(config: RunConfig, function: Callable[[Any], Dict],
                  items: Sequence[Any], columns: Sequence[str]) -> List[Dict]:
    """
    function over items on `workers` threads; rows come back in item order.
    """
    registry = ResultRegistry(columns)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = {pool.submit(function, item): index
                   for index, item in enumerate(items)}
        for future, index in futures.items():
            registry.add_row(index, future.result())
    return registry.rows()


DIMENSION_COLUMNS = ('potential', 'growth', 'd', 'regime', 'value',
                     'requires_distortion')


def _dimension_row(potential: Potential, growth: GrowthRate,
                   d: float) -> Dict[str, Any]:
    result = closed_form_dimension(potential, growth, d)
    return {'potential': potential.label, 'growth': growth.label, 'd': d,
            'regime': result.regime.label, 'value': result.value,
            'requires_distortion': result.requires_distortion}


def cmd_dimension(config: RunConfig) -> int:
    row = _dimension_row(parse_potential_spec(config.potential),
                         parse_growth_spec(config.growth), config.d)
    _write(config, DIMENSION_COLUMNS, [row])
    return EXIT_OK if row['value'] is not None else EXIT_NO_VALUE


_SWEEP_POTENTIALS = {'a': PotentialKind.POWER_LAW,
                     'b': PotentialKind.LOG_POWER,
                     'c': PotentialKind.STRETCHED_EXP}
_SWEEP_GROWTHS = {'alpha': GrowthKind.POLY_EXP,
                  'beta': GrowthKind.SUPER_EXP,
                  'gamma': GrowthKind.DOUBLE_EXP}


def cmd_sweep(config: RunConfig) -> int:
    """
    One row per grid value of the swept variable, in grid order. Critical
    and uncovered points stay in the output with an empty value.
    """
    if config.sweep is None or config.range is None:
        raise ConfigError('sweep needs --sweep and --range.')
    values = parse_range(config.range)
    potential = parse_potential_spec(config.potential)
    growth = parse_growth_spec(config.growth)
    variable = config.sweep
    if variable in _SWEEP_POTENTIALS and \
            potential.kind != _SWEEP_POTENTIALS[variable]:
        raise ConfigError('Sweeping {} needs a {} potential.'.format(
            variable, _SWEEP_POTENTIALS[variable].name))
    if variable in _SWEEP_GROWTHS and growth.kind != _SWEEP_GROWTHS[variable]:
        raise ConfigError('Sweeping {} needs a {} growth rate.'.format(
            variable, _SWEEP_GROWTHS[variable].name))
    columns = (variable,) + DIMENSION_COLUMNS

    def evaluate(value):
        p, g, d = potential, growth, config.d
        if variable in _SWEEP_POTENTIALS:
            p = Potential(p.kind, float(value))
        elif variable in _SWEEP_GROWTHS:
            g = GrowthRate(g.kind, float(value))
        else:
            d = float(value)
        return {variable: float(value), **_dimension_row(p, g, d)}

    try:
        rows = _parallel_map(config, evaluate, values.tolist(), columns)
    except GausslikeError as error:
        raise ConfigError('Range "{}": {}'.format(config.range, error))
    _write(config, columns, rows)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    options: Dict[str, Any] = {}
    if config.suite == 'lemA' and config.schedule:
        potential = parse_potential_spec(config.potential)
        growth = parse_growth_spec(config.growth)
        case = _schedule_case(config.schedule)
        if schedule_case(potential, growth) != case:
            raise ConfigError('{} {} is not in case {}.'.format(
                potential, growth, case.name))
        if config.epsilon is not None:
            eps = config.epsilon
        elif potential.kind == PotentialKind.STRETCHED_EXP:
            eps = potential.parameter / 3
        else:
            eps = LemmaCase._field_defaults['eps']
        options = {'cases': [LemmaCase(case, potential, growth, config.n_max,
                                       0.02, eps)],
                   'd': config.d}
    elif config.suite == 'axioms' and config.system == 'gauss':
        options = {'systems': [IfsSystem.mirrored_gauss()]}
    report = run_suite(config.suite or '', **options)
    _write(config, report.columns, report.rows)
    if not report.passed:
        logger.error('suite %s: %d failing rows', report.suite,
                     report.failures)
        return EXIT_NO_VALUE
    return EXIT_OK


SAMPLE_COLUMNS = ('n', 'log_s', 'log_t', 'log_digit', 'digit', 'deviation')


def cmd_sample(config: RunConfig) -> int:
    """
    The schedule table of one seeded sample point with its convergence
    deviations log S_n phi - log Phi(n).
    """
    schedule = _schedule(config)
    point = sample_word(schedule, config.depth, config.seed)
    profile = convergence_profile(parse_potential_spec(config.potential),
                                  parse_growth_spec(config.growth), point,
                                  config.depth)
    log_s, log_t = schedule.log_window(np.arange(1, config.depth + 1))
    rows = []
    for i in range(config.depth):
        digit = point.exact_prefix[i] if i < len(point.exact_prefix) \
            else None
        rows.append({'n': i + 1, 'log_s': log_s[i], 'log_t': log_t[i],
                     'log_digit': point.log_digits[i], 'digit': digit,
                     'deviation': profile.deviations[i]})
    _write(config, SAMPLE_COLUMNS, rows)
    return EXIT_OK


COUNTING_COLUMNS = ('m', 'n', 'a_or_b', 'eps', 'd', 's', 'count', 'sum',
                    'bound', 'valid', 'pass')


def cmd_counting(config: RunConfig) -> int:
    shape = parse_potential_spec(config.potential)
    if shape.kind == PotentialKind.STRETCHED_EXP:
        raise ConfigError('counting needs a power or logpower potential.')
    eps = config.epsilon if config.epsilon is not None else 0.25
    constraint = TupleConstraint(config.m, config.n, shape, eps)
    power = shape.kind == PotentialKind.POWER_LAW
    total = (g_sum if power else ghat_sum)(constraint, config.d, config.s)
    try:
        check = (g_bound if power else ghat_bound)(constraint, config.d,
                                                   config.s)
        bound, valid = check.value, check.verdict == Verdict.VALID
    except WindowUndefinedError as error:
        logger.info('%s', error)
        bound, valid = None, False
    row = {'m': config.m, 'n': config.n, 'a_or_b': shape.parameter,
           'eps': eps, 'd': config.d, 's': config.s,
           'count': enumerate_A(constraint).count, 'sum': total,
           'bound': bound, 'valid': valid,
           'pass': not valid or total <= bound}
    _write(config, COUNTING_COLUMNS, [row])
    return EXIT_OK if row['pass'] else EXIT_NO_VALUE


ROOT_COLUMNS = ('depth', 'root', 'lemA_partial', 'gap')


def cmd_root(config: RunConfig) -> int:
    system = _system(config)
    schedule = _schedule(config)
    depths = ([int(round(v)) for v in parse_range(config.depths)]
              if config.depths else [config.depth])

    def evaluate(depth):
        trace = dimension_root(system, schedule, depth, config.tolerance)
        return {'depth': depth, 'root': trace.root,
                'lemA_partial': float(trace.lema_partials[-1]),
                'gap': float(trace.gaps[-1])}

    rows = _parallel_map(config, evaluate, depths, ROOT_COLUMNS)
    _write(config, ROOT_COLUMNS, rows)
    return EXIT_OK


_HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    'dimension': cmd_dimension,
    'sweep': cmd_sweep,
    'verify': cmd_verify,
    'sample': cmd_sample,
    'counting': cmd_counting,
    'root': cmd_root}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_run_config(argv)
    except ConfigError as error:
        print('gausslike: {}'.format(error), file=sys.stderr)
        return EXIT_BAD_INPUT
    logging.basicConfig(
        level=getattr(logging, config.log_level.upper(), logging.WARNING),
        stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)
    try:
        return _HANDLERS[config.command](config)
    except GausslikeError as error:
        logger.error('%s', error)
        print('gausslike: {}'.format(error), file=sys.stderr)
        return EXIT_BAD_INPUT


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
