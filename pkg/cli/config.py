"""
Run configuration for the command line.

A run is described by an INI file whose sections mirror RunConfig. Values
are resolved with this precedence, highest first: command-line flags, the
environment ($QPM_DATASET, $QPM_OUT, $QPM_SEED), the file, built-in
defaults.
"""
import logging
import os
from dataclasses import dataclass, field

import numpy as np

import data.files as fls
from common.errors import ConfigurationError, DataFormatError
from jsa.envelope import (BandpassFilter, FILTER_SHAPES, GAUSSIAN,
                          PUMP_SHAPES, PumpEnvelope, TABULATED)
from jsa.joint import DEFAULT_POINTS
from phasematch.waveguide import (IndexProfile, PIECEWISE_CONSTANT,
                                  POLYNOMIAL, PROFILE_KINDS, UNIFORM,
                                  WaveguideSpec)

logger = logging.getLogger(__name__)

OUT_ENV = 'QPM_OUT'
SEED_ENV = 'QPM_SEED'

RUN = 'run'
WAVEGUIDE = 'waveguide'
DESIGN = 'design'
SHG = 'shg'
PUMP = 'pump'
GRID = 'grid'
FILTERS = 'filters'
HOM = 'hom'
FIT = 'fit'

DEFAULT_OUT = 'out'
DEFAULT_SEED = 0
DEFAULT_TEMPERATURE = 295.0
DEFAULT_TARGET_NM = 1559.0
DEFAULT_SHG_HALF_SPAN_NM = 2.0
DEFAULT_SHG_POINTS = 501
DETUNING_KINDS = ('model', 'linear')

# section -> key -> default; None means "work it out at run time"
DEFAULTS = {
    RUN: {
        'dataset': None,
        'out': DEFAULT_OUT,
        'seed': DEFAULT_SEED,
        'temperature_K': DEFAULT_TEMPERATURE,
    },
    WAVEGUIDE: {
        'poling_period_um': 8.81,
        'length_mm': 24.3,
        'effective_length_mm': None,
        'profile': UNIFORM,
        'profile_values': None,
    },
    DESIGN: {
        'target_nm': DEFAULT_TARGET_NM,
    },
    SHG: {
        'lambda_min_nm': None,
        'lambda_max_nm': None,
        'n_points': DEFAULT_SHG_POINTS,
        'seed_nm': DEFAULT_TARGET_NM,
    },
    PUMP: {
        'center_nm': 779.5,
        'fwhm_nm': 0.73,
        'shape': GAUSSIAN,
        'table': None,
    },
    GRID: {
        'n_points': DEFAULT_POINTS,
        'signal_center_nm': None,
        'idler_center_nm': None,
    },
    FILTERS: {
        'signal_center_nm': None,
        'signal_fwhm_nm': None,
        'idler_center_nm': None,
        'idler_fwhm_nm': None,
        'shape': GAUSSIAN,
    },
    HOM: {
        'delay_min_ps': -40.0,
        'delay_max_ps': 40.0,
        'n_delays': 201,
        'baseline_min_ps': 25.0,
        'baseline_max_ps': 40.0,
        'simulate': False,
        'baseline_rate': 4000.0,
        'integration_time_s': 100.0,
    },
    FIT: {
        'profile': PIECEWISE_CONSTANT,
        'profile_size': 2,
        'detuning': 'model',
        'integration_time_s': 1.0,
    },
}


@dataclass(frozen=True)
class HomSettings:
    delays: np.ndarray
    baseline_window: tuple
    simulate: bool = False
    baseline_rate: float = 4000.0
    integration_time: float = 100.0


@dataclass(frozen=True)
class FitSettings:
    profile_kind: str = PIECEWISE_CONSTANT
    profile_size: int = 2
    detuning: str = 'model'
    integration_time: float = 1.0


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one command needs. Lengths in mm, periods in um, wavelengths
    in nm, temperatures in K, delays in ps, rates in 1/s.
    """
    dataset: str
    out_dir: str
    seed: int
    temperature: float
    waveguide: WaveguideSpec
    target_nm: float
    shg_range: tuple
    shg_points: int
    shg_seed_nm: float
    pump: PumpEnvelope
    grid_points: int
    signal_center: float = None
    idler_center: float = None
    signal_filter: BandpassFilter = None
    idler_filter: BandpassFilter = None
    hom: HomSettings = None
    fit: FitSettings = field(default_factory=FitSettings)

    @property
    def has_filters(self) -> bool:
        return self.signal_filter is not None

    def output(self, name: str) -> str:
        return os.path.join(self.out_dir, name)


def _merged(path: str) -> dict:
    """Defaults overlaid with the file's values, unknown keys rejected."""
    values = {section: dict(keys) for section, keys in DEFAULTS.items()}
    if not path:
        return values
    parser = fls.read_ini(path, 'Config file')
    for section in parser.sections():
        if section not in DEFAULTS:
            raise ConfigurationError(f'{path}: unknown section [{section}]')
        for key, text in parser.items(section):
            if key not in DEFAULTS[section]:
                raise ConfigurationError(
                    f'{path}: unknown key {key!r} in [{section}]')
            text = text.strip()
            values[section][key] = text if text else None
    return values


def _number(values: dict, section: str, key: str, kind=float,
            positive: bool = False, allow_none: bool = False):
    raw = values[section][key]
    if raw is None:
        if allow_none:
            return None
        raise ConfigurationError(f'[{section}] {key} is required')
    try:
        value = kind(raw)
    except (TypeError, ValueError):
        raise ConfigurationError(f'[{section}] {key}: cannot read {raw!r}')
    if positive and not value > 0:
        raise ConfigurationError(f'[{section}] {key} must be positive, got '
                                 f'{value}')
    return value


def _flag(values: dict, section: str, key: str) -> bool:
    raw = values[section][key]
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off', 'none'):
        return False
    raise ConfigurationError(f'[{section}] {key}: expected yes or no, got '
                             f'{raw!r}')


def _choice(values: dict, section: str, key: str, choices) -> str:
    value = str(values[section][key]).strip()
    if value not in choices:
        raise ConfigurationError(f'[{section}] {key} must be one of '
                                 f'{tuple(choices)}, got {value!r}')
    return value


def _profile(values: dict) -> IndexProfile:
    kind = _choice(values, WAVEGUIDE, 'profile', PROFILE_KINDS)
    raw = values[WAVEGUIDE]['profile_values']
    if kind == UNIFORM:
        return IndexProfile.uniform()
    if raw is None:
        raise ConfigurationError(f'[{WAVEGUIDE}] a {kind} profile needs '
                                 'profile_values')
    numbers = fls.parse_floats(str(raw),
                               where=f'[{WAVEGUIDE}] profile_values')
    if kind == PIECEWISE_CONSTANT:
        return IndexProfile.segments(numbers)
    return IndexProfile(POLYNOMIAL, tuple(numbers))


def _waveguide(values: dict) -> WaveguideSpec:
    return WaveguideSpec(
        _number(values, WAVEGUIDE, 'poling_period_um', positive=True),
        _number(values, WAVEGUIDE, 'length_mm', positive=True),
        _profile(values),
        _number(values, WAVEGUIDE, 'effective_length_mm', positive=True,
                allow_none=True))


def _pump(values: dict, base: str) -> PumpEnvelope:
    shape = _choice(values, PUMP, 'shape', PUMP_SHAPES)
    if shape == TABULATED:
        table = values[PUMP]['table']
        if table is None:
            raise ConfigurationError(f'[{PUMP}] a tabulated pump needs a '
                                     'table file')
        if not os.path.isabs(table):
            table = os.path.join(base, table)
        return PumpEnvelope.from_table(fls.read_curve(table))
    return PumpEnvelope(_number(values, PUMP, 'center_nm', positive=True),
                        _number(values, PUMP, 'fwhm_nm', positive=True),
                        shape)


def _filters(values: dict) -> tuple:
    keys = ('signal_center_nm', 'signal_fwhm_nm', 'idler_center_nm',
            'idler_fwhm_nm')
    given = [values[FILTERS][key] is not None for key in keys]
    if not any(given):
        return None, None
    if not all(given):
        raise ConfigurationError(f'[{FILTERS}] needs all of {keys} or none')
    shape = _choice(values, FILTERS, 'shape', FILTER_SHAPES)
    return tuple(
        BandpassFilter(
            _number(values, FILTERS, f'{arm}_center_nm', positive=True),
            _number(values, FILTERS, f'{arm}_fwhm_nm', positive=True),
            shape)
        for arm in ('signal', 'idler'))


def _hom(values: dict) -> HomSettings:
    low = _number(values, HOM, 'delay_min_ps')
    high = _number(values, HOM, 'delay_max_ps')
    n_delays = _number(values, HOM, 'n_delays', int, positive=True)
    if not low < high or n_delays < 2:
        raise ConfigurationError(f'[{HOM}] needs delay_min_ps < delay_max_ps '
                                 'and at least 2 delays')
    return HomSettings(
        np.linspace(low, high, n_delays),
        (_number(values, HOM, 'baseline_min_ps'),
         _number(values, HOM, 'baseline_max_ps')),
        _flag(values, HOM, 'simulate'),
        _number(values, HOM, 'baseline_rate', positive=True),
        _number(values, HOM, 'integration_time_s', positive=True))


def _shg_range(values: dict) -> tuple:
    low = _number(values, SHG, 'lambda_min_nm', positive=True,
                  allow_none=True)
    high = _number(values, SHG, 'lambda_max_nm', positive=True,
                   allow_none=True)
    if (low is None) != (high is None):
        raise ConfigurationError(f'[{SHG}] give both lambda_min_nm and '
                                 'lambda_max_nm, or neither')
    if low is not None and not low < high:
        raise ConfigurationError(f'[{SHG}] lambda_min_nm must be below '
                                 'lambda_max_nm')
    return None if low is None else (low, high)


def load_run_config(path: str = None, dataset: str = None, out: str = None,
                    seed: int = None) -> RunConfig:
    """
    Resolve a RunConfig.

    Args:
        path: INI file; None for built-in defaults only
        dataset, out, seed: command-line values, None when not given

    Raises:
        FileNotFoundError: the config file or a file it names is missing
        ConfigurationError: unknown key, unreadable or out-of-range value
    """
    values = _merged(path)
    base = os.path.dirname(os.path.abspath(path)) if path else os.getcwd()
    env = os.environ
    run = values[RUN]
    file_dataset = run['dataset']
    if file_dataset and not os.path.isabs(file_dataset):
        file_dataset = os.path.join(base, file_dataset)
    dataset = dataset or env.get(fls.DATASET_ENV) or file_dataset \
        or fls.DEFAULT_DATASET
    out_dir = out or env.get(OUT_ENV) or run['out']
    if seed is None:
        run['seed'] = env.get(SEED_ENV) or run['seed']
        seed = _number(values, RUN, 'seed', int)
    temperature = _number(values, RUN, 'temperature_K')
    if temperature < 0:
        raise ConfigurationError(f'[{RUN}] temperature_K {temperature} is '
                                 'below 0 K')
    try:
        signal_filter, idler_filter = _filters(values)
        config = RunConfig(
            dataset=dataset,
            out_dir=out_dir,
            seed=int(seed),
            temperature=temperature,
            waveguide=_waveguide(values),
            target_nm=_number(values, DESIGN, 'target_nm', positive=True),
            shg_range=_shg_range(values),
            shg_points=_number(values, SHG, 'n_points', int, positive=True),
            shg_seed_nm=_number(values, SHG, 'seed_nm', positive=True),
            pump=_pump(values, base),
            grid_points=_number(values, GRID, 'n_points', int,
                                positive=True),
            signal_center=_number(values, GRID, 'signal_center_nm',
                                  positive=True, allow_none=True),
            idler_center=_number(values, GRID, 'idler_center_nm',
                                 positive=True, allow_none=True),
            signal_filter=signal_filter,
            idler_filter=idler_filter,
            hom=_hom(values),
            fit=FitSettings(
                _choice(values, FIT, 'profile', PROFILE_KINDS),
                _number(values, FIT, 'profile_size', int, positive=True),
                _choice(values, FIT, 'detuning', DETUNING_KINDS),
                _number(values, FIT, 'integration_time_s', positive=True)))
    except (ConfigurationError, DataFormatError):
        raise
    except ValueError as err:
        raise ConfigurationError(f'{path or "defaults"}: {err}') from err
    logger.debug('run config: dataset %s, out %s, seed %d, T %.4g K',
                 config.dataset, config.out_dir, config.seed,
                 config.temperature)
    return config
