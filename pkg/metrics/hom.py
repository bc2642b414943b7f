"""
Hong-Ou-Mandel interference: the dip a joint spectrum predicts and the
visibility of a measured delay scan.

Model convention: the cross-port coincidence probability is
C(tau) = 1/2 [1 - Re O(tau)] with the exchange overlap
O(tau) = sum A(s, i) conj(A(i, s)) exp(i (w_s - w_i) tau) ds di / sum |A|^2,
so C(inf) = 1/2. Positive tau delays the signal arm.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

import data.files as fls
from common.curves import Measurement, SpectrumCurve
from common.errors import (ConfigurationError, DataFormatError, FitFailure,
                           PreconditionError)
from common.units import angular_frequency
from jsa.joint import JointSpectrum, check_normalized
from jsa.marginals import gaussian_fit

logger = logging.getLogger(__name__)

DELAY = 'delay_ps'
COINCIDENCE = 'coincidence'
C12 = 'c12'
C34 = 'c34'
C13 = 'c13'
C14 = 'c14'
C23 = 'c23'
C24 = 'c24'
SINGLES = ('s1', 's2', 's3', 's4')
SAME_PORT_PAIRS = (C12, C34)
CROSS_PAIRS = (C13, C14, C23, C24)
PAIRS = SAME_PORT_PAIRS + CROSS_PAIRS

BASELINE = 0.5
MIN_BASELINE_POINTS = 3
# baseline points must sit this many dip widths away from the dip centre
DIP_CLEARANCE = 3.0
# cap on the side of the common axis used for unequal signal/idler axes
MAX_COMMON_POINTS = 1024


@dataclass(frozen=True)
class HomDip:
    """
    raw: C(tau) with baseline 1/2
    normalized: C(tau) / C(inf), baseline 1
    bunching: same-port coincidences normalized to baseline 1, if asked for
    """
    raw: SpectrumCurve
    normalized: SpectrumCurve
    visibility: float
    bunching: SpectrumCurve = None


def _common_amplitude(js: JointSpectrum) -> tuple:
    """(axis, amplitude) with signal and idler sampled on the same axis."""
    grid = js.grid
    if np.array_equal(grid.signal_axis, grid.idler_axis):
        return grid.signal_axis, js.amplitude
    low = min(grid.signal_axis[0], grid.idler_axis[0])
    high = max(grid.signal_axis[-1], grid.idler_axis[-1])
    step = min(grid.signal_step, grid.idler_step)
    n_points = min(int(np.ceil((high - low) / step)) + 1, MAX_COMMON_POINTS)
    axis = np.linspace(low, high, n_points)
    logger.debug('HOM common axis: %d points over %.3f-%.3f nm', n_points,
                 low, high)
    mesh = np.stack(np.meshgrid(axis, axis, indexing='ij'), axis=-1)
    parts = []
    for values in (js.amplitude.real, js.amplitude.imag):
        interpolate = RegularGridInterpolator(
            (grid.signal_axis, grid.idler_axis), values, bounds_error=False,
            fill_value=0.0)
        parts.append(interpolate(mesh))
    return axis, parts[0] + 1j * parts[1]


class _ExchangeOverlap:
    """O(tau) for one joint spectrum."""

    def __init__(self, js: JointSpectrum):
        check_normalized(js)
        axis, amplitude = _common_amplitude(js)
        norm = float(np.sum(np.abs(amplitude) ** 2))
        if norm == 0:
            raise PreconditionError('The joint spectrum vanishes on the '
                                    'common axis')
        self.product = amplitude * np.conj(amplitude.T) / norm
        self.omega = angular_frequency(axis)

    def __call__(self, delays) -> np.ndarray:
        delays = np.atleast_1d(np.asarray(delays, dtype=float))
        result = np.empty(delays.size, dtype=complex)
        for n, tau in enumerate(delays):
            phase = np.exp(1j * self.omega * tau)
            result[n] = phase @ self.product @ np.conj(phase)
        return result


def hom_dip(js: JointSpectrum, delays, same_port: bool = False) -> HomDip:
    """
    Model HOM dip of a normalized joint spectrum at the given delays (ps).

    Raises:
        PreconditionError: js is not normalized
        ValueError: delays not strictly increasing
    """
    overlap = _ExchangeOverlap(js)
    delays = np.asarray(delays, dtype=float)
    values = overlap(delays).real
    raw = SpectrumCurve(delays, BASELINE * (1.0 - values), x_name=DELAY,
                        y_name=COINCIDENCE)
    bunching = None
    if same_port:
        bunching = SpectrumCurve(delays, 1.0 + values, x_name=DELAY,
                                 y_name=COINCIDENCE)
    visibility = float(overlap(0.0)[0].real)
    return HomDip(raw, raw.scaled(1.0 / BASELINE), visibility, bunching)


def model_visibility(js: JointSpectrum) -> float:
    """1 - C(0)/C(inf) = Re O(0)."""
    return float(_ExchangeOverlap(js)(0.0)[0].real)


@dataclass(frozen=True)
class HomScan:
    """
    Measured delay scan: coincidence rates (1/s) of every detector pair and,
    optionally, the four singles rates, per delay (ps).
    """
    delays: np.ndarray
    coincidences: dict
    singles: np.ndarray = None
    integration_time: float = 1.0

    def __post_init__(self):
        delays = np.asarray(self.delays, dtype=float)
        if delays.ndim != 1 or delays.size < 2:
            raise ValueError('A scan needs at least 2 delays')
        if np.any(np.diff(delays) <= 0):
            raise ValueError('Scan delays must be strictly increasing')
        missing = [pair for pair in CROSS_PAIRS
                   if pair not in self.coincidences]
        if missing:
            raise ValueError(f'Scan is missing cross-path pairs {missing}')
        coincidences = {}
        for pair, rates in self.coincidences.items():
            if pair not in PAIRS:
                raise ValueError(f'Unknown detector pair {pair!r}')
            rates = np.asarray(rates, dtype=float)
            if rates.shape != delays.shape:
                raise ValueError(f'{pair} has {rates.size} rates for '
                                 f'{delays.size} delays')
            if np.any(rates < 0) or not np.all(np.isfinite(rates)):
                raise ValueError(f'{pair} rates must be non-negative')
            coincidences[pair] = rates
        singles = self.singles
        if singles is not None:
            singles = np.asarray(singles, dtype=float)
            if singles.shape != (delays.size, len(SINGLES)):
                raise ValueError(f'Singles must have shape '
                                 f'({delays.size}, {len(SINGLES)})')
            if np.any(singles < 0):
                raise ValueError('Singles rates must be non-negative')
        if not self.integration_time > 0:
            raise ValueError('integration_time must be positive')
        object.__setattr__(self, 'delays', delays)
        object.__setattr__(self, 'coincidences', coincidences)
        object.__setattr__(self, 'singles', singles)

    def cross_path(self) -> np.ndarray:
        """C13 + C14 + C23 + C24."""
        return sum(self.coincidences[pair] for pair in CROSS_PAIRS)

    def same_port(self) -> np.ndarray:
        """C12 + C34, if measured."""
        if not all(pair in self.coincidences for pair in SAME_PORT_PAIRS):
            raise ValueError('Scan has no same-port coincidences')
        return sum(self.coincidences[pair] for pair in SAME_PORT_PAIRS)

    def curve(self) -> SpectrumCurve:
        return SpectrumCurve(self.delays, self.cross_path(), x_name=DELAY,
                             y_name=COINCIDENCE)


def load_hom_scan(path: str, integration_time: float = 1.0) -> HomScan:
    """
    Scan CSV with columns delay_ps, c12, c34, c13, c14, c23, c24 and
    optionally s1..s4. Rows are sorted by delay.
    """
    table = fls.read_csv_table(path, [DELAY] + list(CROSS_PAIRS),
                               list(SAME_PORT_PAIRS) + list(SINGLES))
    table = table.sort_values(DELAY)
    coincidences = {pair: table[pair].to_numpy() for pair in PAIRS
                    if pair in table and not table[pair].isna().any()}
    singles = None
    if all(name in table for name in SINGLES) and \
            not table[list(SINGLES)].isna().any().any():
        singles = table[list(SINGLES)].to_numpy()
    try:
        return HomScan(table[DELAY].to_numpy(), coincidences, singles,
                       integration_time)
    except ValueError as err:
        raise DataFormatError(str(err), path) from err


def write_hom_scan(path: str, scan: HomScan):
    columns = {DELAY: scan.delays}
    columns.update({pair: scan.coincidences[pair] for pair in PAIRS
                    if pair in scan.coincidences})
    if scan.singles is not None:
        columns.update({name: scan.singles[:, n]
                        for n, name in enumerate(SINGLES)})
    fls.write_csv_table(path, columns)


def simulate_scan(dip: HomDip, baseline_rate: float,
                  integration_time: float, rng: np.random.Generator) \
        -> HomScan:
    """
    Poisson-sampled scan of a model dip. baseline_rate is the summed
    cross-path rate far from the dip, shared equally by the four pairs.
    """
    normalized = dip.normalized.y
    bunching = dip.bunching.y if dip.bunching is not None \
        else 2.0 - normalized
    mean_counts = {pair: baseline_rate / 4.0 * normalized * integration_time
                   for pair in CROSS_PAIRS}
    mean_counts.update({pair: baseline_rate / 4.0 * bunching
                        * integration_time for pair in SAME_PORT_PAIRS})
    coincidences = {pair: rng.poisson(np.clip(counts, 0.0, None))
                    / integration_time
                    for pair, counts in mean_counts.items()}
    return HomScan(dip.raw.x, coincidences, None, integration_time)


def _parabolic_minimum(x, y) -> tuple:
    """
    Vertex of the parabola through the lowest sample and its neighbours;
    the lowest sample itself when that parabola does not open upwards.
    """
    low = int(np.argmin(y))
    if 0 < low < y.size - 1:
        a, b, c = np.polyfit(x[low - 1:low + 2], y[low - 1:low + 2], 2)
        if a > 0:
            vertex = -b / (2 * a)
            if x[low - 1] <= vertex <= x[low + 1]:
                return float(vertex), float(max(c - b * b / (4 * a), 0.0))
    logger.warning('HOM minimum at %.4g ps taken from the lowest sample',
                   x[low])
    return float(x[low]), float(y[low])


def _dip_width(delays, rates, baseline) -> float:
    depth = SpectrumCurve(delays, np.clip(baseline - rates, 0.0, None))
    try:
        return gaussian_fit(depth).fwhm
    except (FitFailure, ValueError) as err:
        raise ConfigurationError(f'Cannot locate the dip: {err}') from err


def hom_visibility_from_scan(scan: HomScan,
                             baseline_window: tuple) -> Measurement:
    """
    V = 1 - C(tau_min) / mean baseline, on the summed cross-path rates.

    Args:
        scan: measured delays and coincidence rates
        baseline_window: (low, high) delays in ps treated as far from the dip

    Raises:
        PreconditionError: fewer than 3 delays inside the window
        ConfigurationError: the window reaches within 3 dip widths of the dip
    """
    low, high = sorted(baseline_window)
    rates = scan.cross_path()
    inside = (scan.delays >= low) & (scan.delays <= high)
    if np.count_nonzero(inside) < MIN_BASELINE_POINTS:
        raise PreconditionError(
            f'Baseline window [{low:g}, {high:g}] ps holds '
            f'{np.count_nonzero(inside)} delays; at least '
            f'{MIN_BASELINE_POINTS} are needed')
    t = scan.integration_time
    baseline_counts = float(np.sum(rates[inside])) * t
    baseline = baseline_counts / (np.count_nonzero(inside) * t)
    if baseline <= 0:
        raise ConfigurationError('The baseline window has no coincidences')
    tau_min, c_min = _parabolic_minimum(scan.delays, rates)
    width = _dip_width(scan.delays, rates, baseline)
    distance = 0.0 if low <= tau_min <= high \
        else min(abs(low - tau_min), abs(high - tau_min))
    if distance < DIP_CLEARANCE * width:
        raise ConfigurationError(
            f'Baseline window [{low:g}, {high:g}] ps lies within '
            f'{DIP_CLEARANCE:g} dip widths ({width:.3g} ps) of the dip at '
            f'{tau_min:.3g} ps')
    visibility = 1.0 - c_min / baseline
    sigma_min = np.sqrt(c_min * t) / t
    sigma_baseline = np.sqrt(baseline_counts) / (np.count_nonzero(inside) * t)
    error = np.hypot(sigma_min / baseline,
                     c_min * sigma_baseline / baseline ** 2)
    logger.info('HOM visibility %.4f +- %.4f (dip at %.3f ps)', visibility,
                error, tau_min)
    return Measurement(float(visibility), float(error))
