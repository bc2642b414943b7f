"""
Joint spectral amplitude of the photon pair on a signal x idler wavelength
grid.

A(ls, li) = alpha(lp) * Phi(dk(ls, li, T)), 1/lp = 1/ls + 1/li

alpha is the pump envelope and Phi the phase-matching amplitude of the guide
at its contracted effective length. Signal is TE, idler TM.
"""
import logging
from dataclasses import dataclass

import numpy as np

import data.files as fls
from common.errors import (AllFilteredError, DataFormatError,
                           DegenerateOutputError,
                           PreconditionError)
from common.units import mm_to_um, nm_to_um
from dispersion.model import DispersionModel
from jsa.envelope import BandpassFilter, PumpEnvelope
from phasematch.amplitude import ideal_amplitude, nonuniform_amplitude
from phasematch.mismatch import TWO_PI, mismatch_spdc, pump_wavelength
from phasematch.shg_fit import HALF_POWER_ARGUMENT
from phasematch.waveguide import WaveguideSpec

logger = logging.getLogger(__name__)

MIN_POINTS = 8
DEFAULT_POINTS = 201
# half-span of the default grid in units of the bandwidth estimate
SPAN_FACTOR = 3.0
# cap on the half-span as a fraction of the centre wavelength
MAX_SPAN_FRACTION = 0.25
SLOPE_STEP_NM = 0.01
NORM_TOLERANCE = 1e-9
# surviving fraction of the norm below which filtering has removed everything
FILTER_FLOOR = 1e-12
UNIFORM_RTOL = 1e-6


def _axis(values, name):
    axis = np.asarray(values, dtype=float)
    if axis.ndim != 1 or axis.size < MIN_POINTS:
        raise ValueError(f'{name} needs at least {MIN_POINTS} samples')
    steps = np.diff(axis)
    if np.any(steps <= 0):
        raise ValueError(f'{name} must be strictly increasing')
    if not np.allclose(steps, steps[0], rtol=UNIFORM_RTOL, atol=0.0):
        raise ValueError(f'{name} must be uniformly spaced')
    axis.setflags(write=False)
    return axis


@dataclass(frozen=True)
class SpectralGrid:
    signal_axis: np.ndarray
    idler_axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'signal_axis',
                           _axis(self.signal_axis, 'signal_axis'))
        object.__setattr__(self, 'idler_axis',
                           _axis(self.idler_axis, 'idler_axis'))

    @classmethod
    def around(cls, signal_center, idler_center, signal_half_span,
               idler_half_span, n_signal=DEFAULT_POINTS,
               n_idler=DEFAULT_POINTS) -> 'SpectralGrid':
        return cls(np.linspace(signal_center - signal_half_span,
                               signal_center + signal_half_span, n_signal),
                   np.linspace(idler_center - idler_half_span,
                               idler_center + idler_half_span, n_idler))

    @property
    def shape(self) -> tuple:
        return self.signal_axis.size, self.idler_axis.size

    @property
    def signal_step(self) -> float:
        return float(self.signal_axis[1] - self.signal_axis[0])

    @property
    def idler_step(self) -> float:
        return float(self.idler_axis[1] - self.idler_axis[0])

    @property
    def cell(self) -> float:
        return self.signal_step * self.idler_step

    def mesh(self) -> tuple:
        """(signal, idler) matrices, signal along rows."""
        return np.meshgrid(self.signal_axis, self.idler_axis, indexing='ij')

    def transposed(self) -> 'SpectralGrid':
        return SpectralGrid(self.idler_axis, self.signal_axis)


@dataclass(frozen=True)
class JointSpectrum:
    grid: SpectralGrid
    amplitude: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amplitude = np.array(self.amplitude, dtype=complex)
        if amplitude.shape != self.grid.shape:
            raise ValueError(f'Amplitude shape {amplitude.shape} does not '
                             f'match the grid {self.grid.shape}')
        if not np.all(np.isfinite(amplitude)):
            raise ValueError('Joint amplitude must be finite everywhere')
        amplitude.setflags(write=False)
        object.__setattr__(self, 'amplitude', amplitude)
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOLERANCE:
            raise ValueError(f'Amplitude flagged normalized has norm '
                             f'{self.norm():.12g}')

    @classmethod
    def from_intensity(cls, grid: SpectralGrid, intensity) -> 'JointSpectrum':
        """
        Normalized spectrum from a measured intensity, with a flat phase.
        Negative (background-subtracted) entries are set to zero.
        """
        intensity = np.asarray(intensity, dtype=float)
        if np.any(intensity < 0):
            logger.warning('clipping %d negative JSI entries',
                           int(np.sum(intensity < 0)))
            intensity = np.clip(intensity, 0.0, None)
        logger.warning('JSA built from intensity assumes a flat phase')
        return cls(grid, np.sqrt(intensity)).normalize()

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def norm(self) -> float:
        """sum |A|^2 dls dli."""
        return float(np.sum(self.intensity) * self.grid.cell)

    def normalize(self) -> 'JointSpectrum':
        norm = self.norm()
        if norm == 0:
            raise DegenerateOutputError('Joint spectrum is zero everywhere')
        return JointSpectrum(self.grid, self.amplitude / np.sqrt(norm), True)

    def transposed(self) -> 'JointSpectrum':
        return JointSpectrum(self.grid.transposed(), self.amplitude.T,
                             self.normalized)


def _mismatch_slopes(model, wg, center_s, center_i, temperature):
    """d(dk)/d(lambda) along the signal and idler axes, rad/um per nm."""
    h = SLOPE_STEP_NM
    signal = (mismatch_spdc(model, wg, center_s + h, center_i, temperature)
              - mismatch_spdc(model, wg, center_s - h, center_i, temperature))
    idler = (mismatch_spdc(model, wg, center_s, center_i + h, temperature)
             - mismatch_spdc(model, wg, center_s, center_i - h, temperature))
    return float(signal) / (2 * h), float(idler) / (2 * h)


def auto_grid(model: DispersionModel, wg: WaveguideSpec, pump: PumpEnvelope,
              temperature: float, n_points: int = DEFAULT_POINTS,
              signal_center: float = None,
              idler_center: float = None) -> SpectralGrid:
    """
    Square-sampled grid around the pair centre (degenerate by default)
    spanning 3x the larger of the pump-driven and phase-matching-driven
    bandwidth estimates on each axis.
    """
    signal_center = signal_center or 2.0 * pump.center
    idler_center = idler_center or 2.0 * pump.center
    length_um = float(mm_to_um(wg.length_at(model.thermal, temperature)))
    spans = []
    for center, slope in zip(
            (signal_center, idler_center),
            _mismatch_slopes(model, wg, signal_center, idler_center,
                             temperature)):
        pump_center = pump_wavelength(signal_center, idler_center)
        pump_width = pump.fwhm * (center / pump_center) ** 2
        if slope == 0:
            matching_width = np.inf
        else:
            matching_width = 4.0 * HALF_POWER_ARGUMENT / (abs(slope)
                                                          * length_um)
        width = max(pump_width, matching_width)
        spans.append(min(SPAN_FACTOR * width, MAX_SPAN_FRACTION * center))
    logger.debug('auto grid: half-spans %.3f / %.3f nm', *spans)
    return SpectralGrid.around(signal_center, idler_center, spans[0],
                               spans[1], n_points, n_points)


def build_jsa(model: DispersionModel, wg: WaveguideSpec, pump: PumpEnvelope,
              grid: SpectralGrid, temperature: float) -> JointSpectrum:
    """
    Normalized joint spectral amplitude.

    Raises:
        DomainError: grid outside the dispersion domain
        DegenerateOutputError: the pump has no weight on the grid's energy
            band, or the product vanishes everywhere
    """
    signal, idler = grid.mesh()
    pump_nm = pump_wavelength(signal, idler)
    alpha = pump.amplitude(pump_nm)
    if not np.any(alpha > 0):
        raise DegenerateOutputError(
            f'Pump around {pump.center:g} nm has no weight between '
            f'{pump_nm.min():.4g} and {pump_nm.max():.4g} nm')
    delta_k = mismatch_spdc(model, wg, signal, idler, temperature)
    length = wg.length_at(model.thermal, temperature)
    if wg.profile.is_uniform:
        phi = ideal_amplitude(delta_k, length)
    else:
        kappa = TWO_PI * (1.0 / nm_to_um(signal) + 1.0 / nm_to_um(idler)) / 2
        phi = nonuniform_amplitude(wg.profile, delta_k, kappa, length)
    amplitude = alpha * phi
    if not np.any(amplitude != 0):
        raise DegenerateOutputError('Pump and phase matching do not overlap '
                                    'on the grid')
    return JointSpectrum(grid, amplitude).normalize()


def apply_filter(js: JointSpectrum, signal_filter: BandpassFilter,
                 idler_filter: BandpassFilter) -> JointSpectrum:
    """
    A'(ls, li) = A t_s(ls) t_i(li), renormalized.

    Raises:
        AllFilteredError: less than 1e-12 of the norm survives
    """
    ts = signal_filter.transmission(js.grid.signal_axis)
    ti = idler_filter.transmission(js.grid.idler_axis)
    filtered = JointSpectrum(js.grid, js.amplitude * ts[:, None]
                             * ti[None, :])
    before = js.norm()
    after = filtered.norm()
    if before == 0 or after < FILTER_FLOOR * before:
        raise AllFilteredError(
            f'Filters at {signal_filter.center:g} / {idler_filter.center:g} '
            f'nm leave {after / before if before else 0:.3g} of the spectrum')
    return filtered.normalize()


def check_normalized(js: JointSpectrum):
    """
    Raises:
        PreconditionError: js is not normalized
    """
    if not js.normalized or abs(js.norm() - 1.0) > NORM_TOLERANCE:
        raise PreconditionError('Joint spectrum must be normalized; call '
                                'normalize() first')


def read_jsi(path: str) -> JointSpectrum:
    """Measured JSI matrix file: rows signal, columns idler (nm)."""
    signal, idler, intensity = fls.read_matrix_csv(path)
    try:
        grid = SpectralGrid(signal, idler)
    except ValueError as err:
        raise DataFormatError(str(err), path) from err
    return JointSpectrum.from_intensity(grid, intensity)


def write_jsi(path: str, js: JointSpectrum):
    fls.write_matrix_csv(path, js.grid.signal_axis, js.grid.idler_axis,
                         js.intensity)
