"""
SHG tuning curves and the overlap between sampled spectra.
"""
import logging
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import trapezoid

from common.curves import SpectrumCurve
from common.errors import DisjointSupportError
from dispersion.model import DispersionModel
from phasematch.amplitude import ideal_amplitude, nonuniform_amplitude
from phasematch.mismatch import index_to_mismatch, mismatch_shg
from phasematch.waveguide import IndexProfile, WaveguideSpec

logger = logging.getLogger(__name__)

WAVELENGTH = 'lambda_nm'
POWER = 'power'


class Detuning(NamedTuple):
    """Mismatch (rad/um) and index-to-mismatch factor at given wavelengths."""
    delta_k: np.ndarray
    kappa: np.ndarray


# wavelengths (nm) -> Detuning
DetuningMap = Callable[[np.ndarray], Detuning]


def model_detuning(model: DispersionModel, wg: WaveguideSpec,
                   temperature: float) -> DetuningMap:
    """Detuning from the full dispersion model at one temperature."""
    def detuning(wavelength_nm):
        wavelength_nm = np.asarray(wavelength_nm, dtype=float)
        return Detuning(mismatch_shg(model, wg, wavelength_nm, temperature),
                        index_to_mismatch(wavelength_nm))
    return detuning


def linear_detuning(center_nm: float, slope: float) -> DetuningMap:
    """
    Mismatch growing linearly away from center_nm, slope in rad/um per nm.
    Lithium niobate near 1560 nm has roughly -6.6e-4.
    """
    def detuning(wavelength_nm):
        wavelength_nm = np.asarray(wavelength_nm, dtype=float)
        return Detuning(slope * (wavelength_nm - center_nm),
                        index_to_mismatch(wavelength_nm))
    return detuning


def detuning_slope(detuning: DetuningMap, wavelength_nm: float,
                   step_nm: float = 0.01) -> float:
    """d(dk)/d(lambda) in rad/um per nm, by central difference."""
    ahead = detuning(np.array([wavelength_nm + step_nm]))[0][0]
    behind = detuning(np.array([wavelength_nm - step_nm]))[0][0]
    return float((ahead - behind) / (2.0 * step_nm))


def shg_intensity(detuning: Detuning, length_mm: float,
                  profile: IndexProfile = None) -> np.ndarray:
    """|Phi|^2, not normalized."""
    if profile is None or profile.is_uniform:
        return ideal_amplitude(detuning.delta_k, length_mm) ** 2
    amp = nonuniform_amplitude(profile, detuning.delta_k, detuning.kappa,
                               length_mm)
    return np.abs(amp) ** 2


def shg_power_spectrum(model: DispersionModel, wg: WaveguideSpec,
                       wavelength_range: tuple, temperature: float,
                       n_points: int = 501) -> SpectrumCurve:
    """
    Normalized SHG power against fundamental wavelength, P = |Phi(dk)|^2
    with the guide's profile and interaction length contracted to T.
    """
    if n_points < 2:
        raise ValueError(f'n_points must be at least 2, got {n_points}')
    low, high = wavelength_range
    if not low < high:
        raise ValueError(f'Bad wavelength range {low}-{high} nm')
    wavelengths = np.linspace(low, high, int(n_points))
    detuning = model_detuning(model, wg, temperature)(wavelengths)
    length = wg.length_at(model.thermal, temperature)
    power = shg_intensity(detuning, length, wg.profile)
    peak = np.max(power)
    if peak > 0:
        power = power / peak
    return SpectrumCurve(wavelengths, power, x_name=WAVELENGTH, y_name=POWER,
                         meta={'temperature_K': temperature,
                               'length_mm': length})


def spectrum_overlap(a: SpectrumCurve, b: SpectrumCurve) -> float:
    """
    <a, b> / (|a| |b|) with trapezoidal inner products over the common
    support, after resampling both curves onto the union of their abscissae.

    Raises:
        DisjointSupportError: the supports do not overlap
        ValueError: a curve is negative or vanishes on the common support
    """
    low = max(a.x[0], b.x[0])
    high = min(a.x[-1], b.x[-1])
    if not low < high:
        raise DisjointSupportError(
            f'Curves share no support: [{a.x[0]:g}, {a.x[-1]:g}] and '
            f'[{b.x[0]:g}, {b.x[-1]:g}]')
    grid = np.union1d(a.x, b.x)
    grid = grid[(grid >= low) & (grid <= high)]
    ya = np.interp(grid, a.x, a.y)
    yb = np.interp(grid, b.x, b.y)
    if np.any(ya < 0) or np.any(yb < 0):
        raise ValueError('Spectrum overlap needs non-negative curves')
    norm = np.sqrt(trapezoid(ya * ya, grid) * trapezoid(yb * yb, grid))
    if norm == 0:
        raise ValueError('A curve vanishes on the common support')
    return float(min(1.0, trapezoid(ya * yb, grid) / norm))
