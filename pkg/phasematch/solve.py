"""
Forward and inverse phase-matching problems for SHG: the phase-matched
fundamental wavelength of a given guide, and the poling period that phase
matches a target wavelength.
"""
import logging

import numpy as np
from scipy.optimize import brentq

from common.errors import NoQuasiPhaseMatchingError, NoSolutionError
from common.units import mm_to_um, nm_to_um
from dispersion.model import DispersionModel
from dispersion.thermal import thermal_scale
from phasematch.mismatch import mismatch_shg, shg_index_difference
from phasematch.waveguide import WaveguideSpec

logger = logging.getLogger(__name__)

SCAN_STEP_NM = 1.0
FIRST_WINDOW_NM = 32.0
# |dk L / 2| at the returned root
ROOT_TOLERANCE = 1e-6
ROOT_XTOL_NM = 1e-9


def shg_wavelength_bounds(model: DispersionModel) -> tuple:
    """Fundamental wavelengths whose harmonic also lies in the domain."""
    low, high = model.valid_wavelength
    return 2.0 * low, high


def _brackets(wavelengths, values):
    """Index pairs (i, i + 1) across which values change sign."""
    signs = np.sign(values)
    exact = np.flatnonzero(signs == 0)
    change = np.flatnonzero(signs[:-1] * signs[1:] < 0)
    return [(i, i) for i in exact] + [(i, i + 1) for i in change]


def _nearest(brackets, wavelengths, seed):
    """Bracket closest to the seed; ties go to the longer wavelength."""
    def key(pair):
        i, j = pair
        distance = abs((wavelengths[i] + wavelengths[j]) / 2.0 - seed)
        return distance, -wavelengths[i]
    return min(brackets, key=key)


def solve_phasematched_wavelength(model: DispersionModel, wg: WaveguideSpec,
                                  temperature: float, seed: float) -> float:
    """
    Fundamental wavelength (nm) where the SHG mismatch vanishes.

    Scans outward from the seed in 1 nm steps over windows that double until
    a sign change turns up or the domain is exhausted, takes the bracket
    nearest the seed and refines it with Brent's method.

    Raises:
        NoSolutionError: no sign change in the whole valid interval; the
            message reports the interval scanned
    """
    low, high = shg_wavelength_bounds(model)
    seed = float(np.clip(seed, low, high))

    def mismatch(wavelength):
        return mismatch_shg(model, wg, wavelength, temperature)

    half_width = FIRST_WINDOW_NM
    while True:
        start = max(low, seed - half_width)
        stop = min(high, seed + half_width)
        steps = np.arange(-np.floor((seed - start) / SCAN_STEP_NM),
                          np.floor((stop - seed) / SCAN_STEP_NM) + 1)
        grid = np.unique(np.clip(np.concatenate(
            [[start], seed + SCAN_STEP_NM * steps, [stop]]), start, stop))
        values = mismatch(grid)
        brackets = _brackets(grid, values)
        if brackets:
            break
        if start <= low and stop >= high:
            raise NoSolutionError(
                f'No phase-matching wavelength between {low:g} and {high:g} '
                f'nm for a {wg.poling_period:g} um period at '
                f'{temperature:g} K')
        half_width *= 2.0
    i, j = _nearest(brackets, grid, seed)
    logger.debug('phase-matching bracket %.3f-%.3f nm', grid[i], grid[j])
    if i == j:
        root = float(grid[i])
    else:
        root = brentq(mismatch, grid[i], grid[j], xtol=ROOT_XTOL_NM,
                      maxiter=200)
    length = float(mm_to_um(wg.length_at(model.thermal, temperature)))
    residual = abs(float(mismatch(root))) * length / 2.0
    if residual > ROOT_TOLERANCE:
        logger.debug('root at %.9f nm leaves |dk L/2| = %.2e', root, residual)
    return float(root)


def design_poling_period(model: DispersionModel, target_nm: float,
                         temperature: float) -> float:
    """
    Poling period (um, specified at 295 K) that phase matches SHG of
    target_nm at temperature T once the crystal has contracted.

    Raises:
        NoQuasiPhaseMatchingError: the index difference is not positive
    """
    delta_n = float(shg_index_difference(model, target_nm, temperature))
    if delta_n <= 0:
        raise NoQuasiPhaseMatchingError(
            f'Index difference {delta_n:.3g} at {target_nm:g} nm and '
            f'{temperature:g} K admits no poling period')
    period_at_t = float(nm_to_um(target_nm)) / delta_n
    return period_at_t / thermal_scale(model.thermal, temperature)
