"""
Calibration of the index-difference correction from cool-down data: the
phase-matched SHG wavelength of several poling periods, tracked over
temperature.
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

import data.files as fls
from common import lsq
from common.errors import (ConfigurationError, DataFormatError, FitFailure,
                           InsufficientDataError, NoSolutionError)
from common.units import nm_to_um
from dispersion.correction import DEGREE, N_COEFFS, CorrectionPolynomial
from dispersion.model import DispersionModel
from phasematch.mismatch import shg_index_difference
from phasematch.solve import solve_phasematched_wavelength
from phasematch.waveguide import WaveguideSpec

logger = logging.getLogger(__name__)

# length given to the solver; only its tolerance depends on it
NOMINAL_LENGTH_MM = 10.0
MIN_TEMPERATURES = DEGREE + 1
COEFF_SCALE = 1e-5
SLOPE_STEP_NM = 0.01

POLING_PERIOD = 'poling_period_um'
TEMPERATURE = 'temperature_K'
WAVELENGTH = 'lambda_pm_nm'
SIGMA = 'sigma_nm'
PREDICTED = 'predicted_nm'
RESIDUAL = 'residual_nm'


@dataclass(frozen=True)
class CalibrationPoint:
    poling_period: float
    temperature: float
    phase_matched_wavelength: float
    wavelength_uncertainty: float = None

    def __post_init__(self):
        if not self.poling_period > 0:
            raise ValueError(f'poling_period must be positive, got '
                             f'{self.poling_period}')
        if self.temperature < 0:
            raise ValueError(f'Temperature {self.temperature} K is below 0 K')
        if not self.phase_matched_wavelength > 0:
            raise ValueError('phase_matched_wavelength must be positive')
        if self.wavelength_uncertainty is not None \
                and not self.wavelength_uncertainty > 0:
            raise ValueError(f'Uncertainty must be positive, got '
                             f'{self.wavelength_uncertainty}')

    @property
    def waveguide(self) -> WaveguideSpec:
        return WaveguideSpec(self.poling_period, NOMINAL_LENGTH_MM)


@dataclass(frozen=True)
class CalibrationResult:
    correction: CorrectionPolynomial
    predicted_nm: np.ndarray
    residuals_nm: np.ndarray
    rms_nm: float
    stderr: np.ndarray
    linear_seed: CorrectionPolynomial


def load_calibration_points(path: str) -> list:
    """
    Read a calibration CSV (poling_period_um, temperature_K, lambda_pm_nm and
    optionally sigma_nm).

    Raises:
        DataFormatError: bad file, or a row that is not a valid point
    """
    table = fls.read_csv_table(path, [POLING_PERIOD, TEMPERATURE, WAVELENGTH],
                               [SIGMA])
    points = []
    for row, record in enumerate(table.to_dict('records')):
        sigma = record.get(SIGMA)
        try:
            points.append(CalibrationPoint(
                record[POLING_PERIOD], record[TEMPERATURE], record[WAVELENGTH],
                None if sigma is None or np.isnan(sigma) else sigma))
        except ValueError as err:
            raise DataFormatError(str(err), path,
                                  row + fls.FIRST_DATA_LINE) from err
    logger.info('read %d calibration points from %s', len(points), path)
    return points


def uncertainties(points: list) -> np.ndarray:
    """Per-point sigma in nm; missing ones take the median of the rest."""
    given = [p.wavelength_uncertainty for p in points
             if p.wavelength_uncertainty is not None]
    fill = float(np.median(given)) if given else 1.0
    return np.array([fill if p.wavelength_uncertainty is None
                     else p.wavelength_uncertainty for p in points])


def effective_weight(model: DispersionModel) -> float:
    """How much of the correction reaches the SHG index difference."""
    weights = model.weights
    return weights.te - weights.tm + weights.combined


def predict_wavelengths(points: list, model: DispersionModel) -> np.ndarray:
    """Phase-matched wavelength of each point's period and temperature."""
    return np.array([
        solve_phasematched_wavelength(model, p.waveguide, p.temperature,
                                      p.phase_matched_wavelength)
        for p in points])


def _required_correction(points, model, step_nm=0.0):
    """
    Correction that phase matches each measured wavelength exactly,
    lambda / Lambda(T) - dn0(lambda, T), divided by the effective weight.
    """
    bare = model.with_correction(
        CorrectionPolynomial.zero(model.correction.temperature_range))
    values = []
    for p in points:
        wavelength = p.phase_matched_wavelength + step_nm
        period = p.waveguide.period_at(model.thermal, p.temperature)
        values.append(nm_to_um(wavelength) / period
                      - shg_index_difference(bare, wavelength, p.temperature))
    return np.array(values, dtype=float) / effective_weight(model)


def _fit_range(points, model) -> tuple:
    temps = [p.temperature for p in points]
    low, high = model.correction.temperature_range
    return min(low, min(temps)), max(high, max(temps))


def linear_correction(points: list, model: DispersionModel,
                      temperature_range: tuple = None) -> tuple:
    """
    Weighted polynomial fit of the exactly required correction.

    Returns:
        (coefficients, index uncertainty of each point)
    """
    temperature_range = temperature_range or _fit_range(points, model)
    sigma_nm = uncertainties(points)
    required = _required_correction(points, model)
    slope = (_required_correction(points, model, SLOPE_STEP_NM)
             - _required_correction(points, model, -SLOPE_STEP_NM)) \
        / (2.0 * SLOPE_STEP_NM)
    sigma_dn = np.abs(slope) * sigma_nm
    sigma_dn[sigma_dn == 0] = 1.0
    scaled = CorrectionPolynomial.zero(temperature_range).scaled_temperature(
        [p.temperature for p in points])
    design = P.polyvander(scaled, DEGREE) / sigma_dn[:, None]
    coeffs, *_ = np.linalg.lstsq(design, required / sigma_dn, rcond=None)
    return coeffs, sigma_dn


def _polynomial(coeffs, temperature_range) -> CorrectionPolynomial:
    try:
        return CorrectionPolynomial(tuple(coeffs), temperature_range)
    except ValueError as err:
        raise FitFailure(str(err), best_params=np.asarray(coeffs)) from err


def calibrate_correction(points: list, model: DispersionModel,
                         temperature_range: tuple = None) -> CalibrationResult:
    """
    Fit the degree-5 correction to measured phase-matched wavelengths.

    The exact linear solution (the correction that phase matches every
    measured wavelength) seeds a weighted least-squares fit of predicted
    against measured wavelengths, each prediction coming from the
    phase-matching solver with the candidate correction in place.

    Args:
        points: calibration points, at least 6 distinct temperatures
        model: dispersion model; its correction is replaced
        temperature_range: range the polynomial is scaled over; defaults to
            the model's correction range widened to cover every point

    Raises:
        InsufficientDataError: fewer than 6 distinct temperatures
        ConfigurationError: the model's correction weights cancel out
        FitFailure: no convergence, or a candidate correction leaves a point
            without a phase-matching wavelength
    """
    distinct = len({float(p.temperature) for p in points})
    if distinct < MIN_TEMPERATURES:
        raise InsufficientDataError(
            f'Calibration needs at least {MIN_TEMPERATURES} distinct '
            f'temperatures, got {distinct}')
    if effective_weight(model) == 0.0:
        raise ConfigurationError('The correction weights cancel; the '
                                 'correction cannot change phase matching')
    temperature_range = tuple(temperature_range
                              or _fit_range(points, model))
    for p in points:
        model.check_domain(p.phase_matched_wavelength, p.temperature)
        model.check_domain(p.phase_matched_wavelength / 2.0, p.temperature)

    seed, _ = linear_correction(points, model, temperature_range)
    seed_poly = _polynomial(seed, temperature_range)
    measured = np.array([p.phase_matched_wavelength for p in points])
    sigma_nm = uncertainties(points)
    logger.info('calibrating on %d points at %d temperatures', len(points),
                distinct)

    def residuals(coeffs):
        candidate = model.with_correction(
            _polynomial(coeffs, temperature_range))
        try:
            predicted = predict_wavelengths(points, candidate)
        except NoSolutionError as err:
            raise FitFailure(f'Candidate correction {list(coeffs)} left a '
                             f'point unsolvable: {err}',
                             best_params=seed) from err
        return (predicted - measured) / sigma_nm

    given = any(p.wavelength_uncertainty is not None for p in points)
    result = lsq.fit(residuals, seed, scale=[COEFF_SCALE] * N_COEFFS,
                     absolute_sigma=given)
    correction = _polynomial(result.params, temperature_range)
    predicted = predict_wavelengths(points, model.with_correction(correction))
    residual_nm = predicted - measured
    rms = float(np.sqrt(np.mean(residual_nm ** 2)))
    logger.info('calibration residual RMS %.4f nm after %d evaluations', rms,
                result.nfev)
    return CalibrationResult(correction, predicted, residual_nm, rms,
                             result.stderr, seed_poly)


def residual_table(points: list, result: CalibrationResult) -> dict:
    """Columns for the residuals CSV."""
    return {
        POLING_PERIOD: [p.poling_period for p in points],
        TEMPERATURE: [p.temperature for p in points],
        WAVELENGTH: [p.phase_matched_wavelength for p in points],
        SIGMA: uncertainties(points),
        PREDICTED: result.predicted_nm,
        RESIDUAL: result.residuals_nm,
    }
