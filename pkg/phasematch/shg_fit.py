"""
Fit of measured SHG tuning curves: peak position, amplitude, effective
length and (optionally) a longitudinal index profile.

The measured curve is normalized to its maximum. The mismatch across the
curve comes from a detuning map, shifted so that it vanishes at the fitted
centre wavelength. A uniform fit runs first; it is the ideal sinc^2 against
which the overlap of the final fit is reported, and it seeds the profile
fit.

|Phi| does not change when the profile is mirrored or shifted by a constant
(the constant only moves the centre), so profile parameters are fitted with
zero mean and reported as the mirror image whose first value is not below
its last. The cost is even in a two-segment step height, which therefore
starts from several non-zero values.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from common import lsq
from common.curves import SpectrumCurve
from common.errors import FitFailure, PreconditionError
from phasematch.spectrum import (DetuningMap, Detuning, detuning_slope,
                                 linear_detuning, shg_intensity,
                                 spectrum_overlap)
from phasematch.waveguide import (PIECEWISE_CONSTANT, POLYNOMIAL, UNIFORM,
                                  IndexProfile, WaveguideSpec)

logger = logging.getLogger(__name__)

MIN_POINTS = 20
OVERSAMPLE = 20
# lithium niobate near 1560 nm, rad/um per nm
DEFAULT_SLOPE = -6.6e-4
# dk L / 2 at half maximum of sinc^2
HALF_POWER_ARGUMENT = 1.39156

CENTER = 'center_nm'
AMPLITUDE = 'amplitude'
LENGTH = 'effective_length_mm'
PROFILE = 'profile'

SCALE_CENTER = 0.01
SCALE_AMPLITUDE = 1.0
SCALE_LENGTH = 1.0
SCALE_PROFILE = 1e-5
PROFILE_LIMIT = 1e-3
# phase kappa * dn * L / 2 of the profile starting points, rad
PROFILE_START_PHASES = (0.5, 1.5, 3.0)


@dataclass(frozen=True)
class ShgFitResult:
    effective_length: float
    effective_fraction: float
    peak_wavelength: float
    profile: IndexProfile
    overlap_with_ideal: float
    residual: float
    center_wavelength: float = 0.0
    amplitude: float = 1.0
    uncertainties: dict = field(default_factory=dict)
    fitted: SpectrumCurve = None
    ideal: SpectrumCurve = None
    residuals: np.ndarray = None


def _polynomial_basis(degree: int) -> list:
    """Zero-mean powers of (u - 1/2) as coefficient arrays in u."""
    basis = []
    for power in range(1, degree + 1):
        coeffs = P.polypow([-0.5, 1.0], power)
        if power % 2 == 0:
            coeffs[0] -= 0.5 ** power / (power + 1)
        basis.append(coeffs)
    return basis


def n_profile_parameters(kind: str, size: int) -> int:
    if kind == UNIFORM:
        return 0
    if kind == PIECEWISE_CONSTANT:
        return size - 1
    return size


def profile_from_parameters(kind: str, params, size: int) -> IndexProfile:
    """
    Zero-mean profile from free parameters.

    piecewise_constant: size equal segments, the last one balancing the mean.
    polynomial: size is the degree; parameters weight the zero-mean powers of
        (u - 1/2).
    """
    params = np.asarray(params, dtype=float)
    if kind == UNIFORM:
        return IndexProfile.uniform()
    if kind == PIECEWISE_CONSTANT:
        return IndexProfile.segments(list(params) + [-float(np.sum(params))])
    coeffs = np.zeros(size + 1)
    for weight, term in zip(params, _polynomial_basis(size)):
        coeffs[:term.size] += weight * term
    return IndexProfile(POLYNOMIAL, tuple(coeffs))


def _profile_starts(kind: str, size: int, kappa: float, length_mm: float):
    if kind == UNIFORM:
        return [np.zeros(0)]
    starts = []
    for phase in PROFILE_START_PHASES:
        step = 2.0 * phase / (kappa * length_mm * 1e3)
        if kind == PIECEWISE_CONSTANT:
            starts.append(step * np.linspace(1.0, -1.0, size)[:-1])
        else:
            start = np.zeros(size)
            start[0] = 2.0 * step
            starts.append(start)
    return starts


class _ShgModel:
    """
    Forward model over fixed measured wavelengths. The first parameter is the
    centre relative to a reference wavelength.
    """

    def __init__(self, wavelengths, detuning: DetuningMap, kind: str,
                 size: int, reference: float):
        self.wavelengths = np.asarray(wavelengths, dtype=float)
        self.detuning = detuning
        self.kind = kind
        self.size = size
        self.reference = reference
        self.base = detuning(self.wavelengths)

    def intensity(self, params, wavelengths=None):
        offset, amplitude, length = params[:3]
        if wavelengths is None:
            base = self.base
        else:
            base = self.detuning(np.asarray(wavelengths, dtype=float))
        shift = self.detuning(np.array([self.reference + offset])).delta_k[0]
        profile = profile_from_parameters(self.kind, params[3:], self.size)
        shifted = Detuning(base.delta_k - shift, base.kappa)
        return amplitude * shg_intensity(shifted, length, profile)


def _seed_length(measured: SpectrumCurve, detuning: DetuningMap,
                 center: float, max_length: float) -> float:
    slope = abs(detuning_slope(detuning, center))
    try:
        width = measured.fwhm()
    except ValueError as err:
        raise PreconditionError('The measured curve must contain the whole '
                                'main lobe') from err
    if slope == 0:
        raise PreconditionError('The detuning map has no slope at the peak')
    length = 4.0 * HALF_POWER_ARGUMENT / (slope * width) / 1e3
    return float(np.clip(length, 0.05 * max_length, max_length))


def _run(model: _ShgModel, y, weights, x0, scale, bounds) -> lsq.LsqResult:
    def residuals(params):
        return (model.intensity(params) - y) * weights
    return lsq.fit(residuals, x0, scale=scale, bounds=bounds,
                   absolute_sigma=bool(np.any(weights != 1.0)))


def fit_shg_spectrum(measured: SpectrumCurve, wg: WaveguideSpec,
                     profile_kind: str = PIECEWISE_CONSTANT,
                     initial_guess: dict = None,
                     detuning: DetuningMap = None,
                     profile_size: int = 2) -> ShgFitResult:
    """
    Fit a measured SHG power curve.

    Args:
        measured: power against fundamental wavelength (nm); sigma, when
            present, weights the residuals
        wg: the device; its length bounds the effective length
        profile_kind: uniform, piecewise_constant or polynomial
        initial_guess: optional starting values keyed by center_nm,
            amplitude, effective_length_mm and profile (free parameters)
        detuning: wavelength -> mismatch map; defaults to a linear map with
            the lithium niobate slope
        profile_size: segments (piecewise) or degree (polynomial)

    Raises:
        PreconditionError: fewer than 20 points, or no complete main lobe
        FitFailure: no peak, or no convergence within the iteration cap
    """
    if len(measured) < MIN_POINTS:
        raise PreconditionError(f'SHG fit needs at least {MIN_POINTS} points, '
                                f'got {len(measured)}')
    if profile_kind not in (UNIFORM, PIECEWISE_CONSTANT, POLYNOMIAL):
        raise ValueError(f'Unknown profile kind {profile_kind!r}')
    if profile_kind == PIECEWISE_CONSTANT and profile_size < 2:
        raise ValueError('A fitted piecewise profile needs 2+ segments')
    if np.max(measured.y) <= 0:
        raise FitFailure('The measured curve has no peak')
    guess = dict(initial_guess or {})
    peak_x, peak_y = measured.peak()
    curve = measured.scaled(1.0 / peak_y)
    y = curve.y
    weights = 1.0 / curve.sigma if curve.has_sigma else np.ones_like(y)
    if detuning is None:
        detuning = linear_detuning(peak_x, DEFAULT_SLOPE)

    max_length = wg.length
    amplitude = float(guess.get(AMPLITUDE, 1.0))
    offset = float(guess.get(CENTER, peak_x)) - peak_x
    length = float(guess.get(LENGTH) or _seed_length(
        curve, detuning, peak_x + offset, max_length))
    span = (measured.x[0], measured.x[-1])
    core_bounds = ([span[0] - peak_x, 0.0, 1e-3 * max_length],
                   [span[1] - peak_x, np.inf, max_length])
    core_scale = [SCALE_CENTER, SCALE_AMPLITUDE, SCALE_LENGTH]

    uniform_model = _ShgModel(curve.x, detuning, UNIFORM, 0, peak_x)
    uniform = _run(uniform_model, y, weights, [offset, amplitude, length],
                   core_scale, core_bounds)
    logger.info('uniform SHG fit: L=%.3f mm cost=%.3g', uniform.params[2],
                uniform.cost)
    best, best_model = uniform, uniform_model
    n_extra = n_profile_parameters(profile_kind, profile_size)
    if n_extra:
        model = _ShgModel(curve.x, detuning, profile_kind, profile_size,
                          peak_x)
        kappa = float(np.mean(model.base.kappa))
        lower = [-PROFILE_LIMIT] * n_extra
        if profile_kind == PIECEWISE_CONSTANT and profile_size == 2:
            lower = [0.0]
        bounds = (core_bounds[0] + lower,
                  core_bounds[1] + [PROFILE_LIMIT] * n_extra)
        scale = core_scale + [SCALE_PROFILE] * n_extra
        starts = _profile_starts(profile_kind, profile_size, kappa,
                                 uniform.params[2])
        if PROFILE in guess:
            starts = [np.asarray(guess[PROFILE], dtype=float)]
        best = None
        failure = None
        for start in starts:
            x0 = np.concatenate([uniform.params, np.clip(start, bounds[0][3:],
                                                          bounds[1][3:])])
            try:
                result = _run(model, y, weights, x0, scale, bounds)
            except FitFailure as err:
                failure = err
                continue
            logger.debug('profile start %s: cost %.3g', start, result.cost)
            if best is None or result.cost < best.cost:
                best = result
        if best is None:
            raise failure
        best_model = model

    params = best.params
    if n_extra:
        profile = profile_from_parameters(best_model.kind, params[3:],
                                          best_model.size).canonical()
    else:
        profile = IndexProfile.uniform()
    fine_x = np.linspace(span[0], span[1], OVERSAMPLE * len(measured))
    fitted = SpectrumCurve(fine_x, best_model.intensity(params, fine_x),
                           x_name=measured.x_name, y_name=measured.y_name)
    ideal = SpectrumCurve(fine_x, uniform_model.intensity(uniform.params,
                                                          fine_x),
                          x_name=measured.x_name, y_name=measured.y_name)
    peak_wavelength, _ = fitted.peak()
    names = [CENTER, AMPLITUDE, LENGTH] + \
        [f'{PROFILE}_{i}' for i in range(len(params) - 3)]
    effective_length = float(params[2])
    return ShgFitResult(
        effective_length=effective_length,
        effective_fraction=effective_length / wg.length,
        peak_wavelength=peak_wavelength,
        profile=profile,
        overlap_with_ideal=spectrum_overlap(fitted, ideal),
        residual=best.rms,
        center_wavelength=peak_x + float(params[0]),
        amplitude=float(params[1]) * peak_y,
        uncertainties=dict(zip(names, best.stderr.tolist())),
        fitted=fitted.scaled(peak_y),
        ideal=ideal.scaled(peak_y),
        residuals=best.residuals,
    )
