"""
Projections of the joint spectrum onto the signal and idler axes, and the
Gaussian fit used to quote their widths.
"""
import logging
from dataclasses import dataclass

import numpy as np

import common.lsq as lsq
from common.curves import SpectrumCurve
from common.errors import FitFailure, PreconditionError
from common.units import FWHM_PER_SIGMA
from jsa.joint import JointSpectrum

logger = logging.getLogger(__name__)

MIN_POINTS = 5
WAVELENGTH = 'lambda_nm'
DENSITY = 'density'

CENTER = 'center_nm'
FWHM = 'fwhm_nm'
AMPLITUDE = 'amplitude'

# 4 ln 2: exponent of an intensity Gaussian written with its FWHM
_FWHM_EXPONENT = 0.5 * FWHM_PER_SIGMA ** 2


def marginals(js: JointSpectrum) -> tuple:
    """
    (signal, idler) marginal densities: |A|^2 summed over the other axis
    times that axis' step. For a normalized spectrum each sums to 1 over its
    own axis.
    """
    intensity = js.intensity
    grid = js.grid
    signal = SpectrumCurve(grid.signal_axis,
                           intensity.sum(axis=1) * grid.idler_step,
                           x_name=WAVELENGTH, y_name=DENSITY,
                           meta={'arm': 'signal'})
    idler = SpectrumCurve(grid.idler_axis,
                          intensity.sum(axis=0) * grid.signal_step,
                          x_name=WAVELENGTH, y_name=DENSITY,
                          meta={'arm': 'idler'})
    return signal, idler


def gaussian(x, center, fwhm, amplitude):
    """Intensity Gaussian of peak amplitude and full width at half maximum."""
    x = np.asarray(x, dtype=float)
    return amplitude * np.exp(-_FWHM_EXPONENT * ((x - center) / fwhm) ** 2)


@dataclass(frozen=True)
class GaussianFit:
    center: float
    fwhm: float
    amplitude: float
    uncertainties: dict
    residual: float
    fitted: SpectrumCurve


def _seed_width(curve: SpectrumCurve) -> float:
    try:
        return curve.fwhm()
    except ValueError:
        return (curve.x[-1] - curve.x[0]) / 4.0


def gaussian_fit(curve: SpectrumCurve) -> GaussianFit:
    """
    Least-squares Gaussian through a single-peaked curve.

    Raises:
        PreconditionError: fewer than 5 points
        FitFailure: no peak, or no convergence
    """
    if len(curve) < MIN_POINTS:
        raise PreconditionError(f'Gaussian fit needs at least {MIN_POINTS} '
                                f'points, got {len(curve)}')
    peak_x, peak_y = curve.peak()
    if peak_y <= 0 or np.all(curve.y == curve.y[0]):
        raise FitFailure('The curve has no peak to fit')
    width = _seed_width(curve)
    weights = 1.0 / curve.sigma if curve.has_sigma \
        else np.ones(len(curve))

    def residuals(params):
        offset, fwhm, amplitude = params
        return (gaussian(curve.x, peak_x + offset, fwhm, amplitude)
                - curve.y) * weights

    result = lsq.fit(residuals, [0.0, width, peak_y],
                     scale=[width / 10.0, width, peak_y],
                     absolute_sigma=curve.has_sigma)
    offset, fwhm, amplitude = result.params
    center = peak_x + float(offset)
    fwhm = abs(float(fwhm))
    logger.info('gaussian fit: center=%.4f fwhm=%.4f', center, fwhm)
    return GaussianFit(
        center=center,
        fwhm=fwhm,
        amplitude=float(amplitude),
        uncertainties=dict(zip((CENTER, FWHM, AMPLITUDE),
                               result.stderr.tolist())),
        residual=result.rms,
        fitted=SpectrumCurve(curve.x, gaussian(curve.x, center, fwhm,
                                               amplitude),
                             x_name=curve.x_name, y_name=curve.y_name),
    )
