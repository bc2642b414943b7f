"""
Empirical correction of the index difference, a degree-5 polynomial in a
temperature scaled to [-1, 1] over the range it was fitted on.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from common.errors import ExtrapolationWarning

DEGREE = 5
N_COEFFS = DEGREE + 1
SANITY_BOUND = 1e-2
SANITY_SAMPLES = 201

DEFAULT_RANGE = (4.0, 300.0)

COEFFICIENTS = 'coefficients'
TEMPERATURE_RANGE = 'temperature_range_K'


@dataclass(frozen=True)
class CorrectionPolynomial:
    coefficients: tuple = (0.0,) * N_COEFFS
    temperature_range: tuple = DEFAULT_RANGE

    def __post_init__(self):
        coeffs = [float(c) for c in self.coefficients]
        if len(coeffs) > N_COEFFS:
            raise ValueError(f'Correction polynomial takes at most {N_COEFFS} '
                             f'coefficients, got {len(coeffs)}')
        coeffs += [0.0] * (N_COEFFS - len(coeffs))
        object.__setattr__(self, 'coefficients', tuple(coeffs))
        low, high = (float(t) for t in self.temperature_range)
        if not 0.0 <= low < high:
            raise ValueError(f'Bad correction temperature range {low}-{high}')
        object.__setattr__(self, 'temperature_range', (low, high))
        peak = np.max(np.abs(P.polyval(np.linspace(-1.0, 1.0, SANITY_SAMPLES),
                                       coeffs)))
        if peak >= SANITY_BOUND:
            raise ValueError(f'Correction reaches {peak:.3g} inside its '
                             'fitted range; the fit has diverged')

    @classmethod
    def zero(cls, temperature_range=DEFAULT_RANGE) -> 'CorrectionPolynomial':
        return cls(temperature_range=temperature_range)

    def scaled_temperature(self, temperature):
        low, high = self.temperature_range
        return (2.0 * np.asarray(temperature, dtype=float) - (high + low)) \
            / (high - low)

    def in_range(self, temperature) -> bool:
        low, high = self.temperature_range
        temperature = np.asarray(temperature, dtype=float)
        return bool(np.all((temperature >= low) & (temperature <= high)))

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)


def eval_correction(poly: CorrectionPolynomial, temperature):
    """
    delta n at temperature (K). Outside the fitted range the polynomial is
    still evaluated, with an ExtrapolationWarning.
    """
    if not poly.in_range(temperature):
        warnings.warn(
            f'Correction polynomial extrapolated outside '
            f'{poly.temperature_range[0]:g}-{poly.temperature_range[1]:g} K',
            ExtrapolationWarning, stacklevel=2)
    value = P.polyval(poly.scaled_temperature(temperature), poly.coefficients)
    return float(value) if np.ndim(value) == 0 else value
