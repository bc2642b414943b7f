"""
Temperature-dependent Sellmeier equations.

Both polarizations use one extended form, with the wavelength in um and a
temperature parameter f built from the temperature in K:

    n^2 = a1 + b1 f + (a2 + b2 f) / (lam^2 - (a3 + b3 f)^2)
          + (a4 + b4 f) / (lam^2 - a5^2) - a6 lam^2

    f = (T - reference_temperature) * (T + temperature_offset)

Sets with fewer terms leave the unused coefficients at zero.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from common.errors import DomainError, ExtrapolationWarning
from common.units import nm_to_um

N_A = 6
N_B = 4

A = 'a'
B = 'b'
REFERENCE_TEMPERATURE = 'reference_temperature_K'
TEMPERATURE_OFFSET = 'temperature_offset_K'
REFERENCE_RANGE = 'reference_range_K'


@dataclass(frozen=True)
class SellmeierCoefficients:
    a: tuple
    b: tuple = (0.0,) * N_B
    reference_temperature: float = 297.65
    temperature_offset: float = 297.65
    # temperatures the published fit covers; None for synthetic sets
    reference_range: tuple = None
    source: str = ''

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        if len(a) != N_A:
            raise ValueError(f'Sellmeier set needs {N_A} a-coefficients, '
                             f'got {len(a)}')
        if len(b) != N_B:
            raise ValueError(f'Sellmeier set needs {N_B} b-coefficients, '
                             f'got {len(b)}')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @classmethod
    def constant(cls, index: float) -> 'SellmeierCoefficients':
        """A dispersionless set evaluating to index everywhere."""
        if index <= 1.0:
            raise ValueError(f'Refractive index must exceed 1, got {index}')
        return cls(a=(index ** 2, 0.0, 0.0, 0.0, 0.0, 0.0),
                   source='constant')

    def extrapolates(self, temperature) -> bool:
        if self.reference_range is None:
            return False
        low, high = self.reference_range
        temperature = np.asarray(temperature, dtype=float)
        return bool(np.any((temperature < low) | (temperature > high)))


def evaluate(coeffs: SellmeierCoefficients, wavelength_nm, temperature):
    """
    Refractive index of one coefficient set.

    Args:
        coeffs: the Sellmeier set
        wavelength_nm: vacuum wavelength(s) in nm
        temperature: temperature(s) in K, broadcast against wavelength_nm

    Returns:
        index (float or array)

    Raises:
        DomainError: the equation has no real index above 1 at this point
            (a wavelength on or past a resonance)

    Warns:
        ExtrapolationWarning: temperature outside the set's reference range
    """
    if coeffs.extrapolates(temperature):
        warnings.warn(
            f'Sellmeier set {coeffs.source or "<unnamed>"} extrapolated '
            f'outside {coeffs.reference_range[0]:g}-'
            f'{coeffs.reference_range[1]:g} K', ExtrapolationWarning,
            stacklevel=3)
    a1, a2, a3, a4, a5, a6 = coeffs.a
    b1, b2, b3, b4 = coeffs.b
    lam2 = nm_to_um(wavelength_nm) ** 2
    temperature = np.asarray(temperature, dtype=float)
    f = (temperature - coeffs.reference_temperature) \
        * (temperature + coeffs.temperature_offset)
    n2 = a1 + b1 * f - a6 * lam2
    with np.errstate(divide='ignore', invalid='ignore'):
        n2 = n2 + (a2 + b2 * f) / (lam2 - (a3 + b3 * f) ** 2)
        if a4 != 0.0 or b4 != 0.0:
            n2 = n2 + (a4 + b4 * f) / (lam2 - a5 ** 2)
    if not np.all(np.isfinite(n2)) or np.any(n2 <= 1.0):
        raise DomainError('Sellmeier equation gives no index above 1 at '
                          f'{np.min(wavelength_nm):g} nm')
    index = np.sqrt(n2)
    return float(index) if index.ndim == 0 else index
