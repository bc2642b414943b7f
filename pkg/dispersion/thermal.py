"""
Thermal contraction of the propagation axis. Lengths and poling periods are
specified at 295 K and scaled by s(T) = (1 + e(T)) / (1 + e(295 K)), where e
is the tabulated relative length change.
"""
from dataclasses import dataclass

import numpy as np

from common.errors import DomainError

REFERENCE_TEMPERATURE = 295.0
DEFAULT_CLAMP = 60.0
# tables must reach at least this high
COVERAGE_TOP = 300.0

TEMPERATURES = 'temperature_K'
STRAINS = 'relative_length_change'
CLAMP = 'clamp_temperature_K'
REFERENCE = 'reference_temperature_K'


@dataclass(frozen=True)
class ThermalExpansionTable:
    temperatures: tuple
    strains: tuple
    clamp_temperature: float = DEFAULT_CLAMP
    reference_temperature: float = REFERENCE_TEMPERATURE
    source: str = ''

    def __post_init__(self):
        temps = np.asarray(self.temperatures, dtype=float)
        strains = np.asarray(self.strains, dtype=float)
        if temps.ndim != 1 or temps.shape != strains.shape or temps.size < 2:
            raise ValueError('Thermal table needs matching temperature and '
                             'strain columns with at least 2 rows')
        if np.any(np.diff(temps) <= 0):
            raise ValueError('Thermal table temperatures must be strictly '
                             'increasing')
        if temps[0] > self.clamp_temperature or temps[-1] < COVERAGE_TOP:
            raise ValueError(
                f'Thermal table must cover {self.clamp_temperature:g}-'
                f'{COVERAGE_TOP:g} K, covers {temps[0]:g}-{temps[-1]:g} K')
        object.__setattr__(self, 'temperatures', tuple(temps))
        object.__setattr__(self, 'strains', tuple(strains))

    @classmethod
    def flat(cls) -> 'ThermalExpansionTable':
        """No contraction at any temperature."""
        return cls((0.0, COVERAGE_TOP), (0.0, 0.0), source='flat')


def thermal_scale(table: ThermalExpansionTable, temperature):
    """
    Length scale factor s(T), 1 at the reference temperature and constant at
    and below the clamp temperature.

    Raises:
        DomainError: T below 0 K or above the table
    """
    temperature = np.asarray(temperature, dtype=float)
    top = table.temperatures[-1]
    if np.any(temperature < 0.0):
        raise DomainError(f'Temperature {np.min(temperature):g} K is below '
                          '0 K')
    if np.any(temperature > top):
        raise DomainError(f'Temperature {np.max(temperature):g} K is above '
                          f'the thermal expansion table maximum {top:g} K')
    clamped = np.maximum(temperature, table.clamp_temperature)
    strain = np.interp(clamped, table.temperatures, table.strains)
    reference = np.interp(table.reference_temperature, table.temperatures,
                          table.strains)
    scale = (1.0 + strain) / (1.0 + reference)
    return float(scale) if scale.ndim == 0 else scale
