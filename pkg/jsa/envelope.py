"""
Spectral shapes entering the joint spectrum: the pump envelope and the
band-pass filters in front of the detectors. Widths are intensity FWHMs; the
amplitudes returned here are field amplitudes.
"""
from dataclasses import dataclass

import numpy as np

from common.curves import SpectrumCurve
from common.units import gaussian_amplitude, sech2_amplitude

GAUSSIAN = 'gaussian'
SECH2 = 'sech2'
TABULATED = 'tabulated'
RECTANGULAR = 'rectangular'

PUMP_SHAPES = (GAUSSIAN, SECH2, TABULATED)
FILTER_SHAPES = (GAUSSIAN, RECTANGULAR)

# relative slack on rectangular filter edges
EDGE_TOLERANCE = 1e-9

SAMPLE_PUMP = {
    'center_nm': 779.5,
    'fwhm_nm': 0.73,
    'shape': GAUSSIAN,
}


@dataclass(frozen=True)
class PumpEnvelope:
    """
    Pump spectrum against pump wavelength. A tabulated envelope carries its
    intensity curve; center and fwhm then only size the default grid.
    """
    center: float
    fwhm: float
    shape: str = GAUSSIAN
    table: SpectrumCurve = None

    def __post_init__(self):
        if self.shape not in PUMP_SHAPES:
            raise ValueError(f'Pump shape must be one of {PUMP_SHAPES}, got '
                             f'{self.shape!r}')
        if not self.fwhm > 0:
            raise ValueError(f'Pump fwhm must be positive, got {self.fwhm}')
        if not self.center > 0:
            raise ValueError(f'Pump center must be positive, got '
                             f'{self.center}')
        if self.shape == TABULATED:
            if self.table is None:
                raise ValueError('A tabulated pump needs a table')
            if np.any(self.table.y < 0):
                raise ValueError('Tabulated pump intensity must be '
                                 'non-negative')
            norm = float(np.sum(self.table.y ** 2))
            if not np.isfinite(norm) or norm == 0:
                raise ValueError('Tabulated pump needs a finite, non-zero '
                                 'norm')

    @classmethod
    def from_table(cls, table: SpectrumCurve) -> 'PumpEnvelope':
        """Tabulated envelope with center and width read off the curve."""
        center, _ = table.peak()
        return cls(center, table.fwhm(), TABULATED, table)

    def amplitude(self, pump_nm):
        pump_nm = np.asarray(pump_nm, dtype=float)
        if self.shape == GAUSSIAN:
            return gaussian_amplitude(pump_nm, self.center, self.fwhm)
        if self.shape == SECH2:
            return sech2_amplitude(pump_nm, self.center, self.fwhm)
        intensity = np.interp(pump_nm, self.table.x, self.table.y,
                              left=0.0, right=0.0)
        return np.sqrt(intensity)


@dataclass(frozen=True)
class BandpassFilter:
    center: float
    fwhm: float
    shape: str = GAUSSIAN

    def __post_init__(self):
        if self.shape not in FILTER_SHAPES:
            raise ValueError(f'Filter shape must be one of {FILTER_SHAPES}, '
                             f'got {self.shape!r}')
        if not self.fwhm > 0:
            raise ValueError(f'Filter fwhm must be positive, got {self.fwhm}')

    def transmission(self, wavelength_nm):
        """Amplitude transmission; a Gaussian's intensity FWHM is fwhm."""
        wavelength_nm = np.asarray(wavelength_nm, dtype=float)
        if self.shape == GAUSSIAN:
            return gaussian_amplitude(wavelength_nm, self.center, self.fwhm)
        half = self.fwhm / 2.0 * (1.0 + EDGE_TOLERANCE)
        return (np.abs(wavelength_nm - self.center) <= half).astype(float)
