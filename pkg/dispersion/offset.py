"""
Waveguide index offset: the increase of the effective index over the bulk
index from lateral confinement. Tabulated against wavelength (linear
interpolation, end values held) or a low-order polynomial in nm.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

TE = 'TE'
TM = 'TM'
POLARIZATIONS = (TE, TM)

TABLE = 'table'
POLYNOMIAL = 'polynomial'
KINDS = (TABLE, POLYNOMIAL)
WAVELENGTHS = 'wavelength_nm'

MAX_POLY_DEGREE = 3


@dataclass(frozen=True)
class WaveguideOffset:
    kind: str
    te: tuple
    tm: tuple
    wavelength_nm: tuple = ()
    source: str = ''

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f'Unknown offset kind {self.kind!r}')
        te = tuple(float(v) for v in self.te)
        tm = tuple(float(v) for v in self.tm)
        object.__setattr__(self, 'te', te)
        object.__setattr__(self, 'tm', tm)
        if self.kind == TABLE:
            grid = tuple(float(v) for v in self.wavelength_nm)
            if len(grid) < 1 or len(te) != len(grid) or len(tm) != len(grid):
                raise ValueError('Offset table columns must match the '
                                 'wavelength column')
            if np.any(np.diff(grid) <= 0):
                raise ValueError('Offset table wavelengths must increase')
            object.__setattr__(self, 'wavelength_nm', grid)
        elif max(len(te), len(tm)) > MAX_POLY_DEGREE + 1:
            raise ValueError(f'Offset polynomial degree is limited to '
                             f'{MAX_POLY_DEGREE}')

    @classmethod
    def zero(cls) -> 'WaveguideOffset':
        return cls(POLYNOMIAL, (0.0,), (0.0,), source='zero')

    @classmethod
    def constant(cls, te: float = 0.0, tm: float = 0.0) -> 'WaveguideOffset':
        return cls(POLYNOMIAL, (te,), (tm,), source='constant')


def check_polarization(pol: str) -> str:
    if pol not in POLARIZATIONS:
        raise ValueError(f'Polarization must be one of {POLARIZATIONS}, '
                         f'got {pol!r}')
    return pol


def evaluate(offset: WaveguideOffset, pol: str, wavelength_nm):
    values = offset.te if check_polarization(pol) == TE else offset.tm
    wavelength_nm = np.asarray(wavelength_nm, dtype=float)
    if offset.kind == TABLE:
        result = np.interp(wavelength_nm, offset.wavelength_nm, values)
    else:
        result = P.polyval(wavelength_nm, values)
    return float(result) if np.ndim(result) == 0 else result
