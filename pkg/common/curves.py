"""
One-dimensional sampled curves: wavelength or delay against a value, with an
uncertainty column. Used for every spectrum that enters or leaves the toolkit.
"""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

X_NAME = 'x'
Y_NAME = 'y'
SIGMA_NAME = 'sigma'


class Measurement(NamedTuple):
    """A value with its one-standard-deviation uncertainty."""
    value: float
    uncertainty: float


@dataclass(frozen=True)
class SpectrumCurve:
    x: np.ndarray
    y: np.ndarray
    sigma: np.ndarray = None
    x_name: str = X_NAME
    y_name: str = Y_NAME
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.shape != x.shape:
            raise ValueError(
                'x and y must be 1-D of equal length, '
                f'got {x.shape=} {y.shape=}')
        if x.size < 2:
            raise ValueError(f'A curve needs at least 2 points, got {x.size}')
        if np.any(np.diff(x) <= 0):
            raise ValueError('Curve abscissa must be strictly increasing')
        if self.sigma is None:
            sigma = np.zeros_like(x)
        else:
            sigma = np.asarray(self.sigma, dtype=float)
            if sigma.shape != x.shape:
                raise ValueError(f'Bad sigma shape {sigma.shape}')
        for name, arr in (('x', x), ('y', y), ('sigma', sigma)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.x.size

    @property
    def has_sigma(self) -> bool:
        return bool(np.all(self.sigma > 0))

    def scaled(self, factor: float) -> 'SpectrumCurve':
        return SpectrumCurve(self.x, self.y * factor, self.sigma * abs(factor),
                             self.x_name, self.y_name, dict(self.meta))

    def normalized(self) -> 'SpectrumCurve':
        """Curve divided by its maximum value."""
        peak = np.max(self.y)
        if peak <= 0:
            raise ValueError(
                'Cannot normalize a curve without positive values')
        return self.scaled(1.0 / peak)

    def resample(self, x_new) -> 'SpectrumCurve':
        """Linear interpolation onto new abscissae inside the support."""
        x_new = np.asarray(x_new, dtype=float)
        return SpectrumCurve(
            x_new, np.interp(x_new, self.x, self.y),
            np.interp(x_new, self.x, self.sigma),
            self.x_name, self.y_name, dict(self.meta))

    def peak(self) -> tuple:
        """(x, y) of the largest sample."""
        idx = int(np.argmax(self.y))
        return float(self.x[idx]), float(self.y[idx])

    def fwhm(self) -> float:
        """
        Full width at half maximum of the main peak, from linear interpolation
        of the half-level crossings on either side of the largest sample.
        """
        idx = int(np.argmax(self.y))
        half = self.y[idx] / 2.0
        left = idx
        while left > 0 and self.y[left] > half:
            left -= 1
        right = idx
        while right < self.y.size - 1 and self.y[right] > half:
            right += 1
        if self.y[left] > half or self.y[right] > half:
            raise ValueError(
                'Peak does not fall to half maximum inside the curve')
        x_left = np.interp(half, [self.y[left], self.y[left + 1]],
                           [self.x[left], self.x[left + 1]])
        x_right = np.interp(half, [self.y[right], self.y[right - 1]],
                            [self.x[right], self.x[right - 1]])
        return float(x_right - x_left)
