"""
Waveguide geometry and the longitudinal index profile along it.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from dispersion.thermal import ThermalExpansionTable, thermal_scale

UNIFORM = 'uniform'
PIECEWISE_CONSTANT = 'piecewise_constant'
POLYNOMIAL = 'polynomial'
PROFILE_KINDS = (UNIFORM, PIECEWISE_CONSTANT, POLYNOMIAL)

# |delta n| anywhere along the guide
PROFILE_BOUND = 1e-2
PROFILE_SAMPLES = 201

POLING_PERIOD = 'poling_period_um'
LENGTH = 'length_mm'
EFFECTIVE_LENGTH = 'effective_length_mm'

SAMPLE_WAVEGUIDE = {
    POLING_PERIOD: 8.81,
    LENGTH: 24.3,
}


@dataclass(frozen=True)
class IndexProfile:
    """
    Local index perturbation along the guide, as a function of u = z/L.

    piecewise_constant: parameters are (start fraction, delta n) pairs; the
        first start must be 0 and starts must increase.
    polynomial: parameters are coefficients in u, lowest order first.
    """
    kind: str = UNIFORM
    parameters: tuple = ()

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f'Unknown profile kind {self.kind!r}; expected '
                             f'one of {PROFILE_KINDS}')
        if self.kind == UNIFORM:
            if len(self.parameters):
                raise ValueError('A uniform profile takes no parameters')
        elif self.kind == PIECEWISE_CONSTANT:
            pairs = tuple((float(u), float(dn)) for u, dn in self.parameters)
            if not pairs:
                raise ValueError('A piecewise profile needs segments')
            starts = np.array([u for u, _ in pairs])
            if starts[0] != 0.0 or np.any(np.diff(starts) <= 0) \
                    or starts[-1] >= 1.0:
                raise ValueError('Segment starts must begin at 0 and increase '
                                 'inside [0, 1)')
            object.__setattr__(self, 'parameters', pairs)
        else:
            coeffs = tuple(float(c) for c in self.parameters)
            if not coeffs:
                raise ValueError('A polynomial profile needs coefficients')
            object.__setattr__(self, 'parameters', coeffs)
        peak = np.max(np.abs(self.local_index(
            np.linspace(0.0, 1.0, PROFILE_SAMPLES))))
        if peak >= PROFILE_BOUND:
            raise ValueError(f'Profile reaches |delta n| = {peak:.3g}, '
                             f'limit is {PROFILE_BOUND}')

    @classmethod
    def uniform(cls) -> 'IndexProfile':
        return cls()

    @classmethod
    def segments(cls, values) -> 'IndexProfile':
        """Equal-length segments with the given delta n values."""
        values = [float(v) for v in values]
        starts = np.arange(len(values)) / len(values)
        return cls(PIECEWISE_CONSTANT, tuple(zip(starts, values)))

    @property
    def is_uniform(self) -> bool:
        return self.kind == UNIFORM

    def edges(self) -> tuple:
        """Fractions where the profile may jump, including 0 and 1."""
        if self.kind == PIECEWISE_CONSTANT:
            return tuple(u for u, _ in self.parameters) + (1.0,)
        return (0.0, 1.0)

    def local_index(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == UNIFORM:
            return np.zeros_like(u)
        if self.kind == POLYNOMIAL:
            return P.polyval(u, self.parameters)
        starts = np.array([s for s, _ in self.parameters])
        values = np.array([dn for _, dn in self.parameters])
        idx = np.clip(np.searchsorted(starts, u, side='right') - 1, 0,
                      len(starts) - 1)
        return values[idx]

    def mean(self) -> float:
        """Length-averaged delta n."""
        if self.kind == UNIFORM:
            return 0.0
        if self.kind == POLYNOMIAL:
            integral = P.polyint(self.parameters)
            return float(P.polyval(1.0, integral) - P.polyval(0.0, integral))
        widths = np.diff(self.edges())
        return float(np.dot(widths, [dn for _, dn in self.parameters]))

    def mirrored(self) -> 'IndexProfile':
        """The same profile seen from the other end of the guide."""
        if self.kind == UNIFORM:
            return self
        if self.kind == POLYNOMIAL:
            # p(1 - u)
            coeffs = np.zeros(len(self.parameters))
            for power, c in enumerate(self.parameters):
                term = P.polypow([1.0, -1.0], power) * c
                coeffs[:term.size] += term
            return IndexProfile(POLYNOMIAL, tuple(coeffs))
        edges = self.edges()
        values = [dn for _, dn in self.parameters]
        starts = [1.0 - e for e in reversed(edges[1:])]
        return IndexProfile(PIECEWISE_CONSTANT,
                            tuple(zip(starts, reversed(values))))

    def shifted(self, offset: float) -> 'IndexProfile':
        """Profile with a constant added everywhere."""
        if self.kind == UNIFORM:
            return IndexProfile.segments([offset]) if offset else self
        if self.kind == POLYNOMIAL:
            coeffs = list(self.parameters)
            coeffs[0] += offset
            return IndexProfile(POLYNOMIAL, tuple(coeffs))
        return IndexProfile(PIECEWISE_CONSTANT, tuple(
            (u, dn + offset) for u, dn in self.parameters))

    def canonical(self) -> 'IndexProfile':
        """
        Representative of the profiles giving the same |amplitude|: zero
        mean, and of a profile and its mirror image the one whose first
        value is not below its last.
        """
        if self.kind == UNIFORM:
            return self
        centred = self.shifted(-self.mean())
        first, last = centred.local_index([0.0, 1.0])
        if first < last:
            return centred.mirrored()
        return centred


@dataclass(frozen=True)
class WaveguideSpec:
    """
    A poled waveguide. Period (um) and length (mm) are given at 295 K.
    """
    poling_period: float
    length: float
    profile: IndexProfile = field(default_factory=IndexProfile)
    # length over which phase matching actually builds up, if known
    effective_length: float = None

    def __post_init__(self):
        if not self.poling_period > 0:
            raise ValueError(f'poling_period must be positive, got '
                             f'{self.poling_period}')
        if not self.length > 0:
            raise ValueError(f'length must be positive, got {self.length}')
        if self.effective_length is not None and \
                not 0 < self.effective_length <= self.length:
            raise ValueError(f'effective_length {self.effective_length} must '
                             f'lie in (0, {self.length}]')

    @property
    def interaction_length(self) -> float:
        """Length entering the phase-matching function, mm at 295 K."""
        return self.effective_length or self.length

    def period_at(self, thermal: ThermalExpansionTable, temperature):
        """Poling period in um at temperature T."""
        return thermal_scale(thermal, temperature) * self.poling_period

    def length_at(self, thermal: ThermalExpansionTable, temperature):
        """Interaction length in mm at temperature T."""
        return thermal_scale(thermal, temperature) * self.interaction_length
