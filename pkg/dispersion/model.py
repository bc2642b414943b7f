"""
The dispersion model: bulk Sellmeier sets for both polarizations, the
waveguide offset, the empirical correction and the thermal expansion table,
plus the validity domain they are evaluated on.
"""
import dataclasses
import functools
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

import data.files as fls
from common.errors import DataFormatError, DomainError
from dispersion import correction as corr
from dispersion import offset as ofs
from dispersion import sellmeier as sm
from dispersion import thermal as th
from dispersion.correction import CorrectionPolynomial, eval_correction
from dispersion.offset import TE, TM, WaveguideOffset, check_polarization
from dispersion.sellmeier import SellmeierCoefficients
from dispersion.thermal import ThermalExpansionTable

logger = logging.getLogger(__name__)

SELLMEIER_TE = 'sellmeier_te'
SELLMEIER_TM = 'sellmeier_tm'
WAVEGUIDE_OFFSET = 'waveguide_offset'
THERMAL_EXPANSION = 'thermal_expansion'
CORRECTION = 'correction'

WAVELENGTH_RANGE = 'wavelength_range_nm'
TEMPERATURE_RANGE = 'temperature_range_K'
KIND = 'kind'
WEIGHT_TE = 'weight_te'
WEIGHT_TM = 'weight_tm'
WEIGHT_COMBINED = 'weight_combined'

DEFAULT_WAVELENGTH_RANGE = (400.0, 3400.0)
DEFAULT_TEMPERATURE_RANGE = (0.0, 550.0)

# central-difference step for group indices
GROUP_STEP_NM = 0.05


class CorrectionWeights(NamedTuple):
    """
    How the correction enters: per-polarization weights act on effective
    indices, the combined weight on the SHG/SPDC index difference.
    """
    te: float = 0.0
    tm: float = 0.0
    combined: float = 1.0


@dataclass(frozen=True)
class DispersionModel:
    sellmeier_te: SellmeierCoefficients
    sellmeier_tm: SellmeierCoefficients
    waveguide_offset: WaveguideOffset = field(
        default_factory=WaveguideOffset.zero)
    correction: CorrectionPolynomial = field(
        default_factory=CorrectionPolynomial.zero)
    thermal: ThermalExpansionTable = field(
        default_factory=ThermalExpansionTable.flat)
    valid_wavelength: tuple = DEFAULT_WAVELENGTH_RANGE
    valid_temperature: tuple = DEFAULT_TEMPERATURE_RANGE
    weights: CorrectionWeights = CorrectionWeights()
    source: str = ''

    def __post_init__(self):
        for name in ('valid_wavelength', 'valid_temperature'):
            low, high = (float(v) for v in getattr(self, name))
            if not low < high:
                raise ValueError(f'{name} must be an increasing interval')
            object.__setattr__(self, name, (low, high))
        if self.valid_temperature[0] < 0.0:
            raise ValueError('valid_temperature cannot start below 0 K')
        object.__setattr__(self, 'weights', CorrectionWeights(*self.weights))

    @classmethod
    def constant(cls, n_te: float, n_tm: float, **kwargs) \
            -> 'DispersionModel':
        """Dispersionless model, mostly for tests and hand checks."""
        return cls(SellmeierCoefficients.constant(n_te),
                   SellmeierCoefficients.constant(n_tm),
                   source='constant', **kwargs)

    def with_correction(self, correction: CorrectionPolynomial) \
            -> 'DispersionModel':
        return dataclasses.replace(self, correction=correction)

    def with_thermal(self, thermal: ThermalExpansionTable) \
            -> 'DispersionModel':
        return dataclasses.replace(self, thermal=thermal)

    def sellmeier(self, pol: str) -> SellmeierCoefficients:
        return self.sellmeier_te if check_polarization(pol) == TE \
            else self.sellmeier_tm

    def check_domain(self, wavelength_nm, temperature):
        """
        Raises:
            DomainError: naming the violated bound
        """
        wavelength_nm = np.asarray(wavelength_nm, dtype=float)
        temperature = np.asarray(temperature, dtype=float)
        wl_low, wl_high = self.valid_wavelength
        t_low, t_high = self.valid_temperature
        if np.any(wavelength_nm < wl_low):
            raise DomainError(f'Wavelength {np.min(wavelength_nm):g} nm is '
                              f'below the valid minimum {wl_low:g} nm')
        if np.any(wavelength_nm > wl_high):
            raise DomainError(f'Wavelength {np.max(wavelength_nm):g} nm is '
                              f'above the valid maximum {wl_high:g} nm')
        if np.any(temperature < t_low):
            raise DomainError(f'Temperature {np.min(temperature):g} K is '
                              f'below the valid minimum {t_low:g} K')
        if np.any(temperature > t_high):
            raise DomainError(f'Temperature {np.max(temperature):g} K is '
                              f'above the valid maximum {t_high:g} K')

    def is_extrapolated(self, temperature) -> bool:
        """True where the Sellmeier sets or the correction extrapolate."""
        return (self.sellmeier_te.extrapolates(temperature)
                or self.sellmeier_tm.extrapolates(temperature)
                or not self.correction.in_range(temperature))


def bulk_index(model: DispersionModel, pol: str, wavelength_nm, temperature):
    """Bulk refractive index for polarization pol at wavelength (nm), T (K)."""
    model.check_domain(wavelength_nm, temperature)
    return sm.evaluate(model.sellmeier(pol), wavelength_nm, temperature)


def effective_index(model: DispersionModel, pol: str, wavelength_nm,
                    temperature, include_correction: bool = True):
    """
    Waveguide effective index: bulk index plus waveguide offset, plus the
    correction times the polarization's weight when requested.
    """
    index = bulk_index(model, pol, wavelength_nm, temperature) \
        + ofs.evaluate(model.waveguide_offset, pol, wavelength_nm)
    weight = {TE: model.weights.te, TM: model.weights.tm}[pol]
    if include_correction and weight != 0.0:
        index = index + weight * eval_correction(model.correction,
                                                 temperature)
    return index


def group_index(model: DispersionModel, pol: str, wavelength_nm,
                temperature, include_correction: bool = True):
    """n_g = n - lambda dn/dlambda, by central difference."""
    wavelength_nm = np.asarray(wavelength_nm, dtype=float)
    low, high = model.valid_wavelength
    step = GROUP_STEP_NM
    upper = np.minimum(wavelength_nm + step, high)
    lower = np.maximum(wavelength_nm - step, low)
    n_hi = effective_index(model, pol, upper, temperature, include_correction)
    n_lo = effective_index(model, pol, lower, temperature, include_correction)
    n_mid = effective_index(model, pol, wavelength_nm, temperature,
                            include_correction)
    return n_mid - wavelength_nm * (n_hi - n_lo) / (upper - lower)


def _sellmeier_from(fields: dict, path) -> SellmeierCoefficients:
    where = fields.get('__name__', 'sellmeier')
    try:
        return SellmeierCoefficients(
            a=fls.parse_floats(fields[sm.A], path, where),
            b=fls.parse_floats(fields[sm.B], path, where),
            reference_temperature=float(fields[sm.REFERENCE_TEMPERATURE]),
            temperature_offset=float(fields[sm.TEMPERATURE_OFFSET]),
            reference_range=tuple(fls.parse_floats(
                fields[sm.REFERENCE_RANGE], path, where))
            if sm.REFERENCE_RANGE in fields else None,
            source=fields[fls.PROVENANCE])
    except KeyError as err:
        raise DataFormatError(f'Sellmeier section lacks {err}', path) from err


def _range_from(sections: list, key: str, default: tuple, path) -> tuple:
    """Intersection of the ranges the sections declare."""
    low, high = default
    for fields in sections:
        if key in fields:
            bounds = fls.parse_floats(fields[key], path, key)
            low, high = max(low, bounds[0]), min(high, bounds[-1])
    return low, high


def model_from_parser(parser, path=None) -> DispersionModel:
    """Build a model from a parsed dataset file."""
    te = fls.read_dataset_section(parser, SELLMEIER_TE, path)
    tm = fls.read_dataset_section(parser, SELLMEIER_TM, path)
    te['__name__'], tm['__name__'] = SELLMEIER_TE, SELLMEIER_TM
    off = fls.read_dataset_section(parser, WAVEGUIDE_OFFSET, path)
    therm = fls.read_dataset_section(parser, THERMAL_EXPANSION, path)
    cor = fls.read_dataset_section(parser, CORRECTION, path)
    try:
        kind = off.get(KIND, ofs.TABLE)
        waveguide_offset = WaveguideOffset(
            kind,
            fls.parse_floats(off['te'], path, WAVEGUIDE_OFFSET),
            fls.parse_floats(off['tm'], path, WAVEGUIDE_OFFSET),
            fls.parse_floats(off[ofs.WAVELENGTHS], path, WAVEGUIDE_OFFSET)
            if kind == ofs.TABLE else (),
            source=off[fls.PROVENANCE])
        thermal = ThermalExpansionTable(
            fls.parse_floats(therm[th.TEMPERATURES], path, THERMAL_EXPANSION),
            fls.parse_floats(therm[th.STRAINS], path, THERMAL_EXPANSION),
            float(therm.get(th.CLAMP, th.DEFAULT_CLAMP)),
            float(therm.get(th.REFERENCE, th.REFERENCE_TEMPERATURE)),
            source=therm[fls.PROVENANCE])
        correction = CorrectionPolynomial(
            tuple(fls.parse_floats(cor[corr.COEFFICIENTS], path, CORRECTION)),
            tuple(fls.parse_floats(cor.get(corr.TEMPERATURE_RANGE,
                                           '4, 300'), path, CORRECTION)))
        weights = CorrectionWeights(
            float(cor.get(WEIGHT_TE, 0.0)), float(cor.get(WEIGHT_TM, 0.0)),
            float(cor.get(WEIGHT_COMBINED, 1.0)))
    except KeyError as err:
        raise DataFormatError(f'dataset entry {err} is missing', path) \
            from err
    except ValueError as err:
        if isinstance(err, DataFormatError):
            raise
        raise DataFormatError(str(err), path) from err
    return DispersionModel(
        _sellmeier_from(te, path), _sellmeier_from(tm, path),
        waveguide_offset, correction, thermal,
        _range_from([te, tm], WAVELENGTH_RANGE, DEFAULT_WAVELENGTH_RANGE,
                    path),
        _range_from([te, tm], TEMPERATURE_RANGE, DEFAULT_TEMPERATURE_RANGE,
                    path),
        weights, source=str(path or ''))


def load_model(path: str = None) -> DispersionModel:
    """
    Load a dataset file. Without a path, $QPM_DATASET or the shipped congruent
    lithium niobate dataset is used.
    """
    path = path or fls.dataset_path()
    model = model_from_parser(fls.read_ini(path, 'Dataset'), path)
    logger.info('loaded dataset %s (%s)', path, model.sellmeier_tm.source)
    return model


@functools.lru_cache(maxsize=None)
def default_model() -> DispersionModel:
    return load_model(fls.DEFAULT_DATASET)


def correction_section(model: DispersionModel, provenance: str) -> dict:
    """The [correction] section that reproduces model's correction."""
    return {
        fls.PROVENANCE: provenance,
        corr.COEFFICIENTS: list(model.correction.coefficients),
        corr.TEMPERATURE_RANGE: list(model.correction.temperature_range),
        WEIGHT_TE: model.weights.te,
        WEIGHT_TM: model.weights.tm,
        WEIGHT_COMBINED: model.weights.combined,
    }
