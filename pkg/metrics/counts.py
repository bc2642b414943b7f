"""
Source figures of merit from pre-binned count rates.

Rates are in counts per second; uncertainties are Poisson on the raw counts,
rate * integration_time.
"""
import logging
import math
from dataclasses import dataclass, fields

import data.files as fls
from common.curves import Measurement
from common.errors import DataFormatError, PreconditionError

logger = logging.getLogger(__name__)

COUNTS_SECTION = 'counts'

C_S = 'c_s'
C_I = 'c_i'
C_SI = 'c_si'
C_I1S = 'c_i1s'
C_I2S = 'c_i2s'
C_I1I2S = 'c_i1i2s'
P_TRANS = 'p_trans'
INTEGRATION_TIME = 'integration_time'

SAMPLE_COUNTS = {
    C_S: 1.0e4,
    C_I: 1.0e4,
    C_SI: 1362.0,
    P_TRANS: 0.05,
    INTEGRATION_TIME: 60.0,
}


@dataclass(frozen=True)
class CountSummary:
    """
    Singles c_s, c_i and coincidences c_si (1/s). The herald-conditioned
    rates c_i1s, c_i2s, c_i1i2s are only needed for g2, the transmitted pump
    power p_trans (mW) only for brightness.
    """
    c_s: float
    c_i: float
    c_si: float
    c_i1s: float = None
    c_i2s: float = None
    c_i1i2s: float = None
    p_trans: float = None
    integration_time: float = 1.0

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if not math.isfinite(value) or value < 0:
                raise ValueError(f'{field.name} must be a non-negative '
                                 f'number, got {value}')
        if not self.integration_time > 0:
            raise ValueError(f'integration_time must be positive, got '
                             f'{self.integration_time}')
        if not self.consistent:
            logger.warning('coincidences %g/s exceed the singles (%g, %g)',
                           self.c_si, self.c_s, self.c_i)

    @property
    def consistent(self) -> bool:
        """c_si <= min(c_s, c_i)."""
        return self.c_si <= min(self.c_s, self.c_i)

    def counts(self, rate: float) -> float:
        return rate * self.integration_time

    @classmethod
    def from_dict(cls, flds: dict) -> 'CountSummary':
        """
        Build from a mapping of field names to numbers (or numeric strings).

        Raises:
            ValueError: unknown field, missing required field or bad value
        """
        known = {field.name for field in fields(cls)}
        unknown = set(flds) - known
        if unknown:
            raise ValueError(f'Unknown count fields: {sorted(unknown)}')
        for name in (C_S, C_I, C_SI):
            if name not in flds:
                raise ValueError(f'Missing count field {name}')
        values = {}
        for name, value in flds.items():
            if value is None or str(value).strip() == '':
                continue
            try:
                values[name] = float(value)
            except (TypeError, ValueError):
                raise ValueError(f'{name}: cannot read {value!r} as a '
                                 f'number')
        return cls(**values)


def load_count_summary(path: str) -> CountSummary:
    """Count summary from the [counts] section of a key-value file."""
    report = fls.read_report(path)
    if COUNTS_SECTION not in report:
        raise DataFormatError(f'missing section [{COUNTS_SECTION}]', path)
    try:
        return CountSummary.from_dict(report[COUNTS_SECTION])
    except ValueError as err:
        raise DataFormatError(str(err), path) from err


def klyshko(counts: CountSummary) -> Measurement:
    """
    Combined heralding efficiency sqrt(c_si^2 / (c_s c_i)).

    Raises:
        PreconditionError: a singles rate is zero
    """
    if counts.c_s == 0 or counts.c_i == 0:
        raise PreconditionError('Klyshko efficiency needs non-zero singles')
    n_s = counts.counts(counts.c_s)
    n_i = counts.counts(counts.c_i)
    n_si = counts.counts(counts.c_si)
    eta = n_si / math.sqrt(n_s * n_i)
    variance = n_si / (n_s * n_i) + eta ** 2 / (4 * n_s) \
        + eta ** 2 / (4 * n_i)
    return Measurement(eta, math.sqrt(variance))


def brightness(counts: CountSummary) -> Measurement:
    """
    Pairs per second per mW of transmitted pump, c_si / p_trans.

    Raises:
        PreconditionError: p_trans missing or zero
    """
    if not counts.p_trans:
        raise PreconditionError('Brightness needs the transmitted pump power '
                                f'{P_TRANS} (mW)')
    value = counts.c_si / counts.p_trans
    error = math.sqrt(counts.counts(counts.c_si)) / counts.integration_time \
        / counts.p_trans
    return Measurement(value, error)


def g2_heralded(counts: CountSummary) -> Measurement:
    """
    Heralded autocorrelation c_i1i2s c_s / (c_i1s c_i2s).

    Raises:
        PreconditionError: herald-conditioned rates missing, or a
            denominator rate is zero
    """
    for name in (C_I1S, C_I2S, C_I1I2S):
        if getattr(counts, name) is None:
            raise PreconditionError(f'g2 needs the count rate {name}')
    if counts.c_i1s == 0 or counts.c_i2s == 0:
        raise PreconditionError('g2 needs non-zero heralded coincidences '
                                f'{C_I1S} and {C_I2S}')
    n_s = counts.counts(counts.c_s)
    n_1 = counts.counts(counts.c_i1s)
    n_2 = counts.counts(counts.c_i2s)
    n_12 = counts.counts(counts.c_i1i2s)
    g2 = n_12 * n_s / (n_1 * n_2)
    variance = n_12 * (n_s / (n_1 * n_2)) ** 2 + g2 ** 2 / n_1 \
        + g2 ** 2 / n_2
    if n_s:
        variance += g2 ** 2 / n_s
    return Measurement(g2, math.sqrt(variance))


def summarize(counts: CountSummary) -> dict:
    """Every figure of merit the summary supports, keyed by name."""
    result = {'klyshko': klyshko(counts)}
    if counts.p_trans:
        result['brightness'] = brightness(counts)
    if None not in (counts.c_i1s, counts.c_i2s, counts.c_i1i2s):
        result['g2_heralded'] = g2_heralded(counts)
    return result
