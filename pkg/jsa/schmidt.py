"""
Schmidt decomposition of a joint spectrum.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from jsa.joint import JointSpectrum, check_normalized

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchmidtResult:
    """
    coefficients: descending, squares sum to 1
    schmidt_number: K = 1 / sum(c^4) >= 1
    purity: 1 / K
    """
    coefficients: np.ndarray
    schmidt_number: float
    purity: float

    @classmethod
    def from_singular_values(cls, singular_values) -> 'SchmidtResult':
        values = np.sort(np.abs(np.asarray(singular_values, float)))[::-1]
        total = float(np.sum(values ** 2))
        if not total > 0:
            raise ValueError('Singular values must not all vanish')
        coefficients = values / np.sqrt(total)
        purity = float(np.sum(coefficients ** 4))
        return cls(coefficients, 1.0 / purity, purity)

    @property
    def weights(self) -> np.ndarray:
        """Mode occupation probabilities."""
        return self.coefficients ** 2


def schmidt(js: JointSpectrum) -> SchmidtResult:
    """
    Raises:
        PreconditionError: js is not normalized
        ValueError: the decomposition failed
    """
    check_normalized(js)
    try:
        values = linalg.svd(js.amplitude * np.sqrt(js.grid.cell),
                            compute_uv=False)
    except linalg.LinAlgError as err:
        raise ValueError(f'Schmidt decomposition failed: {err}') from err
    result = SchmidtResult.from_singular_values(values)
    logger.info('Schmidt number %.4f, purity %.4f', result.schmidt_number,
                result.purity)
    return result
