import numpy as np
import pytest

from common.errors import PreconditionError
from jsa.joint import JointSpectrum, SpectralGrid
from jsa.schmidt import SchmidtResult, schmidt

CENTER = 1559.0


def correlated(n, a=1.0, b=0.8, span=12.0):
    grid = SpectralGrid.around(CENTER, CENTER, span, span, n, n)
    x, y = grid.mesh()
    x = x - CENTER
    y = y - CENTER
    amplitude = np.exp(-(a * x ** 2 + a * y ** 2 - 2 * b * x * y) / 2)
    return JointSpectrum(grid, amplitude).normalize()


def test_separable():
    grid = SpectralGrid.around(CENTER, CENTER, 5.0, 5.0, 64, 48)
    u = np.exp(-(grid.signal_axis - CENTER) ** 2)
    v = np.exp(-(grid.idler_axis - CENTER - 0.5) ** 2 / 3.0)
    result = schmidt(JointSpectrum(grid, np.outer(u, v)).normalize())
    assert result.schmidt_number == pytest.approx(1.0, abs=1e-9)
    assert result.coefficients[0] == pytest.approx(1.0, abs=1e-9)


def test_correlated_gaussian():
    # |A|^2 is a bivariate normal with correlation 0.8: purity sqrt(1 - 0.64)
    result = schmidt(correlated(256))
    assert result.purity == pytest.approx(0.6, rel=1e-3)
    assert result.schmidt_number == pytest.approx(1.0 / 0.6, rel=1e-3)


def test_result_invariants():
    result = schmidt(correlated(128, b=0.5))
    assert result.purity * result.schmidt_number == pytest.approx(1.0)
    assert result.schmidt_number >= 1.0
    assert np.sum(result.weights) == pytest.approx(1.0)
    assert np.all(np.diff(result.coefficients) <= 0)


def test_transpose_and_phase_invariance():
    js = correlated(96, b=0.6)
    reference = schmidt(js).schmidt_number
    rotated = JointSpectrum(js.grid, js.amplitude * np.exp(0.7j), True)
    assert schmidt(js.transposed()).schmidt_number == \
        pytest.approx(reference, rel=1e-9)
    assert schmidt(rotated).schmidt_number == \
        pytest.approx(reference, rel=1e-9)


def test_grid_refinement():
    coarse = schmidt(correlated(128)).schmidt_number
    fine = schmidt(correlated(256)).schmidt_number
    assert abs(fine - coarse) / fine < 0.005


def test_needs_normalized():
    js = correlated(32)
    with pytest.raises(PreconditionError, match='normalized'):
        schmidt(JointSpectrum(js.grid, 2.0 * js.amplitude))


def test_from_singular_values():
    result = SchmidtResult.from_singular_values([1.0, 1.0, 1.0, 1.0])
    assert result.schmidt_number == pytest.approx(4.0)
    assert result.purity == pytest.approx(0.25)
    with pytest.raises(ValueError, match='vanish'):
        SchmidtResult.from_singular_values([0.0, 0.0])


def test_purity_of_reported_schmidt_number():
    # weights (w, w, 1 - 2w) with 2 w^2 + (1 - 2w)^2 = 1 / 2.72
    w = (4.0 - np.sqrt(16.0 - 24.0 * (1.0 - 1.0 / 2.72))) / 12.0
    weights = np.array([w, w, 1.0 - 2.0 * w])
    result = SchmidtResult.from_singular_values(np.sqrt(weights))
    assert result.schmidt_number == pytest.approx(2.72)
    assert result.purity == pytest.approx(0.3676, abs=1e-4)
