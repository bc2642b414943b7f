import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from common.errors import ExtrapolationWarning
from dispersion import correction as cor

COEFFS = (2e-4, -1e-4, 5e-5, 3e-5, -2e-5, 1e-5)


def test_zero_polynomial():
    poly = cor.CorrectionPolynomial.zero()
    assert poly.is_zero
    assert np.all(cor.eval_correction(poly, np.linspace(4, 300, 7)) == 0)


def test_constant_term():
    poly = cor.CorrectionPolynomial((3e-4, 0, 0, 0, 0, 0))
    assert cor.eval_correction(poly, 6.4) == pytest.approx(3e-4)
    assert cor.eval_correction(poly, 250.0) == pytest.approx(3e-4)


def test_short_coefficients_are_padded():
    poly = cor.CorrectionPolynomial((1e-4,))
    assert len(poly.coefficients) == cor.N_COEFFS


def test_matches_horner_at_chebyshev_nodes():
    poly = cor.CorrectionPolynomial(COEFFS, (4.0, 300.0))
    nodes = np.cos((2 * np.arange(1, 6) - 1) * np.pi / 10)
    temps = (nodes * 296.0 + 304.0) / 2.0
    for temp in temps:
        t = (2 * temp - 304.0) / 296.0
        horner = 0.0
        for c in reversed(COEFFS):
            horner = horner * t + c
        assert cor.eval_correction(poly, temp) == \
            pytest.approx(horner, rel=1e-15, abs=1e-19)


def test_six_point_interpolation_round_trip():
    rng = np.random.default_rng(5)
    coeffs = rng.uniform(-1e-3, 1e-3, cor.N_COEFFS) / 6
    poly = cor.CorrectionPolynomial(tuple(coeffs))
    temps = np.linspace(10.0, 290.0, 6)
    values = cor.eval_correction(poly, temps)
    refit = P.polyfit(poly.scaled_temperature(temps), values, cor.DEGREE)
    assert np.allclose(refit, coeffs, atol=1e-15)


def test_scaled_temperature_endpoints():
    poly = cor.CorrectionPolynomial.zero((4.0, 300.0))
    assert poly.scaled_temperature(4.0) == pytest.approx(-1.0)
    assert poly.scaled_temperature(300.0) == pytest.approx(1.0)


def test_extrapolation_warns_but_evaluates():
    poly = cor.CorrectionPolynomial((1e-4,), (10.0, 300.0))
    assert not poly.in_range(4.0)
    with pytest.warns(ExtrapolationWarning):
        value = cor.eval_correction(poly, 4.0)
    assert value == pytest.approx(1e-4)


def test_sanity_bound():
    with pytest.raises(ValueError, match='diverged'):
        cor.CorrectionPolynomial((0.02,))


def test_too_many_coefficients():
    with pytest.raises(ValueError, match='at most'):
        cor.CorrectionPolynomial((0.0,) * 7)


def test_bad_range():
    with pytest.raises(ValueError, match='range'):
        cor.CorrectionPolynomial((0.0,), (300.0, 4.0))
