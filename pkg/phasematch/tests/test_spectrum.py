import numpy as np
import pytest

from common.curves import SpectrumCurve
from common.errors import DisjointSupportError
from common.units import fwhm_to_sigma
from dispersion.model import DispersionModel
from phasematch import spectrum as sp
from phasematch.mismatch import index_to_mismatch
from phasematch.waveguide import IndexProfile, WaveguideSpec

HALF_POWER = 1.39156
LENGTH_MM = 24.3
LENGTH_UM = 24300.0


@pytest.fixture
def constant_model():
    # combined index difference 0.15
    return DispersionModel.constant(2.2, 2.05)


@pytest.fixture
def matched_guide():
    return WaveguideSpec(1.55 / 0.15, 10.0)


def detuning_at(x):
    delta_k = np.atleast_1d(2.0 * np.asarray(x, dtype=float) / LENGTH_UM)
    return sp.Detuning(delta_k, np.full(delta_k.shape,
                                        index_to_mismatch(1559.0)))


def gaussian(center, sigma, x):
    return SpectrumCurve(x, np.exp(-(x - center) ** 2 / (2 * sigma ** 2)))


def test_half_power_point():
    power = sp.shg_intensity(detuning_at([HALF_POWER, -HALF_POWER]),
                             LENGTH_MM)
    assert np.allclose(power, 0.5, atol=1e-5)


def test_zeros_at_pi():
    power = sp.shg_intensity(detuning_at([np.pi, -np.pi, 2 * np.pi]),
                             LENGTH_MM)
    assert np.allclose(power, 0.0, atol=1e-25)


def test_uniform_symmetric_in_mismatch():
    x = np.linspace(0.0, 15.0, 301)
    plus = sp.shg_intensity(detuning_at(x), LENGTH_MM)
    minus = sp.shg_intensity(detuning_at(-x), LENGTH_MM)
    assert np.max(np.abs(plus - minus)) < 1e-9


def test_profile_routes_to_quadrature():
    profile = IndexProfile.segments([2e-5, -2e-5])
    x = np.linspace(-6.0, 6.0, 49)
    with_profile = sp.shg_intensity(detuning_at(x), LENGTH_MM, profile)
    ideal = sp.shg_intensity(detuning_at(x), LENGTH_MM)
    assert not np.allclose(with_profile, ideal, atol=1e-3)
    assert np.all(with_profile <= 1.0 + 1e-12)


def test_power_spectrum_peak(constant_model, matched_guide):
    curve = sp.shg_power_spectrum(constant_model, matched_guide,
                                  (1540.0, 1560.0), 295.0, n_points=501)
    assert len(curve) == 501
    assert curve.x_name == sp.WAVELENGTH
    assert curve.y_name == sp.POWER
    peak_x, peak_y = curve.peak()
    assert peak_x == pytest.approx(1550.0)
    assert peak_y == pytest.approx(1.0)
    assert curve.meta['temperature_K'] == 295.0
    assert curve.meta['length_mm'] == pytest.approx(10.0)


def test_power_spectrum_needs_points(constant_model, matched_guide):
    with pytest.raises(ValueError, match='n_points'):
        sp.shg_power_spectrum(constant_model, matched_guide, (1540.0, 1560.0),
                              295.0, n_points=1)
    with pytest.raises(ValueError, match='Bad wavelength range'):
        sp.shg_power_spectrum(constant_model, matched_guide, (1560.0, 1540.0),
                              295.0)


def test_linear_detuning():
    detuning = sp.linear_detuning(1559.0, -6.6e-4)
    result = detuning(np.array([1558.0, 1559.0, 1560.0]))
    assert np.allclose(result.delta_k, [6.6e-4, 0.0, -6.6e-4])
    assert sp.detuning_slope(detuning, 1559.0) == pytest.approx(-6.6e-4)


def test_model_detuning_slope(constant_model, matched_guide):
    detuning = sp.model_detuning(constant_model, matched_guide, 295.0)
    # d/dlambda of 2 pi 0.15 / lambda
    expected = -2 * np.pi * 0.15 * 1000.0 / 1550.0 ** 2
    assert sp.detuning_slope(detuning, 1550.0) == pytest.approx(expected,
                                                                rel=1e-6)


def test_overlap_with_itself():
    x = np.linspace(-5.0, 5.0, 201)
    a = gaussian(0.3, 1.0, x)
    assert sp.spectrum_overlap(a, a) == pytest.approx(1.0)
    assert sp.spectrum_overlap(a, a.scaled(7.5)) == pytest.approx(1.0)


def test_overlap_symmetric():
    a = gaussian(0.0, 1.0, np.linspace(-6.0, 6.0, 301))
    b = gaussian(0.8, 1.3, np.linspace(-5.0, 7.0, 233))
    forward = sp.spectrum_overlap(a, b)
    assert forward == pytest.approx(sp.spectrum_overlap(b, a), rel=1e-12)
    assert forward < 1.0


def test_gaussians_one_fwhm_apart():
    fwhm = 2.0
    sigma = fwhm_to_sigma(fwhm)
    x = np.linspace(-20.0, 22.0, 8401)
    a = gaussian(0.0, sigma, x)
    b = gaussian(fwhm, sigma, x)
    # exp(-fwhm^2 / (4 sigma^2)) = exp(-2 ln 2)
    assert sp.spectrum_overlap(a, b) == pytest.approx(0.25, abs=1e-6)


def test_disjoint_supports():
    a = gaussian(0.0, 1.0, np.linspace(-3.0, 3.0, 31))
    b = gaussian(10.0, 1.0, np.linspace(7.0, 13.0, 31))
    with pytest.raises(DisjointSupportError, match='share no support'):
        sp.spectrum_overlap(a, b)


def test_negative_curve():
    x = np.linspace(0.0, 1.0, 11)
    a = SpectrumCurve(x, np.ones(11))
    b = SpectrumCurve(x, np.linspace(-1.0, 1.0, 11))
    with pytest.raises(ValueError, match='non-negative'):
        sp.spectrum_overlap(a, b)


def test_vanishing_curve():
    x = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ValueError, match='vanishes'):
        sp.spectrum_overlap(SpectrumCurve(x, np.ones(11)),
                            SpectrumCurve(x, np.zeros(11)))
