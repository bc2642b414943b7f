import logging

import numpy as np
import pytest
from scipy.integrate import trapezoid

from common.errors import (ConfigurationError, DataFormatError,
                           PreconditionError)
from common.units import angular_frequency
from jsa.joint import JointSpectrum, SpectralGrid
from metrics import hom

CENTER = 1559.0
DELAYS = np.linspace(-10.0, 10.0, 81)


def gaussian_jsa(n=128, a=1.0, b=0.8, shift=0.0, span=10.0,
                 signal_center=CENTER, idler_center=CENTER):
    grid = SpectralGrid.around(signal_center, idler_center, span, span, n, n)
    x, y = grid.mesh()
    x = x - signal_center - shift
    y = y - idler_center + shift
    amplitude = np.exp(-(a * x ** 2 + a * y ** 2 - 2 * b * x * y) / 2)
    return JointSpectrum(grid, amplitude).normalize()


def planted_scan(visibility, width=0.7, baseline=1000.0,
                 integration_time=1.0, rng=None):
    shape = 1.0 - visibility * np.exp(-DELAYS ** 2 / (2 * width ** 2))
    rates = {pair: baseline / 4 * shape for pair in hom.CROSS_PAIRS}
    if rng is not None:
        rates = {pair: rng.poisson(r * integration_time) / integration_time
                 for pair, r in rates.items()}
    return hom.HomScan(DELAYS, rates, integration_time=integration_time)


def test_symmetric_jsa_full_visibility():
    dip = hom.hom_dip(gaussian_jsa(), DELAYS)
    assert dip.visibility == pytest.approx(1.0, abs=1e-6)
    assert dip.raw.y[40] == pytest.approx(0.0, abs=1e-6)
    assert dip.normalized.y[0] == pytest.approx(1.0, abs=1e-6)
    assert np.all(dip.normalized.y >= -1e-9)
    assert np.all(dip.normalized.y <= 1.0 + 1e-9)


def test_disjoint_exchange_no_dip():
    js = gaussian_jsa(n=64, b=0.0, span=2.0, signal_center=1550.0,
                      idler_center=1568.0)
    dip = hom.hom_dip(js, DELAYS)
    assert dip.visibility == pytest.approx(0.0, abs=1e-6)
    assert np.allclose(dip.raw.y, 0.5, atol=1e-6)


def test_exchange_relabels_paths():
    js = gaussian_jsa(n=96, shift=0.4)
    forward = hom.hom_dip(js, DELAYS)
    backward = hom.hom_dip(js.transposed(), DELAYS)
    assert np.allclose(forward.raw.y, backward.raw.y, atol=1e-12)


def test_visibility_matches_dip():
    js = gaussian_jsa(n=96, shift=0.4)
    dip = hom.hom_dip(js, [0.0, 200.0])
    assert 0 < dip.visibility < 1
    assert dip.visibility == pytest.approx(1.0 - dip.raw.y[0] / 0.5,
                                           abs=1e-6)
    assert hom.model_visibility(js) == pytest.approx(dip.visibility)


def test_real_jsa_visibility_is_exchange_overlap():
    rng = np.random.default_rng(5)
    grid = SpectralGrid.around(CENTER, CENTER, 2.0, 2.0, 24, 24)
    for _ in range(5):
        js = JointSpectrum(grid, rng.random(grid.shape)).normalize()
        a = js.amplitude.real
        expected = np.trace(a @ a) / np.sum(a * a)
        assert hom.model_visibility(js) == pytest.approx(expected, abs=1e-6)


def test_dip_against_direct_integral():
    a, b, shift = 1.0, 0.5, 0.3
    js = gaussian_jsa(n=128, a=a, b=b, shift=shift, span=8.0)
    delays = np.array([0.0, 0.5, 1.0, 2.0])
    dip = hom.hom_dip(js, delays)

    def amplitude(s, i):
        x, y = s - CENTER - shift, i - CENTER + shift
        return np.exp(-(a * x ** 2 + a * y ** 2 - 2 * b * x * y) / 2)

    axis = np.linspace(CENTER - 8.0, CENTER + 8.0, 400)
    s, i = np.meshgrid(axis, axis, indexing='ij')
    f = amplitude(s, i)
    g = amplitude(i, s)
    norm = trapezoid(trapezoid(f * f, axis), axis)
    for tau, value in zip(delays, dip.raw.y):
        phase = np.exp(1j * (angular_frequency(s) - angular_frequency(i))
                       * tau)
        overlap = trapezoid(trapezoid(f * g * phase, axis), axis)
        assert value == pytest.approx(0.5 * (1 - overlap.real / norm),
                                      abs=1e-3)


def test_unequal_axes_interpolated():
    grid = SpectralGrid.around(CENTER, CENTER, 8.0, 6.0, 161, 121)
    x, y = grid.mesh()
    amplitude = np.exp(-((x - CENTER) ** 2 + (y - CENTER) ** 2) / 2)
    js = JointSpectrum(grid, amplitude).normalize()
    assert hom.model_visibility(js) == pytest.approx(1.0, abs=1e-3)


def test_same_port_bunching():
    dip = hom.hom_dip(gaussian_jsa(n=64), DELAYS, same_port=True)
    assert dip.bunching.y[40] == pytest.approx(2.0, abs=1e-6)
    assert np.allclose(dip.bunching.y + dip.normalized.y, 2.0)


def test_needs_normalized():
    js = gaussian_jsa(n=32)
    with pytest.raises(PreconditionError, match='normalized'):
        hom.hom_dip(JointSpectrum(js.grid, 3 * js.amplitude), DELAYS)


def test_scan_validation():
    rates = {pair: np.ones(3) for pair in hom.CROSS_PAIRS}
    with pytest.raises(ValueError, match='strictly increasing'):
        hom.HomScan([0.0, 2.0, 1.0], rates)
    with pytest.raises(ValueError, match='missing cross-path'):
        hom.HomScan([0.0, 1.0, 2.0], {hom.C13: np.ones(3)})
    bad = dict(rates, c13=np.array([1.0, -1.0, 1.0]))
    with pytest.raises(ValueError, match='non-negative'):
        hom.HomScan([0.0, 1.0, 2.0], bad)


def test_full_visibility_scan():
    value, error = hom.hom_visibility_from_scan(planted_scan(1.0),
                                                (6.0, 10.0))
    assert value == pytest.approx(1.0, abs=1e-9)
    assert error == pytest.approx(0.0, abs=1e-6)


def test_half_visibility_scan():
    value, _ = hom.hom_visibility_from_scan(planted_scan(0.5), (6.0, 10.0))
    assert value == pytest.approx(0.5, abs=1e-9)


def test_off_grid_minimum_located_by_parabola():
    shape = 1.0 - 0.8 * np.exp(-(DELAYS - 0.1) ** 2 / 0.98)
    scan = hom.HomScan(DELAYS, {pair: 250.0 * shape
                                for pair in hom.CROSS_PAIRS})
    value, _ = hom.hom_visibility_from_scan(scan, (-10.0, -6.0))
    assert value == pytest.approx(0.8, abs=2e-3)


def test_baseline_window_too_close():
    with pytest.raises(ConfigurationError, match='dip widths'):
        hom.hom_visibility_from_scan(planted_scan(0.7), (1.0, 10.0))


def test_baseline_window_too_small():
    with pytest.raises(PreconditionError, match='at least 3'):
        hom.hom_visibility_from_scan(planted_scan(0.7), (9.6, 10.0))


def test_planted_visibility_round_trip():
    rng = np.random.default_rng(663)
    values = [hom.hom_visibility_from_scan(
        planted_scan(0.663, integration_time=10.0, rng=rng),
        (6.0, 10.0)).value for _ in range(100)]
    assert np.mean(values) == pytest.approx(0.663, abs=0.01)
    assert np.std(values) < 0.02


def test_simulated_scan_round_trip():
    js = gaussian_jsa(n=96, a=0.1, b=0.0, shift=0.4)
    dip = hom.hom_dip(js, DELAYS, same_port=True)
    scan = hom.simulate_scan(dip, 4000.0, 100.0,
                             np.random.default_rng(3))
    value, error = hom.hom_visibility_from_scan(scan, (6.0, 10.0))
    assert value == pytest.approx(dip.visibility, abs=5 * error + 0.01)
    assert np.all(scan.same_port() >= 0)


def test_scan_file_round_trip(tmp_path):
    scan = planted_scan(0.6)
    path = str(tmp_path / 'scan.csv')
    hom.write_hom_scan(path, scan)
    loaded = hom.load_hom_scan(path)
    assert np.allclose(loaded.cross_path(), scan.cross_path())
    assert loaded.singles is None


def test_scan_file_bad_row(tmp_path):
    path = tmp_path / 'scan.csv'
    path.write_text('delay_ps,c13,c14,c23,c24\n'
                    '0,1,1,1,1\n'
                    '1,1,x,1,1\n')
    with pytest.raises(DataFormatError, match=':3: column c14'):
        hom.load_hom_scan(str(path))


def test_parabola_fallback_warns(caplog):
    rates = {pair: np.linspace(1.0, 10.0, DELAYS.size)
             for pair in hom.CROSS_PAIRS}
    scan = hom.HomScan(DELAYS, rates)
    with caplog.at_level(logging.WARNING):
        tau, value = hom._parabolic_minimum(scan.delays, scan.cross_path())
    assert tau == DELAYS[0]
    assert 'lowest sample' in caplog.text
