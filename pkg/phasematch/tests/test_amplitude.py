import numpy as np
import pytest

from common.errors import ResolutionError
from phasematch import amplitude as amp
from phasematch.waveguide import POLYNOMIAL, IndexProfile

LENGTH_MM = 10.0
LENGTH_UM = 1e4
KAPPA = 2 * np.pi / 1.559


def two_segment(delta_k, dn1, dn2):
    """Two phased sincs, phase zero at the centre."""
    k1 = delta_k + KAPPA * dn1
    k2 = delta_k + KAPPA * dn2
    quarter = LENGTH_UM / 4.0
    return 0.5 * (np.exp(-1j * k1 * quarter) * amp.sinc(k1 * quarter)
                  + np.exp(1j * k2 * quarter) * amp.sinc(k2 * quarter))


def test_sinc_convention():
    assert amp.sinc(0.0) == 1.0
    assert amp.sinc(np.pi) == pytest.approx(0.0, abs=1e-15)
    assert amp.sinc(1.0) == pytest.approx(np.sin(1.0))


def test_ideal_amplitude():
    delta_k = 2.0 / LENGTH_UM
    assert amp.ideal_amplitude(delta_k, LENGTH_MM) == \
        pytest.approx(np.sin(1.0))


def test_uniform_is_one_at_zero_mismatch():
    value = amp.nonuniform_amplitude(IndexProfile.uniform(), 0.0, KAPPA,
                                     LENGTH_MM)
    assert isinstance(value, complex)
    assert value == pytest.approx(1.0)


def test_uniform_matches_sinc():
    x = np.linspace(-20.0, 20.0, 161)
    delta_k = 2.0 * x / LENGTH_UM
    value = amp.nonuniform_amplitude(IndexProfile.uniform(), delta_k, KAPPA,
                                     LENGTH_MM, n_panels=10_000)
    assert np.max(np.abs(value - amp.sinc(x))) < 1e-9


def test_uniform_automatic_panels():
    delta_k = np.linspace(-3e-3, 3e-3, 41)
    value = amp.nonuniform_amplitude(IndexProfile.uniform(), delta_k, KAPPA,
                                     LENGTH_MM)
    assert np.max(np.abs(value - amp.ideal_amplitude(delta_k, LENGTH_MM))) \
        < 1e-9


def test_two_segment_closed_form():
    dn1, dn2 = 2e-5, -3e-5
    profile = IndexProfile.segments([dn1, dn2])
    delta_k = np.linspace(-2e-3, 2e-3, 101)
    value = amp.nonuniform_amplitude(profile, delta_k, KAPPA, LENGTH_MM)
    assert np.max(np.abs(value - two_segment(delta_k, dn1, dn2))) < 1e-8


def test_kappa_broadcasts():
    profile = IndexProfile.segments([2e-5, -2e-5])
    delta_k = np.linspace(-1e-3, 1e-3, 11)
    scalar = amp.nonuniform_amplitude(profile, delta_k, KAPPA, LENGTH_MM)
    array = amp.nonuniform_amplitude(profile, delta_k,
                                     np.full(delta_k.shape, KAPPA), LENGTH_MM)
    assert np.allclose(scalar, array, atol=1e-15)


def test_mirror_keeps_magnitude():
    profile = IndexProfile(POLYNOMIAL, (1e-5, -3e-5, 2e-5))
    delta_k = np.linspace(-1e-3, 1e-3, 21)
    forward = amp.nonuniform_amplitude(profile, delta_k, KAPPA, LENGTH_MM,
                                       n_panels=10_000)
    mirror = amp.nonuniform_amplitude(profile.mirrored(), delta_k, KAPPA,
                                      LENGTH_MM, n_panels=10_000)
    assert np.allclose(np.abs(forward), np.abs(mirror), atol=1e-8)


def test_constant_shift_moves_mismatch():
    profile = IndexProfile.segments([2e-5, -1e-5])
    shift = 1e-5
    delta_k = np.linspace(-1e-3, 1e-3, 21)
    shifted = amp.nonuniform_amplitude(profile.shifted(shift), delta_k, KAPPA,
                                       LENGTH_MM)
    moved = amp.nonuniform_amplitude(profile, delta_k + KAPPA * shift, KAPPA,
                                     LENGTH_MM)
    assert np.allclose(np.abs(shifted), np.abs(moved), atol=1e-12)


def test_required_panels_grows_with_mismatch():
    profile = IndexProfile.uniform()
    few = amp.required_panels(profile, [1e-4], KAPPA, LENGTH_MM)
    many = amp.required_panels(profile, [1e-1], KAPPA, LENGTH_MM)
    assert few == amp.MIN_PANELS
    assert 9_999 <= many <= 10_001


def test_too_few_panels():
    with pytest.raises(ResolutionError, match='use at least'):
        amp.nonuniform_amplitude(IndexProfile.uniform(), 0.05, KAPPA,
                                 LENGTH_MM, n_panels=100)


def test_shape_preserved():
    delta_k = np.zeros((3, 4))
    value = amp.nonuniform_amplitude(IndexProfile.segments([1e-5, -1e-5]),
                                     delta_k, KAPPA, LENGTH_MM)
    assert value.shape == (3, 4)
