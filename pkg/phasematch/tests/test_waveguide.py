import numpy as np
import pytest

from dispersion.thermal import ThermalExpansionTable
from phasematch import waveguide as wg
from phasematch.waveguide import IndexProfile, WaveguideSpec

TWO_STEP = IndexProfile.segments([3e-5, -1e-5])


def test_sample_waveguide():
    device = WaveguideSpec(wg.SAMPLE_WAVEGUIDE[wg.POLING_PERIOD],
                             wg.SAMPLE_WAVEGUIDE[wg.LENGTH])
    assert device.profile.is_uniform
    assert device.interaction_length == 24.3


@pytest.mark.parametrize('period, length', [(0.0, 10.0), (8.8, 0.0),
                                            (-1.0, 10.0)])
def test_bad_geometry(period, length):
    with pytest.raises(ValueError, match='must be positive'):
        WaveguideSpec(period, length)


def test_effective_length():
    device = WaveguideSpec(8.81, 24.3, effective_length=18.8)
    assert device.interaction_length == 18.8
    with pytest.raises(ValueError, match='effective_length'):
        WaveguideSpec(8.81, 24.3, effective_length=30.0)


def test_period_contracts_with_temperature():
    thermal = ThermalExpansionTable((0.0, 60.0, 295.0, 300.0),
                                    (-1.5e-3, -1.5e-3, 0.0, 1e-5))
    device = WaveguideSpec(10.0, 20.0)
    cold = device.period_at(thermal, 6.4)
    assert cold == pytest.approx(10.0 * (1 - 1.5e-3))
    assert device.period_at(thermal, 295.0) == pytest.approx(10.0)
    assert device.length_at(thermal, 6.4) / 20.0 == pytest.approx(cold / 10.0)


def test_uniform_profile_rejects_parameters():
    with pytest.raises(ValueError, match='no parameters'):
        IndexProfile(wg.UNIFORM, (1e-5,))


def test_unknown_kind():
    with pytest.raises(ValueError, match='Unknown profile kind'):
        IndexProfile('gaussian', ())


def test_profile_bound():
    with pytest.raises(ValueError, match='limit'):
        IndexProfile.segments([2e-2, 0.0])
    with pytest.raises(ValueError, match='limit'):
        IndexProfile(wg.POLYNOMIAL, (0.0, 0.02))


def test_segment_starts_must_increase():
    with pytest.raises(ValueError, match='Segment starts'):
        IndexProfile(wg.PIECEWISE_CONSTANT, ((0.0, 1e-5), (0.0, 2e-5)))
    with pytest.raises(ValueError, match='Segment starts'):
        IndexProfile(wg.PIECEWISE_CONSTANT, ((0.1, 1e-5),))


def test_local_index_piecewise():
    values = TWO_STEP.local_index([0.0, 0.25, 0.4999, 0.5, 0.9, 1.0])
    assert np.allclose(values, [3e-5, 3e-5, 3e-5, -1e-5, -1e-5, -1e-5])
    assert TWO_STEP.edges() == (0.0, 0.5, 1.0)


def test_mean():
    assert TWO_STEP.mean() == pytest.approx(1e-5)
    ramp = IndexProfile(wg.POLYNOMIAL, (0.0, 2e-5))
    assert ramp.mean() == pytest.approx(1e-5)
    assert IndexProfile.uniform().mean() == 0.0


def test_mirrored():
    mirror = TWO_STEP.mirrored()
    assert np.allclose(mirror.local_index([0.1, 0.9]), [-1e-5, 3e-5])
    ramp = IndexProfile(wg.POLYNOMIAL, (1e-5, 2e-5))
    u = np.linspace(0, 1, 11)
    assert np.allclose(ramp.mirrored().local_index(u),
                       ramp.local_index(1 - u), atol=1e-20)


def test_uneven_segments_mirror():
    profile = IndexProfile(wg.PIECEWISE_CONSTANT, ((0.0, 1e-5), (0.3, 2e-5)))
    mirror = profile.mirrored()
    assert mirror.edges() == pytest.approx((0.0, 0.7, 1.0))
    assert np.allclose(mirror.local_index([0.5, 0.8]), [2e-5, 1e-5])


def test_canonical_has_zero_mean_and_falls():
    canon = IndexProfile.segments([-1e-5, 3e-5]).canonical()
    assert canon.mean() == pytest.approx(0.0, abs=1e-20)
    first, last = canon.local_index([0.0, 1.0])
    assert first >= last
    assert np.allclose(canon.local_index([0.1, 0.9]), [2e-5, -2e-5])
