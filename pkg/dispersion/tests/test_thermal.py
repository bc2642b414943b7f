import numpy as np
import pytest

from common.errors import DomainError
from dispersion import thermal as th
from dispersion.model import default_model


@pytest.fixture
def table():
    return default_model().thermal


def test_reference_is_one(table):
    assert th.thermal_scale(table, 295.0) == pytest.approx(1.0, abs=1e-15)


def test_constant_below_clamp(table):
    clamped = th.thermal_scale(table, 60.0)
    assert th.thermal_scale(table, 10.0) == clamped
    assert th.thermal_scale(table, 0.0) == clamped
    assert clamped == pytest.approx(1.0 - 2.14e-3)


def test_linear_between_samples(table):
    low = th.thermal_scale(table, 100.0)
    high = th.thermal_scale(table, 120.0)
    assert th.thermal_scale(table, 110.0) == pytest.approx((low + high) / 2,
                                                           abs=1e-15)


def test_vectorized(table):
    scales = th.thermal_scale(table, np.array([4.0, 295.0]))
    assert scales.shape == (2,)
    assert scales[1] == pytest.approx(1.0)


def test_above_table(table):
    with pytest.raises(DomainError, match='above'):
        th.thermal_scale(table, 301.0)


def test_negative_temperature(table):
    with pytest.raises(DomainError, match='below 0 K'):
        th.thermal_scale(table, -1.0)


def test_flat_table():
    assert th.thermal_scale(th.ThermalExpansionTable.flat(), 6.4) == 1.0


def test_table_must_increase():
    with pytest.raises(ValueError, match='increasing'):
        th.ThermalExpansionTable((60.0, 50.0, 300.0), (0.0, 0.0, 0.0))


def test_table_must_reach_room_temperature():
    with pytest.raises(ValueError, match='cover'):
        th.ThermalExpansionTable((60.0, 200.0), (0.0, 0.0))
