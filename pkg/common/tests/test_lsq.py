import numpy as np
import pytest

from common import lsq
from common.errors import FitFailure


def exp_decay(params, t):
    amplitude, rate = params
    return amplitude * np.exp(-rate * t)


T = np.linspace(0.0, 5.0, 40)


def test_recovers_exact_parameters():
    y = exp_decay([3.0, 0.7], T)
    result = lsq.fit(lambda p: exp_decay(p, T) - y, [1.0, 0.2])
    assert result.params == pytest.approx([3.0, 0.7], rel=1e-6)
    assert result.rms < 1e-7
    assert result.nfev <= lsq.MAX_ITERATIONS
    assert len(result.trace) >= result.nfev


def test_scaled_parameters():
    y = exp_decay([2.0e4, 3.0e-3], T * 1000.0)
    result = lsq.fit(lambda p: (exp_decay(p, T * 1000.0) - y) / 2.0e4,
                     [1.5e4, 2.0e-3], scale=[1.0e4, 1.0e-3])
    assert result.params == pytest.approx([2.0e4, 3.0e-3], rel=1e-6)


def test_bounds_are_respected():
    y = exp_decay([3.0, 0.7], T)
    result = lsq.fit(lambda p: exp_decay(p, T) - y, [1.0, 0.2],
                     bounds=([0.0, 0.0], [2.5, 5.0]))
    assert result.params[0] <= 2.5 + 1e-12


def test_standard_errors_shrink_with_noise():
    rng = np.random.default_rng(3)
    sigma = 0.01
    y = exp_decay([3.0, 0.7], T) + rng.normal(0.0, sigma, T.size)
    result = lsq.fit(lambda p: (exp_decay(p, T) - y) / sigma, [1.0, 0.2],
                     absolute_sigma=True)
    assert np.all(result.stderr > 0)
    assert abs(result.params[1] - 0.7) < 5 * result.stderr[1]


def test_iteration_cap_raises_with_best_params():
    y = exp_decay([3.0, 0.7], T)
    with pytest.raises(FitFailure) as excinfo:
        lsq.fit(lambda p: exp_decay(p, T) - y, [1.0, 0.2], max_iterations=1)
    assert excinfo.value.best_params is not None
    assert len(excinfo.value.trace) >= 1
    assert excinfo.value.residual > 0


def test_non_finite_residuals_raise():
    with pytest.raises(FitFailure, match='non-finite'):
        lsq.fit(lambda p: np.array([np.nan, 1.0]), [1.0])
