"""
Damped least-squares engine shared by every fit in the toolkit.

Contract: trust-region damped least squares (scipy's least_squares) on
parameters divided by a caller-supplied scale, a Jacobian from central
differences with relative step 1e-6 in the scaled parameters, at most
MAX_ITERATIONS residual evaluations, and convergence when the relative cost
decrease drops below COST_TOLERANCE.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from common.errors import FitFailure

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200
COST_TOLERANCE = 1e-10
STEP_TOLERANCE = 1e-12
GRADIENT_TOLERANCE = 1e-12
DIFF_STEP = 1e-6


@dataclass(frozen=True)
class LsqResult:
    params: np.ndarray
    residuals: np.ndarray
    cost: float
    stderr: np.ndarray
    nfev: int
    trace: tuple

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.residuals ** 2)))


def fit(residual_fn, x0, scale=None, bounds=None, absolute_sigma=False,
        max_iterations: int = MAX_ITERATIONS) -> LsqResult:
    """
    Minimize 0.5 * sum(residual_fn(x)**2).

    Args:
        residual_fn: maps a parameter vector to weighted residuals
        x0: starting parameters (physical units)
        scale: typical magnitude of each parameter; the optimizer works on
            x / scale
        bounds: (lower, upper) in physical units, or None
        absolute_sigma: residuals are weighted by true uncertainties, so the
            covariance is not rescaled by the reduced chi-square

    Raises:
        FitFailure: the iteration cap was reached or the residuals went
            non-finite; carries the best parameters seen and the cost trace
    """
    x0 = np.asarray(x0, dtype=float)
    scale = np.ones_like(x0) if scale is None else np.asarray(scale, float)
    trace = []
    best = {'cost': np.inf, 'x': x0.copy()}

    def scaled_residuals(u):
        x = u * scale
        res = np.asarray(residual_fn(x), dtype=float)
        cost = 0.5 * float(np.dot(res, res))
        if not np.isfinite(cost):
            raise FitFailure('Residuals became non-finite',
                             best_params=best['x'], trace=trace,
                             residual=_rms_from_cost(best['cost'], res.size))
        trace.append(cost)
        if cost < best['cost']:
            best['cost'] = cost
            best['x'] = x.copy()
        return res

    if bounds is None:
        scaled_bounds = (-np.inf, np.inf)
    else:
        lower = np.broadcast_to(np.asarray(bounds[0], float), x0.shape)
        upper = np.broadcast_to(np.asarray(bounds[1], float), x0.shape)
        scaled_bounds = (lower / scale, upper / scale)

    result = least_squares(
        scaled_residuals, x0 / scale, jac='3-point', bounds=scaled_bounds,
        method='trf', diff_step=DIFF_STEP, ftol=COST_TOLERANCE,
        xtol=STEP_TOLERANCE, gtol=GRADIENT_TOLERANCE,
        max_nfev=max_iterations)
    params = result.x * scale
    if result.status <= 0:
        raise FitFailure(
            f'Fit did not converge after {result.nfev} evaluations: '
            f'{result.message}',
            best_params=best['x'], trace=trace,
            residual=_rms_from_cost(best['cost'], result.fun.size))
    logger.debug('fit converged: cost=%g nfev=%d', result.cost, result.nfev)
    stderr = _standard_errors(result.jac / scale, result.fun, absolute_sigma)
    return LsqResult(params, result.fun.copy(), float(result.cost), stderr,
                     int(result.nfev), tuple(trace))


def _rms_from_cost(cost: float, n: int) -> float:
    if not np.isfinite(cost) or n == 0:
        return float('nan')
    return float(np.sqrt(2.0 * cost / n))


def _standard_errors(jac, residuals, absolute_sigma) -> np.ndarray:
    """Parameter standard errors from the Jacobian at the solution."""
    m, n = jac.shape
    cov = np.linalg.pinv(jac.T @ jac)
    if not absolute_sigma and m > n:
        cov = cov * float(np.dot(residuals, residuals)) / (m - n)
    return np.sqrt(np.clip(np.diag(cov), 0.0, None))
