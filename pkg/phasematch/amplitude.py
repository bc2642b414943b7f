"""
Phase-matching amplitude of a finite waveguide.

sinc(x) = sin(x) / x throughout, with argument dk L / 2; np.sinc uses
sin(pi x) / (pi x), so it is always called with x / pi.

For a longitudinal index profile dn(z) the amplitude is

    Phi = (1/L) int_0^L exp(i phi(z)) dz,
    phi(z) = int_{L/2}^z [dk + kappa dn(z')] dz'

with the phase referenced to the device centre, so a uniform guide gives the
real sinc(dk L / 2). The integral is split into panels; each panel uses the
local mismatch at its midpoint and integrates the resulting linear phase
exactly. Uniform and piecewise-constant profiles (with panel edges on the
segment edges) are therefore integrated without discretization error.
"""
import logging
import math

import numpy as np

from common.errors import ResolutionError
from common.units import mm_to_um
from phasematch.waveguide import IndexProfile

logger = logging.getLogger(__name__)

MAX_PHASE_PER_PANEL = 0.1
MIN_PANELS = 16
# complex entries per vectorized block
CHUNK_ELEMENTS = 1 << 21


def sinc(x):
    """sin(x) / x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def ideal_amplitude(delta_k, length_mm):
    """sinc(dk L / 2) for dk in rad/um and L in mm."""
    return sinc(np.asarray(delta_k, dtype=float) * mm_to_um(length_mm) / 2.0)


def required_panels(profile: IndexProfile, delta_k, kappa, length_mm) -> int:
    """Fewest equal panels keeping the phase advance below the limit."""
    delta_k = np.asarray(delta_k, dtype=float)
    if not delta_k.size:
        return MIN_PANELS
    dn = profile.local_index(np.linspace(0.0, 1.0, 257))
    fastest = np.max(np.abs(delta_k)) \
        + np.max(np.abs(kappa)) * np.max(np.abs(dn))
    return max(MIN_PANELS,
               math.ceil(fastest * mm_to_um(length_mm) / MAX_PHASE_PER_PANEL))


def _panel_edges(profile: IndexProfile, n_panels: int) -> np.ndarray:
    """Panel edges in u, aligned with profile jumps and the centre."""
    breaks = np.unique(np.concatenate([profile.edges(), [0.5]]))
    pieces = []
    for start, stop in zip(breaks[:-1], breaks[1:]):
        count = max(1, math.ceil((stop - start) * n_panels))
        pieces.append(np.linspace(start, stop, count + 1)[:-1])
    return np.concatenate(pieces + [[1.0]])


def nonuniform_amplitude(profile: IndexProfile, delta_k, kappa, length_mm,
                         n_panels: int = None):
    """
    Complex amplitude Phi for nominal mismatch dk (rad/um).

    Args:
        profile: longitudinal index profile
        delta_k: nominal mismatch, scalar or array
        kappa: rad/um of mismatch per unit delta n, scalar or shaped like
            delta_k
        length_mm: interaction length
        n_panels: panel count; chosen automatically when omitted

    Returns:
        complex scalar or array shaped like delta_k

    Raises:
        ResolutionError: n_panels is too coarse for the phase to be followed
    """
    delta_k = np.asarray(delta_k, dtype=float)
    scalar = delta_k.ndim == 0
    delta_k = np.atleast_1d(delta_k)
    kappa = np.broadcast_to(np.asarray(kappa, dtype=float),
                            delta_k.shape).ravel()
    shape = delta_k.shape
    delta_k = delta_k.ravel()
    needed = required_panels(profile, delta_k, kappa, length_mm)
    if n_panels is None:
        n_panels = needed
    elif n_panels < needed:
        raise ResolutionError(
            f'{n_panels} panels cannot follow the phase; use at least '
            f'{needed}')
    length_um = float(mm_to_um(length_mm))
    edges = _panel_edges(profile, n_panels)
    widths = np.diff(edges) * length_um
    mids = (edges[:-1] + edges[1:]) / 2.0
    dn = profile.local_index(mids)
    # accumulated profile phase per unit kappa, zero at the centre
    profile_phase = np.concatenate([[0.0], np.cumsum(dn * widths)])
    profile_phase -= np.interp(0.5, edges, profile_phase)
    starts = edges[:-1] * length_um - length_um / 2.0
    logger.debug('amplitude: %d panels for %d mismatch values',
                 widths.size, delta_k.size)
    result = np.empty(delta_k.size, dtype=complex)
    step = max(1, CHUNK_ELEMENTS // widths.size)
    for first in range(0, delta_k.size, step):
        dk = delta_k[first:first + step, None]
        kap = kappa[first:first + step, None]
        rate = dk + kap * dn
        phase = dk * starts + kap * profile_phase[:-1] + rate * widths / 2.0
        panel = widths * np.exp(1j * phase) * sinc(rate * widths / 2.0)
        result[first:first + step] = panel.sum(axis=1) / length_um
    result = result.reshape(shape)
    return complex(result[0]) if scalar else result
