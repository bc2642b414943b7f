"""
Phase mismatch of the type-II processes.

SHG: a fundamental at lam, split between TE and TM, generates a TE second
harmonic at lam/2:

    dk = 2 pi (dn(lam, T) / lam - 1 / Lambda(T))
    dn = 2 n_TE(lam/2) - n_TE(lam) - n_TM(lam) + w * dn_corr(T)

SPDC: a TE pump at lam_p = 1 / (1/lam_s + 1/lam_i) splits into a TE signal
and a TM idler:

    dk = 2 pi (n_TE(lam_p)/lam_p - n_TE(lam_s)/lam_s - n_TM(lam_i)/lam_i
               + w * dn_corr(T) (1/lam_s + 1/lam_i) / 2 - 1 / Lambda(T))

Wavelengths enter in um, so dk is in rad/um. Lambda(T) is the poling period
after thermal contraction.
"""
import numpy as np

from common.units import nm_to_um
from dispersion.correction import eval_correction
from dispersion.model import TE, TM, DispersionModel, effective_index
from phasematch.waveguide import WaveguideSpec

TWO_PI = 2.0 * np.pi


def pump_wavelength(signal_nm, idler_nm):
    """Energy conservation: the pump wavelength of a signal/idler pair."""
    signal_nm = np.asarray(signal_nm, dtype=float)
    idler_nm = np.asarray(idler_nm, dtype=float)
    return 1.0 / (1.0 / signal_nm + 1.0 / idler_nm)


def _combined_correction(model: DispersionModel, temperature):
    weight = model.weights.combined
    if weight == 0.0 or model.correction.is_zero:
        return 0.0
    return weight * eval_correction(model.correction, temperature)


def shg_index_difference(model: DispersionModel, wavelength_nm, temperature):
    """Combined index difference dn of the SHG process at fundamental lam."""
    wavelength_nm = np.asarray(wavelength_nm, dtype=float)
    return (2.0 * effective_index(model, TE, wavelength_nm / 2.0, temperature)
            - effective_index(model, TE, wavelength_nm, temperature)
            - effective_index(model, TM, wavelength_nm, temperature)
            + _combined_correction(model, temperature))


def mismatch_shg(model: DispersionModel, wg: WaveguideSpec, wavelength_nm,
                 temperature):
    """dk in rad/um at fundamental wavelength(s) in nm and T in K."""
    period = wg.period_at(model.thermal, temperature)
    delta_n = shg_index_difference(model, wavelength_nm, temperature)
    return TWO_PI * (delta_n / nm_to_um(wavelength_nm) - 1.0 / period)


def mismatch_spdc(model: DispersionModel, wg: WaveguideSpec, signal_nm,
                  idler_nm, temperature):
    """dk in rad/um for a TE signal and TM idler; arrays broadcast."""
    signal_nm, idler_nm = np.broadcast_arrays(
        np.asarray(signal_nm, dtype=float), np.asarray(idler_nm, dtype=float))
    pump_nm = pump_wavelength(signal_nm, idler_nm)
    period = wg.period_at(model.thermal, temperature)
    pump_um, signal_um, idler_um = (nm_to_um(pump_nm), nm_to_um(signal_nm),
                                    nm_to_um(idler_nm))
    k = (effective_index(model, TE, pump_nm, temperature) / pump_um
         - effective_index(model, TE, signal_nm, temperature) / signal_um
         - effective_index(model, TM, idler_nm, temperature) / idler_um)
    k = k + _combined_correction(model, temperature) \
        * (1.0 / signal_um + 1.0 / idler_um) / 2.0
    return TWO_PI * (k - 1.0 / period)


def index_to_mismatch(wavelength_nm):
    """
    rad/um of mismatch per unit of combined index perturbation: 2 pi / lam
    with lam the SHG fundamental.
    """
    return TWO_PI / nm_to_um(wavelength_nm)
