"""
Unit conversions and width bookkeeping.

Conventions: wavelengths in nm, poling periods in µm, lengths in mm,
temperatures in K, delays in ps. Formulas work in µm (wavevectors in rad/µm);
conversions happen here and at type boundaries only.
"""
import math

import numpy as np
from scipy import constants

NM_PER_UM = 1.0e3
UM_PER_MM = 1.0e3

# speed of light in nm/ps
C_NM_PER_PS = constants.c * 1.0e9 / 1.0e12

# intensity FWHM = FWHM_PER_SIGMA * intensity standard deviation
FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))

# sech^2 intensity FWHM = SECH2_FWHM_FACTOR * width parameter
SECH2_FWHM_FACTOR = 2.0 * math.acosh(math.sqrt(2.0))


def nm_to_um(wavelength_nm):
    return np.asarray(wavelength_nm, dtype=float) / NM_PER_UM


def mm_to_um(length_mm):
    return np.asarray(length_mm, dtype=float) * UM_PER_MM


def angular_frequency(wavelength_nm):
    """Angular frequency in rad/ps of a vacuum wavelength in nm."""
    return 2.0 * np.pi * C_NM_PER_PS / np.asarray(wavelength_nm, dtype=float)


def fwhm_to_sigma(fwhm):
    """Intensity standard deviation of a Gaussian with intensity FWHM."""
    return fwhm / FWHM_PER_SIGMA


def sigma_to_fwhm(sigma):
    return sigma * FWHM_PER_SIGMA


def gaussian_widths(fwhm) -> dict:
    """
    All Gaussian widths derived from one intensity FWHM.

    The intensity profile is exp(-(x-c)^2 / (2 sigma_I^2)); the amplitude is
    its square root, exp(-(x-c)^2 / (2 sigma_A^2)) with sigma_A = sqrt(2)
    sigma_I. Every Gaussian amplitude in the toolkit takes its width from here.
    """
    if fwhm <= 0:
        raise ValueError(f'FWHM must be positive, got {fwhm}')
    sigma_intensity = fwhm_to_sigma(fwhm)
    return {
        'fwhm': fwhm,
        'sigma_intensity': sigma_intensity,
        'sigma_amplitude': math.sqrt(2.0) * sigma_intensity,
    }


def gaussian_amplitude(x, center, fwhm):
    """Field amplitude whose intensity is a unit Gaussian of given FWHM."""
    sigma = gaussian_widths(fwhm)['sigma_amplitude']
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * ((x - center) / sigma) ** 2)


def sech2_amplitude(x, center, fwhm):
    """Field amplitude whose intensity is sech^2 with given FWHM."""
    if fwhm <= 0:
        raise ValueError(f'FWHM must be positive, got {fwhm}')
    width = fwhm / SECH2_FWHM_FACTOR
    x = np.asarray(x, dtype=float)
    return 1.0 / np.cosh((x - center) / width)
