"""Closed-form photon statistics of filtered resonance fluorescence.

The scattered field of a weakly driven two-level emitter splits into a
coherent component (a coherent state at the laser frequency) and an
incoherent component (energy-time entangled photon pairs spectrally
separated from the laser). A narrowband notch filter attenuates only the
coherent part by the complex field transmission `filter_transmission`,
which rebalances the destructive interference between the two-photon
amplitudes of the two components and turns antibunching into bunching.

All functions are pure and accept numpy arrays for the time delay `tau`.
Rates follow the low-saturation expansion by default (`exact=False`),
which is the model used for every derived correlation quantity here.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .params import AtomDriveParams, DetectionParams, FilterParams


def coherent_rate(sat, gamma, exact: bool = False):
    """Photon rate of the coherently scattered component (photons/s).

    Exact form gamma*S/(S+1)^2; the default low-saturation expansion is
    gamma*(S - 2 S^2), accurate to second order in S.
    """
    sat = np.asarray(sat, dtype=float) if np.ndim(sat) else float(sat)
    if np.any(np.asarray(sat) < 0.0):
        raise ValueError("saturation must be non-negative")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if exact:
        return gamma * sat / (sat + 1.0) ** 2
    return gamma * (sat - 2.0 * sat**2)


def incoherent_rate(sat, gamma, exact: bool = False):
    """Photon rate of the incoherently scattered component (photons/s).

    Exact form gamma*S^2/(S+1)^2, expansion gamma*S^2.
    """
    sat = np.asarray(sat, dtype=float) if np.ndim(sat) else float(sat)
    if np.any(np.asarray(sat) < 0.0):
        raise ValueError("saturation must be non-negative")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if exact:
        return gamma * sat**2 / (sat + 1.0) ** 2
    return gamma * sat**2


def two_photon_coherent_amp(params: AtomDriveParams, exact: bool = False) -> float:
    """Time-independent two-photon amplitude of the coherent component."""
    return 0.5 * coherent_rate(params.sat, params.gamma, exact=exact)


def two_photon_incoherent_amp(tau, params: AtomDriveParams, exact: bool = False):
    """Two-photon amplitude of the incoherent component at delay tau.

    Negative of the coherent amplitude at tau=0 and decaying as
    exp(-(gamma - i*delta)|tau|); even in tau.
    """
    a = two_photon_coherent_amp(params, exact=exact)
    decay = np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau))
    return -a * decay


def two_photon_total_amp(tau, params: AtomDriveParams, exact: bool = False):
    """Two-photon amplitude of the full (coherent + incoherent) field."""
    a = two_photon_coherent_amp(params, exact=exact)
    return a * (1.0 - np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau)))


def filter_transmission(filt: FilterParams, probe_offset=0.0):
    """Complex field transmission past the ring resonator.

    Parameters
    ----------
    filt : FilterParams
    probe_offset : float or ndarray
        Angular detuning of the probe from the resonator resonance,
        omega - omega_res (rad/s). Zero probes the center of the notch.

    Returns
    -------
    complex or ndarray
        t = (kappa0 - kappa_ext + i*dw) / (kappa0 + kappa_ext + i*dw),
        with |t| <= 1 for any kappa_ext >= 0.
    """
    dw = np.asarray(probe_offset, dtype=float) if np.ndim(probe_offset) else probe_offset
    num = (filt.kappa0 - filt.kappa_ext) + 1j * dw
    den = (filt.kappa0 + filt.kappa_ext) + 1j * dw
    return num / den


def laser_transmission(filt: FilterParams):
    """Field transmission at the drive laser frequency (probe at -res_offset)."""
    return filter_transmission(filt, -filt.res_offset)


def notch_fwhm(filt: FilterParams) -> float:
    """Full width at half maximum of the power-transmission notch (rad/s)."""
    return 2.0 * (filt.kappa0 + filt.kappa_ext)


def intracavity_amplitude(params: AtomDriveParams, filt: FilterParams,
                          probe_offset=0.0, exact: bool = False):
    """Steady-state coherent amplitude stored in the filter resonator.

    The resonator integrates the coherent part of the fluorescence over its
    response time; the stored field plus the directly transmitted field
    reproduce `filter_transmission` through
    t = 1 - 2*kappa_ext / (i*dw + kappa_ext + kappa0).
    """
    n_coh = coherent_rate(params.sat, params.gamma, exact=exact)
    dw = np.asarray(probe_offset, dtype=float) if np.ndim(probe_offset) else probe_offset
    den = 1j * dw + filt.kappa_ext + filt.kappa0
    return -math.sqrt(n_coh) * math.sqrt(2.0 * filt.kappa_ext) / den


def filtered_two_photon_amp(tau, params: AtomDriveParams, filt: FilterParams,
                            exact: bool = False):
    """Two-photon amplitude after notch filtering of the coherent component.

    The filter transmission enters squared at the laser frequency; the
    incoherent pair component passes unaltered (the notch is much narrower
    than the spectral separation of the two components).
    """
    a = two_photon_coherent_amp(params, exact=exact)
    t = laser_transmission(filt)
    decay = np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau))
    return a * (t**2 - decay)


class HomAmplitudes(NamedTuple):
    """Two-photon amplitudes split by photon origin at the filter coupler.

    fluorescence : both photons from the incident fluorescence
    resonator    : both photons from the stored resonator field
    cross        : one photon from each (Hong-Ou-Mandel interference term)
    total        : coherent sum of the three
    """

    fluorescence: complex
    resonator: complex
    cross: complex
    total: complex


def hom_decomposition(tau, params: AtomDriveParams, filt: FilterParams,
                      exact: bool = False) -> HomAmplitudes:
    """Time-domain decomposition of the filtered two-photon amplitude.

    The three contributions sum to `filtered_two_photon_amp(tau)` exactly,
    which is the equivalence between the spectral-filtering picture and the
    beamsplitter-interference picture.
    """
    a = two_photon_coherent_amp(params, exact=exact)
    t = laser_transmission(filt)
    decay = np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau))
    psi_f = a * (1.0 - decay)
    psi_r = a * (t - 1.0) ** 2
    psi_fr = 2.0 * a * (t - 1.0)
    return HomAmplitudes(psi_f, psi_r, psi_fr, psi_f + psi_r + psi_fr)


def _flux_factor(sat, t_abs2):
    """Detected-flux factor n/(gamma*eta): |t|^2 (S - 2 S^2) + S^2."""
    return t_abs2 * (sat - 2.0 * sat**2) + sat**2


def mean_flux(params: AtomDriveParams, filt: FilterParams,
              detection: DetectionParams):
    """Mean detected photon rate after the filter (photons/s), plus split.

    Returns
    -------
    (total, coherent, incoherent) : tuple of float
        Detected rates; coherent + incoherent == total.
    """
    t_abs2 = abs(laser_transmission(filt)) ** 2
    coh = detection.eta * t_abs2 * coherent_rate(params.sat, params.gamma)
    inc = detection.eta * incoherent_rate(params.sat, params.gamma)
    return coh + inc, coh, inc


def g2_unnormalized(tau, params: AtomDriveParams, filt: FilterParams,
                    eta: float = 1.0):
    """Unnormalized pair-coincidence density G2(tau) of the filtered light.

    G2 = gamma^2 S^2 eta^2 |t^2 - exp(-(gamma - i*delta)|tau|)|^2, the
    leading-order coincidence rate of the filtered field.
    """
    t = laser_transmission(filt)
    decay = np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau))
    return (params.gamma * params.sat * eta) ** 2 * np.abs(t**2 - decay) ** 2


def g2_ideal(tau, params: AtomDriveParams, filt: FilterParams):
    """Background-free normalized correlation function of the filtered light.

    g2(tau) = |t^2 - exp(-(gamma - i*delta)|tau|)|^2
              / (|t|^2 (1 - 2S) + S)^2

    The detection efficiency cancels. Raises if the mean flux vanishes
    (fully suppressed filter with zero drive), where the normalization is
    undefined.
    """
    s = params.sat
    t = laser_transmission(filt)
    denom = _flux_factor(s, abs(t) ** 2)
    if denom == 0.0:
        raise ValueError("mean flux is zero; g2 normalization undefined")
    decay = np.exp(-(params.gamma - 1j * params.delta) * np.abs(tau))
    return s**2 * np.abs(t**2 - decay) ** 2 / denom**2


def g2_experimental(tau, params: AtomDriveParams, filt: FilterParams,
                    detection: DetectionParams):
    """Correlation function including uncorrelated background counts.

    g2_exp(tau) = (G2(tau) - n^2) / (n + d)^2 + 1 with the detected flux n
    and background rate d. Equals `g2_ideal` for d = 0 and tends to 1 at
    large delays up to corrections of order S.
    """
    n, _, _ = mean_flux(params, filt, detection)
    d = detection.dark_rate
    if n + d <= 0.0:
        raise ValueError("total detected rate is zero; g2 undefined")
    big_g2 = g2_unnormalized(tau, params, filt, eta=detection.eta)
    return (big_g2 - n**2) / (n + d) ** 2 + 1.0


def emission_spectrum(omega_offset, params: AtomDriveParams,
                      exact: bool = False):
    """Spectral weights of the scattered light relative to the laser.

    Parameters
    ----------
    omega_offset : float or ndarray
        Angular frequency offset from the drive laser (rad/s).

    Returns
    -------
    (coherent_weight, incoherent_density)
        The coherent component is a point mass: its full weight (the
        coherent photon rate) is reported at offset 0 and zero elsewhere.
        The incoherent component is a density: two Lorentzians of HWHM
        gamma centered at +-delta, integrating to the incoherent rate.
    """
    w = np.asarray(omega_offset, dtype=float)
    n_coh = coherent_rate(params.sat, params.gamma, exact=exact)
    n_inc = incoherent_rate(params.sat, params.gamma, exact=exact)
    g, d = params.gamma, params.delta
    lor = lambda x: (g / math.pi) / (x**2 + g**2)
    density = 0.5 * n_inc * (lor(w - d) + lor(w + d))
    coh = np.where(w == 0.0, n_coh, 0.0)
    if np.ndim(omega_offset) == 0:
        return float(coh), float(density)
    return coh, density
