"""Thermal and drift averaging of the filtered-fluorescence model.

The emitter sits in a Gaussian-beam dipole trap. Its thermal position
distribution maps to a distribution of trap-light intensities and hence of
AC-Stark shifts, detunings and saturation parameters. Independently, the
filter resonance drifts slowly around its lock point. Measured correlation
functions average the unnormalized quantities over both distributions:
intensities (G2 and the flux n) are averaged first and normalized once,
never the normalized g2 pointwise, because the drifts are slow compared
with the correlation delays but fast compared with the total integration.

Positions are Monte Carlo sampled (rejection sampling in the full
Gaussian-beam potential, no harmonic approximation); filter drift uses
fixed-order Gauss-Hermite quadrature so that repeated evaluations are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import g2_unnormalized  # noqa: F401  (re-exported building block)
from .params import AtomDriveParams, DetectionParams, FilterParams, mhz_to_angular

_BLOCK = 256          # samples per RNG block; streams keyed by (seed, block)
_CHUNK = 32768        # rejection proposals drawn per iteration
_MAX_CHUNKS = 4096    # bounded attempts before giving up


@dataclass(frozen=True)
class TrapParams:
    """Gaussian-beam dipole trap and the Stark shift it imposes.

    Attributes
    ----------
    depth : float
        Trap depth as a temperature equivalent U/k_B (kelvin), > 0.
    waist : float
        1/e^2 intensity waist radius of the trap beam (m), > 0.
    wavelength : float
        Trap laser wavelength (m), sets the Rayleigh range.
    stark_max : float
        AC-Stark shift of the transition at the trap center (rad/s), >= 0.
    """

    depth: float
    waist: float
    wavelength: float
    stark_max: float = 0.0

    def __post_init__(self):
        if self.depth <= 0.0:
            raise ValueError("trap depth must be positive")
        if self.waist <= 0.0 or self.wavelength <= 0.0:
            raise ValueError("waist and wavelength must be positive")
        if self.stark_max < 0.0:
            raise ValueError("stark_max must be non-negative")

    @classmethod
    def from_user(cls, depth_mk: float, waist_um: float, wavelength_nm: float,
                  stark_max_mhz: float = 0.0) -> "TrapParams":
        return cls(depth=1e-3 * depth_mk, waist=1e-6 * waist_um,
                   wavelength=1e-9 * wavelength_nm,
                   stark_max=mhz_to_angular(stark_max_mhz))

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.waist**2 / self.wavelength

    def with_stark_max(self, stark_max: float) -> "TrapParams":
        return TrapParams(self.depth, self.waist, self.wavelength, stark_max)


@dataclass(frozen=True)
class ThermalEnsemble:
    """Thermal state of the trapped emitter plus sampling configuration."""

    temperature: float          # kelvin
    sample_count: int = 2048
    seed: int = 0

    def __post_init__(self):
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")


@dataclass(frozen=True)
class DriftModel:
    """Gaussian drift of the filter resonance around its lock point.

    mean_offset and sigma describe the distribution of omega_res - omega_L
    (rad/s); sample_count is the Gauss-Hermite order used for averaging.
    """

    mean_offset: float = 0.0
    sigma: float = 0.0
    sample_count: int = 21

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValueError("sigma must be non-negative")
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")

    @classmethod
    def from_mhz(cls, mean_mhz: float = 0.0, sigma_mhz: float = 0.0,
                 sample_count: int = 21) -> "DriftModel":
        return cls(mhz_to_angular(mean_mhz), mhz_to_angular(sigma_mhz), sample_count)


def relative_intensity(position, trap: TrapParams):
    """Trap-beam intensity at `position` relative to the trap center.

    position is (3,) or (n, 3) in meters, axes (x, y, z) with z along the
    beam. Returns values in [0, 1].
    """
    pos = np.atleast_2d(np.asarray(position, dtype=float))
    r2 = pos[:, 0] ** 2 + pos[:, 1] ** 2
    zr = trap.rayleigh_range
    widen = 1.0 + (pos[:, 2] / zr) ** 2
    out = np.exp(-2.0 * r2 / (trap.waist**2 * widen)) / widen
    return out[0] if np.ndim(position) == 1 else out


def sampling_box(trap: TrapParams, temperature: float):
    """Half-widths (bx, by, bz) of the rejection-sampling box.

    The box scales with the harmonic thermal widths (8 sigma) and is capped
    at twice the geometric trap scales; atoms are treated as bound within
    it. The quadrature in `thermal_average` integrates the same region, so
    sampled and quadrature averages share one domain.
    """
    frac = temperature / trap.depth
    sig_r = 0.5 * trap.waist * math.sqrt(frac)
    sig_z = trap.rayleigh_range * math.sqrt(0.5 * frac)
    bx = min(8.0 * sig_r, 2.0 * trap.waist)
    bz = min(8.0 * sig_z, 2.0 * trap.rayleigh_range)
    return bx, bx, bz


def sample_positions(trap: TrapParams, ensemble: ThermalEnsemble) -> np.ndarray:
    """Draw thermal positions in the Gaussian-beam potential.

    Rejection sampling with Boltzmann acceptance exp(-(U - U_min)/k_B T)
    against a uniform proposal over `sampling_box`. Samples are generated
    in fixed-size blocks whose RNG streams derive from (seed, block index),
    so results do not depend on evaluation order.

    Returns an (sample_count, 3) array in meters. Raises RuntimeError if
    the bounded number of proposal batches is exhausted.
    """
    t = ensemble.temperature
    if t >= trap.depth:
        raise ValueError("temperature must be below the trap depth")
    bx, by, bz = sampling_box(trap, t)
    beta_scaled = trap.depth / t  # (U - U_min)/k_B T = beta_scaled * (1 - I)
    n = ensemble.sample_count
    out = np.empty((n, 3), dtype=float)
    n_blocks = (n + _BLOCK - 1) // _BLOCK
    for b in range(n_blocks):
        want = min(_BLOCK, n - b * _BLOCK)
        rng = np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(entropy=ensemble.seed, spawn_key=(b,))))
        got = 0
        block = np.empty((want, 3), dtype=float)
        for _ in range(_MAX_CHUNKS):
            pos = rng.uniform(-1.0, 1.0, size=(_CHUNK, 3))
            pos[:, 0] *= bx
            pos[:, 1] *= by
            pos[:, 2] *= bz
            accept_p = np.exp(-beta_scaled * (1.0 - relative_intensity(pos, trap)))
            keep = rng.random(_CHUNK) < accept_p
            picked = pos[keep]
            take = min(want - got, picked.shape[0])
            block[got:got + take] = picked[:take]
            got += take
            if got == want:
                break
        else:
            raise RuntimeError("rejection sampling failed: acceptance too low")
        out[b * _BLOCK:b * _BLOCK + want] = block
    return out


def thermal_average(trap: TrapParams, temperature: float, func=None,
                    nodes: int = 96):
    """Boltzmann average of func(relative intensity) by dense quadrature.

    Tensor-product Gauss-Legendre integration over the same box used by
    `sample_positions`. With func=None averages the relative intensity
    itself. Independent of the Monte Carlo path; serves as its oracle.
    """
    if temperature >= trap.depth:
        raise ValueError("temperature must be below the trap depth")
    bx, by, bz = sampling_box(trap, temperature)
    x_n, x_w = np.polynomial.legendre.leggauss(nodes)
    # integrand is even in each axis: integrate one octant
    xs = 0.5 * bx * (x_n + 1.0)
    ys = 0.5 * by * (x_n + 1.0)
    zs = 0.5 * bz * (x_n + 1.0)
    zr = trap.rayleigh_range
    widen = 1.0 + (zs / zr) ** 2                       # (nz,)
    r2 = xs[:, None] ** 2 + ys[None, :] ** 2           # (nx, ny)
    i_rel = np.exp(-2.0 * r2[:, :, None] / (trap.waist**2 * widen)) / widen
    weight = np.exp(-(trap.depth / temperature) * (1.0 - i_rel))
    w3 = x_w[:, None, None] * x_w[None, :, None] * x_w[None, None, :]
    vals = i_rel if func is None else func(i_rel)
    return float(np.sum(vals * weight * w3) / np.sum(weight * w3))


def effective_params(position, trap: TrapParams,
                     drive: AtomDriveParams) -> AtomDriveParams:
    """Drive parameters seen by the atom at `position`.

    The local Stark shift stark_max * I(r)/I(0) adds to the bare detuning
    (drive.delta is the laser detuning from the unshifted transition); the
    Rabi frequency is held fixed and the saturation parameter follows.
    """
    i_rel = relative_intensity(np.asarray(position, dtype=float), trap)
    return drive.with_delta(drive.delta - trap.stark_max * float(i_rel))


def stark_max_for_mean_detuning(target_delta: float, trap: TrapParams,
                                drive: AtomDriveParams, temperature: float,
                                nodes: int = 96) -> float:
    """Central Stark shift that puts the thermal-mean detuning at target_delta.

    The mean detuning is drive.delta - stark_max * <I_rel>; <I_rel> depends
    only on temperature and trap geometry, so the inversion is direct.
    """
    mean_i = thermal_average(trap, temperature, nodes=nodes)
    return (drive.delta - target_delta) / mean_i


class ThermalIntensityCloud:
    """Sampled relative trap intensities, reweightable in temperature.

    Holds one Monte Carlo cloud drawn at a reference temperature; averages
    at nearby temperatures re-use the cloud with smooth Boltzmann
    importance weights. This keeps ensemble averages differentiable in the
    temperature, which the nonlinear fits require, while the cloud itself
    comes from the rejection sampler.
    """

    def __init__(self, i_rel: np.ndarray, t_ref: float, depth: float):
        self.i_rel = np.asarray(i_rel, dtype=float)
        self.t_ref = float(t_ref)
        self.depth = float(depth)

    @classmethod
    def sample(cls, trap: TrapParams, ensemble: ThermalEnsemble) -> "ThermalIntensityCloud":
        pos = sample_positions(trap, ensemble)
        return cls(relative_intensity(pos, trap), ensemble.temperature, trap.depth)

    def weights(self, temperature: float) -> np.ndarray:
        """Normalized sample weights for a Boltzmann ensemble at `temperature`."""
        du = self.depth * (1.0 - self.i_rel)  # (U - U_min)/k_B, kelvin
        log_w = -du * (1.0 / temperature - 1.0 / self.t_ref)
        log_w -= log_w.max()
        w = np.exp(log_w)
        return w / w.sum()


def drift_nodes(drift: DriftModel):
    """Gauss-Hermite nodes and weights of the resonance-offset distribution.

    Returns (offsets, weights) with offsets = omega_res - omega_L in rad/s
    and weights summing to 1. A zero-width drift collapses to the mean.
    """
    if drift.sigma == 0.0 or drift.sample_count == 1:
        return np.array([drift.mean_offset]), np.array([1.0])
    x, w = np.polynomial.hermite.hermgauss(drift.sample_count)
    offsets = drift.mean_offset + math.sqrt(2.0) * drift.sigma * x
    return offsets, w / math.sqrt(math.pi)


def _drive_distribution(cloud: ThermalIntensityCloud, temperature: float,
                        trap: TrapParams, drive: AtomDriveParams):
    """Per-sample (weights, saturation, detuning) over the thermal cloud."""
    w = cloud.weights(temperature)
    delta = drive.delta - trap.stark_max * cloud.i_rel
    sat = 0.5 * (drive.rabi / drive.gamma) ** 2 / (1.0 + (delta / drive.gamma) ** 2)
    return w, sat, delta


def _filter_moments(filt: FilterParams, drift: DriftModel):
    """Drift-averaged moments of the laser-frequency filter transmission."""
    offsets, w = drift_nodes(drift)
    den = (filt.kappa0 + filt.kappa_ext) - 1j * offsets
    t = ((filt.kappa0 - filt.kappa_ext) - 1j * offsets) / den
    t_abs2 = np.abs(t) ** 2
    return (np.sum(w * t_abs2), np.sum(w * t_abs2**2), np.sum(w * t**2))


def ensemble_g2(tau, ensemble: ThermalEnsemble, trap: TrapParams,
                drive: AtomDriveParams, filt: FilterParams, drift: DriftModel,
                detection: DetectionParams, cloud: ThermalIntensityCloud = None):
    """Measured correlation function averaged over trap thermal state and drift.

    G2 and the flux n are averaged over the joint (position, drift)
    distribution before the single normalization
    (<G2> - <n>^2)/(<n> + d)^2 + 1.

    Parameters
    ----------
    tau : float or ndarray
        Time delay(s), seconds.
    cloud : ThermalIntensityCloud, optional
        Reuse a sampled cloud (reweighted to ensemble.temperature); drawn
        fresh from the rejection sampler when omitted.
    """
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if cloud is None:
        cloud = ThermalIntensityCloud.sample(trap, ensemble)
    w, sat, delta = _drive_distribution(cloud, ensemble.temperature, trap, drive)
    a2, a4, t2 = _filter_moments(filt, drift)
    gamma, eta, d = drive.gamma, detection.eta, detection.dark_rate

    mean_s2 = np.sum(w * sat**2)
    decay = np.exp(-(gamma + 1j * delta[:, None]) * np.abs(tau_arr[None, :]))
    cross = (w * sat**2) @ decay                      # sum_i w_i S_i^2 conj(e_i)
    big_g2 = (gamma * eta) ** 2 * (
        mean_s2 * (a4 + np.exp(-2.0 * gamma * np.abs(tau_arr)))
        - 2.0 * np.real(t2 * cross)
    )
    flux = gamma * eta * (a2 * np.sum(w * (sat - 2.0 * sat**2)) + mean_s2)
    if flux + d <= 0.0:
        raise ValueError("ensemble flux is zero; g2 undefined")
    out = (big_g2 - flux**2) / (flux + d) ** 2 + 1.0
    return float(out[0]) if np.ndim(tau) == 0 else out


def ensemble_flux(ensemble: ThermalEnsemble, trap: TrapParams,
                  drive: AtomDriveParams, filt: FilterParams, drift: DriftModel,
                  detection: DetectionParams, cloud: ThermalIntensityCloud = None):
    """Mean detected photon rate (total, coherent, incoherent), photons/s.

    The coherent part carries the drift-averaged power transmission of the
    filter; the incoherent part bypasses the notch. The two contributions
    sum to the total for every filter setting.
    """
    if cloud is None:
        cloud = ThermalIntensityCloud.sample(trap, ensemble)
    w, sat, _ = _drive_distribution(cloud, ensemble.temperature, trap, drive)
    a2, _, _ = _filter_moments(filt, drift)
    scale = drive.gamma * detection.eta
    coh = scale * a2 * np.sum(w * (sat - 2.0 * sat**2))
    inc = scale * np.sum(w * sat**2)
    return coh + inc, coh, inc
