"""Parameter containers and unit conversions.

All frequencies and rates are stored internally as angular quantities in
rad/s. User-facing constructors and the CLI accept ordinary frequencies in
MHz and convert exactly once, which keeps factor-of-2pi bugs out of the
physics code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

# Amplitude decay rate of the rubidium D2 dipole, gamma/2pi in MHz (half the
# natural linewidth). Externally sourced literature value; override per config
# for other emitters.
DEFAULT_GAMMA_MHZ = 3.033


def mhz_to_angular(f_mhz: float) -> float:
    """Ordinary frequency in MHz to angular frequency in rad/s."""
    return TWO_PI * 1e6 * f_mhz


def angular_to_mhz(w: float) -> float:
    """Angular frequency in rad/s to ordinary frequency in MHz."""
    return w / (TWO_PI * 1e6)


def saturation(rabi: float, gamma: float, delta: float) -> float:
    """Saturation parameter of a driven two-level dipole.

    Parameters
    ----------
    rabi : float
        Angular Rabi frequency of the drive (rad/s).
    gamma : float
        Amplitude decay rate of the dipole (rad/s), must be positive.
    delta : float
        Angular drive-atom detuning (rad/s).
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return 0.5 * (rabi / gamma) ** 2 / (1.0 + (delta / gamma) ** 2)


def rabi_from_saturation(sat: float, gamma: float, delta: float) -> float:
    """Angular Rabi frequency that produces saturation `sat` at detuning `delta`."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if sat < 0.0:
        raise ValueError("saturation must be non-negative")
    return gamma * math.sqrt(2.0 * sat * (1.0 + (delta / gamma) ** 2))


@dataclass(frozen=True)
class AtomDriveParams:
    """Drive conditions of the two-level emitter.

    Exactly one of `rabi` / `sat` must be supplied; the other is derived.
    If both are given they must be mutually consistent to 1e-12 relative.

    Attributes
    ----------
    gamma : float
        Amplitude decay rate (rad/s).
    delta : float
        Angular laser-atom detuning (rad/s).
    rabi : float
        Angular Rabi frequency (rad/s).
    sat : float
        Dimensionless saturation parameter.
    """

    gamma: float
    delta: float
    rabi: float = None  # type: ignore[assignment]
    sat: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.rabi is None and self.sat is None:
            raise ValueError("supply rabi or sat")
        if self.rabi is None:
            object.__setattr__(
                self, "rabi", rabi_from_saturation(self.sat, self.gamma, self.delta)
            )
        elif self.sat is None:
            if self.rabi < 0.0:
                raise ValueError("rabi must be non-negative")
            object.__setattr__(
                self, "sat", saturation(self.rabi, self.gamma, self.delta)
            )
        else:
            s_check = saturation(self.rabi, self.gamma, self.delta)
            scale = max(abs(self.sat), abs(s_check), 1e-300)
            if abs(s_check - self.sat) > 1e-12 * scale:
                raise ValueError("rabi and sat are mutually inconsistent")
        if self.sat < 0.0:
            raise ValueError("saturation must be non-negative")

    @classmethod
    def from_mhz(cls, gamma_mhz: float = DEFAULT_GAMMA_MHZ, delta_mhz: float = 0.0,
                 rabi_mhz: float = None, sat: float = None) -> "AtomDriveParams":
        rabi = None if rabi_mhz is None else mhz_to_angular(rabi_mhz)
        return cls(gamma=mhz_to_angular(gamma_mhz), delta=mhz_to_angular(delta_mhz),
                   rabi=rabi, sat=sat)

    def with_delta(self, delta: float) -> "AtomDriveParams":
        """Same drive strength (fixed Rabi frequency) at a different detuning."""
        return AtomDriveParams(gamma=self.gamma, delta=delta, rabi=self.rabi)


@dataclass(frozen=True)
class FilterParams:
    """Ring-resonator notch filter.

    Attributes
    ----------
    kappa0 : float
        Intrinsic (round-trip loss) rate of the resonator (rad/s), > 0.
    kappa_ext : float
        External coupling rate into the resonator (rad/s), >= 0.
    res_offset : float
        Angular detuning of the resonance from the drive laser,
        omega_res - omega_L (rad/s).
    """

    kappa0: float
    kappa_ext: float
    res_offset: float = 0.0

    def __post_init__(self):
        if self.kappa0 <= 0.0:
            raise ValueError("kappa0 must be positive")
        if self.kappa_ext < 0.0:
            raise ValueError("kappa_ext must be non-negative")

    @classmethod
    def from_mhz(cls, kappa0_mhz: float, kappa_ext_mhz: float,
                 res_offset_mhz: float = 0.0) -> "FilterParams":
        return cls(kappa0=mhz_to_angular(kappa0_mhz),
                   kappa_ext=mhz_to_angular(kappa_ext_mhz),
                   res_offset=mhz_to_angular(res_offset_mhz))

    def with_kappa_ext(self, kappa_ext: float) -> "FilterParams":
        return FilterParams(self.kappa0, kappa_ext, self.res_offset)

    def with_offset(self, res_offset: float) -> "FilterParams":
        return FilterParams(self.kappa0, self.kappa_ext, res_offset)


@dataclass(frozen=True)
class DetectionParams:
    """Total single-photon detection efficiency and background count rate."""

    eta: float
    dark_rate: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.dark_rate < 0.0:
            raise ValueError("dark_rate must be non-negative")
