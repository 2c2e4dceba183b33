"""Classical field mathematics at a lossless 50:50 beamsplitter.

Conventions
-----------
* Intensities are mean photon numbers per pulse slot (dimensionless).
* Lengths are in micrometres unless a name says otherwise, times in
  nanoseconds, frequencies in MHz.
* The relative phase is ``dphi = phase_B - phase_A (+ 2*pi*delta_l/lambda)``.
  With the field transform ``E_C = (E_A + i E_B)/sqrt(2)`` and
  ``E_D = (i E_A + E_B)/sqrt(2)`` this gives the minus sign on the
  output-C cross term::

      I_C = I_A/2 + I_B/2 - gamma*sqrt(I_A I_B)*sin(dphi)
      I_D = I_A/2 + I_B/2 + gamma*sqrt(I_A I_B)*sin(dphi)

  where ``gamma`` is the mutual-coherence factor of the two pulses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
SPEED_OF_LIGHT_UM_PER_NS = 299_792.458


def wrap_phase(phase):
    """Reduce a phase (scalar or array) to [0, 2*pi)."""
    wrapped = np.mod(phase, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class OpticalField:
    """A pulse in one slot: mean photon number and absolute phase."""

    intensity: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.intensity) and math.isfinite(self.phase)):
            raise ValueError("field intensity and phase must be finite")
        if self.intensity < 0:
            raise ValueError(f"intensity must be >= 0, got {self.intensity}")
        object.__setattr__(self, "phase", wrap_phase(self.phase))

    @property
    def amplitude(self) -> complex:
        return math.sqrt(self.intensity) * complex(math.cos(self.phase), math.sin(self.phase))

    @classmethod
    def from_amplitude(cls, amplitude: complex) -> "OpticalField":
        return cls(abs(amplitude) ** 2, math.atan2(amplitude.imag, amplitude.real))


@dataclass(frozen=True)
class SpectralModel:
    """Gaussian power spectrum given by centre wavelength and FWHM (both nm)."""

    center_wavelength: float = 780.0
    fwhm_bandwidth: float = 15.0
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ValueError(f"unsupported spectral shape {self.shape!r}")
        if not (0.0 < self.fwhm_bandwidth < self.center_wavelength):
            raise ValueError("need 0 < fwhm_bandwidth < center_wavelength")

    @property
    def coherence_length(self) -> float:
        """Half width at half maximum of the coherence envelope, in micrometres."""
        lam_um = self.center_wavelength * 1e-3
        dlam_um = self.fwhm_bandwidth * 1e-3
        return (2.0 * math.log(2.0) / math.pi) * lam_um**2 / dlam_um


@dataclass(frozen=True)
class DelayGeometry:
    """Optical delay, slot structure and wavelength for one scan point.

    ``delta_l`` is in micrometres, ``slot_period`` in ns, ``wavelength`` in nm.
    The electronic delay is ``tau_d = slot_offset_m * slot_period``.
    """

    delta_l: float = 0.0
    slot_period: float = 1e3 / 85.0
    slot_offset_m: int = 0
    wavelength: float = 780.0

    # the scan must stay far inside one slot spacing
    MAX_DELAY_FRACTION = 0.01

    def __post_init__(self):
        if not math.isfinite(self.delta_l):
            raise ValueError("delta_l must be finite")
        if self.slot_period <= 0:
            raise ValueError("slot_period must be > 0")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        if int(self.slot_offset_m) != self.slot_offset_m or self.slot_offset_m < 0:
            raise ValueError("slot_offset_m must be a non-negative integer")
        spacing = self.slot_period * SPEED_OF_LIGHT_UM_PER_NS
        if abs(self.delta_l) > self.MAX_DELAY_FRACTION * spacing:
            raise ValueError(
                f"|delta_l| = {abs(self.delta_l)} um would approach the next pulse slot "
                f"({spacing:.4g} um away)"
            )

    @property
    def tau_d(self) -> float:
        """Electronic delay in ns."""
        return self.slot_offset_m * self.slot_period

    @property
    def delay_phase(self) -> float:
        return wrap_phase(TWO_PI * self.delta_l / (self.wavelength * 1e-3))


def relative_phase(dphi_ab: float, delta_l: float, wavelength: float) -> float:
    """Relative phase of the two inputs including the optical delay term.

    ``delta_l`` and ``wavelength`` must share a length unit.
    """
    if not all(math.isfinite(x) for x in (dphi_ab, delta_l, wavelength)):
        raise ValueError("relative_phase inputs must be finite")
    if wavelength <= 0:
        raise ValueError("wavelength must be > 0")
    # reduce the delay ratio first so whole fringes vanish exactly
    fringes = math.fmod(delta_l / wavelength, 1.0)
    return wrap_phase(dphi_ab + TWO_PI * fringes)


def _intensity(x):
    return x.intensity if isinstance(x, OpticalField) else x


def beamsplitter_intensities(a, b, dphi, gamma=1.0):
    """Output intensities ``(I_C, I_D)`` of the 50:50 beamsplitter.

    ``a`` and ``b`` are :class:`OpticalField` instances or plain (array)
    intensities; ``dphi`` is the relative phase, ``gamma`` the coherence
    factor multiplying the interference term. Works elementwise on arrays.
    """
    if np.any(np.asarray(gamma) < 0) or np.any(np.asarray(gamma) > 1):
        raise ValueError("gamma must lie in [0, 1]")
    i_a = _intensity(a)
    i_b = _intensity(b)
    mean = 0.5 * (i_a + i_b)
    cross = gamma * np.sqrt(i_a * i_b) * np.sin(dphi)
    # AM-GM keeps both outputs >= 0; clip rounding residue only
    i_c = np.maximum(mean - cross, 0.0)
    i_d = np.maximum(mean + cross, 0.0)
    if np.ndim(i_c) == 0:
        return float(i_c), float(i_d)
    return i_c, i_d


def beamsplitter_fields(a: OpticalField, b: OpticalField) -> tuple[OpticalField, OpticalField]:
    """Complex-amplitude form of the beamsplitter (fully coherent inputs)."""
    e_a, e_b = a.amplitude, b.amplitude
    root2 = math.sqrt(2.0)
    e_c = (e_a + 1j * e_b) / root2
    e_d = (1j * e_a + e_b) / root2
    return OpticalField.from_amplitude(e_c), OpticalField.from_amplitude(e_d)


def coherence_envelope(delta_l, spectrum: SpectralModel):
    """Mutual-coherence factor of pulses offset by ``delta_l`` micrometres.

    Gaussian in ``delta_l`` with half width at half maximum
    ``spectrum.coherence_length``; equals 1 at zero delay.
    """
    ratio = np.asarray(delta_l, dtype=float) / spectrum.coherence_length
    gamma = np.exp(-(ratio**2) * math.log(2.0))
    if gamma.ndim == 0:
        return float(gamma)
    return gamma
