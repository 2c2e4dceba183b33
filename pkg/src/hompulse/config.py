"""Physical parameters of the two input pulse trains."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import DelayGeometry, SpectralModel

INTENSITY_LAWS = ("constant", "thermal")


@dataclass(frozen=True)
class PulseTrainConfig:
    """Two pulse trains derived from one mode-locked laser.

    Input A carries ``mean_photon_number`` photons per pulse on average and
    input B carries ``intensity_ratio`` times that. With ``"thermal"``
    statistics each input's intensity is exponentially distributed but shared
    by the ``i`` and ``j`` pulses of a trial.
    """

    wavelength: float = 780.0  # nm
    bandwidth: float = 15.0  # nm, FWHM
    repetition_rate: float = 85.0  # MHz
    mean_photon_number: float = 0.1
    intensity_ratio: float = 1.0
    intensity_statistics: str = "constant"

    def __post_init__(self):
        for name in ("wavelength", "bandwidth", "repetition_rate", "mean_photon_number"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        if not (math.isfinite(self.intensity_ratio) and self.intensity_ratio >= 0):
            raise ValueError("intensity_ratio must be >= 0")
        if self.intensity_statistics not in INTENSITY_LAWS:
            raise ValueError(
                f"intensity_statistics must be one of {INTENSITY_LAWS}, got {self.intensity_statistics!r}"
            )
        SpectralModel(self.wavelength, self.bandwidth)

    @property
    def slot_period(self) -> float:
        """Pulse period in ns."""
        return 1e3 / self.repetition_rate

    @property
    def mu_a(self) -> float:
        return self.mean_photon_number

    @property
    def mu_b(self) -> float:
        return self.mean_photon_number * self.intensity_ratio

    def spectrum(self) -> SpectralModel:
        return SpectralModel(self.wavelength, self.bandwidth)

    def geometry(self, delta_l: float, slot_offset_m: int = 0) -> DelayGeometry:
        return DelayGeometry(delta_l, self.slot_period, slot_offset_m, self.wavelength)
