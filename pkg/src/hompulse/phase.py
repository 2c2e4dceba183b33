"""Per-trial phase randomization of the two inputs.

Three regimes are modelled:

``Synchronized``
    Both AOMs share one RF drive, so the inherent A-B phase is a fixed
    ``phi0`` in every trial.
``IndependentRF``
    Independent RF drives: the A-B phase of slot ``i`` is uniform on
    [0, 2*pi) and redrawn every trial, while slot ``j`` carries the same
    phase plus a constant ``dphi_ij`` (coherence within each input).
``IndependentRFWithFMNoise``
    As ``IndependentRF`` but slot ``j`` picks up an extra wrapped-Gaussian
    phase whose width grows with the electronic delay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import streams
from .field import TWO_PI, wrap_phase


@dataclass(frozen=True)
class Synchronized:
    phi0: float = 0.0

    def __post_init__(self):
        _finite(self.phi0, "phi0")
        object.__setattr__(self, "phi0", wrap_phase(self.phi0))


@dataclass(frozen=True)
class IndependentRF:
    dphi_ij: float = 0.0

    def __post_init__(self):
        _finite(self.dphi_ij, "dphi_ij")
        object.__setattr__(self, "dphi_ij", wrap_phase(self.dphi_ij))


@dataclass(frozen=True)
class IndependentRFWithFMNoise:
    dphi_ij: float = 0.0
    rf_frequency: float = 40.0
    deviation_fraction: float = 0.5

    def __post_init__(self):
        _finite(self.dphi_ij, "dphi_ij")
        object.__setattr__(self, "dphi_ij", wrap_phase(self.dphi_ij))
        if not (math.isfinite(self.rf_frequency) and self.rf_frequency > 0):
            raise ValueError("rf_frequency must be > 0 (MHz)")
        if not 0.0 <= self.deviation_fraction <= 1.0:
            raise ValueError("deviation_fraction must lie in [0, 1]")


PhaseProcess = Union[Synchronized, IndependentRF, IndependentRFWithFMNoise]


def _finite(value, name):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class TrialKey:
    """Address of one trial's random stream."""

    seed: int
    scan_point_index: int = 0
    trial_index: int = 0


def phase_diffusion_sigma(rf_frequency: float, deviation_fraction: float, tau_d: float) -> float:
    """Standard deviation (rad) of the phase a random FM offset builds up over ``tau_d``.

    The frequency offset is uniform on ``+-deviation_fraction * rf_frequency``
    (standard deviation ``deviation_fraction * rf_frequency / sqrt(3)``).
    ``rf_frequency`` is in MHz and ``tau_d`` in ns.
    """
    if min(rf_frequency, deviation_fraction, tau_d) < 0:
        raise ValueError("phase_diffusion_sigma arguments must be >= 0")
    offset_std_mhz = deviation_fraction * rf_frequency / math.sqrt(3.0)
    return TWO_PI * offset_std_mhz * tau_d * 1e-3


def noise_sigma(process: PhaseProcess, tau_d: float) -> float:
    """Width of the extra slot-``j`` phase noise for ``process`` (0 if none)."""
    if isinstance(process, IndependentRFWithFMNoise):
        return phase_diffusion_sigma(process.rf_frequency, process.deviation_fraction, tau_d)
    return 0.0


def phase_pairs_from_uniforms(process: PhaseProcess, tau_d: float, draws: np.ndarray):
    """Vectorized sampler: map a ``(n, DRAWS_PER_TRIAL)`` uniform block to phase pairs."""
    if tau_d < 0:
        raise ValueError("tau_d must be >= 0")
    n = draws.shape[0]
    if isinstance(process, Synchronized):
        phase = np.full(n, process.phi0)
        return phase, phase.copy()
    if not isinstance(process, (IndependentRF, IndependentRFWithFMNoise)):
        raise TypeError(f"unknown phase process {process!r}")
    phase_i = wrap_phase(TWO_PI * draws[:, streams.PHASE])
    phase_j = phase_i + process.dphi_ij
    sigma = noise_sigma(process, tau_d)
    if sigma > 0:
        xi = sigma * streams.standard_normal(draws[:, streams.NOISE_U1], draws[:, streams.NOISE_U2])
        phase_j = phase_j + xi
    return phase_i, wrap_phase(phase_j)


def sample_phase_pair(process: PhaseProcess, tau_d: float, key: TrialKey) -> tuple[float, float]:
    """Inherent A-B phases ``(dphi_ab_i, dphi_ab_j)`` for the trial addressed by ``key``."""
    draws = streams.trial_uniforms(key.seed, key.scan_point_index, key.trial_index, 1)
    phase_i, phase_j = phase_pairs_from_uniforms(process, tau_d, draws)
    return float(phase_i[0]), float(phase_j[0])
