"""Closed-form intensity correlations behind the two detectors.

Everything here is an expectation over the phase and intensity
distributions, evaluated analytically. It is the reference the Monte
Carlo click simulator is checked against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .config import PulseTrainConfig
from .field import DelayGeometry, SpectralModel, coherence_envelope
from .phase import IndependentRF, IndependentRFWithFMNoise, PhaseProcess, Synchronized, noise_sigma


class UndefinedVisibilityError(ValueError):
    """Raised when both inputs are dark and no visibility can be formed."""


@dataclass(frozen=True)
class IntensityMoments:
    """First and second moments of the two input intensities."""

    mean_a: float
    mean_b: float
    second_a: float
    second_b: float

    def __post_init__(self):
        values = (self.mean_a, self.mean_b, self.second_a, self.second_b)
        if any(not math.isfinite(v) or v < 0 for v in values):
            raise ValueError("intensity moments must be finite and >= 0")
        for mean, second, name in ((self.mean_a, self.second_a, "A"), (self.mean_b, self.second_b, "B")):
            # relative slack for moments estimated in floating point
            if second < mean * mean * (1.0 - 1e-12):
                raise ValueError(f"<I_{name}^2> must be >= <I_{name}>^2")

    @classmethod
    def constant(cls, mu_a: float, mu_b: float | None = None) -> "IntensityMoments":
        mu_b = mu_a if mu_b is None else mu_b
        return cls(mu_a, mu_b, mu_a * mu_a, mu_b * mu_b)

    @classmethod
    def thermal(cls, mu_a: float, mu_b: float | None = None) -> "IntensityMoments":
        mu_b = mu_a if mu_b is None else mu_b
        return cls(mu_a, mu_b, 2 * mu_a * mu_a, 2 * mu_b * mu_b)

    @classmethod
    def for_config(cls, config: PulseTrainConfig) -> "IntensityMoments":
        if config.intensity_statistics == "thermal":
            return cls.thermal(config.mu_a, config.mu_b)
        return cls.constant(config.mu_a, config.mu_b)


class CoherenceRegime(enum.Enum):
    """Whether the slot-i/slot-j phase product averages to 1/2 or to 0."""

    INTERFERING = "interfering"
    NON_INTERFERING = "non_interfering"

    @property
    def sin_product(self) -> float:
        return 0.5 if self is CoherenceRegime.INTERFERING else 0.0


def _correlation(m: IntensityMoments, phase_term: float, gamma: float) -> float:
    base = 0.25 * m.second_a + 0.25 * m.second_b + 0.5 * m.mean_a * m.mean_b
    return base - gamma * gamma * phase_term * m.mean_a * m.mean_b


def same_slot_correlation(m: IntensityMoments, sin2_mean: float, gamma: float = 1.0) -> float:
    """``<I_C I_D>`` for two pulses meeting at the beamsplitter.

    ``sin2_mean`` is the average of ``sin^2`` of the relative phase: 1/2 for
    a randomized phase, 0 when the interference term is absent, and
    ``sin^2(dphi)`` for a fixed phase.
    """
    if not 0.0 <= sin2_mean <= 1.0:
        raise ValueError("sin2_mean must lie in [0, 1]")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    return _correlation(m, sin2_mean, gamma)


def sin_product_mean(dphi_ij: float = 0.0, noise_sigma: float = 0.0) -> float:
    """``<sin dphi(i) sin dphi(j)>`` for a uniform slot-i phase.

    Slot ``j`` carries the slot-i phase shifted by ``dphi_ij`` plus a
    zero-mean Gaussian of width ``noise_sigma``.
    """
    return 0.5 * math.cos(dphi_ij) * math.exp(-0.5 * noise_sigma * noise_sigma)


@dataclass(frozen=True)
class TrialEnsemble:
    """A weighted collection of trials (the four intensities and two phases).

    Weights default to uniform; any discrete distribution over trials,
    e.g. a quadrature grid, can be expressed this way.
    """

    i_a_i: np.ndarray
    i_a_j: np.ndarray
    i_b_i: np.ndarray
    i_b_j: np.ndarray
    dphi_i: np.ndarray
    dphi_j: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        arrays = [np.asarray(getattr(self, f), dtype=float) for f in
                  ("i_a_i", "i_a_j", "i_b_i", "i_b_j", "dphi_i", "dphi_j")]
        shape = arrays[0].shape
        if any(a.shape != shape for a in arrays):
            raise ValueError("ensemble arrays must share one shape")
        if any(np.any(a < 0) for a in arrays[:4]):
            raise ValueError("ensemble intensities must be >= 0")
        for name, a in zip(("i_a_i", "i_a_j", "i_b_i", "i_b_j", "dphi_i", "dphi_j"), arrays):
            object.__setattr__(self, name, a)
        if self.weights is None:
            w = np.full(shape, 1.0 / max(arrays[0].size, 1))
        else:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != shape or np.any(w < 0) or w.sum() <= 0:
                raise ValueError("weights must be non-negative, match the ensemble and not all vanish")
            w = w / w.sum()
        object.__setattr__(self, "weights", w)

    def mean(self, values) -> float:
        return float(np.sum(self.weights * values))


def cross_slot_correlation(ensemble: TrialEnsemble, gamma: float = 1.0) -> float:
    """``<I_C(i) I_D(j)>`` for pulses from different slots, term by term.

    The four intensity products enter with weight 1/4 and the interference
    term is ``gamma^2 <sqrt(I_A(i) I_A(j) I_B(i) I_B(j))> <sin dphi(i) sin dphi(j)>``,
    i.e. intensities and phases are averaged separately. Terms linear in
    ``sin dphi`` are dropped, which requires a randomized phase.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    e = ensemble
    direct = 0.25 * (
        e.mean(e.i_a_i * e.i_a_j)
        + e.mean(e.i_a_i * e.i_b_j)
        + e.mean(e.i_b_i * e.i_a_j)
        + e.mean(e.i_b_i * e.i_b_j)
    )
    amplitude = e.mean(np.sqrt(e.i_a_i * e.i_a_j * e.i_b_i * e.i_b_j))
    phases = e.mean(np.sin(e.dphi_i) * np.sin(e.dphi_j))
    return direct - gamma * gamma * amplitude * phases


def classical_visibility(m: IntensityMoments) -> float:
    """Largest dip visibility the classical field model allows for these moments."""
    denominator = m.second_a + m.second_b + 2.0 * m.mean_a * m.mean_b
    if denominator <= 0:
        raise UndefinedVisibilityError("visibility undefined when both inputs are dark")
    return 2.0 * m.mean_a * m.mean_b / denominator


def dip_contrast(m: IntensityMoments, gamma: float = 1.0) -> float:
    """Relative depth of the same-slot dip, ``(baseline - floor) / baseline``."""
    baseline = same_slot_correlation(m, 0.0)
    if baseline <= 0:
        raise UndefinedVisibilityError("visibility undefined when both inputs are dark")
    return (baseline - same_slot_correlation(m, 0.5, gamma)) / baseline


def _delay_phase(geometry: DelayGeometry) -> float:
    return 2.0 * math.pi * geometry.delta_l / (geometry.wavelength * 1e-3)


def singles_expectation(mu_a: float, mu_b: float, process: PhaseProcess,
                        geometry: DelayGeometry, spectrum: SpectralModel) -> tuple[float, float]:
    """Mean output intensities ``(<I_C>, <I_D>)`` at one scan point."""
    mean = 0.5 * (mu_a + mu_b)
    if isinstance(process, Synchronized):
        gamma = coherence_envelope(geometry.delta_l, spectrum)
        cross = gamma * math.sqrt(mu_a * mu_b) * math.sin(process.phi0 + _delay_phase(geometry))
        return mean - cross, mean + cross
    if isinstance(process, (IndependentRF, IndependentRFWithFMNoise)):
        return mean, mean
    raise TypeError(f"unknown phase process {process!r}")


def phase_term(process: PhaseProcess, geometry: DelayGeometry) -> float:
    """Phase average entering the interference term of the D1/D2 correlation.

    ``<sin^2 dphi>`` when both detectors look at the same slot and
    ``<sin dphi(i) sin dphi(j)>`` otherwise.
    """
    if isinstance(process, Synchronized):
        # both slots see the same fixed phase
        return math.sin(process.phi0 + _delay_phase(geometry)) ** 2
    if isinstance(process, (IndependentRF, IndependentRFWithFMNoise)):
        if geometry.slot_offset_m == 0:
            return 0.5
        return sin_product_mean(process.dphi_ij, noise_sigma(process, geometry.tau_d))
    raise TypeError(f"unknown phase process {process!r}")


def expected_correlation(config: PulseTrainConfig, process: PhaseProcess, geometry: DelayGeometry) -> float:
    """Analytic ``<I_C(s) I_D(s + m)>`` at one scan point.

    Both input trains keep equal intensities in slots ``i`` and ``j``, so
    the terms linear in ``sin dphi`` cancel for every process and the result
    is the same-slot expression with the phase average from
    :func:`phase_term`.
    """
    gamma = coherence_envelope(geometry.delta_l, config.spectrum())
    return _correlation(IntensityMoments.for_config(config), phase_term(process, geometry), gamma)
