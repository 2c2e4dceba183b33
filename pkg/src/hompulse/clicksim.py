"""Monte Carlo simulation of detector clicks behind the beamsplitter.

Time is discretized into pulse slots. In every trial the four pulses
``A(i), A(j), B(i), B(j)`` are synthesized, combined at the beamsplitter
slot by slot, and threshold detectors D1 (output C) and D2 (output D)
click with Poissonian probability. D1 always looks at slot ``i``; D2 looks
at slot ``i`` when the electronic delay is zero and at slot ``j`` (``m``
slots later) otherwise. A coincidence is a D1 click together with a D2
click.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import field, streams
from .config import PulseTrainConfig
from .field import DelayGeometry, SpectralModel, coherence_envelope, wrap_phase
from .phase import PhaseProcess, Synchronized, TrialKey, noise_sigma, phase_pairs_from_uniforms

# bounds peak memory of one point at ~CHUNK * 8 doubles per array
CHUNK = 1 << 16


class InsufficientBaselineError(ValueError):
    """The scan does not reach far enough from the dip to measure a baseline."""


@dataclass(frozen=True)
class TrialFields:
    i_a_i: float
    i_a_j: float
    i_b_i: float
    i_b_j: float
    dphi_i: float
    dphi_j: float


@dataclass(frozen=True)
class DetectorModel:
    """Threshold detector without dark counts or dead time."""

    efficiency: float = 0.6

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("detector efficiency must lie in (0, 1]")


@dataclass(frozen=True)
class ScanPoint:
    delta_l: float
    singles_c: int
    singles_d: int
    coincidences: int
    trials: int
    coincidence_rate_stderr: float

    @property
    def rate(self) -> float:
        return self.coincidences / self.trials


@dataclass
class ScanResult:
    points: list[ScanPoint]
    visibility: float = float("nan")
    visibility_stderr: float = float("nan")
    metadata: dict = dc_field(default_factory=dict)

    @property
    def delta_l(self) -> np.ndarray:
        return np.array([p.delta_l for p in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.rate for p in self.points])

    @property
    def stderrs(self) -> np.ndarray:
        return np.array([p.coincidence_rate_stderr for p in self.points])

    @property
    def singles_c(self) -> np.ndarray:
        return np.array([p.singles_c for p in self.points])

    @property
    def singles_d(self) -> np.ndarray:
        return np.array([p.singles_d for p in self.points])


def click_probability(intensity, det: DetectorModel):
    """Probability that a threshold detector fires on a coherent pulse."""
    if np.any(np.asarray(intensity) < 0):
        raise ValueError("intensity must be >= 0")
    p = -np.expm1(-det.efficiency * np.asarray(intensity, dtype=float))
    if p.ndim == 0:
        return float(p)
    return p


def _intensities(config: PulseTrainConfig, draws: np.ndarray):
    n = draws.shape[0]
    if config.intensity_statistics == "thermal":
        i_a = -config.mu_a * np.log1p(-draws[:, streams.INTENSITY_A])
        i_b = -config.mu_b * np.log1p(-draws[:, streams.INTENSITY_B])
    else:
        i_a = np.full(n, config.mu_a)
        i_b = np.full(n, config.mu_b)
    # same input, same intensity in slots i and j
    return i_a, i_a, i_b, i_b


def _fields_from_uniforms(config, process, geometry, draws):
    i_a_i, i_a_j, i_b_i, i_b_j = _intensities(config, draws)
    ab_i, ab_j = phase_pairs_from_uniforms(process, geometry.tau_d, draws)
    # the delay stage moves the whole B train, so both slots get the same shift
    shift = geometry.delay_phase
    return i_a_i, i_a_j, i_b_i, i_b_j, wrap_phase(ab_i + shift), wrap_phase(ab_j + shift)


def synthesize_trial(config: PulseTrainConfig, process: PhaseProcess,
                     geometry: DelayGeometry, key: TrialKey) -> TrialFields:
    """The four pulse intensities and two relative phases of one trial."""
    draws = streams.trial_uniforms(key.seed, key.scan_point_index, key.trial_index, 1)
    values = _fields_from_uniforms(config, process, geometry, draws)
    return TrialFields(*(float(v[0]) for v in values))


def _count_chunk(config, process, geometry, det, gamma, draws):
    i_a_i, i_a_j, i_b_i, i_b_j, dphi_i, dphi_j = _fields_from_uniforms(config, process, geometry, draws)
    i_c_i, i_d_i = field.beamsplitter_intensities(i_a_i, i_b_i, dphi_i, gamma)
    d1 = draws[:, streams.CLICK_D1_I] < click_probability(i_c_i, det)
    if geometry.slot_offset_m == 0:
        d2 = draws[:, streams.CLICK_D2_I] < click_probability(i_d_i, det)
    else:
        _, i_d_j = field.beamsplitter_intensities(i_a_j, i_b_j, dphi_j, gamma)
        d2 = draws[:, streams.CLICK_D2_J] < click_probability(i_d_j, det)
    return int(d1.sum()), int(d2.sum()), int(np.count_nonzero(d1 & d2))


def run_point(config: PulseTrainConfig, process: PhaseProcess, geometry: DelayGeometry,
              det: DetectorModel, trials: int, key_base: tuple[int, int]) -> ScanPoint:
    """Simulate ``trials`` repetitions at one optical delay.

    ``key_base`` is ``(seed, scan_point_index)``; trial ``t`` uses the
    stream addressed by ``TrialKey(seed, scan_point_index, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seed, point_index = key_base
    gamma = coherence_envelope(geometry.delta_l, config.spectrum())
    singles_c = singles_d = coincidences = 0
    for start in range(0, trials, CHUNK):
        n = min(CHUNK, trials - start)
        draws = streams.trial_uniforms(seed, point_index, start, n)
        c, d, cc = _count_chunk(config, process, geometry, det, gamma, draws)
        singles_c += c
        singles_d += d
        coincidences += cc
    rate = coincidences / trials
    stderr = math.sqrt(rate * (1.0 - rate) / trials)
    return ScanPoint(float(geometry.delta_l), singles_c, singles_d, coincidences, trials, stderr)


def scan_positions(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start + step, ..., stop`` computed without drift."""
    if step <= 0 or not start < stop:
        raise ValueError("need step > 0 and start < stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # + 0.0 turns a rounded -0.0 into 0.0
    return np.round(start + step * np.arange(count), 12) + 0.0


def run_scan(config: PulseTrainConfig, process: PhaseProcess, delta_ls, slot_offset_m: int,
             det: DetectorModel, trials: int, seed: int, threads: int = 1) -> ScanResult:
    """Simulate every delay in ``delta_ls``; results are independent of ``threads``."""
    geometries = [config.geometry(float(x), slot_offset_m) for x in delta_ls]

    def work(index):
        return run_point(config, process, geometries[index], det, trials, (seed, index))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(work, range(len(geometries))))
    else:
        points = [work(k) for k in range(len(geometries))]
    return ScanResult(points)


def estimate_visibility(curve: list[ScanPoint], spectrum: SpectralModel,
                        centre: float | None = None) -> tuple[float, float]:
    """Dip visibility ``(C_base - C_min) / C_base`` and its standard error.

    ``centre`` is the dip position when it is known in advance, e.g. zero
    delay calibrated from the white-light fringe envelope. Otherwise it is
    the minimum of the rates smoothed with the expected dip shape (squared
    coherence envelope); on a curve without a dip that choice follows the
    noise and biases V upward. Points more
    than three coherence lengths from it form the baseline (plain mean).
    The remaining points are fitted by weighted least squares to
    ``a - b * gamma(delta_l - centre)^2``, the dip shape of the coherence
    envelope, and ``C_min = a - b``.
    """
    if len(curve) < 3:
        raise InsufficientBaselineError("need at least 3 scan points")
    order = np.argsort([p.delta_l for p in curve])
    x = np.array([curve[k].delta_l for k in order])
    rates = np.array([curve[k].rate for k in order])
    trials = np.array([curve[k].trials for k in order], dtype=float)
    # zero-count points still carry the resolution of one count
    variances = np.maximum(rates, 1.0 / trials) * np.maximum(1.0 - rates, 1.0 / trials) / trials

    l_c = spectrum.coherence_length
    if centre is None:
        # matched filter: locate the dip by its expected shape, not by one noisy point
        kernel = coherence_envelope(x[:, None] - x[None, :], spectrum) ** 2
        smoothed = (kernel @ rates) / kernel.sum(axis=1)
        reach = (x - x[0] >= l_c) & (x[-1] - x >= l_c)
        candidates = np.flatnonzero(reach) if reach.any() else np.arange(len(x))
        centre = x[candidates[np.argmin(smoothed[candidates])]]

    far = np.abs(x - centre) > 3.0 * l_c
    if far.sum() < 5:
        raise InsufficientBaselineError(
            f"only {int(far.sum())} scan points lie beyond 3 coherence lengths "
            f"({3 * l_c:.1f} um) of the dip; need 5"
        )
    base = rates[far].mean()
    base_var = variances[far].sum() / far.sum() ** 2
    if base <= 0:
        raise InsufficientBaselineError("baseline coincidence rate is zero")

    near = ~far
    shape = coherence_envelope(x[near] - centre, spectrum) ** 2
    design = np.column_stack([np.ones(near.sum()), -shape])
    w = 1.0 / variances[near]
    normal = design.T @ (design * w[:, None])
    cov = np.linalg.inv(normal)
    a, b = cov @ (design.T @ (w * rates[near]))
    floor = a - b
    floor_var = cov[0, 0] + cov[1, 1] - 2.0 * cov[0, 1]

    visibility = (base - floor) / base
    stderr = math.sqrt(floor_var / base**2 + floor**2 * base_var / base**4)
    return float(visibility), float(stderr)


def fringe_visibility(counts) -> float:
    """``(max - min) / (max + min)`` of a singles curve."""
    counts = np.asarray(counts, dtype=float)
    top, bottom = counts.max(), counts.min()
    return float((top - bottom) / (top + bottom)) if top + bottom > 0 else 0.0


def expected_click_rates(config: PulseTrainConfig, process: PhaseProcess, geometry: DelayGeometry,
                         det: DetectorModel, grid: int = 128) -> tuple[float, float, float]:
    """Exact per-trial probabilities ``(D1 click, D2 click, coincidence)``.

    Integrates the click model over the phase distribution on a periodic
    grid instead of sampling it. The slot-j noise is applied as a Fourier
    multiplier (wrapped Gaussian), so the result is spectrally accurate.
    Constant intensities only.
    """
    if config.intensity_statistics != "constant":
        raise NotImplementedError("exact click rates are implemented for constant intensities")
    gamma = coherence_envelope(geometry.delta_l, config.spectrum())
    mu_a, mu_b = config.mu_a, config.mu_b
    if isinstance(process, Synchronized):
        dphi = process.phi0 + geometry.delay_phase
        i_c, i_d = field.beamsplitter_intensities(mu_a, mu_b, dphi, gamma)
        p_c, p_d = click_probability(i_c, det), click_probability(i_d, det)
        return p_c, p_d, p_c * p_d

    phi = 2.0 * np.pi * np.arange(grid) / grid
    i_c, i_d = field.beamsplitter_intensities(mu_a, mu_b, phi, gamma)
    p_c = click_probability(i_c, det)
    p_d = click_probability(i_d, det)
    if geometry.slot_offset_m == 0:
        return float(p_c.mean()), float(p_d.mean()), float((p_c * p_d).mean())
    # slot j phase = slot i phase + dphi_ij + xi; average p_D over that shift
    sigma = noise_sigma(process, geometry.tau_d)
    harmonics = np.fft.fftfreq(grid, d=1.0 / grid)
    multiplier = np.exp(1j * harmonics * process.dphi_ij - 0.5 * (harmonics * sigma) ** 2)
    p_d_shifted = np.fft.ifft(np.fft.fft(p_d) * multiplier).real
    return float(p_c.mean()), float(p_d.mean()), float((p_c * p_d_shifted).mean())
