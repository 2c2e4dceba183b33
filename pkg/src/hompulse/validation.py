"""Self-check suite behind ``hompulse validate``.

Deterministic identities are checked to floating-point tolerance.
Monte Carlo checks use z-scores against exact expectations, so their
tolerance widens as ``1/sqrt(trials)`` by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import clicksim, correlator, field, quantum
from .config import PulseTrainConfig
from .phase import IndependentRF, Synchronized, phase_pairs_from_uniforms
from . import streams

Z_LIMIT = 3.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rng(seed):
    return np.random.default_rng(seed)


def check_energy_conservation(seed=0, n=10_000):
    rng = _rng(seed)
    i_a, i_b = rng.exponential(1.0, n), rng.exponential(1.0, n)
    dphi, gamma = rng.uniform(0, 2 * np.pi, n), rng.uniform(0, 1, n)
    i_c, i_d = field.beamsplitter_intensities(i_a, i_b, dphi, gamma)
    err = np.max(np.abs(i_c + i_d - i_a - i_b) / (i_a + i_b))
    return CheckResult("energy_conservation", bool(err <= 1e-12), f"max relative error {err:.2e}")


def check_nonnegativity(seed=1, n=10_000):
    rng = _rng(seed)
    i_a, i_b = rng.exponential(1.0, n), rng.exponential(1.0, n)
    i_c, i_d = field.beamsplitter_intensities(i_a, i_b, rng.uniform(0, 2 * np.pi, n), rng.uniform(0, 1, n))
    low = min(i_c.min(), i_d.min())
    return CheckResult("nonnegativity", bool(low >= 0), f"smallest output {low:.3e}")


def check_field_consistency(seed=2, n=10_000):
    rng = _rng(seed)
    worst = 0.0
    for i_a, i_b, p_a, p_b in zip(rng.exponential(1.0, n), rng.exponential(1.0, n),
                                  rng.uniform(0, 2 * np.pi, n), rng.uniform(0, 2 * np.pi, n)):
        a, b = field.OpticalField(i_a, p_a), field.OpticalField(i_b, p_b)
        c, d = field.beamsplitter_fields(a, b)
        i_c, i_d = field.beamsplitter_intensities(a, b, b.phase - a.phase, 1.0)
        scale = i_a + i_b
        worst = max(worst, abs(c.intensity - i_c) / scale, abs(d.intensity - i_d) / scale)
    return CheckResult("field_intensity_consistency", worst <= 1e-12, f"max relative mismatch {worst:.2e}")


def check_classical_ceiling(seed=3, n=10_000):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(n):
        mean_a, mean_b = rng.exponential(1.0, 2)
        excess_a, excess_b = rng.exponential(1.0, 2) * rng.integers(0, 2, 2)
        m = correlator.IntensityMoments(mean_a, mean_b, mean_a**2 + excess_a, mean_b**2 + excess_b)
        worst = max(worst, correlator.classical_visibility(m))
    return CheckResult("classical_visibility_ceiling", worst <= 0.5 + 1e-12, f"largest V_c {worst:.15f}")


def check_cross_slot_reduction(seed=4, n=1_000):
    rng = _rng(seed)
    worst = 0.0
    grid = 16
    for _ in range(n):
        mu_a, mu_b = rng.exponential(1.0, 2)
        phi = rng.uniform(0, 2 * np.pi) + 2 * np.pi * np.arange(grid) / grid
        ones = np.ones(grid)
        ens = correlator.TrialEnsemble(mu_a * ones, mu_a * ones, mu_b * ones, mu_b * ones, phi, phi)
        gamma = rng.uniform()
        cross = correlator.cross_slot_correlation(ens, gamma)
        same = correlator.same_slot_correlation(correlator.IntensityMoments.constant(mu_a, mu_b), 0.5, gamma)
        worst = max(worst, abs(cross - same) / same)
    return CheckResult("cross_slot_reduction", worst <= 1e-12, f"max relative difference {worst:.2e}")


def check_oracle_visibilities():
    values = {
        "single": quantum.oracle_visibility(quantum.SourceModel(quantum.SingleHeralded())),
        "coherent": quantum.oracle_visibility(quantum.SourceModel(quantum.WeakCoherent(0.1))),
        "incoherent": quantum.oracle_visibility(quantum.SourceModel(quantum.WeakCoherent(0.1), False)),
    }
    expected = {"single": 1.0, "coherent": 0.5, "incoherent": 0.0}
    ok = all(abs(values[k] - expected[k]) <= 1e-12 for k in expected)
    return CheckResult("oracle_visibilities", ok, ", ".join(f"{k} {v:.12g}" for k, v in values.items()))


def _z(observed, expected_p, trials):
    p = min(max(expected_p, 1.0 / trials), 1.0 - 1.0 / trials)
    return (observed - trials * expected_p) / math.sqrt(trials * p * (1.0 - p))


def check_phase_uniformity(trials=20_000, seed=5):
    draws = streams.trial_uniforms(seed, 0, 0, trials)
    phase_i, _ = phase_pairs_from_uniforms(IndependentRF(), 0.0, draws)
    tol = Z_LIMIT / math.sqrt(trials)
    mean_sin = float(np.mean(np.sin(phase_i)))
    mean_sin2 = float(np.mean(np.sin(phase_i) ** 2))
    ok = abs(mean_sin) <= tol and abs(mean_sin2 - 0.5) <= tol
    return CheckResult("phase_uniformity", ok,
                       f"<sin> {mean_sin:+.4f}, <sin^2>-1/2 {mean_sin2 - 0.5:+.4f}, tolerance {tol:.4f}")


def check_mc_oracle(trials=20_000, seed=6):
    config = PulseTrainConfig()
    det = clicksim.DetectorModel()
    worst = 0.0
    for m in (0, 18):
        for index, delta_l in enumerate((0.0, 60.0)):
            geometry = config.geometry(delta_l, m)
            point = clicksim.run_point(config, IndependentRF(), geometry, det, trials, (seed, 2 * m + index))
            p = clicksim.expected_click_rates(config, IndependentRF(), geometry, det)[2]
            worst = max(worst, abs(_z(point.coincidences, p, trials)))
    return CheckResult("mc_oracle_agreement", worst <= Z_LIMIT, f"largest |z| {worst:.2f} over 4 points")


def check_fringe_phase(trials=20_000, seed=7):
    config = PulseTrainConfig()
    det = clicksim.DetectorModel()
    process = Synchronized(0.0)
    worst = 0.0
    for index, fraction in enumerate((0.0, 0.125, 0.25, 0.75)):
        geometry = config.geometry(fraction * config.wavelength * 1e-3)
        point = clicksim.run_point(config, process, geometry, det, trials, (seed, index))
        mean_c, mean_d = correlator.singles_expectation(config.mu_a, config.mu_b, process, geometry,
                                                        config.spectrum())
        z_c = _z(point.singles_c, clicksim.click_probability(mean_c, det), trials)
        z_d = _z(point.singles_d, clicksim.click_probability(mean_d, det), trials)
        worst = max(worst, abs(z_c), abs(z_d))
    return CheckResult("mc_oracle_fringe_phase", worst <= Z_LIMIT, f"largest |z| {worst:.2f} over 8 singles")


def run_all(trials: int = 20_000) -> list[CheckResult]:
    return [
        check_energy_conservation(),
        check_nonnegativity(),
        check_field_consistency(),
        check_classical_ceiling(),
        check_cross_slot_reduction(),
        check_oracle_visibilities(),
        check_phase_uniformity(trials),
        check_mc_oracle(trials),
        check_fringe_phase(trials),
    ]
