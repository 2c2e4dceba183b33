"""Biphoton path amplitudes for a D1 (slot i) / D2 (slot j) coincidence.

Four two-photon histories end in such a coincidence:

* ``A`` - the slot-i photon of input A reaches D1, the slot-j photon of B reaches D2
* ``B`` - the exchanged pairing: B(i) to D1, A(j) to D2
* ``C`` - both photons come from input A
* ``D`` - both photons come from input B

Histories in the same distinguishability class add as amplitudes, the
others add as probabilities. Beamsplitter factors follow the field
convention of :mod:`hompulse.field`: transmission ``1/sqrt(2)`` (A to C,
B to D) and reflection ``i/sqrt(2)`` (A to D, B to C).

The second half of the module is an independent check: a truncated
two-mode Fock-space treatment of the same beamsplitter.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

T = 1 / math.sqrt(2.0)
R = 1j / math.sqrt(2.0)


class PathLabel(enum.Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"


@dataclass(frozen=True)
class PathAmplitude:
    label: PathLabel
    amplitude: complex
    distinguishability_class: int

    def __post_init__(self):
        if abs(self.amplitude) ** 2 > 1.0 + 1e-12:
            raise ValueError("path probability cannot exceed 1")


@dataclass(frozen=True)
class WeakCoherent:
    """Attenuated laser pulses; ``mu`` photons per pulse in A, ``mu*ratio`` in B."""

    mu: float = 0.1
    ratio: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.mu <= 1.0:
            raise ValueError("weak coherent pulses need 0 < mu <= 1")
        if not 0.0 < self.ratio * self.mu <= 1.0:
            raise ValueError("input B must also be weak: 0 < mu * ratio <= 1")


@dataclass(frozen=True)
class SingleHeralded:
    """One photon per input, with the both-from-one-input histories absent."""


@dataclass(frozen=True)
class SourceModel:
    kind: Union[WeakCoherent, SingleHeralded]
    within_input_coherent: bool = True


def enumerate_paths(source: SourceModel, phase_args: tuple[float, float] = (0.0, 0.0)) -> list[PathAmplitude]:
    """The four biphoton amplitudes for relative phases ``(dphi_i, dphi_j)``.

    Input A is the phase reference in both slots; input B carries
    ``dphi_i`` in slot i and ``dphi_j`` in slot j.
    """
    dphi_i, dphi_j = phase_args
    if isinstance(source.kind, WeakCoherent):
        amp_a = math.sqrt(source.kind.mu)
        amp_b = math.sqrt(source.kind.mu * source.kind.ratio)
        suppress_same_input = False
    elif isinstance(source.kind, SingleHeralded):
        amp_a = amp_b = 1.0
        suppress_same_input = True
    else:
        raise TypeError(f"unknown source kind {source.kind!r}")

    b_i = amp_b * complex(math.cos(dphi_i), math.sin(dphi_i))
    b_j = amp_b * complex(math.cos(dphi_j), math.sin(dphi_j))
    values = {
        PathLabel.A: (T * amp_a) * (T * b_j),
        PathLabel.B: (R * b_i) * (R * amp_a),
        PathLabel.C: (T * amp_a) * (R * amp_a),
        PathLabel.D: (R * b_i) * (T * b_j),
    }
    if suppress_same_input:
        values[PathLabel.C] = values[PathLabel.D] = 0j
    if source.within_input_coherent:
        classes = {PathLabel.A: 0, PathLabel.B: 0, PathLabel.C: 1, PathLabel.D: 2}
    else:
        classes = {PathLabel.A: 0, PathLabel.B: 1, PathLabel.C: 2, PathLabel.D: 3}
    return [PathAmplitude(label, values[label], classes[label]) for label in PathLabel]


def _detuned(path: PathAmplitude, phase_detuning: float) -> complex:
    if path.label is PathLabel.B:
        return path.amplitude * complex(math.cos(phase_detuning), math.sin(phase_detuning))
    return path.amplitude


def coincidence_probability(paths: list[PathAmplitude], phase_detuning: float = 0.0) -> float:
    """Sum over classes of ``|sum of amplitudes in the class|^2``.

    ``phase_detuning`` is an extra phase on history ``B`` relative to ``A``.
    """
    totals: dict[int, complex] = {}
    for path in paths:
        totals[path.distinguishability_class] = (
            totals.get(path.distinguishability_class, 0j) + _detuned(path, phase_detuning)
        )
    return sum(abs(v) ** 2 for v in totals.values())


def baseline_probability(paths: list[PathAmplitude]) -> float:
    """Coincidence probability with every history distinguishable."""
    return sum(abs(p.amplitude) ** 2 for p in paths)


def minimum_probability(paths: list[PathAmplitude]) -> float:
    """Minimum of :func:`coincidence_probability` over the detuning, in closed form."""
    detuned = next(p for p in paths if p.label is PathLabel.B)
    total = 0.0
    for cls in {p.distinguishability_class for p in paths}:
        members = [p for p in paths if p.distinguishability_class == cls]
        rest = abs(sum((p.amplitude for p in members if p is not detuned), 0j))
        if detuned in members:
            total += (rest - abs(detuned.amplitude)) ** 2
        else:
            total += rest**2
    return total


def oracle_visibility(source: SourceModel) -> float:
    """``1 - min P / baseline P`` for the source at zero optical delay."""
    paths = enumerate_paths(source)
    return 1.0 - minimum_probability(paths) / baseline_probability(paths)


# --- truncated Fock-space check -------------------------------------------------

def beamsplitter_fock(state: np.ndarray) -> np.ndarray:
    """Apply the 50:50 beamsplitter to a two-mode Fock amplitude array.

    ``state[n_a, n_b]`` is the amplitude of ``|n_a, n_b>``; the result is
    indexed ``[n_c, n_d]`` and has the same shape. Total photon number is
    conserved, so entries with ``n_a + n_b`` up to ``shape[0] - 1`` map
    exactly onto the output array.
    """
    size = state.shape[0]
    out = np.zeros_like(state, dtype=complex)
    for n_a in range(size):
        for n_b in range(size - n_a):
            amp = state[n_a, n_b]
            if amp == 0:
                continue
            norm = amp / math.sqrt(math.factorial(n_a) * math.factorial(n_b)) * T ** (n_a + n_b)
            # a^dag -> c^dag + i d^dag, b^dag -> i c^dag + d^dag (times 1/sqrt 2 each)
            for k in range(n_a + 1):
                coeff_a = math.comb(n_a, k) * 1j ** (n_a - k)
                for l in range(n_b + 1):
                    coeff = coeff_a * math.comb(n_b, l) * 1j**l
                    p = k + l
                    q = n_a + n_b - p
                    out[p, q] += norm * coeff * math.sqrt(math.factorial(p) * math.factorial(q))
    return out


def coherent_two_mode(alpha: complex, beta: complex, max_total: int = 4) -> np.ndarray:
    """Product coherent state truncated to total photon number ``max_total``."""
    size = max_total + 1
    state = np.zeros((size, size), dtype=complex)
    prefactor = math.exp(-0.5 * (abs(alpha) ** 2 + abs(beta) ** 2))
    for n_a in range(size):
        for n_b in range(size - n_a):
            state[n_a, n_b] = (
                prefactor * alpha**n_a * beta**n_b
                / math.sqrt(math.factorial(n_a) * math.factorial(n_b))
            )
    return state


def output_distribution(alpha: complex, beta: complex, max_total: int = 4) -> np.ndarray:
    """Photon-number distribution ``P[n_c, n_d]`` behind the beamsplitter."""
    return np.abs(beamsplitter_fock(coherent_two_mode(alpha, beta, max_total))) ** 2


def fock_path_probability(source: WeakCoherent, label: PathLabel, max_total: int = 4) -> float:
    """Probability of one history alone: exactly one photon at each detector.

    Only the two input pulses of that history are populated; every other
    pulse is vacuum.
    """
    a = math.sqrt(source.mu)
    b = math.sqrt(source.mu * source.ratio)
    # (slot-i input amplitudes, slot-j input amplitudes)
    inputs = {
        PathLabel.A: ((a, 0), (0, b)),
        PathLabel.B: ((0, b), (a, 0)),
        PathLabel.C: ((a, 0), (a, 0)),
        PathLabel.D: ((0, b), (0, b)),
    }[label]
    slot_i = output_distribution(*inputs[0], max_total)
    slot_j = output_distribution(*inputs[1], max_total)
    # D1 sees exactly one photon in C(i), D2 exactly one in D(j)
    return float(slot_i[1, 0] * slot_j[0, 1])


def _click_c(dist: np.ndarray) -> float:
    return float(dist[1:, :].sum())


def _click_d(dist: np.ndarray) -> float:
    return float(dist[:, 1:].sum())


def fock_visibility(mu: float, within_input_coherent: bool = True, max_total: int = 4,
                    grid: int = 64) -> float:
    """Delayed-coincidence dip visibility of weak coherent pulses from the Fock expansion.

    Threshold detectors, D1 on slot i and D2 on slot j. The relative A-B
    phase of slot i is uniform; slot j repeats it when
    ``within_input_coherent`` and is independent otherwise. The baseline is
    the same measurement with A and B in orthogonal temporal modes.
    """
    alpha = math.sqrt(mu)
    phis = 2.0 * math.pi * np.arange(grid) / grid
    p_c = np.empty(grid)
    p_d = np.empty(grid)
    for k, phi in enumerate(phis):
        dist = output_distribution(alpha, alpha * complex(math.cos(phi), math.sin(phi)), max_total)
        p_c[k] = _click_c(dist)
        p_d[k] = _click_d(dist)
    if within_input_coherent:
        interfering = float(np.mean(p_c * p_d))
    else:
        interfering = float(p_c.mean() * p_d.mean())

    only_a = output_distribution(alpha, 0.0, max_total)
    only_b = output_distribution(0.0, alpha, max_total)
    no_c = only_a[0, :].sum() * only_b[0, :].sum()
    no_d = only_a[:, 0].sum() * only_b[:, 0].sum()
    baseline = (1.0 - no_c) * (1.0 - no_d)
    return 1.0 - interfering / baseline
