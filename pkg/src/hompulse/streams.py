"""Counter-based random streams keyed by (seed, scan point, trial).

Each trial owns a fixed block of :data:`DRAWS_PER_TRIAL` 64-bit words from
a Philox4x64 generator whose key is ``(seed, scan_point_index)`` and whose
counter starts at ``trial_index * BLOCKS_PER_TRIAL``. The words a trial
sees therefore never depend on how many trials are drawn, on chunking, or
on the order in which points are evaluated.
"""

from __future__ import annotations

import numpy as np

DRAWS_PER_TRIAL = 8
# Philox4x64 emits four words per counter increment
BLOCKS_PER_TRIAL = DRAWS_PER_TRIAL // 4

# column layout of one trial's draws
PHASE = 0
NOISE_U1 = 1
NOISE_U2 = 2
CLICK_D1_I = 3
CLICK_D2_I = 4
CLICK_D2_J = 5
INTENSITY_A = 6
INTENSITY_B = 7

_UINT64_MAX = 2**64 - 1
_TO_UNIT = 2.0**-53


def _check_word(value: int, name: str) -> int:
    value = int(value)
    if not 0 <= value <= _UINT64_MAX:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")
    return value


def trial_uniforms(seed: int, point: int, first_trial: int, n_trials: int) -> np.ndarray:
    """Uniform [0, 1) draws of shape ``(n_trials, DRAWS_PER_TRIAL)``."""
    seed = _check_word(seed, "seed")
    point = _check_word(point, "scan point index")
    first_trial = _check_word(first_trial, "trial index")
    if n_trials < 0:
        raise ValueError("n_trials must be >= 0")
    bitgen = np.random.Philox(key=[seed, point])
    if first_trial:
        bitgen.advance(first_trial * BLOCKS_PER_TRIAL)
    raw = bitgen.random_raw(n_trials * DRAWS_PER_TRIAL).reshape(n_trials, DRAWS_PER_TRIAL)
    return (raw >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def standard_normal(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Box-Muller transform of two [0, 1) uniform arrays."""
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    return radius * np.cos(2.0 * np.pi * u2)
