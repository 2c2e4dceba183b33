import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hompulse.field import (
    DelayGeometry,
    OpticalField,
    SpectralModel,
    beamsplitter_fields,
    beamsplitter_intensities,
    coherence_envelope,
    relative_phase,
    wrap_phase,
)

intensities = st.floats(0.0, 1e3, allow_nan=False)
phases = st.floats(-50.0, 50.0, allow_nan=False)
gammas = st.floats(0.0, 1.0)


class TestRelativePhase:
    def test_zero(self):
        assert relative_phase(0.0, 0.0, 780.0) == 0.0

    def test_full_fringe_wraps_to_zero(self):
        assert relative_phase(0.0, 780.0, 780.0) == 0.0

    def test_quarter_wave_adds_quarter_turn(self):
        # pi/3 + 2*pi*195/780 = pi/3 + pi/2
        assert relative_phase(math.pi / 3, 195.0, 780.0) == pytest.approx(5 * math.pi / 6, abs=1e-15)

    def test_negative_delay_reduced(self):
        assert relative_phase(0.0, -195.0, 780.0) == pytest.approx(1.5 * math.pi)

    @pytest.mark.parametrize("bad", [(math.nan, 0, 1), (0, math.inf, 1), (0, 0, math.nan)])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            relative_phase(*bad)

    def test_rejects_nonpositive_wavelength(self):
        with pytest.raises(ValueError):
            relative_phase(0.0, 1.0, 0.0)

    @given(phases, st.floats(-1e4, 1e4), st.floats(1.0, 2000.0))
    def test_range(self, dphi, delta_l, lam):
        out = relative_phase(dphi, delta_l, lam)
        assert 0.0 <= out < 2 * math.pi


def test_wrap_phase_array():
    out = wrap_phase(np.array([-1e-18, 2 * math.pi, 7.0]))
    assert np.all((out >= 0) & (out < 2 * math.pi))


class TestOpticalField:
    def test_phase_reduced(self):
        assert OpticalField(1.0, -math.pi / 2).phase == pytest.approx(1.5 * math.pi)

    def test_negative_intensity_rejected(self):
        with pytest.raises(ValueError):
            OpticalField(-0.1, 0.0)


class TestBeamsplitterIntensities:
    def test_complete_interference(self):
        assert beamsplitter_intensities(1.0, 1.0, math.pi / 2, 1.0) == pytest.approx((0.0, 2.0), abs=1e-15)

    @pytest.mark.parametrize("dphi", [0.0, 0.3, math.pi, 4.0])
    def test_single_input_splits_evenly(self, dphi):
        assert beamsplitter_intensities(OpticalField(1.0), OpticalField(0.0), dphi, 1.0) == (0.5, 0.5)

    def test_sixth_turn(self):
        # sin(pi/6) = 1/2
        assert beamsplitter_intensities(1.0, 1.0, math.pi / 6, 1.0) == pytest.approx((0.5, 1.5))

    def test_gamma_out_of_range(self):
        with pytest.raises(ValueError):
            beamsplitter_intensities(1.0, 1.0, 0.0, 1.5)

    @given(intensities, intensities, phases, gammas)
    def test_energy_conservation(self, i_a, i_b, dphi, gamma):
        i_c, i_d = beamsplitter_intensities(i_a, i_b, dphi, gamma)
        assert i_c + i_d == pytest.approx(i_a + i_b, rel=1e-12, abs=1e-300)

    @given(intensities, intensities, phases, gammas)
    def test_nonnegative(self, i_a, i_b, dphi, gamma):
        i_c, i_d = beamsplitter_intensities(i_a, i_b, dphi, gamma)
        assert i_c >= 0 and i_d >= 0

    @given(intensities, intensities, phases, gammas)
    def test_swap_symmetry(self, i_a, i_b, dphi, gamma):
        # A<->B with sin(dphi) negated exchanges C and D
        i_c, i_d = beamsplitter_intensities(i_a, i_b, dphi, gamma)
        s_c, s_d = beamsplitter_intensities(i_b, i_a, -dphi, gamma)
        assert (s_c, s_d) == pytest.approx((i_d, i_c), rel=1e-12, abs=1e-12)

    def test_vectorized_random_inputs(self):
        rng = np.random.default_rng(11)
        n = 10_000
        i_a, i_b = rng.exponential(1.0, n), rng.exponential(1.0, n)
        i_c, i_d = beamsplitter_intensities(i_a, i_b, rng.uniform(0, 7, n), rng.uniform(0, 1, n))
        assert np.all(i_c >= 0) and np.all(i_d >= 0)
        np.testing.assert_allclose(i_c + i_d, i_a + i_b, rtol=1e-12)


class TestBeamsplitterFields:
    def test_single_input(self):
        c, d = beamsplitter_fields(OpticalField(1.0, 0.0), OpticalField(0.0, 0.0))
        assert (c.intensity, d.intensity) == pytest.approx((0.5, 0.5))

    def test_quarter_turn_sends_everything_to_d(self):
        c, d = beamsplitter_fields(OpticalField(1.0, 0.0), OpticalField(1.0, math.pi / 2))
        assert (c.intensity, d.intensity) == pytest.approx((0.0, 2.0), abs=1e-15)

    def test_agrees_with_intensity_form(self):
        rng = np.random.default_rng(12)
        for _ in range(10_000):
            a = OpticalField(rng.exponential(), rng.uniform(0, 2 * math.pi))
            b = OpticalField(rng.exponential(), rng.uniform(0, 2 * math.pi))
            c, d = beamsplitter_fields(a, b)
            i_c, i_d = beamsplitter_intensities(a, b, b.phase - a.phase, 1.0)
            scale = a.intensity + b.intensity
            assert abs(c.intensity - i_c) <= 1e-12 * scale
            assert abs(d.intensity - i_d) <= 1e-12 * scale


class TestCoherenceEnvelope:
    spectrum = SpectralModel(780.0, 15.0)

    def test_coherence_length(self):
        # (2 ln 2 / pi) * (0.78 um)^2 / 0.015 um
        expected = 2 * math.log(2) / math.pi * 0.78**2 / 0.015
        assert expected == pytest.approx(17.9, abs=0.01)
        assert self.spectrum.coherence_length == pytest.approx(expected, rel=1e-14)

    def test_limits(self):
        assert coherence_envelope(0.0, self.spectrum) == 1.0
        assert coherence_envelope(1e4, self.spectrum) == 0.0
        assert coherence_envelope(-1e4, self.spectrum) == 0.0

    def test_half_at_coherence_length(self):
        assert coherence_envelope(self.spectrum.coherence_length, self.spectrum) == pytest.approx(0.5, abs=1e-15)

    @given(st.floats(-500, 500), st.floats(-500, 500))
    def test_bounded_even_monotone(self, x, y):
        gx = coherence_envelope(x, self.spectrum)
        assert 0.0 <= gx <= 1.0
        assert gx == coherence_envelope(-x, self.spectrum)
        if abs(x) < abs(y):
            assert gx >= coherence_envelope(y, self.spectrum)

    @pytest.mark.parametrize("args", [(780.0, 0.0), (780.0, 800.0), (780.0, -1.0)])
    def test_invalid_spectrum(self, args):
        with pytest.raises(ValueError):
            SpectralModel(*args)


class TestDelayGeometry:
    def test_defaults(self):
        g = DelayGeometry(slot_offset_m=18)
        assert g.slot_period == pytest.approx(11.7647, abs=1e-4)
        assert g.tau_d == pytest.approx(211.76, abs=0.01)

    def test_scan_must_not_reach_next_slot(self):
        with pytest.raises(ValueError):
            DelayGeometry(delta_l=1e6)

    @pytest.mark.parametrize("kwargs", [{"slot_period": 0.0}, {"slot_offset_m": -1}, {"slot_offset_m": 1.5}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            DelayGeometry(**kwargs)
