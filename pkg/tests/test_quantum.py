import math

import numpy as np
import pytest

from hompulse.quantum import (
    PathAmplitude,
    PathLabel,
    SingleHeralded,
    SourceModel,
    WeakCoherent,
    baseline_probability,
    beamsplitter_fock,
    coherent_two_mode,
    coincidence_probability,
    enumerate_paths,
    fock_path_probability,
    fock_visibility,
    minimum_probability,
    oracle_visibility,
    output_distribution,
)


def by_label(paths):
    return {p.label: p for p in paths}


class TestPaths:
    def test_coherent_magnitudes_equal(self):
        paths = enumerate_paths(SourceModel(WeakCoherent(0.1)))
        for p in paths:
            assert abs(p.amplitude) ** 2 == pytest.approx(0.1**2 / 4, rel=1e-14)

    def test_exchange_paths_cancel(self):
        # t*t and r*r differ by a sign: the two pairings interfere destructively at zero detuning
        p = by_label(enumerate_paths(SourceModel(WeakCoherent(0.1))))
        assert p[PathLabel.A].amplitude + p[PathLabel.B].amplitude == pytest.approx(0.0, abs=1e-16)

    def test_single_photon_has_two_paths(self):
        p = by_label(enumerate_paths(SourceModel(SingleHeralded())))
        assert p[PathLabel.C].amplitude == 0 and p[PathLabel.D].amplitude == 0
        assert abs(p[PathLabel.A].amplitude) ** 2 == pytest.approx(0.25)

    def test_classes(self):
        coherent = [p.distinguishability_class for p in enumerate_paths(SourceModel(WeakCoherent()))]
        incoherent = [p.distinguishability_class for p in enumerate_paths(SourceModel(WeakCoherent(), False))]
        assert coherent == [0, 0, 1, 2]
        assert len(set(incoherent)) == 4

    def test_invalid_sources(self):
        with pytest.raises(ValueError):
            WeakCoherent(0.0)
        with pytest.raises(ValueError):
            WeakCoherent(2.0)
        with pytest.raises(ValueError):
            PathAmplitude(PathLabel.A, 1.5 + 0j, 0)
        with pytest.raises(TypeError):
            enumerate_paths(SourceModel("laser"))


class TestVisibility:
    @pytest.mark.parametrize("source,expected", [
        (SourceModel(SingleHeralded()), 1.0),
        (SourceModel(WeakCoherent(0.1)), 0.5),
        (SourceModel(WeakCoherent(0.1), within_input_coherent=False), 0.0),
    ])
    def test_exact_values(self, source, expected):
        assert oracle_visibility(source) == pytest.approx(expected, abs=1e-15)

    def test_unbalanced_matches_classical_formula(self):
        # |a|=|b|*sqrt2 magnitudes; 2 x y / (x^2 + y^2 + 2 x y) with x = 2y: 4/9
        assert oracle_visibility(SourceModel(WeakCoherent(0.1, 2.0))) == pytest.approx(4 / 9, rel=1e-12)

    def test_detuning_sweep_reaches_minimum(self):
        paths = enumerate_paths(SourceModel(WeakCoherent(0.2)))
        sweep = [coincidence_probability(paths, d) for d in np.linspace(0, 2 * np.pi, 721)]
        assert min(sweep) == pytest.approx(minimum_probability(paths), rel=1e-12)
        assert max(sweep) == pytest.approx(2 * baseline_probability(paths) - minimum_probability(paths), rel=1e-12)

    def test_ceiling_over_random_phases(self):
        rng = np.random.default_rng(21)
        worst = 0.0
        for _ in range(1000):
            phase_args = tuple(rng.uniform(0, 2 * np.pi, 2))
            paths = enumerate_paths(SourceModel(WeakCoherent(rng.uniform(0.001, 1.0))), phase_args)
            worst = max(worst, 1 - minimum_probability(paths) / baseline_probability(paths))
        assert worst <= 0.5 + 1e-12


class TestFock:
    def test_hong_ou_mandel(self):
        state = np.zeros((3, 3), complex)
        state[1, 1] = 1.0
        out = np.abs(beamsplitter_fock(state)) ** 2
        assert out[1, 1] == pytest.approx(0.0, abs=1e-30)
        assert out[2, 0] == pytest.approx(0.5) and out[0, 2] == pytest.approx(0.5)

    def test_unitarity(self):
        rng = np.random.default_rng(22)
        size = 5
        for _ in range(20):
            state = np.zeros((size, size), complex)
            for n_a in range(size):
                for n_b in range(size - n_a):
                    state[n_a, n_b] = complex(*rng.normal(size=2))
            state /= np.linalg.norm(state)
            out = beamsplitter_fock(state)
            assert np.sum(np.abs(out) ** 2) == pytest.approx(1.0, abs=1e-10)
            # photon number conserved block by block
            for total in range(size):
                before = sum(abs(state[k, total - k]) ** 2 for k in range(total + 1))
                after = sum(abs(out[k, total - k]) ** 2 for k in range(total + 1))
                assert after == pytest.approx(before, abs=1e-12)

    def test_coherent_state_maps_to_coherent_state(self):
        # (alpha, beta) -> ((alpha + i beta)/sqrt2, (i alpha + beta)/sqrt2)
        alpha, beta = 0.3, 0.2j
        out = beamsplitter_fock(coherent_two_mode(alpha, beta, 6))
        expected = coherent_two_mode((alpha + 1j * beta) / math.sqrt(2), (1j * alpha + beta) / math.sqrt(2), 6)
        np.testing.assert_allclose(out, expected, atol=1e-14)

    def test_distribution_normalized_to_truncation(self):
        mu = 0.01
        dist = output_distribution(math.sqrt(mu), math.sqrt(mu), 4)
        assert dist.sum() == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("label", list(PathLabel))
    def test_path_magnitudes_to_second_order(self, label):
        for mu in (0.01, 0.1):
            source = WeakCoherent(mu)
            amp = by_label(enumerate_paths(SourceModel(source)))[label].amplitude
            fock = fock_path_probability(source, label)
            # vacuum factors exp(-2 mu) make the correction O(mu) relative, O(mu^3) absolute
            assert fock == pytest.approx(abs(amp) ** 2 * math.exp(-2 * mu), rel=1e-12)
            assert abs(fock - abs(amp) ** 2) <= 2 * mu * abs(amp) ** 2

    def test_visibility_small_mu(self):
        assert fock_visibility(0.01) == pytest.approx(0.5, abs=1e-4)
        assert fock_visibility(0.01, within_input_coherent=False) == pytest.approx(0.0, abs=0.01)

    def test_visibility_correction_shrinks_with_mu(self):
        err_1 = abs(fock_visibility(0.1) - 0.5)
        err_01 = abs(fock_visibility(0.01) - 0.5)
        assert err_01 < err_1 / 5
