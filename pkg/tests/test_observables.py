"""Occupations, momentum expectation, coarse graining, comparisons."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_automaton import (
    ComplexWave,
    DisorderField,
    LatticeConfig,
    MomentumGrid,
    OccupationDistribution,
    OversizedKernelError,
    SmoothingKernel,
    coarse_grain,
    compare_distributions,
    decode_wave,
    encode_wave,
    evolve_wave,
    momentum_expectation,
    occupation_from_complex,
    occupation_probabilities,
)

from conftest import random_field, random_real_wave


class TestOccupations:
    def test_sums_to_one(self, rng):
        cfg = LatticeConfig(0.5, 12, 2)
        wave = random_real_wave(cfg, rng)
        p = occupation_probabilities(wave).p
        assert p.sum() == pytest.approx(1.0, abs=1e-13)
        assert np.all(p >= 0)

    def test_real_and_complex_pictures_agree(self, rng):
        cfg = LatticeConfig(0.5, 12, 2)
        wave = random_real_wave(cfg, rng)
        a = occupation_probabilities(wave).p
        b = occupation_from_complex(decode_wave(wave)).p
        assert np.max(np.abs(a - b)) < 1e-13

    def test_eta_swap_leaves_occupations_alone(self, rng):
        # swapping the two eta components conjugates the complex wave, which
        # cannot change any probability
        cfg = LatticeConfig(0.5, 10, 4)
        field = random_field(cfg, rng, 0.3)
        wave = random_real_wave(cfg, rng)
        from dirac_automaton import RealWave
        swapped = RealWave.from_amplitudes(wave.q[:, ::-1, :].copy(), cfg)
        p1 = occupation_probabilities(evolve_wave(wave, field, 4)).p
        p2 = occupation_probabilities(evolve_wave(swapped, field, 4)).p
        assert np.max(np.abs(p1 - p2)) < 1e-13


class TestMomentum:
    def test_plane_wave_momentum_value(self):
        cfg = LatticeConfig(0.5, 16, 2)
        grid = MomentumGrid(cfg.eps, cfg.m_x)
        k = 3
        x = 2 * cfg.eps * np.arange(cfg.m_x)
        mode = np.exp(1j * grid.momenta[k] * x) / np.sqrt(cfg.m_x)
        phi = np.stack([mode, np.zeros_like(mode)])
        wave = encode_wave(ComplexWave(phi, eps=cfg.eps), cfg)
        assert momentum_expectation(wave, grid) == pytest.approx(
            grid.momenta[k], abs=1e-12)

    def test_conserved_under_free_evolution(self, rng):
        cfg = LatticeConfig(0.5, 16, 100)
        grid = MomentumGrid(cfg.eps, cfg.m_x)
        wave = random_real_wave(cfg, rng)
        before = momentum_expectation(wave, grid)
        after = momentum_expectation(
            evolve_wave(wave, DisorderField.empty(cfg), 100), grid)
        assert after == pytest.approx(before, abs=1e-12)


class TestCoarseGrain:
    def test_kernel_autonormalizes_and_rejects_negatives(self):
        k = SmoothingKernel(offsets=np.array([0, 1]), weights=np.array([0.5, 0.1]))
        assert k.weights.sum() == pytest.approx(1.0)
        with pytest.raises(ValueError):
            SmoothingKernel(offsets=np.array([0, 1]), weights=np.array([0.5, -0.1]))

    def test_oversized_kernel_rejected(self):
        dist = OccupationDistribution(np.full(8, 1 / 8))
        with pytest.raises(OversizedKernelError):
            coarse_grain(dist, SmoothingKernel.uniform(17))

    def test_total_probability_preserved(self, rng):
        p = rng.random(32)
        p /= p.sum()
        for kernel in (SmoothingKernel.uniform(5), SmoothingKernel.triangular(4),
                       SmoothingKernel.delta()):
            out = coarse_grain(OccupationDistribution(p), kernel)
            assert out.p.sum() == pytest.approx(1.0, abs=1e-13)

    def test_delta_kernel_is_identity(self, rng):
        p = rng.random(16)
        p /= p.sum()
        out = coarse_grain(OccupationDistribution(p), SmoothingKernel.delta())
        assert np.array_equal(out.p, p)

    def test_uniform_kernel_over_whole_circle_flattens(self):
        p = np.zeros(8)
        p[3] = 1.0
        out = coarse_grain(OccupationDistribution(p), SmoothingKernel.uniform(8))
        assert np.allclose(out.p, 1 / 8)

    @settings(max_examples=25, deadline=None)
    @given(width=st.integers(1, 8), seed=st.integers(0, 10 ** 6))
    def test_smoothing_is_a_contraction_in_l1(self, width, seed):
        r = np.random.default_rng(seed)
        a, b = r.random(16), r.random(16)
        a /= a.sum()
        b /= b.sum()
        kernel = SmoothingKernel.uniform(width)
        raw = float(np.abs(a - b).sum())
        smooth = float(np.abs(coarse_grain(OccupationDistribution(a), kernel).p
                              - coarse_grain(OccupationDistribution(b), kernel).p).sum())
        assert smooth <= raw + 1e-12


class TestComparisons:
    def test_self_distance_is_zero(self, rng):
        p = rng.random(20)
        p /= p.sum()
        d = OccupationDistribution(p)
        rep = compare_distributions(d, d, n_regions=4)
        assert rep.l1 == 0.0 and rep.l2 == 0.0 and rep.max_abs == 0.0

    def test_l1_value_on_known_pair(self):
        a = OccupationDistribution(np.array([0.5, 0.5, 0.0, 0.0]))
        b = OccupationDistribution(np.array([0.25, 0.25, 0.25, 0.25]))
        rep = compare_distributions(a, b, n_regions=2)
        assert rep.l1 == pytest.approx(1.0)
        assert np.allclose(rep.regions_a, [1.0, 0.0])
        assert np.allclose(rep.regions_b, [0.5, 0.5])

    def test_region_tallies_partition_probability(self, rng):
        p = rng.random(30)
        p /= p.sum()
        rep = compare_distributions(OccupationDistribution(p),
                                    OccupationDistribution(p), n_regions=5)
        assert np.sum(rep.regions_a) == pytest.approx(1.0, abs=1e-13)
