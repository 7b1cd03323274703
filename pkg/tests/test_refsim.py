"""Tests for the exact outcome-distribution oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qpesim.phase import Phase, parse_phase, phase_from_bits
from qpesim.refsim import (
    best_outcome_mass,
    empirical_vs_exact,
    qpe_distribution_exact,
)
from qpesim.sampling import RngSeed, make_generator

EIGHT_OVER_PI_SQ = 8.0 / math.pi**2


def gen(master=0):
    return make_generator(RngSeed(master))


def midpoint(x: int, n: int) -> Phase:
    """Phase exactly halfway between outcomes x and x+1 of an n-bit register."""
    return Phase((x << (64 - n)) + (1 << (63 - n)))


class TestDistribution:
    def test_exact_phase_is_point_mass(self):
        phi = phase_from_bits((1, 0, 1, 1), 64)
        probs = qpe_distribution_exact(phi, 4).probs
        assert probs[0b1011] == 1.0
        assert np.all(np.delete(probs, 0b1011) < 1e-12)

    def test_single_qubit_direct_sum(self):
        probs = qpe_distribution_exact(parse_phase("0.25"), 1).probs
        assert probs == pytest.approx([0.5, 0.5])

    def test_midpoint_two_point_mass(self):
        dist = qpe_distribution_exact(midpoint(17, 6), 6)
        four_over_pi_sq = 4.0 / math.pi**2
        assert dist.probs[17] == pytest.approx(four_over_pi_sq, abs=1e-3)
        assert dist.probs[18] == pytest.approx(four_over_pi_sq, abs=1e-3)
        assert dist.probs[17] + dist.probs[18] >= EIGHT_OVER_PI_SQ

    def test_probabilities_normalized(self):
        for raw in (0, 123456789, (1 << 64) - 977):
            probs = qpe_distribution_exact(Phase(raw), 7).probs
            assert probs.sum() == pytest.approx(1.0, abs=1e-10)
            assert np.all(probs >= 0.0)

    def test_closed_matches_direct_summation(self):
        for n in range(1, 11):
            for j in range(0, 1024, 11):
                phi = Phase(j << 54)
                closed = qpe_distribution_exact(phi, n, "closed").probs
                direct = qpe_distribution_exact(phi, n, "direct").probs
                assert np.abs(closed - direct).max() <= 1e-10

    def test_shift_invariance(self):
        n = 5
        base = Phase(987654321 << 30)
        reference = qpe_distribution_exact(base, n).probs
        for j in (1, 7, 19):
            shifted = Phase((base.raw + (j << (64 - n))) % (1 << 64))
            rolled = qpe_distribution_exact(shifted, n).probs
            assert np.abs(np.roll(reference, j) - rolled).max() <= 1e-10

    def test_distance_symmetry(self):
        # probs depend only on the circle distance phi - y/2^n: reflecting
        # the phase mirrors the distribution
        n = 6
        phi = Phase(123456789123 << 20)
        mirrored = Phase((-phi.raw) % (1 << 64))
        forward = qpe_distribution_exact(phi, n).probs
        backward = qpe_distribution_exact(mirrored, n).probs
        indices = (-np.arange(1 << n)) % (1 << n)
        assert np.abs(forward - backward[indices]).max() <= 1e-10

    def test_register_cap(self):
        with pytest.raises(ValueError):
            qpe_distribution_exact(Phase(0), 15)
        with pytest.raises(ValueError):
            qpe_distribution_exact(Phase(0), 4, "quadrature")


class TestBestOutcomeMass:
    def test_exact_phase(self):
        phi = phase_from_bits((1, 1, 0), 64)
        assert best_outcome_mass(qpe_distribution_exact(phi, 3), phi) == 1.0

    def test_coarse_grid_floor(self):
        lowest = 1.0
        for j in range(512):
            phi = Phase(j << 55)
            lowest = min(lowest, best_outcome_mass(qpe_distribution_exact(phi, 6), phi))
        assert lowest >= EIGHT_OVER_PI_SQ - 1e-9

    def test_midpoint_is_the_bottleneck(self):
        phi = midpoint(3, 6)
        mass = best_outcome_mass(qpe_distribution_exact(phi, 6), phi)
        assert mass == pytest.approx(0.810732249166, abs=1e-9)


class TestEmpirical:
    def test_exact_phase_zero_distance(self):
        phi = phase_from_bits((0, 1, 1), 64)
        assert empirical_vs_exact(phi, 3, 500, gen(1)) < 1e-12

    def test_midpoint_concentration(self):
        tv = empirical_vs_exact(midpoint(2, 3), 3, 100_000, gen(2))
        assert tv < 0.01

    def test_size_cap(self):
        with pytest.raises(ValueError):
            empirical_vs_exact(Phase(0), 11, 10, gen())
