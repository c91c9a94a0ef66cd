#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_matrices.py
Description: Tests for the 2x2 matrix algebra, the Szegő and Jacobi matrices and the S' and J classes.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Prototype"

# Default Libraries #
import math

# Downloaded Libraries #
import numpy as np
import pytest

# Local Libraries #
import src.cocyclegaps as cocyclegaps


# Definitions #
SAMPLES = 10000


# Functions #
@pytest.fixture
def rng():
    return np.random.default_rng(2021)


def random_alphas(rng, n, radius=0.95):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * math.pi * rng.random(n))


# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None


class TestSzego(ClassTest):
    def test_identity(self):
        assert np.allclose(cocyclegaps.szego_su11(0.0, 0.0), np.eye(2), atol=1e-15)

    def test_diagonal(self):
        assert np.allclose(cocyclegaps.szego_su11(0.0, math.pi), np.diag([1j, -1j]), atol=1e-15)

    def test_real_alpha(self):
        expected = np.array([[1.154701, -0.577350], [-0.577350, 1.154701]])
        assert np.allclose(cocyclegaps.szego_su11(0.5, 0.0), expected, atol=1e-6)

    def test_alpha_out_of_disk(self):
        with pytest.raises(cocyclegaps.AlphaOutOfDisk):
            cocyclegaps.szego_su11(1.0, 0.0)
        with pytest.raises(cocyclegaps.AlphaOutOfDisk):
            cocyclegaps.szego_sl2_matrix(0.9999999999, 0.0)

    def test_su11_relation(self, rng):
        m = cocyclegaps.szego_su11(random_alphas(rng, SAMPLES), 2.0 * math.pi * rng.random(SAMPLES))
        assert cocyclegaps.su11_residual(m) <= 1e-12
        assert float(np.max(np.abs(cocyclegaps.determinant(m) - 1.0))) <= 1e-12


class TestConjugation(ClassTest):
    def test_identity(self):
        assert np.allclose(cocyclegaps.to_sl2(np.eye(2, dtype=complex)), np.eye(2), atol=1e-15)

    def test_quarter_rotation(self):
        assert np.allclose(cocyclegaps.to_sl2(np.diag([1j, -1j])), [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)

    def test_szego_closed_form(self):
        m = cocyclegaps.to_sl2(cocyclegaps.szego_su11(0.5, 0.0))
        assert np.allclose(m, np.diag([0.577350, 1.732051]), atol=1e-6)

    def test_rejects_non_su11(self):
        with pytest.raises(cocyclegaps.NotSU11):
            cocyclegaps.to_sl2(np.array([[1.0, 1j], [0.0, 1.0]]))

    def test_homomorphism(self, rng):
        psis = 2.0 * math.pi * rng.random((2, SAMPLES))
        first = cocyclegaps.szego_su11(random_alphas(rng, SAMPLES), psis[0])
        second = cocyclegaps.szego_su11(random_alphas(rng, SAMPLES), psis[1])
        product = cocyclegaps.to_sl2(first @ second)
        assert float(np.max(np.abs(product - cocyclegaps.to_sl2(first) @ cocyclegaps.to_sl2(second)))) <= 1e-11

    def test_round_trip(self, rng):
        m = cocyclegaps.szego_su11(random_alphas(rng, 100), 2.0 * math.pi * rng.random(100))
        assert np.allclose(cocyclegaps.from_sl2(cocyclegaps.to_sl2(m)), m, atol=1e-12)


class TestSPrime(ClassTest):
    class_ = cocyclegaps.SPrimeParams

    def test_zero_radius(self):
        params = cocyclegaps.szego_sl2(0.0, 0.7, cocyclegaps.UnitCirclePhase(math.pi))
        assert params.s == 0.0
        assert params.theta_prime == pytest.approx(math.pi / 2)
        assert params.theta == pytest.approx(math.pi / 2 + 0.7)
        assert np.allclose(params.realize(), cocyclegaps.rotation(math.pi / 2), atol=1e-15)

    def test_matches_conjugation(self):
        params = cocyclegaps.szego_sl2(0.5, 0.0, cocyclegaps.UnitCirclePhase(0.0))
        assert np.allclose(params.realize(), np.diag([0.577350, 1.732051]), atol=1e-6)

    def test_two_paths(self, rng):
        for _ in range(100):
            r, phi, psi = 0.95 * rng.random(), 2.0 * math.pi * rng.random(), 2.0 * math.pi * rng.random()
            direct = cocyclegaps.szego_sl2(r, phi, cocyclegaps.UnitCirclePhase(psi)).realize()
            conjugated = cocyclegaps.to_sl2(cocyclegaps.szego_su11(r * np.exp(1j * phi), psi))
            assert float(np.max(np.abs(direct - conjugated))) <= 1e-12

    def test_radius_out_of_range(self):
        with pytest.raises(cocyclegaps.ROutOfRange):
            cocyclegaps.szego_sl2(1.0, 0.0, cocyclegaps.UnitCirclePhase(0.0))
        with pytest.raises(cocyclegaps.ROutOfRange):
            self.class_(-0.1, 0.0, 0.0)

    def test_reflection_rotation(self, rng):
        theta, gamma = 2.0 * math.pi * rng.random((2, SAMPLES))
        left = cocyclegaps.reflection(theta) @ cocyclegaps.rotation(gamma)
        assert float(np.max(np.abs(left - cocyclegaps.reflection(theta + gamma)))) <= 1e-14

    def test_trace(self, rng):
        s = 0.95 * rng.random(SAMPLES)
        theta_prime, theta = 2.0 * math.pi * rng.random((2, SAMPLES))
        m = cocyclegaps.realize_sprime(s, theta_prime, theta)
        expected = 2.0 * np.cos(theta_prime) / np.sqrt(1.0 - s ** 2)
        assert float(np.max(np.abs(cocyclegaps.trace(m) - expected))) <= 1e-12
        assert cocyclegaps.sl2_residual(m) <= 1e-12

    def test_extract_inverts_realize(self):
        params = self.class_(0.4, 0.3, 1.1)
        block = cocyclegaps.sprime_extract(params.realize(), 0.4, 0.3)
        assert np.allclose(block, cocyclegaps.reflection(1.1), atol=1e-13)

    def test_extract_known_values(self):
        block = cocyclegaps.sprime_extract(np.diag([0.5, 1.5]) / math.sqrt(0.75), 0.5, 0.0)
        assert np.allclose(block, [[-1.0, 0.0], [0.0, 1.0]], atol=1e-13)

    def test_extract_round_trip(self, rng):
        m = cocyclegaps.realize_sprime(0.3, 0.2, 0.9) + 1e-3 * rng.standard_normal((2, 2))
        block = cocyclegaps.sprime_extract(m, 0.3, 0.2)
        assert float(np.max(np.abs(cocyclegaps.sprime_rebuild(block, 0.3, 0.2) - m))) <= 1e-13

    def test_extract_zero_radius(self):
        with pytest.raises(cocyclegaps.RZero):
            cocyclegaps.sprime_extract(np.eye(2), 0.0, 0.0)

    def test_rotated(self):
        params = self.class_(0.4, 0.3, 1.1).rotated(0.5)
        assert params.theta == pytest.approx(1.6)


class TestJacobi(ClassTest):
    class_ = cocyclegaps.JParams

    def test_zero_energy(self):
        assert np.array_equal(cocyclegaps.jacobi_step(0.0, 1.0, 0.0), [[0.0, -1.0], [1.0, 0.0]])

    def test_energy_three(self):
        assert np.array_equal(cocyclegaps.jacobi_step(3.0, 1.0, 0.0), [[3.0, -1.0], [1.0, 0.0]])

    def test_general(self):
        m = cocyclegaps.jacobi_step(1.0, 2.0, 0.5)
        assert np.allclose(m, [[0.25, -0.5], [2.0, 0.0]], atol=1e-15)
        assert cocyclegaps.determinant(m) == pytest.approx(1.0, abs=1e-15)

    def test_nonpositive_a(self):
        with pytest.raises(cocyclegaps.NonpositiveA):
            cocyclegaps.jacobi_step(0.0, 0.0, 0.0)
        with pytest.raises(cocyclegaps.NonpositiveA):
            self.class_(1.0, -1.0)

    def test_params(self):
        params = self.class_.from_energy(1.0, 2.0, 0.5)
        assert np.allclose(params.realize(), cocyclegaps.jacobi_step(1.0, 2.0, 0.5), atol=1e-15)
        assert params.energy_shift(1.0) == pytest.approx(0.5)
        assert self.class_.from_matrix(params.realize()) == params


class TestNorms(ClassTest):
    def test_singular_values(self, rng):
        m = rng.standard_normal((100, 2, 2))
        largest, smallest = cocyclegaps.singular_values(m)
        expected = np.linalg.svd(m, compute_uv=False)
        assert np.allclose(largest, expected[:, 0], rtol=1e-10)
        assert np.allclose(smallest, expected[:, 1], rtol=1e-9, atol=1e-12)

    def test_inverse(self, rng):
        m = cocyclegaps.realize_sprime(0.5 * rng.random(10), rng.random(10), rng.random(10))
        assert np.allclose(m @ cocyclegaps.inverse_sl2(m), cocyclegaps.identity((10,)), atol=1e-12)

    def test_unit_disk_point(self):
        point = cocyclegaps.UnitDiskPoint.from_complex(0.3j)
        assert point.value == pytest.approx(0.3j)
        with pytest.raises(cocyclegaps.AlphaOutOfDisk):
            cocyclegaps.UnitDiskPoint(1.0)

    def test_unit_circle_phase(self):
        assert cocyclegaps.UnitCirclePhase.wrapped(-math.pi).psi == pytest.approx(math.pi)
        assert cocyclegaps.UnitCirclePhase(math.pi).theta_prime == pytest.approx(math.pi / 2)
        with pytest.raises(ValueError):
            cocyclegaps.UnitCirclePhase(2.0 * math.pi)


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
