#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" matrices.py
Description: Vectorized 2x2 matrix algebra over the reals and complexes. Every function takes stacks of matrices with
shape (..., 2, 2) and stacks of parameters that broadcast against each other.

SL(2,R) and SU(1,1) are conjugate through W = [[1, i], [1, -i]] / sqrt(2). The Szegő matrices live in SU(1,1) and
land in the S' class of SL(2,R); Jacobi transfer matrices are the J class [[t, -1/a], [a, 0]].
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
import dataclasses
import math

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .errors import AlphaOutOfDisk, NonpositiveA, NotSU11, ROutOfRange, RZero


# Definitions #
TWO_PI = 2.0 * math.pi

DISK_MARGIN = 1e-9
SL2_TOLERANCE = 1e-12
SU11_TOLERANCE = 1e-12
IMAGINARY_TOLERANCE = 1e-10
R_FLOOR = 1e-9

W = np.array([[1.0, 1.0j], [1.0, -1.0j]]) / math.sqrt(2.0)
W_INV = W.conj().T
J = np.diag([1.0, -1.0]).astype(complex)


# Functions #
# Basic Matrices #
def identity(shape=(), dtype=float):
    """Creates a stack of identity matrices with the given leading shape."""
    eye = np.zeros(tuple(shape) + (2, 2), dtype=dtype)
    eye[..., 0, 0] = 1.0
    eye[..., 1, 1] = 1.0
    return eye


def assemble(m11, m12, m21, m22):
    """Stacks four broadcastable entry arrays into matrices of shape (..., 2, 2)."""
    m11, m12, m21, m22 = np.broadcast_arrays(m11, m12, m21, m22)
    return np.stack([np.stack([m11, m12], axis=-1), np.stack([m21, m22], axis=-1)], axis=-2)


def rotation(angle):
    """The rotation matrices R_angle = [[cos, -sin], [sin, cos]]."""
    c, s = np.cos(angle), np.sin(angle)
    return assemble(c, -s, s, c)


def reflection(theta):
    """The reflection matrices S(theta) = [[-cos, sin], [sin, cos]]; S(theta) R_gamma = S(theta + gamma)."""
    c, s = np.cos(theta), np.sin(theta)
    return assemble(-c, s, s, c)


def trace(m):
    """The traces of a stack of matrices."""
    return m[..., 0, 0] + m[..., 1, 1]


def determinant(m):
    """The determinants of a stack of matrices."""
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def inverse_sl2(m):
    """The inverses of unimodular matrices through the adjugate."""
    return assemble(m[..., 1, 1], -m[..., 0, 1], -m[..., 1, 0], m[..., 0, 0])


def apply(m, v):
    """Applies a stack of matrices to a stack of 2-vectors."""
    return np.einsum("...ij,...j->...i", m, v)


# Norms #
def singular_values(m):
    """The singular values (largest, smallest) of a stack of real or complex 2x2 matrices, in closed form.

    Args:
        m (:obj:`ndarray`): The (..., 2, 2) stack.

    Returns:
        tuple: The largest and the smallest singular values.
    """
    frobenius = np.sum(np.abs(m) ** 2, axis=(-2, -1))
    det = np.abs(determinant(m))
    root = np.sqrt(np.maximum(frobenius ** 2 - 4.0 * det ** 2, 0.0))
    largest = np.sqrt((frobenius + root) / 2.0)
    smallest = np.divide(det, largest, out=np.zeros_like(largest), where=largest > 0)
    return largest, smallest


def operator_norm(m):
    """The operator 2-norms of a stack of 2x2 matrices."""
    return singular_values(m)[0]


def entry_norm(m00, m01, m10, m11):
    """The operator 2-norms of 2x2 matrices given by their entry arrays, the closed form of singular_values.

    Working on separate entry arrays avoids stacking and unstacking (..., 2, 2) arrays in hot loops.
    """
    entries = (m00, m01, m10, m11)
    if any(np.iscomplexobj(m) for m in entries):
        squares = [m.real * m.real + m.imag * m.imag for m in entries]
    else:
        squares = [m * m for m in entries]
    frobenius = squares[0] + squares[1] + squares[2] + squares[3]
    det = np.abs(m00 * m11 - m01 * m10)
    root = np.sqrt(np.maximum(frobenius * frobenius - 4.0 * det * det, 0.0))
    return np.sqrt(0.5 * (frobenius + root))


def distance(first, second):
    """The largest operator-norm distance between two stacks of matrices."""
    return float(np.max(operator_norm(np.asarray(first) - np.asarray(second)), initial=0.0))


# Invariants #
def sl2_residual(m):
    """The largest |det - 1| over a stack of matrices."""
    return float(np.max(np.abs(determinant(m) - 1.0), initial=0.0))


def su11_residual(m):
    """The largest max-entry residual of M*JM = J over a stack of complex matrices."""
    m = np.asarray(m, dtype=complex)
    product = np.conj(np.swapaxes(m, -1, -2)) @ J @ m
    return float(np.max(np.abs(product - J), initial=0.0))


# Conjugation #
def to_sl2(m):
    """Conjugates SU(1,1) matrices into SL(2,R) by W^-1 M W and drops the imaginary parts.

    Args:
        m (:obj:`ndarray`): The (..., 2, 2) complex stack.

    Returns:
        :obj:`ndarray`: The real stack.
    """
    conjugated = W_INV @ np.asarray(m, dtype=complex) @ W
    residual = float(np.max(np.abs(conjugated.imag), initial=0.0))
    if residual > IMAGINARY_TOLERANCE:
        raise NotSU11(f"the conjugated matrix keeps an imaginary part of {residual:.3e}")
    return conjugated.real.copy()


def from_sl2(m):
    """Conjugates SL(2,R) matrices back into SU(1,1) by W M W^-1."""
    return W @ np.asarray(m, dtype=complex) @ W_INV


# Szegő #
def szego_su11(alpha, psi):
    """The Szegő matrices (z^1/2 sqrt(1 - |alpha|^2))^-1 [[z, -conj(alpha)], [-alpha z, 1]] with z = e^(i psi).

    The branch of the square root is e^(i psi / 2).

    Args:
        alpha: The Verblunsky values, complex, broadcastable against psi.
        psi: The phases of z.

    Returns:
        :obj:`ndarray`: The (..., 2, 2) complex stack in SU(1,1).
    """
    alpha = np.asarray(alpha, dtype=complex)
    modulus = np.abs(alpha)
    if np.any(modulus >= 1.0 - DISK_MARGIN):
        raise AlphaOutOfDisk(f"Verblunsky values must stay inside the disk, got |alpha| = {np.max(modulus):.12f}")
    half = np.exp(0.5j * np.asarray(psi, dtype=float))
    scale = 1.0 / np.sqrt(1.0 - modulus ** 2)
    return assemble(scale * half, -scale * np.conj(alpha) / half, -scale * alpha * half, scale / half)


def realize_sprime(s, theta_prime, theta):
    """The S' matrices (R_theta' + s S(theta)) / sqrt(1 - s^2), vectorized."""
    s = np.asarray(s, dtype=float)
    scale = np.asarray(1.0 / np.sqrt(1.0 - s ** 2))
    return scale[..., None, None] * (rotation(theta_prime) + s[..., None, None] * reflection(theta))


def szego_sl2_matrix(alpha, psi):
    """The conjugated Szegő matrices in closed form, vectorized over alpha and psi."""
    alpha = np.asarray(alpha, dtype=complex)
    r = np.abs(alpha)
    if np.any(r >= 1.0 - DISK_MARGIN):
        raise AlphaOutOfDisk(f"Verblunsky values must stay inside the disk, got |alpha| = {np.max(r):.12f}")
    half_psi = 0.5 * np.asarray(psi, dtype=float)
    return realize_sprime(r, half_psi, half_psi + np.angle(alpha))


def szego_sl2(r, phi, z):
    """Parameterizes the conjugated Szegő matrix of alpha = r e^(i phi) at z directly in the S' form.

    Args:
        r (float): The radius of alpha.
        phi (float): The phase of alpha.
        z (:obj:`UnitCirclePhase`): The spectral parameter.

    Returns:
        :obj:`SPrimeParams`: s = r, theta' = psi/2, theta = psi/2 + phi.
    """
    if not 0.0 <= r < 1.0:
        raise ROutOfRange(f"the radius must lie in [0, 1), got {r}")
    return SPrimeParams(s=r, theta_prime=z.theta_prime, theta=z.theta_prime + phi)


def sprime_extract(m, r, theta_prime):
    """Solves M = (R_theta' + r b) / sqrt(1 - r^2) for the b-block.

    Args:
        m (:obj:`ndarray`): The (..., 2, 2) real stack.
        r: The radii, broadcastable.
        theta_prime: The half phases, broadcastable.

    Returns:
        :obj:`ndarray`: The b-blocks.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < R_FLOOR):
        raise RZero(f"the b-block is undefined for radii below {R_FLOOR}, got {np.min(r)}")
    scale = np.asarray(np.sqrt(1.0 - r ** 2))
    return (scale[..., None, None] * np.asarray(m, dtype=float) - rotation(theta_prime)) / r[..., None, None]


def sprime_rebuild(b_block, r, theta_prime):
    """Inverse of sprime_extract: (R_theta' + r b) / sqrt(1 - r^2)."""
    r = np.asarray(r, dtype=float)
    scale = np.asarray(np.sqrt(1.0 - r ** 2))
    return (rotation(theta_prime) + r[..., None, None] * b_block) / scale[..., None, None]


# Jacobi #
def jacobi_step(energy, a, b):
    """The Jacobi transfer matrices [[(E - b)/a, -1/a], [a, 0]], vectorized.

    Args:
        energy: The energies.
        a: The off-diagonal coefficients, strictly positive.
        b: The diagonal coefficients.

    Returns:
        :obj:`ndarray`: The (..., 2, 2) real stack.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0.0):
        raise NonpositiveA(f"off-diagonal coefficients must be positive, got min {np.min(a)}")
    inverse_a = 1.0 / a
    t = (np.asarray(energy, dtype=float) - np.asarray(b, dtype=float)) * inverse_a
    return assemble(t, -inverse_a, a, np.zeros_like(t))


def j_form(t, a):
    """The J class matrices [[t, -1/a], [a, 0]]."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0.0):
        raise NonpositiveA(f"off-diagonal coefficients must be positive, got min {np.min(a)}")
    t = np.asarray(t, dtype=float)
    return assemble(t, -1.0 / a, a, np.zeros_like(t * a))


# Classes #
@dataclasses.dataclass(frozen=True)
class UnitDiskPoint:
    """A Verblunsky value alpha = r e^(i phi)."""
    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.r < 1.0:
            raise AlphaOutOfDisk(f"the radius must lie in [0, 1), got {self.r}")

    @classmethod
    def from_complex(cls, value):
        """Creates the point from a complex number."""
        return cls(abs(value), float(np.angle(value)))

    @property
    def value(self):
        """complex: r e^(i phi)."""
        return self.r * complex(math.cos(self.phi), math.sin(self.phi))


@dataclasses.dataclass(frozen=True)
class UnitCirclePhase:
    """A spectral parameter z = e^(i psi) on the unit circle, psi in [0, 2 pi)."""
    psi: float

    def __post_init__(self):
        if not 0.0 <= self.psi < TWO_PI:
            raise ValueError(f"the phase must lie in [0, 2 pi), got {self.psi}")

    @classmethod
    def wrapped(cls, psi):
        """Creates the phase after reducing psi into [0, 2 pi)."""
        psi = float(psi) % TWO_PI
        return cls(0.0 if psi >= TWO_PI else psi)

    @property
    def theta_prime(self):
        """float: The half phase psi / 2."""
        return 0.5 * self.psi

    @property
    def z(self):
        """complex: e^(i psi)."""
        return complex(math.cos(self.psi), math.sin(self.psi))


@dataclasses.dataclass(frozen=True)
class SPrimeParams:
    """The parameters of (R_theta' + s S(theta)) / sqrt(1 - s^2)."""
    s: float
    theta_prime: float
    theta: float

    def __post_init__(self):
        if not 0.0 <= self.s < 1.0:
            raise ROutOfRange(f"s must lie in [0, 1), got {self.s}")

    def realize(self):
        """Returns the 2x2 matrix."""
        return realize_sprime(np.float64(self.s), self.theta_prime, self.theta)

    def rotated(self, gamma):
        """The parameters of the matrix times R_gamma on the right of its reflection part."""
        return SPrimeParams(self.s, self.theta_prime, self.theta + gamma)


@dataclasses.dataclass(frozen=True)
class JParams:
    """The parameters of the J class matrix [[t, -1/a], [a, 0]]."""
    t: float
    a: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise NonpositiveA(f"a must be positive, got {self.a}")

    @classmethod
    def from_energy(cls, energy, a, b):
        """Creates the parameters of the Jacobi transfer matrix, t = (E - b) / a."""
        return cls((energy - b) / a, a)

    @classmethod
    def from_matrix(cls, m):
        """Reads t and a off a J class matrix."""
        return cls(float(m[0, 0]), float(m[1, 0]))

    def realize(self):
        """Returns the 2x2 matrix."""
        return j_form(self.t, self.a)

    def energy_shift(self, energy):
        """The diagonal coefficient b = E - t a this matrix represents at energy E."""
        return energy - self.t * self.a
