#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" cocycles.py
Description: SL(2,R) cocycles over the torus dynamics. A cocycle pairs the dynamics with a generator, a callable that
maps an (n, d) array of points to the (n, 2, 2) stack of matrices at those points.
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

# Downloaded Libraries #
from baseobjects import BaseObject
import numpy as np

# Local Libraries #
from .dynamics import BasePoint
from .errors import DimensionMismatch, NonpositiveA
from .matrices import identity, inverse_sl2, jacobi_step, sl2_residual, szego_su11, to_sl2
from .samplingmaps import DISK, lattice_interpolate


# Definitions #
# Classes #
# Generators #
class Generator(BaseObject):
    """A map from points of the torus to SL(2,R) matrices."""
    kind = ""

    def __call__(self, points):
        raise NotImplementedError

    def describe(self):
        """Returns a JSON ready description of this generator."""
        return {"kind": self.kind}


class ConstantGenerator(Generator):
    """The same matrix at every point."""
    kind = "constant"

    def __init__(self, matrix):
        self.matrix = np.array(matrix, dtype=float).reshape(2, 2)

    def __call__(self, points):
        return np.broadcast_to(self.matrix, (len(points), 2, 2)).copy()

    def describe(self):
        return {"kind": self.kind, "matrix": self.matrix.tolist()}


class SzegoGenerator(Generator):
    """The Szegő matrices of a disk valued map at z, conjugated into SL(2,R).

    Attributes:
        f (:obj:`SamplingMap`): The Verblunsky sampling map.
        z (:obj:`UnitCirclePhase`): The spectral parameter.
    """
    kind = "szego-sl2"

    def __init__(self, f, z):
        if f.codomain != DISK:
            raise ValueError("Szegő cocycles need a disk valued sampling map")
        self.f = f
        self.z = z

    def __call__(self, points):
        return to_sl2(szego_su11(self.f(points), self.z.psi))

    def describe(self):
        return {"kind": self.kind, "psi": self.z.psi, "f": self.f.describe()}


class JacobiGenerator(Generator):
    """The Jacobi transfer matrices of sampling maps f_a and f_b at the energy E.

    Attributes:
        f_a (:obj:`SamplingMap`): The off-diagonal sampling map, strictly positive.
        f_b (:obj:`SamplingMap`): The diagonal sampling map.
        energy (float): The energy.
    """
    kind = "jacobi"

    def __init__(self, f_a, f_b, energy):
        self.f_a = f_a
        self.f_b = f_b
        self.energy = float(energy)

    def coefficients(self, points):
        """Evaluates (a, b) at the points and checks positivity of a."""
        a = self.f_a(points)
        floor = 0.0 if self.f_a.floor is None else self.f_a.floor
        if np.any(a <= floor):
            raise NonpositiveA(f"the off-diagonal map drops to {np.min(a)} which is not above {floor}")
        return a, self.f_b(points)

    def __call__(self, points):
        a, b = self.coefficients(points)
        return jacobi_step(self.energy, a, b)

    def describe(self):
        return {"kind": self.kind, "energy": self.energy, "f_a": self.f_a.describe(), "f_b": self.f_b.describe()}


class LatticeGenerator(Generator):
    """Matrices given on a uniform lattice, interpolated entrywise and renormalized back to determinant one."""
    kind = "lattice"

    def __init__(self, matrices):
        self.matrices = np.array(matrices, dtype=float)
        if self.matrices.shape[-2:] != (2, 2) or len(set(self.matrices.shape[:-2])) != 1:
            raise DimensionMismatch(f"lattice matrices need shape (res,) * d + (2, 2), got {self.matrices.shape}")

    def __call__(self, points):
        entries = [lattice_interpolate(self.matrices[..., i, j], points) for i in range(2) for j in range(2)]
        matrices = np.stack(entries, axis=-1).reshape(-1, 2, 2)
        det = matrices[:, 0, 0] * matrices[:, 1, 1] - matrices[:, 0, 1] * matrices[:, 1, 0]
        if np.any(det <= 0.0):
            raise ValueError("the interpolated matrices lost their orientation; refine the lattice")
        return matrices / np.sqrt(det)[:, None, None]


class FunctionGenerator(Generator):
    """Wraps a plain function of the points as a generator."""
    kind = "function"

    def __init__(self, function, description=""):
        self.function = function
        self.description = description

    def __call__(self, points):
        return np.asarray(self.function(points), dtype=float)

    def describe(self):
        return {"kind": self.kind, "description": self.description}


# Cocycle #
class Cocycle(BaseObject):
    """The skew-product (T, A) acting on the torus times the plane.

    Attributes:
        dynamics (:obj:`BaseDynamics`): The base dynamics T.
        generator (:obj:`Generator`): The matrix valued map A.
    """

    def __init__(self, dynamics, generator):
        self.dynamics = dynamics
        self.generator = generator

    def __repr__(self):
        return f"Cocycle({self.dynamics!r}, {type(self.generator).__name__})"

    def __call__(self, points):
        """Evaluates the generator at an (n, d) array of points or a BasePoint."""
        if isinstance(points, BasePoint):
            return self.generator(points.as_array())[0]
        return self.generator(np.asarray(points, dtype=float).reshape(-1, self.dynamics.dims))

    def with_generator(self, generator):
        """Creates a cocycle over the same dynamics with another generator."""
        return Cocycle(self.dynamics, generator)

    def iterate_points(self, points, n):
        """Computes A^n at each point of an (m, d) array.

        For n >= 1 this is A(T^(n-1) x) ... A(x), for n = 0 the identity and for n < 0 the inverse of
        A^(-n)(T^n x).

        Args:
            points (:obj:`ndarray`): The points.
            n (int): The iterate.

        Returns:
            :obj:`ndarray`: The (m, 2, 2) stack.
        """
        points = np.asarray(points, dtype=float).reshape(-1, self.dynamics.dims)
        if n < 0:
            return inverse_sl2(self.iterate_points(self.dynamics.iterate(points, n), -n))
        product = identity((len(points),))
        for _ in range(n):
            product = self.generator(points) @ product
            points = self.dynamics.step(points)
        return product

    def iterate(self, x, n):
        """Computes A^n(x) at a single BasePoint."""
        return self.iterate_points(x.as_array(), n)[0]

    def sl2_residual(self, points):
        """The largest |det - 1| of the generated matrices at the points."""
        return sl2_residual(self(points))

    def describe(self):
        """Returns a JSON ready description of this cocycle."""
        return {"dynamics": self.dynamics.describe(), "generator": self.generator.describe()}


# Functions #
def iterate(c, x, n):
    """Computes A^n(x) for a cocycle c at a BasePoint x."""
    return c.iterate(x, n)


def szego_cocycle(dynamics, f, z):
    """Creates the conjugated Szegő cocycle of the map f at z."""
    return Cocycle(dynamics, SzegoGenerator(f, z))


def jacobi_cocycle(dynamics, f_a, f_b, energy):
    """Creates the Jacobi transfer matrix cocycle at the energy E."""
    return Cocycle(dynamics, JacobiGenerator(f_a, f_b, energy))


def constant_cocycle(dynamics, matrix):
    """Creates the cocycle with the same matrix everywhere."""
    return Cocycle(dynamics, ConstantGenerator(matrix))
