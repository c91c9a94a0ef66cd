#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" dynamics.py
Description: The base homeomorphisms of the torus (rotations and the skew-shift) and the finite grids that stand in
for the compact base space.
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
import itertools
import typing

# Downloaded Libraries #
from baseobjects import BaseObject
import numpy as np

# Local Libraries #
from .errors import DimensionMismatch, ResolutionTooSmall


# Definitions #
GOLDEN_MEAN = 0.61803398874989485

UNIFORM_LATTICE = "uniform-lattice"
FORWARD_ORBIT = "forward-orbit"


# Functions #
def wrap_sum(points, shift):
    """Adds a shift to phases in [0, 1) and wraps the result back into [0, 1) with a single subtraction.

    Args:
        points (:obj:`ndarray`): Phases in [0, 1).
        shift: Phases in [0, 1) broadcastable against points.

    Returns:
        :obj:`ndarray`: The wrapped sum.
    """
    total = np.asarray(points, dtype=float) + shift
    total = np.where(total >= 1.0, total - 1.0, total)
    return np.where(total >= 1.0, 0.0, total)


def wrap_difference(points, shift):
    """Subtracts a shift from phases in [0, 1) and wraps the result back into [0, 1) with a single addition.

    Args:
        points (:obj:`ndarray`): Phases in [0, 1).
        shift: Phases in [0, 1) broadcastable against points.

    Returns:
        :obj:`ndarray`: The wrapped difference.
    """
    total = np.asarray(points, dtype=float) - shift
    total = np.where(total < 0.0, total + 1.0, total)
    # -tiny + 1.0 rounds to 1.0
    return np.where(total >= 1.0, 0.0, total)


def circle_distance(first, second):
    """The distance on the unit circle between phases, per coordinate."""
    difference = np.abs(np.asarray(first, dtype=float) - np.asarray(second, dtype=float)) % 1.0
    return np.minimum(difference, 1.0 - difference)


def make_grid(dyn, resolution):
    """Creates the uniform lattice of resolution**d points covering the torus of the dynamics.

    Points are ordered row-major: the last coordinate varies fastest.

    Args:
        dyn (:obj:`BaseDynamics`): The dynamics whose base space is covered.
        resolution (int): The number of points per coordinate.

    Returns:
        :obj:`OrbitGrid`: The lattice.
    """
    if resolution < 2:
        raise ResolutionTooSmall(f"the grid resolution must be at least 2, got {resolution}")
    axis = np.arange(resolution, dtype=float) / resolution
    points = np.array(list(itertools.product(axis, repeat=dyn.dims)), dtype=float).reshape(-1, dyn.dims)
    return OrbitGrid(points=points, resolution=(resolution,) * dyn.dims, provenance=UNIFORM_LATTICE,
                     shape=(resolution,) * dyn.dims, periodic=True)


def orbit_grid(dyn, p, n):
    """Creates a grid from the forward orbit segment T^0(p), ..., T^(n-1)(p).

    Args:
        dyn (:obj:`BaseDynamics`): The dynamics to iterate.
        p (:obj:`BasePoint`): The starting point.
        n (int): The number of points.

    Returns:
        :obj:`OrbitGrid`: The orbit segment as a grid.
    """
    if n < 1:
        raise ResolutionTooSmall(f"an orbit grid needs at least one point, got {n}")
    points = dyn.orbit_points(p, 0, n - 1)
    return OrbitGrid(points=points, resolution=(n,), provenance=FORWARD_ORBIT, shape=None, periodic=False)


def refine_grid(dyn, grid):
    """Doubles the resolution of a uniform lattice; other grids are returned unchanged."""
    if grid.provenance != UNIFORM_LATTICE or not grid.periodic:
        return grid
    return make_grid(dyn, 2 * grid.resolution[0])


# Classes #
@dataclasses.dataclass(frozen=True)
class BasePoint:
    """A point of the torus given by its phases.

    Attributes:
        coords (tuple): The phases, each in [0, 1).
    """
    coords: typing.Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) not in (1, 2):
            raise DimensionMismatch(f"points have one or two coordinates, got {len(coords)}")
        if any(not 0.0 <= c < 1.0 for c in coords):
            raise ValueError(f"every coordinate must lie in [0, 1), got {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dims(self):
        """int: The number of coordinates."""
        return len(self.coords)

    @classmethod
    def from_array(cls, values):
        """Creates a point from a one dimensional array of phases."""
        return cls(tuple(np.asarray(values, dtype=float).ravel()))

    def as_array(self):
        """Returns the phases as a (1, d) array, the shape every vectorized operation takes."""
        return np.asarray(self.coords, dtype=float).reshape(1, -1)


@dataclasses.dataclass(frozen=True, eq=False)
class OrbitGrid:
    """A finite set of points standing in for the torus.

    Attributes:
        points (:obj:`ndarray`): The (n, d) array of points.
        resolution (tuple): The number of points per coordinate.
        provenance (str): Either "uniform-lattice" or "forward-orbit".
        shape (tuple): The lattice index shape when the points form a lattice block, else None.
        periodic (bool): If the lattice closes up around the torus, so its rows and columns are cycles.
    """
    points: np.ndarray
    resolution: typing.Tuple[int, ...]
    provenance: str = UNIFORM_LATTICE
    shape: typing.Optional[typing.Tuple[int, ...]] = None
    periodic: bool = False

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise ResolutionTooSmall("a grid needs a nonempty (n, d) array of points")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)

    @property
    def dims(self):
        """int: The dimension of the points."""
        return self.points.shape[1]

    @property
    def mesh(self):
        """float: The lattice spacing per coordinate."""
        return 1.0 / max(self.resolution)

    def base_points(self):
        """Returns the grid as a list of BasePoint."""
        return [BasePoint.from_array(p) for p in self.points]

    def restrict(self, mask):
        """Creates the sub-grid of the points selected by a boolean mask.

        A lattice restricted to a box is still a lattice block, so its shape is kept when the selected indices form
        a rectangle.

        Args:
            mask (:obj:`ndarray`): The boolean selection, one entry per point.

        Returns:
            :obj:`OrbitGrid`: The sub-grid, never periodic.
        """
        mask = np.asarray(mask, dtype=bool)
        if not mask.any():
            raise ResolutionTooSmall("the restriction selects no grid points")
        shape = None
        if self.shape is not None:
            selected = mask.reshape(self.shape)
            extents = tuple(int(np.any(selected, axis=tuple(a for a in range(selected.ndim) if a != axis)).sum())
                            for axis in range(selected.ndim))
            if int(np.prod(extents)) == int(mask.sum()):
                shape = extents
        return OrbitGrid(points=self.points[mask], resolution=self.resolution, provenance=self.provenance,
                         shape=shape, periodic=False)


class BaseDynamics(BaseObject):
    """A homeomorphism of the d-torus acting on phases in [0, 1).

    All methods accept either a BasePoint or an (n, d) array of points and are vectorized over the array.

    Class Attributes:
        kind (str): The name of the family of maps.

    Attributes:
        frequencies (tuple): The rotation frequencies.
        dims (int): The dimension of the torus.
    """
    kind = ""

    def __init__(self, frequencies=(GOLDEN_MEAN,), dims=1):
        self.frequencies = tuple(float(f) for f in frequencies)
        self.dims = dims
        if any(not 0.0 <= f < 1.0 for f in self.frequencies):
            raise ValueError(f"frequencies must lie in [0, 1), got {self.frequencies}")

    def __repr__(self):
        return f"{type(self).__name__}(frequencies={self.frequencies})"

    def __eq__(self, other):
        return type(self) is type(other) and self.frequencies == other.frequencies

    def __hash__(self):
        return hash((type(self).__name__, self.frequencies))

    # Points
    def _as_points(self, p):
        """Validates the input and returns it as an (n, d) array."""
        points = p.as_array() if isinstance(p, BasePoint) else np.asarray(p, dtype=float)
        if points.ndim == 1:
            points = points.reshape(1, -1)
        if points.shape[1] != self.dims:
            raise DimensionMismatch(f"{self!r} acts on dimension {self.dims}, got points of dimension "
                                    f"{points.shape[1]}")
        return points

    def _map_points(self, p, points):
        """Returns the result as a BasePoint if the input was a BasePoint."""
        if isinstance(p, BasePoint):
            return BasePoint.from_array(points[0])
        return points

    # Maps
    def _step(self, points):
        raise NotImplementedError

    def _inverse_step(self, points):
        raise NotImplementedError

    def step(self, p):
        """Applies T once.

        Args:
            p: A BasePoint or an (n, d) array of points.

        Returns:
            The image, in the same form as the input.
        """
        return self._map_points(p, self._step(self._as_points(p)))

    def inverse_step(self, p):
        """Applies the inverse of T once.

        Args:
            p: A BasePoint or an (n, d) array of points.

        Returns:
            The preimage, in the same form as the input.
        """
        return self._map_points(p, self._inverse_step(self._as_points(p)))

    def iterate(self, p, n):
        """Applies T^n for any integer n, one wrapped step at a time."""
        points = self._as_points(p)
        move = self._step if n >= 0 else self._inverse_step
        for _ in range(abs(n)):
            points = move(points)
        return self._map_points(p, points)

    def orbit_points(self, p, n_from, n_to):
        """Computes the orbit segment T^k(p) for k = n_from..n_to as an (n_to - n_from + 1, d) array."""
        if n_from > n_to:
            raise ValueError(f"the orbit range is empty: {n_from} > {n_to}")
        start = self._as_points(p)
        if len(start) != 1:
            raise DimensionMismatch("an orbit starts from a single point")
        current = self.iterate(start, n_from)
        points = np.empty((n_to - n_from + 1, self.dims))
        points[0] = current[0]
        for k in range(1, len(points)):
            current = self._step(current)
            points[k] = current[0]
        return points

    def orbit(self, p, n_from, n_to):
        """Computes the orbit segment T^k(p) for k = n_from..n_to inclusive.

        Args:
            p (:obj:`BasePoint`): The point on the orbit at k = 0.
            n_from (int): The first iterate.
            n_to (int): The last iterate.

        Returns:
            list: The BasePoints of the segment.
        """
        return [BasePoint.from_array(q) for q in self.orbit_points(p, n_from, n_to)]

    # Factor
    def factor(self, p):
        """The projection onto the rotation factor, which T intertwines with a rotation by factor_shift."""
        return self._as_points(p)[:, 0]

    @property
    def factor_shift(self):
        """float: The rotation of the factor."""
        return self.frequencies[0]

    def describe(self):
        """Returns a JSON ready description of this object."""
        return {"kind": self.kind, "frequencies": list(self.frequencies), "dims": self.dims}


class Rotation(BaseDynamics):
    """The rotation p -> p + alpha mod 1 of the d-torus, componentwise."""
    kind = "rotation"

    def __init__(self, frequencies=(GOLDEN_MEAN,)):
        frequencies = tuple(np.atleast_1d(np.asarray(frequencies, dtype=float)))
        if len(frequencies) not in (1, 2):
            raise DimensionMismatch(f"rotations act on one or two coordinates, got {len(frequencies)}")
        super().__init__(frequencies, dims=len(frequencies))
        self._shift = np.asarray(self.frequencies)

    def _step(self, points):
        return wrap_sum(points, self._shift)

    def _inverse_step(self, points):
        return wrap_difference(points, self._shift)


class SkewShift(BaseDynamics):
    """The skew-shift (x, y) -> (x + alpha, y + x) mod 1 on the 2-torus."""
    kind = "skew-shift"

    def __init__(self, frequency=GOLDEN_MEAN):
        if np.ndim(frequency) > 0:
            frequency = float(np.asarray(frequency).ravel()[0])
        super().__init__((frequency,), dims=2)
        self.frequency = float(frequency)

    def __repr__(self):
        return f"SkewShift(frequency={self.frequency})"

    def _step(self, points):
        x, y = points[:, 0], points[:, 1]
        return np.stack([wrap_sum(x, self.frequency), wrap_sum(y, x)], axis=1)

    def _inverse_step(self, points):
        x_new, y_new = points[:, 0], points[:, 1]
        x = wrap_difference(x_new, self.frequency)
        return np.stack([x, wrap_difference(y_new, x)], axis=1)


def build_dynamics(kind, frequencies=(GOLDEN_MEAN,)):
    """Creates dynamics by name.

    Args:
        kind (str): Either "rotation" or "skew-shift".
        frequencies: The frequencies; the skew-shift uses the first.

    Returns:
        :obj:`BaseDynamics`: The dynamics.
    """
    if kind == Rotation.kind:
        return Rotation(frequencies)
    elif kind == SkewShift.kind:
        return SkewShift(tuple(frequencies)[0])
    raise ValueError(f"unknown dynamics kind {kind!r}")
