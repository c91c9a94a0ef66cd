#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" samplingmaps.py
Description: Continuous sampling maps from the torus into the unit disk (Verblunsky coefficients) or into the reals
(Jacobi coefficients). A map is a short Fourier sum plus an optional lattice part that is interpolated multilinearly.
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
import itertools
import math
import pathlib

# Downloaded Libraries #
from baseobjects import BaseObject
import numpy as np

# Local Libraries #
from .errors import AlphaOutOfDisk, DimensionMismatch, NonpositiveA
from .matrices import DISK_MARGIN


# Definitions #
DISK = "disk"
REAL = "real"
CODOMAINS = (DISK, REAL)

SNAP_TOLERANCE = 1e-9


# Functions #
def _format_number(value):
    """Writes a float with 17 significant digits, enough for a bit-exact round trip."""
    return format(float(value), ".17g")


def _read_complex(fields):
    """Reads a value_re and an optional value_im, which defaults to 0."""
    return complex(float(fields[0]), float(fields[1]) if len(fields) > 1 else 0.0)


def lattice_interpolate(values, points):
    """Interpolates lattice values multilinearly and periodically at arbitrary points.

    The value at index (i, j) sits at the point (i / res, j / res). Points on lattice nodes return the node value
    exactly.

    Args:
        values (:obj:`ndarray`): The lattice values with shape (res,) * d.
        points (:obj:`ndarray`): The (n, d) points.

    Returns:
        :obj:`ndarray`: The interpolated values.
    """
    resolution = values.shape[0]
    scaled = np.asarray(points, dtype=float) * resolution
    nearest = np.rint(scaled)
    scaled = np.where(np.abs(scaled - nearest) < SNAP_TOLERANCE, nearest, scaled)
    lower = np.floor(scaled)
    fraction = scaled - lower
    lower = lower.astype(int) % resolution
    upper = (lower + 1) % resolution

    result = np.zeros(len(scaled), dtype=values.dtype)
    dims = scaled.shape[1]
    for corner in itertools.product((0, 1), repeat=dims):
        weight = np.ones(len(scaled))
        index = []
        for axis, bit in enumerate(corner):
            if bit:
                weight = weight * fraction[:, axis]
                index.append(upper[:, axis])
            else:
                weight = weight * (1.0 - fraction[:, axis])
                index.append(lower[:, axis])
        result = result + weight * values[tuple(index)]
    return result


# Classes #
class SamplingMap(BaseObject):
    """A continuous map from the torus to the disk or to the reals.

    Attributes:
        codomain (str): Either "disk" or "real".
        dims (int): The dimension of the torus.
        fourier (list): The (frequency vector, complex coefficient) terms.
        grid_values (:obj:`ndarray`): The lattice part with shape (res,) * dims, or None.
        floor (float): The positivity floor, for maps used as off-diagonal Jacobi coefficients.

    Args:
        codomain (str): Either "disk" or "real".
        dims (int): The dimension of the torus.
        fourier: The (frequency vector, complex coefficient) terms.
        grid_values: The lattice part, or None.
        floor (float, optional): The positivity floor.
    """

    # Construction/Destruction
    def __init__(self, codomain=REAL, dims=1, fourier=(), grid_values=None, floor=None):
        if codomain not in CODOMAINS:
            raise ValueError(f"the codomain must be one of {CODOMAINS}, got {codomain!r}")
        if dims not in (1, 2):
            raise DimensionMismatch(f"sampling maps are defined on one or two dimensional tori, got {dims}")
        self.codomain = codomain
        self.dims = dims
        self.fourier = []
        for frequency, coefficient in fourier:
            frequency = tuple(int(k) for k in np.atleast_1d(frequency))
            if len(frequency) != dims:
                raise DimensionMismatch(f"frequency {frequency} does not have {dims} entries")
            self.fourier.append((frequency, complex(coefficient)))

        self.grid_values = None
        if grid_values is not None:
            dtype = complex if codomain == DISK else float
            grid_values = np.array(grid_values, dtype=dtype)
            if grid_values.ndim != dims or len(set(grid_values.shape)) != 1:
                raise DimensionMismatch(f"the lattice part must have shape (res,) * {dims}, got {grid_values.shape}")
            grid_values.setflags(write=False)
            self.grid_values = grid_values
        self.floor = floor

    def __repr__(self):
        return (f"SamplingMap(codomain={self.codomain!r}, dims={self.dims}, terms={len(self.fourier)}, "
                f"resolution={self.resolution})")

    # Constructors
    @classmethod
    def constant(cls, value, codomain=REAL, dims=1, floor=None):
        """Creates a constant map."""
        return cls(codomain, dims, [((0,) * dims, value)], floor=floor)

    @classmethod
    def cosine(cls, coupling, dims=1, constant=0.0):
        """Creates the real map constant + 2 coupling cos(2 pi x_1)."""
        frequency = (1,) + (0,) * (dims - 1)
        terms = [(frequency, coupling), (tuple(-k for k in frequency), coupling)]
        if constant:
            terms.append(((0,) * dims, constant))
        return cls(REAL, dims, terms)

    @classmethod
    def mode(cls, amplitude, frequency=1, dims=1):
        """Creates the disk map amplitude e^(2 pi i k x_1)."""
        return cls(DISK, dims, [((frequency,) + (0,) * (dims - 1), amplitude)])

    @classmethod
    def from_lattice(cls, values, codomain=REAL, floor=None):
        """Creates a map from lattice values alone."""
        values = np.asarray(values)
        return cls(codomain, values.ndim, grid_values=values, floor=floor)

    # Properties
    @property
    def representation(self):
        """str: One of "fourier", "grid" or "mixed"."""
        if self.grid_values is None:
            return "fourier"
        return "grid" if not self.fourier else "mixed"

    @property
    def resolution(self):
        """int: The lattice resolution, 0 without a lattice part."""
        return 0 if self.grid_values is None else self.grid_values.shape[0]

    # Evaluation
    def evaluate(self, points):
        """Evaluates this map at an (n, d) array of points.

        Args:
            points (:obj:`ndarray`): The points.

        Returns:
            :obj:`ndarray`: Complex values for disk maps, real values for real maps.
        """
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(1, -1)
        if points.shape[1] != self.dims:
            raise DimensionMismatch(f"the map is defined on dimension {self.dims}, got {points.shape[1]}")

        values = np.zeros(len(points), dtype=complex)
        for frequency, coefficient in self.fourier:
            if not any(frequency):
                values += coefficient
            else:
                values += coefficient * np.exp(2j * math.pi * (points @ np.asarray(frequency, dtype=float)))
        if self.grid_values is not None:
            values += lattice_interpolate(self.grid_values, points)

        if self.codomain == REAL:
            return values.real
        return values

    def __call__(self, points):
        return self.evaluate(points)

    def check_disk(self, points):
        """Raises AlphaOutOfDisk if the map leaves the disk of radius 1 - 1e-9 on the points."""
        largest = float(np.max(np.abs(self.evaluate(points)), initial=0.0))
        if largest >= 1.0 - DISK_MARGIN:
            raise AlphaOutOfDisk(f"the sampling map reaches |f| = {largest:.12f} on the evaluation grid")
        return largest

    def check_floor(self, points, floor=None):
        """Raises NonpositiveA if the map drops below its positivity floor on the points."""
        floor = self.floor if floor is None else floor
        floor = 0.0 if floor is None else floor
        lowest = float(np.min(self.evaluate(points).real))
        if not lowest > floor:
            raise NonpositiveA(f"the sampling map drops to {lowest} which is not above the floor {floor}")
        return lowest

    # Composition
    def with_lattice_delta(self, delta):
        """Creates a new map whose lattice part is increased by delta.

        Args:
            delta (:obj:`ndarray`): Lattice values with shape (res,) * dims.

        Returns:
            :obj:`SamplingMap`: This map plus the interpolated delta.
        """
        delta = np.asarray(delta)
        if self.grid_values is not None:
            if delta.shape != self.grid_values.shape:
                raise DimensionMismatch(f"the delta lattice {delta.shape} does not match {self.grid_values.shape}")
            delta = self.grid_values + delta
        return SamplingMap(self.codomain, self.dims, self.fourier, delta, self.floor)

    # Text Format
    def to_text(self):
        """Writes this map in the line-based sampling map format."""
        header = f"codomain={self.codomain} dims={self.dims} resolution={self.resolution}"
        if self.floor is not None:
            header += f" floor={_format_number(self.floor)}"
        lines = [header]
        for frequency, coefficient in self.fourier:
            indices = " ".join(str(k) for k in frequency)
            lines.append(f"fourier {indices} {_format_number(coefficient.real)} {_format_number(coefficient.imag)}")
        if self.grid_values is not None:
            for index in itertools.product(range(self.resolution), repeat=self.dims):
                value = self.grid_values[index]
                indices = " ".join(str(i) for i in index)
                if self.codomain == DISK:
                    lines.append(f"grid {indices} {_format_number(value.real)} {_format_number(value.imag)}")
                else:
                    lines.append(f"grid {indices} {_format_number(value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        """Reads a map from the line-based sampling map format.

        Args:
            text (str): The file contents.

        Returns:
            :obj:`SamplingMap`: The map.
        """
        lines = [line.strip() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        if not lines:
            raise ValueError("a sampling map file needs a header line")
        header = dict(field.split("=", 1) for field in lines[0].split())
        codomain = header.get("codomain", REAL)
        dims = int(header.get("dims", 1))
        resolution = int(header.get("resolution", 0))
        floor = float(header["floor"]) if "floor" in header else None

        fourier = []
        grid_values = None
        if resolution:
            grid_values = np.zeros((resolution,) * dims, dtype=complex if codomain == DISK else float)
        for line in lines[1:]:
            fields = line.split()
            kind, numbers = fields[0], fields[1:]
            if kind == "fourier":
                if len(numbers) not in (dims + 1, dims + 2):
                    raise ValueError(f"expected {dims} frequencies and a coefficient, got {line!r}")
                frequency = tuple(int(k) for k in numbers[:dims])
                fourier.append((frequency, _read_complex(numbers[dims:])))
            elif kind == "grid":
                if grid_values is None:
                    raise ValueError("grid entries need a positive resolution in the header")
                index = tuple(int(i) for i in numbers[:dims])
                value = numbers[dims:]
                if len(index) != dims or not 1 <= len(value) <= (2 if codomain == DISK else 1):
                    raise ValueError(f"expected {dims} indices and a value, got {line!r}")
                if any(not 0 <= i < resolution for i in index):
                    raise ValueError(f"the grid index {index} lies outside of the resolution {resolution}")
                grid_values[index] = _read_complex(value) if codomain == DISK else float(value[0])
            else:
                raise ValueError(f"unknown sampling map entry {kind!r}")
        return cls(codomain, dims, fourier, grid_values, floor)

    def write(self, path):
        """Writes this map to a file."""
        path = pathlib.Path(path)
        path.write_text(self.to_text())
        return path

    @classmethod
    def read(cls, path):
        """Reads a map from a file."""
        return cls.from_text(pathlib.Path(path).read_text())

    def describe(self):
        """Returns a JSON ready description of this map."""
        description = {"codomain": self.codomain, "dims": self.dims, "representation": self.representation,
                       "resolution": self.resolution,
                       "fourier": [[list(k), [c.real, c.imag]] for k, c in self.fourier]}
        if self.floor is not None:
            description["floor"] = self.floor
        return description
