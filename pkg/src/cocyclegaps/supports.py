#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" supports.py
Description: Coordinate boxes of the torus used as perturbation supports, with the smooth bump and plateau profiles
that localize perturbations inside them.
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
import typing

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .errors import DimensionMismatch


# Definitions #
COLLAR_FRACTION = 0.1


# Functions #
def _bump_1d(s):
    """exp(1 - 1 / (1 - s^2)) on (-1, 1) and 0 elsewhere; equals 1 at s = 0."""
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1.0
    values = np.zeros_like(s)
    values[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return values


def _smooth_step(t):
    """A smooth step from 0 at t <= 0 to 1 at t >= 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    left = np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)
    right = np.where(t < 1.0, np.exp(-1.0 / np.where(t < 1.0, 1.0 - t, 1.0)), 0.0)
    return left / (left + right)


# Classes #
@dataclasses.dataclass(frozen=True)
class SupportBox:
    """A closed coordinate box [lo_i, hi_i] of the torus, not wrapping around.

    The outer tenth of the box on each side is a collar where perturbations must already vanish; the bump profile
    lives on the inner box.

    Attributes:
        lo (tuple): The lower corner.
        hi (tuple): The upper corner.
    """
    lo: typing.Tuple[float, ...]
    hi: typing.Tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi):
            raise DimensionMismatch(f"the box corners have different dimensions: {lo} and {hi}")
        if any(not 0.0 <= a < b <= 1.0 for a, b in zip(lo, hi)):
            raise ValueError(f"the box must satisfy 0 <= lo < hi <= 1 in every coordinate, got {lo} and {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dims(self):
        """int: The dimension of the box."""
        return len(self.lo)

    @property
    def widths(self):
        """:obj:`ndarray`: The side lengths."""
        return np.asarray(self.hi) - np.asarray(self.lo)

    def _points(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, self.dims)
        if points.shape[1] != self.dims:
            raise DimensionMismatch(f"the box has dimension {self.dims}, got points of dimension {points.shape[1]}")
        return points

    def contains(self, points):
        """Returns a boolean mask of the points inside the closed box."""
        points = self._points(points)
        return np.all((points >= np.asarray(self.lo)) & (points <= np.asarray(self.hi)), axis=1)

    def inner(self):
        """Returns the box without its collar."""
        collar = COLLAR_FRACTION * self.widths
        return SupportBox(tuple(np.asarray(self.lo) + collar), tuple(np.asarray(self.hi) - collar))

    def expanded(self, margin):
        """Returns the box grown by margin on each side, clipped to the unit cube."""
        lo = np.clip(np.asarray(self.lo) - margin, 0.0, 1.0)
        hi = np.clip(np.asarray(self.hi) + margin, 0.0, 1.0)
        return SupportBox(tuple(lo), tuple(hi))

    def distance(self, points):
        """The sup-norm distance from each point to the box, measured around the circle in every coordinate."""
        points = self._points(points)
        gaps = np.zeros(len(points))
        for axis in range(self.dims):
            x = points[:, axis]
            axis_gap = np.minimum.reduce([np.maximum(np.maximum(self.lo[axis] - y, y - self.hi[axis]), 0.0)
                                          for y in (x - 1.0, x, x + 1.0)])
            gaps = np.maximum(gaps, axis_gap)
        return gaps

    def bump(self, points):
        """A smooth bump with maximum 1 at the center of the inner box, vanishing outside of it.

        Args:
            points (:obj:`ndarray`): The (n, d) points.

        Returns:
            :obj:`ndarray`: The bump values in [0, 1].
        """
        points = self._points(points)
        inner = self.inner()
        center = 0.5 * (np.asarray(inner.lo) + np.asarray(inner.hi))
        half = 0.5 * inner.widths
        values = np.ones(len(points))
        for axis in range(self.dims):
            values = values * _bump_1d((points[:, axis] - center[axis]) / half[axis])
        return values

    def plateau(self, points, margin=None):
        """A smooth function equal to 1 on the box and 0 beyond a collar of width margin around it.

        Distances to the box are measured around the circle in every coordinate.

        Args:
            points (:obj:`ndarray`): The (n, d) points.
            margin (float, optional): The collar width, a tenth of the smallest side by default.

        Returns:
            :obj:`ndarray`: The plateau values in [0, 1].
        """
        points = self._points(points)
        if margin is None:
            margin = COLLAR_FRACTION * float(np.min(self.widths))
        values = np.ones(len(points))
        for axis in range(self.dims):
            x = points[:, axis]
            gaps = [np.maximum(np.maximum(self.lo[axis] - y, y - self.hi[axis]), 0.0) for y in (x - 1.0, x, x + 1.0)]
            gap = np.minimum.reduce(gaps)
            values = values * _smooth_step(1.0 - gap / margin)
        return values

    def describe(self):
        """Returns a JSON ready description of this box."""
        return {"lo": list(self.lo), "hi": list(self.hi)}
