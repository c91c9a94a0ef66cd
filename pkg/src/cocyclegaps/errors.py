#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" errors.py
Description: The exceptions raised across cocyclegaps, grouped by the part of the package that raises them.
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

# Local Libraries #


# Definitions #
# Classes #
class CocycleGapsError(Exception):
    """The root of every error raised by this package."""


# Dynamics #
class DimensionMismatch(CocycleGapsError, ValueError):
    """A point or grid does not have the dimension of the dynamics it is used with."""


class ResolutionTooSmall(CocycleGapsError, ValueError):
    """A grid was requested with fewer than two points per coordinate."""


# Cocycle Algebra #
class AlphaOutOfDisk(CocycleGapsError, ValueError):
    """A Verblunsky value reached the boundary of the unit disk."""


class NotSU11(CocycleGapsError, ValueError):
    """A complex matrix is not close enough to SU(1,1) to be conjugated into SL(2,R)."""


class ROutOfRange(CocycleGapsError, ValueError):
    """A radius is outside of [0, 1)."""


class NonpositiveA(CocycleGapsError, ValueError):
    """An off-diagonal Jacobi coefficient is not strictly positive."""


class RZero(CocycleGapsError, ArithmeticError):
    """The radius is too small for the S' b-block to be defined."""


# Hyperbolicity #
class NotCertifiedUH(CocycleGapsError, ValueError):
    """An operation requiring a uniformly hyperbolic cocycle got one that was not certified."""


class SectionNotConverged(CocycleGapsError, ArithmeticError):
    """The unstable direction field stayed above the invariance tolerance at the largest iterate."""


class WindingObstruction(CocycleGapsError, ValueError):
    """A direction field winds around a grid cycle, so no continuous angle lift exists."""


class NotFound(CocycleGapsError):
    """A search or a pipeline ran out of budget without producing a result.

    Attributes:
        stage (str): The stage that failed.
        search_log (list): The candidates tried by the failing search.
        stages (list): The records of every stage run before the failure.
    """

    def __init__(self, message="", stage="", search_log=None, stages=None):
        super().__init__(message)
        self.stage = stage
        self.search_log = [] if search_log is None else list(search_log)
        self.stages = [] if stages is None else list(stages)


# Spectra #
class RecursionOverflow(CocycleGapsError, ArithmeticError):
    """The Szegő recursion produced non-finite values."""


# CMV Perturbation #
class EpsilonOutOfWindow(CocycleGapsError, ValueError):
    """A stretch factor left the admissible window of the annulus."""


class TOffAnnulus(CocycleGapsError, ValueError):
    """A point is not on the annulus the snap-back functions are defined on."""


class RBelowFloor(CocycleGapsError, ValueError):
    """The Verblunsky radius vanishes, or nearly vanishes, on the closed support."""


# Jacobi Projection #
class DomainOverlap(CocycleGapsError, ValueError):
    """The box K meets one of its first two images under the dynamics."""


class PivotTooSmall(CocycleGapsError, ArithmeticError):
    """The (1,1) entry of the perturbed matrix is too small to solve for the local triple."""


class NotCAK(CocycleGapsError, ValueError):
    """The perturbed cocycle differs from the original outside of K."""


# Configuration #
class ConfigInvalid(CocycleGapsError, ValueError):
    """An experiment configuration is malformed or refers to missing files.

    Attributes:
        section (str): The offending section.
        key (str): The offending key.
    """

    def __init__(self, message="", section="", key=""):
        if section:
            message = f"[{section}] {key}: {message}" if key else f"[{section}]: {message}"
        super().__init__(message)
        self.section = section
        self.key = key
