#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" hyperbolicity.py
Description: Numerical certificates of uniform hyperbolicity for SL(2,R) cocycles, the invariant unstable and stable
direction fields, their angle lifts, and the search for a nearby uniformly hyperbolic cocycle.

A certificate is a finite-scale heuristic: the minimum over a grid of the norms of A^n(x) is followed along the
doubling schedule 4, 8, ..., n_max and judged UH, NotUH or Undetermined.
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
import typing

# Downloaded Libraries #
from advancedlogging import AdvancedLogger
from baseobjects import BaseObject
import numpy as np
import scipy.sparse
import scipy.sparse.csgraph
import scipy.spatial

# Local Libraries #
from .cocycles import Cocycle, Generator
from .dynamics import OrbitGrid, UNIFORM_LATTICE, make_grid, refine_grid
from .errors import NotCertifiedUH, NotFound, SectionNotConverged, WindingObstruction
from .matrices import apply, assemble, distance, entry_norm, operator_norm, rotation


# Definitions #
UH = "UH"
NOT_UH = "NotUH"
UNDETERMINED = "Undetermined"
VERDICTS = (UH, NOT_UH, UNDETERMINED)

ROTATION_FAMILY = "rotation"
SHEAR_FAMILY = "shear"
FAMILIES = (ROTATION_FAMILY, SHEAR_FAMILY)

SECTION_TOLERANCE = 1e-6
DISTANCE_FRACTION = 0.98
MAX_JUMP = math.pi / 4
LOG_CAP = 700.0

_logger = AdvancedLogger("hyperbolicity")


# Functions #
def doubling_schedule(n_max):
    """The schedule 4, 8, 16, ... up to n_max, always ending at n_max."""
    schedule = []
    n = 4
    while n < n_max:
        schedule.append(n)
        n *= 2
    schedule.append(n_max)
    return schedule


def _capped_exp(value):
    return math.exp(min(float(value), LOG_CAP))


def _strictly_increasing(values):
    return all(b > a for a, b in zip(values, values[1:]))


def _strictly_decreasing(values):
    return len(values) > 1 and all(b < a for a, b in zip(values, values[1:]))


# Certificates #
@dataclasses.dataclass(frozen=True)
class UHParameters:
    """The thresholds of the finite-scale UH certificate.

    Attributes:
        n_max (int): The last iterate of the doubling schedule.
        gamma (float): The norm threshold the windowed floor must reach.
        resolution (int): The lattice resolution used when no grid is given.
        collapse (float): Norms at or below this value witness NotUH.
        growth_ratio (float): The factor floor(n_max) / floor(n_max / 2) must exceed. A parabolic product grows at
            most linearly, which keeps this ratio below 2, so the default sits just above it and still admits weak
            exponential growth.
        refine (bool): If an Undetermined verdict on a lattice is retried once at double resolution.
    """
    n_max: int = 256
    gamma: float = 10.0
    resolution: int = 64
    collapse: float = 1.5
    growth_ratio: float = 2.2
    refine: bool = True

    def __post_init__(self):
        if self.n_max < 4:
            raise ValueError(f"n_max must be at least 4, got {self.n_max}")
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be larger than 1, got {self.gamma}")

    @property
    def schedule(self):
        """list: The doubling schedule."""
        return doubling_schedule(self.n_max)


@dataclasses.dataclass(frozen=True)
class UHCertificate:
    """Numerical evidence for or against uniform hyperbolicity on a grid.

    Attributes:
        verdict (str): One of "UH", "NotUH" or "Undetermined".
        witness_n (int): The first schedule iterate whose windowed floor reaches gamma, else n_max.
        min_norm (float): The minimum over the grid of the norms of A^witness_n.
        log_min_norm (float): The logarithm of min_norm, which does not overflow.
        growth_samples (list): The (n, min_norm) pairs along the schedule.
        floor_samples (list): The (n, windowed floor) pairs along the schedule.
        margin (float): log(min_norm(n_max) / gamma).
        growth_rate (float): The slope of log min_norm over the last doubling, an estimate of log sigma.
        floor_ratio (float): floor(n_max) / floor(n_max / 2), the growth of the windowed floor over the last doubling.
        grid_resolution (tuple): The resolution of the grid the verdict was reached on.
        refined (bool): If the verdict comes from the mesh-refinement escalation.
        grid (:obj:`OrbitGrid`): The grid the verdict was reached on.
    """
    verdict: str
    witness_n: int
    min_norm: float
    log_min_norm: float
    growth_samples: typing.List[typing.Tuple[int, float]]
    floor_samples: typing.List[typing.Tuple[int, float]]
    margin: float
    growth_rate: float
    floor_ratio: float
    grid_resolution: typing.Tuple[int, ...]
    refined: bool = False
    grid: typing.Optional[OrbitGrid] = dataclasses.field(default=None, repr=False, compare=False)

    @property
    def is_uh(self):
        """bool: If the verdict is UH."""
        return self.verdict == UH

    def to_json(self):
        """Returns the certificate as a JSON ready dictionary."""
        return {"verdict": self.verdict,
                "witness_n": self.witness_n,
                "min_norm": self.min_norm,
                "log_min_norm": self.log_min_norm,
                "growth_samples": [list(sample) for sample in self.growth_samples],
                "floor_samples": [list(sample) for sample in self.floor_samples],
                "margin": self.margin,
                "growth_rate": self.growth_rate,
                "floor_ratio": self.floor_ratio,
                "grid_resolution": list(self.grid_resolution),
                "refined": self.refined}


def log_norm_minima(matrices, n_max):
    """Follows renormalized products and records the minimum over points of log ||A^k(x)|| for k = 0..n_max.

    The point axis is the last batch axis of the matrix stacks; any leading axes are kept, so several parameters
    can be followed at once. The products are carried as four entry arrays.

    Args:
        matrices: An iterable yielding the stacks A(T^k x) for k = 0, 1, ..., with shape (..., points, 2, 2).
        n_max (int): The number of steps.

    Returns:
        :obj:`ndarray`: The minima with shape (n_max + 1, ...).
    """
    p00 = p01 = p10 = p11 = None
    log_scale = None
    minima = []
    for _, step in zip(range(n_max), matrices):
        s00, s01, s10, s11 = step[..., 0, 0], step[..., 0, 1], step[..., 1, 0], step[..., 1, 1]
        if p00 is None:
            p00, p01, p10, p11 = s00.copy(), s01.copy(), s10.copy(), s11.copy()
        else:
            p00, p01, p10, p11 = (s00 * p00 + s01 * p10, s00 * p01 + s01 * p11,
                                  s10 * p00 + s11 * p10, s10 * p01 + s11 * p11)
        norm = entry_norm(p00, p01, p10, p11)
        log_scale = np.log(norm) if log_scale is None else log_scale + np.log(norm)
        p00, p01, p10, p11 = p00 / norm, p01 / norm, p10 / norm, p11 / norm
        minima.append(np.min(log_scale, axis=-1))
    minima.insert(0, np.zeros_like(minima[0]))
    return np.stack(minima)


def jacobi_log_norm_minima(a, b, energies, n_max):
    """log_norm_minima of the Jacobi transfer matrices at many energies, with the step written out on the entries.

    A step [[t, -1/a], [a, 0]] maps the rows (r0, r1) of the product to (t r0 - r1 / a, a r0), so each energy and
    point costs four products per step.

    Args:
        a (:obj:`ndarray`): The (n_max, points) off-diagonal samples a(T^k x), strictly positive.
        b (:obj:`ndarray`): The (n_max, points) diagonal samples b(T^k x).
        energies: The energies.
        n_max (int): The number of steps.

    Returns:
        :obj:`ndarray`: The minima with shape (n_max + 1, energies).
    """
    energies = np.asarray(energies, dtype=float)[:, None]
    inverse_a = 1.0 / np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = (len(energies), inverse_a.shape[-1])
    r00 = (energies - b[0]) * inverse_a[0]
    r01 = np.broadcast_to(-inverse_a[0], shape).copy()
    r10 = np.broadcast_to(a[0], shape).astype(float)
    r11 = np.zeros(shape)
    log_scale = np.zeros(shape)
    minima = np.zeros((n_max + 1, len(energies)))
    for k in range(n_max):
        if k > 0:
            t = (energies - b[k]) * inverse_a[k]
            r00, r01, r10, r11 = (t * r00 - inverse_a[k] * r10, t * r01 - inverse_a[k] * r11,
                                  a[k] * r00, a[k] * r01)
        norm = entry_norm(r00, r01, r10, r11)
        log_scale += np.log(norm)
        r00 /= norm
        r01 /= norm
        r10 /= norm
        r11 /= norm
        minima[k + 1] = np.min(log_scale, axis=-1)
    return minima


def cocycle_steps(c, points):
    """Yields the matrices A(T^k x) for k = 0, 1, ... at an (m, d) array of points."""
    points = np.asarray(points, dtype=float)
    while True:
        yield c(points)
        points = c.dynamics.step(points)


def windowed_floor(minima, n):
    """The minimum of the recorded log norms over the window k in (n/2, n]."""
    return float(np.min(minima[n // 2 + 1:n + 1]))


def assess(minima, params, grid=None, refined=False):
    """Turns the log-norm minima of a single cocycle into a certificate.

    UH needs the windowed floor to reach gamma at some schedule point, both the minimum norm and the floor to
    increase strictly over the last three schedule points, and the floor to grow by more than growth_ratio over the
    last doubling, which separates exponential growth from the linear growth of parabolic products. NotUH is
    witnessed by a collapse of the minimum norm or the floor at n_max, or by a minimum norm that decreases over the
    last three schedule points.

    Args:
        minima (:obj:`ndarray`): The log-norm minima for k = 0..n_max.
        params (:obj:`UHParameters`): The thresholds.
        grid (:obj:`OrbitGrid`, optional): The grid the minima were taken over.
        refined (bool, optional): If the grid comes from the refinement escalation.

    Returns:
        :obj:`UHCertificate`: The certificate.
    """
    minima = np.asarray(minima, dtype=float)
    n_max = params.n_max
    schedule = params.schedule
    log_min = [float(minima[n]) for n in schedule]
    log_floor = [windowed_floor(minima, n) for n in schedule]
    log_gamma = math.log(params.gamma)
    log_collapse = math.log(params.collapse)

    witness = next((n for n, value in zip(schedule, log_floor) if value >= log_gamma), None)
    growth = windowed_floor(minima, n_max) - windowed_floor(minima, n_max // 2)
    is_uh = (witness is not None and _strictly_increasing(log_min[-3:]) and _strictly_increasing(log_floor[-3:])
             and growth > math.log(params.growth_ratio))
    is_not_uh = (log_min[-1] <= log_collapse or log_floor[-1] <= log_collapse
                 or _strictly_decreasing(log_min[-3:]))

    if is_uh:
        verdict = UH
    elif is_not_uh:
        verdict = NOT_UH
    else:
        verdict = UNDETERMINED
    witness_n = witness if is_uh else n_max

    half = n_max // 2
    return UHCertificate(verdict=verdict,
                         witness_n=witness_n,
                         min_norm=_capped_exp(minima[witness_n]),
                         log_min_norm=float(minima[witness_n]),
                         growth_samples=[(n, _capped_exp(v)) for n, v in zip(schedule, log_min)],
                         floor_samples=[(n, _capped_exp(v)) for n, v in zip(schedule, log_floor)],
                         margin=float(minima[n_max]) - log_gamma,
                         growth_rate=float(minima[n_max] - minima[half]) / (n_max - half),
                         floor_ratio=_capped_exp(growth),
                         grid_resolution=tuple(grid.resolution) if grid is not None else (),
                         refined=refined,
                         grid=grid)


def can_refine(grid):
    """If a grid is a full uniform lattice that the escalation may refine."""
    return grid.provenance == UNIFORM_LATTICE and grid.periodic


def certify(c, grid=None, n_max=None, gamma=None, params=None):
    """Certifies or refutes uniform hyperbolicity of a cocycle on a grid.

    Args:
        c (:obj:`Cocycle`): The cocycle.
        grid (:obj:`OrbitGrid`, optional): The grid, a lattice of params.resolution by default.
        n_max (int, optional): Overrides params.n_max.
        gamma (float, optional): Overrides params.gamma.
        params (:obj:`UHParameters`, optional): The thresholds.

    Returns:
        :obj:`UHCertificate`: The certificate; Undetermined is the honest fallback.
    """
    params = UHParameters() if params is None else params
    if n_max is not None:
        params = dataclasses.replace(params, n_max=n_max)
    if gamma is not None:
        params = dataclasses.replace(params, gamma=gamma)
    grid = make_grid(c.dynamics, params.resolution) if grid is None else grid

    minima = log_norm_minima(cocycle_steps(c, grid.points), params.n_max)
    certificate = assess(minima, params, grid)
    if certificate.verdict == UNDETERMINED and params.refine and can_refine(grid):
        finer = refine_grid(c.dynamics, grid)
        _logger.trace_log("hyperbolicity", "certify", f"undetermined at resolution {grid.resolution}, "
                          f"refining to {finer.resolution}", level="DEBUG")
        minima = log_norm_minima(cocycle_steps(c, finer.points), params.n_max)
        certificate = assess(minima, params, finer, refined=True)

    _logger.trace_log("hyperbolicity", "certify", f"verdict {certificate.verdict} with witness "
                      f"{certificate.witness_n} and margin {certificate.margin:.4f}", level="DEBUG")
    return certificate


def growth_rate(c, grid, n):
    """The grid average of (1/n) log ||A^n(x)||, computed with renormalized products.

    Args:
        c (:obj:`Cocycle`): The cocycle.
        grid (:obj:`OrbitGrid`): The grid to average over.
        n (int): The iterate.

    Returns:
        float: The average growth rate.
    """
    if n < 1:
        raise ValueError(f"the growth rate needs n >= 1, got {n}")
    log_norms = np.zeros(len(grid))
    product = None
    for _, step in zip(range(n), cocycle_steps(c, grid.points)):
        product = step.copy() if product is None else step @ product
        norm = operator_norm(product)
        log_norms += np.log(norm)
        product = product / norm[:, None, None]
    return float(np.mean(log_norms) / n)


# Sections #
def renormalized_product(c, points, n):
    """Computes A^n at each point up to a positive scale, which is all a direction needs."""
    points = np.asarray(points, dtype=float)
    product = None
    for _, step in zip(range(n), cocycle_steps(c, points)):
        product = step.copy() if product is None else step @ product
        product = product / operator_norm(product)[:, None, None]
    return product


def _principal_axis(symmetric):
    """The angle of the top eigenvector of a stack of symmetric 2x2 matrices."""
    return 0.5 * np.arctan2(2.0 * symmetric[..., 0, 1], symmetric[..., 0, 0] - symmetric[..., 1, 1])


def unstable_directions(c, points, m):
    """The top left-singular directions of A^m(T^-m x), the most expanded image directions.

    Args:
        c (:obj:`Cocycle`): The cocycle.
        points (:obj:`ndarray`): The (n, d) points x.
        m (int): The number of past steps.

    Returns:
        :obj:`ndarray`: The (n, 2) unit vectors.
    """
    start = c.dynamics.iterate(np.asarray(points, dtype=float), -m)
    product = renormalized_product(c, start, m)
    angle = _principal_axis(product @ np.swapaxes(product, -1, -2))
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def stable_directions(c, points, m):
    """The bottom right-singular directions of A^m(x), the most contracted directions.

    Args:
        c (:obj:`Cocycle`): The cocycle.
        points (:obj:`ndarray`): The (n, d) points x.
        m (int): The number of future steps.

    Returns:
        :obj:`ndarray`: The (n, 2) unit vectors.
    """
    product = renormalized_product(c, points, m)
    angle = _principal_axis(np.swapaxes(product, -1, -2) @ product) + 0.5 * math.pi
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def projective_distance(first, second):
    """The sine of the angle between the lines spanned by two stacks of vectors."""
    cross = first[..., 0] * second[..., 1] - first[..., 1] * second[..., 0]
    return np.abs(cross) / (np.linalg.norm(first, axis=-1) * np.linalg.norm(second, axis=-1))


@dataclasses.dataclass(frozen=True)
class UnstableSection:
    """An invariant direction field sampled on a grid.

    Attributes:
        grid (:obj:`OrbitGrid`): The grid.
        u_values (:obj:`ndarray`): The (n, 2) unit vectors.
        tau_values (:obj:`ndarray`): The angle lift, None until angle_lift fills it.
        invariance_residual (float): The largest projective distance between A(x)u(x) and u(T x).
        kind (str): Either "unstable" or "stable".
        m (int): The number of iterates the directions were computed from.
    """
    grid: OrbitGrid
    u_values: np.ndarray
    tau_values: typing.Optional[np.ndarray] = None
    invariance_residual: float = 0.0
    kind: str = "unstable"
    m: int = 0


def _converged_section(c, grid, m, kind):
    field = unstable_directions if kind == "unstable" else stable_directions
    points = grid.points
    images = c.dynamics.step(points)
    residual = math.inf
    for trial in (m, 2 * m, 4 * m):
        u = field(c, points, trial)
        u_next = field(c, images, trial)
        residual = float(np.max(projective_distance(apply(c(points), u), u_next)))
        if residual <= SECTION_TOLERANCE:
            return UnstableSection(grid=grid, u_values=u, invariance_residual=residual, kind=kind, m=trial)
        _logger.trace_log("hyperbolicity", "section", f"{kind} residual {residual:.3e} at m = {trial}, escalating",
                          level="DEBUG")
    raise SectionNotConverged(f"the {kind} section keeps an invariance residual of {residual:.3e} at m = {4 * m}")


def _certified(c, grid, certificate, params):
    if certificate is None:
        certificate = certify(c, grid, params=params)
    if not certificate.is_uh:
        raise NotCertifiedUH(f"the cocycle is {certificate.verdict}, sections need a UH certificate")
    return certificate


def unstable_section(c, grid, m=None, certificate=None, params=None):
    """Computes the unstable direction field on a grid.

    Args:
        c (:obj:`Cocycle`): A cocycle certified UH.
        grid (:obj:`OrbitGrid`): The grid.
        m (int, optional): The number of past steps, twice the witness iterate by default.
        certificate (:obj:`UHCertificate`, optional): The UH certificate; computed when missing.
        params (:obj:`UHParameters`, optional): The thresholds used when certifying here.

    Returns:
        :obj:`UnstableSection`: The section with an invariance residual of at most 1e-6.
    """
    certificate = _certified(c, grid, certificate, params)
    m = 2 * certificate.witness_n if m is None else max(m, certificate.witness_n)
    return _converged_section(c, grid, m, "unstable")


def stable_section(c, grid, m=None, certificate=None, params=None):
    """Computes the stable direction field on a grid, the mirror of unstable_section."""
    certificate = _certified(c, grid, certificate, params)
    m = 2 * certificate.witness_n if m is None else max(m, certificate.witness_n)
    return _converged_section(c, grid, m, "stable")


def _principal(angles):
    """Reduces angles modulo pi into [-pi/2, pi/2)."""
    return (np.asarray(angles) + 0.5 * math.pi) % math.pi - 0.5 * math.pi


def _lift_line(angles, start=None):
    """Lifts a sequence of projective angles continuously; returns the lift and the largest step."""
    steps = _principal(np.diff(angles))
    first = _principal(angles[0]) if start is None else start
    lifted = first + np.concatenate([[0.0], np.cumsum(steps)])
    largest = float(np.max(np.abs(steps), initial=0.0))
    return lifted, largest


def _closing_winding(lifted, raw_first):
    """The winding accumulated when a lifted cycle closes back to its first point."""
    closing = lifted[-1] + _principal(raw_first - lifted[-1])
    return closing - lifted[0]


def _lift_scattered(points, angles):
    """Lifts the angles of unstructured points along a minimum spanning tree of their periodic neighbor graph.

    Every neighbor pair, not only the tree edges, is checked afterwards, so a winding around a cycle of the graph
    shows up as a jump.
    """
    count = len(points)
    if count == 1:
        return _principal(angles), 0.0
    k = min(count, 2 * points.shape[1] + 1)
    wrapped = np.mod(points, 1.0)
    wrapped[wrapped >= 1.0] = 0.0
    distances, neighbors = scipy.spatial.cKDTree(wrapped, boxsize=1.0).query(wrapped, k=k)
    rows = np.repeat(np.arange(count), k - 1)
    columns = neighbors[:, 1:].ravel()
    weights = np.maximum(distances[:, 1:].ravel(), np.finfo(float).tiny)
    graph = scipy.sparse.csr_matrix((weights, (rows, columns)), shape=(count, count))
    spanning = scipy.sparse.csgraph.minimum_spanning_tree(graph)

    tau = np.empty(count)
    components, labels = scipy.sparse.csgraph.connected_components(spanning, directed=False)
    for label in range(components):
        root = int(np.flatnonzero(labels == label)[0])
        order, predecessors = scipy.sparse.csgraph.breadth_first_order(spanning, root, directed=False)
        tau[root] = _principal(angles[root])
        for node in order[1:]:
            parent = predecessors[node]
            tau[node] = tau[parent] + _principal(angles[node] - tau[parent])
    largest = float(np.max(np.abs(tau[rows] - tau[columns]), initial=0.0))
    return tau, largest


def angle_lift(section):
    """Fills the angle lift tau with R_-tau u = (1, 0), continuous along grid adjacency modulo pi.

    The signs of u are flipped to follow the lift. Lattice blocks are lifted row by row and checked across rows;
    periodic lattices also check that every row and column cycle closes without winding.
    Unstructured grids, such as forward orbits, are lifted along a spanning tree of their nearest neighbors on the
    torus. A jump above MAX_JUMP between neighbors raises WindingObstruction on every kind of grid.

    Args:
        section (:obj:`UnstableSection`): The section.

    Returns:
        :obj:`UnstableSection`: The section with tau filled and u = (cos tau, sin tau).
    """
    grid = section.grid
    u = np.asarray(section.u_values, dtype=float)
    angles = np.arctan2(u[:, 1], u[:, 0])
    shape = grid.shape

    if shape is not None and len(shape) == 1:
        tau, largest = _lift_line(angles)
        if largest > MAX_JUMP:
            raise WindingObstruction(f"the section turns by {largest:.3f} between neighbors; refine the grid")
        if grid.periodic:
            winding = _closing_winding(tau, angles[0])
            if abs(winding) > 0.5 * math.pi:
                raise WindingObstruction(f"the section winds by {winding / math.pi:.0f} pi around the circle")
    elif shape is not None and len(shape) == 2:
        raw = angles.reshape(shape)
        column, largest = _lift_line(raw[:, 0])
        rows = []
        for i in range(shape[0]):
            row, row_largest = _lift_line(raw[i], start=column[i])
            rows.append(row)
            largest = max(largest, row_largest)
        block = np.stack(rows)
        if shape[0] > 1:
            largest = max(largest, float(np.max(np.abs(np.diff(block, axis=0)))))
        if largest > MAX_JUMP:
            raise WindingObstruction(f"the section turns by {largest:.3f} between neighbors; no continuous lift "
                                     f"exists on this grid")
        if grid.periodic:
            windings = [_closing_winding(block[i], raw[i, 0]) for i in range(shape[0])]
            windings += [_closing_winding(block[:, j], raw[0, j]) for j in range(shape[1])]
            worst = max(windings, key=abs)
            if abs(worst) > 0.5 * math.pi:
                raise WindingObstruction(f"the section winds by {worst / math.pi:.0f} pi around a grid cycle")
        tau = block.ravel()
    else:
        tau, largest = _lift_scattered(grid.points, angles)
        if largest > MAX_JUMP:
            raise WindingObstruction(f"the section turns by {largest:.3f} between neighboring grid points; no "
                                     f"continuous lift exists on this grid")

    u_lifted = np.stack([np.cos(tau), np.sin(tau)], axis=-1)
    return dataclasses.replace(section, u_values=u_lifted, tau_values=tau)


# Neighbor Search #
class Profile(BaseObject):
    """A low frequency real function on the torus used to shape a dressing.

    Attributes:
        terms (list): The (frequency vector, cosine coefficient, sine coefficient) terms.
        constant (float): The constant term.
        scale (float): A global factor.
    """

    def __init__(self, terms=(), constant=0.0, scale=1.0):
        self.terms = [(tuple(int(k) for k in frequency), float(a), float(b)) for frequency, a, b in terms]
        self.constant = float(constant)
        self.scale = float(scale)

    @classmethod
    def flat(cls, value):
        """Creates the constant profile."""
        return cls(constant=value)

    @classmethod
    def random(cls, rng, dims, points, max_frequency=2):
        """Creates a random profile normalized to a maximum of 1 in absolute value on the points."""
        terms = []
        for frequency in np.ndindex(*(max_frequency + 1,) * dims):
            if any(frequency):
                terms.append((frequency, rng.normal(), rng.normal()))
        profile = cls(terms, constant=rng.normal())
        largest = float(np.max(np.abs(profile(points)), initial=0.0))
        if largest > 0.0:
            profile.scale = 1.0 / largest
        return profile

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        values = np.full(len(points), self.constant)
        for frequency, a, b in self.terms:
            phase = 2.0 * math.pi * (points @ np.asarray(frequency, dtype=float))
            values = values + a * np.cos(phase) + b * np.sin(phase)
        return self.scale * values

    def describe(self):
        """Returns a JSON ready description of this profile."""
        return {"terms": [[list(k), a, b] for k, a, b in self.terms], "constant": self.constant, "scale": self.scale}


class DressedGenerator(Generator):
    """A generator D(a chi(x) g(x)) A(x) where D is a rotation or a lower shear and chi the support bump.

    Attributes:
        base (:obj:`Generator`): The generator A.
        support (:obj:`SupportBox`): The support; chi vanishes outside of its inner box.
        amplitude (float): The amplitude a.
        family (str): Either "rotation" or "shear".
        profile (:obj:`Profile`): The shape g.
    """
    kind = "dressed"

    def __init__(self, base, support, amplitude, family=ROTATION_FAMILY, profile=None):
        if family not in FAMILIES:
            raise ValueError(f"the dressing family must be one of {FAMILIES}, got {family!r}")
        self.base = base
        self.support = support
        self.amplitude = float(amplitude)
        self.family = family
        self.profile = Profile.flat(1.0) if profile is None else profile

    def angles(self, points):
        """The dressing parameter a chi(x) g(x) at the points."""
        return self.amplitude * self.support.bump(points) * self.profile(points)

    def __call__(self, points):
        base = self.base(points)
        angles = self.angles(points)
        if self.family == ROTATION_FAMILY:
            dressing = rotation(angles)
        else:
            dressing = assemble(np.ones_like(angles), np.zeros_like(angles), angles, np.ones_like(angles))
        return np.where((angles == 0.0)[:, None, None], base, dressing @ base)

    def describe(self):
        return {"kind": self.kind, "family": self.family, "amplitude": self.amplitude,
                "support": self.support.describe(), "profile": self.profile.describe(),
                "base": self.base.describe()}


@dataclasses.dataclass
class UHNeighbor:
    """The outcome of a successful neighbor search.

    Attributes:
        cocycle (:obj:`Cocycle`): The UH cocycle B.
        certificate (:obj:`UHCertificate`): Its certificate.
        distance (float): The grid sup distance to the original cocycle.
        search_log (list): One record per candidate tried.
    """
    cocycle: Cocycle
    certificate: UHCertificate
    distance: float
    search_log: list = dataclasses.field(default_factory=list)


def within_target(reached, target):
    """If a perturbation that reached this distance meets a target distance; the target itself is allowed."""
    return reached <= target


def fit_amplitude(c, support, family, profile, target, points):
    """Finds by bisection the largest amplitude whose dressing stays within target of c on the points.

    Args:
        c (:obj:`Cocycle`): The cocycle being dressed.
        support (:obj:`SupportBox`): The support.
        family (str): The dressing family.
        profile (:obj:`Profile`): The shape.
        target (float): The largest allowed distance.
        points (:obj:`ndarray`): The points the distance is measured on.

    Returns:
        tuple: The amplitude and the distance it reaches.
    """
    original = c(points)

    def reach(amplitude):
        return distance(DressedGenerator(c.generator, support, amplitude, family, profile)(points), original)

    cap = math.pi if family == ROTATION_FAMILY else 64.0
    high = min(1.0, cap)
    while reach(high) <= target and high < cap:
        high = min(2.0 * high, cap)
    if reach(high) <= target:
        return high, reach(high)
    low = 0.0
    for _ in range(50):
        middle = 0.5 * (low + high)
        if reach(middle) <= target:
            low = middle
        else:
            high = middle
    return low, reach(low)


def seek_uh_neighbor(c, support, epsilon, budget, grid=None, params=None, rng=None, families=FAMILIES):
    """Searches for a UH cocycle within epsilon of c that agrees with c outside of the support.

    The candidates dress c by rotations or lower shears of amplitude a chi(x) g(x). The families are tried in the
    given order with g = +1, g = -1 and then random low frequency shapes; every amplitude is fitted so that the grid
    distance is at most 0.98 epsilon.

    Args:
        c (:obj:`Cocycle`): The cocycle A.
        support (:obj:`SupportBox`): The support box.
        epsilon (float): The distance budget.
        budget (int): The number of candidates.
        grid (:obj:`OrbitGrid`, optional): The certification grid.
        params (:obj:`UHParameters`, optional): The certificate thresholds.
        rng (:obj:`Generator`, optional): The numpy random generator for the random shapes.
        families (tuple, optional): The dressing families in search order.

    Returns:
        :obj:`UHNeighbor`: The neighbor, its certificate and the search log.
    """
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    params = UHParameters() if params is None else params
    grid = make_grid(c.dynamics, params.resolution) if grid is None else grid
    rng = np.random.default_rng(0) if rng is None else rng

    certificate = certify(c, grid, params=params)
    if certificate.is_uh:
        return UHNeighbor(c, certificate, 0.0, [])

    points = grid.points
    inside = support.contains(points)
    if not inside.any():
        raise NotFound("the support contains no grid points", stage="seek")
    support_points = points[inside]

    search_log = []
    per_family = -(-budget // len(families))
    for family in families:
        for index in range(per_family):
            if len(search_log) >= budget:
                break
            if index == 0:
                profile = Profile.flat(1.0)
            elif index == 1:
                profile = Profile.flat(-1.0)
            else:
                profile = Profile.random(rng, c.dynamics.dims, support_points)
            amplitude, reached = fit_amplitude(c, support, family, profile, DISTANCE_FRACTION * epsilon,
                                               support_points)
            record = {"family": family, "index": index, "amplitude": amplitude, "distance": reached}
            if amplitude == 0.0:
                record["verdict"] = "skipped"
                search_log.append(record)
                continue
            candidate = c.with_generator(DressedGenerator(c.generator, support, amplitude, family, profile))
            candidate_certificate = certify(candidate, grid, params=params)
            record["verdict"] = candidate_certificate.verdict
            record["min_norm"] = candidate_certificate.min_norm
            search_log.append(record)
            _logger.trace_log("hyperbolicity", "seek_uh_neighbor", f"{family} candidate {index} with amplitude "
                              f"{amplitude:.6f} is {candidate_certificate.verdict}", level="DEBUG")
            if candidate_certificate.is_uh:
                outside = ~inside
                if outside.any() and not np.array_equal(candidate(points[outside]), c(points[outside])):
                    raise NotFound("a candidate changed the cocycle outside of the support", stage="seek",
                                   search_log=search_log)
                _logger.trace_log("hyperbolicity", "seek_uh_neighbor", f"found a UH neighbor at distance "
                                  f"{reached:.6f}", level="INFO")
                return UHNeighbor(candidate, candidate_certificate, reached, search_log)

    raise NotFound(f"no UH neighbor within {epsilon} after {len(search_log)} candidates", stage="seek",
                   search_log=search_log)
