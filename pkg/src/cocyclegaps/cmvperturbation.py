#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" cmvperturbation.py
Description: Turns a uniformly hyperbolic neighbor B of a conjugated Szegő cocycle A back into a Szegő cocycle.

B is first pushed into the S' class as B', keeping the image direction of the unstable field, and then snapped to
B'' by the functions h and g so that B''(x)u(x) = B(x)u(x). B'' is uniformly hyperbolic because it moves the
unstable field exactly like B does, and its Verblunsky values give the perturbed sampling map beta.
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
import numpy as np

# Local Libraries #
from .cocycles import Generator, SzegoGenerator, szego_cocycle
from .dynamics import make_grid
from .errors import EpsilonOutOfWindow, NotFound, RBelowFloor, ROutOfRange, SectionNotConverged, TOffAnnulus
from .hyperbolicity import (FAMILIES, UHParameters, angle_lift, certify, seek_uh_neighbor, unstable_directions,
                            unstable_section, within_target)
from .matrices import (R_FLOOR, TWO_PI, apply, distance, realize_sprime, reflection, rotation, sprime_extract,
                       szego_su11, to_sl2)
from .samplingmaps import DISK


# Definitions #
_logger = AdvancedLogger("cmvperturbation")

RADIUS_SLACK = 0.02
RADIUS_SHRINK = 0.98
ANNULUS_TOLERANCE = 1e-9
NUDGE_HEIGHT = 0.01
MAX_RETRIES = 6
SEEK_FRACTION = 1.0 / 3.0


# Classes #
@dataclasses.dataclass(frozen=True)
class AnnulusSpec:
    """The closed annulus of points t with |t| = r / sqrt(1 - r^2) for r in [r1, r2].

    Attributes:
        r1 (float): The smallest radius.
        r2 (float): The largest radius.
    """
    r1: float
    r2: float

    def __post_init__(self):
        if not 0.0 < self.r1 <= self.r2 < 1.0:
            raise ROutOfRange(f"the annulus needs 0 < r1 <= r2 < 1, got {self.r1} and {self.r2}")

    @classmethod
    def from_data(cls, radii):
        """Creates the annulus around sampled radii with a little slack on both sides.

        Args:
            radii: The radii |f(x)| on the closed support.

        Returns:
            :obj:`AnnulusSpec`: The annulus with r1 = 0.98 min r and r2 = max r + 0.02 (1 - max r).
        """
        radii = np.asarray(radii, dtype=float)
        smallest = float(np.min(radii))
        if smallest < R_FLOOR:
            raise RBelowFloor(f"the Verblunsky radius drops to {smallest:.3e} on the support")
        largest = float(np.max(radii))
        return cls(RADIUS_SHRINK * smallest, largest + RADIUS_SLACK * (1.0 - largest))

    @staticmethod
    def rho(r):
        """The annulus radius r / sqrt(1 - r^2) of a Verblunsky radius."""
        r = np.asarray(r, dtype=float)
        return r / np.sqrt(1.0 - r ** 2)

    @staticmethod
    def radius(rho):
        """The Verblunsky radius of an annulus radius, the inverse of rho."""
        rho = np.asarray(rho, dtype=float)
        return rho / np.sqrt(1.0 + rho ** 2)

    @property
    def rho_range(self):
        """tuple: The inner and outer radii of the annulus."""
        return float(self.rho(self.r1)), float(self.rho(self.r2))

    @property
    def window(self):
        """tuple: The open window of stretch factors where the snap-back solve stays inside [0, 1)."""
        return self.r2 / (1.0 + math.sqrt(1.0 - self.r2 ** 2)), 1.0 / self.r2

    def contains(self, t, tolerance=ANNULUS_TOLERANCE):
        """Returns a boolean mask of the points on the annulus."""
        size = np.linalg.norm(np.asarray(t, dtype=float), axis=-1)
        inner, outer = self.rho_range
        return (size >= inner - tolerance) & (size <= outer + tolerance)

    def describe(self):
        lo, hi = self.window
        return {"r1": self.r1, "r2": self.r2, "epsilon_window": [lo, hi]}


@dataclasses.dataclass(frozen=True, eq=False)
class PerturbationFrame:
    """The pointwise data of the S' construction on the lattice nodes of the support.

    Attributes:
        points (:obj:`ndarray`): The (n, d) support nodes.
        indices (:obj:`ndarray`): Their flat indices in the lattice.
        resolution (int): The lattice resolution.
        r (:obj:`ndarray`): The radii |f(x)|.
        theta_prime (float): The half phase psi / 2.
        b_block (:obj:`ndarray`): The b-blocks of B.
        tau (:obj:`ndarray`): The unstable angles, R_-tau u = (1, 0).
        y (:obj:`ndarray`): The matrices b R_tau.
        theta_tilde (:obj:`ndarray`): The normalized first columns of y as (-cos, sin) angles.
        epsilon (:obj:`ndarray`): The lengths of the first columns of y.
        omega (:obj:`ndarray`): The angles with R_omega R_theta' u = (-1, 0).
        t_point (:obj:`ndarray`): The (n, 2) points of the annulus.
        rho (:obj:`ndarray`): The annulus radii r / sqrt(1 - r^2).
        active (:obj:`ndarray`): If B differs from A at the node.
        annulus (:obj:`AnnulusSpec`): The annulus.
        f (:obj:`SamplingMap`): The Verblunsky map of A.
        z (:obj:`UnitCirclePhase`): The spectral parameter.
        support (:obj:`SupportBox`): The support.
        m (int): The number of past steps of the unstable directions.
    """
    points: np.ndarray
    indices: np.ndarray
    resolution: int
    r: np.ndarray
    theta_prime: float
    b_block: np.ndarray
    tau: np.ndarray
    y: np.ndarray
    theta_tilde: np.ndarray
    epsilon: np.ndarray
    omega: np.ndarray
    t_point: np.ndarray
    rho: np.ndarray
    active: np.ndarray
    annulus: AnnulusSpec
    f: typing.Any
    z: typing.Any
    support: typing.Any
    m: int

    def __len__(self):
        return len(self.points)

    @property
    def unstable(self):
        """:obj:`ndarray`: The (n, 2) unstable directions (cos tau, sin tau)."""
        return np.stack([np.cos(self.tau), np.sin(self.tau)], axis=-1)

    def residuals(self):
        """The worst violations of the frame invariants.

        Returns:
            dict: The column normalization, the annulus radius and the omega rotation residuals.
        """
        column = self.y[:, :, 0] / self.epsilon[:, None]
        expected = np.stack([-np.cos(self.theta_tilde), np.sin(self.theta_tilde)], axis=-1)
        turned = apply(rotation(self.omega) @ rotation(np.full(len(self), self.theta_prime)), self.unstable)
        return {"column": float(np.max(np.abs(column - expected), initial=0.0)),
                "radius": float(np.max(np.abs(np.linalg.norm(self.t_point, axis=-1) - self.rho), initial=0.0)),
                "omega": float(np.max(np.abs(turned - np.array([-1.0, 0.0])), initial=0.0))}

    def summary(self):
        """Returns a JSON ready summary of this frame."""
        return {"nodes": len(self), "active": int(np.sum(self.active)),
                "epsilon_range": [float(np.min(self.epsilon)), float(np.max(self.epsilon))],
                "annulus": self.annulus.describe(), "m": self.m}


@dataclasses.dataclass
class PerturbationResult:
    """The outcome of the CMV perturbation pipeline.

    Attributes:
        beta (:obj:`SamplingMap`): The perturbed Verblunsky map.
        distances (dict): The grid sup distances AB, BB', B'B'' and AB''.
        certificates (dict): The certificates of B, B'' and the cocycle of beta.
        verification_residual (float): The largest distance between the Szegő matrices of beta and B'' on the grid.
        eq1_residual (float): The largest |B''(x)u(x) - B(x)u(x)| on the support nodes.
        sprime_residual (float): The largest distance between B'' and its S' parameters on the support nodes.
        frame (:obj:`PerturbationFrame`): The frame on the support nodes.
        stages (list): One record per stage.
        nudged (bool): If f was first nudged away from zero.
    """
    beta: typing.Any
    distances: dict
    certificates: dict
    verification_residual: float
    eq1_residual: float
    sprime_residual: float
    frame: PerturbationFrame = None
    stages: list = dataclasses.field(default_factory=list)
    nudged: bool = False

    def to_json(self, beta_map_file=None):
        return {"distances": self.distances,
                "residuals": {"eq1": self.eq1_residual, "beta_roundtrip": self.verification_residual,
                              "sprime": self.sprime_residual},
                "certificates": {key: value.to_json() for key, value in self.certificates.items()},
                "frame": None if self.frame is None else self.frame.summary(),
                "nudged": self.nudged, "stages": self.stages, "beta_map_file": beta_map_file}


# Functions #
def h_g(t, eps, annulus):
    """Solves for the radius s and the rotation beta that snap a stretched unit vector back onto the S' form.

    Writing t = rho (-cos eta, sin eta) with rho = r / sqrt(1 - r^2), the vector
    v = ((-1, 0) + r eps (-cos eta, sin eta)) / sqrt(1 - r^2) equals
    ((-1, 0) + s (-cos(eta + beta), sin(eta + beta))) / sqrt(1 - s^2) for a unique s in [0, 1) and beta in
    [-pi, pi]. With q = sqrt(1 - s^2) this reads q = -2 v1 / (1 + |v|^2). At eps = 1 the answer is (r, 0) exactly.

    Args:
        t: The (..., 2) points of the annulus.
        eps: The stretch factors, broadcastable against t[..., 0].
        annulus (:obj:`AnnulusSpec`): The annulus.

    Returns:
        tuple: The arrays s and beta.
    """
    t = np.asarray(t, dtype=float)
    eps = np.broadcast_to(np.asarray(eps, dtype=float), t.shape[:-1])
    lo, hi = annulus.window
    if np.any((eps <= lo) | (eps >= hi)):
        raise EpsilonOutOfWindow(f"the stretch factors span [{np.min(eps)}, {np.max(eps)}] which leaves the "
                                 f"window ({lo}, {hi})")
    if not np.all(annulus.contains(t)):
        raise TOffAnnulus(f"a point is off the annulus of radii {annulus.rho_range}")

    r = annulus.radius(np.linalg.norm(t, axis=-1))
    eta = np.arctan2(t[..., 1], -t[..., 0])
    scale = 1.0 / np.sqrt(1.0 - r ** 2)
    v1 = scale * (-1.0 - r * eps * np.cos(eta))
    v2 = scale * (r * eps * np.sin(eta))
    q = -2.0 * v1 / (1.0 + v1 ** 2 + v2 ** 2)
    s = np.sqrt(np.maximum((1.0 - q) * (1.0 + q), 0.0))
    turned = np.arctan2(v2 * q, -1.0 - v1 * q)
    beta = (turned - eta + math.pi) % TWO_PI - math.pi

    exact = eps == 1.0
    s = np.where(exact, r, s)
    beta = np.where(exact, 0.0, beta)
    return s, beta


def reconstruct(t, eps, s, beta, annulus):
    """Returns both sides of the snap-back identity, the stretched vector and its S' reconstruction."""
    t = np.asarray(t, dtype=float)
    r = annulus.radius(np.linalg.norm(t, axis=-1))
    eta = np.arctan2(t[..., 1], -t[..., 0])
    stretched = (np.stack([-1.0 - r * eps * np.cos(eta), r * eps * np.sin(eta)], axis=-1)
                 / np.sqrt(1.0 - r ** 2)[..., None])
    angle = eta + beta
    rebuilt = (np.stack([-1.0 - s * np.cos(angle), s * np.sin(angle)], axis=-1)
               / np.sqrt(1.0 - np.asarray(s) ** 2)[..., None])
    return stretched, rebuilt


def frame_values(b_values, r, theta_prime, u):
    """Computes the S' frame of B at points from its matrices, radii and unstable directions.

    Args:
        b_values (:obj:`ndarray`): The (n, 2, 2) matrices B(x).
        r (:obj:`ndarray`): The radii |f(x)|.
        theta_prime (float): The half phase psi / 2.
        u (:obj:`ndarray`): The (n, 2) unstable directions, of either sign.

    Returns:
        dict: b_block, tau, y, theta_tilde, epsilon, omega, rho and t_point.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < R_FLOOR):
        raise RBelowFloor(f"the Verblunsky radius drops to {np.min(r):.3e} on the support")
    b_block = sprime_extract(b_values, r, theta_prime)
    tau = np.arctan2(u[:, 1], u[:, 0])
    y = b_block @ rotation(tau)
    epsilon = np.hypot(y[:, 0, 0], y[:, 1, 0])
    theta_tilde = np.arctan2(y[:, 1, 0], -y[:, 0, 0])
    omega = (math.pi - theta_prime - tau) % TWO_PI
    rho = AnnulusSpec.rho(r)
    carried = rotation(omega) @ reflection(theta_tilde) @ rotation(-tau)
    t_point = rho[:, None] * apply(carried, np.stack([np.cos(tau), np.sin(tau)], axis=-1))
    return {"b_block": b_block, "tau": tau, "y": y, "theta_tilde": theta_tilde, "epsilon": epsilon,
            "omega": omega, "rho": rho, "t_point": t_point}


def build_frame(f, z, b, section, support, annulus=None):
    """Builds the S' frame of B on the support nodes of a lifted unstable section.

    Args:
        f (:obj:`SamplingMap`): The Verblunsky map of A.
        z (:obj:`UnitCirclePhase`): The spectral parameter.
        b (:obj:`Cocycle`): The UH cocycle B, equal to A off the support.
        section (:obj:`UnstableSection`): The unstable section of B on the support grid, angle lifted.
        support (:obj:`SupportBox`): The support.
        annulus (:obj:`AnnulusSpec`, optional): The annulus; built from the radii on the nodes by default.

    Returns:
        :obj:`PerturbationFrame`: The frame.
    """
    points = section.grid.points
    r = np.abs(f(points))
    if annulus is None:
        annulus = AnnulusSpec.from_data(r)
    b_values = b(points)
    active = ~np.all(b_values == SzegoGenerator(f, z)(points), axis=(1, 2))
    values = frame_values(b_values, r, z.theta_prime, section.u_values)
    resolution = section.grid.resolution[0]
    return PerturbationFrame(points=points, indices=lattice_indices(points, resolution), resolution=resolution,
                             r=r, theta_prime=z.theta_prime, active=active,
                             annulus=annulus, f=f, z=z, support=support, m=section.m, **values)


class BPrimeGenerator(Generator):
    """B pushed into the S' class: (R_theta' + r S(theta_tilde) R_-tau) / sqrt(1 - r^2) where B differs from A.

    Attributes:
        source (:obj:`Cocycle`): The cocycle B.
        reference (:obj:`SzegoGenerator`): The generator of A.
        support (:obj:`SupportBox`): The support.
        annulus (:obj:`AnnulusSpec`): The annulus.
        m (int): The number of past steps for the unstable directions.
    """
    kind = "bprime"

    def __init__(self, source, frame):
        self.source = source
        self.reference = SzegoGenerator(frame.f, frame.z)
        self.support = frame.support
        self.annulus = frame.annulus
        self.m = frame.m

    def _active(self, points, values):
        active = self.support.contains(points)
        if active.any():
            active[active] = ~np.all(values[active] == self.reference(points[active]), axis=(1, 2))
        return active

    def _realize(self, r, theta_prime, values):
        return realize_sprime(r, theta_prime, values["theta_tilde"] - values["tau"])

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        values = self.source(points)
        active = self._active(points, values)
        if active.any():
            inside = points[active]
            r = np.abs(self.reference.f(inside))
            u = unstable_directions(self.source, inside, self.m)
            frame = frame_values(values[active], r, self.reference.z.theta_prime, u)
            values = values.copy()
            values[active] = self._realize(r, self.reference.z.theta_prime, frame)
        return values

    def describe(self):
        return {"kind": self.kind, "m": self.m, "annulus": self.annulus.describe(),
                "support": self.support.describe(), "source": self.source.generator.describe()}


class BDoublePrimeGenerator(BPrimeGenerator):
    """The snapped cocycle (R_theta' + s S(theta_tilde) R_-tau R_beta) / sqrt(1 - s^2) with s, beta from h and g."""
    kind = "bdoubleprime"

    def parameters(self, r, theta_prime, values):
        """The S' parameters (s, theta) of B'' from a frame."""
        s, beta = h_g(values["t_point"], values["epsilon"], self.annulus)
        return s, values["theta_tilde"] - values["tau"] + beta

    def _realize(self, r, theta_prime, values):
        s, theta = self.parameters(r, theta_prime, values)
        return realize_sprime(s, theta_prime, theta)


def bprime(frame, b):
    """Creates B' from the frame and the UH cocycle B."""
    return b.with_generator(BPrimeGenerator(b, frame))


def bdoubleprime(frame, b_prime):
    """Creates B'' from the frame and B', reusing the cocycle B that B' was built from."""
    return b_prime.with_generator(BDoublePrimeGenerator(b_prime.generator.source, frame))


def frame_parameters(frame):
    """The S' parameters (s, theta) of B'' on the frame nodes."""
    s, beta = h_g(frame.t_point, frame.epsilon, frame.annulus)
    return s, frame.theta_tilde - frame.tau + beta


def extract_beta(frame, z=None):
    """Reads the Verblunsky map of B'' off the frame.

    beta(x) = s e^(i (theta_tilde - tau + g - theta')) on the nodes where B differs from A; the map is f plus a
    lattice correction that vanishes on every other node.

    Args:
        frame (:obj:`PerturbationFrame`): The frame.
        z (:obj:`UnitCirclePhase`, optional): The spectral parameter, the frame's by default.

    Returns:
        :obj:`SamplingMap`: The perturbed map.
    """
    z = frame.z if z is None else z
    f = frame.f
    s, theta = frame_parameters(frame)
    values = s * np.exp(1j * (theta - z.theta_prime))
    delta = np.zeros(frame.resolution ** f.dims, dtype=complex)
    active = frame.active
    delta[frame.indices[active]] = values[active] - f(frame.points[active])
    return f.with_lattice_delta(delta.reshape((frame.resolution,) * f.dims))


def lattice_indices(points, resolution):
    """The flat row-major lattice indices of lattice nodes."""
    index = np.rint(np.asarray(points, dtype=float) * resolution).astype(int) % resolution
    return np.ravel_multi_index(tuple(index.T), (resolution,) * index.shape[1])


def nudge_nonzero(f, support, grid, height=NUDGE_HEIGHT):
    """Adds height times the support plateau to f on the lattice, so that |f| = height on the support nodes.

    Args:
        f (:obj:`SamplingMap`): The map, identically zero on the support.
        support (:obj:`SupportBox`): The support.
        grid (:obj:`OrbitGrid`): The uniform lattice.
        height (float, optional): The height of the nudge.

    Returns:
        :obj:`SamplingMap`: The nudged map, with the Fourier part of f.
    """
    plateau = height * support.plateau(grid.points).astype(complex)
    return f.with_lattice_delta(plateau.reshape(grid.shape))


def eq1_residual(b, b_double_prime, points, u):
    """The largest |B''(x)u(x) - B(x)u(x)| over the points."""
    return float(np.max(np.abs(apply(b_double_prime(points), u) - apply(b(points), u)), initial=0.0))


def _support_grid(grid, support):
    mask = support.contains(grid.points)
    if not mask.any():
        raise NotFound("the support contains no lattice nodes", stage="support")
    return grid.restrict(mask)


def pipeline(f, dyn, z, support, eps_target, search_budget, params=None, rng=None, families=FAMILIES,
             max_retries=MAX_RETRIES):
    """Opens a gap at z by perturbing the Verblunsky map f within eps_target on the support.

    The neighbor search starts with a distance budget of eps_target / 3 and halves it whenever the snapped cocycle
    ends up too far from A or fails to certify, up to max_retries times.

    Args:
        f (:obj:`SamplingMap`): The disk valued Verblunsky map.
        dyn (:obj:`BaseDynamics`): The dynamics.
        z (:obj:`UnitCirclePhase`): The spectral parameter.
        support (:obj:`SupportBox`): The support box.
        eps_target (float): The largest allowed distance between A and B''.
        search_budget (int): The number of candidates per neighbor search.
        params (:obj:`UHParameters`, optional): The certificate thresholds.
        rng (:obj:`Generator`, optional): The numpy random generator of the neighbor search.
        families (tuple, optional): The dressing families in search order.
        max_retries (int, optional): The number of times the search distance epsilon is halved after a frame failure,
            a distance overshoot or a failed certificate. A neighbor search that finds nothing ends the run at once.

    Returns:
        :obj:`PerturbationResult`: The result; every claim in it was re-checked numerically.
    """
    if f.codomain != DISK:
        raise ValueError("the CMV pipeline needs a disk valued sampling map")
    if not eps_target > 0.0:
        raise ValueError(f"the target distance must be positive, got {eps_target}")
    params = UHParameters() if params is None else params
    rng = np.random.default_rng(0) if rng is None else rng
    grid = make_grid(dyn, f.resolution or params.resolution)
    support_grid = _support_grid(grid, support)
    stages = []

    original = szego_cocycle(dyn, f, z)
    nudged = False
    if float(np.max(np.abs(f(support_grid.points)))) < R_FLOOR:
        f = nudge_nonzero(f, support, grid)
        nudged = True
        nudge_distance = distance(szego_cocycle(dyn, f, z)(grid.points), original(grid.points))
        stages.append({"stage": "nudge", "height": NUDGE_HEIGHT, "distance": nudge_distance})
        _logger.trace_log("cmvperturbation", "pipeline", f"f vanishes on the support, nudged it by {NUDGE_HEIGHT}",
                          level="INFO")
    a = szego_cocycle(dyn, f, z)
    annulus = AnnulusSpec.from_data(np.abs(f(support_grid.points)))

    epsilon = SEEK_FRACTION * eps_target
    failed = "seek"
    for attempt in range(max_retries + 1):
        try:
            neighbor = seek_uh_neighbor(a, support, epsilon, search_budget, grid=grid, params=params, rng=rng,
                                        families=families)
        except NotFound as error:
            stages.append({"stage": "seek", "attempt": attempt, "epsilon": epsilon, "outcome": "NotFound"})
            raise NotFound(str(error), stage="seek", search_log=error.search_log, stages=stages) from error
        b = neighbor.cocycle
        stages.append({"stage": "seek", "attempt": attempt, "epsilon": epsilon, "distance": neighbor.distance,
                       "candidates": len(neighbor.search_log)})

        try:
            section = angle_lift(unstable_section(b, support_grid, certificate=neighbor.certificate, params=params))
            frame = build_frame(f, z, b, section, support, annulus)
            b_prime = bprime(frame, b)
            b_double_prime = bdoubleprime(frame, b_prime)
            points = grid.points
            b_double_values = b_double_prime(points)
        except (SectionNotConverged, EpsilonOutOfWindow, TOffAnnulus) as error:
            failed = "frame"
            stages.append({"stage": "frame", "attempt": attempt, "outcome": type(error).__name__,
                           "message": str(error)})
            _logger.trace_log("cmvperturbation", "pipeline", f"frame failed: {error}; halving the budget",
                              level="DEBUG")
            epsilon *= 0.5
            continue

        distances = {"AB": distance(original(points), b(points)),
                     "BB'": distance(b(points), b_prime(points)),
                     "B'B''": distance(b_prime(points), b_double_values),
                     "AB''": distance(original(points), b_double_values)}
        stages.append({"stage": "bdoubleprime", "attempt": attempt, "distances": distances,
                       "frame": frame.summary()})
        if not within_target(distances["AB''"], eps_target):
            failed = "distance"
            far = distances["AB''"]
            _logger.trace_log("cmvperturbation", "pipeline", f"B'' is {far:.6f} away, halving the budget",
                              level="DEBUG")
            epsilon *= 0.5
            continue

        certificate = certify(b_double_prime, grid, params=params)
        stages.append({"stage": "certify", "attempt": attempt, "verdict": certificate.verdict})
        if not certificate.is_uh:
            failed = "certify"
            epsilon *= 0.5
            continue

        beta = extract_beta(frame, z)
        map_cocycle = szego_cocycle(dyn, beta, z)
        map_certificate = certify(map_cocycle, grid, params=params)
        stages.append({"stage": "map", "attempt": attempt, "verdict": map_certificate.verdict})
        if not map_certificate.is_uh:
            failed = "map"
            epsilon *= 0.5
            continue

        roundtrip = distance(to_sl2(szego_su11(beta(points), z.psi)), b_double_values)
        s, theta = frame_parameters(frame)
        sprime = distance(b_double_prime(frame.points), realize_sprime(s, z.theta_prime, theta))
        result = PerturbationResult(
            beta=beta, distances=distances,
            certificates={"B": neighbor.certificate, "B''": certificate, "map": map_certificate},
            verification_residual=roundtrip, eq1_residual=eq1_residual(b, b_double_prime, frame.points,
                                                                      frame.unstable),
            sprime_residual=sprime, frame=frame, stages=stages, nudged=nudged)
        reached = distances["AB''"]
        _logger.trace_log("cmvperturbation", "pipeline", f"opened a gap at psi = {z.psi:.6f} within {reached:.6f}",
                          level="INFO")
        return result

    raise NotFound(f"no perturbation within {eps_target} after {max_retries} retries", stage=failed, stages=stages)
