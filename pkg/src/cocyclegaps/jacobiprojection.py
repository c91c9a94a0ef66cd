#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" jacobiprojection.py
Description: Projects a cocycle B that differs from a Jacobi cocycle A only on a box K back into the Jacobi class.

On K the new matrices solve for the triple product of B over T^-1(x), x, T(x), keeping every off-diagonal
coefficient; the projected cocycle Phi(B) is then conjugate to B by an explicit Psi(B), so it is uniformly hyperbolic
whenever B is. The diagonal map read off Phi(B) gives the perturbed f_b.
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
from advancedlogging import AdvancedLogger
import numpy as np

# Local Libraries #
from .cocycles import Cocycle, Generator, jacobi_cocycle
from .dynamics import make_grid
from .errors import DomainOverlap, NotCAK, NotFound, PivotTooSmall
from .hyperbolicity import ROTATION_FAMILY, SHEAR_FAMILY, UHParameters, certify, seek_uh_neighbor, within_target
from .matrices import distance, identity, inverse_sl2, j_form
from .samplingmaps import REAL


# Definitions #
_logger = AdvancedLogger("jacobiprojection")

P_FLOOR = 1e-6
CAK_TOLERANCE = 1e-12
NUDGE_HEIGHT = 1e-3
MAX_RETRIES = 6
SEEK_FRACTION = 1.0 / 3.0
DEGENERATE_TOLERANCE = 1e-12

DISJOINTNESS_NOTE = ("The box K is required to be disjoint from its images T(K) and T^2(K). A box disjoint from "
                     "T(X) and T^2(X) cannot exist when T maps X onto itself, so the disjointness of K, T(K) and "
                     "T^2(K) is what is checked.")


# Classes #
@dataclasses.dataclass(frozen=True)
class ProjectionDomain:
    """A box K verified to be disjoint from T(K) and T^2(K) on a lattice.

    Attributes:
        box (:obj:`SupportBox`): The box K.
        grid (:obj:`OrbitGrid`): The lattice the verification ran on.
        margin (float): The required separation, one lattice mesh.
        separations (dict): The smallest distances from the images of the nodes of K back to K.
    """
    box: typing.Any
    grid: typing.Any
    margin: float
    separations: dict

    @classmethod
    def verify(cls, box, dyn, grid):
        """Checks the disjointness of K, T(K) and T^2(K) on the nodes of a lattice with a one mesh margin.

        Args:
            box (:obj:`SupportBox`): The box K.
            dyn (:obj:`BaseDynamics`): The dynamics.
            grid (:obj:`OrbitGrid`): The lattice.

        Returns:
            :obj:`ProjectionDomain`: The verified domain.
        """
        nodes = grid.points[box.contains(grid.points)]
        if len(nodes) == 0:
            raise DomainOverlap("the box contains no lattice nodes, refine the grid")
        margin = grid.mesh
        separations = {}
        for power in (1, 2):
            separation = float(np.min(box.distance(dyn.iterate(nodes, power))))
            separations[f"T{power}"] = separation
            if separation <= margin:
                raise DomainOverlap(f"T^{power}(K) comes within {separation:.6f} of K, closer than the margin "
                                    f"{margin:.6f}")
        return cls(box, grid, margin, separations)

    def regions(self, dyn, points):
        """Returns the masks of the points in K, T(K) and T^-1(K)."""
        points = np.asarray(points, dtype=float)
        in_k = self.box.contains(points)
        in_image = self.box.contains(dyn.inverse_step(points))
        in_preimage = self.box.contains(dyn.step(points))
        return in_k, in_image, in_preimage

    def to_json(self):
        return {"K_box": self.box.describe(), "margin": self.margin, "separations": self.separations}


@dataclasses.dataclass(frozen=True)
class LocalTriple:
    """The local solve at the points x of K, vectorized.

    Attributes:
        p, q, r, s (:obj:`ndarray`): The entries of B(x).
        t1, a1 (:obj:`ndarray`): The parameters of A(T x).
        t2, a2 (:obj:`ndarray`): The parameters of A(x).
        t3, a3 (:obj:`ndarray`): The parameters of A(T^-1 x).
        t1_prime, t2_prime, t3_prime (:obj:`ndarray`): The solved parameters; the a's are kept.
        energy (float): The energy E.
    """
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    t1: np.ndarray
    a1: np.ndarray
    t2: np.ndarray
    a2: np.ndarray
    t3: np.ndarray
    a3: np.ndarray
    t1_prime: np.ndarray
    t2_prime: np.ndarray
    t3_prime: np.ndarray
    energy: float = 0.0

    @property
    def b_prime(self):
        """tuple: The diagonal values b_i' = E - t_i' a_i."""
        return (self.energy - self.t1_prime * self.a1, self.energy - self.t2_prime * self.a2,
                self.energy - self.t3_prime * self.a3)

    def matrices(self):
        """Returns the primed J matrices at T x, x and T^-1 x."""
        return j_form(self.t1_prime, self.a1), j_form(self.t2_prime, self.a2), j_form(self.t3_prime, self.a3)

    def product_residual(self, b_center):
        """The largest entrywise gap between the primed triple product and A(T x) B(x) A(T^-1 x)."""
        first, second, third = self.matrices()
        target = j_form(self.t1, self.a1) @ b_center @ j_form(self.t3, self.a3)
        return float(np.max(np.abs(first @ second @ third - target), initial=0.0))


@dataclasses.dataclass
class ProjectionResult:
    """The projected cocycle and its checks.

    Attributes:
        phi (:obj:`Cocycle`): The Jacobi class cocycle Phi(B).
        psi_values (:obj:`ndarray`): Psi(B) on the lattice.
        residuals (dict): The triple product, conjugacy and J form residuals.
        distance (float): The lattice sup distance between Phi(B) and A.
        domain (:obj:`ProjectionDomain`): The domain.
        energy (float): The energy E.
    """
    phi: Cocycle
    psi_values: np.ndarray
    residuals: dict
    distance: float
    domain: ProjectionDomain
    energy: float

    def to_json(self):
        return {"residuals": self.residuals, "distance": self.distance, "K_box": self.domain.box.describe(),
                "E": self.energy}


@dataclasses.dataclass
class JacobiPerturbation:
    """The outcome of the Jacobi gap opening pipeline.

    Attributes:
        f_b_prime (:obj:`SamplingMap`): The perturbed diagonal map.
        certificate (:obj:`UHCertificate`): The certificate of the cocycle of f_b_prime.
        distance (float): The lattice sup distance between the original and the perturbed cocycles.
        projection (:obj:`ProjectionResult`): The projection, None when A was already UH.
        certificates (dict): The certificates of B, Phi(B) and the final map.
        stages (list): One record per stage.
        nudged (bool): If f_b was first nudged off the energy.
        note (str): The disjointness reading of the domain.
    """
    f_b_prime: typing.Any
    certificate: typing.Any
    distance: float
    projection: typing.Optional[ProjectionResult] = None
    certificates: dict = dataclasses.field(default_factory=dict)
    stages: list = dataclasses.field(default_factory=list)
    nudged: bool = False
    note: str = DISJOINTNESS_NOTE

    def to_json(self, map_file=None):
        return {"distance": self.distance, "certificate": self.certificate.to_json(),
                "certificates": {key: value.to_json() for key, value in self.certificates.items()},
                "projection": None if self.projection is None else self.projection.to_json(),
                "nudged": self.nudged, "stages": self.stages, "note": self.note, "f_b_map_file": map_file}


# Functions #
def solve_local(a_triple, b_center, energy, p_floor=P_FLOOR):
    """Solves for the Jacobi triple with the same product as A(T x) B(x) A(T^-1 x).

    With t2' = p the remaining parameters are t3' = t3 + a3 (q - A_12(x)) / p and t1' = t1 + (a2 - r) / (a1 p).
    Both increments vanish exactly when B(x) = A(x).

    Args:
        a_triple (tuple): The (n, 2, 2) stacks A(T x), A(x) and A(T^-1 x), all in J form.
        b_center (:obj:`ndarray`): The (n, 2, 2) stack B(x).
        energy (float): The energy E.
        p_floor (float, optional): The smallest allowed |p|.

    Returns:
        :obj:`LocalTriple`: The solve.
    """
    after, center, before = (np.asarray(m, dtype=float) for m in a_triple)
    b_center = np.asarray(b_center, dtype=float)
    p, q, r, s = b_center[..., 0, 0], b_center[..., 0, 1], b_center[..., 1, 0], b_center[..., 1, 1]
    smallest = float(np.min(np.abs(p), initial=np.inf))
    if smallest < p_floor:
        raise PivotTooSmall(f"the pivot p drops to {smallest:.3e}, below {p_floor}; the trace of A nearly "
                            f"vanishes on K")
    t1, a1 = after[..., 0, 0], after[..., 1, 0]
    t2, a2 = center[..., 0, 0], center[..., 1, 0]
    t3, a3 = before[..., 0, 0], before[..., 1, 0]
    t3_prime = t3 + a3 * (q - center[..., 0, 1]) / p
    t1_prime = t1 + (a2 - r) / (a1 * p)
    return LocalTriple(p=p, q=q, r=r, s=s, t1=t1, a1=a1, t2=t2, a2=a2, t3=t3, a3=a3, t1_prime=t1_prime,
                       t2_prime=p.copy(), t3_prime=t3_prime, energy=float(energy))


class PhiGenerator(Generator):
    """The projected generator: the solved J matrices on K, T(K) and T^-1(K) and A everywhere else.

    Attributes:
        reference (:obj:`Generator`): The generator of A, in J form.
        source (:obj:`Cocycle`): The cocycle B.
        domain (:obj:`ProjectionDomain`): The domain.
        p_floor (float): The smallest allowed pivot.
    """
    kind = "phi"

    def __init__(self, reference, source, domain, p_floor=P_FLOOR):
        self.reference = reference
        self.source = source
        self.domain = domain
        self.p_floor = p_floor

    def _solve(self, centers):
        dyn = self.source.dynamics
        a_triple = (self.reference(dyn.step(centers)), self.reference(centers),
                    self.reference(dyn.inverse_step(centers)))
        return solve_local(a_triple, self.source(centers), 0.0, self.p_floor)

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        dyn = self.source.dynamics
        values = self.reference(points).copy()
        in_k, in_image, in_preimage = self.domain.regions(dyn, points)
        if np.any((in_k & in_image) | (in_k & in_preimage) | (in_image & in_preimage)):
            raise DomainOverlap("a point lies in two of K, T(K) and T^-1(K)")

        if in_k.any():
            solve = self._solve(points[in_k])
            values[in_k] = j_form(solve.t2_prime, solve.a2)
        if in_image.any():
            solve = self._solve(dyn.inverse_step(points[in_image]))
            values[in_image] = j_form(solve.t1_prime, solve.a1)
        if in_preimage.any():
            solve = self._solve(dyn.step(points[in_preimage]))
            values[in_preimage] = j_form(solve.t3_prime, solve.a3)
        return values

    def describe(self):
        return {"kind": self.kind, "K_box": self.domain.box.describe(), "p_floor": self.p_floor,
                "source": self.source.generator.describe()}


def _cancel(left, right):
    """left times the inverse of right, and the exact identity where both agree entrywise."""
    same = np.all(left == right, axis=(-2, -1))
    return np.where(same[..., None, None], identity(same.shape), left @ inverse_sl2(right))


def psi(phi, b, domain, points):
    """Evaluates the conjugacy Psi(B) at the points.

    Psi is Phi(T^-1 x) B(T^-1 x)^-1 on K, Phi(T^-1 x) Phi(T^-2 x) B(T^-2 x)^-1 B(T^-1 x)^-1 on T(K) and the
    identity elsewhere.

    Args:
        phi (:obj:`Cocycle`): The projected cocycle.
        b (:obj:`Cocycle`): The cocycle B.
        domain (:obj:`ProjectionDomain`): The domain.
        points (:obj:`ndarray`): The (n, d) points.

    Returns:
        :obj:`ndarray`: The (n, 2, 2) values.
    """
    points = np.asarray(points, dtype=float)
    dyn = b.dynamics
    values = identity((len(points),))
    in_k, in_image, _ = domain.regions(dyn, points)
    if in_k.any():
        back = dyn.inverse_step(points[in_k])
        values[in_k] = _cancel(phi(back), b(back))
    if in_image.any():
        back = dyn.inverse_step(points[in_image])
        back_twice = dyn.inverse_step(back)
        inner = _cancel(phi(back_twice), b(back_twice))
        same = np.all(inner == identity((len(back),)), axis=(-2, -1))
        outer = phi(back) @ inner @ inverse_sl2(b(back))
        values[in_image] = np.where(same[:, None, None], _cancel(phi(back), b(back)), outer)
    return values


def project(a, b, domain, energy, p_floor=P_FLOOR):
    """Projects B into the Jacobi class by the local solve on K and checks every identity on the lattice.

    Args:
        a (:obj:`Cocycle`): The Jacobi cocycle A.
        b (:obj:`Cocycle`): The cocycle B, equal to A off K.
        domain (:obj:`ProjectionDomain`): The verified domain.
        energy (float): The energy E.
        p_floor (float, optional): The smallest allowed pivot.

    Returns:
        :obj:`ProjectionResult`: The projection.
    """
    points = domain.grid.points
    dyn = a.dynamics
    outside = ~domain.box.contains(points)
    if outside.any():
        gap = distance(a(points[outside]), b(points[outside]))
        if gap > CAK_TOLERANCE:
            raise NotCAK(f"B differs from A by {gap:.3e} outside of K")

    phi = Cocycle(dyn, PhiGenerator(a.generator, b, domain, p_floor))
    phi_values = phi(points)
    psi_values = psi(phi, b, domain, points)

    in_k = ~outside
    k_points = points[in_k]
    triple = (phi(dyn.step(k_points)) @ phi_values[in_k] @ phi(dyn.inverse_step(k_points))
              - b(dyn.step(k_points)) @ b(k_points) @ b(dyn.inverse_step(k_points)))
    conjugated = psi(phi, b, domain, dyn.step(points)) @ b(points) @ inverse_sl2(psi_values)
    j_residual = float(np.max(np.abs(np.stack([phi_values[:, 1, 1],
                                               phi_values[:, 0, 1] * phi_values[:, 1, 0] + 1.0])), initial=0.0))
    if np.any(phi_values[:, 1, 0] <= 0.0):
        j_residual = np.inf
    residuals = {"triple": float(np.max(np.abs(triple), initial=0.0)),
                 "conjugacy": float(np.max(np.abs(conjugated - phi_values), initial=0.0)),
                 "j_form": j_residual}
    result = ProjectionResult(phi, psi_values, residuals, distance(phi_values, a(points)), domain, float(energy))
    _logger.trace_log("jacobiprojection", "project", f"projected with residuals {residuals}", level="DEBUG")
    return result


def read_b_prime(result, f_a, f_b):
    """Reads the perturbed diagonal map b' = E - t' a off the projected cocycle on the lattice.

    Args:
        result (:obj:`ProjectionResult`): The projection.
        f_a (:obj:`SamplingMap`): The off-diagonal map.
        f_b (:obj:`SamplingMap`): The diagonal map.

    Returns:
        :obj:`SamplingMap`: f_b plus a lattice correction that vanishes wherever Phi(B) equals A.
    """
    grid = result.domain.grid
    points = grid.points
    phi_values = result.phi(points)
    reference = result.phi.generator.reference(points)
    changed = ~np.all(phi_values == reference, axis=(1, 2))
    delta = np.zeros(len(points))
    b_prime = result.energy - phi_values[changed, 0, 0] * f_a(points[changed])
    delta[changed] = b_prime - f_b(points[changed])
    return f_b.with_lattice_delta(delta.reshape(grid.shape))


def nudge_off_energy(f_b, support, grid, height=NUDGE_HEIGHT):
    """Adds height times the support plateau to f_b on the lattice."""
    return f_b.with_lattice_delta(height * support.plateau(grid.points).reshape(grid.shape))


def perturb_jacobi(f_a, f_b, energy, dyn, support, eps_target, search_budget, params=None, rng=None,
                   max_retries=MAX_RETRIES, p_floor=P_FLOOR):
    """Opens a gap at the energy E by perturbing f_b within eps_target near the support.

    A UH neighbor B of the Jacobi cocycle is searched on the support K, projected back into the Jacobi class and
    read off as a new diagonal map. Rotation dressings are tried first; a vanishing pivot falls back to lower
    shears, which keep the pivot equal to the trace.

    Args:
        f_a (:obj:`SamplingMap`): The off-diagonal map, positive.
        f_b (:obj:`SamplingMap`): The diagonal map.
        energy (float): The energy E.
        dyn (:obj:`BaseDynamics`): The dynamics.
        support (:obj:`SupportBox`): The box K.
        eps_target (float): The largest allowed distance between the cocycles.
        search_budget (int): The number of candidates per neighbor search.
        params (:obj:`UHParameters`, optional): The certificate thresholds.
        rng (:obj:`Generator`, optional): The numpy random generator of the neighbor search.
        max_retries (int, optional): The number of times the search distance epsilon is halved after a distance
            overshoot or a failed certificate. A neighbor search that finds nothing ends the run at once.
        p_floor (float, optional): The smallest allowed pivot.

    Returns:
        :obj:`JacobiPerturbation`: The perturbed map with its certificate.
    """
    if f_b.codomain != REAL:
        raise ValueError("the diagonal map must be real valued")
    if not eps_target > 0.0:
        raise ValueError(f"the target distance must be positive, got {eps_target}")
    params = UHParameters() if params is None else params
    rng = np.random.default_rng(0) if rng is None else rng
    grid = make_grid(dyn, f_b.resolution or params.resolution)
    f_a.check_floor(grid.points)
    domain = ProjectionDomain.verify(support, dyn, grid)
    _logger.trace_log("jacobiprojection", "perturb_jacobi", DISJOINTNESS_NOTE, level="WARNING")
    stages = [{"stage": "domain", **domain.to_json()}]

    original = jacobi_cocycle(dyn, f_a, f_b, energy)
    certificate = certify(original, grid, params=params)
    if certificate.is_uh:
        stages.append({"stage": "certify", "verdict": certificate.verdict})
        return JacobiPerturbation(f_b, certificate, 0.0, certificates={"map": certificate}, stages=stages)

    nudged = False
    working = f_b
    if float(np.max(np.abs(f_b(grid.points) - energy))) < DEGENERATE_TOLERANCE:
        working = nudge_off_energy(f_b, support, grid)
        nudged = True
        stages.append({"stage": "nudge", "height": NUDGE_HEIGHT,
                       "distance": distance(jacobi_cocycle(dyn, f_a, working, energy)(grid.points),
                                            original(grid.points))})
        _logger.trace_log("jacobiprojection", "perturb_jacobi", f"f_b equals E, nudged it by {NUDGE_HEIGHT}",
                          level="INFO")
    a = jacobi_cocycle(dyn, f_a, working, energy)

    epsilon = SEEK_FRACTION * eps_target
    failed = "seek"
    for attempt in range(max_retries + 1):
        projection = None
        for families in ((ROTATION_FAMILY, SHEAR_FAMILY), (SHEAR_FAMILY,)):
            try:
                neighbor = seek_uh_neighbor(a, support, epsilon, search_budget, grid=grid, params=params, rng=rng,
                                            families=families)
            except NotFound as error:
                stages.append({"stage": "seek", "attempt": attempt, "epsilon": epsilon, "outcome": "NotFound"})
                raise NotFound(str(error), stage="seek", search_log=error.search_log, stages=stages) from error
            stages.append({"stage": "seek", "attempt": attempt, "epsilon": epsilon, "families": list(families),
                           "distance": neighbor.distance, "candidates": len(neighbor.search_log)})
            try:
                projection = project(a, neighbor.cocycle, domain, energy, p_floor)
                break
            except PivotTooSmall as error:
                stages.append({"stage": "project", "attempt": attempt, "outcome": "PivotTooSmall"})
                if families == (SHEAR_FAMILY,):
                    raise
                _logger.trace_log("jacobiprojection", "perturb_jacobi", f"{error}; retrying with shears",
                                  level="DEBUG")
        stages.append({"stage": "project", "attempt": attempt, **projection.to_json()})

        f_b_prime = read_b_prime(projection, f_a, working)
        perturbed = jacobi_cocycle(dyn, f_a, f_b_prime, energy)
        reached = distance(perturbed(grid.points), original(grid.points))
        if not within_target(reached, eps_target):
            failed = "distance"
            stages.append({"stage": "distance", "attempt": attempt, "distance": reached})
            epsilon *= 0.5
            continue

        map_certificate = certify(perturbed, grid, params=params)
        stages.append({"stage": "map", "attempt": attempt, "verdict": map_certificate.verdict})
        if not map_certificate.is_uh:
            failed = "map"
            epsilon *= 0.5
            continue

        phi_certificate = certify(projection.phi, grid, params=params)
        _logger.trace_log("jacobiprojection", "perturb_jacobi", f"opened a gap at E = {energy} within {reached:.6f}",
                          level="INFO")
        return JacobiPerturbation(f_b_prime, map_certificate, reached, projection,
                                  certificates={"B": neighbor.certificate, "Phi": phi_certificate,
                                                "map": map_certificate},
                                  stages=stages, nudged=nudged)

    raise NotFound(f"no perturbation within {eps_target} after {max_retries} retries", stage=failed, stages=stages)
