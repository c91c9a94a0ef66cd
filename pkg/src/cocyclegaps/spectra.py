#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" spectra.py
Description: Spectra of CMV and Jacobi operators along orbits, computed two ways. The scan route certifies the
transfer matrix cocycle at every parameter of a grid and reads the spectrum off the non-UH verdicts. The truncation
route takes finite sections: Dirichlet blocks for Jacobi and paraorthogonal polynomials for CMV.
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
from advancedlogging import AdvancedLogger, ObjectWithLogging
import numpy as np
import scipy.linalg

# Local Libraries #
from .dynamics import BasePoint, OrbitGrid, make_grid, refine_grid
from .errors import NonpositiveA, RecursionOverflow
from .hyperbolicity import (UH, UNDETERMINED, UHParameters, assess, can_refine, jacobi_log_norm_minima,
                            log_norm_minima)
from .matrices import TWO_PI, szego_su11, to_sl2
from .processors import DEFAULT_CHUNK_SIZE, ChunkPool, split_chunks


# Definitions #
CIRCLE = "circle"
LINE = "line"

JACOBI = "jacobi"
CMV = "cmv"

CONSISTENCY_DELTA = 1e-2
PHASE_SCAN_FACTOR = 16
PHASE_SCAN_ESCALATIONS = 6
BISECTION_STEPS = 48
DEDUPE_TOLERANCE = 1e-9
BOUNDARY_STATES_PER_GAP = 2


# Functions #
def parameter_grid(lo, hi, step):
    """The sorted grid lo, lo + step, ... up to hi inclusive.

    Args:
        lo (float): The first value.
        hi (float): The last allowed value.
        step (float): The spacing.

    Returns:
        :obj:`ndarray`: The grid.
    """
    if not step > 0.0:
        raise ValueError(f"the grid step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"the grid range is empty: {lo} > {hi}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def circle_grid(step):
    """The grid 0, step, ... of phases in [0, 2 pi)."""
    if not step > 0.0:
        raise ValueError(f"the grid step must be positive, got {step}")
    values = step * np.arange(int(math.ceil(TWO_PI / step)))
    return values[values < TWO_PI]


def orbit_samples(sampling_map, dyn, points, n):
    """Evaluates a sampling map along the orbits of the points.

    Returns:
        :obj:`ndarray`: The (n, m) values f(T^k x) for k = 0..n-1.
    """
    points = np.asarray(points, dtype=float)
    samples = []
    for _ in range(n):
        samples.append(sampling_map(points))
        points = dyn.step(points)
    return np.stack(samples)


def _jacobi_minima(job):
    """Log-norm minima for a chunk of energies; a module level function so worker processes can run it."""
    a, b, energies, n_max = job
    return jacobi_log_norm_minima(a, b, energies, n_max)


def _cmv_minima(job):
    """Log-norm minima for a chunk of phases of the conjugated Szegő cocycle."""
    alphas, psis, n_max = job
    psis = np.asarray(psis, dtype=float)[:, None]
    steps = (to_sl2(szego_su11(alphas[k][None, :], psis)) for k in range(n_max))
    return log_norm_minima(steps, n_max)


# Classes #
@dataclasses.dataclass(frozen=True)
class SpectralScan:
    """UH verdicts over a parameter grid.

    Attributes:
        axis (str): Either "circle" for phases psi or "line" for energies E.
        values (:obj:`ndarray`): The strictly increasing grid.
        verdicts (list): One verdict per grid value.
        certificates (list): One UHCertificate per grid value.
        metadata (dict): A description of the model.
    """
    axis: str
    values: np.ndarray
    verdicts: typing.List[str]
    certificates: list = dataclasses.field(default_factory=list, repr=False)
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if len(values) == 0:
            raise ValueError("a scan needs at least one grid value")
        if np.any(np.diff(values) <= 0.0):
            raise ValueError("the scan grid must be strictly increasing")
        if len(self.verdicts) != len(values):
            raise ValueError("a scan needs exactly one verdict per grid value")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def uh_mask(self):
        """:obj:`ndarray`: If each grid value is UH."""
        return np.array([verdict == UH for verdict in self.verdicts])

    @property
    def spectrum(self):
        """:obj:`ndarray`: The grid values that are not UH; Undetermined counts as spectrum."""
        return self.values[~self.uh_mask]

    def rows(self):
        """The CSV rows param, verdict, witness_n, min_norm."""
        rows = []
        for value, verdict, certificate in zip(self.values, self.verdicts, self.certificates):
            rows.append([repr(float(value)), verdict, certificate.witness_n, repr(certificate.min_norm)])
        return rows


@dataclasses.dataclass(frozen=True)
class Gap:
    """A maximal run of UH grid values, as an open interval or arc.

    For circle scans an arc that wraps through 0 has hi above 2 pi.
    """
    lo: float
    hi: float

    @property
    def width(self):
        """float: hi - lo."""
        return self.hi - self.lo

    def contains(self, value, axis=LINE):
        """If a value lies in the open interval, or the arc for circle scans."""
        if axis == CIRCLE:
            value = (value - self.lo) % TWO_PI + self.lo
        return self.lo < value < self.hi

    def to_json(self):
        return {"lo": self.lo, "hi": self.hi, "width": self.width}


@dataclasses.dataclass(frozen=True)
class GapReport:
    """The gaps of a scan.

    Attributes:
        axis (str): The axis of the scan.
        gaps (list): The disjoint gaps, sorted by lower end.
        undetermined_count (int): The number of Undetermined grid values, counted as spectrum.
        suspicious (bool): If the scan has no spectrum at all on its grid.
    """
    axis: str
    gaps: typing.List[Gap]
    undetermined_count: int
    suspicious: bool = False

    def find(self, value):
        """Returns the gap containing a value, or None."""
        return next((gap for gap in self.gaps if gap.contains(value, self.axis)), None)

    def to_json(self):
        return {"gaps": [gap.to_json() for gap in self.gaps], "undetermined_count": self.undetermined_count,
                "suspicious": self.suspicious}


@dataclasses.dataclass(frozen=True)
class TruncationSpectrum:
    """The spectrum of a finite section along an orbit.

    Attributes:
        kind (str): Either "jacobi" or "cmv".
        size (int): The size N.
        values (:obj:`ndarray`): Sorted eigenvalues, or sorted eigenphases in [0, 2 pi).
        base_point (:obj:`BasePoint`): The base point of the orbit.
        boundary_phase (float): The phase of the unimodular final Verblunsky coefficient, CMV only.
    """
    kind: str
    size: int
    values: np.ndarray
    base_point: BasePoint
    boundary_phase: typing.Optional[float] = None

    @property
    def axis(self):
        """str: The axis the values live on."""
        return CIRCLE if self.kind == CMV else LINE


@dataclasses.dataclass(frozen=True)
class CompareReport:
    """The agreement between truncation spectra and a scan.

    Attributes:
        delta (float): The consistency tolerance.
        max_distance (float): The largest distance from a truncation value to the non-UH grid set.
        truncations (list): Per truncation records with the outliers grouped by gap.
        overloaded_gaps (list): Records of gaps hosting more than two outliers of one truncation.
    """
    delta: float
    max_distance: float
    truncations: list
    overloaded_gaps: list

    @property
    def outlier_count(self):
        """int: The number of truncation values farther than delta from the non-UH set."""
        return sum(len(record["outliers"]) for record in self.truncations)

    @property
    def consistent(self):
        """bool: If no gap hosts more boundary states than a rank-two truncation allows."""
        return not self.overloaded_gaps

    def to_json(self):
        return {"delta": self.delta, "max_distance": self.max_distance, "outlier_count": self.outlier_count,
                "consistent": self.consistent, "truncations": self.truncations,
                "overloaded_gaps": self.overloaded_gaps}


class SpectralScanner(ObjectWithLogging):
    """Certifies a family of cocycles over a parameter grid in batches.

    The coefficients are sampled once along the orbits of the grid points; every chunk of parameters then follows
    its renormalized products in one vectorized pass.

    Class Attributes:
        class_loggers (:obj:`dict` of :obj:`AdvancedLogger`): The loggers for this class.

    Attributes:
        name (str): The name of this object.
        params (:obj:`UHParameters`): The certificate thresholds.
        grid (:obj:`OrbitGrid`): The certification grid, a lattice by default.
        chunk_size (int): The number of parameters per chunk.
        pool (:obj:`ChunkPool`): The workers.

    Args:
        params (:obj:`UHParameters`, optional): The certificate thresholds.
        grid (:obj:`OrbitGrid`, optional): The certification grid.
        threads (int, optional): The number of worker processes.
        chunk_size (int, optional): The number of parameters per chunk.
        name (str, optional): The name of this object.
        init (bool, optional): Determines if this object will construct.
    """
    class_loggers = {"spectral_scan": AdvancedLogger("spectral_scan")}

    # Construction/Destruction
    def __init__(self, params=None, grid=None, threads=1, chunk_size=DEFAULT_CHUNK_SIZE, name="", init=True):
        super().__init__()
        self.name = ""
        self.params = UHParameters()
        self.grid = None
        self.chunk_size = DEFAULT_CHUNK_SIZE
        self.pool = None

        if init:
            self.construct(params, grid, threads, chunk_size, name)

    # Constructors
    def construct(self, params=None, grid=None, threads=1, chunk_size=DEFAULT_CHUNK_SIZE, name=None):
        """Constructs this object.

        Args:
            params (:obj:`UHParameters`, optional): The certificate thresholds.
            grid (:obj:`OrbitGrid`, optional): The certification grid.
            threads (int, optional): The number of worker processes.
            chunk_size (int, optional): The number of parameters per chunk.
            name (str, optional): The name of this object.
        """
        if name is not None:
            self.name = name
        if params is not None:
            self.params = params
        self.grid = grid
        self.chunk_size = chunk_size
        self.pool = ChunkPool(threads=threads, name=f"{self.name}_pool")

    def _grid(self, dyn):
        return make_grid(dyn, self.params.resolution) if self.grid is None else self.grid

    # Scanning
    def _run(self, build_jobs, worker, values, dyn, grid, refined=False):
        """Certifies every parameter and retries the Undetermined ones that could still be UH on a refined lattice.

        A refined lattice contains the coarse one, so its windowed floors are no larger. A parameter whose floors
        never reached gamma cannot become UH there and keeps its Undetermined verdict.
        """
        jobs = build_jobs(grid, split_chunks(values, self.chunk_size))
        minima = np.concatenate(self.pool.map(worker, jobs), axis=1)
        certificates = [assess(minima[:, i], self.params, grid, refined=refined) for i in range(len(values))]

        undetermined = [i for i, c in enumerate(certificates)
                        if c.verdict == UNDETERMINED and max(v for _, v in c.floor_samples) >= self.params.gamma]
        if undetermined and not refined and self.params.refine and can_refine(grid):
            finer = refine_grid(dyn, grid)
            self.trace_log("spectral_scan", "scan", f"refining {len(undetermined)} undetermined parameters to "
                           f"resolution {finer.resolution}", name=self.name, level="DEBUG")
            retried = self._run(build_jobs, worker, np.asarray(values)[undetermined], dyn, finer, refined=True)
            for i, certificate in zip(undetermined, retried):
                certificates[i] = certificate
        return certificates

    def _scan(self, axis, build_jobs, worker, values, dyn, metadata):
        values = np.asarray(values, dtype=float)
        certificates = self._run(build_jobs, worker, values, dyn, self._grid(dyn))
        scan = SpectralScan(axis, values, [c.verdict for c in certificates], certificates, metadata)
        uh_count = int(np.sum(scan.uh_mask))
        self.trace_log("spectral_scan", "scan", f"{axis} scan of {len(values)} values: {uh_count} UH",
                       name=self.name, level="INFO")
        return scan

    def scan_jacobi(self, f_a, f_b, dyn, energies):
        """Certifies the Jacobi cocycle at every energy.

        Args:
            f_a (:obj:`SamplingMap`): The off-diagonal map, positive.
            f_b (:obj:`SamplingMap`): The diagonal map.
            dyn (:obj:`BaseDynamics`): The dynamics.
            energies: The sorted energies.

        Returns:
            :obj:`SpectralScan`: The verdicts along the line.
        """
        n_max = self.params.n_max

        def build_jobs(grid, chunks):
            a = orbit_samples(f_a, dyn, grid.points, n_max)
            floor = 0.0 if f_a.floor is None else f_a.floor
            if np.any(a <= floor):
                raise NonpositiveA(f"the off-diagonal map drops to {np.min(a)} along the orbits")
            b = orbit_samples(f_b, dyn, grid.points, n_max)
            return [(a, b, chunk, n_max) for chunk in chunks]

        metadata = {"model": JACOBI, "dynamics": dyn.describe(), "f_a": f_a.describe(), "f_b": f_b.describe()}
        return self._scan(LINE, build_jobs, _jacobi_minima, energies, dyn, metadata)

    def scan_cmv(self, f, dyn, psis):
        """Certifies the conjugated Szegő cocycle at every phase.

        Args:
            f (:obj:`SamplingMap`): The disk valued map.
            dyn (:obj:`BaseDynamics`): The dynamics.
            psis: The sorted phases in [0, 2 pi).

        Returns:
            :obj:`SpectralScan`: The verdicts around the circle.
        """
        n_max = self.params.n_max

        def build_jobs(grid, chunks):
            f.check_disk(grid.points)
            alphas = orbit_samples(f, dyn, grid.points, n_max)
            return [(alphas, chunk, n_max) for chunk in chunks]

        metadata = {"model": CMV, "dynamics": dyn.describe(), "f": f.describe()}
        return self._scan(CIRCLE, build_jobs, _cmv_minima, psis, dyn, metadata)

    def close(self):
        """Closes the worker pool."""
        self.pool.close()


def scan_jacobi(f_a, f_b, dyn, energies, uh_params=None, grid=None, threads=1):
    """Scans the Jacobi family over the energies; see SpectralScanner.scan_jacobi."""
    scanner = SpectralScanner(uh_params, grid, threads)
    try:
        return scanner.scan_jacobi(f_a, f_b, dyn, energies)
    finally:
        scanner.close()


def scan_cmv(f, dyn, psis, uh_params=None, grid=None, threads=1):
    """Scans the Szegő family over the phases; see SpectralScanner.scan_cmv."""
    scanner = SpectralScanner(uh_params, grid, threads)
    try:
        return scanner.scan_cmv(f, dyn, psis)
    finally:
        scanner.close()


# Gaps #
_logger = AdvancedLogger("spectra")


def gaps(scan):
    """Reports the maximal runs of UH verdicts as gaps.

    Ends between a UH and a non-UH value sit at the midpoint; ends at the edge of a line grid sit on the edge value.
    On the circle a run through the end of the grid continues through 0.

    Args:
        scan (:obj:`SpectralScan`): The scan.

    Returns:
        :obj:`GapReport`: The gaps.
    """
    values = scan.values
    uh = scan.uh_mask
    undetermined = sum(verdict == UNDETERMINED for verdict in scan.verdicts)
    count = len(values)

    if uh.all():
        _logger.trace_log("spectra", "gaps", "every grid value is UH, the spectrum is empty on this grid",
                          level="WARNING")
        hi = values[0] + TWO_PI if scan.axis == CIRCLE else values[-1]
        return GapReport(scan.axis, [Gap(float(values[0]), float(hi))], undetermined, suspicious=True)

    runs = []
    start = None
    for i in range(count):
        if uh[i] and start is None:
            start = i
        if not uh[i] and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, count - 1))

    wrapped = None
    if scan.axis == CIRCLE and len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == count - 1:
        wrapped = (runs.pop()[0], runs.pop(0)[1])

    found = []
    for first, last in runs:
        if first > 0:
            lo = 0.5 * (values[first - 1] + values[first])
        elif scan.axis == CIRCLE:
            lo = 0.5 * (values[-1] - TWO_PI + values[0])
        else:
            lo = values[0]
        if last < count - 1:
            hi = 0.5 * (values[last] + values[last + 1])
        elif scan.axis == CIRCLE:
            hi = 0.5 * (values[-1] + values[0] + TWO_PI)
        else:
            hi = values[-1]
        if scan.axis == CIRCLE and lo < 0.0:
            lo, hi = lo + TWO_PI, hi + TWO_PI
        found.append(Gap(float(lo), float(hi)))
    if wrapped is not None:
        first, last = wrapped
        lo = 0.5 * (values[first - 1] + values[first])
        hi = 0.5 * (values[last] + values[last + 1]) + TWO_PI
        found.append(Gap(float(lo), float(hi)))

    found.sort(key=lambda gap: gap.lo)
    return GapReport(scan.axis, found, undetermined)


# Truncations #
def jacobi_coefficients(f_a, f_b, dyn, x, n):
    """The coefficients a_k, b_k for k = 0..n-1 along the orbit of x."""
    points = dyn.orbit_points(x, 0, n - 1)
    a = np.asarray(f_a(points), dtype=float)
    if np.any(a <= 0.0):
        raise NonpositiveA(f"the off-diagonal map drops to {np.min(a)} along the orbit")
    return a, np.asarray(f_b(points), dtype=float)


def jacobi_matrix(f_a, f_b, dyn, x, size):
    """The size x size principal block of the Jacobi matrix along the orbit of x."""
    a, b = jacobi_coefficients(f_a, f_b, dyn, x, size)
    return np.diag(b) + np.diag(a[:-1], 1) + np.diag(a[:-1], -1)


def truncation_jacobi(f_a, f_b, dyn, x, size):
    """The eigenvalues of the Dirichlet truncation, by Sturm-sequence bisection.

    Args:
        f_a (:obj:`SamplingMap`): The off-diagonal map.
        f_b (:obj:`SamplingMap`): The diagonal map.
        dyn (:obj:`BaseDynamics`): The dynamics.
        x (:obj:`BasePoint`): The base point.
        size (int): The size N.

    Returns:
        :obj:`TruncationSpectrum`: The sorted eigenvalues.
    """
    if size < 1:
        raise ValueError(f"a truncation needs N >= 1, got {size}")
    a, b = jacobi_coefficients(f_a, f_b, dyn, x, size)
    if size == 1:
        values = b.copy()
    else:
        values = scipy.linalg.eigvalsh_tridiagonal(b, a[:-1], lapack_driver="stebz")
    return TruncationSpectrum(JACOBI, size, np.sort(values), x)


def cmv_coefficients(f, dyn, x, size, boundary_phase):
    """The Verblunsky values along the orbit of x, closed by the unimodular e^(i boundary_phase)."""
    alphas = np.empty(size, dtype=complex)
    if size > 1:
        points = dyn.orbit_points(x, 0, size - 2)
        f.check_disk(points)
        alphas[:-1] = f(points)
    alphas[-1] = complex(math.cos(boundary_phase), math.sin(boundary_phase))
    return alphas


def cmv_matrix(alphas):
    """The finite CMV matrix L M built from the Theta blocks of a Verblunsky sequence.

    The last coefficient is unimodular, so its block is the 1 x 1 conj(alpha) and the matrix is unitary.

    Args:
        alphas: The sequence alpha_0..alpha_(N-1).

    Returns:
        :obj:`ndarray`: The N x N matrix.
    """
    alphas = np.asarray(alphas, dtype=complex)
    size = len(alphas)
    left = np.zeros((size, size), dtype=complex)
    right = np.zeros((size, size), dtype=complex)
    right[0, 0] = 1.0
    for j, alpha in enumerate(alphas):
        target = left if j % 2 == 0 else right
        if j + 1 == size:
            target[j, j] = np.conj(alpha)
        else:
            rho = math.sqrt(max(1.0 - abs(alpha) ** 2, 0.0))
            target[j:j + 2, j:j + 2] = [[np.conj(alpha), rho], [rho, -alpha]]
    return left @ right


def _boundary_function(alphas, boundary_phase, psi):
    """Im(Phi_(N-1)(e^(i psi)) e^(-i (N-2) psi / 2) e^(i boundary_phase / 2)); zero exactly at the eigenphases."""
    size = len(alphas) + 1
    z = np.exp(1j * psi)
    phi = np.ones_like(z)
    phi_star = np.ones_like(z)
    for alpha in alphas:
        phi, phi_star = z * phi - np.conj(alpha) * phi_star, phi_star - alpha * z * phi
        scale = np.abs(phi_star)
        if not np.all(np.isfinite(scale)) or np.any(scale == 0.0):
            raise RecursionOverflow("the Szegő recursion left the finite range")
        phi = phi / scale
        phi_star = phi_star / scale
    return np.imag(phi * np.exp(-0.5j * (size - 2) * psi + 0.5j * boundary_phase))


def _dedupe_phases(phases):
    phases = np.sort(np.mod(phases, TWO_PI))
    phases = np.where(phases >= TWO_PI, 0.0, phases)
    phases = np.sort(phases)
    kept = []
    for phase in phases:
        if not kept or phase - kept[-1] > DEDUPE_TOLERANCE:
            kept.append(phase)
    if len(kept) > 1 and kept[0] + TWO_PI - kept[-1] <= DEDUPE_TOLERANCE:
        kept.pop()
    return np.asarray(kept)


def paraorthogonal_zeros(alphas, boundary_phase, samples):
    """Finds the zeros on the circle of the paraorthogonal polynomial by a phase scan and bisection.

    Args:
        alphas: The inner coefficients alpha_0..alpha_(N-2).
        boundary_phase (float): The phase of the final unimodular coefficient.
        samples (int): The number of equispaced scan phases.

    Returns:
        :obj:`ndarray`: The sorted zeros in [0, 2 pi).
    """
    psi = TWO_PI * np.arange(samples + 1) / samples
    values = _boundary_function(alphas, boundary_phase, psi)
    exact = psi[values == 0.0]
    change = np.nonzero(values[:-1] * values[1:] < 0.0)[0]

    lo = psi[change]
    hi = psi[change + 1]
    lo_values = values[change]
    for _ in range(BISECTION_STEPS):
        middle = 0.5 * (lo + hi)
        middle_values = _boundary_function(alphas, boundary_phase, middle)
        left = lo_values * middle_values <= 0.0
        hi = np.where(left, middle, hi)
        lo = np.where(left, lo, middle)
        lo_values = np.where(left, lo_values, middle_values)
    return _dedupe_phases(np.concatenate([exact, 0.5 * (lo + hi)]))


def truncation_cmv(f, dyn, x, size, boundary_phase=0.0):
    """The eigenphases of the paraorthogonal truncation along the orbit of x.

    The monic Szegő recursion runs with alpha_0..alpha_(N-2) from the orbit and the final coefficient
    e^(i boundary_phase); the zeros of the resulting degree N polynomial are the eigenphases.

    Args:
        f (:obj:`SamplingMap`): The disk valued map.
        dyn (:obj:`BaseDynamics`): The dynamics.
        x (:obj:`BasePoint`): The base point.
        size (int): The size N.
        boundary_phase (float, optional): The phase of the final coefficient.

    Returns:
        :obj:`TruncationSpectrum`: The N sorted eigenphases in [0, 2 pi).
    """
    if size < 1:
        raise ValueError(f"a truncation needs N >= 1, got {size}")
    alphas = cmv_coefficients(f, dyn, x, size, boundary_phase)[:-1]
    samples = PHASE_SCAN_FACTOR * size
    for _ in range(PHASE_SCAN_ESCALATIONS + 1):
        phases = paraorthogonal_zeros(alphas, boundary_phase, samples)
        if len(phases) == size:
            return TruncationSpectrum(CMV, size, phases, x, boundary_phase)
        _logger.trace_log("spectra", "truncation_cmv", f"found {len(phases)} of {size} zeros with {samples} "
                          f"samples, doubling", level="DEBUG")
        samples *= 2
    raise RecursionOverflow(f"the phase scan found {len(phases)} zeros of a degree {size} paraorthogonal polynomial")


# Comparison #
def distances_to_set(values, targets, axis=LINE):
    """The distance from each value to the nearest target, around the circle for circle axes."""
    targets = np.sort(np.asarray(targets, dtype=float))
    values = np.asarray(values, dtype=float)
    if len(targets) == 0:
        return np.full(len(values), math.inf)
    if axis == CIRCLE:
        values = np.mod(values, TWO_PI)
        targets = np.concatenate([targets - TWO_PI, targets, targets + TWO_PI])
    index = np.clip(np.searchsorted(targets, values), 1, len(targets) - 1)
    below = np.abs(values - targets[index - 1])
    above = np.abs(targets[index] - values)
    nearest = np.minimum(below, above)
    if len(targets) == 1:
        nearest = np.abs(values - targets[0])
    return nearest


def compare(scan, spectra, delta=CONSISTENCY_DELTA):
    """Compares truncation spectra with the non-UH set of a scan.

    Truncations are rank-two decouplings of the full operator, so each open gap may host up to two boundary states
    per truncation. Values farther than delta from the non-UH set are outliers and are grouped by their gap.

    Args:
        scan (:obj:`SpectralScan`): The scan.
        spectra (list): The truncation spectra.
        delta (float, optional): The consistency tolerance.

    Returns:
        :obj:`CompareReport`: The report.
    """
    report = gaps(scan)
    spectrum = scan.spectrum
    records = []
    overloaded = []
    largest = 0.0
    for index, truncation in enumerate(spectra):
        distances = distances_to_set(truncation.values, spectrum, scan.axis)
        largest = max(largest, float(np.max(distances, initial=0.0)))
        outliers = []
        per_gap = {}
        for value, away in zip(truncation.values, distances):
            if away > delta:
                gap = report.find(float(value))
                key = None if gap is None else (gap.lo, gap.hi)
                per_gap[key] = per_gap.get(key, 0) + 1
                outliers.append({"value": float(value), "distance": float(away),
                                 "gap": None if gap is None else gap.to_json()})
        for key, count in per_gap.items():
            if key is None or count > BOUNDARY_STATES_PER_GAP:
                overloaded.append({"truncation": index, "gap": None if key is None else list(key), "count": count})
        records.append({"base_point": list(truncation.base_point.coords), "size": truncation.size,
                        "max_distance": float(np.max(distances, initial=0.0)), "outliers": outliers})
    if overloaded:
        _logger.trace_log("spectra", "compare", f"{len(overloaded)} gaps host more boundary states than a "
                          f"truncation allows", level="WARNING")
    return CompareReport(delta, largest, records, overloaded)
