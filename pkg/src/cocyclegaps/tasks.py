#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" tasks.py
Description: One task per command. Every task reads its experiment configuration, writes its outputs through an
OutputsHandler and leaves a RunReport behind on closure.
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
from advancedlogging import AdvancedLogger
import numpy as np

# Local Libraries #
from .cmvperturbation import pipeline
from .cocycles import jacobi_cocycle, szego_cocycle
from .dynamics import BasePoint, make_grid, orbit_grid
from .errors import ConfigInvalid, NotFound
from .hyperbolicity import UNDETERMINED, certify
from .io import OutputsHandler, RunReport, content_hash
from .jacobiprojection import DISJOINTNESS_NOTE, perturb_jacobi
from .matrices import UnitCirclePhase
from .spectra import CMV, JACOBI, SpectralScanner, compare, gaps, truncation_cmv, truncation_jacobi
from .task import MultiUnitTask, Task


# Definitions #
OK = "ok"


# Classes #
class ExperimentMixin:
    """The configuration, outputs and report bookkeeping shared by every command task.

    Class Attributes:
        command (str): The command the task implements.

    Attributes:
        config (:obj:`ExperimentConfig`): The experiment.
        outputs (:obj:`OutputsHandler`): The written files.
        notes (list): Interpretive notes for the report.
        outcome (str): "ok", or the verdict or failure behind a nonzero exit code.
        summary (dict): Headline numbers for the report.
        report (:obj:`RunReport`): The report, once closure ran.
    """
    command = ""

    def _init_experiment(self):
        self.config = None
        self.outputs = None
        self.notes = []
        self.outcome = OK
        self.summary = {}
        self.report = None

    def _construct_experiment(self, config=None, out_dir=None, outputs=None):
        if config is not None:
            self.config = config
        if outputs is not None:
            self.outputs = outputs
        elif out_dir is not None or self.outputs is None:
            self.outputs = OutputsHandler("." if out_dir is None else out_dir)

    def model_maps(self):
        """Returns the sampling maps of the model by key."""
        model = self.config.model
        return {key: model.sampling_map(key) for key in model.maps}

    def input_hashes(self):
        """Returns the content hash of every input sampling map file by key."""
        return {key: content_hash(path) for key, path in self.config.model.input_files().items()}

    def rng(self):
        """A numpy generator seeded by the experiment."""
        return np.random.default_rng(self.config.seed)

    def current_outcome(self):
        """The outcome, or the name of the exception that ended the run."""
        failure = getattr(self, "failure", None)
        if self.outcome == OK and failure is not None:
            return type(failure).__name__
        return self.outcome

    def build_report(self):
        """Creates the RunReport of the current state."""
        return RunReport(command=self.command, config=self.config.echo(), seed=self.config.seed,
                         input_hashes=self.input_hashes(), outputs=self.outputs.hashes(), notes=list(self.notes),
                         outcome=self.current_outcome(), summary=dict(self.summary), wall_time=self.wall_time)

    def write_report(self):
        """Writes report.json after every recorded output."""
        missing = self.outputs.missing()
        if missing:
            raise FileNotFoundError(f"recorded outputs are missing: {missing}")
        self.report = self.build_report()
        self.report.write(self.outputs)
        self.trace_log("experiment", "write_report", f"{self.command} finished with outcome {self.report.outcome} in "
                       f"{self.wall_time:.3f} s", name=self.name, level="INFO")
        return self.report


class ExperimentTask(ExperimentMixin, Task):
    """A Task driven by an experiment configuration.

    Class Attributes:
        class_loggers (dict): The default loggers to include in every object of this class.

    Args:
        config (:obj:`ExperimentConfig`, optional): The experiment.
        out_dir (optional): The output directory.
        outputs (:obj:`OutputsHandler`, optional): A shared handler, used instead of out_dir.
        name (str, optional): Name of this object.
        init (bool, optional): Determines if this object should be initialized.
        **kwargs: The keyword arguments for the Task constructor.
    """
    class_loggers = {**Task.class_loggers, "experiment": AdvancedLogger("experiment")}

    # Construction/Destruction
    def __init__(self, config=None, out_dir=None, outputs=None, name=None, init=True, **kwargs):
        super().__init__(init=False)
        self._init_experiment()

        if init:
            self.construct(config, out_dir, outputs, name, **kwargs)

    # Constructors/Destructors
    def construct(self, config=None, out_dir=None, outputs=None, name=None, **kwargs):
        """Constructs this object.

        Args:
            config (:obj:`ExperimentConfig`, optional): The experiment.
            out_dir (optional): The output directory.
            outputs (:obj:`OutputsHandler`, optional): A shared handler.
            name (str, optional): Name of this object.
            **kwargs: The keyword arguments for the Task constructor.
        """
        super().construct(name=self.command if name is None else name, **kwargs)
        self._construct_experiment(config, out_dir, outputs)

    # Closure
    def closure(self, **kwargs):
        """Writes the run report."""
        self.write_report()


class ScanTask(ExperimentTask):
    """Scans the model over its parameter grid and reports the gaps.

    Writes scan.csv with the columns param, verdict, witness_n, min_norm and gaps.json.

    Attributes:
        scan (:obj:`SpectralScan`): The scan, once the task ran.
        gap_report (:obj:`GapReport`): The gaps of the scan.
    """
    command = "scan"

    def __init__(self, config=None, out_dir=None, outputs=None, name=None, init=True, **kwargs):
        self.scan = None
        self.gap_report = None
        super().__init__(config, out_dir, outputs, name, init, **kwargs)

    def task(self, **kwargs):
        """Runs the scan."""
        config = self.config
        dyn = config.model.build_dynamics()
        maps = self.model_maps()
        scanner = SpectralScanner(config.uh, threads=config.threads, chunk_size=config.chunk_size,
                                  name=f"{self.name}_scanner")
        try:
            if config.model.kind == JACOBI:
                self.scan = scanner.scan_jacobi(maps["a"], maps["b"], dyn, config.scan.values())
            else:
                self.scan = scanner.scan_cmv(maps["f"], dyn, config.scan.values())
        finally:
            scanner.close()

        self.gap_report = gaps(self.scan)
        self.outputs.write_csv("scan.csv", ["param", "verdict", "witness_n", "min_norm"], self.scan.rows())
        self.outputs.write_json("gaps.json", {"axis": self.scan.axis, **self.gap_report.to_json()})
        if self.gap_report.suspicious:
            self.notes.append("every scanned parameter is UH, so the spectrum was not resolved on this grid")
        self.summary.update({"values": len(self.scan), "uh": int(np.sum(self.scan.uh_mask)),
                             "gaps": len(self.gap_report.gaps),
                             "undetermined": self.gap_report.undetermined_count})
        self.trace_log("experiment", "task", f"found {len(self.gap_report.gaps)} gaps", name=self.name, level="INFO")


class CertifyTask(ExperimentTask):
    """Certifies the model cocycle at a single parameter and dumps the certificate to certificate.json.

    An Undetermined verdict sets the outcome, which the command line turns into exit code 2.
    """
    command = "certify"

    def __init__(self, config=None, param=None, out_dir=None, outputs=None, name=None, init=True, **kwargs):
        self.param = None
        self.certificate = None
        super().__init__(config, out_dir, outputs, name, init, **kwargs)
        if param is not None:
            self.param = float(param)

    def cocycle(self, param):
        """The model cocycle at an energy or phase."""
        dyn = self.config.model.build_dynamics()
        maps = self.model_maps()
        if self.config.model.kind == JACOBI:
            return jacobi_cocycle(dyn, maps["a"], maps["b"], param)
        return szego_cocycle(dyn, maps["f"], UnitCirclePhase.wrapped(param))

    def task(self, param=None, **kwargs):
        """Runs the certificate."""
        param = self.param if param is None else float(param)
        if param is None:
            param = self.config.pipeline.param
        if param is None:
            raise ConfigInvalid("certify needs a parameter from --param or the pipeline block", "pipeline", "param")
        self.param = param

        self.certificate = certify(self.cocycle(param), params=self.config.uh)
        self.outputs.write_json("certificate.json", {"param": param, **self.certificate.to_json()})
        self.summary.update({"param": param, "verdict": self.certificate.verdict})
        if self.certificate.verdict == UNDETERMINED:
            self.outcome = UNDETERMINED


class PerturbTask(ExperimentTask):
    """Runs a gap opening pipeline end to end.

    The CMV target writes perturbation.json and beta.map; the Jacobi target writes projection.json and f_b.map. When
    the pipeline gives up, notfound.json records the failing stage with the per stage log before NotFound propagates.
    """
    command = "perturb"

    def __init__(self, config=None, target=None, param=None, out_dir=None, outputs=None, name=None, init=True,
                 **kwargs):
        self.target = None
        self.param = None
        self.result = None
        super().__init__(config, out_dir, outputs, name, init, **kwargs)
        if target is not None:
            self.target = target
        if param is not None:
            self.param = float(param)

    def setup(self, **kwargs):
        """Checks the target against the model."""
        if self.target is None:
            self.target = self.config.model.kind
        if self.target != self.config.model.kind:
            raise ConfigInvalid(f"the {self.target} target needs a {self.target} model", "model", "kind")
        if self.param is None:
            self.param = self.config.pipeline.param
        if self.param is None:
            raise ConfigInvalid("perturb needs a parameter from --param or the pipeline block", "pipeline", "param")

    def task(self, **kwargs):
        """Runs the pipeline of the target."""
        try:
            if self.target == CMV:
                self._perturb_cmv()
            else:
                self._perturb_jacobi()
        except NotFound as error:
            self.outcome = "NotFound"
            self.summary.update({"param": self.param, "stage": error.stage})
            self.outputs.write_json("notfound.json", {"message": str(error), "stage": error.stage,
                                                      "stages": error.stages, "search_log": error.search_log})
            raise

    def _perturb_cmv(self):
        config = self.config
        pipe = config.pipeline
        dyn = config.model.build_dynamics()
        z = UnitCirclePhase.wrapped(self.param)
        self.result = pipeline(self.model_maps()["f"], dyn, z, pipe.support, pipe.eps_target, pipe.budget,
                               params=config.uh, rng=self.rng(), max_retries=pipe.max_retries)
        self.outputs.write_map("beta.map", self.result.beta)
        self.outputs.write_json("perturbation.json", {"param": z.psi, **self.result.to_json("beta.map")})
        if self.result.nudged:
            self.notes.append("f vanished on the support and was nudged before the search")
        self.summary.update({"param": z.psi, "distance": self.result.distances["AB''"],
                             "verdict": self.result.certificates["map"].verdict})

    def _perturb_jacobi(self):
        config = self.config
        pipe = config.pipeline
        maps = self.model_maps()
        self.notes.append(DISJOINTNESS_NOTE)
        self.result = perturb_jacobi(maps["a"], maps["b"], self.param, config.model.build_dynamics(), pipe.support,
                                     pipe.eps_target, pipe.budget, params=config.uh, rng=self.rng(),
                                     max_retries=pipe.max_retries)
        self.outputs.write_map("f_b.map", self.result.f_b_prime)
        self.outputs.write_json("projection.json", {"param": self.param, **self.result.to_json("f_b.map")})
        self.summary.update({"param": self.param, "distance": self.result.distance,
                             "verdict": self.result.certificate.verdict})


class TruncateTask(ExperimentTask):
    """Computes the finite section spectra at the configured base points.

    Writes truncation_<k>.csv with the single column value for every base point k.

    Attributes:
        spectra (list): The TruncationSpectrum of every base point.
    """
    command = "truncate"

    def __init__(self, config=None, out_dir=None, outputs=None, name=None, init=True, **kwargs):
        self.spectra = []
        super().__init__(config, out_dir, outputs, name, init, **kwargs)

    def task(self, **kwargs):
        """Computes the spectra."""
        config = self.config
        dyn = config.model.build_dynamics()
        maps = self.model_maps()
        size = config.truncate.size
        self.spectra = []
        for k, x in enumerate(config.truncate.base_points(dyn.dims)):
            if config.model.kind == JACOBI:
                spectrum = truncation_jacobi(maps["a"], maps["b"], dyn, x, size)
            else:
                spectrum = truncation_cmv(maps["f"], dyn, x, size, config.truncate.boundary_phase)
            self.spectra.append(spectrum)
            self.outputs.write_csv(f"truncation_{k}.csv", ["value"], [[value] for value in spectrum.values])
        self.summary.update({"size": size, "truncations": len(self.spectra)})


class GridDumpTask(ExperimentTask):
    """Writes the certification lattice to grid.csv and a forward orbit segment from the origin to orbit.csv."""
    command = "grid-dump"

    def task(self, **kwargs):
        """Writes the grids."""
        config = self.config
        dyn = config.model.build_dynamics()
        header = ["index"] + [f"x{axis + 1}" for axis in range(dyn.dims)]
        lattice = make_grid(dyn, config.uh.resolution)
        orbit = orbit_grid(dyn, BasePoint((0.0,) * dyn.dims), config.truncate.orbit_length)
        self.outputs.write_csv("grid.csv", header, ([i, *point] for i, point in enumerate(lattice.points)))
        self.outputs.write_csv("orbit.csv", header, ([i, *point] for i, point in enumerate(orbit.points)))
        self.summary.update({"grid": len(lattice), "orbit": len(orbit)})


class CompareTask(ExperimentMixin, MultiUnitTask):
    """Checks the truncation spectra against the scan.

    A scan unit and a truncate unit share this task's outputs; compare.json then holds the largest distance from a
    truncation eigenvalue to the non-UH set and the outliers grouped by gap.

    Class Attributes:
        class_loggers (dict): The default loggers to include in every object of this class.

    Attributes:
        comparison (:obj:`CompareReport`): The comparison, once the task ran.

    Args:
        config (:obj:`ExperimentConfig`, optional): The experiment.
        out_dir (optional): The output directory.
        name (str, optional): Name of this object.
        init (bool, optional): Determines if this object should be initialized.
    """
    command = "compare"
    class_loggers = ExperimentTask.class_loggers

    # Construction/Destruction
    def __init__(self, config=None, out_dir=None, name=None, init=True):
        super().__init__(init=False)
        self._init_experiment()
        self.comparison = None

        if init:
            self.construct(config, out_dir, name)

    # Constructors/Destructors
    def construct(self, config=None, out_dir=None, name=None, **kwargs):
        """Constructs this object with its scan and truncate units.

        Args:
            config (:obj:`ExperimentConfig`, optional): The experiment.
            out_dir (optional): The output directory.
            name (str, optional): Name of this object.
            **kwargs: The keyword arguments for the MultiUnitTask constructor.
        """
        super().construct(name=self.command if name is None else name, **kwargs)
        self._construct_experiment(config, out_dir)
        scan = ScanTask(self.config, outputs=self.outputs, name="compare_scan", allow_closure=False)
        truncate = TruncateTask(self.config, outputs=self.outputs, name="compare_truncate", allow_closure=False)
        self.update({"scan": scan, "truncate": truncate})
        self.execution_order = ("scan", "truncate")

    # Task
    def task(self, **kwargs):
        """Runs the units and compares their results."""
        super().task(**kwargs)
        scan_task = self["scan"]
        truncate_task = self["truncate"]
        self.comparison = compare(scan_task.scan, truncate_task.spectra, self.config.delta)
        self.outputs.write_json("compare.json", self.comparison.to_json())
        self.notes.extend(scan_task.notes)
        self.summary.update({"max_distance": self.comparison.max_distance,
                             "outliers": self.comparison.outlier_count,
                             "consistent": self.comparison.consistent,
                             "gaps": scan_task.summary.get("gaps", 0)})
        if not self.comparison.consistent:
            self.notes.append("some gaps host more truncation eigenvalues than the two boundary states a "
                              "truncation can add")

    # Closure
    def closure(self, **kwargs):
        """Closes delayed units and writes the run report."""
        super().closure(**kwargs)
        self.write_report()


TASKS = {task.command: task for task in (ScanTask, CertifyTask, PerturbTask, TruncateTask, GridDumpTask,
                                         CompareTask)}
