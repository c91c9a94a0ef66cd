#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" config.py
Description: Experiment configuration files. Flat key = value sections are read with configparser, validated, and
turned into frozen dataclasses the tasks build their models from.
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
import configparser
import dataclasses
import math
import pathlib
import typing

# Downloaded Libraries #
from advancedlogging import AdvancedLogger

# Local Libraries #
from .dynamics import GOLDEN_MEAN, BasePoint, Rotation, SkewShift, build_dynamics
from .errors import CocycleGapsError, ConfigInvalid
from .hyperbolicity import UHParameters
from .matrices import TWO_PI
from .processors import DEFAULT_CHUNK_SIZE
from .samplingmaps import DISK, REAL, SamplingMap
from .spectra import CMV, CONSISTENCY_DELTA, JACOBI, circle_grid, parameter_grid
from .supports import SupportBox


# Definitions #
_logger = AdvancedLogger("config")

SECTIONS = ("model", "scan", "uh", "pipeline", "truncate", "compare", "run")
MODEL_KINDS = (JACOBI, CMV)
DYNAMICS_KINDS = (Rotation.kind, SkewShift.kind)

MAP_KEYS = {CMV: {"f": (DISK, None)},
            JACOBI: {"a": (REAL, "1"), "b": (REAL, "0")}}


# Functions #
def parse_map_spec(spec, codomain=REAL, dims=1, base_dir=".", section="model", key="f"):
    """Reads an inline sampling map description.

    The forms are a bare number, "cos <lam>" for 2 lam cos(2 pi x_1), "mode <amp> <k>" for amp e^(2 pi i k x_1)
    and "file <path>" for a sampling map file, relative to base_dir.

    Args:
        spec (str): The description.
        codomain (str, optional): The required codomain.
        dims (int, optional): The dimension of the torus.
        base_dir (optional): The directory relative paths resolve against.
        section (str, optional): The section, for error messages.
        key (str, optional): The key, for error messages.

    Returns:
        tuple: The SamplingMap and the resolved file path, or None for inline maps.
    """
    fields = spec.split()
    if not fields:
        raise ConfigInvalid("empty sampling map", section, key)
    head = fields[0].lower()
    try:
        if head == "file":
            if len(fields) != 2:
                raise ConfigInvalid(f"expected 'file <path>', got {spec!r}", section, key)
            path = pathlib.Path(fields[1])
            if not path.is_absolute():
                path = pathlib.Path(base_dir) / path
            if not path.is_file():
                raise ConfigInvalid(f"the sampling map file {str(path)!r} does not exist", section, key)
            sampling_map = SamplingMap.read(path)
            if sampling_map.codomain != codomain:
                raise ConfigInvalid(f"the file holds a {sampling_map.codomain} map, a {codomain} map is needed",
                                    section, key)
            if sampling_map.dims != dims:
                raise ConfigInvalid(f"the file map lives on dimension {sampling_map.dims}, the dynamics on {dims}",
                                    section, key)
            return sampling_map, path
        elif head == "cos":
            if codomain != REAL or len(fields) != 2:
                raise ConfigInvalid(f"'cos <lam>' describes a real map, got {spec!r}", section, key)
            return SamplingMap.cosine(float(fields[1]), dims), None
        elif head == "mode":
            if codomain != DISK or len(fields) not in (2, 3):
                raise ConfigInvalid(f"'mode <amp> <k>' describes a disk map, got {spec!r}", section, key)
            frequency = int(fields[2]) if len(fields) == 3 else 1
            return SamplingMap.mode(complex(fields[1].replace("i", "j")), frequency, dims), None
        elif len(fields) == 1:
            value = complex(head.replace("i", "j")) if codomain == DISK else float(head)
            return SamplingMap.constant(value, codomain, dims), None
    except CocycleGapsError:
        raise
    except (ValueError, IndexError, OSError) as error:
        raise ConfigInvalid(f"cannot read the sampling map {spec!r}: {error}", section, key) from error
    raise ConfigInvalid(f"unknown sampling map form {spec!r}", section, key)


def default_support(dims):
    """The default support corners as text: the first coordinate spans DEFAULT_SUPPORT_SIDE, the others the whole
    circle. Under the golden rotation and the skew shift this box and its first two images stay a lattice mesh
    apart at resolution 64.
    """
    lo = [DEFAULT_SUPPORT_SIDE[0]] + [0.0] * (dims - 1)
    hi = [DEFAULT_SUPPORT_SIDE[1]] + [1.0] * (dims - 1)
    return " ".join(str(v) for v in lo), " ".join(str(v) for v in hi)


def _floats(text, section, key):
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError as error:
        raise ConfigInvalid(f"expected numbers, got {text!r}", section, key) from error


# Classes #
class _Section:
    """Typed reads of one configparser section that raise ConfigInvalid with the section and key."""

    def __init__(self, parser, name):
        self.name = name
        self.items = dict(parser.items(name)) if parser.has_section(name) else {}

    def __contains__(self, key):
        return key in self.items

    def text(self, key, default=None):
        if key in self.items:
            return self.items[key].strip()
        if default is None:
            raise ConfigInvalid("missing required key", self.name, key)
        return default

    def number(self, key, default=None, cast=float):
        raw = self.text(key, None if default is None else str(default))
        try:
            value = cast(raw)
        except ValueError as error:
            raise ConfigInvalid(f"expected a number, got {raw!r}", self.name, key) from error
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigInvalid(f"expected a finite number, got {raw!r}", self.name, key)
        return value

    def integer(self, key, default=None):
        return self.number(key, default, int)

    def flag(self, key, default=False):
        raw = self.text(key, "true" if default else "false").lower()
        if raw in ("1", "true", "yes", "on"):
            return True
        elif raw in ("0", "false", "no", "off"):
            return False
        raise ConfigInvalid(f"expected a boolean, got {raw!r}", self.name, key)

    def positive(self, key, default=None, cast=float):
        value = self.number(key, default, cast)
        if not value > 0:
            raise ConfigInvalid(f"must be positive, got {value}", self.name, key)
        return value


@dataclasses.dataclass(frozen=True)
class ModelConfig:
    """The model block: the operator family, the dynamics and the sampling maps.

    Attributes:
        kind (str): Either "jacobi" or "cmv".
        dynamics (str): Either "rotation" or "skew-shift".
        frequencies (tuple): The frequencies of the dynamics.
        dims (int): The dimension of the torus.
        maps (dict): The sampling map descriptions by key: f for CMV models, a and b for Jacobi models.
        base_dir (str): The directory file maps resolve against.
    """
    kind: str
    dynamics: str = SkewShift.kind
    frequencies: typing.Tuple[float, ...] = (GOLDEN_MEAN,)
    dims: int = 2
    maps: typing.Dict[str, str] = dataclasses.field(default_factory=dict)
    base_dir: str = "."

    @classmethod
    def from_section(cls, section, base_dir):
        kind = section.text("kind").lower()
        if kind not in MODEL_KINDS:
            raise ConfigInvalid(f"expected one of {MODEL_KINDS}, got {kind!r}", section.name, "kind")
        dynamics = section.text("dynamics", SkewShift.kind).lower()
        if dynamics not in DYNAMICS_KINDS:
            raise ConfigInvalid(f"expected one of {DYNAMICS_KINDS}, got {dynamics!r}", section.name, "dynamics")
        frequencies = _floats(section.text("frequencies", repr(GOLDEN_MEAN)), section.name, "frequencies")
        if not frequencies:
            raise ConfigInvalid("at least one frequency is needed", section.name, "frequencies")
        dims = 2 if dynamics == SkewShift.kind else len(frequencies)
        if dims > 2:
            raise ConfigInvalid(f"the torus has at most two dimensions, got {dims} frequencies", section.name,
                                "frequencies")

        maps = {}
        for key, (codomain, default) in MAP_KEYS[kind].items():
            maps[key] = section.text(key, default)
        model = cls(kind, dynamics, frequencies, dims, maps, str(base_dir))
        for key in maps:
            model.sampling_map(key)
        return model

    def build_dynamics(self):
        """Creates the dynamics."""
        return build_dynamics(self.dynamics, self.frequencies)

    def sampling_map(self, key):
        """Reads the named sampling map."""
        codomain = MAP_KEYS[self.kind][key][0]
        sampling_map, _ = parse_map_spec(self.maps[key], codomain, self.dims, self.base_dir, "model", key)
        return sampling_map

    def input_files(self):
        """Returns the file maps by key."""
        files = {}
        for key, spec in self.maps.items():
            codomain = MAP_KEYS[self.kind][key][0]
            _, path = parse_map_spec(spec, codomain, self.dims, self.base_dir, "model", key)
            if path is not None:
                files[key] = path
        return files


@dataclasses.dataclass(frozen=True)
class ScanConfig:
    """The scan block: the parameter grid.

    For CMV models the default range is the whole circle [0, 2 pi).

    Attributes:
        lo (float): The first parameter, or None for the full circle.
        hi (float): The last parameter, or None for the full circle.
        step (float): The spacing.
    """
    lo: typing.Optional[float] = None
    hi: typing.Optional[float] = None
    step: float = 1e-3

    @classmethod
    def from_section(cls, section, kind):
        step = section.positive("step", 1e-3)
        if kind == CMV and "lo" not in section and "hi" not in section:
            return cls(None, None, step)
        lo = section.number("lo", -3.0 if kind == JACOBI else 0.0)
        hi = section.number("hi", 3.0 if kind == JACOBI else TWO_PI)
        if hi < lo:
            raise ConfigInvalid(f"the range is empty: {lo} > {hi}", section.name, "hi")
        return cls(lo, hi, step)

    def values(self):
        """The parameter grid."""
        if self.lo is None:
            return circle_grid(self.step)
        return parameter_grid(self.lo, self.hi, self.step)


@dataclasses.dataclass(frozen=True)
class PipelineConfig:
    """The pipeline block of the perturbation commands.

    Attributes:
        support_lo (tuple): The lower corner of the support box.
        support_hi (tuple): The upper corner of the support box.
        eps_target (float): The largest allowed distance to the original cocycle.
        budget (int): The number of candidates per neighbor search.
        param (float): The energy or phase to open a gap at, None when only given on the command line.
        max_retries (int): The number of times the search distance is halved; a failed neighbor search is final.
    """
    support_lo: typing.Tuple[float, ...] = (0.38, 0.0)
    support_hi: typing.Tuple[float, ...] = (0.6, 1.0)
    eps_target: float = 0.1
    budget: int = 64
    param: typing.Optional[float] = None
    max_retries: int = 6

    @classmethod
    def from_section(cls, section, dims):
        default_lo, default_hi = default_support(dims)
        lo = _floats(section.text("support_lo", default_lo), section.name, "support_lo")
        hi = _floats(section.text("support_hi", default_hi), section.name, "support_hi")
        if len(lo) != dims or len(hi) != dims:
            raise ConfigInvalid(f"the support corners need {dims} coordinates", section.name, "support_lo")
        if any(not 0.0 <= a < b <= 1.0 for a, b in zip(lo, hi)):
            raise ConfigInvalid(f"the support box must lie inside [0, 1], got {lo} and {hi}", section.name,
                                "support_hi")
        eps_target = section.positive("eps_target", 0.1)
        budget = section.positive("budget", 64, int)
        param = section.number("param") if "param" in section else None
        max_retries = section.integer("max_retries", 6)
        if max_retries < 0:
            raise ConfigInvalid(f"must not be negative, got {max_retries}", section.name, "max_retries")
        return cls(lo, hi, eps_target, budget, param, max_retries)

    @property
    def support(self):
        """:obj:`SupportBox`: The support box."""
        return SupportBox(self.support_lo, self.support_hi)


@dataclasses.dataclass(frozen=True)
class TruncateConfig:
    """The truncate block.

    Attributes:
        size (int): The truncation size N.
        count (int): The number of base points, spread evenly along the diagonal of the torus.
        boundary_phase (float): The phase of the unimodular final Verblunsky coefficient.
        orbit_length (int): The length of the orbit segment grid-dump writes.
    """
    size: int = 200
    count: int = 5
    boundary_phase: float = 0.0
    orbit_length: int = 64

    @classmethod
    def from_section(cls, section):
        return cls(section.positive("size", 200, int), section.positive("count", 5, int),
                   section.number("boundary_phase", 0.0), section.positive("orbit_length", 64, int))

    def base_points(self, dims):
        """The base points x_k = (k + 1/2) / count in every coordinate."""
        return [BasePoint(((k + 0.5) / self.count,) * dims) for k in range(self.count)]


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """A whole experiment configuration file.

    Attributes:
        model (:obj:`ModelConfig`): The model block.
        scan (:obj:`ScanConfig`): The scan block.
        uh (:obj:`UHParameters`): The certificate thresholds.
        pipeline (:obj:`PipelineConfig`): The perturbation block.
        truncate (:obj:`TruncateConfig`): The truncation block.
        delta (float): The consistency tolerance of compare.
        seed (int): The seed of all randomness.
        threads (int): The number of worker processes.
        chunk_size (int): The number of parameters per scan chunk.
        path (str): The file this configuration was read from.
    """
    model: ModelConfig
    scan: ScanConfig = ScanConfig()
    uh: UHParameters = UHParameters()
    pipeline: PipelineConfig = PipelineConfig()
    truncate: TruncateConfig = TruncateConfig()
    delta: float = CONSISTENCY_DELTA
    seed: int = 0
    threads: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    path: str = ""

    @classmethod
    def from_parser(cls, parser, base_dir=".", path=""):
        """Builds the configuration from a parsed INI file.

        Args:
            parser (:obj:`ConfigParser`): The parsed file.
            base_dir (optional): The directory file maps resolve against.
            path (str, optional): The file name, for the echo.

        Returns:
            :obj:`ExperimentConfig`: The validated configuration.
        """
        for name in parser.sections():
            if name not in SECTIONS:
                raise ConfigInvalid(f"unknown section, expected one of {SECTIONS}", name)
        if not parser.has_section("model"):
            raise ConfigInvalid("the model section is required", "model")

        model = ModelConfig.from_section(_Section(parser, "model"), base_dir)
        scan = ScanConfig.from_section(_Section(parser, "scan"), model.kind)

        section = _Section(parser, "uh")
        n_max = section.integer("n_max", 256)
        if n_max < 4:
            raise ConfigInvalid(f"must be at least 4, got {n_max}", "uh", "n_max")
        gamma = section.number("gamma", 10.0)
        if not gamma > 1.0:
            raise ConfigInvalid(f"must be larger than 1, got {gamma}", "uh", "gamma")
        resolution = section.integer("resolution", 64)
        if resolution < 2:
            raise ConfigInvalid(f"must be at least 2, got {resolution}", "uh", "resolution")
        growth_ratio = section.number("growth_ratio", 2.2)
        if not growth_ratio >= 1.0:
            raise ConfigInvalid(f"must be at least 1, got {growth_ratio}", "uh", "growth_ratio")
        uh = UHParameters(n_max=n_max, gamma=gamma, resolution=resolution, growth_ratio=growth_ratio,
                          refine=section.flag("refine", True))

        pipeline = PipelineConfig.from_section(_Section(parser, "pipeline"), model.dims)
        truncate = TruncateConfig.from_section(_Section(parser, "truncate"))
        delta = _Section(parser, "compare").positive("delta", CONSISTENCY_DELTA)

        section = _Section(parser, "run")
        seed = section.integer("seed", 0)
        if not 0 <= seed < 2 ** 64:
            raise ConfigInvalid(f"the seed must be a 64-bit unsigned integer, got {seed}", "run", "seed")
        threads = section.positive("threads", 1, int)
        chunk_size = section.positive("chunk_size", DEFAULT_CHUNK_SIZE, int)
        return cls(model, scan, uh, pipeline, truncate, delta, seed, threads, chunk_size, str(path))

    @classmethod
    def from_text(cls, text, base_dir=".", path=""):
        """Parses a configuration from its text."""
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            parser.read_string(text, source=str(path) or "<string>")
        except configparser.Error as error:
            raise ConfigInvalid(f"malformed configuration: {error}") from error
        return cls.from_parser(parser, base_dir, path)

    @classmethod
    def read(cls, path):
        """Reads a configuration file; file maps resolve against its directory."""
        path = pathlib.Path(path)
        if not path.is_file():
            raise ConfigInvalid(f"the configuration file {str(path)!r} does not exist")
        config = cls.from_text(path.read_text(), path.parent, path)
        _logger.trace_log("config", "read", f"read a {config.model.kind} experiment from {path}", level="DEBUG")
        return config

    def override(self, seed=None, threads=None):
        """Returns a copy with the command line overrides of the run block."""
        changes = {}
        if seed is not None:
            if not 0 <= seed < 2 ** 64:
                raise ConfigInvalid(f"the seed must be a 64-bit unsigned integer, got {seed}", "run", "seed")
            changes["seed"] = seed
        if threads is not None:
            if threads < 1:
                raise ConfigInvalid(f"must be positive, got {threads}", "run", "threads")
            changes["threads"] = threads
        return dataclasses.replace(self, **changes) if changes else self

    def echo(self):
        """Returns the whole configuration as a JSON ready dictionary."""
        echo = dataclasses.asdict(self)
        echo["model"]["frequencies"] = list(self.model.frequencies)
        echo["pipeline"]["support_lo"] = list(self.pipeline.support_lo)
        echo["pipeline"]["support_hi"] = list(self.pipeline.support_hi)
        return echo
