#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" io.py
Description: Output bookkeeping for command runs: CSV, JSON and sampling map writers, content hashes and the run report.
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
import csv
import dataclasses
import hashlib
import json
import pathlib
import typing

# Downloaded Libraries #
from baseobjects import BaseObject
import numpy as np

# Local Libraries #


# Definitions #
REPORT_NAME = "report.json"


# Functions #
def content_hash(path):
    """The git blob hash of a file: sha1 of b"blob <length>\\0" followed by the bytes.

    Args:
        path: The file to hash.

    Returns:
        str: The hex digest.
    """
    data = pathlib.Path(path).read_bytes()
    digest = hashlib.sha1()
    digest.update(b"blob %d\0" % len(data))
    digest.update(data)
    return digest.hexdigest()


def _jsonable(value):
    """Converts numpy scalars and arrays for json.dumps."""
    if isinstance(value, np.integer):
        return int(value)
    elif isinstance(value, np.floating):
        return float(value)
    elif isinstance(value, np.bool_):
        return bool(value)
    elif isinstance(value, np.ndarray):
        return value.tolist()
    elif isinstance(value, complex):
        return [value.real, value.imag]
    elif isinstance(value, (set, tuple)):
        return list(value)
    elif isinstance(value, pathlib.PurePath):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(obj):
    """Dumps an object as JSON with sorted keys and an indent of two; floats keep their shortest round-trip form."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


# Classes #
class OutputsHandler(BaseObject):
    """Writes the output files of one run into a directory and remembers them.

    Attributes:
        directory (:obj:`Path`): The output directory.
        written (dict): The written files by name, in the order they were first written.

    Args:
        directory: The output directory, created if missing.
        init (bool, optional): Determines if this object will construct.
    """
    # Construction/Destruction
    def __init__(self, directory=".", init=True):
        self.directory = pathlib.Path(".")
        self.written = {}

        if init:
            self.construct(directory)

    def __len__(self):
        return len(self.written)

    def __contains__(self, name):
        return name in self.written

    def __getitem__(self, name):
        return self.written[name]

    # Constructors
    def construct(self, directory="."):
        """Constructs this object.

        Args:
            directory: The output directory.
        """
        self.directory = pathlib.Path(directory)

    # Writers
    def path(self, name):
        """The path a named output is written to."""
        return self.directory / name

    def _record(self, name):
        path = self.path(name)
        self.written[name] = path
        return path

    def _prepare(self, name):
        self.directory.mkdir(parents=True, exist_ok=True)
        return self.path(name)

    def write_csv(self, name, header, rows):
        """Writes a CSV file with a header row.

        Args:
            name (str): The file name.
            header (list): The column names.
            rows: The rows; floats are written with repr.

        Returns:
            :obj:`Path`: The written file.
        """
        path = self._prepare(name)
        with path.open("w", newline="") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(value) for value in row])
        return self._record(name)

    def write_json(self, name, obj):
        """Writes a JSON file with sorted keys.

        Args:
            name (str): The file name.
            obj: The JSON ready object.

        Returns:
            :obj:`Path`: The written file.
        """
        path = self._prepare(name)
        path.write_text(dumps(obj))
        return self._record(name)

    def write_map(self, name, sampling_map):
        """Writes a sampling map in its text format.

        Args:
            name (str): The file name.
            sampling_map (:obj:`SamplingMap`): The map.

        Returns:
            :obj:`Path`: The written file.
        """
        path = self._prepare(name)
        sampling_map.write(path)
        return self._record(name)

    def hashes(self):
        """Returns the content hash of every written file by name."""
        return {name: content_hash(path) for name, path in self.written.items()}

    def missing(self):
        """Returns the names of the recorded files that no longer exist."""
        return [name for name, path in self.written.items() if not path.exists()]


@dataclasses.dataclass
class RunReport:
    """The record of one command run.

    Attributes:
        command (str): The command name.
        config (dict): The echo of the experiment configuration.
        seed (int): The seed of all randomness in the run.
        input_hashes (dict): The content hashes of the input sampling map files.
        outputs (dict): The content hashes of the written files by name.
        notes (list): Interpretive notes.
        outcome (str): "ok", or the verdict or failure that sets a nonzero exit code.
        summary (dict): Command specific headline numbers.
        wall_time (float): The seconds the run took.
    """
    command: str
    config: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    input_hashes: dict = dataclasses.field(default_factory=dict)
    outputs: dict = dataclasses.field(default_factory=dict)
    notes: typing.List[str] = dataclasses.field(default_factory=list)
    outcome: str = "ok"
    summary: dict = dataclasses.field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self):
        return dataclasses.asdict(self)

    def write(self, outputs):
        """Writes this report as report.json through an OutputsHandler.

        The report is written last and is not part of its own output list.
        """
        return outputs.write_json(REPORT_NAME, self.to_json())

    @classmethod
    def read(cls, path):
        """Reads a report back from its JSON file."""
        return cls(**json.loads(pathlib.Path(path).read_text()))
