#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" processors.py
Description: A worker pool that maps a function over ordered chunks of a parameter grid, in-process or across
separate processes, with identical results either way.
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
import multiprocessing
from multiprocessing import Pool

# Downloaded Libraries #
from advancedlogging import AdvancedLogger, ObjectWithLogging
import numpy as np

# Local Libraries #


# Definitions #
DEFAULT_CHUNK_SIZE = 128


# Functions #
def split_chunks(values, chunk_size=DEFAULT_CHUNK_SIZE):
    """Splits a one dimensional array into consecutive chunks of at most chunk_size entries.

    Args:
        values: The values to split.
        chunk_size (int, optional): The largest chunk.

    Returns:
        list: The chunks, in order.
    """
    values = np.asarray(values)
    if chunk_size < 1:
        raise ValueError(f"the chunk size must be positive, got {chunk_size}")
    return [values[start:start + chunk_size] for start in range(0, len(values), chunk_size)]


# Classes #
class ChunkPool(ObjectWithLogging):
    """A thin wrapper of multiprocessing.Pool that maps over ordered chunks.

    With a single thread the chunks run in this process, so no pickling happens. Pool.map keeps the chunk order, so
    the assembled output does not depend on the number of threads.

    Class Attributes:
        CPU_COUNT (int): The number of CPUs this computer has.
        class_loggers (:obj:`dict` of :obj:`AdvancedLogger`): The loggers for this class.

    Attributes:
        name (str): The name of this object.
        threads (int): The number of worker processes.
        _pool (:obj:`Pool`): The pool, created on first use.

    Args:
        threads (int, optional): The number of worker processes, capped at CPU_COUNT.
        name (str, optional): The name of this object.
        init (bool, optional): Determines if this object will construct.
    """
    CPU_COUNT = multiprocessing.cpu_count()
    class_loggers = {"chunk_pool": AdvancedLogger("chunk_pool")}

    # Construction/Destruction
    def __init__(self, threads=1, name="", init=True):
        super().__init__()
        self.name = ""
        self.threads = 1
        self._pool = None

        if init:
            self.construct(threads, name)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    # Pickling
    def __getstate__(self):
        """Creates a dictionary of attributes which can be used to rebuild this object, without the pool.

        Returns:
            dict: A dictionary of this object's attributes.
        """
        out_dict = self.__dict__.copy()
        out_dict["_pool"] = None
        return out_dict

    def __setstate__(self, in_dict):
        """Builds this object based on a dictionary of corresponding attributes.

        Args:
            in_dict (dict): The attributes to build this object from.
        """
        self.__dict__ = in_dict

    # Constructors
    def construct(self, threads=1, name=None):
        """Constructs this object.

        Args:
            threads (int, optional): The number of worker processes.
            name (str, optional): The name of this object.
        """
        if name is not None:
            self.name = name
        if threads is None or threads < 1:
            threads = 1
        self.threads = min(int(threads), self.CPU_COUNT)

    # Execution
    def map(self, function, chunks):
        """Applies a picklable function to every chunk and returns the results in chunk order.

        Args:
            function: A module level function of one argument.
            chunks (list): The arguments.

        Returns:
            list: The results, one per chunk.
        """
        chunks = list(chunks)
        if self.threads == 1 or len(chunks) < 2:
            self.trace_log("chunk_pool", "map", f"running {len(chunks)} chunks in process", name=self.name,
                           level="DEBUG")
            return [function(chunk) for chunk in chunks]

        if self._pool is None:
            self.trace_log("chunk_pool", "map", f"spawning {self.threads} workers...", name=self.name, level="DEBUG")
            self._pool = Pool(self.threads)
        return self._pool.map(function, chunks)

    def close(self):
        """Closes the pool and frees the resources."""
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None
