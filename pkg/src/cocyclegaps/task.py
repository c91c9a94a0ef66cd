#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" task.py
Description: The setup, task and closure lifecycle every command runs through, and a task composed of ordered units.
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
import time
import typing

# Downloaded Libraries #
from advancedlogging import AdvancedLogger, ObjectWithLogging

# Local Libraries #


# Definitions #
LIFECYCLE = "lifecycle"


# Classes #
class Task(ObjectWithLogging):
    """A unit of work with a setup stage, a main stage and a closure stage.

    Subclasses override setup, task and closure. The keyword arguments of each stage are stored on construction
    and may be replaced when the task is run. Closure always runs, so a command that fails halfway still
    accounts for the files it wrote.

    Class Attributes:
        class_loggers (dict): The default loggers to include in every object of this class.

    Attributes:
        loggers (dict): A collection of loggers used by this object. The keys are the names of the different loggers.
        name (str): The name of this object.
        allow_setup (bool): If the setup stage runs.
        allow_closure (bool): If the closure stage runs.
        alive (bool): If a run is in progress.
        wall_time (float): The seconds the last run took.
        failure (:obj:`Exception`): The exception that ended the last run, or None.
        setup_kwargs (dict): Keyword arguments of the setup stage.
        task_kwargs (dict): Keyword arguments of the main stage.
        closure_kwargs (dict): Keyword arguments of the closure stage.

    Args:
        name (str, optional): Name of this object.
        allow_setup (bool, optional): If the setup stage runs.
        allow_closure (bool, optional): If the closure stage runs.
        s_kwargs (dict, optional): Keyword arguments of the setup stage.
        t_kwargs (dict, optional): Keyword arguments of the main stage.
        c_kwargs (dict, optional): Keyword arguments of the closure stage.
        init (bool, optional): Determines if this object should be initialized.
    """
    class_loggers = {LIFECYCLE: AdvancedLogger(LIFECYCLE)}

    # Construction/Destruction
    def __init__(self, name=None, allow_setup=True, allow_closure=True,
                 s_kwargs=None, t_kwargs=None, c_kwargs=None, init=True):
        super().__init__()
        self.name = ""
        self.allow_setup = True
        self.allow_closure = True
        self.alive = False
        self.wall_time = 0.0
        self.failure = None

        self.setup_kwargs = {}
        self.task_kwargs = {}
        self.closure_kwargs = {}

        if init:
            self.construct(name, allow_setup, allow_closure, s_kwargs, t_kwargs, c_kwargs)

    # Constructors/Destructors
    def construct(self, name=None, allow_setup=True, allow_closure=True, s_kwargs=None, t_kwargs=None,
                  c_kwargs=None):
        """Constructs this object.

        Args:
            name (str, optional): Name of this object.
            allow_setup (bool, optional): If the setup stage runs.
            allow_closure (bool, optional): If the closure stage runs.
            s_kwargs (dict, optional): Keyword arguments of the setup stage.
            t_kwargs (dict, optional): Keyword arguments of the main stage.
            c_kwargs (dict, optional): Keyword arguments of the closure stage.
        """
        if name is not None:
            self.name = name
        self.allow_setup = allow_setup
        self.allow_closure = allow_closure
        self.setup_kwargs = dict(s_kwargs or {})
        self.task_kwargs = dict(t_kwargs or {})
        self.closure_kwargs = dict(c_kwargs or {})

        self.build_loggers()

    def build_loggers(self):
        """Attaches extra loggers or handlers to this object; nothing by default."""
        pass

    # Stages
    def setup(self, **kwargs):
        self.trace_log(LIFECYCLE, "setup", "no setup stage", name=self.name, level="DEBUG")

    def task(self, **kwargs):
        self.trace_log(LIFECYCLE, "task", "no main stage", name=self.name, level="DEBUG")

    def closure(self, **kwargs):
        self.trace_log(LIFECYCLE, "closure", "no closure stage", name=self.name, level="DEBUG")

    def _run_stage(self, stage, allowed, kwargs, func_name):
        if not allowed:
            self.trace_log(LIFECYCLE, func_name, f"skipping {stage}", name=self.name, level="DEBUG")
            return
        self.trace_log(LIFECYCLE, func_name, f"running {stage}", name=self.name, level="DEBUG")
        getattr(self, stage)(**kwargs)

    def execute_setup(self, func_name="execute_setup", allow_setup=None, **kwargs):
        """Runs the setup stage unless it is disabled.

        Args:
            func_name (str): The calling function, for logging.
            allow_setup (bool, optional): Overrides allow_setup for this call.
            **kwargs: Replaces the stored setup keyword arguments when given.
        """
        if kwargs:
            self.setup_kwargs = kwargs
        self._run_stage("setup", self.allow_setup if allow_setup is None else allow_setup, self.setup_kwargs, func_name)

    def execute_task(self, func_name="execute_task", **kwargs):
        """Runs the main stage and tracks whether this object is alive while it does."""
        if kwargs:
            self.task_kwargs = kwargs
        was_alive = self.alive
        self.alive = True
        try:
            self._run_stage("task", True, self.task_kwargs, func_name)
        finally:
            self.alive = was_alive

    def execute_closure(self, func_name="execute_closure", allow_closure=None, **kwargs):
        """Runs the closure stage unless it is disabled.

        Args:
            func_name (str): The calling function, for logging.
            allow_closure (bool, optional): Overrides allow_closure for this call.
            **kwargs: Replaces the stored closure keyword arguments when given.
        """
        if kwargs:
            self.closure_kwargs = kwargs
        allowed = self.allow_closure if allow_closure is None else allow_closure
        self._run_stage("closure", allowed, self.closure_kwargs, func_name)

    def run(self, s_kwargs=None, t_kwargs=None, c_kwargs=None):
        """Runs setup, the main stage and closure once.

        The exception of a failed stage is kept in failure and raised again after closure.

        Args:
            s_kwargs (dict, optional): Keyword arguments of the setup stage.
            t_kwargs (dict, optional): Keyword arguments of the main stage.
            c_kwargs (dict, optional): Keyword arguments of the closure stage.
        """
        self.failure = None
        start = time.perf_counter()
        self.alive = True
        try:
            self.execute_setup(func_name="run", **(s_kwargs or {}))
            self.execute_task(func_name="run", **(t_kwargs or {}))
        except Exception as error:
            self.failure = error
            raise
        finally:
            self.wall_time = time.perf_counter() - start
            try:
                self.execute_closure(func_name="run", **(c_kwargs or {}))
            finally:
                self.alive = False


@dataclasses.dataclass
class TaskUnit:
    """A task held by a MultiUnitTask.

    Attributes:
        name (str): The name of the unit.
        obj: The task.
        pre_setup (bool): If its setup runs in the parent's setup rather than right before its main stage.
        post_closure (bool): If its closure runs in the parent's closure rather than right after its main stage.
    """
    name: str
    obj: typing.Any
    pre_setup: bool = False
    post_closure: bool = False


class MultiUnitTask(Task):
    """A Task whose main stage runs the tasks it contains in a fixed order.

    Attributes:
        units (:obj:`dict` of :obj:`TaskUnit`): The contained tasks by name.

    Args:
        name (str, optional): Name of this object.
        units (dict, optional): The contained tasks; values are TaskUnits, dicts of TaskUnit fields or Tasks.
        order (:obj:`tuple` of :obj:`str`, optional): The unit names in execution order.
        init (bool, optional): Determines if this object should be initialized.
        **kwargs: The keyword arguments for the Task constructor.
    """
    # Construction/Destruction
    def __init__(self, name=None, units=None, order=(), init=True, **kwargs):
        super().__init__(init=False)
        self._execution_order = ()
        self.units = {}

        if init:
            self.construct(units=units, order=order, name=name, **kwargs)

    @property
    def execution_order(self):
        """The unit names in execution order; insertion order until one is set.

        Setting an order that is not a permutation of the unit names raises IndexError.
        """
        return self._execution_order or tuple(self.units)

    @execution_order.setter
    def execution_order(self, value):
        if len(value) != len(self.units) or set(value) != set(self.units):
            raise IndexError(f"the execution order {tuple(value)} must name each of {tuple(self.units)} once")
        self._execution_order = tuple(value)

    # Container Methods
    def __len__(self):
        return len(self.units)

    def __getitem__(self, key):
        """Returns the task of the named unit."""
        if key not in self.units:
            raise KeyError(key)
        return self.units[key].obj

    def construct(self, units=None, order=(), **kwargs):
        """Constructs this object.

        Args:
            units (dict, optional): The contained tasks.
            order (:obj:`tuple` of :obj:`str`, optional): The unit names in execution order.
            **kwargs: The keyword arguments for the Task constructor.
        """
        super().construct(**kwargs)
        if units:
            self.update(units)
        if order:
            self.execution_order = order

    def update(self, units):
        """Adds units, given as TaskUnits, dicts of TaskUnit fields or bare tasks."""
        for name, unit in units.items():
            if isinstance(unit, dict):
                unit = TaskUnit(**{"name": name, **unit})
            elif not isinstance(unit, TaskUnit):
                unit = TaskUnit(name, unit)
            self.units[name] = unit

    # Stages
    def setup(self, **kwargs):
        for name in self.execution_order:
            unit = self.units[name]
            if unit.pre_setup:
                unit.obj.execute_setup(allow_setup=True)

    def task(self, **kwargs):
        for name in self.execution_order:
            unit = self.units[name]
            self.trace_log(LIFECYCLE, "task", f"running unit {name}", name=self.name, level="DEBUG")
            if not unit.pre_setup:
                unit.obj.execute_setup()
            try:
                unit.obj.execute_task()
            finally:
                if not unit.post_closure:
                    unit.obj.execute_closure()

    def closure(self, **kwargs):
        for name in self.execution_order:
            unit = self.units[name]
            if unit.post_closure:
                unit.obj.execute_closure(allow_closure=True)
