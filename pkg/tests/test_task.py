#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_task.py
Description: Tests for the setup, task and closure lifecycle and the multi unit task.
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
import pathlib

# Downloaded Libraries #
import advancedlogging
import pytest

# Local Libraries #
import src.cocyclegaps as cocyclegaps


# Definitions #
# Functions #
@pytest.fixture
def tmp_dir(tmpdir):
    """A pytest fixture that turn the tmpdir into a Path object."""
    return pathlib.Path(tmpdir)


# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None


class BaseTaskTest(ClassTest):
    class RecordTask(cocyclegaps.Task):
        log_path = None

        def __init__(self, calls=None, **kwargs):
            self.calls = [] if calls is None else calls
            super().__init__(**kwargs)

        def build_loggers(self):
            logger = advancedlogging.AdvancedLogger("TaskTest")
            logger.setLevel("DEBUG")
            if self.log_path is not None:
                logger.add_default_file_handler(self.log_path)
            self.loggers["TaskTest"] = logger

        def setup(self, **kwargs):
            self.calls.append((self.name, "setup"))
            self.trace_log("TaskTest", "setup", "Success!")

        def task(self, **kwargs):
            self.calls.append((self.name, "task", kwargs.get("value")))

        def closure(self, **kwargs):
            self.calls.append((self.name, "closure"))

    class FailTask(RecordTask):
        def task(self, **kwargs):
            raise cocyclegaps.NotFound("nothing here", stage="seek")


class TestTask(BaseTaskTest):
    def test_lifecycle(self):
        task = self.RecordTask(name="record", t_kwargs={"value": 3})
        task.run()
        assert task.calls == [("record", "setup"), ("record", "task", 3), ("record", "closure")]
        assert not task.alive
        assert task.wall_time >= 0.0
        assert task.failure is None

    def test_run_kwargs(self):
        task = self.RecordTask(name="record")
        task.run(t_kwargs={"value": 5})
        assert task.calls[1] == ("record", "task", 5)

    def test_skip_setup_and_closure(self):
        task = self.RecordTask(name="record", allow_setup=False, allow_closure=False)
        task.run()
        assert task.calls == [("record", "task", None)]

    def test_closure_after_failure(self):
        task = self.FailTask(name="fail")
        with pytest.raises(cocyclegaps.NotFound):
            task.run()
        assert task.calls == [("fail", "setup"), ("fail", "closure")]
        assert isinstance(task.failure, cocyclegaps.NotFound)
        assert not task.alive

    def test_log_file(self, tmp_dir):
        path = tmp_dir / "task.log"
        self.RecordTask.log_path = path
        try:
            self.RecordTask(name="logged").run()
        finally:
            self.RecordTask.log_path = None
        assert any("Success!" in line for line in path.read_text().splitlines())

    def test_alive_during_task(self):
        class AliveTask(cocyclegaps.Task):
            seen = None

            def task(self, **kwargs):
                self.seen = self.alive

        task = AliveTask(name="alive")
        task.execute_task()
        assert task.seen
        assert not task.alive
        assert not hasattr(task, "set_task")
        assert not hasattr(task, "is_alive")
        assert not hasattr(cocyclegaps.MultiUnitTask, "__delitem__")

    def test_default_methods(self):
        task = cocyclegaps.Task(name="plain")
        task.run()
        assert not task.alive


class TestMultiUnitTask(BaseTaskTest):
    class_ = cocyclegaps.MultiUnitTask

    def build(self, calls):
        first = self.RecordTask(calls, name="first")
        second = self.RecordTask(calls, name="second")
        return self.class_(name="multi", units={"first": first, "second": second})

    def test_order(self):
        calls = []
        multi = self.build(calls)
        multi.execution_order = ("second", "first")
        multi.run()
        assert [call[0] for call in calls] == ["second"] * 3 + ["first"] * 3

    def test_bad_order(self):
        multi = self.build([])
        with pytest.raises(IndexError):
            multi.execution_order = ("first",)

    def test_delayed_units(self):
        calls = []
        first = self.RecordTask(calls, name="first")
        second = self.RecordTask(calls, name="second")
        multi = self.class_(name="multi", units={"first": {"obj": first, "pre_setup": True},
                                                 "second": {"obj": second, "post_closure": True}})
        multi.run()
        assert calls == [("first", "setup"), ("first", "task", None), ("first", "closure"),
                         ("second", "setup"), ("second", "task", None), ("second", "closure")]
        assert isinstance(multi.units["first"], cocyclegaps.TaskUnit)

    def test_post_closure_runs_last(self):
        calls = []
        first = self.RecordTask(calls, name="first")
        second = self.RecordTask(calls, name="second")
        multi = self.class_(name="multi", units={"first": {"obj": first, "post_closure": True}, "second": second})
        multi.run()
        assert calls[-1] == ("first", "closure")

    def test_container(self):
        multi = self.build([])
        assert len(multi) == 2
        assert multi["first"].name == "first"
        with pytest.raises(KeyError):
            multi["third"]
        multi.execution_order = ("second", "first")
        assert multi.execution_order == ("second", "first")


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
