#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_cli.py
Description: Tests for the command line, its overrides and its exit codes.
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
import json
import pathlib

# Downloaded Libraries #
import pytest

# Local Libraries #
import src.cocyclegaps as cocyclegaps
from src.cocyclegaps import cli


# Definitions #
FREE_JACOBI = """
[model]
kind = jacobi
dynamics = rotation
a = 1
b = 0

[scan]
lo = -3
hi = 3
step = 0.5

[uh]
n_max = 64
resolution = 8

[run]
seed = 5
"""

EMPTY_SUPPORT_CMV = """
[model]
kind = cmv
dynamics = rotation
f = 0.5

[uh]
n_max = 32
resolution = 16

[pipeline]
support_lo = 0.51
support_hi = 0.52
budget = 4
"""


# Functions #
@pytest.fixture
def tmp_dir(tmpdir):
    """A pytest fixture that turn the tmpdir into a Path object."""
    return pathlib.Path(tmpdir)


@pytest.fixture
def jacobi_file(tmp_dir):
    path = tmp_dir / "jacobi.ini"
    path.write_text(FREE_JACOBI)
    return path


def read_report(directory):
    return json.loads((directory / cocyclegaps.REPORT_NAME).read_text())


# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None


class TestParser(ClassTest):
    def test_commands(self):
        parser = cli.build_parser()
        for command in ("scan", "certify", "perturb", "truncate", "grid-dump", "compare"):
            args = parser.parse_args([command, "--config", "x.ini"])
            assert args.command == command
            assert args.out == "."

    def test_perturb_options(self):
        args = cli.build_parser().parse_args(["perturb", "--config", "x.ini", "--target", "cmv", "--param", "1.5"])
        assert args.target == "cmv"
        assert args.param == 1.5

    def test_config_required(self):
        with pytest.raises(SystemExit):
            cli.build_parser().parse_args(["scan"])

    def test_param_only_where_used(self):
        with pytest.raises(SystemExit):
            cli.build_parser().parse_args(["scan", "--config", "x.ini", "--param", "1.0"])


class TestMain(ClassTest):
    def test_scan(self, tmp_dir, jacobi_file):
        out = tmp_dir / "scan"
        assert cli.main(["scan", "--config", str(jacobi_file), "--out", str(out)]) == cli.EXIT_OK
        report = read_report(out)
        assert report["command"] == "scan"
        assert report["seed"] == 5
        assert (out / "scan.csv").is_file()

    def test_seed_override(self, tmp_dir, jacobi_file):
        out = tmp_dir / "grid"
        assert cli.main(["grid-dump", "--config", str(jacobi_file), "--out", str(out), "--seed", "9"]) == 0
        assert read_report(out)["seed"] == 9

    def test_certify(self, tmp_dir, jacobi_file):
        out = tmp_dir / "certify"
        assert cli.main(["certify", "--config", str(jacobi_file), "--out", str(out), "--param", "3.0"]) == 0
        assert json.loads((out / "certificate.json").read_text())["verdict"] == "UH"

    def test_undetermined_exit(self, tmp_dir, jacobi_file):
        out = tmp_dir / "certify"
        code = cli.main(["certify", "--config", str(jacobi_file), "--out", str(out), "--param", "2.0"])
        assert code == cli.EXIT_NOT_FOUND

    def test_config_error_exit(self, tmp_dir, jacobi_file, capsys):
        out = tmp_dir / "certify"
        assert cli.main(["certify", "--config", str(jacobi_file), "--out", str(out)]) == cli.EXIT_ERROR
        assert "ConfigInvalid" in capsys.readouterr().err
        assert read_report(out)["outcome"] == "ConfigInvalid"

    def test_map_without_imaginary_parts(self, tmp_dir):
        (tmp_dir / "f.map").write_text("codomain=disk dims=1 resolution=2\ngrid 0 0.5\ngrid 1 0.25\n")
        path = tmp_dir / "cmv.ini"
        path.write_text("[model]\nkind = cmv\ndynamics = rotation\nf = file f.map\n")
        assert cli.main(["grid-dump", "--config", str(path), "--out", str(tmp_dir / "grid")]) == cli.EXIT_OK

    def test_map_index_out_of_range(self, tmp_dir, capsys):
        (tmp_dir / "f.map").write_text("codomain=disk dims=1 resolution=2\ngrid 5 0.5\n")
        path = tmp_dir / "cmv.ini"
        path.write_text("[model]\nkind = cmv\ndynamics = rotation\nf = file f.map\n")
        out = tmp_dir / "grid"
        assert cli.main(["grid-dump", "--config", str(path), "--out", str(out)]) == cli.EXIT_ERROR
        assert "ConfigInvalid" in capsys.readouterr().err

    def test_missing_config(self, tmp_dir):
        assert cli.main(["scan", "--config", str(tmp_dir / "none.ini")]) == cli.EXIT_ERROR

    def test_not_found_exit(self, tmp_dir, capsys):
        path = tmp_dir / "cmv.ini"
        path.write_text(EMPTY_SUPPORT_CMV)
        out = tmp_dir / "perturb"
        code = cli.main(["perturb", "--config", str(path), "--out", str(out), "--param", "0.0"])
        assert code == cli.EXIT_NOT_FOUND
        assert "support" in capsys.readouterr().err
        assert (out / "notfound.json").is_file()

    def test_threads_override(self, tmp_dir, jacobi_file):
        code = cli.main(["scan", "--config", str(jacobi_file), "--out", str(tmp_dir), "--threads", "0"])
        assert code == cli.EXIT_ERROR

    def test_log_file(self, tmp_dir, jacobi_file):
        log = tmp_dir / "run.log"
        try:
            code = cli.main(["--log-level", "INFO", "--log-file", str(log), "grid-dump", "--config",
                             str(jacobi_file), "--out", str(tmp_dir / "grid")])
        finally:
            cli.setup_logging("WARNING")
        assert code == 0
        assert log.is_file()
        assert "grid-dump" in log.read_text()


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
