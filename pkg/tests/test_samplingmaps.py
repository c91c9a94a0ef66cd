#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_samplingmaps.py
Description: Tests for the sampling maps and their text format.
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
import numpy as np
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


class TestSamplingMap(ClassTest):
    class_ = cocyclegaps.SamplingMap

    def test_constant(self):
        f = self.class_.constant(0.3, cocyclegaps.DISK, dims=2)
        assert np.allclose(f(np.array([[0.1, 0.2], [0.7, 0.9]])), [0.3, 0.3])

    def test_cosine(self):
        v = self.class_.cosine(1.0)
        assert np.allclose(v(np.array([[0.0], [0.5], [0.25]])), [2.0, -2.0, 0.0], atol=1e-15)
        assert v(np.array([[0.1]])).dtype == float

    def test_mode(self):
        f = self.class_.mode(0.5, dims=2)
        assert np.allclose(f(np.array([[0.25, 0.6]])), [0.5j], atol=1e-15)

    def test_dimension_mismatch(self):
        f = self.class_.mode(0.5, dims=2)
        with pytest.raises(cocyclegaps.DimensionMismatch):
            f(np.array([[0.25]]))
        with pytest.raises(cocyclegaps.DimensionMismatch):
            self.class_(cocyclegaps.REAL, 1, [((1, 0), 1.0)])

    def test_unknown_codomain(self):
        with pytest.raises(ValueError):
            self.class_("sphere")

    def test_representation(self):
        assert self.class_.cosine(1.0).representation == "fourier"
        assert self.class_.from_lattice(np.zeros(4)).representation == "grid"
        assert self.class_.cosine(1.0).with_lattice_delta(np.zeros(4)).representation == "mixed"

    def test_check_disk(self):
        points = cocyclegaps.make_grid(cocyclegaps.Rotation(), 16).points
        assert self.class_.mode(0.5).check_disk(points) == pytest.approx(0.5)
        with pytest.raises(cocyclegaps.AlphaOutOfDisk):
            self.class_.mode(1.0).check_disk(points)

    def test_check_floor(self):
        points = cocyclegaps.make_grid(cocyclegaps.Rotation(), 16).points
        assert self.class_.constant(1.0, floor=0.5).check_floor(points) == pytest.approx(1.0)
        with pytest.raises(cocyclegaps.NonpositiveA):
            self.class_.cosine(1.0).check_floor(points)

    def test_file_round_trip(self, tmp_dir):
        f = self.class_(cocyclegaps.DISK, 2, [((1, 0), 0.1 + 0.2j), ((0, 3), -0.05)],
                        grid_values=np.full((4, 4), 0.01j), floor=None)
        path = f.write(tmp_dir / "f.map")
        g = self.class_.read(path)
        assert g.codomain == cocyclegaps.DISK
        assert g.fourier == f.fourier
        assert np.array_equal(g.grid_values, f.grid_values)

    def test_comments_skipped(self):
        text = "# a comment\ncodomain=real dims=1 resolution=0 floor=0.5\nfourier 0 1.0 0\n"
        v = self.class_.from_text(text)
        assert v.floor == 0.5
        assert v(np.array([[0.3]]))[0] == pytest.approx(1.0)

    def test_bad_text(self):
        with pytest.raises(ValueError):
            self.class_.from_text("")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=1 resolution=0\nspline 0 1.0\n")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=1 resolution=0\ngrid 0 1.0\n")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=1 resolution=2\ngrid 5 1.0\n")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=1 resolution=2\ngrid -1 1.0\n")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=2 resolution=2\ngrid 0 1.0\n")
        with pytest.raises(ValueError):
            self.class_.from_text("codomain=real dims=1 resolution=2\ngrid 0\n")

    def test_imaginary_part_optional(self):
        v = self.class_.from_text("codomain=disk dims=1 resolution=2\ngrid 0 0.5\ngrid 1 0.25 0.1\nfourier 1 0.1\n")
        assert v.grid_values[0] == 0.5 + 0.0j
        assert v.grid_values[1] == 0.25 + 0.1j
        assert v.fourier == [((1,), 0.1 + 0.0j)]

    def test_describe(self):
        description = self.class_.cosine(0.5).describe()
        assert description["codomain"] == cocyclegaps.REAL
        assert description["representation"] == "fourier"
        assert len(description["fourier"]) == 2


class TestLattice(ClassTest):
    def test_nodes_exact(self):
        values = np.array([0.0, 1.0, 2.0, 3.0])
        assert np.array_equal(cocyclegaps.lattice_interpolate(values, np.array([[0.25], [0.5]])), [1.0, 2.0])

    def test_linear_between_nodes(self):
        values = np.array([0.0, 1.0, 2.0, 3.0])
        result = cocyclegaps.lattice_interpolate(values, np.array([[0.125], [0.875]]))
        assert np.allclose(result, [0.5, 1.5])

    def test_bilinear(self):
        values = np.array([[0.0, 1.0], [2.0, 3.0]])
        assert cocyclegaps.lattice_interpolate(values, np.array([[0.25, 0.25]]))[0] == pytest.approx(1.5)

    def test_delta(self):
        f = cocyclegaps.SamplingMap.from_lattice(np.zeros((4, 4)))
        g = f.with_lattice_delta(np.ones((4, 4)))
        assert np.allclose(g(np.array([[0.3, 0.7]])), [1.0])
        with pytest.raises(cocyclegaps.DimensionMismatch):
            f.with_lattice_delta(np.ones((8, 8)))


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
