#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_supports.py
Description: Tests for the support boxes and their bump and plateau profiles.
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
import numpy as np
import pytest

# Local Libraries #
import src.cocyclegaps as cocyclegaps


# Definitions #
# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None


class TestSupportBox(ClassTest):
    class_ = cocyclegaps.SupportBox

    def test_invalid_corners(self):
        with pytest.raises(ValueError):
            self.class_((0.5,), (0.4,))
        with pytest.raises(ValueError):
            self.class_((0.5,), (1.2,))
        with pytest.raises(cocyclegaps.DimensionMismatch):
            self.class_((0.1, 0.2), (0.5,))

    def test_contains_closed(self):
        box = self.class_((0.25,), (0.5,))
        assert list(box.contains(np.array([[0.25], [0.5], [0.6]]))) == [True, True, False]

    def test_inner(self):
        inner = self.class_((0.2, 0.0), (0.6, 1.0)).inner()
        assert inner.lo == pytest.approx((0.24, 0.1))
        assert inner.hi == pytest.approx((0.56, 0.9))

    def test_expanded_is_clipped(self):
        box = self.class_((0.05,), (0.5,)).expanded(0.1)
        assert box.lo == (0.0,)
        assert box.hi == pytest.approx((0.6,))

    def test_distance_wraps(self):
        box = self.class_((0.0,), (0.1,))
        assert box.distance(np.array([[0.95], [0.05], [0.3]])) == pytest.approx([0.05, 0.0, 0.2])

    def test_bump(self):
        box = self.class_((0.2,), (0.6,))
        values = box.bump(np.array([[0.4], [0.3], [0.22], [0.8]]))
        assert values[0] == pytest.approx(1.0)
        assert 0.0 < values[1] < 1.0
        assert values[2] == 0.0 and values[3] == 0.0

    def test_bump_product(self):
        box = self.class_((0.2, 0.2), (0.6, 0.6))
        assert box.bump(np.array([[0.4, 0.4]]))[0] == pytest.approx(1.0)
        assert box.bump(np.array([[0.4, 0.58]]))[0] == 0.0

    def test_plateau(self):
        box = self.class_((0.2,), (0.6,))
        values = box.plateau(np.array([[0.4], [0.6], [0.62], [0.65]]))
        assert values[0] == 1.0 and values[1] == 1.0
        assert values[2] == pytest.approx(0.5)
        assert values[3] == 0.0

    def test_plateau_wraps(self):
        box = self.class_((0.0,), (0.1,))
        assert box.plateau(np.array([[0.999]]))[0] > 0.5

    def test_describe(self):
        assert self.class_((0.1,), (0.2,)).describe() == {"lo": [0.1], "hi": [0.2]}


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
