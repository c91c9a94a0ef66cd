#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_spectra.py
Description: Tests for the spectral scans, the gap reports, the finite truncations and their comparison.
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
import math

# Downloaded Libraries #
import numpy as np
import pytest

# Local Libraries #
import src.cocyclegaps as cocyclegaps


# Definitions #
SCAN_PARAMS = cocyclegaps.UHParameters(n_max=128, resolution=4)
FULL_PARAMS = cocyclegaps.UHParameters(n_max=256, resolution=64)
UH = cocyclegaps.UH
NOT_UH = cocyclegaps.NOT_UH


# Functions #
@pytest.fixture
def free_maps():
    return cocyclegaps.SamplingMap.constant(1.0), cocyclegaps.SamplingMap.constant(0.0)


@pytest.fixture(scope="module")
def free_scan():
    f_a, f_b = cocyclegaps.SamplingMap.constant(1.0), cocyclegaps.SamplingMap.constant(0.0)
    energies = cocyclegaps.parameter_grid(-3.0, 3.0, 0.01)
    return cocyclegaps.scan_jacobi(f_a, f_b, cocyclegaps.Rotation(), energies, SCAN_PARAMS)


def hand_scan(verdicts, axis=cocyclegaps.LINE, values=None):
    values = np.arange(len(verdicts), dtype=float) if values is None else values
    return cocyclegaps.SpectralScan(axis, values, verdicts)


def interlace(first, second):
    labels = [label for _, label in sorted([(v, 0) for v in first] + [(v, 1) for v in second])]
    return all(a != b for a, b in zip(labels, labels[1:] + labels[:1]))


# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None


class TestGrids(ClassTest):
    def test_parameter_grid(self):
        assert np.allclose(cocyclegaps.parameter_grid(0.0, 1.0, 0.25), [0.0, 0.25, 0.5, 0.75, 1.0])
        assert len(cocyclegaps.parameter_grid(-3.0, 3.0, 0.01)) == 601
        with pytest.raises(ValueError):
            cocyclegaps.parameter_grid(1.0, 0.0, 0.1)

    def test_circle_grid(self):
        values = cocyclegaps.circle_grid(math.pi / 2)
        assert np.allclose(values, [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])
        with pytest.raises(ValueError):
            cocyclegaps.circle_grid(0.0)


class TestScans(ClassTest):
    def test_free_jacobi(self, free_scan):
        spectrum = free_scan.spectrum
        assert spectrum.min() == pytest.approx(-2.0, abs=0.011)
        assert spectrum.max() == pytest.approx(2.0, abs=0.011)
        assert free_scan.metadata["model"] == cocyclegaps.JACOBI

    def test_free_jacobi_gaps(self, free_scan):
        report = cocyclegaps.gaps(free_scan)
        assert len(report.gaps) == 2
        assert report.gaps[0].lo == pytest.approx(-3.0)
        assert report.gaps[0].hi == pytest.approx(-2.0, abs=0.011)
        assert report.gaps[1].lo == pytest.approx(2.0, abs=0.011)
        assert report.gaps[1].hi == pytest.approx(3.0)
        assert not report.suspicious

    def test_shifted_jacobi(self):
        f_a, f_b = cocyclegaps.SamplingMap.constant(1.0), cocyclegaps.SamplingMap.constant(0.5)
        energies = cocyclegaps.parameter_grid(-3.0, 3.0, 0.05)
        scan = cocyclegaps.scan_jacobi(f_a, f_b, cocyclegaps.Rotation(), energies, SCAN_PARAMS)
        assert scan.spectrum.min() == pytest.approx(-1.5, abs=0.06)
        assert scan.spectrum.max() == pytest.approx(2.5, abs=0.06)

    def test_constant_cmv(self):
        f = cocyclegaps.SamplingMap.constant(0.5, cocyclegaps.DISK)
        scan = cocyclegaps.scan_cmv(f, cocyclegaps.Rotation(), cocyclegaps.circle_grid(0.01), SCAN_PARAMS)
        report = cocyclegaps.gaps(scan)
        assert len(report.gaps) == 1
        gap = report.gaps[0]
        assert gap.lo == pytest.approx(5.0 * math.pi / 3.0, abs=0.02)
        assert gap.hi == pytest.approx(2.0 * math.pi + math.pi / 3.0, abs=0.02)
        assert report.find(0.0) is gap
        assert report.find(math.pi) is None

    def test_cmv_symmetry(self):
        f = cocyclegaps.SamplingMap.constant(0.8, cocyclegaps.DISK)
        psis = 2.0 * math.pi * np.arange(40) / 40
        scan = cocyclegaps.scan_cmv(f, cocyclegaps.Rotation(), psis, SCAN_PARAMS)
        uh = scan.uh_mask
        assert np.array_equal(uh[1:], uh[1:][::-1])

    def test_free_cmv(self):
        f = cocyclegaps.SamplingMap.constant(0.0, cocyclegaps.DISK)
        scan = cocyclegaps.scan_cmv(f, cocyclegaps.Rotation(), cocyclegaps.circle_grid(0.1), SCAN_PARAMS)
        assert not scan.uh_mask.any()
        assert cocyclegaps.gaps(scan).gaps == []

    def test_threads_do_not_change_results(self, free_maps):
        energies = cocyclegaps.parameter_grid(-3.0, 3.0, 0.25)
        params = cocyclegaps.UHParameters(n_max=32, resolution=4)
        with_one = cocyclegaps.SpectralScanner(params, threads=1, chunk_size=5)
        with_two = cocyclegaps.SpectralScanner(params, threads=2, chunk_size=5)
        try:
            first = with_one.scan_jacobi(*free_maps, cocyclegaps.Rotation(), energies)
            second = with_two.scan_jacobi(*free_maps, cocyclegaps.Rotation(), energies)
        finally:
            with_one.close()
            with_two.close()
        assert first.verdicts == second.verdicts

    def test_nonpositive_a(self):
        f_a, f_b = cocyclegaps.SamplingMap.cosine(1.0), cocyclegaps.SamplingMap.constant(0.0)
        with pytest.raises(cocyclegaps.NonpositiveA):
            cocyclegaps.scan_jacobi(f_a, f_b, cocyclegaps.Rotation(), [0.0], SCAN_PARAMS)

    def test_rows(self, free_scan):
        rows = free_scan.rows()
        assert len(rows) == len(free_scan)
        assert rows[0][1] == UH
        assert float(rows[0][0]) == -3.0


class TestGaps(ClassTest):
    def test_runs(self):
        report = cocyclegaps.gaps(hand_scan([UH, UH, NOT_UH, NOT_UH, UH]))
        assert [(gap.lo, gap.hi) for gap in report.gaps] == [(0.0, 1.5), (3.5, 4.0)]

    def test_all_uh(self):
        report = cocyclegaps.gaps(hand_scan([UH, UH, UH]))
        assert report.suspicious
        assert [(gap.lo, gap.hi) for gap in report.gaps] == [(0.0, 2.0)]

    def test_undetermined_is_spectrum(self):
        report = cocyclegaps.gaps(hand_scan([UH, cocyclegaps.UNDETERMINED, UH]))
        assert len(report.gaps) == 2
        assert report.undetermined_count == 1

    def test_wrapping_arc(self):
        report = cocyclegaps.gaps(hand_scan([UH, NOT_UH, NOT_UH, UH], cocyclegaps.CIRCLE))
        assert len(report.gaps) == 1
        assert report.gaps[0].lo == pytest.approx(2.5)
        assert report.gaps[0].hi == pytest.approx(0.5 + 2.0 * math.pi)

    def test_negative_line_values(self):
        values = np.array([-3.0, -2.5, -2.0, -1.5, 0.0, 1.0])
        scan = hand_scan([UH, UH, NOT_UH, UH, NOT_UH, NOT_UH], values=values)
        report = cocyclegaps.gaps(scan)
        assert [(gap.lo, gap.hi) for gap in report.gaps] == [(-3.0, -2.25), (-1.75, -0.75)]
        for value, is_uh in zip(values, scan.uh_mask):
            assert (report.find(value) is not None) == is_uh

    def test_to_json(self):
        record = cocyclegaps.gaps(hand_scan([UH, NOT_UH])).to_json()
        assert record["gaps"] == [{"lo": 0.0, "hi": 0.5, "width": 0.5}]
        assert record["undetermined_count"] == 0

    def test_scan_validation(self):
        with pytest.raises(ValueError):
            hand_scan([UH, UH], values=np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            hand_scan([UH], values=np.array([0.0, 1.0]))


class TestTruncations(ClassTest):
    def test_single_jacobi(self, free_maps):
        x = cocyclegaps.BasePoint((0.3,))
        f_b = cocyclegaps.SamplingMap.cosine(0.5)
        truncation = cocyclegaps.truncation_jacobi(free_maps[0], f_b, cocyclegaps.Rotation(), x, 1)
        assert truncation.values == pytest.approx([math.cos(2.0 * math.pi * 0.3)])

    def test_free_jacobi(self, free_maps):
        x = cocyclegaps.BasePoint((0.0,))
        two = cocyclegaps.truncation_jacobi(*free_maps, cocyclegaps.Rotation(), x, 2)
        five = cocyclegaps.truncation_jacobi(*free_maps, cocyclegaps.Rotation(), x, 5)
        assert two.values == pytest.approx([-1.0, 1.0], abs=1e-10)
        assert five.values == pytest.approx([-math.sqrt(3.0), -1.0, 0.0, 1.0, math.sqrt(3.0)], abs=1e-10)
        assert five.axis == cocyclegaps.LINE

    def test_gershgorin(self):
        f_a = cocyclegaps.SamplingMap.cosine(0.2, dims=2, constant=1.0)
        f_b = cocyclegaps.SamplingMap.cosine(0.5, dims=2)
        dyn = cocyclegaps.SkewShift()
        truncation = cocyclegaps.truncation_jacobi(f_a, f_b, dyn, cocyclegaps.BasePoint((0.1, 0.2)), 50)
        assert truncation.values.min() >= -1.0 - 2.0 * 1.4
        assert truncation.values.max() <= 1.0 + 2.0 * 1.4
        matrix = cocyclegaps.jacobi_matrix(f_a, f_b, dyn, cocyclegaps.BasePoint((0.1, 0.2)), 50)
        assert truncation.values == pytest.approx(np.linalg.eigvalsh(matrix), abs=1e-9)

    def test_single_cmv(self):
        f = cocyclegaps.SamplingMap.constant(0.0, cocyclegaps.DISK)
        truncation = cocyclegaps.truncation_cmv(f, cocyclegaps.Rotation(), cocyclegaps.BasePoint((0.0,)), 1)
        assert truncation.values == pytest.approx([0.0], abs=1e-10)

    def test_free_cmv(self):
        f = cocyclegaps.SamplingMap.constant(0.0, cocyclegaps.DISK)
        truncation = cocyclegaps.truncation_cmv(f, cocyclegaps.Rotation(), cocyclegaps.BasePoint((0.0,)), 8)
        assert truncation.values == pytest.approx(2.0 * math.pi * np.arange(8) / 8, abs=1e-9)
        assert truncation.axis == cocyclegaps.CIRCLE

    def test_cmv_matches_unitary_matrix(self):
        f = cocyclegaps.SamplingMap.mode(0.4, dims=2)
        dyn = cocyclegaps.SkewShift()
        x = cocyclegaps.BasePoint((0.2, 0.7))
        truncation = cocyclegaps.truncation_cmv(f, dyn, x, 12, boundary_phase=0.5)
        matrix = cocyclegaps.cmv_matrix(cocyclegaps.cmv_coefficients(f, dyn, x, 12, 0.5))
        assert np.allclose(matrix.conj().T @ matrix, np.eye(12), atol=1e-12)
        phases = np.sort(np.mod(np.angle(np.linalg.eigvals(matrix)), 2.0 * math.pi))
        assert len(truncation.values) == 12
        assert cocyclegaps.distances_to_set(truncation.values, phases, cocyclegaps.CIRCLE).max() <= 1e-8

    def test_cmv_interlacing(self):
        f = cocyclegaps.SamplingMap.mode(0.3, dims=2)
        dyn = cocyclegaps.SkewShift()
        x = cocyclegaps.BasePoint((0.1, 0.1))
        first = cocyclegaps.truncation_cmv(f, dyn, x, 10, 0.0).values
        second = cocyclegaps.truncation_cmv(f, dyn, x, 10, math.pi).values
        assert np.all((first >= 0.0) & (first < 2.0 * math.pi))
        assert interlace(first, second)

    def test_bad_size(self, free_maps):
        with pytest.raises(ValueError):
            cocyclegaps.truncation_jacobi(*free_maps, cocyclegaps.Rotation(), cocyclegaps.BasePoint((0.0,)), 0)


class TestCompare(ClassTest):
    def test_distances(self):
        distances = cocyclegaps.distances_to_set([0.1, 6.25], [0.0], cocyclegaps.CIRCLE)
        assert distances == pytest.approx([0.1, 2.0 * math.pi - 6.25])
        assert np.isinf(cocyclegaps.distances_to_set([0.5], [])).all()
        assert cocyclegaps.distances_to_set([0.5, 2.9], [0.0, 1.0, 3.0]) == pytest.approx([0.5, 0.1])

    def test_free_jacobi_consistent(self, free_scan, free_maps):
        truncations = [cocyclegaps.truncation_jacobi(*free_maps, cocyclegaps.Rotation(),
                                                     cocyclegaps.BasePoint((k / 3,)), 40) for k in range(3)]
        report = cocyclegaps.compare(free_scan, truncations)
        assert report.consistent
        assert report.outlier_count == 0
        assert report.max_distance <= cocyclegaps.CONSISTENCY_DELTA
        assert len(report.to_json()["truncations"]) == 3

    def test_negative_energy_boundary_state(self):
        scan = hand_scan([UH, UH, NOT_UH, UH, NOT_UH, NOT_UH], values=np.array([-3.0, -2.5, -2.0, -1.5, 0.0, 1.0]))
        truncation = cocyclegaps.TruncationSpectrum(cocyclegaps.JACOBI, 2, np.array([-2.6, -2.0]),
                                                    cocyclegaps.BasePoint((0.0,)))
        report = cocyclegaps.compare(scan, [truncation], delta=0.1)
        assert report.outlier_count == 1
        assert report.truncations[0]["outliers"][0]["gap"] == {"lo": -3.0, "hi": -2.25, "width": 0.75}
        assert report.consistent

    def test_overloaded_gap(self):
        scan = hand_scan([NOT_UH, UH, UH, UH, UH, NOT_UH])
        truncation = cocyclegaps.TruncationSpectrum(cocyclegaps.JACOBI, 3, np.array([2.0, 2.5, 3.0]),
                                                    cocyclegaps.BasePoint((0.0,)))
        report = cocyclegaps.compare(scan, [truncation], delta=0.1)
        assert report.outlier_count == 3
        assert not report.consistent
        assert report.overloaded_gaps[0]["count"] == 3


@pytest.mark.slow
class TestFullResolution(ClassTest):
    def test_free_jacobi_edges(self, free_maps):
        energies = cocyclegaps.parameter_grid(-3.0, 3.0, 1e-3)
        scan = cocyclegaps.scan_jacobi(*free_maps, cocyclegaps.Rotation(), energies, FULL_PARAMS)
        report = cocyclegaps.gaps(scan)
        assert len(report.gaps) == 2
        assert report.gaps[0].hi == pytest.approx(-2.0, abs=2e-3)
        assert report.gaps[1].lo == pytest.approx(2.0, abs=2e-3)

    @pytest.mark.parametrize("r", [0.3, 0.5, 0.8])
    def test_constant_cmv_arcs(self, r):
        f = cocyclegaps.SamplingMap.constant(r, cocyclegaps.DISK)
        scan = cocyclegaps.scan_cmv(f, cocyclegaps.Rotation(), cocyclegaps.circle_grid(1e-3), FULL_PARAMS)
        report = cocyclegaps.gaps(scan)
        assert len(report.gaps) == 1
        half_width = 2.0 * math.asin(r)
        assert report.gaps[0].lo == pytest.approx(2.0 * math.pi - half_width, abs=2e-3)
        assert report.gaps[0].hi == pytest.approx(2.0 * math.pi + half_width, abs=2e-3)

    def test_skew_shift_jacobi_two_routes(self):
        dyn = cocyclegaps.SkewShift()
        f_a = cocyclegaps.SamplingMap.constant(1.0, dims=2)
        f_b = cocyclegaps.SamplingMap.cosine(0.5, dims=2)
        energies = cocyclegaps.parameter_grid(-3.0, 3.0, 2e-3)
        scan = cocyclegaps.scan_jacobi(f_a, f_b, dyn, energies, FULL_PARAMS, threads=4)
        truncations = [cocyclegaps.truncation_jacobi(f_a, f_b, dyn, cocyclegaps.BasePoint((k / 5, k / 7)), 200)
                       for k in range(5)]
        report = cocyclegaps.compare(scan, truncations)
        assert report.consistent

    def test_skew_shift_cmv_two_routes(self):
        dyn = cocyclegaps.SkewShift()
        f = cocyclegaps.SamplingMap.mode(0.5, 1, dims=2)
        scan = cocyclegaps.scan_cmv(f, dyn, cocyclegaps.circle_grid(2e-3), FULL_PARAMS, threads=4)
        truncations = [cocyclegaps.truncation_cmv(f, dyn, cocyclegaps.BasePoint((k / 5, k / 7)), 200)
                       for k in range(5)]
        report = cocyclegaps.compare(scan, truncations)
        assert report.consistent


# Main #
if __name__ == '__main__':
    pytest.main(["-v", "-s"])
