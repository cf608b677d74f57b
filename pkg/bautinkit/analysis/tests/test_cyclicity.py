import math

import numpy as np
import pytest

from bautinkit.analysis.cyclicity import analyze_cyclicity
from bautinkit.analysis.cyclicity import compute_radius
from bautinkit.analysis.cyclicity import find_extremal
from bautinkit.analysis.cyclicity import global_bound_value
from bautinkit.analysis.cyclicity import global_row
from bautinkit.analysis.cyclicity import non_central_samples
from bautinkit.analysis.cyclicity import practical_radius
from bautinkit.analysis.cyclicity import sandwich_row
from bautinkit.analysis.cyclicity import verify_global_bound
from bautinkit.analysis.cyclicity import verify_sandwich
from bautinkit.analysis.exceptions import CentralParameterError
from bautinkit.analysis.exceptions import ConfigurationError
from bautinkit.analysis.families import ParameterBox


class TestComputeRadius:
    def test_vanishing_product(self):
        radius = compute_radius(0, 3.0, 0.0)
        assert radius.R == 0.5
        assert radius.R_0 == 1.0
        assert not radius.underflow

    def test_direct_formula(self):
        radius = compute_radius(1, 1.0, 1.0)
        assert radius.R == pytest.approx(1 / (4 * 2**30 + 2))
        assert radius.R_0 == pytest.approx(1 / (2 * 2**30 + 1))
        assert radius.log2_inverse_R == pytest.approx(math.log2(4 * 2**30 + 2))

    def test_underflow_is_reported_in_log_space(self):
        radius = compute_radius(50, 1.0, 1.0)
        assert radius.underflow
        assert radius.log2_inverse_R == pytest.approx(1502, abs=1e-6)

    def test_negative_inputs(self):
        with pytest.raises(ConfigurationError):
            compute_radius(1, -1.0, 1.0)


def test_global_bound_value():
    assert global_bound_value(2, 1.0, 1.0) == pytest.approx(8 + math.log(4) / math.log(1.25))


class TestSandwich:
    def test_example2_near_the_center(self, example2):
        row = sandwich_row(example2.family, (1e-12,), 0.1, 10)
        # the ten zeros sit on |z| = 10^-1.2, between r/2 and r
        assert (row.N_half_P, row.N_r_f, row.N_2r_P) == (0, 10, 10)
        assert row.passed

    def test_central_parameter_fails_the_row(self, example2):
        row = sandwich_row(example2.family, (0,), 0.1, 10)
        assert not row.passed
        assert row.error

    def test_practical_radius_of_a_polynomial(self, cubic):
        assert practical_radius(cubic.family, 3, [(0.1,)]) == 0.4

    def test_unknown_mode(self, cubic):
        with pytest.raises(ConfigurationError):
            verify_sandwich(cubic.family, cubic.K, cubic.O, (3, 0.0, 0.0), None, [(0.1,)], mode="guess")

    def test_theoretical_mode(self, cubic):
        mode, r_prac, rows = verify_sandwich(
            cubic.family, cubic.K, cubic.O, (3, 0.0, 0.0), [0.2, 0.3, 0.6], [(0.1,), (0.2j,)], mode="theoretical"
        )
        assert mode == "theoretical"
        assert r_prac is None
        # R = 1/2 drops the 0.6 radius
        assert len(rows) == 4
        assert all(row.passed and row.N_r_f == 3 for row in rows)

    def test_no_radius_below_R(self, cubic):
        with pytest.raises(ConfigurationError):
            verify_sandwich(cubic.family, cubic.K, cubic.O, (3, 0.0, 0.0), [0.6], [(0.1,)], mode="theoretical")


class TestGlobalBound:
    def test_rows(self, cubic):
        bound, rows = verify_global_bound(cubic.family, cubic.O, 3, 0.0, 0.0, np.array([[0.1], [0.3j]]))
        assert bound == pytest.approx(12 + math.log(2) / math.log(1.25))
        assert [row.N_quarter_f for row in rows] == [3, 3]
        assert all(row.passed for row in rows)

    def test_samples_must_lie_in_O(self, cubic):
        with pytest.raises(ConfigurationError):
            verify_global_bound(cubic.family, cubic.O, 3, 0.0, 0.0, np.array([[0.9]]))

    def test_failed_count(self, example2):
        row = global_row(example2.family, (0,), 10.0)
        assert not row.passed
        assert row.N_quarter_f is None


def test_find_extremal(cubic, small_runs):
    result = find_extremal(cubic.family, cubic.O, 3, 0.4)
    assert result.found
    assert result.count == 3
    assert result.evaluated == 1


def test_find_extremal_reports_the_largest_count(example2, small_runs):
    # no parameter puts ten zeros inside a radius this small
    result = find_extremal(example2.family, ParameterBox.ball(1, 0.05), 10, 1e-4, search_budget=8)
    assert not result.found
    assert result.max_count == 0
    assert result.evaluated == 8


def test_analyze_cyclicity_on_a_monomial(cubic, small_runs):
    report = analyze_cyclicity(cubic.family, cubic.K, cubic.O_sequence, cubic.U, sweep_samples=4)
    assert report.mu == 3
    assert report.R == 0.5
    assert report.mode == "practical"
    assert report.practical_radius == 0.4
    assert len(report.sandwich_results) == 4
    assert report.extremal.found
    assert report.passed


def test_find_extremal_on_example2(example2, small_runs):
    result = find_extremal(example2.family, example2.O, 10, 0.1)
    assert result.found
    assert result.count == 10
    assert example2.O.contains(np.array([result.witness]))[0]


@pytest.mark.parametrize(("entry_name", "mu"), [("example1", 2), ("example2", 10)])
class TestSweeps:
    def test_sandwich_on_fifty_parameters(self, entry_name, mu, request):
        entry = request.getfixturevalue(entry_name)
        samples = non_central_samples(entry.family, entry.O, mu, 50, seed=0)
        assert len(samples) == 50
        inputs = (mu, 1.0, 1.0)
        mode, r_prac, rows = verify_sandwich(entry.family, entry.K, entry.O, inputs, None, samples, "practical")
        assert mode == "practical"
        assert r_prac is not None
        assert len(rows) == 50
        assert all(row.passed for row in rows)

    def test_global_bound_on_a_hundred_parameters(self, entry_name, mu, request):
        entry = request.getfixturevalue(entry_name)
        samples = non_central_samples(entry.family, entry.O, mu, 100, seed=1)
        assert len(samples) == 100
        # c·M = 0 gives the tightest bound, 4μ + log_{5/4} 2
        bound, rows = verify_global_bound(entry.family, entry.O, mu, 0.0, 0.0, samples)
        assert bound == pytest.approx(4 * mu + math.log(2) / math.log(1.25))
        assert len(rows) == 100
        assert all(row.passed for row in rows)


class TestCentralSamples:
    def test_a_tiny_box_is_all_central(self, example2):
        O = ParameterBox.ball(1, 1e-40)
        samples = non_central_samples(example2.family, O, 10, 8, seed=0)
        assert len(samples) == 0
        with pytest.raises(CentralParameterError):
            verify_global_bound(example2.family, O, 10, 0.0, 0.0, samples)
        with pytest.raises(CentralParameterError):
            verify_sandwich(example2.family, ParameterBox.ball(1, 1e-41), O, (10, 0.0, 0.0), None, samples)

    def test_empty_samples_never_pass(self, cubic):
        with pytest.raises(CentralParameterError):
            verify_global_bound(cubic.family, cubic.O, 3, 0.0, 0.0, [])
        with pytest.raises(CentralParameterError):
            verify_sandwich(cubic.family, cubic.K, cubic.O, (3, 0.0, 0.0), None, [], mode="theoretical")
