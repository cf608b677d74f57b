import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from bautinkit.analysis.curves import bautin_index_along_curve
from bautinkit.analysis.curves import roots_with_multiplicity
from bautinkit.analysis.exceptions import CentralParameterError
from bautinkit.analysis.exceptions import DomainError
from bautinkit.analysis.exceptions import UnsupportedRuleError


def test_roots_with_multiplicity():
    found = roots_with_multiplicity(P.polyfromroots([0.3, 0.3, -0.5]), 1e-9)
    assert [order for _, order in found] == [1, 2]
    assert [w for w, _ in found] == pytest.approx([-0.5, 0.3], abs=1e-6)


def test_roots_at_the_origin_are_exact():
    assert roots_with_multiplicity(np.array([0, 0, 0.25]), 1e-9) == [(0j, 2)]
    assert roots_with_multiplicity(np.array([3.0]), 1e-9) == []


class TestBautinIndexAlongCurve:
    @pytest.mark.parametrize(
        ("curve", "d"),
        [
            (([0], [0], [0, 0.5]), 2),
            (([0, 0.3], [0, 0.3], [0, 0.3]), 0),
            (([0.5], [0, 0.3], [0]), 0),
            (([0, 0, 0.3], [0, 0.3], [0.2]), 2),
        ],
    )
    def test_example1_curves(self, example1, curve, d):
        assert bautin_index_along_curve(example1.family, curve, example1.O, k_max=10).d == d

    def test_common_zeros(self, example1):
        result = bautin_index_along_curve(example1.family, ([0], [0], [0, 0.5]), example1.O, k_max=10)
        assert result.common_zeros == ((0j, 2),)
        assert result.generators == (2,)

    def test_curve_leaving_O(self, example1):
        with pytest.raises(DomainError):
            bautin_index_along_curve(example1.family, ([0, 0.8], [0], [0]), example1.O)

    def test_curve_inside_the_central_set(self, example1):
        with pytest.raises(CentralParameterError):
            bautin_index_along_curve(example1.family, ([0], [0], [0]), example1.O)

    def test_curve_dimension(self, example1):
        with pytest.raises(DomainError):
            bautin_index_along_curve(example1.family, ([0], [0, 0.1]), example1.O)

    def test_needs_explicit_polynomials(self, exponential):
        with pytest.raises(UnsupportedRuleError):
            bautin_index_along_curve(exponential.family, ([0.1], [0], [0.2]), exponential.O)
