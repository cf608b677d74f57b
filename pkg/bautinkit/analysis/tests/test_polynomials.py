import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from bautinkit.analysis.exceptions import ConfigurationError
from bautinkit.analysis.families import ParameterBox
from bautinkit.analysis.polynomials import MultiPolynomial
from bautinkit.analysis.polynomials import taylor_shift
from bautinkit.analysis.polynomials import trim
from bautinkit.analysis.polynomials import vanishing_order


class TestMultiPolynomial:
    def test_zero_terms_are_dropped(self):
        poly = MultiPolynomial(2, {(1, 0): 0, (0, 1): 0.0})
        assert poly.is_zero()
        assert poly.degree == 0

    def test_from_triples_sums_repeated_indices(self):
        poly = MultiPolynomial.from_triples(1, [([1], 1.0, 0.0), ([1], 2.0, -1.0), ([0], 0.0, 0.5)])
        assert poly.terms == {(0,): 0.5j, (1,): 3 - 1j}

    @pytest.mark.parametrize(
        ("dimension", "terms"),
        [
            (0, {}),
            (2, {(1,): 1.0}),
            (1, {(-1,): 1.0}),
            (1, {(1,): float("nan")}),
        ],
    )
    def test_rejects_bad_input(self, dimension, terms):
        with pytest.raises(ConfigurationError):
            MultiPolynomial(dimension, terms)

    def test_arithmetic_and_evaluation(self):
        x, y = MultiPolynomial.variable(2, 0), MultiPolynomial.variable(2, 1)
        poly = x * x + 2 * (x * y)
        assert poly.degree == 2
        assert poly((1 + 1j, 2)) == pytest.approx(4 + 6j)
        values = poly.evaluate(np.array([[1 + 1j, 2], [0, 5]]))
        assert values == pytest.approx(np.array([4 + 6j, 0]))

    def test_majorant_on_a_box(self):
        x, y = MultiPolynomial.variable(2, 0), MultiPolynomial.variable(2, 1)
        poly = x * x + 2 * (x * y)
        assert poly.majorant(ParameterBox.ball(2, 0.5)) == pytest.approx(0.75)

    def test_embed(self):
        assert MultiPolynomial.variable(1, 0, 2).embed(3, 2) == MultiPolynomial.variable(3, 2, 2)

    def test_compose_along_a_curve(self):
        x, y = MultiPolynomial.variable(2, 0), MultiPolynomial.variable(2, 1)
        composed = (x * y).compose([np.array([0, 1]), np.array([1, 1])])
        assert composed == pytest.approx(np.array([0, 1, 1]))

    def test_compose_checks_the_curve_dimension(self):
        with pytest.raises(ConfigurationError):
            MultiPolynomial.variable(2, 0).compose([np.array([0, 1])])


def test_trim():
    assert trim(np.array([1, 2, 0, 0])) == pytest.approx(np.array([1, 2]))
    assert trim(np.zeros(3)) == pytest.approx(np.zeros(1))
    assert trim(np.array([1, 1e-20]), tolerance=1e-12) == pytest.approx(np.array([1]))


def test_taylor_shift():
    assert taylor_shift(np.array([0, 0, 1]), 1.0) == pytest.approx(np.array([1, 2, 1]))


def test_vanishing_order():
    cube = P.polyfromroots([0.5, 0.5, 0.5, -0.25])
    assert vanishing_order(cube, 0.5, 1e-9) == 3
    assert vanishing_order(cube, 0.1, 1e-9) == 0
    assert vanishing_order(np.zeros(4), 0.5, 1e-9) is None
