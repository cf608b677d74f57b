import numpy as np
import pytest

from bautinkit.analysis.exceptions import CentralParameterError
from bautinkit.analysis.exceptions import DomainError
from bautinkit.analysis.exceptions import UnstableError
from bautinkit.analysis.exceptions import ZeroOnContourError
from bautinkit.analysis.families import Disk
from bautinkit.analysis.sampling import generator
from bautinkit.analysis.zero_count import ContourEvaluator
from bautinkit.analysis.zero_count import count_zeros_family
from bautinkit.analysis.zero_count import count_zeros_polynomial
from bautinkit.analysis.zero_count import default_radii
from bautinkit.analysis.zero_count import indicator_batch
from bautinkit.analysis.zero_count import indicator_trace
from bautinkit.analysis.zero_count import multiplicity_at_zero
from bautinkit.analysis.zero_count import multiplicity_indicator
from bautinkit.analysis.zero_count import retry_radii
from bautinkit.analysis.zero_count import rouche_dominates
from bautinkit.analysis.zero_count import sup_log_modulus
from bautinkit.analysis.zero_count import winding_count

from .factories import polynomial_family
from .factories import random_roots
from .factories import rooted_polynomial


class TestWindingCount:
    def test_counts_roots_inside(self):
        coefficients = rooted_polynomial([0.1, 0.2j, -0.3 + 0.1j, 0.9, 2.0])
        result = winding_count(ContourEvaluator.polynomial(coefficients), Disk(0.5))
        assert result.count == 3
        assert result.quadrature_residual < 0.25
        assert result.min_modulus_on_contour > 0

    def test_off_center_disk(self):
        coefficients = rooted_polynomial([0.5, 0.55, -0.5])
        assert winding_count(ContourEvaluator.polynomial(coefficients), Disk(0.2, 0.5)).count == 2

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_random_polynomials(self, seed):
        roots = random_roots(inside=seed + 2, outside=4, r=0.3, seed=seed)
        result = count_zeros_polynomial(rooted_polynomial(roots, scale=2 - 1j), 0.3)
        assert result.count == seed + 2
        assert result.degree == roots.size

    def test_zero_on_the_contour(self):
        with pytest.raises(ZeroOnContourError) as excinfo:
            winding_count(ContourEvaluator.polynomial([-0.5, 1]), Disk(0.5))
        assert excinfo.value.radius == 0.5

    def test_error_bound_larger_than_the_function(self):
        with pytest.raises(ZeroOnContourError):
            winding_count(ContourEvaluator.polynomial([1.0], error=2.0), Disk(0.5))

    def test_too_few_samples(self):
        with pytest.raises(DomainError):
            winding_count(ContourEvaluator.polynomial([1, 1]), Disk(0.5), initial_samples=8)


class TestCountZerosPolynomial:
    def test_monomial(self):
        assert count_zeros_polynomial([0, 0, 0, 1], 0.5).count == 3

    def test_retries_a_perturbed_radius(self):
        result = count_zeros_polynomial([-0.5, 1], 0.5)
        assert result.retries >= 1
        assert result.count in {0, 1}

    def test_zero_polynomial(self):
        with pytest.raises(CentralParameterError):
            count_zeros_polynomial([0, 0], 0.5)


def test_retry_radii():
    radii = retry_radii(0.4, 5, seed=0)
    assert radii[0] == 0.4
    assert len(radii) == 6
    assert all(0.38 <= r <= 0.42 for r in radii)
    assert radii == retry_radii(0.4, 5, seed=0)


class TestCountZerosFamily:
    def test_example1_double_zero(self, example1):
        assert count_zeros_family(example1.family, (0, 0, 0.5), 0.01).count == 2

    def test_example2_ten_zeros(self, example2):
        result = count_zeros_family(example2.family, (1e-12,), 0.1)
        assert result.count == 10

    def test_example2_away_from_the_central_set(self, example2):
        # z^10 = λ has its roots on |z| = |λ|^(1/10) > 0.1
        assert count_zeros_family(example2.family, (0.5,), 0.1).count == 0

    def test_exponential_has_no_zeros(self, exponential):
        result = count_zeros_family(exponential.family, (0.5, 0.2, -0.7j), 0.5)
        assert result.count == 0
        assert result.degree >= 1

    def test_radius_must_lie_inside_the_unit_disk(self, example2):
        with pytest.raises(DomainError):
            count_zeros_family(example2.family, (0.1,), 1.0)


class TestMultiplicityIndicator:
    @pytest.mark.parametrize("k", [0, 1, 3, 7])
    def test_monomials_are_exact(self, k):
        family = polynomial_family([0] * k + [1])
        indicator = multiplicity_indicator(family, (0.2,), 0.1)
        assert indicator.value == pytest.approx(k, abs=1e-9)
        assert indicator.rounded == k
        assert indicator.stable

    def test_multiplicity_at_zero(self, cubic, example1):
        assert multiplicity_at_zero(cubic.family, (0.1,)) == 3
        assert multiplicity_at_zero(example1.family, (0, 0, 0.5)) == 2
        assert multiplicity_at_zero(example1.family, (0.3, 0.2, 0.5)) == 0

    def test_trace_needs_decreasing_radii(self, cubic):
        with pytest.raises(DomainError):
            indicator_trace(cubic.family, (0.1,), [0.1, 0.2])

    def test_trace_defaults(self, cubic):
        trace = indicator_trace(cubic.family, (0.1,))
        assert len(trace) == 8
        assert trace[0].R == pytest.approx(0.1)
        assert all(step.rounded == 3 for step in trace)

    def test_unsettled_trace(self):
        # with a zero at 0.05 the indicator sits strictly between 0 and 1 at these radii
        family = polynomial_family(rooted_polynomial([0.05]))
        with pytest.raises(UnstableError) as excinfo:
            multiplicity_at_zero(family, (0,), [0.1, 0.06, 0.04])
        assert len(excinfo.value.trace) == 3

    def test_central_parameter(self, example1):
        with pytest.raises(CentralParameterError):
            sup_log_modulus(example1.family, (0, 0, 0), 0.1)

    def test_batch(self, cubic, example1):
        values, rounded, stable = indicator_batch(cubic.family, np.array([[0.1], [0.3j]]), 0.1)
        assert values == pytest.approx([3, 3])
        assert list(rounded) == [3, 3]
        assert all(stable)
        values, rounded, stable = indicator_batch(example1.family, np.zeros((1, 3)), 0.1)
        assert np.isnan(values[0])
        assert not stable[0]


def test_rouche_domination():
    dominated, margin = rouche_dominates(
        ContourEvaluator.polynomial([0.01, 0, 1]),
        ContourEvaluator.polynomial([0, 0, 1]),
        Disk(0.5),
    )
    assert dominated
    assert margin == pytest.approx(0.24)
    dominated, _ = rouche_dominates(
        ContourEvaluator.polynomial([0.5, 0, 1]),
        ContourEvaluator.polynomial([0, 0, 1]),
        Disk(0.5),
    )
    assert not dominated


def test_winding_count_agrees_with_polynomial_roots():
    rng = generator(5, stream=1)
    checked = 0
    while checked < 200:
        degree = int(rng.integers(1, 9))
        coefficients = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        r = float(rng.uniform(0.3, 0.9))
        moduli = np.abs(np.roots(coefficients[::-1]))
        # keep every root at least 1e-3 away from the circle
        if np.min(np.abs(moduli - r)) < 1e-3:
            continue
        result = winding_count(ContourEvaluator.polynomial(coefficients), Disk(r))
        assert result.count == np.sum(moduli < r), (coefficients, r)
        checked += 1


@pytest.mark.parametrize("k", range(13))
def test_monomial_indicator_on_a_geometric_grid(k):
    family = polynomial_family([0] * k + [1])
    for R in default_radii(12, 0.5):
        assert multiplicity_indicator(family, (0.2,), R).value == pytest.approx(k, abs=1e-6)


def test_counts_grow_with_the_radius():
    rng = generator(6, stream=1)
    for _ in range(50):
        roots = rng.uniform(0.0, 1.2, 6) * np.exp(2j * np.pi * rng.random(6))
        counts = [count_zeros_polynomial(rooted_polynomial(roots), r).count for r in (0.1, 0.2, 0.4, 0.8)]
        assert counts == sorted(counts), roots


def test_rouche_domination_preserves_the_count():
    rng = generator(7, stream=1)
    dominated = 0
    for seed in range(60):
        g = rooted_polynomial(random_roots(inside=seed % 5, outside=3, r=0.5, seed=seed))
        noise = rng.normal(size=g.size) + 1j * rng.normal(size=g.size)
        f = g + 10.0 ** rng.uniform(-9, -2) * noise
        verdict, margin = rouche_dominates(ContourEvaluator.polynomial(f), ContourEvaluator.polynomial(g), Disk(0.5))
        if not verdict:
            continue
        dominated += 1
        assert margin > 0
        assert count_zeros_polynomial(f, 0.5).count == count_zeros_polynomial(g, 0.5).count == seed % 5
    assert dominated >= 15
