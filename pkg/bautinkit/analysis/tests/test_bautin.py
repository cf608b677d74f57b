import itertools

import numpy as np
import pytest

from bautinkit.analysis.bautin import STRATUM_RESIDUAL
from bautinkit.analysis.bautin import STRATUM_SEPARATION
from bautinkit.analysis.bautin import c_mu_estimate
from bautinkit.analysis.bautin import central_set_probe
from bautinkit.analysis.bautin import check_nesting
from bautinkit.analysis.bautin import check_sequence
from bautinkit.analysis.bautin import coefficient_sups
from bautinkit.analysis.bautin import estimate_N_c
from bautinkit.analysis.bautin import growth_route
from bautinkit.analysis.bautin import includes
from bautinkit.analysis.bautin import maximal_multiplicity
from bautinkit.analysis.bautin import stratum_seeds
from bautinkit.analysis.catalog import example2_nonradical
from bautinkit.analysis.catalog import get_entry
from bautinkit.analysis.exceptions import ConfigurationError
from bautinkit.analysis.families import AnalyticFamily
from bautinkit.analysis.families import ParameterBox
from bautinkit.analysis.families import derivative_family
from bautinkit.analysis.families import exp_family
from bautinkit.analysis.families import product_family
from bautinkit.analysis.families import shift_family
from bautinkit.analysis.sampling import generator

from .factories import ParameterBoxFactory
from .factories import polynomial_family
from .factories import rooted_polynomial


class TestRegions:
    def test_includes(self):
        assert includes(ParameterBox.ball(2, 1.0), ParameterBox.ball(2, 1.0))
        assert not includes(ParameterBox.ball(2, 0.5), ParameterBox.ball(2, 1.0))

    def test_nesting_is_checked(self, example1):
        K, O, U = example1.regions
        check_nesting(example1.family, K, O, U)
        with pytest.raises(ConfigurationError):
            check_nesting(example1.family, O, K, U)
        with pytest.raises(ConfigurationError):
            check_nesting(example1.family, K, O, ParameterBox.ball(3, 1.5))

    def test_sequence_is_checked(self, example1):
        with pytest.raises(ConfigurationError):
            check_sequence(example1.K, example1.O_sequence[:1])
        with pytest.raises(ConfigurationError):
            check_sequence(example1.K, example1.O_sequence[::-1])
        with pytest.raises(ConfigurationError):
            check_sequence(ParameterBox.ball(3, 0.65), example1.O_sequence)


def test_coefficient_sups(example1):
    sups = coefficient_sups(example1.family, example1.U, 6, samples=16, seed=0)
    assert sups.shape == (7,)
    # torus samples reach |λ_i| = 0.9
    assert sups[0] == pytest.approx(0.81)
    assert sups[3] == 0


class TestEstimate:
    def test_monomial(self, cubic, small_runs):
        estimate = estimate_N_c(cubic.family, cubic.K, cubic.O, cubic.U)
        assert estimate.N == 3
        assert estimate.c_of_N == 0.0
        assert [step.stable for step in estimate.growth_trace] == [False, False, False, True]

    def test_example2_needs_ten_coefficients(self, example2, small_runs):
        estimate = estimate_N_c(example2.family, example2.K, example2.O, example2.U)
        assert estimate.N == 10
        assert estimate.skipped_coefficients == tuple(range(1, 10))
        assert not any(step.stable for step in estimate.growth_trace[:-1])

    def test_exponential_is_bounded_at_zero(self, exponential, small_runs):
        estimate = estimate_N_c(exponential.family, exponential.K, exponential.O, exponential.U, k_max=16)
        assert estimate.N == 0
        assert estimate.c_of_N > 0
        assert estimate.witness is not None
        assert estimate.c_of_N == pytest.approx(1.1 * estimate.sup_ratio)

    def test_k_max_must_be_positive(self, cubic):
        with pytest.raises(ConfigurationError):
            estimate_N_c(cubic.family, cubic.K, cubic.O, cubic.U, k_max=0)


class TestMaximalMultiplicity:
    def test_both_routes_agree_on_a_monomial(self, cubic, small_runs):
        result = maximal_multiplicity(cubic.family, cubic.K, cubic.O_sequence, "both", cubic.U)
        assert result.value == 3
        assert result.ineq == 3
        assert result.growth == 3
        assert result.ineq_trace == (3, 3)
        assert result.stabilized_box == cubic.O_sequence[1]

    def test_growth_route(self, cubic, small_runs):
        route = growth_route(cubic.family, cubic.O, [0.1, 0.05, 0.025])
        assert route.value == 3
        assert [level.S for level in route.levels] == [3, 3, 3]

    def test_unknown_route(self, cubic):
        with pytest.raises(ConfigurationError):
            maximal_multiplicity(cubic.family, cubic.K, cubic.O_sequence, "sideways", cubic.U)

    def test_default_U_needs_room(self, cubic):
        O_sequence = (ParameterBox.ball(1, 0.9), ParameterBox.ball(1, 0.5))
        with pytest.raises(ConfigurationError):
            maximal_multiplicity(cubic.family, cubic.K, O_sequence, "ineq")

    def test_c_mu_estimate(self, cubic, small_runs):
        assert c_mu_estimate(cubic.family, cubic.K, cubic.O_sequence, cubic.U) == 0.0


class TestCentralSetProbe:
    def test_explicit_points(self, example1):
        points = np.array([[0, 0, 0], [0, 0, 0.5], [0.1, 0, 0]])
        probe = central_set_probe(example1.family, example1.O, 2, points=points)
        assert [row.central for row in probe] == [True, False, False]
        assert all(row.consistent for row in probe)

    def test_example2_center(self, example2):
        probe = central_set_probe(example2.family, example2.O, 10, points=np.zeros((1, 1)))
        assert probe[0].central
        assert probe[0].consistent

    def test_sampled(self, example1):
        probe = central_set_probe(example1.family, example1.O, 2, samples=20, seed=4)
        assert len(probe) == 20
        # the box center is the first sample
        assert probe[0].central
        assert not any(row.central for row in probe[1:])

    def test_mu_must_be_nonnegative(self, example1):
        with pytest.raises(ConfigurationError):
            central_set_probe(example1.family, example1.O, -1, points=np.zeros((1, 3)))


def test_nested_boxes_from_the_factory():
    K = ParameterBoxFactory(dimension=2, radius=0.1)
    O = ParameterBoxFactory(dimension=2, radius=0.2)
    assert O.strictly_contains(K)


class TestCatalogMultiplicities:
    def test_example1_is_two_on_both_routes(self, example1, small_runs):
        result = maximal_multiplicity(example1.family, example1.K, example1.O_sequence, "both", example1.U)
        assert result.value == 2
        assert result.ineq == 2
        assert result.growth == 2

    def test_example2_is_ten_on_both_routes(self, example2, small_runs):
        result = maximal_multiplicity(example2.family, example2.K, example2.O_sequence, "both", example2.U)
        assert result.value == 10
        assert result.ineq == 10
        assert result.growth == 10

    def test_example2_growth_plateaus_at_the_first_radius(self, example2, small_runs):
        route = growth_route(example2.family, example2.O)
        assert route.value == 10
        assert route.levels[0].S == 10

    @pytest.mark.parametrize(("name", "mu"), [("exp_poly:2,1,1", 3), ("exp_poly:2,0,2", 2)])
    def test_deep_strata_of_exponential_polynomials(self, name, mu, small_runs):
        entry = get_entry(name)
        result = maximal_multiplicity(entry.family, entry.K, entry.O_sequence, "both", entry.U)
        assert result.value == mu
        assert result.ineq == result.growth == mu


class TestStratumSeeds:
    def test_center_only_without_a_depth(self, example1):
        seeds = stratum_seeds(example1.family, example1.O, example1.O.samples(8, 0), None)
        assert len(seeds) == 1
        assert np.all(seeds[0] == 0)

    def test_triple_zero_stratum_is_reached(self, small_runs):
        entry = get_entry("exp_poly:2,1,1")
        seeds = stratum_seeds(entry.family, entry.O, entry.O.samples(16, 0, stream=2), 3)
        moduli = np.abs(entry.family.rule.coefficients(np.array(seeds[1:]), 5))
        on_stratum = np.all(moduli[:, :3] < STRATUM_RESIDUAL, axis=1)
        on_stratum &= np.max(moduli[:, 3:], axis=1) >= STRATUM_SEPARATION
        assert np.any(on_stratum)
        assert np.all(entry.O.contains(np.array(seeds)))

    def test_example1_stops_at_the_central_stratum(self, example1, small_runs):
        seeds = stratum_seeds(example1.family, example1.O, example1.O.samples(16, 0, stream=2), 6)
        moduli = np.abs(example1.family.rule.coefficients(np.array(seeds[1:]), 7))
        # λ1 = λ2 = 0 is as deep as a non-central point goes
        assert np.any(np.all(moduli[:, :2] < STRATUM_RESIDUAL, axis=1))
        assert not np.any(np.all(moduli[:, :3] < STRATUM_RESIDUAL, axis=1))
        assert np.all(np.max(moduli, axis=1) >= STRATUM_SEPARATION)


def far_zero_family(order: int, seed: int, count: int = 1) -> AnalyticFamily:
    """z^order times `count` fixed roots of modulus 3 to 5, scaled so the lowest coefficient has modulus 1."""
    rng = generator(seed, stream=7)
    far = rng.uniform(3.0, 5.0, count) * np.exp(2j * np.pi * rng.random(count))
    return polynomial_family(rooted_polynomial([*[0.0] * order, *far], scale=1 / np.prod(np.abs(far))))


def growth_mu(family: AnalyticFamily) -> int:
    return growth_route(family, ParameterBox.ball(family.dimension, 0.1), samples=16).value


def multiplicity_pool() -> list[AnalyticFamily]:
    ex2 = example2_nonradical().family
    return [
        far_zero_family(0, seed=0),
        far_zero_family(1, seed=1, count=2),
        far_zero_family(2, seed=2),
        far_zero_family(3, seed=3, count=2),
        ex2,
        shift_family(ex2),
    ]


class TestMultiplicityRules:
    def test_pool_values(self, small_runs):
        assert [growth_mu(family) for family in multiplicity_pool()] == [0, 1, 2, 3, 10, 11]

    def test_product_is_subadditive(self, small_runs):
        pool = multiplicity_pool()
        mus = [growth_mu(family) for family in pool]
        pairs = list(itertools.combinations_with_replacement(range(len(pool)), 2))
        assert len(pairs) >= 20
        for i, j in pairs:
            product = growth_mu(product_family(pool[i], pool[j]))
            assert product <= mus[i] + mus[j], (pool[i].name, pool[j].name)

    def test_exponential_never_vanishes(self, small_runs):
        pool = multiplicity_pool() + [far_zero_family(order, seed=order) for order in range(4, 8)]
        assert len(pool) == 10
        for family in pool:
            assert growth_mu(exp_family(family)) == 0, family.name

    def test_derivative_loses_at_most_one(self, small_runs):
        ex2 = example2_nonradical().family
        pool = [
            *multiplicity_pool(),
            *(far_zero_family(order, seed=10 + order) for order in range(1, 9)),
            *(product_family(ex2, far_zero_family(order, seed=20 + order)) for order in range(1, 4)),
            shift_family(shift_family(ex2)),
            product_family(ex2, ex2),
            shift_family(far_zero_family(2, seed=30)),
        ]
        assert len(pool) == 20
        for family in pool:
            assert growth_mu(family) <= growth_mu(derivative_family(family)) + 1, family.name
