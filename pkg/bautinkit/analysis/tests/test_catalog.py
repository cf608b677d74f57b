import pytest

from bautinkit.analysis.catalog import CATALOG
from bautinkit.analysis.catalog import brudnyi_bound
from bautinkit.analysis.catalog import exp_mu_bound
from bautinkit.analysis.catalog import get_entry
from bautinkit.analysis.catalog import ode_order
from bautinkit.analysis.catalog import ode_residual
from bautinkit.analysis.catalog import verify_entry
from bautinkit.analysis.catalog import zero_count_bound_check
from bautinkit.analysis.exceptions import ConfigurationError
from bautinkit.analysis.exceptions import UnsupportedRuleError


class TestGetEntry:
    @pytest.mark.parametrize(
        ("name", "dimension", "known_mu"),
        [
            ("example1_quadratic", 3, 2),
            ("example2_nonradical", 1, 10),
            ("exp_z", 3, 0),
            ("monomial:4", 1, 4),
            ("exp_poly:2,1,1", 8, None),
        ],
    )
    def test_names(self, name, dimension, known_mu):
        entry = get_entry(name)
        assert entry.name == name
        assert entry.family.dimension == dimension
        assert entry.known_mu == known_mu

    @pytest.mark.parametrize("name", ["nope", "monomial:x", "monomial:-1", "exp_poly:1,2", "exp_poly:0,1,1"])
    def test_bad_names(self, name):
        with pytest.raises(ConfigurationError):
            get_entry(name)

    def test_nested_regions(self):
        entry = get_entry("example1_quadratic")
        assert entry.O.strictly_contains(entry.K)
        assert entry.U.strictly_contains(entry.O)
        assert entry.O_sequence[-1].strictly_contains(entry.K)


@pytest.mark.parametrize(
    ("exponents", "order", "bound"),
    [
        ((1, 0, 1), 1, 0),
        ((2, 1, 1), 4, 3),
        ((2, 0, 2), 3, 2),
        ((3, 1, 2), 14, 13),
        ((2, 2, 3), 12, 11),
    ],
)
def test_exponential_bounds(exponents, order, bound):
    assert ode_order(*exponents) == order
    assert exp_mu_bound(*exponents) == bound


def test_brudnyi_bound():
    assert brudnyi_bound(2, 1, 2) == 12
    assert brudnyi_bound(1, 0, 2) == 3
    with pytest.raises(ConfigurationError):
        brudnyi_bound(0, 1, 1)


def test_ode_order_rejects_bad_exponents():
    with pytest.raises(ConfigurationError):
        ode_order(1, 0, 0)


class TestOdeResidual:
    @pytest.mark.parametrize("name", ["exp_z", "exp_poly:2,1,1"])
    def test_residual_is_tiny(self, name):
        entry = get_entry(name)
        for lam in entry.O.samples(3, seed=0):
            assert ode_residual(entry, lam, 0.3) < 1e-8

    def test_only_linear_exponents(self):
        with pytest.raises(UnsupportedRuleError):
            ode_residual(get_entry("exp_poly:1,0,2"), [0.1, 0.1, 0.1, 0.1], 0.3)
        with pytest.raises(UnsupportedRuleError):
            ode_residual(get_entry("example1_quadratic"), [0, 0, 0], 0.3)


class TestVerify:
    def test_exp_z(self, small_runs):
        verification = verify_entry(get_entry("exp_z"), samples=16)
        assert verification.mu == 0
        assert {check.name for check in verification.checks} == {"known_mu", "mu_bound", "central_set", "ode_residual"}
        assert verification.passed

    def test_monomial(self, small_runs):
        verification = verify_entry(get_entry("monomial:2"), samples=16)
        assert verification.mu == 2
        assert verification.passed

    def test_zero_count_bound_of_a_quadratic_exponent(self, small_runs):
        entry = get_entry("exp_poly:1,0,2")
        rows = zero_count_bound_check(entry, samples=8)
        assert rows
        assert all(row.count == 0 and row.bound == 0 for row in rows)

    def test_zero_count_bound_needs_a_quadratic_exponent(self):
        with pytest.raises(UnsupportedRuleError):
            zero_count_bound_check(get_entry("exp_z"))


@pytest.mark.parametrize("name", [*CATALOG, "monomial:3", "exp_poly:2,1,1", "exp_poly:2,0,2"])
def test_every_entry_verifies(name, small_runs):
    verification = verify_entry(get_entry(name), samples=32)
    failed = [f"{check.name}: {check.detail}" for check in verification.checks if not check.passed]
    assert not failed
    assert verification.mu is not None
    if verification.known_mu is not None:
        assert verification.mu == verification.known_mu
    assert verification.mu <= verification.mu_bound
