"""
Built-in families with known constants, addressable by name.

Names: ``example1_quadratic``, ``example2_nonradical``, ``exp_z``,
``monomial:K`` and ``exp_poly:M,P,Q``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from numpy.polynomial import polynomial as P

from .bautin import central_set_probe
from .bautin import maximal_multiplicity
from .conf import knobs
from .exceptions import AnalysisError
from .exceptions import ConfigurationError
from .exceptions import UnsupportedRuleError
from .families import AnalyticFamily
from .families import ExplicitPolynomials
from .families import ExpPolynomial
from .families import ParameterBox
from .polynomials import MultiPolynomial
from .zero_count import count_zeros_family

logger = logging.getLogger(__name__)

ODE_RESIDUAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: AnalyticFamily
    known_mu: int | None
    known_central_set: str
    membership: Callable[[np.ndarray], np.ndarray]
    regions: tuple[ParameterBox, ParameterBox, ParameterBox]
    O_sequence: tuple[ParameterBox, ...]
    mu_bound: int | None = None
    exponents: tuple[int, int, int] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def K(self) -> ParameterBox:
        return self.regions[0]

    @property
    def O(self) -> ParameterBox:  # noqa: E743
        return self.regions[1]

    @property
    def U(self) -> ParameterBox:
        return self.regions[2]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class Verification:
    entry: str
    mu: int | None
    known_mu: int | None
    mu_bound: int | None
    known_central_set: str
    notes: tuple[str, ...]
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _origin_only(points) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    return np.all(np.abs(points) < knobs().central_tolerance, axis=1)


def vanishing_head(rule, count: int) -> Callable[[np.ndarray], np.ndarray]:
    """Membership test: the first `count` coefficients all vanish."""

    def membership(points):
        coefficients = rule.coefficients(np.atleast_2d(np.asarray(points, dtype=complex)), count)
        return np.all(np.abs(coefficients) < knobs().central_tolerance, axis=1)

    return membership


def _nested(dimension: int, radii: tuple[float, ...]) -> tuple[ParameterBox, ...]:
    return tuple(ParameterBox.ball(dimension, r) for r in radii)


def example1_quadratic() -> CatalogEntry:
    """f_λ = λ1² + λ2²z + λ3²z² + λ1λ2z⁴ + λ1λ3z⁵ + λ2λ3z⁶ on the unit ball of C³."""
    x1, x2, x3 = (MultiPolynomial.variable(3, i) for i in range(3))
    polynomials = [x1 * x1, x2 * x2, x3 * x3, MultiPolynomial(3), x1 * x2, x1 * x3, x2 * x3]
    family = AnalyticFamily(ExplicitPolynomials(polynomials), ParameterBox.ball(3, 1.0), name="example1_quadratic")
    K, O, U = _nested(3, (0.5, 0.7, 0.9))
    return CatalogEntry(
        name="example1_quadratic",
        family=family,
        known_mu=2,
        known_central_set="{0}",
        membership=_origin_only,
        regions=(K, O, U),
        O_sequence=_nested(3, (0.7, 0.6)),
        mu_bound=2,
        notes=("coefficients vanish together only at λ = 0", "λ = (0, 0, λ3) gives exactly two zeros at 0"),
    )


def example2_nonradical() -> CatalogEntry:
    """f_λ(z) = λ(z^10 − λ) on the unit disk; the neighbourhood of 0 carries ten zeros."""
    x = MultiPolynomial.variable(1, 0)
    polynomials = [x * x * -1, *[MultiPolynomial(1)] * 9, x]
    family = AnalyticFamily(ExplicitPolynomials(polynomials), ParameterBox.ball(1, 1.0), name="example2_nonradical")
    # K = {0}, thickened to a small disk
    K, O, U = _nested(1, (0.01, 0.1, 0.5))
    return CatalogEntry(
        name="example2_nonradical",
        family=family,
        known_mu=10,
        known_central_set="{0}",
        membership=_origin_only,
        regions=(K, O, U),
        O_sequence=_nested(1, (0.1, 0.05)),
        mu_bound=10,
        notes=("μ_f(λ) = 0 for λ ≠ 0", "the Bautin ideal (λ², λ) is not radical"),
    )


def monomial_entry(k: int) -> CatalogEntry:
    """The constant family z^k."""
    if k < 0:
        raise ConfigurationError(f"Monomial degree must be nonnegative, got {k}")
    polynomials = [MultiPolynomial(1)] * k + [MultiPolynomial.constant(1, 1)]
    family = AnalyticFamily(ExplicitPolynomials(polynomials), ParameterBox.ball(1, 1.0), name=f"monomial:{k}")
    K, O, U = _nested(1, (0.25, 0.5, 0.75))
    return CatalogEntry(
        name=f"monomial:{k}",
        family=family,
        known_mu=k,
        known_central_set="empty",
        membership=lambda points: np.zeros(np.atleast_2d(points).shape[0], dtype=bool),
        regions=(K, O, U),
        O_sequence=_nested(1, (0.5, 0.4)),
        mu_bound=k,
    )


def ode_order(m: int, p: int, q: int) -> int:
    """Order of the linear ODE satisfied by Σ_{k≤m} P_k e^{Q_k} with deg P_k ≤ p, deg Q_k ≤ q."""
    if m < 1 or p < 0 or q < 1:
        raise ConfigurationError(f"ode_order needs m >= 1, p >= 0, q >= 1; got {(m, p, q)}")
    if q == 1:
        return m * (p + 1)
    return (p + 1) * (q**m - 1) // (q - 1)


def brudnyi_bound(m: int, p: int, q: int) -> int:
    if m < 1 or p + q < 1:
        raise ConfigurationError(f"brudnyi_bound needs m >= 1 and p + q >= 1; got {(m, p, q)}")
    return 3 * 2 ** (m - 1) * (p + q - 1)


def exp_mu_bound(m: int, p: int, q: int) -> int:
    if q == 1:
        return m * (p + 1) - 1
    return min(ode_order(m, p, q) - 1, brudnyi_bound(m, p, q))


def exp_poly_entry(m: int, p: int, q: int, assembly: tuple | None = None, name: str | None = None) -> CatalogEntry:
    """
    Σ_{k=1..m} P_k(z)·exp(Q_k(z)) with deg P_k ≤ p, deg Q_k ≤ q.

    Without an assembly the parameters are the coefficients of P_1, Q_1, ...,
    P_m, Q_m; an assembly is a (p_tables, q_tables) pair of MultiPolynomial rows.
    """
    rule = ExpPolynomial.coordinates(m, p, q) if assembly is None else ExpPolynomial(m, p, q, *assembly)
    name = name or f"exp_poly:{m},{p},{q}"
    n = rule.dimension
    family = AnalyticFamily(rule, ParameterBox.ball(n, 1.0), name=name)
    order = ode_order(m, p, q)
    bound = exp_mu_bound(m, p, q)

    membership = vanishing_head(rule, order + 8)
    K, O, U = _nested(n, (0.25, 0.5, 0.75))
    return CatalogEntry(
        name=name,
        family=family,
        known_mu=0 if bound == 0 else None,
        known_central_set="λ with F_λ ≡ 0 (first ode_order coefficients vanish)",
        membership=membership,
        regions=(K, O, U),
        O_sequence=_nested(n, (0.5, 0.4)),
        mu_bound=bound,
        exponents=(m, p, q),
        notes=(f"ode_order = {order}", f"brudnyi_bound = {brudnyi_bound(m, p, q)}"),
    )


def exp_z() -> CatalogEntry:
    return exp_poly_entry(1, 0, 1, name="exp_z")


CATALOG: dict[str, Callable[[], CatalogEntry]] = {
    "example1_quadratic": example1_quadratic,
    "example2_nonradical": example2_nonradical,
    "exp_z": exp_z,
}


def _integers(text: str, count: int, name: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError as e:
        raise ConfigurationError(f"Bad catalog name {name!r}") from e
    if len(values) != count:
        raise ConfigurationError(f"Catalog name {name!r} needs {count} integers")
    return values


def get_entry(name: str) -> CatalogEntry:
    if name in CATALOG:
        return CATALOG[name]()
    prefix, _, rest = name.partition(":")
    if prefix == "monomial" and rest:
        return monomial_entry(*_integers(rest, 1, name))
    if prefix == "exp_poly" and rest:
        return exp_poly_entry(*_integers(rest, 3, name))
    raise ConfigurationError(f"Unknown catalog entry {name!r}; known: {sorted(CATALOG)}, monomial:K, exp_poly:M,P,Q")


def ode_residual(entry: CatalogEntry, lam, z: complex, degree: int = 60) -> float:
    """
    Relative residual of Π_k (D − β_k)^{p+1} F = 0 at z, for q = 1 and m ≤ 2.

    β_k is the linear coefficient of Q_k.
    """
    rule = entry.family.rule
    if not isinstance(rule, ExpPolynomial) or rule.q != 1 or rule.m > 2:
        raise UnsupportedRuleError("ODE residuals are assembled only for q = 1 and m <= 2")
    point = entry.family.check_parameters(np.atleast_1d(np.asarray(lam, dtype=complex))[None, :])
    _, q_values = rule.assemble(point)
    characteristic = np.array([1.0 + 0j])
    for k in range(rule.m):
        beta = q_values[0, k, 1]
        characteristic = P.polymul(characteristic, P.polypow(np.array([-beta, 1.0]), rule.p + 1))
    taylor = rule.coefficients(point, degree + 1)[0]
    terms = np.array([P.polyval(z, P.polyder(taylor, j)) for j in range(characteristic.size)])
    residual = abs(np.sum(characteristic * terms))
    scale = float(np.sum(np.abs(characteristic * terms)))
    return residual / scale if scale else residual


@dataclass(frozen=True)
class BoundRow:
    lam: tuple[complex, ...]
    count: int | None
    bound: int
    passed: bool
    error: str | None = None


def zero_count_bound_check(entry: CatalogEntry, samples: int | None = None, seed: int | None = None) -> list[BoundRow]:
    """
    Heuristic check of zero counts in D̄_{r_0} against min(ode_order − 1, brudnyi_bound) for q ≥ 2.
    """
    settings = knobs()
    if entry.exponents is None or entry.exponents[2] < 2:
        raise UnsupportedRuleError("Zero-count bounds apply to exponential polynomials with q >= 2")
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    bound = exp_mu_bound(*entry.exponents)
    rows = []
    points = entry.family.check_parameters(entry.O.samples(samples, seed, stream=7))
    for lam, central in zip(points, entry.membership(points), strict=True):
        key = tuple(complex(c) for c in lam)
        if central:
            continue
        try:
            count = count_zeros_family(entry.family, lam, settings.brudnyi_radius).count
        except AnalysisError as e:
            rows.append(BoundRow(key, None, bound, False, str(e)))
            continue
        rows.append(BoundRow(key, count, bound, count <= bound))
    return rows


def verify_entry(entry: CatalogEntry, samples: int | None = None, seed: int | None = None) -> Verification:
    """Every known-value check of a catalog entry."""
    settings = knobs()
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    checks = []

    mu = None
    try:
        result = maximal_multiplicity(
            entry.family, entry.K, entry.O_sequence, "both", entry.U, samples=samples, seed=seed
        )
        mu = result.value
        if entry.known_mu is not None:
            checks.append(Check("known_mu", mu == entry.known_mu, f"mu = {mu}, expected {entry.known_mu}"))
        if entry.mu_bound is not None:
            checks.append(Check("mu_bound", mu <= entry.mu_bound, f"mu = {mu}, bound {entry.mu_bound}"))
    except AnalysisError as e:
        checks.append(Check("known_mu", False, str(e)))

    probe_mu = mu if mu is not None else (entry.mu_bound or 0)
    probe = central_set_probe(entry.family, entry.O, probe_mu, samples=min(samples, 100), seed=seed)
    points = np.array([row.lam for row in probe])
    membership = entry.membership(points)
    agree = all(row.central == bool(flag) for row, flag in zip(probe, membership, strict=True))
    consistent = all(row.consistent for row in probe)
    checks.append(Check("central_set", agree and consistent, f"{len(probe)} samples classified"))

    if entry.exponents is not None:
        m, p, q = entry.exponents
        if q == 1 and m <= 2:
            points = entry.family.check_parameters(entry.O.samples(4, seed, stream=8))
            worst = max(ode_residual(entry, lam, 0.3) for lam in points)
            detail = f"worst relative residual {worst:.3e}"
            checks.append(Check("ode_residual", worst < ODE_RESIDUAL_TOLERANCE, detail))
        if q >= 2:
            rows = zero_count_bound_check(entry, samples=min(samples, 32), seed=seed)
            failed = [row for row in rows if not row.passed]
            detail = f"{len(rows)} samples, {len(failed)} over"
            checks.append(Check("zero_count_bound (heuristic)", not failed, detail))
    logger.info(f"{entry.name}: {sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return Verification(
        entry.name, mu, entry.known_mu, entry.mu_bound, entry.known_central_set, entry.notes, tuple(checks)
    )
