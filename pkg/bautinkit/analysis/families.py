"""
Parametric analytic families f_λ(z) = Σ a_k(λ) z^k.

A family couples a coefficient rule with the parameter region V on which the
rule is trusted. Rules are evaluated on whole arrays of parameter points at
once; the single-point operations below are thin wrappers.
"""

import logging
from abc import ABC
from abc import abstractmethod
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from numpy.polynomial import Polynomial

from .conf import knobs
from .exceptions import ConfigurationError
from .exceptions import DomainError
from .exceptions import UnsupportedRuleError
from .polynomials import MultiPolynomial
from .sampling import box_samples

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
# radii for the Cauchy estimate of entire coefficient rules
CAUCHY_RADII = 2.0 ** (np.arange(0, 13) / 2.0)
DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class Disk:
    radius: float
    center: complex = 0j

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ConfigurationError(f"Disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) <= self.radius


@dataclass(frozen=True)
class ParameterBox:
    """A product of closed disks in C^n."""

    centers: tuple[complex, ...]
    radii: tuple[float, ...]

    def __post_init__(self):
        centers = tuple(complex(c) for c in self.centers)
        radii = tuple(float(r) for r in self.radii)
        if not centers:
            raise ConfigurationError("ParameterBox needs at least one coordinate")
        if len(centers) != len(radii):
            raise ConfigurationError(f"ParameterBox has {len(centers)} centers but {len(radii)} radii")
        if any(not (np.isfinite(r) and r > 0) for r in radii):
            raise ConfigurationError(f"ParameterBox radii must be positive, got {radii}")
        if any(not np.isfinite(c) for c in centers):
            raise ConfigurationError("ParameterBox centers must be finite")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)

    @classmethod
    def ball(cls, dimension: int, radius: float, center: complex = 0j) -> "ParameterBox":
        return cls((center,) * dimension, (radius,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.centers)

    def contains(self, points, slack: float = DOMAIN_SLACK) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=complex))
        if points.shape[1] != self.dimension:
            raise DomainError(f"Parameter has {points.shape[1]} components, region has {self.dimension}")
        distance = np.abs(points - np.asarray(self.centers))
        return np.all(distance <= np.asarray(self.radii) * (1.0 + slack), axis=1)

    def strictly_contains(self, other: "ParameterBox") -> bool:
        """Compact containment other ⊂⊂ self, coordinate by coordinate."""
        if other.dimension != self.dimension:
            return False
        return all(
            abs(co - cs) + ro < rs
            for co, ro, cs, rs in zip(other.centers, other.radii, self.centers, self.radii, strict=True)
        )

    def scaled(self, factor: float) -> "ParameterBox":
        return ParameterBox(self.centers, tuple(r * factor for r in self.radii))

    def product(self, other: "ParameterBox") -> "ParameterBox":
        return ParameterBox(self.centers + other.centers, self.radii + other.radii)

    def samples(self, count: int, seed: int, stream: int = 0) -> np.ndarray:
        return box_samples(self, count, seed, stream)


class CoefficientRule(ABC):
    """Produces the Taylor coefficients a_k(λ) of a family."""

    dimension: int

    @abstractmethod
    def coefficients(self, points: np.ndarray, count: int) -> np.ndarray:
        """Coefficient values a_0..a_{count-1} at each point, shape (S, count)."""

    @abstractmethod
    def coefficient_majorant(self, box: ParameterBox, from_k: int, k_max: int) -> float:
        """Uniform bound on |a_k(λ)| over the box for from_k < k <= k_max."""

    @abstractmethod
    def pointwise_tail(self, point: np.ndarray, degree: int, modulus: float, head: np.ndarray) -> float:
        """Bound on |Σ_{k>degree} a_k(λ) z^k| for |z| = modulus < 1."""

    @property
    def length(self) -> int | None:
        """Number of possibly nonzero coefficients, None for infinite series."""
        return None

    def default_degree(self) -> int:
        return 32


class ExplicitPolynomials(CoefficientRule):
    def __init__(self, polynomials: Sequence[MultiPolynomial]):
        if not polynomials:
            raise ConfigurationError("An explicit family needs at least one coefficient")
        dimensions = {poly.dimension for poly in polynomials}
        if len(dimensions) != 1:
            raise ConfigurationError(f"Coefficient polynomials disagree on dimension: {sorted(dimensions)}")
        self.polynomials = tuple(polynomials)
        self.dimension = dimensions.pop()

    def __repr__(self):
        return f"ExplicitPolynomials({len(self.polynomials)} coefficients in {self.dimension} variables)"

    @property
    def length(self) -> int:
        return len(self.polynomials)

    def default_degree(self) -> int:
        return max(len(self.polynomials) - 1, 1)

    def coefficients(self, points, count):
        points = np.atleast_2d(points)
        out = np.zeros((points.shape[0], count), dtype=complex)
        for k, poly in enumerate(self.polynomials[:count]):
            if not poly.is_zero():
                out[:, k] = poly.evaluate(points)
        return out

    def coefficient_majorant(self, box, from_k, k_max):
        tail = self.polynomials[from_k + 1 : k_max + 1]
        return max((poly.majorant(box) for poly in tail), default=0.0)

    def pointwise_tail(self, point, degree, modulus, head):
        if degree >= len(self.polynomials) - 1:
            return 0.0
        rest = self.coefficients(point, len(self.polynomials))[0, degree + 1 :]
        powers = modulus ** np.arange(degree + 1, len(self.polynomials))
        total = float(np.sum(np.abs(rest) * powers))
        return total * (1.0 + 4 * len(self.polynomials) * EPS)


class ExpPolynomial(CoefficientRule):
    """
    Taylor coefficients of F_λ(z) = Σ_k P_k(z)·exp(Q_k(z)).

    P_k and Q_k have coefficients that are polynomials in λ. The coordinate
    layout (λ holding the coefficients of P_1, Q_1, P_2, Q_2, ... directly) is
    built by `coordinates`.
    """

    def __init__(
        self,
        m: int,
        p: int,
        q: int,
        p_tables: Sequence[Sequence[MultiPolynomial]],
        q_tables: Sequence[Sequence[MultiPolynomial]],
    ):
        if m < 1 or p < 0 or q < 1:
            raise ConfigurationError(f"ExpPolynomial needs m >= 1, p >= 0, q >= 1; got {(m, p, q)}")
        if len(p_tables) != m or len(q_tables) != m:
            raise ConfigurationError(f"Expected {m} (P, Q) pairs, got {len(p_tables)} and {len(q_tables)}")
        if any(len(row) != p + 1 for row in p_tables) or any(len(row) != q + 1 for row in q_tables):
            raise ConfigurationError(f"P_k need {p + 1} coefficients and Q_k need {q + 1}")
        dimensions = {poly.dimension for row in [*p_tables, *q_tables] for poly in row}
        if len(dimensions) != 1:
            raise ConfigurationError(f"Assembly polynomials disagree on dimension: {sorted(dimensions)}")
        self.m, self.p, self.q = m, p, q
        self.p_tables = tuple(tuple(row) for row in p_tables)
        self.q_tables = tuple(tuple(row) for row in q_tables)
        self.dimension = dimensions.pop()

    @classmethod
    def coordinates(cls, m: int, p: int, q: int) -> "ExpPolynomial":
        """λ ∈ C^{m(p+q+2)} read as (P_1, Q_1, ..., P_m, Q_m), lowest degree first."""
        if m < 1 or p < 0 or q < 1:
            raise ConfigurationError(f"ExpPolynomial needs m >= 1, p >= 0, q >= 1; got {(m, p, q)}")
        n = m * (p + q + 2)
        block = p + q + 2
        p_tables = [[MultiPolynomial.variable(n, k * block + j) for j in range(p + 1)] for k in range(m)]
        q_tables = [[MultiPolynomial.variable(n, k * block + p + 1 + j) for j in range(q + 1)] for k in range(m)]
        return cls(m, p, q, p_tables, q_tables)

    def __repr__(self):
        return f"ExpPolynomial(m={self.m}, p={self.p}, q={self.q}, dimension={self.dimension})"

    def assemble(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """P and Q coefficient arrays of shape (S, m, p+1) and (S, m, q+1)."""
        points = np.atleast_2d(points)
        s = points.shape[0]
        p_values = np.zeros((s, self.m, self.p + 1), dtype=complex)
        q_values = np.zeros((s, self.m, self.q + 1), dtype=complex)
        for k in range(self.m):
            for j, poly in enumerate(self.p_tables[k]):
                p_values[:, k, j] = poly.evaluate(points)
            for j, poly in enumerate(self.q_tables[k]):
                q_values[:, k, j] = poly.evaluate(points)
        return p_values, q_values

    def coefficients(self, points, count):
        p_values, q_values = self.assemble(points)
        s = p_values.shape[0]
        out = np.zeros((s, count), dtype=complex)
        for k in range(self.m):
            series = exp_series(q_values[:, k, :], count)
            for j in range(min(self.p + 1, count)):
                out[:, j:] += p_values[:, k, j : j + 1] * series[:, : count - j]
        return out

    def _cauchy_numerator(self, p_bounds, q_bounds, q0_real):
        # B(ρ) for every Cauchy radius
        rho = CAUCHY_RADII[:, None]
        total = np.zeros(CAUCHY_RADII.size)
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(self.m):
                p_growth = np.sum(p_bounds[k][None, :] * rho ** np.arange(self.p + 1), axis=1)
                q_growth = q0_real[k] + np.sum(q_bounds[k][None, 1:] * rho ** np.arange(1, self.q + 1), axis=1)
                total += p_growth * np.exp(q_growth)
        return np.where(np.isfinite(total), total, np.inf)

    def coefficient_majorant(self, box, from_k, k_max):
        p_bounds = np.array([[poly.majorant(box) for poly in row] for row in self.p_tables])
        q_bounds = np.array([[poly.majorant(box) for poly in row] for row in self.q_tables])
        numerator = self._cauchy_numerator(p_bounds, q_bounds, q_bounds[:, 0])
        return float(np.min(numerator / CAUCHY_RADII ** (from_k + 1)))

    def uniform_bound(self, point: np.ndarray, degree: int) -> float:
        """min_ρ B(ρ)/ρ^{degree+1} at one parameter point."""
        p_values, q_values = self.assemble(point)
        numerator = self._cauchy_numerator(
            np.abs(p_values[0]),
            np.abs(q_values[0]),
            q_values[0, :, 0].real,
        )
        return float(np.min(numerator / CAUCHY_RADII ** (degree + 1)))

    def pointwise_tail(self, point, degree, modulus, head):
        bound = self.uniform_bound(point, degree)
        tail = bound * modulus ** (degree + 1) / (1.0 - modulus)
        return tail + rounding_allowance(head, modulus)


class Callback(CoefficientRule):
    """Opaque evaluator (k, λ) -> a_k(λ) with a caller-declared uniform |a_k| bound."""

    def __init__(self, evaluator: Callable[[int, np.ndarray], complex], dimension: int, coefficient_bound: float):
        if coefficient_bound < 0 or not np.isfinite(coefficient_bound):
            raise ConfigurationError(f"Callback coefficient bound must be finite and nonnegative: {coefficient_bound}")
        self.evaluator = evaluator
        self.dimension = dimension
        self.coefficient_bound = float(coefficient_bound)

    def coefficients(self, points, count):
        points = np.atleast_2d(points)
        out = np.zeros((points.shape[0], count), dtype=complex)
        for i, point in enumerate(points):
            for k in range(count):
                out[i, k] = complex(self.evaluator(k, point))
        if not np.all(np.isfinite(out)):
            raise DomainError("Callback evaluator returned a non-finite coefficient")
        return out

    def coefficient_majorant(self, box, from_k, k_max):
        return self.coefficient_bound

    def pointwise_tail(self, point, degree, modulus, head):
        tail = self.coefficient_bound * modulus ** (degree + 1) / (1.0 - modulus)
        return tail + rounding_allowance(head, modulus)


def exp_series(q_values: np.ndarray, count: int) -> np.ndarray:
    """
    Taylor coefficients of exp(Q(z)) for each row of Q coefficients.

    Uses n·e_n = Σ_j j·q_j·e_{n-j}, started from e_0 = exp(q_0).
    """
    s, width = q_values.shape
    series = np.zeros((s, count), dtype=complex)
    if count == 0:
        return series
    series[:, 0] = np.exp(q_values[:, 0])
    for n in range(1, count):
        acc = np.zeros(s, dtype=complex)
        for j in range(1, min(n, width - 1) + 1):
            acc += j * q_values[:, j] * series[:, n - j]
        series[:, n] = acc / n
    return series


def rounding_allowance(head: np.ndarray, modulus: float) -> float:
    powers = modulus ** np.arange(head.size)
    return float(4 * (head.size + 1) * EPS * np.sum(np.abs(head) * powers))


@dataclass(frozen=True)
class AnalyticFamily:
    rule: CoefficientRule
    param_region_V: ParameterBox
    truncation_degree_default: int = 0
    name: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.rule.dimension != self.param_region_V.dimension:
            raise ConfigurationError(
                f"Rule has {self.rule.dimension} parameters but V has dimension {self.param_region_V.dimension}",
            )
        if self.truncation_degree_default <= 0:
            object.__setattr__(self, "truncation_degree_default", self.rule.default_degree())

    @property
    def dimension(self) -> int:
        return self.rule.dimension

    def check_parameters(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=complex))
        if points.shape[1] != self.dimension:
            raise DomainError(f"Parameter has {points.shape[1]} components, family has {self.dimension}")
        if not np.all(np.isfinite(points)):
            raise DomainError("Parameter has non-finite components")
        inside = self.param_region_V.contains(points)
        if not np.all(inside):
            raise DomainError(f"Parameter {points[~inside][0]} lies outside the region V")
        return points

    def coefficient_matrix(self, points, count: int) -> np.ndarray:
        """a_0..a_{count-1} at each point, shape (S, count); checks the points lie in V."""
        return self.rule.coefficients(self.check_parameters(points), count)


def as_point(family: AnalyticFamily, lam) -> np.ndarray:
    point = np.atleast_1d(np.asarray(lam, dtype=complex))
    return family.check_parameters(point[None, :])


def coefficient(family: AnalyticFamily, k: int, lam) -> complex:
    if k < 0:
        raise DomainError(f"Coefficient index must be nonnegative, got {k}")
    point = as_point(family, lam)
    length = family.rule.length
    if length is not None and k >= length:
        return 0j
    return complex(family.rule.coefficients(point, k + 1)[0, k])


def taylor_polynomial(family: AnalyticFamily, lam, degree: int) -> Polynomial:
    if degree < 0:
        raise DomainError(f"Degree must be nonnegative, got {degree}")
    point = as_point(family, lam)
    return Polynomial(family.rule.coefficients(point, degree + 1)[0])


def evaluate(family: AnalyticFamily, lam, z: complex, degree: int) -> tuple[complex, float]:
    """The degree-`degree` partial sum of f_λ at z and a certified bound on the rest."""
    if abs(z) >= 1:
        raise DomainError(f"|z| = {abs(z)} is outside the unit disk")
    point = as_point(family, lam)
    head = family.rule.coefficients(point, degree + 1)[0]
    value = complex(Polynomial(head)(z))
    if z == 0:
        return value, 0.0
    return value, family.rule.pointwise_tail(point, degree, abs(z), head)


def evaluate_on_circle(family: AnalyticFamily, lam, radius: float, degree: int):
    """
    Truncated series as a contour evaluator on |z| = radius.

    Returns (coefficients, tail) where tail bounds |f_λ − truncation| on the
    whole circle.
    """
    if not 0 < radius < 1:
        raise DomainError(f"Contour radius {radius} must lie in (0, 1)")
    point = as_point(family, lam)
    head = family.rule.coefficients(point, degree + 1)[0]
    return head, family.rule.pointwise_tail(point, degree, radius, head)


@dataclass(frozen=True)
class TailBound:
    value: float
    sample_max: float
    majorant: float
    sample_count: int


def tail_coefficient_bound(
    family: AnalyticFamily,
    U: ParameterBox,
    from_k: int,
    k_max: int,
    samples: int | None = None,
    seed: int | None = None,
) -> TailBound:
    """
    Estimate of M = sup |a_k(λ)| over λ ∈ U and from_k < k <= k_max.

    The sampled maximum is inflated by the safety factor; the rule's uniform
    majorant is reported alongside and the smaller of the two is the value.
    """
    settings = knobs()
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    if samples < 1:
        raise ConfigurationError("tail_coefficient_bound needs at least one sample")
    if from_k < 0 or k_max < from_k:
        raise ConfigurationError(f"Bad coefficient range ({from_k}, {k_max}]")
    length = family.rule.length
    top = k_max if length is None else min(k_max, length - 1)
    if top <= from_k:
        return TailBound(0.0, 0.0, 0.0, samples)
    points = family.check_parameters(U.samples(samples, seed, stream=17))
    values = np.abs(family.rule.coefficients(points, top + 1)[:, from_k + 1 :])
    sample_max = float(np.max(values))
    majorant = family.rule.coefficient_majorant(U, from_k, k_max)
    value = min(sample_max * settings.safety_factor, majorant)
    return TailBound(value, sample_max, majorant, samples)


def explicit_rule(family: AnalyticFamily) -> ExplicitPolynomials:
    if not isinstance(family.rule, ExplicitPolynomials):
        raise UnsupportedRuleError(f"{family.name or 'family'} does not have polynomial coefficients")
    return family.rule


def product_family(f: AnalyticFamily, g: AnalyticFamily) -> AnalyticFamily:
    """f_λ·g_μ over the concatenated parameters (λ, μ)."""
    rf, rg = explicit_rule(f), explicit_rule(g)
    n = rf.dimension + rg.dimension
    left = [poly.embed(n, 0) for poly in rf.polynomials]
    right = [poly.embed(n, rf.dimension) for poly in rg.polynomials]
    product = [MultiPolynomial(n) for _ in range(len(left) + len(right) - 1)]
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            product[i + j] = product[i + j] + a * b
    return AnalyticFamily(
        ExplicitPolynomials(product),
        f.param_region_V.product(g.param_region_V),
        name=f"({f.name})*({g.name})",
    )


def derivative_family(f: AnalyticFamily) -> AnalyticFamily:
    polynomials = explicit_rule(f).polynomials
    derived = [polynomials[k + 1] * (k + 1) for k in range(len(polynomials) - 1)]
    if not derived:
        derived = [MultiPolynomial(f.dimension)]
    return AnalyticFamily(ExplicitPolynomials(derived), f.param_region_V, name=f"d/dz({f.name})")


def shift_family(f: AnalyticFamily) -> AnalyticFamily:
    """z·f_λ."""
    polynomials = explicit_rule(f).polynomials
    shifted = [MultiPolynomial(f.dimension), *polynomials]
    return AnalyticFamily(ExplicitPolynomials(shifted), f.param_region_V, name=f"z*({f.name})")


def exp_family(f: AnalyticFamily) -> AnalyticFamily:
    """exp(f_λ) as the single-term exponential polynomial with P = 1, Q = f_λ."""
    polynomials = list(explicit_rule(f).polynomials)
    if len(polynomials) < 2:
        polynomials.append(MultiPolynomial(f.dimension))
    rule = ExpPolynomial(
        1,
        0,
        len(polynomials) - 1,
        [[MultiPolynomial.constant(f.dimension, 1)]],
        [polynomials],
    )
    return AnalyticFamily(rule, f.param_region_V, name=f"exp({f.name})")


def first_nonzero_order(coefficients: np.ndarray, tolerance: float) -> int | None:
    """Index of the first coefficient with modulus above tolerance, None if none."""
    above = np.nonzero(np.abs(coefficients) > tolerance)[0]
    return int(above[0]) if above.size else None
