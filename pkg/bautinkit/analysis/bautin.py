"""
Empirical Bautin-type characteristics of a family on nested parameter boxes.

Two independent routes estimate the maximal multiplicity μ_f(K):

* the inequality route finds the least N with |a_k(λ)| ≤ c·max_U|a_k|·max_{i≤N}|a_i(λ)|
  for every k > N, by checking that the sampled ratio stops growing when the
  sample set is doubled (and pushed deeper towards the central set);
* the growth route reads the multiplicity indicator off sampled parameters at
  a decreasing sequence of radii and takes the first plateau.

Samples near the central set come from "charts": points c + ρ·u·s^e around
seeds c, with per-coordinate exponents e. Seeds are the box center and solved
points on each head stratum a_0 = ... = a_j = 0 that are not central.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from .conf import knobs
from .exceptions import ConfigurationError
from .exceptions import NoFiniteNError
from .exceptions import RouteMismatchError
from .exceptions import UnstableError
from .families import AnalyticFamily
from .families import ExplicitPolynomials
from .families import ParameterBox
from .sampling import chart_samples
from .sampling import solve_head_stratum
from .zero_count import default_radii
from .zero_count import indicator_batch

logger = logging.getLogger(__name__)

CHART_POINTS = 2
STRATUM_STARTS = 3
# deepest head stratum a_0 = ... = a_j = 0 that gets seeded
STRATUM_ORDERS = 16
# a solved point lies on its stratum when its head is below this
STRATUM_RESIDUAL = 1e-10
# and off the central set when some later coefficient exceeds this
STRATUM_SEPARATION = 1e-8
ASCENT_STARTS = 4
ASCENT_ITERATIONS = 100
# smallest compass step, relative to the box radii
ASCENT_FLOOR = 1e-3
ESTIMATE_LABEL = "sampled surrogate: lower-bound flavoured, safety factor applied"


@dataclass(frozen=True)
class StabilityStep:
    N: int
    sup_small: float
    sup_large: float
    growth: float
    stable: bool


@dataclass(frozen=True)
class BautinEstimate:
    N: int
    c_of_N: float
    k_max_checked: int
    sample_count: int
    witness: tuple[int, tuple[complex, ...]] | None
    sup_ratio: float = 0.0
    skipped_coefficients: tuple[int, ...] = ()
    growth_trace: tuple[StabilityStep, ...] = ()
    label: str = ESTIMATE_LABEL


@dataclass(frozen=True)
class GrowthLevel:
    R: float
    S: int | None
    stable_samples: int


@dataclass(frozen=True)
class GrowthRoute:
    value: int
    levels: tuple[GrowthLevel, ...]


@dataclass(frozen=True)
class MaximalMultiplicity:
    value: int
    ineq: int | None
    growth: int | None
    ineq_trace: tuple[int, ...] = ()
    growth_trace: tuple[int, ...] = ()
    estimate: BautinEstimate | None = None
    stabilized_box: ParameterBox | None = None


@dataclass(frozen=True)
class CentralProbe:
    lam: tuple[complex, ...]
    central: bool
    consistent: bool
    head_max: float = field(default=0.0)


def includes(outer: ParameterBox, inner: ParameterBox, slack: float = 1e-12) -> bool:
    """Non-strict containment inner ⊆ outer."""
    return outer.dimension == inner.dimension and all(
        abs(ci - co) + ri <= ro * (1.0 + slack)
        for ci, ri, co, ro in zip(inner.centers, inner.radii, outer.centers, outer.radii, strict=True)
    )


def check_nesting(family: AnalyticFamily, K: ParameterBox, O: ParameterBox, U: ParameterBox):
    if not O.strictly_contains(K):
        raise ConfigurationError("K must lie compactly inside O")
    if not U.strictly_contains(O):
        raise ConfigurationError("O must lie compactly inside U")
    if not includes(family.param_region_V, U):
        raise ConfigurationError("U must lie inside the family's region V")


def top_index(family: AnalyticFamily, k_max: int) -> int:
    length = family.rule.length
    return k_max if length is None else min(k_max, length - 1)


def coefficient_sups(family: AnalyticFamily, U: ParameterBox, k_max: int, samples=None, seed=None) -> np.ndarray:
    """Sampled max_U|a_k| for k = 0..k_max (torus-biased samples)."""
    settings = knobs()
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    if samples < 1:
        raise ConfigurationError("Coefficient sup estimation needs at least one sample")
    points = U.samples(samples, seed, stream=23)
    return np.max(np.abs(family.coefficient_matrix(points, k_max + 1)), axis=0)


def coefficient_sup(family: AnalyticFamily, U: ParameterBox, k: int, samples=None, seed=None) -> float:
    return float(coefficient_sups(family, U, k, samples, seed)[k])


def head_values(family: AnalyticFamily, order: int):
    def values(points):
        return family.rule.coefficients(points, order + 1)

    return values


def stratum_seeds(family: AnalyticFamily, O: ParameterBox, base: np.ndarray, deepest: int | None) -> list[np.ndarray]:
    """
    The box center plus least-squares points on the head strata a_0 = ... = a_j = 0.

    Strata are visited for j = 0, 1, ..., deepest. Each solve starts from the
    points found on the previous stratum and from the base samples of smallest
    head; only solutions off the central set are kept. The walk stops at the
    first stratum that yields none.
    """
    seeds = [np.asarray(O.centers, dtype=complex)]
    if deepest is None:
        return seeds
    deepest = min(deepest, STRATUM_ORDERS)
    length = family.rule.length
    count = deepest + 2 if length is None else max(length, deepest + 2)
    base = np.atleast_2d(base)
    previous: list[np.ndarray] = []
    for order in range(deepest + 1):
        head = np.max(np.abs(family.rule.coefficients(base, order + 1)), axis=1)
        starts = np.vstack([*previous, *base[np.argsort(head, kind="stable")[:STRATUM_STARTS]]])
        found = []
        for point in solve_head_stratum(head_values(family, order), O, starts):
            moduli = np.abs(family.rule.coefficients(point[None, :], count)[0])
            if np.max(moduli[: order + 1]) >= STRATUM_RESIDUAL:
                continue
            if np.max(moduli[order + 1 :], initial=0.0) < STRATUM_SEPARATION:
                continue
            found.append((-moduli[order + 1], point))
        if not found:
            logger.debug(f"No non-central point on stratum {order} of {family.name}")
            break
        # best separated first
        found.sort(key=lambda pair: pair[0])
        previous = [point for _, point in found][:STRATUM_STARTS]
        for point in previous:
            if all(np.max(np.abs(point - seed)) > 1e-9 for seed in seeds):
                seeds.append(point)
    logger.debug(f"{len(seeds) - 1} stratum seeds for {family.name}")
    return seeds


def probe_points(O: ParameterBox, base: np.ndarray, seeds: Sequence[np.ndarray], depth: int, seed: int) -> np.ndarray:
    """Base samples followed by chart samples around every seed."""
    settings = knobs()
    blocks = [base]
    for i, centre in enumerate(seeds):
        blocks.append(
            chart_samples(O, centre, depth, settings.chart_max_exponent, CHART_POINTS, seed, stream=i + 1),
        )
    return np.vstack(blocks)


def _project(points: np.ndarray, box: ParameterBox) -> np.ndarray:
    centers, radii = np.asarray(box.centers), np.asarray(box.radii)
    offset = points - centers
    excess = np.abs(offset) / radii
    return centers + np.where(excess > 1.0, offset / np.maximum(excess, 1.0), offset)


def _ascend(ratios, start: np.ndarray, value: float, box: ParameterBox) -> tuple[np.ndarray, float]:
    """Compass search on the real coordinates of the box, maximizing `ratios`."""
    n = box.dimension
    eye = np.eye(n)
    directions = np.vstack([eye, -eye, 1j * eye, -1j * eye])
    radii = np.asarray(box.radii)
    step = 0.25 * radii
    point = start
    for _ in range(ASCENT_ITERATIONS):
        candidates = _project(point[None, :] + directions * step, box)
        values, _ = ratios(candidates)
        best = int(np.argmax(values))
        if values[best] > value:
            point, value = candidates[best], float(values[best])
        else:
            step = step / 2
            if np.all(step < ASCENT_FLOOR * radii):
                break
    return point, value


def _ratio_function(family: AnalyticFamily, N: int, top: int, active: np.ndarray, scale: np.ndarray):
    tolerance = knobs().central_tolerance

    def ratios(points):
        moduli = np.abs(family.rule.coefficients(points, top + 1))
        head = np.max(moduli[:, : N + 1], axis=1)
        tails = moduli[:, active] / scale
        which = np.argmax(tails, axis=1)
        best = tails[np.arange(points.shape[0]), which]
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(head >= tolerance, best / np.where(head > 0, head, 1.0), -np.inf)
        return values, active[which]

    return ratios


def _sup_with_ascent(ratios, points: np.ndarray, box: ParameterBox):
    values, which = ratios(points)
    order = np.argsort(values)[::-1][:ASCENT_STARTS]
    best_value, best_point, best_k = -np.inf, None, None
    for index in order:
        if not np.isfinite(values[index]):
            continue
        point, value = _ascend(ratios, points[index], float(values[index]), box)
        if value > best_value:
            _, k = ratios(point[None, :])
            best_value, best_point, best_k = value, point, int(k[0])
    skipped = int(np.sum(~np.isfinite(values)))
    return best_value, best_point, best_k, skipped


def estimate_N_c(
    family: AnalyticFamily,
    K: ParameterBox,
    O: ParameterBox,
    U: ParameterBox,
    k_max: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> BautinEstimate:
    """
    Least N for which the normalized coefficient ratio stays bounded on O.

    For every N the sampled ratio sup is taken on a sample set and on its
    doubled, deeper extension; N is accepted once the growth is below the
    configured threshold, and c(N) is that sup times the safety factor.
    """
    settings = knobs()
    k_max = settings.k_max if k_max is None else k_max
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    if k_max < 1:
        raise ConfigurationError(f"k_max must be at least 1, got {k_max}")
    check_nesting(family, K, O, U)
    top = top_index(family, k_max)
    sups = coefficient_sups(family, U, top, samples, seed)
    vanishing = tuple(int(k) for k in np.nonzero(sups < settings.central_tolerance)[0])
    if vanishing:
        logger.info(f"Skipping identically vanishing coefficients {list(vanishing)} of {family.name}")

    large_base = family.check_parameters(O.samples(2 * samples, seed, stream=1))
    small_base = large_base[:samples]
    trace: list[StabilityStep] = []
    last_N = top if family.rule.length is not None else top - 1
    seeds = stratum_seeds(family, O, small_base, last_N)
    for N in range(0, last_N + 1):
        active = np.array([k for k in range(N + 1, top + 1) if sups[k] >= settings.central_tolerance], dtype=int)
        if not active.size:
            trace.append(StabilityStep(N, 0.0, 0.0, 0.0, True))
            logger.info(f"N={N}: no coefficients beyond the head, c(N) = 0")
            return BautinEstimate(N, 0.0, k_max, samples, None, 0.0, vanishing, tuple(trace))

        ratios = _ratio_function(family, N, top, active, sups[active])
        small = probe_points(O, small_base, seeds, max(settings.chart_depth // 2, 1), seed)
        large = probe_points(O, large_base, seeds, settings.chart_depth, seed)
        sup_small, small_point, small_k, _ = _sup_with_ascent(ratios, small, O)
        sup_large, point, k, skipped = _sup_with_ascent(ratios, large, O)
        if sup_small > sup_large:
            sup_large, point, k = sup_small, small_point, small_k
        if skipped:
            logger.debug(f"N={N}: {skipped} numerically central samples skipped")

        if point is None:
            growth = np.nan
        elif sup_small > 0:
            growth = sup_large / sup_small - 1.0
        else:
            growth = 0.0 if sup_large == 0 else np.inf
        stable = bool(np.isfinite(sup_large) and growth < settings.growth_threshold)
        trace.append(StabilityStep(N, float(sup_small), float(sup_large), float(growth), stable))
        logger.info(f"N={N}: ratio sup {sup_small:.6g} -> {sup_large:.6g} on doubling (growth {growth:.3g})")
        if stable:
            witness = None if point is None else (k, tuple(complex(c) for c in point))
            return BautinEstimate(
                N=N,
                c_of_N=float(sup_large) * settings.safety_factor,
                k_max_checked=k_max,
                sample_count=int(large.shape[0]),
                witness=witness,
                sup_ratio=float(sup_large),
                skipped_coefficients=vanishing,
                growth_trace=tuple(trace),
            )
    raise NoFiniteNError(f"No N <= {k_max} gives a bounded coefficient ratio for {family.name}", trace)


def growth_route(
    family: AnalyticFamily,
    O: ParameterBox,
    R_sequence: Sequence[float] | None = None,
    samples: int | None = None,
    seed: int | None = None,
    degree: int | None = None,
) -> GrowthRoute:
    """
    First plateau of S(R) = max of stable rounded indicators over sampled λ ∈ O.

    R decreases along the sequence; the plateau is two consecutive equal S.
    Samples come from charts around the center and around every head stratum
    a_0 = ... = a_j = 0 that has non-central points. The first plateau is taken
    rather than the deepest one: the samples reach only a finite distance to
    the central set, so at the smallest radii S(R) falls back below μ.
    """
    settings = knobs()
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    radii = default_radii() if R_sequence is None else list(R_sequence)
    base = family.check_parameters(O.samples(samples, seed, stream=2))
    seeds = stratum_seeds(family, O, base[: max(samples // 2, 1)], top_index(family, settings.k_max))
    points = probe_points(O, base, seeds, 2 * settings.chart_depth, seed)
    levels = []
    for R in radii:
        _, rounded, stable = indicator_batch(family, points, R, degree)
        S = int(np.max(rounded[stable])) if np.any(stable) else None
        levels.append(GrowthLevel(float(R), S, int(np.sum(stable))))
    logger.info(f"Growth route on {family.name}: S(R) = {[level.S for level in levels]}")
    for current, following in zip(levels, levels[1:]):
        if current.S is not None and current.S == following.S:
            return GrowthRoute(current.S, tuple(levels))
    raise UnstableError(f"Growth indicator did not plateau for {family.name}", levels)


def _stabilize(values_by_box, label: str):
    trace = []
    for index, value in enumerate(values_by_box):
        trace.append(value)
        if index and trace[-2] == value:
            return value, index, tuple(trace)
    raise UnstableError(f"{label} route did not stabilize across boxes: {trace}", trace)


def check_sequence(K: ParameterBox, O_sequence: Sequence[ParameterBox]):
    if len(O_sequence) < 2:
        raise ConfigurationError("Need at least two nested boxes O_i")
    for outer, inner in zip(O_sequence, O_sequence[1:]):
        if not outer.strictly_contains(inner):
            raise ConfigurationError("Boxes O_i must be strictly nested")
    if not O_sequence[-1].strictly_contains(K):
        raise ConfigurationError("Every O_i must contain K compactly")


def default_U(family: AnalyticFamily, O: ParameterBox) -> ParameterBox:
    U = O.scaled(1.25)
    if not includes(family.param_region_V, U):
        raise ConfigurationError("No room for U between O and V; pass U explicitly")
    return U


def maximal_multiplicity(
    family: AnalyticFamily,
    K: ParameterBox,
    O_sequence: Sequence[ParameterBox],
    route: str = "both",
    U: ParameterBox | None = None,
    R_sequence: Sequence[float] | None = None,
    k_max: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> MaximalMultiplicity:
    if route not in {"ineq", "growth", "both"}:
        raise ConfigurationError(f"Unknown route {route!r}")
    check_sequence(K, O_sequence)
    U = default_U(family, O_sequence[0]) if U is None else U

    ineq = growth = None
    ineq_trace = growth_trace = ()
    estimate = None
    box = None
    if route in {"ineq", "both"}:
        estimates = []

        def ineq_values():
            for O in O_sequence:
                estimates.append(estimate_N_c(family, K, O, U, k_max, samples, seed))
                yield estimates[-1].N

        ineq, index, ineq_trace = _stabilize(ineq_values(), "Inequality")
        estimate, box = estimates[index], O_sequence[index]
    if route in {"growth", "both"}:
        growth_values = (growth_route(family, O, R_sequence, samples, seed).value for O in O_sequence)
        growth, index, growth_trace = _stabilize(growth_values, "Growth")
        box = box or O_sequence[index]
    if route == "both" and ineq != growth:
        raise RouteMismatchError(ineq, growth)
    value = ineq if ineq is not None else growth
    return MaximalMultiplicity(value, ineq, growth, ineq_trace, growth_trace, estimate, box)


def c_mu_estimate(
    family: AnalyticFamily,
    K: ParameterBox,
    O_sequence: Sequence[ParameterBox],
    U: ParameterBox | None = None,
    k_max: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> float:
    """c(N) of the innermost box on which the inequality route stabilized."""
    result = maximal_multiplicity(family, K, O_sequence, "ineq", U, k_max=k_max, samples=samples, seed=seed)
    return result.estimate.c_of_N


def central_set_probe(
    family: AnalyticFamily,
    O: ParameterBox,
    mu: int,
    samples: int | None = None,
    points=None,
    seed: int | None = None,
) -> list[CentralProbe]:
    """
    Classify sampled λ ∈ O as central when max_{i≤μ}|a_i(λ)| is below tolerance.

    For explicit families the verdict is cross-checked against all coefficients.
    """
    settings = knobs()
    if mu < 0:
        raise ConfigurationError(f"μ must be nonnegative, got {mu}")
    if points is None:
        samples = settings.samples if samples is None else samples
        seed = settings.seed if seed is None else seed
        points = O.samples(samples, seed, stream=3)
    points = family.check_parameters(points)
    head = np.max(np.abs(family.rule.coefficients(points, mu + 1)), axis=1)
    central = head < settings.central_tolerance
    if isinstance(family.rule, ExplicitPolynomials):
        everything = np.max(np.abs(family.rule.coefficients(points, family.rule.length)), axis=1)
        consistent = central == (everything < settings.central_tolerance)
    else:
        consistent = np.ones_like(central)
    return [
        CentralProbe(tuple(complex(c) for c in point), bool(flag), bool(ok), float(h))
        for point, flag, ok, h in zip(points, central, consistent, head, strict=True)
    ]
