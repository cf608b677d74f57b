"""
Zero counting in closed disks and the growth-based multiplicity indicator.

Counts come from phase continuation along the contour: the sample count is
doubled until every consecutive phase step is below π/2, at which point the
accumulated argument is the winding number up to rounding.
"""

import logging
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import replace

import numpy as np
from numpy.polynomial import polynomial as P

from .conf import knobs
from .contours import circle_max
from .contours import circle_min
from .contours import polynomial_modulus
from .exceptions import CentralParameterError
from .exceptions import DomainError
from .exceptions import NonConvergenceError
from .exceptions import TailDominationError
from .exceptions import UnstableError
from .exceptions import ZeroOnContourError
from .families import AnalyticFamily
from .families import Disk
from .families import as_point
from .families import evaluate_on_circle
from .sampling import generator

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
ACCEPTED_RESIDUAL = 0.25


@dataclass(frozen=True)
class ContourEvaluator:
    """A function on a contour together with a certified bound on its evaluation error."""

    values: Callable[[np.ndarray], np.ndarray]
    error: float = 0.0

    @classmethod
    def polynomial(cls, coefficients, error: float = 0.0) -> "ContourEvaluator":
        coefficients = np.asarray(coefficients, dtype=complex)
        return cls(lambda z: P.polyval(z, coefficients), error)


@dataclass(frozen=True)
class ZeroCountResult:
    count: int
    contour_radius: float
    min_modulus_on_contour: float
    quadrature_residual: float
    samples_used: int
    degree: int | None = None
    retries: int = 0


@dataclass(frozen=True)
class MultiplicityIndicator:
    lam: tuple[complex, ...]
    R: float
    m_R: float
    m_R_over_e: float
    value: float
    rounded: int
    stable: bool


def _as_evaluator(evaluator) -> ContourEvaluator:
    return evaluator if isinstance(evaluator, ContourEvaluator) else ContourEvaluator(evaluator)


def winding_count(evaluator, circle: Disk, initial_samples: int | None = None) -> ZeroCountResult:
    """Number of zeros inside `circle`, counted by phase continuation along its boundary."""
    settings = knobs()
    evaluator = _as_evaluator(evaluator)
    samples = settings.winding_initial_samples if initial_samples is None else initial_samples
    if samples < 16:
        raise DomainError(f"winding_count needs at least 16 initial samples, got {samples}")
    while samples <= settings.winding_sample_cap:
        z = circle.center + circle.radius * np.exp(1j * TWO_PI * np.arange(samples) / samples)
        values = np.asarray(evaluator.values(z), dtype=complex)
        modulus = np.abs(values)
        min_modulus, max_modulus = float(np.min(modulus)), float(np.max(modulus))
        if not np.all(np.isfinite(values)):
            raise DomainError(f"Evaluator is not finite on the circle of radius {circle.radius}")
        if max_modulus == 0.0 or min_modulus < settings.zero_on_contour_tolerance * max_modulus:
            raise ZeroOnContourError(circle.radius, min_modulus, max_modulus)
        if evaluator.error >= min_modulus:
            raise ZeroOnContourError(circle.radius, min_modulus - evaluator.error, max_modulus)
        steps = np.angle(np.roll(values, -1) / values)
        if np.max(np.abs(steps)) < np.pi / 2:
            winding = float(np.sum(steps)) / TWO_PI
            count = int(round(winding))
            residual = abs(winding - count)
            if residual < ACCEPTED_RESIDUAL:
                return ZeroCountResult(
                    count=count,
                    contour_radius=circle.radius,
                    min_modulus_on_contour=min_modulus,
                    quadrature_residual=residual,
                    samples_used=samples,
                )
        samples *= 2
    raise NonConvergenceError(
        f"Phase tracking on the circle of radius {circle.radius} did not settle "
        f"within {settings.winding_sample_cap} samples",
    )


def retry_radii(r: float, retries: int, seed: int) -> list[float]:
    """r followed by `retries` perturbed radii drawn from [0.95r, 1.05r] (kept inside the unit disk)."""
    rng = generator(seed, stream=int(r * 1e9) % 1_000_003)
    upper = min(1.05 * r, 0.5 * (1.0 + r))
    return [r, *rng.uniform(0.95 * r, upper, size=retries).tolist()]


def count_zeros_polynomial(coefficients, r: float, center: complex = 0j) -> ZeroCountResult:
    """N_r of an exact polynomial, retrying perturbed radii when a zero sits on the contour."""
    settings = knobs()
    coefficients = np.asarray(coefficients, dtype=complex)
    if not np.any(coefficients):
        raise CentralParameterError("Polynomial vanishes identically")
    evaluator = ContourEvaluator.polynomial(coefficients)
    error = None
    for attempt, radius in enumerate(retry_radii(r, settings.contour_retries, settings.seed)):
        try:
            result = winding_count(evaluator, Disk(radius, center))
        except ZeroOnContourError as e:
            logger.info(f"Zero on contour at radius {radius:.6g}, retrying")
            error = e
            continue
        return replace(result, degree=coefficients.size - 1, retries=attempt)
    raise error


def dominated_truncation(family: AnalyticFamily, lam, radius: float, degree: int) -> tuple[np.ndarray, float, int]:
    """
    Raise the truncation degree until the certified tail is below half the
    truncation's minimum modulus on |z| = radius.
    """
    settings = knobs()
    length = family.rule.length
    while True:
        head, tail = evaluate_on_circle(family, lam, radius, degree)
        count = max(64, 4 * (degree + 1))
        max_modulus, _ = circle_max(polynomial_modulus(head, radius), count)
        min_modulus, _ = circle_min(polynomial_modulus(head, radius), count)
        if max_modulus == 0.0 or min_modulus < settings.zero_on_contour_tolerance * max_modulus:
            raise ZeroOnContourError(radius, min_modulus, max_modulus)
        if tail < 0.5 * min_modulus:
            return head, tail, degree
        if (length is not None and degree >= length - 1) or degree >= settings.degree_cap:
            raise TailDominationError(
                f"Tail bound {tail:.3e} not dominated by min modulus {min_modulus:.3e} "
                f"at radius {radius:.6g} and degree {degree}",
            )
        degree = min(max(2 * degree, 1), settings.degree_cap)
        logger.debug(f"Raising truncation degree to {degree} at radius {radius:.6g}")


def count_zeros_family(family: AnalyticFamily, lam, r: float, degree: int | None = None) -> ZeroCountResult:
    """N_r(f_λ): winding count of a truncation whose tail is dominated on the contour."""
    settings = knobs()
    if not 0 < r < 1:
        raise DomainError(f"Radius {r} must lie in (0, 1)")
    degree = family.truncation_degree_default if degree is None else degree
    error = None
    for attempt, radius in enumerate(retry_radii(r, settings.contour_retries, settings.seed)):
        try:
            head, tail, used = dominated_truncation(family, lam, radius, degree)
            result = winding_count(ContourEvaluator.polynomial(head, tail), Disk(radius))
        except ZeroOnContourError as e:
            logger.info(f"Zero on contour at radius {radius:.6g} for λ={lam}, retrying")
            error = e
            continue
        return replace(result, degree=used, retries=attempt)
    raise error


def rouche_dominates(f_eval, g_eval, circle: Disk, samples: int | None = None) -> tuple[bool, float]:
    """
    Sampled Rouché test |f − g| + errors < |g| on the circle.

    Returns the verdict and the margin min|g| − max|f − g|.
    """
    f_eval, g_eval = _as_evaluator(f_eval), _as_evaluator(g_eval)
    samples = knobs().winding_initial_samples * 4 if samples is None else samples
    if samples > knobs().winding_sample_cap:
        raise NonConvergenceError(f"Rouché test asked for {samples} samples, above the cap")

    def points(theta):
        return circle.center + circle.radius * np.exp(1j * np.asarray(theta))

    difference, _ = circle_max(lambda t: np.abs(f_eval.values(points(t)) - g_eval.values(points(t))), samples)
    smallest, _ = circle_min(lambda t: np.abs(g_eval.values(points(t))), samples)
    margin = smallest - difference
    return bool(difference + f_eval.error + g_eval.error < smallest), float(margin)


def _check_not_central(family: AnalyticFamily, point: np.ndarray, degree: int) -> np.ndarray:
    length = family.rule.length
    count = degree + 1 if length is None else max(degree + 1, length)
    coefficients = family.rule.coefficients(point, count)[0]
    if np.all(np.abs(coefficients) < knobs().central_tolerance):
        raise CentralParameterError(f"f_λ vanishes numerically at λ={point[0].tolist()}")
    return coefficients[: degree + 1]


def sup_log_modulus(family: AnalyticFamily, lam, R: float, degree: int | None = None) -> float:
    """log of (max |truncation| on |z| = R + tail bound)."""
    if not 0 < R < 1:
        raise DomainError(f"Radius {R} must lie in (0, 1)")
    degree = family.truncation_degree_default if degree is None else degree
    point = as_point(family, lam)
    _check_not_central(family, point, degree)
    head, tail = evaluate_on_circle(family, point[0], R, degree)
    count = max(64, 4 * (degree + 1))
    largest, _ = circle_max(polynomial_modulus(head, R), count)
    total = largest + tail
    if total <= 0.0:
        raise CentralParameterError(f"f_λ vanishes numerically on |z| = {R}")
    return float(np.log(total))


def multiplicity_indicator(family: AnalyticFamily, lam, R: float, degree: int | None = None) -> MultiplicityIndicator:
    m_R = sup_log_modulus(family, lam, R, degree)
    m_small = sup_log_modulus(family, lam, R / np.e, degree)
    value = m_R - m_small
    rounded = max(int(round(value)), 0)
    stable = value >= -0.5 and abs(value - rounded) < knobs().stability_threshold
    return MultiplicityIndicator(
        lam=tuple(complex(c) for c in np.atleast_1d(np.asarray(lam, dtype=complex))),
        R=float(R),
        m_R=m_R,
        m_R_over_e=m_small,
        value=float(value),
        rounded=rounded,
        stable=bool(stable),
    )


def default_radii(count: int = 8, start: float = 0.1) -> list[float]:
    return [start * 2.0**-j for j in range(count)]


def indicator_trace(
    family: AnalyticFamily,
    lam,
    R_sequence: Sequence[float] | None = None,
    degree: int | None = None,
) -> list[MultiplicityIndicator]:
    radii = default_radii() if R_sequence is None else list(R_sequence)
    if any(b >= a for a, b in zip(radii, radii[1:])) or any(r <= 0 for r in radii):
        raise DomainError(f"Radius sequence must be positive and strictly decreasing: {radii}")
    return [multiplicity_indicator(family, lam, R, degree) for R in radii]


def multiplicity_at_zero(
    family: AnalyticFamily,
    lam,
    R_sequence: Sequence[float] | None = None,
    degree: int | None = None,
) -> int:
    """
    Vanishing order of f_λ at 0 read off the indicator trace.

    The value of the deepest pair of consecutive stable, agreeing indicators
    is returned.
    """
    trace = indicator_trace(family, lam, R_sequence, degree)
    for current, following in reversed(list(zip(trace, trace[1:]))):
        if current.stable and following.stable and current.rounded == following.rounded:
            return following.rounded
    raise UnstableError(f"Multiplicity indicator did not settle for λ={list(np.atleast_1d(lam))}", trace)


def indicator_batch(family: AnalyticFamily, points, R: float, degree: int | None = None, grid: int | None = None):
    """
    Multiplicity indicators of many parameter points at one radius.

    Circle maxima are taken on a fixed dense grid instead of the refined
    search of multiplicity_indicator. Returns (values, rounded, stable);
    numerically central points get value nan and are never stable.
    """
    settings = knobs()
    if not 0 < R < 1:
        raise DomainError(f"Radius {R} must lie in (0, 1)")
    degree = family.truncation_degree_default if degree is None else degree
    points = family.check_parameters(points)
    length = family.rule.length
    count = degree + 1 if length is None else max(degree + 1, length)
    coefficients = family.rule.coefficients(points, count)
    central = np.all(np.abs(coefficients) < settings.central_tolerance, axis=1)
    head = coefficients[:, : degree + 1]
    grid = max(256, 8 * (degree + 1)) if grid is None else grid
    theta = TWO_PI * np.arange(grid) / grid

    def log_sup(radius):
        powers = (radius * np.exp(1j * theta))[None, :] ** np.arange(degree + 1)[:, None]
        largest = np.max(np.abs(head @ powers), axis=1)
        tails = np.array(
            [family.rule.pointwise_tail(p[None, :], degree, radius, h) for p, h in zip(points, head, strict=True)],
        )
        with np.errstate(divide="ignore"):
            return np.log(largest + tails)

    with np.errstate(invalid="ignore"):
        values = log_sup(R) - log_sup(R / np.e)
    values = np.where(central | ~np.isfinite(values), np.nan, values)
    rounded = np.where(np.isnan(values), 0, np.clip(np.rint(np.nan_to_num(values)), 0, None)).astype(int)
    with np.errstate(invalid="ignore"):
        stable = ~np.isnan(values) & (values >= -0.5) & (np.abs(values - rounded) < settings.stability_threshold)
    return values, rounded, stable
