"""
Cyclicity bounds: the explicit radius, the zero-count sandwich between a family
and its Taylor polynomial of degree μ, the global zero bound on D̄_{1/4}, and
the search for parameters that realize μ zeros.
"""

import logging
import math
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .bautin import estimate_N_c
from .bautin import maximal_multiplicity
from .bautin import probe_points
from .bautin import stratum_seeds
from .conf import knobs
from .exceptions import AnalysisError
from .exceptions import CentralParameterError
from .exceptions import ConfigurationError
from .exceptions import NonConvergenceError
from .families import AnalyticFamily
from .families import Disk
from .families import ParameterBox
from .families import tail_coefficient_bound
from .families import taylor_polynomial
from .zero_count import ContourEvaluator
from .zero_count import count_zeros_family
from .zero_count import count_zeros_polynomial
from .zero_count import dominated_truncation
from .zero_count import rouche_dominates

logger = logging.getLogger(__name__)

# largest practical radius tried; 2r must stay inside the unit disk
PRACTICAL_START = 0.4
PRACTICAL_LEVELS = 30
CONTOUR_CHOICES = 5
# theoretical verification is pointless once R^μ is below this power of two
PRACTICAL_LOG2_LIMIT = 900.0
GLOBAL_RADIUS = 0.25

Point = tuple[complex, ...]


@dataclass(frozen=True)
class RadiusResult:
    R: float
    log2_inverse_R: float
    R_0: float
    log2_inverse_R_0: float
    underflow: bool


@dataclass(frozen=True)
class SandwichRow:
    lam: Point
    r: float
    N_half_P: int | None
    N_r_f: int | None
    N_2r_P: int | None
    passed: bool
    error: str | None = None


@dataclass(frozen=True)
class GlobalRow:
    lam: Point
    N_quarter_f: int | None
    passed: bool
    error: str | None = None


@dataclass(frozen=True)
class ExtremalResult:
    found: bool
    lam: Point | None
    r: float
    count: int | None
    max_count: int | None
    evaluated: int


@dataclass(frozen=True)
class CyclicityReport:
    mu: int
    c_mu: float
    M: float
    R: float
    radius: RadiusResult
    mode: str
    practical_radius: float | None
    sandwich_results: tuple[SandwichRow, ...]
    global_bound: float
    global_results: tuple[GlobalRow, ...]
    extremal: ExtremalResult | None

    @property
    def passed(self) -> bool:
        return (
            all(row.passed for row in self.sandwich_results)
            and all(row.passed for row in self.global_results)
            and (self.extremal is None or self.extremal.found)
        )


def compute_radius(mu: int, c_mu: float, M: float) -> RadiusResult:
    """R = 1/(4·c·M·2^{30μ} + 2) and R_0 = 1/(2·c·M·2^{30μ} + 1), in log space when needed."""
    if mu < 0 or c_mu < 0 or M < 0:
        raise ConfigurationError(f"compute_radius needs nonnegative inputs, got {(mu, c_mu, M)}")
    product = c_mu * M
    if product == 0:
        return RadiusResult(0.5, 1.0, 1.0, 0.0, False)
    exponent = 30 * mu + math.log2(product)
    log2_inverse_R = float(np.logaddexp2(exponent + 2.0, 1.0))
    log2_inverse_R_0 = float(np.logaddexp2(exponent + 1.0, 0.0))
    if exponent < 1000:
        R = 1.0 / (4.0 * c_mu * M * 2.0 ** (30 * mu) + 2.0)
        R_0 = 1.0 / (2.0 * c_mu * M * 2.0 ** (30 * mu) + 1.0)
    else:
        R = 2.0**-log2_inverse_R
        R_0 = 2.0**-log2_inverse_R_0
    underflow = R < np.finfo(float).tiny
    if underflow:
        logger.info(f"Radius underflows: log2(1/R) = {log2_inverse_R:.6g}")
    return RadiusResult(R, log2_inverse_R, R_0, log2_inverse_R_0, bool(underflow))


def _dominated_somewhere(family, lam, mu: int, lower: float, upper: float) -> bool:
    """Rouché domination of f_λ by P_λ on at least one circle with radius in [lower, upper]."""
    head = taylor_polynomial(family, lam, mu).coef
    for t in np.linspace(lower, upper, CONTOUR_CHOICES):
        try:
            coefficients, tail, _ = dominated_truncation(
                family, lam, t, max(family.truncation_degree_default, mu),
            )
        except AnalysisError:
            continue
        f_eval = ContourEvaluator.polynomial(coefficients, tail)
        if rouche_dominates(f_eval, ContourEvaluator.polynomial(head), Disk(t))[0]:
            return True
    return False


def practical_radius(family: AnalyticFamily, mu: int, lam_samples, start: float = PRACTICAL_START) -> float | None:
    """
    Largest r = start·2^-j such that every sampled f_λ is dominated by P_λ on
    some circle in [r/2, r] and on some circle in [r, 2r].
    """
    points = [np.asarray(lam, dtype=complex) for lam in lam_samples]
    for j in range(PRACTICAL_LEVELS):
        r = start * 2.0**-j
        if all(
            _dominated_somewhere(family, lam, mu, r / 2, r) and _dominated_somewhere(family, lam, mu, r, 2 * r)
            for lam in points
        ):
            logger.info(f"Practical radius {r:.6g} for μ={mu}")
            return r
    return None


def _point(lam) -> Point:
    return tuple(complex(c) for c in np.atleast_1d(np.asarray(lam, dtype=complex)))


def sandwich_row(family: AnalyticFamily, lam, r: float, mu: int) -> SandwichRow:
    try:
        head = taylor_polynomial(family, lam, mu).coef
        half = count_zeros_polynomial(head, r / 2).count
        full = count_zeros_family(family, lam, r).count
        double = count_zeros_polynomial(head, 2 * r).count
    except AnalysisError as e:
        return SandwichRow(_point(lam), r, None, None, None, False, str(e))
    return SandwichRow(_point(lam), r, half, full, double, half <= full <= double)


def global_bound_value(mu: int, c_mu: float, M: float) -> float:
    return 4 * mu + math.log(2 + 2 * c_mu * M) / math.log(1.25)


def global_row(family: AnalyticFamily, lam, bound: float) -> GlobalRow:
    try:
        count = count_zeros_family(family, lam, GLOBAL_RADIUS).count
    except AnalysisError as e:
        return GlobalRow(_point(lam), None, False, str(e))
    return GlobalRow(_point(lam), count, count <= math.ceil(bound) - 1)


Runner = Callable[[str, dict, Sequence], list]


def verify_sandwich(
    family: AnalyticFamily,
    K: ParameterBox,
    O: ParameterBox,
    report_inputs: tuple[int, float, float],
    radii: Sequence[float] | None,
    lam_samples,
    mode: str = "auto",
    runner: Runner | None = None,
) -> tuple[str, float | None, list[SandwichRow]]:
    """
    N_{r/2}(P_λ) ≤ N_r(f_λ) ≤ N_{2r}(P_λ) for every sampled (λ, r).

    In practical-radius mode the radii are capped by the Rouché radius of
    the samples. Returns (mode, practical radius, rows).
    """
    mu, c_mu, M = report_inputs
    if not len(lam_samples):
        raise CentralParameterError("No non-central parameter samples to verify the sandwich on")
    if mode not in {"auto", "theoretical", "practical"}:
        raise ConfigurationError(f"Unknown sandwich mode {mode!r}")
    if not O.strictly_contains(K):
        raise ConfigurationError("K must lie compactly inside O")
    radius = compute_radius(mu, c_mu, M)
    if mode == "auto":
        too_small = radius.underflow or radius.log2_inverse_R * max(mu, 1) > PRACTICAL_LOG2_LIMIT
        mode = "practical" if too_small else "theoretical"
    r_prac = None
    if mode == "practical":
        r_prac = practical_radius(family, mu, lam_samples)
        if r_prac is None:
            raise NonConvergenceError("No practical radius dominates every sample")
        logger.info(f"Practical-radius mode: R = 2^-{radius.log2_inverse_R:.6g}, using r <= {r_prac:.6g}")
        limit = r_prac
        radii = [r_prac] if radii is None else [r for r in radii if r <= r_prac]
    else:
        limit = radius.R
        radii = [radius.R / 2] if radii is None else [r for r in radii if r < radius.R]
    if not radii:
        raise ConfigurationError(f"No requested radius lies below {limit:.6g}")
    jobs = [(np.asarray(lam, dtype=complex), r) for lam in lam_samples for r in radii]
    if runner is not None:
        rows = runner("sandwich", {"mu": mu}, jobs)
    else:
        rows = [sandwich_row(family, lam, r, mu) for lam, r in jobs]
    return mode, r_prac, rows


def verify_global_bound(
    family: AnalyticFamily,
    O: ParameterBox,
    mu: int,
    c_mu: float,
    M: float,
    lam_samples,
    runner: Runner | None = None,
) -> tuple[float, list[GlobalRow]]:
    """N_{1/4}(f_λ) < 4μ + log_{5/4}(2 + 2·c·M), checked as count ≤ ceil(bound) − 1."""
    if not len(lam_samples):
        raise CentralParameterError("No non-central parameter samples to verify the global bound on")
    bound = global_bound_value(mu, c_mu, M)
    points = family.check_parameters(lam_samples)
    if not np.all(O.contains(points)):
        raise ConfigurationError("Global-bound samples must lie in O")
    jobs = [(lam, GLOBAL_RADIUS) for lam in points]
    if runner is not None:
        rows = runner("global", {"bound": bound}, jobs)
    else:
        rows = [global_row(family, lam, bound) for lam, _ in jobs]
    return bound, rows


def non_central_samples(family: AnalyticFamily, O: ParameterBox, mu: int, count: int, seed: int) -> np.ndarray:
    """Samples of O whose first μ+1 coefficients do not all vanish."""
    tolerance = knobs().central_tolerance
    points = family.check_parameters(O.samples(4 * count, seed, stream=5))
    head = np.max(np.abs(family.rule.coefficients(points, mu + 1)), axis=1)
    return points[head >= tolerance][:count]


def extremal_candidates(family: AnalyticFamily, O: ParameterBox, mu: int, seed: int) -> np.ndarray:
    """Chart samples near the central set first (smallest head), then plain samples of O."""
    settings = knobs()
    base = family.check_parameters(O.samples(settings.samples, seed, stream=6))
    order = max(mu - 1, 0)
    seeds = stratum_seeds(family, O, base, order if mu > 0 else None)
    charts = probe_points(O, base[:0], seeds, 2 * settings.chart_depth, seed)
    head = np.max(np.abs(family.rule.coefficients(charts, order + 1)), axis=1) if mu > 0 else np.zeros(len(charts))
    central = np.all(np.abs(family.rule.coefficients(charts, mu + 1)) < settings.central_tolerance, axis=1)
    charts = charts[~central][np.argsort(head[~central], kind="stable")]
    return np.vstack([charts, base])


def find_extremal(
    family: AnalyticFamily,
    O: ParameterBox,
    mu: int,
    r: float,
    search_budget: int | None = None,
    seed: int | None = None,
) -> ExtremalResult:
    """First sampled λ ∈ O with exactly μ zeros in D̄_r, searched near the central set first."""
    settings = knobs()
    seed = settings.seed if seed is None else seed
    search_budget = 4 * settings.samples if search_budget is None else search_budget
    candidates = extremal_candidates(family, O, mu, seed)[:search_budget]
    max_count = None
    evaluated = 0
    for lam in candidates:
        evaluated += 1
        try:
            count = count_zeros_family(family, lam, r).count
        except AnalysisError as e:
            logger.debug(f"Extremal candidate skipped: {e}")
            continue
        max_count = count if max_count is None else max(max_count, count)
        if count == mu:
            logger.info(f"Extremal witness with {count} zeros in D̄_{r:.3g} after {evaluated} candidates")
            return ExtremalResult(True, _point(lam), r, count, max_count, evaluated)
    logger.info(f"No extremal witness among {evaluated} candidates (max count {max_count})")
    return ExtremalResult(False, None, r, None, max_count, evaluated)


def analyze_cyclicity(
    family: AnalyticFamily,
    K: ParameterBox,
    O_sequence: Sequence[ParameterBox],
    U: ParameterBox,
    route: str = "both",
    sweep_samples: int = 16,
    mode: str = "practical",
    extremal_radius: float | None = None,
    runner: Runner | None = None,
    seed: int | None = None,
) -> CyclicityReport:
    """μ, c, M and the radius, followed by the sandwich, global and extremal checks on the stabilized box."""
    settings = knobs()
    seed = settings.seed if seed is None else seed
    multiplicity = maximal_multiplicity(family, K, O_sequence, route, U, seed=seed)
    mu = multiplicity.value
    O = multiplicity.stabilized_box
    estimate = multiplicity.estimate or estimate_N_c(family, K, O, U, seed=seed)
    c_mu = estimate.c_of_N
    M = tail_coefficient_bound(family, U, mu, settings.k_max, seed=seed).value
    radius = compute_radius(mu, c_mu, M)

    samples = non_central_samples(family, O, mu, sweep_samples, seed)
    mode, r_prac, sandwich = verify_sandwich(family, K, O, (mu, c_mu, M), None, samples, mode, runner)
    bound, global_rows = verify_global_bound(family, O, mu, c_mu, M, samples, runner)
    r_ext = extremal_radius if extremal_radius is not None else (r_prac if r_prac is not None else radius.R / 2)
    extremal = find_extremal(family, O, mu, r_ext, seed=seed)
    return CyclicityReport(
        mu=mu,
        c_mu=c_mu,
        M=M,
        R=radius.R,
        radius=radius,
        mode=mode,
        practical_radius=r_prac,
        sandwich_results=tuple(sandwich),
        global_bound=bound,
        global_results=tuple(global_rows),
        extremal=extremal,
    )
