"""
Bautin index of a polynomial family restricted to a polynomial curve λ = φ(w).

Along a disk curve the coefficient ideal is principal-like: membership of a_k∘φ
in the ideal of a_0∘φ..a_d∘φ reduces to comparing vanishing orders at the
common zeros in the closed unit disk.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .conf import knobs
from .contours import circle_points
from .exceptions import CentralParameterError
from .exceptions import DomainError
from .exceptions import RootClusterError
from .families import AnalyticFamily
from .families import ParameterBox
from .families import explicit_rule
from .polynomials import trim
from .polynomials import vanishing_order

logger = logging.getLogger(__name__)

IMAGE_RADIUS = 1.05
IMAGE_SAMPLES = 256
CLUSTER_RADIUS = 1e-4
DISK_SLACK = 1e-9


@dataclass(frozen=True)
class CurveBautinIndex:
    d: int
    common_zeros: tuple[tuple[complex, int], ...]
    k_max_checked: int
    generators: tuple[int, ...] = ()


def check_image(curve: Sequence[np.ndarray], O: ParameterBox, radius: float = IMAGE_RADIUS):
    w = circle_points(radius, IMAGE_SAMPLES)
    image = np.column_stack([P.polyval(w, np.asarray(c, dtype=complex)) for c in curve])
    if not np.all(O.contains(image, slack=0.0)):
        raise DomainError(f"Curve image of the circle |w| = {radius} leaves O")


def roots_with_multiplicity(coefficients: np.ndarray, tolerance: float) -> list[tuple[complex, int]]:
    """
    Roots of a univariate polynomial with their multiplicities.

    Exact low-order zeros give the root at 0; the remaining roots are grouped
    into clusters whose size must match the vanishing order at the centroid.
    """
    full = trim(coefficients, tolerance)
    scale = float(np.max(np.abs(full)))
    if full.size < 2 or scale == 0.0:
        return []
    leading = int(np.nonzero(np.abs(full) > tolerance * scale)[0][0])
    found = [(0j, leading)] if leading else []
    rest = full[leading:]
    if rest.size < 2:
        return found
    clusters: list[list[complex]] = []
    for root in sorted(P.polyroots(rest), key=lambda r: (r.real, r.imag)):
        for cluster in clusters:
            centre = np.mean(cluster)
            if abs(root - centre) <= CLUSTER_RADIUS * max(1.0, abs(centre)):
                cluster.append(root)
                break
        else:
            clusters.append([root])
    for cluster in clusters:
        centre = complex(np.mean(cluster))
        if leading and abs(centre) <= CLUSTER_RADIUS:
            raise RootClusterError(f"Root cluster at {centre:.3e} cannot be separated from the zero at 0")
        order = vanishing_order(full, centre, tolerance)
        if order != len(cluster):
            raise RootClusterError(
                f"Cluster of {len(cluster)} roots near {centre:.6g} has vanishing order {order}",
            )
        found.append((centre, order))
    return found


def bautin_index_along_curve(
    family: AnalyticFamily,
    curve: Sequence[Sequence[complex]],
    O: ParameterBox,
    k_max: int | None = None,
) -> CurveBautinIndex:
    """
    Smallest d such that every later a_k∘φ vanishes at each common zero of
    a_0∘φ..a_d∘φ in the closed unit disk to at least the head's minimal order.
    """
    settings = knobs()
    rule = explicit_rule(family)
    k_max = settings.k_max if k_max is None else k_max
    curve = [np.asarray(c, dtype=complex) for c in curve]
    if len(curve) != family.dimension:
        raise DomainError(f"Curve has {len(curve)} components, family has {family.dimension}")
    check_image(curve, O)
    tolerance = settings.relative_tolerance

    generators = []
    for k, poly in enumerate(rule.polynomials[: k_max + 1]):
        composed = poly.compose(curve)
        if np.max(np.abs(composed)) < settings.central_tolerance:
            continue
        generators.append((k, composed))
    if not generators:
        raise CentralParameterError("The curve lies in the central set")
    logger.debug(f"Nonzero generators along the curve: {[k for k, _ in generators]}")

    def order_at(coefficients, w):
        order = vanishing_order(coefficients, w, tolerance)
        return np.inf if order is None else order

    for d in range(0, k_max + 1):
        head = [(k, c) for k, c in generators if k <= d]
        later = [(k, c) for k, c in generators if k > d]
        if not head:
            if not later:
                return CurveBautinIndex(d, (), k_max, tuple(k for k, _ in generators))
            continue
        common = []
        for w, _ in roots_with_multiplicity(head[0][1], tolerance):
            if abs(w) > 1.0 + DISK_SLACK:
                continue
            min_order = min(order_at(c, w) for _, c in head)
            if min_order >= 1:
                common.append((w, int(min_order)))
        if all(order_at(c, w) >= order for _, c in later for w, order in common):
            return CurveBautinIndex(d, tuple(common), k_max, tuple(k for k, _ in generators))
    raise CentralParameterError(f"No head of at most {k_max + 1} coefficients generates along the curve")
