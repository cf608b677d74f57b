"""
Minimum-modulus certificates on circles.

Cartan's lemma guarantees a circle S_t, r/2 ≤ t ≤ r, on which |g| stays above
m1·(m1/m2)^7 where m1 and m2 are the maxima of |g| on D̄_{r/2} and on
D̄_{(6e+1)r/2}. The search below scans t, keeps the circle with the largest
minimum and certifies it against that bound.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from .conf import knobs
from .contours import angles
from .contours import circle_max
from .contours import circle_min
from .exceptions import CertificateNotFoundError
from .exceptions import DomainError

logger = logging.getLogger(__name__)

CARTAN_SCALE = 6 * math.e + 1
GENERIC_SAMPLES = 512


@dataclass(frozen=True)
class MinModulusCertificate:
    r: float
    t_r: float
    min_on_circle: float
    m1: float
    m2: float
    bound: float
    weak_bound: float | None = None
    samples: int = GENERIC_SAMPLES


def cartan_H(eta: float) -> float:
    if not 0 < eta <= 1.5 * math.e:
        raise DomainError(f"η must lie in (0, 3e/2], got {eta}")
    return 2 + math.log(3 * math.e / (2 * eta))


def _modulus(g: Callable, radius: float):
    def modulus(theta):
        return np.abs(g(radius * np.exp(1j * np.asarray(theta))))

    return modulus


def _best_circle(g: Callable, r: float, grid_size: int, samples: int) -> tuple[float, float]:
    """The t in [r/2, r] with the largest min_{S_t}|g|, and that minimum."""
    t_grid = np.linspace(r / 2, r, grid_size)
    theta = angles(samples)
    values = np.abs(g(t_grid[:, None] * np.exp(1j * theta)[None, :]))
    minima = np.min(values, axis=1)
    best = int(np.argmax(minima))
    step = (r / 2) / max(grid_size - 1, 1)
    lower, upper = max(r / 2, t_grid[best] - step), min(r, t_grid[best] + step)
    t_best = float(t_grid[best])
    if upper > lower:
        fit = minimize_scalar(
            lambda t: -float(np.min(np.abs(g(t * np.exp(1j * theta))))),
            bounds=(lower, upper),
            method="bounded",
            options={"xatol": 1e-12 * r},
        )
        if -fit.fun > minima[best]:
            t_best = float(fit.x)
    smallest, _ = circle_min(_modulus(g, t_best), samples)
    return t_best, smallest


def _certify(r, t, smallest, m1, m2, bound, weak_bound, samples) -> MinModulusCertificate:
    tolerance = knobs().relative_tolerance
    if not smallest >= bound * (1 - tolerance):
        raise CertificateNotFoundError(
            f"Best circle t={t:.6g} in [{r / 2:.6g}, {r:.6g}] has min |g| = {smallest:.3e} below {bound:.3e}",
        )
    return MinModulusCertificate(r, t, smallest, m1, m2, bound, weak_bound, samples)


def find_good_radius(g: Callable, r: float, grid_size: int | None = None, samples: int = GENERIC_SAMPLES):
    """Certificate min_{S_t}|g| ≥ m1·(m1/m2)^7 for some t in [r/2, r]; g maps arrays of z to values."""
    if r <= 0:
        raise DomainError(f"Radius must be positive, got {r}")
    grid_size = knobs().cartan_grid if grid_size is None else grid_size
    m1, _ = circle_max(_modulus(g, r / 2), samples)
    m2, _ = circle_max(_modulus(g, CARTAN_SCALE * r / 2), samples)
    if m1 == 0:
        raise DomainError("g vanishes on D̄_{r/2}")
    m2 = max(m2, m1)
    bound = m1 * (m1 / m2) ** 7
    t, smallest = _best_circle(g, r, grid_size, samples)
    return _certify(r, t, smallest, m1, m2, bound, None, samples)


def polynomial_samples(d: int) -> int:
    return max(4 * d, 64)


def polynomial_min_modulus(g, d: int, r: float, grid_size: int | None = None) -> MinModulusCertificate:
    """
    Certificate with bound max_{D̄_{r/2}}|g|/(6e+1)^{7d}; m2 is the Bernstein
    majorant m1·(6e+1)^d and the weaker m1/2^{29d} is recorded too.
    """
    coefficients = np.trim_zeros(np.asarray(g, dtype=complex), "b")
    if not coefficients.size:
        raise DomainError("g is the zero polynomial")
    if coefficients.size - 1 > d:
        raise DomainError(f"g has degree {coefficients.size - 1} > {d}")
    grid_size = knobs().cartan_grid if grid_size is None else grid_size
    samples = polynomial_samples(d)

    def evaluator(z):
        return P.polyval(z, coefficients)

    m1, _ = circle_max(_modulus(evaluator, r / 2), samples)
    m2 = m1 * CARTAN_SCALE**d
    bound = m1 / CARTAN_SCALE ** (7 * d)
    weak_bound = m1 / 2.0 ** (29 * d)
    t, smallest = _best_circle(evaluator, r, grid_size, samples)
    return _certify(r, t, smallest, m1, m2, bound, weak_bound, samples)


def bernstein_doubling_check(g, d: int, r: float, s: float) -> tuple[float, float, bool]:
    """max_{|z|=s·r/2}|g| / max_{|z|=r/2}|g| against s^d."""
    if s <= 1:
        raise DomainError(f"Scale must exceed 1, got {s}")
    coefficients = np.asarray(g, dtype=complex)
    samples = polynomial_samples(d)

    def evaluator(z):
        return P.polyval(z, coefficients)

    inner, _ = circle_max(_modulus(evaluator, r / 2), samples, refine=samples)
    outer, _ = circle_max(_modulus(evaluator, s * r / 2), samples, refine=samples)
    ratio = outer / inner
    bound = s**d
    return float(ratio), float(bound), bool(ratio <= bound * (1 + knobs().relative_tolerance))


def replay(certificate: MinModulusCertificate, g: Callable) -> bool:
    """Re-evaluate the minimum on S_{t_r} and check the stored inequality."""
    smallest, _ = circle_min(_modulus(g, certificate.t_r), certificate.samples)
    tolerance = knobs().relative_tolerance
    return bool(
        certificate.r / 2 <= certificate.t_r <= certificate.r
        and smallest >= certificate.bound * (1 - tolerance)
        and certificate.min_on_circle >= certificate.bound * (1 - tolerance),
    )
