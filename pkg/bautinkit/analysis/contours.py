"""Sampling of functions on circles |z - center| = radius, with local refinement of extrema."""

from collections.abc import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

TWO_PI = 2.0 * np.pi
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))

ModulusFunction = Callable[[np.ndarray], np.ndarray]


def angles(count: int, offset: float = GOLDEN_ANGLE) -> np.ndarray:
    return offset + TWO_PI * np.arange(count) / count


def circle_points(radius: float, count: int, center: complex = 0j, offset: float = GOLDEN_ANGLE) -> np.ndarray:
    return center + radius * np.exp(1j * angles(count, offset))


def polynomial_modulus(coefficients: np.ndarray, radius: float, center: complex = 0j) -> ModulusFunction:
    coefficients = np.asarray(coefficients, dtype=complex)

    def modulus(theta):
        return np.abs(P.polyval(center + radius * np.exp(1j * np.asarray(theta)), coefficients))

    return modulus


def _extremum(modulus: ModulusFunction, count: int, sign: float, refine: int) -> tuple[float, float]:
    theta = angles(count)
    values = sign * modulus(theta)
    left = np.roll(values, 1)
    right = np.roll(values, -1)
    candidates = np.nonzero((values <= left) & (values <= right))[0]
    candidates = candidates[np.argsort(values[candidates])][:refine]
    best = int(np.argmin(values))
    best_value, best_theta = float(values[best]), float(theta[best])
    step = TWO_PI / count
    for index in candidates:
        centre = float(theta[index])
        fit = minimize_scalar(
            lambda t: float(sign * modulus(np.array([t]))[0]),
            bounds=(centre - step, centre + step),
            method="bounded",
            options={"xatol": 1e-12 * TWO_PI},
        )
        if fit.fun < best_value:
            best_value, best_theta = float(fit.fun), float(fit.x)
    return sign * best_value, best_theta


def circle_max(modulus: ModulusFunction, count: int, refine: int = 8) -> tuple[float, float]:
    """Largest value of `modulus` on the circle and the angle attaining it."""
    return _extremum(modulus, count, -1.0, refine)


def circle_min(modulus: ModulusFunction, count: int, refine: int = 8) -> tuple[float, float]:
    """Smallest value of `modulus` on the circle and the angle attaining it."""
    return _extremum(modulus, count, 1.0, refine)
