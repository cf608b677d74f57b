"""
Deterministic parameter sampling on polydisks.

All randomness goes through a Philox counter-based generator keyed by the run
seed and a stream number, so a given (seed, stream) always reproduces the same
points regardless of the order in which sweeps are evaluated.
"""

import itertools
import logging

import numpy as np
from scipy.optimize import least_squares

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
# beyond this many exponent vectors, charts are drawn at random
MAX_CHARTS = 64
# largest |u| a start keeps in plane coordinates
PLANE_EDGE = 0.99


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def harmonious_ratio(d: int) -> float:
    """Positive root of x^(d+1) = x + 1 (the golden ratio for d = 1)."""
    x = 2.0
    for _ in range(30):
        x = (1.0 + x) ** (1.0 / (d + 1))
    return x


def recurrence_points(count: int, d: int, shift: np.ndarray | None = None) -> np.ndarray:
    """Additive-recurrence low-discrepancy points in [0, 1)^d, shape (count, d)."""
    g = harmonious_ratio(d)
    alpha = np.array([(1.0 / g) ** (j + 1) % 1.0 for j in range(d)])
    offset = np.full(d, 0.5) if shift is None else np.asarray(shift, dtype=float)
    index = np.arange(1, count + 1, dtype=float)[:, None]
    return (offset + alpha * index) % 1.0


def polydisk_points(centers, radii, unit: np.ndarray, boundary: np.ndarray) -> np.ndarray:
    """
    Map unit-cube points (count, 2n) into the polydisk.

    Columns 2i and 2i+1 give the modulus fraction and the angle of coordinate
    i; rows flagged in `boundary` are pushed onto the distinguished boundary.
    """
    centers = np.asarray(centers, dtype=complex)
    radii = np.asarray(radii, dtype=float)
    n = centers.size
    modulus = np.sqrt(unit[:, 0 : 2 * n : 2])
    modulus[boundary] = 1.0
    angle = TWO_PI * unit[:, 1 : 2 * n : 2]
    return centers + radii * modulus * np.exp(1j * angle)


def box_samples(box, count: int, seed: int, stream: int = 0, boundary_fraction: float = 0.5) -> np.ndarray:
    """
    Boundary-biased samples of a ParameterBox, shape (count, n).

    The first point is the center; about `boundary_fraction` of the rest lie on
    the torus where maxima of holomorphic functions live. The first `count`
    points of a larger request are the same points.
    """
    if count < 1:
        return np.zeros((0, box.dimension), dtype=complex)
    rng = generator(seed, stream)
    shift = rng.random(2 * box.dimension)
    unit = recurrence_points(count - 1, 2 * box.dimension, shift)
    # every other point on the torus keeps prefixes balanced
    period = max(int(round(1.0 / boundary_fraction)), 1) if boundary_fraction > 0 else 0
    boundary = np.zeros(count - 1, dtype=bool)
    if period:
        boundary[::period] = True
    points = polydisk_points(box.centers, box.radii, unit, boundary)
    return np.vstack([np.asarray(box.centers, dtype=complex)[None, :], points])


def exponent_vectors(dimension: int, max_exponent: int, seed: int) -> list[tuple[int | None, ...]]:
    """
    Exponent choices {1..E, pinned}^n for chart sampling (None means pinned).

    The all-pinned vector is dropped; large products are subsampled at random.
    """
    choices: list[int | None] = [*range(1, max_exponent + 1), None]
    total = len(choices) ** dimension
    if total - 1 <= MAX_CHARTS:
        vectors = [v for v in itertools.product(choices, repeat=dimension) if any(e is not None for e in v)]
        return vectors
    rng = generator(seed, 10_000 + dimension)
    vectors = {tuple([1] * dimension)}
    while len(vectors) < MAX_CHARTS:
        draw = rng.integers(0, len(choices), size=dimension)
        vector = tuple(choices[i] for i in draw)
        if any(e is not None for e in vector):
            vectors.add(vector)
    return sorted(vectors, key=lambda v: tuple(-1 if e is None else e for e in v))


def chart_samples(
    box,
    seed_point: np.ndarray,
    depth: int,
    max_exponent: int,
    per_chart: int,
    seed: int,
    stream: int = 0,
) -> np.ndarray:
    """
    Points λ_i = c_i + ρ_i·u_i·s^{e_i} near a seed point c.

    Scales are s = 10^-1 .. 10^-depth, exponents come from exponent_vectors and
    ρ_i is the room left between c and the edge of the box. Each (chart, scale)
    pair has its own stream, so deeper requests extend shallower ones.
    """
    seed_point = np.asarray(seed_point, dtype=complex)
    room = np.asarray(box.radii) - np.abs(seed_point - np.asarray(box.centers))
    room = np.clip(room, 0.0, None) * (1.0 - 1e-9)
    if depth < 1 or per_chart < 1:
        return np.zeros((0, box.dimension), dtype=complex)
    blocks = []
    for chart_index, exponents in enumerate(exponent_vectors(box.dimension, max_exponent, seed)):
        for level in range(1, depth + 1):
            s = 10.0 ** (-level)
            rng = generator(seed, stream * 1_000_003 + chart_index * 1_009 + level)
            modulus = np.sqrt(rng.random((per_chart, box.dimension)))
            angle = TWO_PI * rng.random((per_chart, box.dimension))
            u = modulus * np.exp(1j * angle)
            scale = np.array([0.0 if e is None else s**e for e in exponents])
            blocks.append(seed_point + room * scale * u)
    return np.vstack(blocks)


def to_plane(points: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Inverse of from_plane; points on the distinguished boundary are pulled just inside."""
    u = (np.asarray(points, dtype=complex) - centers) / radii
    modulus = np.abs(u)
    u = np.where(modulus > PLANE_EDGE, u * PLANE_EDGE / np.maximum(modulus, PLANE_EDGE), u)
    return u / np.sqrt(1.0 - np.abs(u) ** 2)


def from_plane(w: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Coordinatewise diffeomorphism C^n -> open polydisk, w -> c + r·w/sqrt(1 + |w|²)."""
    return centers + radii * w / np.sqrt(1.0 + np.abs(w) ** 2)


def solve_head_stratum(rule_values, box, starts: np.ndarray, max_nfev: int = 200) -> list[np.ndarray]:
    """
    Points of the box where the head coefficients vanish, by least squares.

    `rule_values(points)` returns the (S, N+1) head coefficient values. The
    solve runs unconstrained in plane coordinates (see from_plane), so every
    solution lies inside the open polydisk exactly where the solver left it.
    """
    centers = np.asarray(box.centers, dtype=complex)
    radii = np.asarray(box.radii, dtype=float)
    n = centers.size

    def point_of(x):
        return from_plane(x[:n] + 1j * x[n:], centers, radii)

    def residual(x):
        values = rule_values(point_of(x)[None, :])[0]
        return np.concatenate([values.real, values.imag])

    solutions = []
    for start in np.atleast_2d(starts):
        if not np.any(rule_values(start[None, :])[0]):
            solutions.append(np.asarray(start, dtype=complex))
            continue
        w = to_plane(start, centers, radii)
        x = np.concatenate([w.real, w.imag])
        if np.any(residual(x)):
            try:
                # multiple zeros converge only linearly: exact central differences, no gradient stop
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    fit = least_squares(residual, x, jac="3-point", xtol=None, gtol=None, max_nfev=max_nfev)
            except ValueError as e:
                logger.debug(f"Head stratum solve skipped: {e}")
                continue
            x = fit.x
        point = point_of(x)
        if np.all(np.isfinite(point)):
            solutions.append(point)
    return solutions
