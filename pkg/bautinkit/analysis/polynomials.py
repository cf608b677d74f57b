"""
Sparse multivariate polynomials over C and a few univariate helpers.

Coefficient rules of explicit families are lists of MultiPolynomial; the
univariate side uses numpy's power-basis routines (lowest degree first).
"""

from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import ConfigurationError


class MultiPolynomial:
    """An n-variate polynomial stored as {multi-index: coefficient}."""

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        if dimension < 1:
            raise ConfigurationError(f"Polynomial dimension must be positive, got {dimension}")
        self.dimension = dimension
        cleaned = {}
        for index, coefficient in (terms or {}).items():
            index = tuple(int(e) for e in index)
            if len(index) != dimension or any(e < 0 for e in index):
                raise ConfigurationError(f"Bad multi-index {index} for dimension {dimension}")
            value = complex(coefficient)
            if not np.isfinite(value):
                raise ConfigurationError(f"Non-finite coefficient at {index}")
            if value != 0:
                cleaned[index] = cleaned.get(index, 0) + value
        self.terms = {k: v for k, v in sorted(cleaned.items()) if v != 0}

    @classmethod
    def from_triples(cls, dimension: int, triples: Iterable[Sequence]) -> "MultiPolynomial":
        """Build from (multi-index, re, im) triples, the config-file layout."""
        terms: dict[tuple[int, ...], complex] = {}
        for index, re, im in triples:
            key = tuple(index)
            terms[key] = terms.get(key, 0) + complex(re, im)
        return cls(dimension, terms)

    @classmethod
    def constant(cls, dimension: int, value: complex) -> "MultiPolynomial":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def variable(cls, dimension: int, i: int, power: int = 1) -> "MultiPolynomial":
        index = [0] * dimension
        index[i] = power
        return cls(dimension, {tuple(index): 1})

    def __repr__(self):
        return f"MultiPolynomial({self.dimension}, {self.terms!r})"

    def __eq__(self, other):
        if not isinstance(other, MultiPolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __hash__(self):
        return hash((self.dimension, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(index) for index in self.terms), default=0)

    def __add__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        terms = dict(self.terms)
        for index, value in other.terms.items():
            terms[index] = terms.get(index, 0) + value
        return MultiPolynomial(self.dimension, terms)

    def __mul__(self, other):
        if isinstance(other, MultiPolynomial):
            terms: dict[tuple[int, ...], complex] = {}
            for ia, va in self.terms.items():
                for ib, vb in other.terms.items():
                    key = tuple(a + b for a, b in zip(ia, ib, strict=True))
                    terms[key] = terms.get(key, 0) + va * vb
            return MultiPolynomial(self.dimension, terms)
        return MultiPolynomial(self.dimension, {k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def embed(self, dimension: int, offset: int) -> "MultiPolynomial":
        """The same polynomial in variables offset..offset+n-1 of a larger space."""
        terms = {}
        for index, value in self.terms.items():
            padded = [0] * dimension
            padded[offset : offset + self.dimension] = index
            terms[tuple(padded)] = value
        return MultiPolynomial(dimension, terms)

    def __call__(self, point) -> complex:
        return complex(self.evaluate(np.asarray(point, dtype=complex)[None, :])[0])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (S, n) array of parameter points."""
        points = np.atleast_2d(np.asarray(points, dtype=complex))
        out = np.zeros(points.shape[0], dtype=complex)
        for index, value in self.terms.items():
            term = np.full(points.shape[0], value, dtype=complex)
            for i, power in enumerate(index):
                if power:
                    term = term * points[:, i] ** power
            out += term
        return out

    def majorant(self, box) -> float:
        """Triangle-inequality bound Σ|c|·Π(|center_i| + radius_i)^α_i on a ParameterBox."""
        reach = np.abs(np.asarray(box.centers)) + np.asarray(box.radii)
        total = 0.0
        for index, value in self.terms.items():
            total += abs(value) * float(np.prod(reach ** np.asarray(index)))
        return total

    def compose(self, curve: Sequence[np.ndarray]) -> np.ndarray:
        """Coefficients (in w) of this polynomial along a polynomial curve λ = φ(w)."""
        if len(curve) != self.dimension:
            raise ConfigurationError(f"Curve has {len(curve)} components, expected {self.dimension}")
        result = np.zeros(1, dtype=complex)
        for index, value in self.terms.items():
            term = np.array([value], dtype=complex)
            for component, power in zip(curve, index, strict=True):
                if power:
                    term = P.polymul(term, P.polypow(np.asarray(component, dtype=complex), power))
            result = P.polyadd(result, term)
        return np.asarray(result, dtype=complex)


def trim(coefficients: np.ndarray, tolerance: float = 0.0) -> np.ndarray:
    """Drop trailing coefficients with modulus <= tolerance·max (keeps at least one)."""
    coefficients = np.asarray(coefficients, dtype=complex)
    if not coefficients.size:
        return np.zeros(1, dtype=complex)
    scale = float(np.max(np.abs(coefficients)))
    keep = np.nonzero(np.abs(coefficients) > tolerance * scale)[0]
    if not keep.size:
        return np.zeros(1, dtype=complex)
    return coefficients[: keep[-1] + 1]


def taylor_shift(coefficients: np.ndarray, w: complex) -> np.ndarray:
    """Coefficients of p(w + t) in t, by repeated synthetic division."""
    shifted = np.array(coefficients, dtype=complex)
    n = shifted.size
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            shifted[j] += w * shifted[j + 1]
    return shifted


def vanishing_order(coefficients: np.ndarray, w: complex, tolerance: float) -> int | None:
    """Order of vanishing at w, or None for the zero polynomial."""
    coefficients = np.asarray(coefficients, dtype=complex)
    scale = float(np.max(np.abs(coefficients))) if coefficients.size else 0.0
    if scale == 0.0:
        return None
    shifted = taylor_shift(coefficients, w)
    # |w| can exceed 1 slightly; normalise by the shifted scale as well
    scale = max(scale, float(np.max(np.abs(shifted))))
    for order, value in enumerate(shifted):
        if abs(value) > tolerance * scale:
            return order
    return None


def derivative(coefficients: np.ndarray) -> np.ndarray:
    return P.polyder(np.asarray(coefficients, dtype=complex))
