"""Polynomials, dense square matrices, and the Perron stochastic normalization.

Everything downstream works with two objects: a polynomial stored as a dense
coefficient vector indexed by degree, and a positive matrix factored as
A = rho * D S D^{-1} with S positive row-stochastic. The factorization is the
reduction that lets membership searches range over (rho, S) only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class NonPositiveInput(ValueError):
    """Raised when a strictly positive matrix is required but not supplied."""


class NoConvergence(RuntimeError):
    """Raised when power iteration fails to reach the residual target."""


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial; coeffs[d] is the coefficient of x^d.

    Stored length is always >= 1. Trailing zeros are permitted; degree()
    reports the last nonzero index (-1 for the zero polynomial).
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        cs = tuple(float(c) for c in coeffs)
        if not cs:
            cs = (0.0,)
        object.__setattr__(self, "coeffs", cs)

    def degree(self) -> int:
        for d in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[d] != 0.0:
                return d
        return -1

    def is_zero(self) -> bool:
        return self.degree() == -1

    def trimmed(self) -> "Polynomial":
        d = self.degree()
        return Polynomial(self.coeffs[: d + 1] if d >= 0 else (0.0,))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0.0] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return Polynomial(out)

    def scale(self, a: float) -> "Polynomial":
        return Polynomial(a * c for c in self.coeffs)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial((0.0,))
        prod = np.convolve(np.asarray(self.coeffs), np.asarray(other.coeffs))
        return Polynomial(prod)

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial((0.0,))
        return Polynomial(d * c for d, c in enumerate(self.coeffs) if d >= 1)

    def to_list(self) -> list[float]:
        """JSON text form: plain list of coefficients, lowest degree first."""
        return list(self.coeffs)

    @staticmethod
    def from_list(values: Sequence[float]) -> "Polynomial":
        return Polynomial(values)


@dataclass(frozen=True)
class StochasticDecomposition:
    """Factorization A = rho * diag(d) @ s @ diag(d)^{-1}.

    rho is the dominant eigenvalue, s is positive row-stochastic (rows sum to
    one within 1e-12), d is the positive right eigenvector of A.
    """

    rho: float
    s: np.ndarray
    d: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.rho * (self.d[:, None] * self.s) / self.d[None, :]


def eval_scalar(p: Polynomial, x: float) -> float:
    """Evaluate p at a scalar in Horner order."""
    acc = 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def eval_matrix(p: Polynomial, a: np.ndarray) -> np.ndarray:
    """Evaluate p at a square matrix, a^0 = identity, Horner order."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    assert a.shape == (n, n)
    acc = np.zeros((n, n))
    eye = np.eye(n)
    for c in reversed(p.coeffs):
        acc = acc @ a
        if c != 0.0:
            acc = acc + c * eye
    return acc


def min_entry(m: np.ndarray) -> tuple[float, int, int]:
    """Smallest entry and its first position in row-major order."""
    m = np.asarray(m, dtype=float)
    flat = int(np.argmin(m))
    i, j = divmod(flat, m.shape[1])
    return float(m[i, j]), i, j


# Residual target for the Perron pair; row sums of s inherit this bound.
_PERRON_TOL = 1e-12


def perron_normalize(a: np.ndarray) -> StochasticDecomposition:
    """Factor a positive matrix as rho * D S D^{-1} with S row-stochastic.

    Power iteration from the all-ones vector; positivity guarantees
    convergence to the dominant pair. The iteration cap is 100 * n.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or not np.all(np.isfinite(a)):
        raise ValueError("square matrix with finite entries required")
    if np.any(a <= 0.0):
        raise NonPositiveInput("all entries must be strictly positive")
    if n == 1:
        rho = float(a[0, 0])
        return StochasticDecomposition(rho, np.array([[1.0]]), np.array([1.0]))
    v = np.ones(n)
    for _ in range(100 * n):
        w = a @ v
        ratios = w / v
        hi = float(ratios.max())
        lo = float(ratios.min())
        if hi - lo <= _PERRON_TOL * hi:
            rho = 0.5 * (hi + lo)
            d = v
            s = (a * d[None, :]) / (rho * d[:, None])
            return StochasticDecomposition(rho, s, d)
        v = w / w.sum()
    raise NoConvergence("power iteration did not reach the residual target")


def sample_stochastic(n: int, rng: np.random.Generator,
                      concentration: float = 1.0) -> np.ndarray:
    """Random positive row-stochastic matrix, rows ~ symmetric Dirichlet.

    Entries are clamped below at 1e-12 and rows renormalized, so every
    output is strictly positive with unit row sums.
    """
    assert n >= 1
    if n == 1:
        return np.array([[1.0]])
    rows = rng.dirichlet(np.full(n, concentration), size=n)
    rows = np.clip(rows, 1e-12, None)
    return rows / rows.sum(axis=1, keepdims=True)
