"""Bernoulli numbers and the shifted Bernoulli-polynomial basis.

The trial functions used by the solver are the classical Bernoulli
polynomials with their constant term removed::

    B_0 = 1,  B_1 = x,  B_2 = x^2 - x,  B_3 = x^3 - 3/2 x^2 + 1/2 x, ...

so that ``B_m(0) = 0`` for ``m >= 1`` and ``B_m(1) = 0`` for ``m >= 2``.
Two independent constructions are provided (an explicit double sum and
the binomial expansion over Bernoulli numbers) and :func:`build_basis`
checks that they agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .polyrat import Polynomial

__all__ = [
    "BasisConsistencyError",
    "BernoulliNumbers",
    "BernoulliBasis",
    "pascal_row",
    "bernoulli_numbers",
    "basis_explicit",
    "basis_implicit",
    "build_basis",
]


class BasisConsistencyError(RuntimeError):
    """The two basis constructions disagree (an implementation bug)."""


@lru_cache(maxsize=None)
def pascal_row(n: int) -> tuple[int, ...]:
    """Binomial coefficients ``C(n, 0..n)`` via Pascal's rule."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return (1,)
    prev = pascal_row(n - 1)
    return (1,) + tuple(prev[k - 1] + prev[k] for k in range(1, n)) + (1,)


def _binom(n: int, k: int) -> int:
    return pascal_row(n)[k]


@dataclass(frozen=True)
class BernoulliNumbers:
    values: tuple[Fraction, ...]

    @property
    def kmax(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


def bernoulli_numbers(kmax: int) -> BernoulliNumbers:
    """Exact ``b_0 .. b_kmax`` with the ``b_1 = -1/2`` convention.

    Uses ``sum_{j=0}^{k} C(k+1, j) b_j = 0`` solved for ``b_k``.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    b = [Fraction(1)]
    for k in range(1, kmax + 1):
        row = pascal_row(k + 1)
        s = sum((row[j] * b[j] for j in range(k)), Fraction(0))
        b.append(-s / row[k])
    return BernoulliNumbers(tuple(b))


def _shift_power(k: int, m: int) -> Polynomial:
    """``(x + k)^m`` expanded exactly."""
    row = pascal_row(m)
    return Polynomial([row[j] * k ** (m - j) for j in range(m + 1)])


def basis_explicit(m: int) -> Polynomial:
    """Shifted Bernoulli polynomial from the explicit double sum.

    ``sum_{n=0}^{m} 1/(n+1) sum_{k=0}^{n} (-1)^k C(n,k) (x+k)^m``, minus
    the same sum at ``x = 0``.  ``m = 0`` gives the constant 1.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return Polynomial((1,))
    total = Polynomial.zero()
    powers = [_shift_power(k, m) for k in range(m + 1)]
    for n in range(m + 1):
        row = pascal_row(n)
        inner = Polynomial.zero()
        for k in range(n + 1):
            term = powers[k] * row[k]
            inner = inner - term if k % 2 else inner + term
        total = total + inner * Fraction(1, n + 1)
    return total - total[0]


def basis_implicit(m: int, b: BernoulliNumbers) -> Polynomial:
    """Binomial expansion ``sum_k C(m,k) b_k x^(m-k)`` minus its constant ``b_m``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return Polynomial((1,))
    if b.kmax < m:
        raise ValueError(f"Bernoulli numbers cover 0..{b.kmax}, need 0..{m}")
    coeffs = [Fraction(0)] * (m + 1)
    for k in range(m):
        coeffs[m - k] = _binom(m, k) * b[k]
    return Polynomial(coeffs)


@dataclass(frozen=True)
class BernoulliBasis:
    """Basis ``B_0 .. B_n``, exact rational coefficients."""

    degree: int
    polys: tuple[Polynomial, ...]
    _float_polys: tuple[Polynomial, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.polys) != self.degree + 1:
            raise ValueError("basis must hold degree + 1 polynomials")
        object.__setattr__(self, "_float_polys", tuple(p.to_float() for p in self.polys))

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, i: int) -> Polynomial:
        return self.polys[i]

    def __iter__(self):
        return iter(self.polys)

    @property
    def float_polys(self) -> tuple[Polynomial, ...]:
        return self._float_polys

    def values(self, x: np.ndarray) -> np.ndarray:
        """Matrix ``V[i, k] = B_i(x_k)`` in floating point."""
        x = np.asarray(x, dtype=float)
        return np.array([p(x) for p in self._float_polys]).reshape(len(self), *x.shape)

    def change_of_basis(self) -> list[list[Fraction]]:
        """``M[k][i]`` = coefficient of ``x^k`` in ``B_i`` (upper triangular)."""
        n = self.degree
        return [[self.polys[i][k] for i in range(n + 1)] for k in range(n + 1)]

    def combine(self, coeffs) -> Polynomial:
        """Monomial form of ``sum_i coeffs[i] * B_i``.

        Exact coefficients give an exact polynomial; floats give a float one.
        """
        if len(coeffs) != len(self):
            raise ValueError("need one coefficient per basis function")
        exact = all(isinstance(c, (int, Fraction)) for c in coeffs)
        polys = self.polys if exact else self._float_polys
        out = Polynomial.zero(exact)
        for c, p in zip(coeffs, polys):
            out = out + p * (c if exact else float(c))
        return out


def build_basis(n: int) -> BernoulliBasis:
    """Basis of degree ``n``, cross-checked between both constructions."""
    if n < 0:
        raise ValueError("basis degree must be nonnegative")
    b = bernoulli_numbers(n)
    polys = []
    for i in range(n + 1):
        p = basis_explicit(i)
        q = basis_implicit(i, b)
        if p != q:
            raise BasisConsistencyError(f"B_{i}: explicit {p!r} != implicit {q!r}")
        polys.append(p)
    return BernoulliBasis(n, tuple(polys))
