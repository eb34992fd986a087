"""Exact rational numbers and dense univariate polynomials.

Rationals are :class:`fractions.Fraction` (arbitrary precision, always
reduced, positive denominator).  A :class:`Polynomial` stores its
coefficients in ascending degree order and is either *exact* (every
coefficient a ``Fraction``) or *float* (every coefficient a Python
``float``).  The two modes never mix implicitly; use
:meth:`Polynomial.to_float` to leave the exact world.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Union

import numpy as np

Rational = Fraction
Scalar = Union[int, Fraction, float]

__all__ = [
    "Rational",
    "Polynomial",
    "poly_add",
    "poly_mul",
    "poly_eval",
    "poly_integrate",
]


def _is_exact_scalar(c) -> bool:
    return isinstance(c, _RationalABC) and not isinstance(c, bool)


class Polynomial:
    """Immutable dense polynomial ``c[0] + c[1] x + ... + c[d] x^d``.

    The zero polynomial has an empty coefficient tuple.  Trailing zeros
    are always stripped, so two polynomials are equal exactly when their
    coefficient tuples (and modes) are equal.

    Parameters
    ----------
    coeffs : iterable of int, Fraction or float
        Ascending-degree coefficients.  Integers and Fractions give an
        exact polynomial; integers and floats give a float polynomial.
        Supplying both Fractions and floats is an error.
    exact : bool, optional
        Force the mode.  Needed only for the zero polynomial or an
        all-integer float polynomial; ``exact=True`` with float
        coefficients is rejected.
    """

    __slots__ = ("_coeffs", "_exact")

    def __init__(self, coeffs: Iterable[Scalar] = (), exact: bool | None = None):
        raw = list(coeffs)
        has_float = any(isinstance(c, (float, np.floating)) for c in raw)
        has_frac = any(isinstance(c, Fraction) for c in raw)
        for c in raw:
            if not (_is_exact_scalar(c) or isinstance(c, (float, np.floating))):
                raise TypeError(f"unsupported coefficient type {type(c).__name__}")
        if has_float and has_frac:
            raise TypeError("cannot mix Fraction and float coefficients; convert explicitly")
        if exact is None:
            exact = not has_float
        if exact:
            if has_float:
                raise TypeError("float coefficients cannot form an exact polynomial")
            vals = [Fraction(c) for c in raw]
        else:
            vals = [float(c) for c in raw]
        while vals and vals[-1] == 0:
            vals.pop()
        self._coeffs = tuple(vals)
        self._exact = exact

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, exact: bool = True) -> "Polynomial":
        return cls((), exact=exact)

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Polynomial":
        if degree < 0:
            raise ValueError("monomial degree must be nonnegative")
        return cls([0] * degree + [c], exact=_is_exact_scalar(c))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    # basic properties -----------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def leading(self) -> Scalar:
        return self._coeffs[-1] if self._coeffs else (Fraction(0) if self._exact else 0.0)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, k: int) -> Scalar:
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        if k < 0:
            raise IndexError(k)
        return Fraction(0) if self._exact else 0.0

    def to_float(self) -> "Polynomial":
        """Rational to float conversion (identity on float polynomials)."""
        if not self._exact:
            return self
        return Polynomial([float(c) for c in self._coeffs], exact=False)

    # arithmetic -----------------------------------------------------------

    def _check_mode(self, other: "Polynomial") -> None:
        if self._exact != other._exact:
            raise TypeError("cannot combine exact and float polynomials; use to_float()")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_mode(other)
            return other
        if _is_exact_scalar(other):
            return Polynomial((other,), exact=self._exact)
        if isinstance(other, (float, np.floating)):
            if self._exact:
                raise TypeError("cannot combine an exact polynomial with a float scalar")
            return Polynomial((other,), exact=False)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Polynomial(out, exact=self._exact)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self._coeffs], exact=self._exact)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._coeffs, other._coeffs
        if not a or not b:
            return Polynomial.zero(self._exact)
        zero = Fraction(0) if self._exact else 0.0
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Polynomial(out, exact=self._exact)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero scalar only."""
        if isinstance(other, Polynomial):
            raise TypeError("polynomial division is not supported")
        if other == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        if self._exact:
            if not _is_exact_scalar(other):
                raise TypeError("cannot divide an exact polynomial by a float")
            inv = 1 / Fraction(other)
        else:
            inv = 1.0 / float(other)
        return self * inv

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial power must be a nonnegative integer")
        result = Polynomial((1,), exact=self._exact)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._exact == other._exact and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._exact, self._coeffs))

    # calculus / evaluation -------------------------------------------------

    def __call__(self, x):
        """Horner evaluation.  Works for scalars and numpy arrays."""
        if not self._coeffs:
            if isinstance(x, np.ndarray):
                return np.zeros_like(x, dtype=float)
            return Fraction(0) if self._exact and _is_exact_scalar(x) else 0.0
        acc = self._coeffs[-1]
        for c in reversed(self._coeffs[:-1]):
            acc = acc * x + c
        if isinstance(x, np.ndarray) and np.ndim(acc) == 0:
            acc = np.full_like(x, acc, dtype=float)
        return acc

    def antiderivative(self) -> "Polynomial":
        """Antiderivative with zero constant term."""
        if self._exact:
            out = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(self._coeffs)]
        else:
            out = [0.0] + [c / (k + 1) for k, c in enumerate(self._coeffs)]
        return Polynomial(out, exact=self._exact)

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self._coeffs)][1:], exact=self._exact)

    def integrate(self, a: Scalar, b: Scalar) -> Scalar:
        """Signed definite integral over ``[a, b]``."""
        big = self.antiderivative()
        return big(b) - big(a)

    # display ----------------------------------------------------------------

    def format(self, var: str = "x") -> str:
        """Ascending-degree text such as ``1 + 10/9*x^2``."""
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            neg = c < 0
            mag = -c if neg else c
            if self._exact:
                num = str(mag)
            else:
                num = repr(mag)
            if k == 0:
                body = num
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{num}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        mode = "exact" if self._exact else "float"
        return f"Polynomial([{', '.join(str(c) for c in self._coeffs)}], {mode})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_eval(p: Polynomial, x: Scalar) -> Scalar:
    return p(x)


def poly_integrate(p: Polynomial, a: Scalar, b: Scalar) -> Scalar:
    return p.integrate(a, b)
