"""Galerkin discretisation of ``a(x) phi(x) + lam * int_a^b k(t,x) phi(t) dt = f(x)``.

The unknown is expanded as ``phi ~ sum_i c_i B_i`` in the Bernoulli
basis and the residual is made orthogonal to every ``B_j``.  This gives

    sum_i c_i C[i][j] = F[j],        j = 0..n

with ``C[i][j] = int a B_i B_j dx + lam * int int k(t,x) B_i(t) B_j(x) dt dx``
and ``F[j] = int B_j f dx``.  When every input is a rational polynomial
and the kernel splits into ``sum_p g_p(x) h_p(t)``, the whole chain runs
in exact rational arithmetic; otherwise Gauss-Legendre quadrature is used.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import expr as ex
from .basis import BernoulliBasis, build_basis
from .polyrat import Polynomial
from .quadrature import QuadratureRule, gauss_legendre

__all__ = [
    "MAX_DEGREE",
    "PIVOT_RTOL",
    "Mode",
    "ProblemError",
    "SingularMatrixError",
    "SeparableKernel",
    "GeneralKernel",
    "Problem",
    "GalerkinSystem",
    "Solution",
    "assemble",
    "lu_solve",
    "solve",
    "residual",
]

MAX_DEGREE = 64
PIVOT_RTOL = 1e-12

Number = Union[int, Fraction, float]


class Mode(str, enum.Enum):
    EXACT = "exact"
    NUMERIC = "numeric"

    def __str__(self) -> str:
        return self.value


class ProblemError(ValueError):
    """Invalid problem data (interval, variable usage, degree)."""


class SingularMatrixError(ArithmeticError):
    def __init__(self, pivot_index: int, condition_estimate: float):
        self.pivot_index = pivot_index
        self.condition_estimate = condition_estimate
        super().__init__(
            f"singular matrix: pivot {pivot_index} vanishes "
            f"(condition estimate {condition_estimate:.3g})"
        )


# --------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class SeparableKernel:
    """``k(t, x) = sum_p g_p(x) * h_p(t)``."""

    terms: tuple[tuple[ex.Expr, ex.Expr], ...]
    source: ex.Expr

    def __call__(self, t, x):
        total = 0.0
        for g, h in self.terms:
            total = total + ex.evaluate(g, x=x) * ex.evaluate(h, t=t)
        return total


@dataclass(frozen=True)
class GeneralKernel:
    source: ex.Expr

    def __call__(self, t, x):
        return ex.evaluate(self.source, x=x, t=t)


Kernel = Union[SeparableKernel, GeneralKernel]


def _as_expr(value) -> ex.Expr:
    return ex.parse(value) if isinstance(value, str) else value


def _as_number(value) -> Number:
    if isinstance(value, bool):
        raise ProblemError("boolean is not a number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise ProblemError(f"expected a number, got {value!r}")


def _only(e: ex.Expr, allowed: set, what: str) -> None:
    extra = ex.free_vars(e) - allowed
    if extra:
        names = ", ".join(sorted(extra))
        raise ProblemError(f"{what} may only use {', '.join(sorted(allowed)) or 'no variables'}; found {names}")


@dataclass(frozen=True)
class Problem:
    """One Fredholm equation of the second kind.

    Use :meth:`build` to construct one from text or expression trees;
    the kernel is split into separable terms when possible.
    """

    interval: tuple[Number, Number]
    a_expr: ex.Expr
    lam: Number
    kernel: Kernel
    f_expr: ex.Expr
    exact: ex.Expr | None = None

    def __post_init__(self):
        lo, hi = self.interval
        if not float(lo) < float(hi):
            raise ProblemError(f"interval must satisfy a < b, got [{lo}, {hi}]")
        _only(self.a_expr, {"x"}, "a(x)")
        _only(self.f_expr, {"x"}, "f(x)")
        if self.exact is not None:
            _only(self.exact, {"x"}, "exact solution")
        if isinstance(self.kernel, SeparableKernel):
            for g, h in self.kernel.terms:
                _only(g, {"x"}, "separable kernel factor g(x)")
                _only(h, {"t"}, "separable kernel factor h(t)")
        else:
            _only(self.kernel.source, {"t", "x"}, "kernel")

    @classmethod
    def build(cls, interval, lam, a, kernel, f, exact=None, separable: bool = True) -> "Problem":
        """Problem from strings or expression trees.

        ``separable=False`` keeps the kernel as a general two-variable
        expression even when it would split.
        """
        lo, hi = (_as_number(v) for v in interval)
        kernel_expr = _as_expr(kernel)
        terms = ex.detect_separable(kernel_expr) if separable else None
        if terms is not None:
            k: Kernel = SeparableKernel(tuple(terms), kernel_expr)
        else:
            k = GeneralKernel(kernel_expr)
        return cls(
            interval=(lo, hi),
            a_expr=_as_expr(a),
            lam=_as_number(lam),
            kernel=k,
            f_expr=_as_expr(f),
            exact=None if exact is None else _as_expr(exact),
        )

    @property
    def kernel_expr(self) -> ex.Expr:
        return self.kernel.source

    def exact_data(self):
        """Rational polynomial data for the exact path, or ``None``."""
        lo, hi = self.interval
        if not (isinstance(lo, Fraction) and isinstance(hi, Fraction) and isinstance(self.lam, Fraction)):
            return None
        if not isinstance(self.kernel, SeparableKernel):
            return None
        a_poly = ex.detect_polynomial(self.a_expr, "x")
        f_poly = ex.detect_polynomial(self.f_expr, "x")
        if a_poly is None or f_poly is None:
            return None
        terms = []
        for g, h in self.kernel.terms:
            gp = ex.detect_polynomial(g, "x")
            hp = ex.detect_polynomial(h, "t")
            if gp is None or hp is None:
                return None
            terms.append((gp, hp))
        return a_poly, f_poly, terms


# --------------------------------------------------------------------------
# linear system


@dataclass(frozen=True)
class GalerkinSystem:
    """Galerkin matrix and load vector.

    ``C[i][j]`` follows the trial-index-first convention of
    ``sum_i c_i C[i][j] = F[j]``; :meth:`matrix` returns the equation-major
    form ``A`` with ``A[j][i] = C[i][j]`` so that ``A @ c = F``.
    """

    n: int
    C: object  # tuple of tuples of Fraction (exact) or ndarray (numeric)
    F: object
    mode: Mode

    def matrix(self):
        if self.mode is Mode.EXACT:
            size = self.n + 1
            return [[self.C[i][j] for i in range(size)] for j in range(size)]
        return np.asarray(self.C).T.copy()

    def rhs(self):
        return list(self.F) if self.mode is Mode.EXACT else np.asarray(self.F, dtype=float).copy()

    def defect(self, coeffs):
        """``A @ coeffs - F`` in the system's own arithmetic."""
        if self.mode is Mode.EXACT:
            A = self.matrix()
            return [sum((A[j][i] * coeffs[i] for i in range(self.n + 1)), Fraction(0)) - self.F[j]
                    for j in range(self.n + 1)]
        return self.matrix() @ np.asarray(coeffs, dtype=float) - np.asarray(self.F)


def _assemble_exact(p: Problem, basis: BernoulliBasis, data) -> GalerkinSystem:
    a_poly, f_poly, terms = data
    lo, hi = p.interval
    B = basis.polys
    size = len(B)
    # B_i * B_j once for each unordered pair
    mass = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        aBi = a_poly * B[i]
        for j in range(i, size):
            mass[i][j] = mass[j][i] = (aBi * B[j]).integrate(lo, hi)
    h_int = [[(hp * B[i]).integrate(lo, hi) for i in range(size)] for _, hp in terms]
    g_int = [[(gp * B[j]).integrate(lo, hi) for j in range(size)] for gp, _ in terms]
    C = tuple(
        tuple(
            mass[i][j] + p.lam * sum((hv[i] * gv[j] for hv, gv in zip(h_int, g_int)), Fraction(0))
            for j in range(size)
        )
        for i in range(size)
    )
    F = tuple((f_poly * B[j]).integrate(lo, hi) for j in range(size))
    return GalerkinSystem(basis.degree, C, F, Mode.EXACT)


def _assemble_numeric(p: Problem, basis: BernoulliBasis, rule: QuadratureRule) -> GalerkinSystem:
    lo, hi = float(p.interval[0]), float(p.interval[1])
    x, w = rule.mapped(lo, hi)
    V = basis.values(x)  # V[i, k] = B_i(x_k)
    Vw = V * w
    a_vals = np.broadcast_to(ex.evaluate(p.a_expr, x=x), x.shape)
    mass = (Vw * a_vals) @ V.T
    lam = float(p.lam)
    if isinstance(p.kernel, SeparableKernel):
        D = np.zeros_like(mass)
        for g, h in p.kernel.terms:
            g_vals = np.broadcast_to(ex.evaluate(g, x=x), x.shape)
            h_vals = np.broadcast_to(ex.evaluate(h, t=x), x.shape)
            D += np.outer(Vw @ h_vals, Vw @ g_vals)
    else:
        # K[k, l] = k(t_k, x_l)
        K = np.broadcast_to(p.kernel(x[:, None], x[None, :]), (x.size, x.size))
        D = Vw @ K @ Vw.T
    C = mass + lam * D
    f_vals = np.broadcast_to(ex.evaluate(p.f_expr, x=x), x.shape)
    F = Vw @ f_vals
    if not (np.all(np.isfinite(C)) and np.all(np.isfinite(F))):
        raise ex.EvaluationError("assembly", "non-finite Galerkin entry")
    C.setflags(write=False)
    F.setflags(write=False)
    return GalerkinSystem(basis.degree, C, F, Mode.NUMERIC)


def assemble(
    p: Problem,
    basis: BernoulliBasis,
    rule: QuadratureRule | None = None,
    numeric: bool = False,
) -> GalerkinSystem:
    """Build the Galerkin system for ``p`` on ``basis``.

    The exact rational path is taken automatically when the problem
    allows it, unless ``numeric`` is set.
    """
    data = None if numeric else p.exact_data()
    if data is not None:
        return _assemble_exact(p, basis, data)
    return _assemble_numeric(p, basis, rule or gauss_legendre())


def _lu_exact(A: list, b: list) -> tuple[Fraction, ...]:
    size = len(b)
    A = [row[:] for row in A]
    b = b[:]
    for k in range(size):
        piv = next((r for r in range(k, size) if A[r][k] != 0), None)
        if piv is None:
            raise SingularMatrixError(k, float("inf"))
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            b[k], b[piv] = b[piv], b[k]
        for r in range(k + 1, size):
            if A[r][k] == 0:
                continue
            m = A[r][k] / A[k][k]
            for c in range(k + 1, size):
                A[r][c] -= m * A[k][c]
            A[r][k] = Fraction(0)
            b[r] -= m * b[k]
    out = [Fraction(0)] * size
    for k in range(size - 1, -1, -1):
        s = b[k] - sum((A[k][c] * out[c] for c in range(k + 1, size)), Fraction(0))
        out[k] = s / A[k][k]
    return tuple(out)


def _condition_estimate(A: np.ndarray) -> float:
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore")
        try:
            return float(np.linalg.cond(A, 1))
        except np.linalg.LinAlgError:
            return float("inf")


def _lu_numeric(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    A0 = A
    A = A.astype(float).copy()
    b = b.astype(float).copy()
    size = b.size
    scale = float(np.max(np.sum(np.abs(A), axis=1))) if size else 0.0
    tol = PIVOT_RTOL * scale
    for k in range(size):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if not abs(A[piv, k]) > tol:
            raise SingularMatrixError(k, _condition_estimate(A0))
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            b[[k, piv]] = b[[piv, k]]
        m = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(m, A[k, k:])
        b[k + 1:] -= m * b[k]
    out = np.zeros(size)
    for k in range(size - 1, -1, -1):
        out[k] = (b[k] - A[k, k + 1:] @ out[k + 1:]) / A[k, k]
    return out


def lu_solve(sys: GalerkinSystem):
    """Coefficients ``c`` with ``sum_i c_i C[i][j] = F[j]``.

    Exact systems use rational Gaussian elimination; numeric ones use LU
    with partial pivoting and declare singularity when a pivot falls
    below ``1e-12`` times the largest row norm.
    """
    if sys.mode is Mode.EXACT:
        return _lu_exact(sys.matrix(), sys.rhs())
    return _lu_numeric(sys.matrix(), sys.rhs())


# --------------------------------------------------------------------------
# solutions


@dataclass(frozen=True)
class Solution:
    coeffs: tuple
    basis: BernoulliBasis
    monomial: Polynomial
    mode: Mode
    exact_monomial: Polynomial | None = None
    system: GalerkinSystem | None = field(default=None, repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.basis.degree

    def __call__(self, x):
        return self.monomial(x)


def solve(
    p: Problem,
    n: int,
    rule: QuadratureRule | None = None,
    numeric: bool = False,
) -> Solution:
    """Solve ``p`` with the basis ``B_0..B_n``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ProblemError("basis degree must be an integer")
    if not 0 <= n <= MAX_DEGREE:
        raise ProblemError(f"basis degree must be in 0..{MAX_DEGREE}, got {n}")
    basis = build_basis(int(n))
    sys = assemble(p, basis, rule, numeric=numeric)
    coeffs = lu_solve(sys)
    if sys.mode is Mode.EXACT:
        exact_poly = basis.combine(list(coeffs))
        return Solution(tuple(coeffs), basis, exact_poly.to_float(), sys.mode, exact_poly, sys)
    coeffs = tuple(float(c) for c in coeffs)
    return Solution(coeffs, basis, basis.combine(list(coeffs)), sys.mode, None, sys)


def residual(
    s: Solution,
    p: Problem,
    points: Sequence[float],
    rule: QuadratureRule | None = None,
) -> float:
    """``max |a phi + lam int k phi dt - f|`` over ``points``.

    The integral is evaluated by quadrature at each point.
    """
    rule = rule or gauss_legendre()
    xs = np.asarray(points, dtype=float)
    if xs.size == 0:
        return 0.0
    lo, hi = float(p.interval[0]), float(p.interval[1])
    if np.any(xs < lo) or np.any(xs > hi):
        raise ProblemError(f"residual points must lie in [{lo}, {hi}]")
    t, w = rule.mapped(lo, hi)
    K = np.broadcast_to(p.kernel(t[:, None], xs[None, :]), (t.size, xs.size))
    inner = (w * s.monomial(t)) @ K
    a_vals = ex.evaluate(p.a_expr, x=xs)
    f_vals = ex.evaluate(p.f_expr, x=xs)
    r = a_vals * s.monomial(xs) + float(p.lam) * inner - f_vals
    return float(np.max(np.abs(r)))
