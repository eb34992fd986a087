"""Gauss-Legendre quadrature on finite intervals and rectangles."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_ORDER",
    "MAX_ORDER",
    "QuadratureRule",
    "QuadratureError",
    "IntegrandError",
    "gauss_legendre",
    "integrate_1d",
    "integrate_2d",
]

DEFAULT_ORDER = 24
MAX_ORDER = 64

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


class QuadratureError(RuntimeError):
    """Newton iteration for the Legendre roots did not converge."""


class IntegrandError(ArithmeticError):
    """The integrand produced a non-finite value at a quadrature node."""

    def __init__(self, abscissa, value):
        self.abscissa = abscissa
        self.value = value
        super().__init__(f"integrand is not finite ({value}) at {abscissa}")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes in ``(-1, 1)`` and positive weights, ascending by node."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights transported to ``[a, b]``."""
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        return mid + half * self.nodes, half * self.weights


def _legendre(q: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``P_q(x)`` and ``P_{q-1}(x)`` from the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, q + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    return p, p_prev


def _compute_rule(q: int) -> QuadratureRule:
    if q == 1:
        nodes, weights = np.array([0.0]), np.array([2.0])
    else:
        k = np.arange(q)
        # Chebyshev points, descending
        x = np.cos(np.pi * (k + 0.5) / q)
        for _ in range(_NEWTON_MAXITER):
            p, p_prev = _legendre(q, x)
            dp = q * (x * p - p_prev) / (x * x - 1.0)
            dx = p / dp
            x = x - dx
            if np.max(np.abs(dx)) <= _NEWTON_TOL:
                break
        else:
            raise QuadratureError(f"Legendre roots of order {q} did not converge")
        p, p_prev = _legendre(q, x)
        dp = q * (x * p - p_prev) / (x * x - 1.0)
        weights = 2.0 / ((1.0 - x * x) * dp * dp)
        nodes = x[::-1]
        weights = weights[::-1]
        # enforce exact symmetry about 0
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(q, nodes, weights)


_cache: dict[int, QuadratureRule] = {}
_cache_lock = threading.Lock()


def gauss_legendre(q: int = DEFAULT_ORDER) -> QuadratureRule:
    """The ``q``-point Gauss-Legendre rule on ``[-1, 1]`` (cached).

    Exact for polynomials of degree ``2q - 1``.  ``q`` must lie in
    ``1..64``.
    """
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)):
        raise TypeError("quadrature order must be an integer")
    if not 1 <= q <= MAX_ORDER:
        raise ValueError(f"quadrature order must be in 1..{MAX_ORDER}, got {q}")
    q = int(q)
    rule = _cache.get(q)
    if rule is None:
        with _cache_lock:
            rule = _cache.get(q)
            if rule is None:
                rule = _compute_rule(q)
                _cache[q] = rule
    return rule


def _sample(f, *args) -> np.ndarray:
    shape = np.broadcast(*args).shape
    vals = np.broadcast_to(np.asarray(f(*args), dtype=float), shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = tuple(int(i[0]) for i in np.nonzero(bad))
        where = tuple(float(np.broadcast_to(a, shape)[idx]) for a in args)
        raise IntegrandError(where[0] if len(where) == 1 else where, float(vals[idx]))
    return vals


def integrate_1d(f, a: float, b: float, rule: QuadratureRule | None = None) -> float:
    """``int_a^b f(x) dx``.

    ``f`` is called once with the array of mapped nodes and must return
    an array of the same shape (or a scalar, which is broadcast).
    """
    if rule is None:
        rule = gauss_legendre()
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"integration interval must satisfy a < b, got [{a}, {b}]")
    x, w = rule.mapped(a, b)
    return float(w @ _sample(f, x))


def integrate_2d(f, t_interval, x_interval, rule: QuadratureRule | None = None) -> float:
    """Tensor-product rule for ``int int f(t, x) dt dx`` over a rectangle.

    ``f`` receives broadcastable arrays ``t`` (column) and ``x`` (row).
    """
    if rule is None:
        rule = gauss_legendre()
    (ta, tb), (xa, xb) = t_interval, x_interval
    if not (float(ta) < float(tb) and float(xa) < float(xb)):
        raise ValueError("integration rectangle must be non-degenerate")
    t, wt = rule.mapped(float(ta), float(tb))
    x, wx = rule.mapped(float(xa), float(xb))
    vals = _sample(f, t[:, None], x[None, :])
    return float(wt @ vals @ wx)
