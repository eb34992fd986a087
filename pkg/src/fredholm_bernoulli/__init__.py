"""Galerkin solution of linear Fredholm integral equations of the second kind
using a Bernoulli-polynomial basis."""

from .basis import BernoulliBasis, BernoulliNumbers, bernoulli_numbers, basis_explicit, basis_implicit, build_basis
from .expr import detect_polynomial, detect_separable, evaluate, parse
from .galerkin import (
    GalerkinSystem,
    Mode,
    Problem,
    ProblemError,
    SingularMatrixError,
    Solution,
    assemble,
    lu_solve,
    residual,
    solve,
)
from .polyrat import Polynomial, Rational, poly_add, poly_eval, poly_integrate, poly_mul
from .quadrature import QuadratureRule, gauss_legendre, integrate_1d, integrate_2d
from .report import ErrorReport, convergence_sweep, error_metric, evaluate_table, uniform_points, write_csv

__version__ = "0.1.0"
