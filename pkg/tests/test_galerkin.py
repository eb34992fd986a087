import math
import random
from fractions import Fraction

import numpy as np
import pytest

from fredholm_bernoulli.basis import build_basis
from fredholm_bernoulli.cli import example_problem
from fredholm_bernoulli.expr import parse
from fredholm_bernoulli.galerkin import (
    GalerkinSystem,
    GeneralKernel,
    Mode,
    Problem,
    ProblemError,
    SeparableKernel,
    SingularMatrixError,
    assemble,
    lu_solve,
    residual,
    solve,
)
from fredholm_bernoulli.polyrat import Polynomial
from fredholm_bernoulli.quadrature import gauss_legendre, integrate_2d
from fredholm_bernoulli.report import uniform_points

from manufactured import WIDE_INTERVALS, make_problem, random_problem

F = Fraction
RULE = gauss_legendre(24)


def test_example_one_exact():
    s = solve(example_problem(1), 3)
    assert s.mode is Mode.EXACT
    assert s.coeffs == (1, F(10, 9), F(10, 9), 0)
    assert s.exact_monomial == Polynomial([1, 0, F(10, 9)])


def test_example_three_system():
    sys = assemble(example_problem(3), build_basis(3))
    assert lu_solve(sys) == (0, F(260, 119), F(80, 119), 0)


def test_example_two_antisymmetric_kernel():
    # k(t,x) = x^4 - t^4 is not symmetric, so the index convention matters
    s = solve(example_problem(2), 3)
    assert s.coeffs == (0, 1, 0, 0)
    assert s.exact_monomial == Polynomial([0, 1])


def test_zero_kernel_gives_gram_matrix():
    p = Problem.build((0, 1), 1, "1", "0", "x")
    sys = assemble(p, build_basis(4))
    C = sys.C
    assert C[0][0] == 1
    assert all(C[i][j] == C[j][i] for i in range(5) for j in range(5))
    basis = build_basis(4)
    assert C[2][3] == (basis[2] * basis[3]).integrate(0, 1)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_zero_kernel_reproduces_f(n):
    p = Problem.build((0, 1), 1, "1", "0", "x")
    s = solve(p, n)
    assert s.exact_monomial == Polynomial([0, 1])


def test_example_four_load_vector():
    sys = assemble(example_problem(4), build_basis(3), RULE)
    assert sys.mode is Mode.NUMERIC
    assert abs(sys.F[0] - (math.e - 1)) <= 1e-14


def test_example_four_n3_monomial():
    s = solve(example_problem(4), 3, RULE)
    expected = [-0.185387, -0.188957, -0.078167, -0.051702]
    assert np.max(np.abs(np.array(s.monomial.coeffs) - expected)) < 5e-6


def test_lu_identity():
    C = np.eye(4)
    sys = GalerkinSystem(3, C, np.array([1.0, 2.0, 3.0, 4.0]), Mode.NUMERIC)
    assert lu_solve(sys).tolist() == [1.0, 2.0, 3.0, 4.0]
    Ce = tuple(tuple(F(int(i == j)) for j in range(4)) for i in range(4))
    sys = GalerkinSystem(3, Ce, (F(1), F(2), F(3), F(4)), Mode.EXACT)
    assert lu_solve(sys) == (1, 2, 3, 4)


def test_lu_singular_duplicate_rows():
    sys = GalerkinSystem(1, np.array([[1.0, 2.0], [1.0, 2.0]]).T, np.array([1.0, 1.0]), Mode.NUMERIC)
    with pytest.raises(SingularMatrixError) as info:
        lu_solve(sys)
    assert info.value.pivot_index == 1
    assert info.value.condition_estimate > 1e12
    exact = GalerkinSystem(1, ((F(1), F(1)), (F(2), F(2))), (F(1), F(1)), Mode.EXACT)
    with pytest.raises(SingularMatrixError) as info:
        lu_solve(exact)
    assert info.value.pivot_index == 1


def test_lu_needs_pivoting():
    A = np.array([[0.0, 1.0], [1.0, 1.0]])
    sys = GalerkinSystem(1, A.T, np.array([2.0, 3.0]), Mode.NUMERIC)
    assert lu_solve(sys) == pytest.approx([1.0, 2.0])


def test_lu_numeric_against_numpy():
    rng = np.random.default_rng(5)
    for size in (1, 3, 8, 20):
        A = rng.normal(size=(size, size)) + size * np.eye(size)
        b = rng.normal(size=size)
        sys = GalerkinSystem(size - 1, A.T, b, Mode.NUMERIC)
        assert np.allclose(lu_solve(sys), np.linalg.solve(A, b), rtol=1e-12, atol=1e-12)


def test_singular_problem_characteristic_value():
    # phi - 3 int_0^1 x t phi dt = f is singular: lam = 3 is an eigenvalue
    p = Problem.build((0, 1), -3, "1", "x*t", "x")
    with pytest.raises(SingularMatrixError):
        solve(p, 2)
    with pytest.raises(SingularMatrixError):
        solve(p, 2, numeric=True)


def test_degree_bounds():
    with pytest.raises(ProblemError):
        solve(example_problem(1), -1)
    with pytest.raises(ProblemError):
        solve(example_problem(1), 65)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_exact_and_numeric_agree(k):
    p = example_problem(k)
    exact = solve(p, 3)
    approx = solve(p, 3, RULE, numeric=True)
    assert approx.mode is Mode.NUMERIC
    assert np.max(np.abs(np.array([float(c) for c in exact.coeffs]) - approx.coeffs)) <= 1e-10


@pytest.mark.parametrize("k", [1, 2, 3])
def test_residual_zero_for_exact_solutions(k):
    p = example_problem(k)
    s = solve(p, 3)
    assert residual(s, p, uniform_points(*p.interval), RULE) <= 1e-12


def test_residual_decreases_example_four():
    p = example_problem(4)
    pts = uniform_points(0, 1)
    res = [residual(solve(p, n, RULE), p, pts, RULE) for n in range(3, 7)]
    assert all(b <= a for a, b in zip(res, res[1:]))
    assert 0 < res[-1] < 1e-6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_discrete_orthogonality_exact(k):
    s = solve(example_problem(k), 5)
    assert all(d == 0 for d in s.system.defect(list(s.coeffs)))


@pytest.mark.parametrize("n", [3, 6])
def test_discrete_orthogonality_numeric(n):
    s = solve(example_problem(4), n, RULE)
    defect = s.system.defect(s.coeffs)
    assert np.linalg.norm(defect) <= 1e-10 * np.linalg.norm(s.system.F)


def test_separable_path_equals_general_path():
    sep = example_problem(1)
    gen = Problem.build(sep.interval, sep.lam, sep.a_expr, sep.kernel_expr, sep.f_expr, separable=False)
    assert isinstance(gen.kernel, GeneralKernel)
    basis = build_basis(5)
    A = assemble(sep, basis, RULE, numeric=True).C
    B = assemble(gen, basis, RULE).C
    assert np.max(np.abs(A - B)) <= 1e-11


def test_general_path_matches_integrate_2d():
    p = Problem.build((0, 1), 1, "1", "exp(x*t)", "1")
    assert isinstance(p.kernel, GeneralKernel)
    basis = build_basis(3)
    rule = gauss_legendre(16)
    sys = assemble(p, basis, rule)
    mass = (basis[1] * basis[2]).integrate(0, 1)
    D12 = integrate_2d(lambda t, x: np.exp(x * t) * basis.float_polys[1](t) * basis.float_polys[2](x), (0, 1), (0, 1), rule)
    assert abs(sys.C[1][2] - (float(mass) + D12)) <= 1e-13


def test_non_polynomial_coefficient_forces_numeric():
    p = Problem.build((0, 1), -1, "1 + 0.5*x", "x*t", "x")
    assert solve(p, 2).mode is Mode.NUMERIC
    p = Problem.build((0.0, 1.0), -1, "1", "x*t", "x")
    assert solve(p, 2).mode is Mode.NUMERIC
    p = Problem.build((0, 1), -0.5, "1", "x*t", "x")
    assert solve(p, 2).mode is Mode.NUMERIC


def test_variable_coefficient_a():
    phi = Polynomial([1, F(-1, 2), 2])
    p = make_problem(phi, Polynomial([2, 1, F(1, 3)]), F(3, 2), [(Polynomial([0, 1]), Polynomial([1, 1]))])
    assert solve(p, 2).exact_monomial == phi
    approx = solve(p, 2, RULE, numeric=True)
    assert np.allclose(approx.monomial.coeffs, [1, -0.5, 2], atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_polynomial_exactness(seed):
    rng = random.Random(seed)
    p, phi = random_problem(rng, phi_degree=4, intervals=WIDE_INTERVALS)
    for n in range(max(phi.degree, 0), 7):
        s = solve(p, n)
        assert s.mode is Mode.EXACT
        assert s.exact_monomial == phi


def test_problem_validation():
    with pytest.raises(ProblemError):
        Problem.build((1, 0), -1, "1", "x*t", "x")
    with pytest.raises(ProblemError):
        Problem.build((0, 1), -1, "t", "x*t", "x")
    with pytest.raises(ProblemError):
        Problem.build((0, 1), -1, "1", "x*t", "x", exact="x + t")
    k = SeparableKernel(((parse("t"), parse("x")),), parse("x*t"))
    with pytest.raises(ProblemError):
        Problem((0, 1), parse("1"), F(-1), k, parse("x"))


def test_kernel_evaluation_consistency():
    p = example_problem(3)
    g = Problem.build(p.interval, p.lam, p.a_expr, p.kernel_expr, p.f_expr, separable=False)
    tt, xx = np.meshgrid(np.linspace(0, 1, 7), np.linspace(0, 1, 5), indexing="ij")
    assert np.allclose(p.kernel(tt, xx), g.kernel(tt, xx), rtol=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_float_residual_relative_on_wide_intervals(seed):
    # absolute residual scales with |f| and with the basis conditioning
    # on intervals away from [0, 1]; bound it relative to max |f|
    from fredholm_bernoulli.expr import evaluate

    p, _ = random_problem(random.Random(seed), intervals=WIDE_INTERVALS)
    pts = uniform_points(*p.interval)
    s = solve(p, 4, RULE, numeric=True)
    scale = max(1.0, float(np.max(np.abs(evaluate(p.f_expr, x=np.array(pts))))))
    assert residual(s, p, pts, RULE) <= 1e-10 * scale


@pytest.mark.parametrize("n", [3, 6])
def test_example_four_against_high_precision_oracle(n):
    # monomial Galerkin system in 40-digit arithmetic; the span equals that
    # of B_0..B_n, so the approximation is the same function
    mp = pytest.importorskip("mpmath")
    with mp.workdps(40):
        mom = [mp.quad(lambda s, k=k: s ** k * mp.exp(s), [0, 1]) for k in range(n + 1)]
        A = mp.matrix(n + 1, n + 1)
        for j in range(n + 1):
            for i in range(n + 1):
                A[j, i] = mp.mpf(1) / (i + j + 1) - 2 * mom[i] * mom[j]
        c = mp.lu_solve(A, mp.matrix(mom))
        ref = [float(c[k]) for k in range(n + 1)]
    got = solve(example_problem(4), n, RULE).monomial.coeffs
    assert np.max(np.abs(np.array(got) - ref)) <= 1e-9
