"""Command-line front end.

    fredholm-bernoulli solve --problem FILE --degree N [--quad-order Q] [--points LIST] [--csv PATH]
    fredholm-bernoulli example {1,2,3,4} --degree N [...]
    fredholm-bernoulli basis --max-degree N
    fredholm-bernoulli convergence --problem FILE --degrees LO..HI [--csv PATH]

Exit codes: 0 success, 1 parse error, 2 singular system, 3 invalid
arguments, 4 evaluation error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import expr as ex
from .basis import build_basis
from .galerkin import (
    MAX_DEGREE,
    Problem,
    ProblemError,
    SingularMatrixError,
    Solution,
    solve,
)
from .quadrature import DEFAULT_ORDER, MAX_ORDER, IntegrandError, gauss_legendre
from .report import (
    approximation_rows,
    convergence_sweep,
    evaluate_table,
    format_table,
    uniform_points,
    write_convergence_csv,
    write_csv,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SINGULAR = 2
EXIT_ARGS = 3
EXIT_EVAL = 4

REQUIRED_KEYS = ("interval", "lambda", "a", "kernel", "f")
OPTIONAL_KEYS = ("exact",)

# The four reference equations, written as problem files.
EXAMPLES = {
    1: """\
# phi(x) - int_{-1}^{1} (x t + x^2 t^2) phi(t) dt = 1
interval = -1 1
lambda = -1
a = 1
kernel = x*t + x^2*t^2
f = 1
exact = 1 + (10/9)*x^2
""",
    2: """\
# phi(x) - int_{-1}^{1} (x^4 - t^4) phi(t) dt = x
interval = -1 1
lambda = -1
a = 1
kernel = x^4 - t^4
f = x
exact = x
""",
    3: """\
# phi(x) - int_0^1 (t x^2 + x t^2) phi(t) dt = x
interval = 0 1
lambda = -1
a = 1
kernel = t*x^2 + x*t^2
f = x
exact = (180/119)*x + (80/119)*x^2
""",
    4: """\
# phi(x) - int_0^1 2 e^x e^t phi(t) dt = e^x
interval = 0 1
lambda = -1
a = 1
kernel = 2*exp(x)*exp(t)
f = exp(x)
exact = exp(x)/(2 - e^2)
""",
}


class ProblemFileError(ValueError):
    """Malformed problem file; carries file name, line and column."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None, column: int | None = None):
        self.source = source
        self.line = line
        self.column = column
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


_RATIO = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_number(text: str):
    """Integer or integer ratio -> Fraction; other reals -> float."""
    text = text.strip()
    if _RATIO.fullmatch(text):
        return Fraction(text)
    value = float(text)  # ValueError for junk
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"not a finite number: {text!r}")
    return value


@dataclass
class _Entry:
    value: str
    line: int
    column: int


def parse_problem_text(text: str, source: str = "<string>") -> Problem:
    """Build a :class:`Problem` from problem-file text."""
    entries: dict[str, _Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ProblemFileError("expected 'key = value'", source, lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            raise ProblemFileError(f"unknown key {key!r}", source, lineno)
        if key in entries:
            raise ProblemFileError(f"duplicate key {key!r} (first on line {entries[key].line})", source, lineno)
        # 1-based column of the first value character
        column = len(line.split("=", 1)[0]) + 2 + (len(value) - len(value.lstrip()))
        entries[key] = _Entry(value.strip(), lineno, column)
    for key in REQUIRED_KEYS:
        if key not in entries:
            raise ProblemFileError(f"missing required key {key!r}", source)

    def expression(key: str):
        entry = entries[key]
        try:
            return ex.parse(entry.value)
        except ex.ExprSyntaxError as err:
            col = entry.column + len(entry.value.encode("utf-8")[: err.offset].decode("utf-8", "ignore"))
            raise ProblemFileError(f"in {key!r}: {err}", source, entry.line, col) from err

    iv = entries["interval"]
    parts = iv.value.split()
    if len(parts) != 2:
        raise ProblemFileError("interval needs two numbers 'a b'", source, iv.line)
    try:
        lo, hi = (parse_number(p) for p in parts)
    except ValueError as err:
        raise ProblemFileError(f"bad interval: {err}", source, iv.line) from err
    if not float(lo) < float(hi):
        raise ProblemFileError(f"interval must satisfy a < b, got {iv.value}", source, iv.line)
    lam_entry = entries["lambda"]
    try:
        lam = parse_number(lam_entry.value)
    except ValueError as err:
        raise ProblemFileError(f"bad lambda: {err}", source, lam_entry.line) from err

    exprs = {key: expression(key) for key in ("a", "kernel", "f")}
    exact = expression("exact") if "exact" in entries else None
    try:
        return Problem.build((lo, hi), lam, exprs["a"], exprs["kernel"], exprs["f"], exact)
    except ProblemError as err:
        raise ProblemFileError(str(err), source) from err


def load_problem(path) -> Problem:
    """Read and validate a problem file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ProblemFileError(f"cannot read problem file: {err.strerror}", os.fspath(path)) from err
    return parse_problem_text(text, os.fspath(path))


def _number_text(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def dump_problem(p: Problem) -> str:
    """Problem-file text for ``p``; reloads to an equivalent problem."""
    lines = [
        f"interval = {_number_text(p.interval[0])} {_number_text(p.interval[1])}",
        f"lambda = {_number_text(p.lam)}",
        f"a = {ex.to_source(p.a_expr)}",
        f"kernel = {ex.to_source(p.kernel_expr)}",
        f"f = {ex.to_source(p.f_expr)}",
    ]
    if p.exact is not None:
        lines.append(f"exact = {ex.to_source(p.exact)}")
    return "\n".join(lines) + "\n"


def example_problem(k: int) -> Problem:
    return parse_problem_text(EXAMPLES[k], f"<example {k}>")


# --------------------------------------------------------------------------
# argument handling


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _degree(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"degree must be an integer, got {text!r}")
    if not 0 <= n <= MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"degree must be in 0..{MAX_DEGREE}, got {n}")
    return n


def _quad_order(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"quadrature order must be an integer, got {text!r}")
    if not 1 <= q <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"quadrature order must be in 1..{MAX_ORDER}, got {q}")
    return q


def _points(text: str) -> list[float]:
    try:
        pts = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"points must be a comma-separated list of numbers, got {text!r}")
    if not pts:
        raise argparse.ArgumentTypeError("points list is empty")
    return pts


def _degree_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"degrees must look like LO..HI, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi or hi > MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"invalid degree range {text!r}")
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="fredholm-bernoulli",
        description="Galerkin solver for Fredholm integral equations of the second kind "
        "in a Bernoulli-polynomial basis.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solve_flags(p):
        p.add_argument("--degree", type=_degree, required=True, help="highest basis degree n")
        p.add_argument("--quad-order", type=_quad_order, default=DEFAULT_ORDER)
        p.add_argument("--points", type=_points, default=None, help="comma-separated evaluation points")
        p.add_argument("--csv", default=None, help="write the error table as CSV")

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("--problem", required=True)
    solve_flags(p_solve)

    p_ex = sub.add_parser("example", help="run one of the built-in examples")
    p_ex.add_argument("number", type=int, choices=sorted(EXAMPLES))
    solve_flags(p_ex)

    p_basis = sub.add_parser("basis", help="print the Bernoulli basis")
    p_basis.add_argument("--max-degree", type=_degree, required=True)

    p_conv = sub.add_parser("convergence", help="max error against degree")
    p_conv.add_argument("--problem", required=True)
    p_conv.add_argument("--degrees", type=_degree_range, required=True, help="LO..HI")
    p_conv.add_argument("--quad-order", type=_quad_order, default=DEFAULT_ORDER)
    p_conv.add_argument("--points", type=_points, default=None)
    p_conv.add_argument("--csv", default=None)
    return parser


def _coeff_text(c) -> str:
    return str(c) if isinstance(c, Fraction) else f"{c:.10g}"


def _print_solution(s: Solution, p: Problem, points, csv_path, out) -> None:
    print(f"mode: {s.mode}", file=out)
    print(f"degree: {s.degree}", file=out)
    print("coefficients: (" + ", ".join(_coeff_text(c) for c in s.coeffs) + ")", file=out)
    mono = s.exact_monomial if s.exact_monomial is not None else s.monomial
    print(f"phi(x) = {mono.format()}", file=out)
    print(file=out)
    if p.exact is not None:
        report = evaluate_table(s, p.exact, points)
        print(format_table(report), end="", file=out)
    else:
        report = approximation_rows(s, points)
        print(format_table(report, with_exact=False), end="", file=out)
    if csv_path:
        write_csv(report, csv_path)


def _default_points(p: Problem, points):
    return points if points is not None else uniform_points(*p.interval)


def _check_points(p: Problem, points) -> None:
    lo, hi = float(p.interval[0]), float(p.interval[1])
    bad = [x for x in points if not lo <= x <= hi]
    if bad:
        raise _ArgumentError(f"points outside [{lo}, {hi}]: {bad}")


def _run(args, out) -> int:
    if args.command == "basis":
        basis = build_basis(args.max_degree)
        for i, poly in enumerate(basis):
            print(f"B_{i}(x) = {poly.format()}", file=out)
        return EXIT_OK

    if args.command == "example":
        problem = example_problem(args.number)
    else:
        problem = load_problem(args.problem)
    points = _default_points(problem, args.points)
    _check_points(problem, points)
    rule = gauss_legendre(args.quad_order)

    if args.command == "convergence":
        if problem.exact is None:
            raise _ArgumentError("convergence needs an 'exact' entry in the problem file")
        pairs = convergence_sweep(problem, args.degrees, points, rule)
        print(f"{'n':>3}  {'max_error':>13}", file=out)
        for n, err in pairs:
            print(f"{n:>3}  {err:>13.5e}", file=out)
        if args.csv:
            write_convergence_csv(pairs, args.csv)
        return EXIT_OK

    s = solve(problem, args.degree, rule)
    _print_solution(s, problem, points, args.csv, out)
    return EXIT_OK


def run(argv=None, out=None, err=None) -> int:
    """Run the CLI and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as e:
        print(f"invalid argument: {e}", file=err)
        return EXIT_ARGS
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_ARGS
    try:
        return _run(args, out)
    except (ProblemFileError, ex.ExprSyntaxError) as e:
        print(f"parse error: {e}", file=err)
        return EXIT_PARSE
    except SingularMatrixError as e:
        print(f"singular system: {e}", file=err)
        return EXIT_SINGULAR
    except (_ArgumentError, ProblemError) as e:
        print(f"invalid argument: {e}", file=err)
        return EXIT_ARGS
    except (ex.EvaluationError, IntegrandError) as e:
        print(f"evaluation error: {e}", file=err)
        return EXIT_EVAL
    except OSError as e:
        print(f"I/O error: {e}", file=err)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
