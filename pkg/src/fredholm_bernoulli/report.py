"""Pointwise error tables, convergence sweeps and CSV output."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, TextIO, Union

from . import expr as ex
from .galerkin import Mode, Problem, Solution, solve
from .quadrature import QuadratureRule

__all__ = [
    "DEFAULT_EPS",
    "ErrorRow",
    "ErrorReport",
    "error_metric",
    "uniform_points",
    "evaluate_table",
    "convergence_sweep",
    "write_csv",
    "write_convergence_csv",
    "format_table",
    "approximation_rows",
]

DEFAULT_EPS = 1e-12
CSV_HEADER = ("x", "exact", "approx", "error", "error_kind")


def error_metric(exact: float, approx: float, eps: float = DEFAULT_EPS) -> tuple[float, str]:
    """``|exact - approx| / |exact|``, or the plain difference when ``|exact| < eps``.

    Returns the value and its kind, ``"relative"`` or ``"absolute"``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    diff = abs(exact - approx)
    if abs(exact) >= eps:
        return diff / abs(exact), "relative"
    return diff, "absolute"


class ErrorRow(NamedTuple):
    x: float
    exact: float
    approx: float
    error: float
    error_kind: str


@dataclass(frozen=True)
class ErrorReport:
    rows: tuple[ErrorRow, ...]
    degree: int
    mode: Mode

    @property
    def max_error(self) -> float:
        return max((r.error for r in self.rows), default=0.0)


def uniform_points(a, b, count: int = 11) -> list[float]:
    """``count`` equally spaced points from ``a`` to ``b`` inclusive."""
    if count < 2:
        return [float(a)]
    # rational spacing so that e.g. 3/10 rounds to the float 0.3
    a, b = Fraction(a), Fraction(b)
    return [float(a + (b - a) * k / (count - 1)) for k in range(count)]


def _exact_pair(s: Solution, exact_poly, x: float) -> tuple[float, float]:
    # both sides in rationals, so identical polynomials give identical floats
    xr = Fraction(x)
    return float(exact_poly(xr)), float(s.exact_monomial(xr))


def evaluate_table(
    s: Solution,
    exact: ex.Expr,
    points: Iterable[float],
    eps: float = DEFAULT_EPS,
) -> ErrorReport:
    """One row per point: exact value, approximation and error."""
    exact_poly = None
    if s.mode is Mode.EXACT and s.exact_monomial is not None:
        exact_poly = ex.detect_polynomial(exact, "x")
    rows = []
    for x in sorted(float(p) for p in points):
        if exact_poly is not None:
            ev, av = _exact_pair(s, exact_poly, x)
        else:
            try:
                ev = float(ex.evaluate(exact, x=x))
            except ex.EvaluationError as err:
                raise ex.EvaluationError(f"exact solution at x={x!r}: {err.operation}", err.operand) from err
            av = float(s.monomial(x))
        err_val, kind = error_metric(ev, av, eps)
        rows.append(ErrorRow(x, ev, av, err_val, kind))
    return ErrorReport(tuple(rows), s.degree, s.mode)


def convergence_sweep(
    p: Problem,
    degrees: Sequence[int],
    points: Sequence[float],
    rule: QuadratureRule | None = None,
    eps: float = DEFAULT_EPS,
) -> list[tuple[int, float]]:
    """``(n, max pointwise error)`` for each degree, ordered by ``n``."""
    if p.exact is None:
        raise ValueError("convergence sweep needs a problem with an exact solution")
    if not degrees:
        raise ValueError("degrees must be nonempty")
    out = []
    for n in sorted(degrees):
        report = evaluate_table(solve(p, n, rule), p.exact, points, eps)
        out.append((n, report.max_error))
    return out


def _fmt(v: float) -> str:
    return format(float(v), ".16g")


def _open_target(destination):
    if isinstance(destination, (str, os.PathLike)):
        try:
            return open(destination, "w", newline="", encoding="utf-8"), True
        except OSError as err:
            raise OSError(f"cannot write CSV to {os.fspath(destination)}: {err.strerror}") from err
    return destination, False


def _write_rows(destination, header, rows) -> None:
    fh, owned = _open_target(destination)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    except OSError as err:
        name = os.fspath(destination) if owned else getattr(fh, "name", "<stream>")
        raise OSError(f"cannot write CSV to {name}: {err}") from err
    finally:
        if owned:
            fh.close()


def write_csv(r: ErrorReport, destination: Union[str, os.PathLike, TextIO]) -> None:
    """Header ``x,exact,approx,error,error_kind``; floats to 16 significant digits."""
    _write_rows(
        destination,
        CSV_HEADER,
        ([_fmt(row.x), _fmt(row.exact), _fmt(row.approx), _fmt(row.error), row.error_kind] for row in r.rows),
    )


def write_convergence_csv(pairs: Sequence[tuple[int, float]], destination) -> None:
    _write_rows(destination, ("n", "max_error"), ([str(n), _fmt(e)] for n, e in pairs))


def format_table(r: ErrorReport, with_exact: bool = True) -> str:
    """Fixed-width text table: solutions to 10 decimals, errors to 6 digits."""
    buf = io.StringIO()
    if with_exact:
        buf.write(f"{'x':>8}  {'exact':>15}  {'approx':>15}  {'E':>13}\n")
        for row in r.rows:
            tag = "" if row.error_kind == "relative" else " (abs)"
            buf.write(f"{row.x:>8.4g}  {row.exact:>15.10f}  {row.approx:>15.10f}  {row.error:>13.5e}{tag}\n")
    else:
        buf.write(f"{'x':>8}  {'approx':>15}\n")
        for row in r.rows:
            buf.write(f"{row.x:>8.4g}  {row.approx:>15.10f}\n")
    return buf.getvalue()


def approximation_rows(s: Solution, points: Iterable[float]) -> ErrorReport:
    """Rows without an exact reference (error columns are NaN)."""
    nan = float("nan")
    return ErrorReport(
        tuple(ErrorRow(x, nan, float(s.monomial(x)), nan, "none") for x in sorted(float(p) for p in points)),
        s.degree,
        s.mode,
    )
