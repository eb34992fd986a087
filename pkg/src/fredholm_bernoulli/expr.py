"""Small math-expression language for coefficients, kernels and data.

Grammar, lowest precedence first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?            # right associative
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Variables are ``x`` and ``t``; constants ``pi`` and ``e``; functions
``exp sin cos tan log sqrt abs``.  Implicit multiplication is not
accepted.  Evaluation works on floats and numpy arrays alike.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .polyrat import Polynomial

__all__ = [
    "Expr",
    "Number",
    "Var",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "ExprSyntaxError",
    "UnknownIdentifierError",
    "UnbalancedParenError",
    "EvaluationError",
    "parse",
    "evaluate",
    "to_source",
    "free_vars",
    "detect_polynomial",
    "detect_separable",
    "from_polynomial",
    "VARIABLES",
    "FUNCTIONS",
    "CONSTANTS",
]

VARIABLES = ("x", "t")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("exp", "sin", "cos", "tan", "log", "sqrt", "abs")


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Number:
    """Literal.  Integer literals hold a Fraction; decimals hold a float."""

    value: Union[Fraction, float]


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise UnknownIdentifierError(self.name, 0)


@dataclass(frozen=True)
class Const:
    name: str

    def __post_init__(self):
        if self.name not in CONSTANTS:
            raise UnknownIdentifierError(self.name, 0)


@dataclass(frozen=True)
class Neg:
    child: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in "+-*/^" or len(self.op) != 1:
            raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise UnknownIdentifierError(self.fn, 0)


Expr = Union[Number, Var, Const, Neg, BinOp, Call]


# --------------------------------------------------------------------------
# errors


class ExprSyntaxError(ValueError):
    """Malformed expression; ``offset`` is a byte offset into the source."""

    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        self.message = message
        text = f"{message} at offset {offset}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)


class UnbalancedParenError(ExprSyntaxError):
    pass


class EvaluationError(ArithmeticError):
    """Non-finite result; names the operation and offending operand."""

    def __init__(self, operation: str, operand):
        self.operation = operation
        self.operand = operand
        super().__init__(f"{operation} produced a non-finite value for operand {operand}")


# --------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, name, op, end
    text: str
    offset: int


def _tokenize(src: str) -> list[_Tok]:
    data = src.encode("utf-8")
    toks = []
    pos = 0  # byte offset
    char_pos = 0
    while char_pos < len(src):
        m = _TOKEN.match(src, char_pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[char_pos]!r}", pos)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, text, pos))
        pos += len(text.encode("utf-8"))
        char_pos = m.end()
    toks.append(_Tok("end", "", len(data)))
    return toks


def _literal(text: str) -> Number:
    if re.fullmatch(r"\d+", text):
        return Number(Fraction(int(text)))
    return Number(float(text))


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> Expr:
        node = self.expr()
        t = self.tok
        if t.kind != "end":
            if t.text == ")":
                raise UnbalancedParenError("unmatched ')'", t.offset)
            raise ExprSyntaxError(f"unexpected {t.text!r}", t.offset, "operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return _literal(t.text)
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    raise ExprSyntaxError(f"function {t.text!r} needs an argument", self.tok.offset, "'('")
                open_tok = self.advance()
                arg = self.expr()
                self.close(open_tok)
                return Call(t.text, arg)
            if t.text in VARIABLES:
                return Var(t.text)
            if t.text in CONSTANTS:
                return Const(t.text)
            raise UnknownIdentifierError(t.text, t.offset)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.close(t)
            return node
        if t.kind == "end":
            raise ExprSyntaxError("unexpected end of input", t.offset, "number, variable, function or '('")
        if t.text == ")":
            raise UnbalancedParenError("unmatched ')'", t.offset)
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.offset, "number, variable, function or '('")

    def close(self, open_tok: _Tok) -> None:
        t = self.tok
        if t.kind == "op" and t.text == ")":
            self.advance()
            return
        if t.kind == "end":
            raise UnbalancedParenError(f"'(' at offset {open_tok.offset} is never closed", t.offset, "')'")
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.offset, "')'")


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0, "an expression")
    return _Parser(src).parse()


# --------------------------------------------------------------------------
# evaluation

_UFUNCS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def _first_bad(operand, result):
    bad = ~np.isfinite(result)
    if np.ndim(bad) == 0:
        return operand if bad else None
    if not bad.any():
        return None
    idx = np.argmax(bad.ravel())
    return np.broadcast_to(operand, np.shape(result)).ravel()[idx]


def _check(operation: str, operand, result):
    bad = _first_bad(operand, result)
    if bad is not None:
        raise EvaluationError(operation, float(bad) if np.ndim(bad) == 0 else bad)
    return result


def _eval(e: Expr, x, t):
    if isinstance(e, Number):
        return float(e.value)
    if isinstance(e, Var):
        return x if e.name == "x" else t
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.child, x, t)
    if isinstance(e, Call):
        arg = _eval(e.arg, x, t)
        domain_bad = None
        if e.fn == "log":
            domain_bad = np.less_equal(arg, 0)
        elif e.fn == "sqrt":
            domain_bad = np.less(arg, 0)
        if domain_bad is not None and np.any(domain_bad):
            raise EvaluationError(e.fn, _pick(arg, domain_bad))
        return _check(e.fn, arg, _UFUNCS[e.fn](arg))
    left = _eval(e.left, x, t)
    right = _eval(e.right, x, t)
    op = e.op
    if op == "+":
        return _check("+", left, left + right)
    if op == "-":
        return _check("-", left, left - right)
    if op == "*":
        return _check("*", left, left * right)
    if op == "/":
        zero = np.equal(right, 0)
        if np.any(zero):
            raise EvaluationError("division", _pick(left, zero))
        return _check("/", right, np.divide(left, right))
    # op == "^"; numpy gives 0**0 == 1
    return _check("^", left, np.power(np.asarray(left, dtype=float), right))


def _pick(values, mask):
    values = np.broadcast_to(values, np.shape(mask))
    if np.ndim(mask) == 0:
        return float(values)
    return float(values[mask].ravel()[0])


def evaluate(e: Expr, x=0.0, t=0.0):
    """Floating evaluation at scalar or array ``x``, ``t``.

    Raises :class:`EvaluationError` on any non-finite intermediate.
    """
    with np.errstate(all="ignore"):
        out = _eval(e, x, t)
    if np.ndim(out) == 0:
        return float(out)
    return out


# --------------------------------------------------------------------------
# printing and inspection

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Number) and isinstance(e.value, Fraction) and e.value.denominator != 1:
        return 2
    return 5


def to_source(e: Expr) -> str:
    """Text that parses back to an equivalent tree."""
    if isinstance(e, Number):
        v = e.value
        if isinstance(v, Fraction):
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        s = repr(float(v))
        return s if re.fullmatch(r"[0-9.eE+-]+", s) and not s.startswith("-") else f"({s})"
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    if isinstance(e, Neg):
        inner = to_source(e.child)
        return f"-{inner}" if _prec(e.child) >= 3 else f"-({inner})"
    p = _PREC[e.op]
    ls, rs = to_source(e.left), to_source(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            ls = f"({ls})"
        if _prec(e.right) < 3:
            rs = f"({rs})"
        return f"{ls}^{rs}"
    if _prec(e.left) < p:
        ls = f"({ls})"
    # left associative: same-precedence right operand needs brackets
    if _prec(e.right) <= p:
        rs = f"({rs})"
    return f"{ls} {e.op} {rs}"


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (Number, Const)):
        return frozenset()
    if isinstance(e, Neg):
        return free_vars(e.child)
    if isinstance(e, Call):
        return free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def detect_polynomial(e: Expr, var: str = "x") -> Polynomial | None:
    """Exact rational polynomial in ``var`` equal to ``e``, or ``None``.

    Only rational literals, ``var``, ``+ - *``, ``^`` with a constant
    nonnegative integer exponent and ``/`` by a nonzero rational constant
    qualify.  Decimal literals, constants and function calls do not.
    """
    if isinstance(e, Number):
        return Polynomial((e.value,)) if isinstance(e.value, Fraction) else None
    if isinstance(e, Var):
        return Polynomial.x() if e.name == var else None
    if isinstance(e, (Const, Call)):
        return None
    if isinstance(e, Neg):
        p = detect_polynomial(e.child, var)
        return None if p is None else -p
    left = detect_polynomial(e.left, var)
    if left is None:
        return None
    right = detect_polynomial(e.right, var)
    if right is None:
        return None
    if e.op == "+":
        return left + right
    if e.op == "-":
        return left - right
    if e.op == "*":
        return left * right
    if right.degree > 0:
        return None
    c = right[0]
    if e.op == "/":
        return None if c == 0 else left / c
    # ^
    if c.denominator != 1 or c < 0:
        return None
    return left ** int(c)


_ONE = Number(Fraction(1))


def _mul(acc: Expr | None, factor: Expr, inverted: bool) -> Expr:
    if inverted:
        return BinOp("/", _ONE if acc is None else acc, factor)
    return factor if acc is None else BinOp("*", acc, factor)


def _sum_terms(e: Expr, sign: int, out: list) -> None:
    if isinstance(e, BinOp) and e.op in "+-":
        _sum_terms(e.left, sign, out)
        _sum_terms(e.right, sign if e.op == "+" else -sign, out)
    elif isinstance(e, Neg):
        _sum_terms(e.child, -sign, out)
    else:
        out.append((sign, e))


def _factors(e: Expr, inverted: bool, out: list) -> int:
    """Flatten a product into ``out``; returns the sign pulled from negations."""
    if isinstance(e, BinOp) and e.op == "*":
        return _factors(e.left, inverted, out) * _factors(e.right, inverted, out)
    if isinstance(e, BinOp) and e.op == "/":
        return _factors(e.left, inverted, out) * _factors(e.right, not inverted, out)
    if isinstance(e, Neg):
        return -_factors(e.child, inverted, out)
    out.append((e, inverted))
    return 1


def detect_separable(e: Expr) -> list[tuple[Expr, Expr]] | None:
    """Split ``e`` syntactically into ``sum_p g_p(x) * h_p(t)``.

    Returns the ``(g_p, h_p)`` pairs or ``None`` when some term mixes
    ``x`` and ``t`` inside a single factor.  Signs and constant factors
    are carried on the ``g`` side; missing sides are the literal 1.
    """
    terms: list = []
    _sum_terms(e, 1, terms)
    pairs = []
    for sign, term in terms:
        factors: list = []
        sign *= _factors(term, False, factors)
        g: Expr | None = None
        h: Expr | None = None
        for fac, inv in factors:
            vs = free_vars(fac)
            if vs <= {"x"}:
                g = _mul(g, fac, inv)
            elif vs == {"t"}:
                h = _mul(h, fac, inv)
            else:
                return None
        if g is None:
            g = Number(Fraction(sign))
        elif sign < 0:
            g = Neg(g)
        pairs.append((g, _ONE if h is None else h))
    return pairs


def from_polynomial(p: Polynomial, var: str = "x") -> Expr:
    """Expression tree for an exact polynomial (ascending terms)."""
    if not p.exact:
        raise TypeError("only exact polynomials convert to expressions")
    node: Expr | None = None
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = Number(abs(c))
        if k == 0:
            term: Expr = mag
        else:
            mono: Expr = Var(var) if k == 1 else BinOp("^", Var(var), Number(Fraction(k)))
            term = mono if abs(c) == 1 else BinOp("*", mag, mono)
        if node is None:
            node = Neg(term) if c < 0 else term
        else:
            node = BinOp("-" if c < 0 else "+", node, term)
    return Number(Fraction(0)) if node is None else node
