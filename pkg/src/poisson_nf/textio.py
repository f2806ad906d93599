"""Polynomial text syntax.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*        # '/' only by nonzero constants
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') INT)?
    atom   := INT | DECIMAL | 'I' | NAME | '(' expr ')'

``I`` is the imaginary unit (only meaningful over Q(i)). Printing emits
``coef*monomial`` terms in graded-lex order, e.g. ``3/2*x1^2*z3 - 1*y1*z2``,
and ``parse_poly(format_poly(p)) == p`` holds exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .poly import Poly
from .scalar import QI, is_real, mpq, real_part, imag_part, scalar_str

__all__ = ["variable_names", "parse_poly", "format_poly", "parse_scalar_expr"]

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|(\*\*|[-+*/^()])|([A-Za-z_][A-Za-z_0-9]*))")


def variable_names(l: int = 0, m: int = 0, n: int | None = None, prefix: str = "z") -> list[str]:
    """Coordinate names ``x1..xl, y1..yl, z1..zm``; with only ``n`` given, ``u1..un``."""
    if n is not None:
        return [f"u{i + 1}" for i in range(n)]
    return [f"x{i + 1}" for i in range(l)] + [f"y{i + 1}" for i in range(l)] + [f"{prefix}{i + 1}" for i in range(m)]


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"unexpected character {text[pos:pos + 10]!r} in {text!r}")
        num, op, name = m.groups()
        if num is not None:
            out.append(("num", num))
        elif op is not None:
            out.append(("op", op))
        else:
            out.append(("name", name))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str], aliases: dict[str, int] | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.n = len(names)
        self.index = {nm: k for k, nm in enumerate(names)}
        if aliases:
            for nm, k in aliases.items():
                self.index.setdefault(nm, k)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise InputError(f"{msg} in polynomial {self.text!r}")

    def parse(self) -> Poly:
        if not self.toks:
            self.fail("empty expression")
        p = self.expr()
        if self.i != len(self.toks):
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if q.degree() > 0:
                    self.fail("division by a non-constant")
                c = q.constant_term()
                if not c:
                    self.fail("division by zero")
                p = p.scale(1 / c if not isinstance(c, QI) else QI(1) / c)
        return p

    def unary(self) -> Poly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() in (("op", "^"), ("op", "**")):
            self.take()
            kind, val = self.take()
            if kind != "num" or not val.isdigit():
                self.fail("exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            if "." in val:
                f = Fraction(val)
                return Poly.const(self.n, mpq(f.numerator, f.denominator))
            return Poly.const(self.n, int(val))
        if kind == "name":
            if val == "I":
                return Poly.const(self.n, QI(0, 1))
            if val not in self.index:
                self.fail(f"unknown variable {val!r}")
            return Poly.var(self.n, self.index[val])
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return p
        self.fail(f"unexpected token {val!r}")


def parse_poly(text: str, names: Sequence[str], aliases: dict[str, int] | None = None) -> Poly:
    """Parse ``text`` into a polynomial over the coordinates ``names``."""
    if not isinstance(text, str):
        if isinstance(text, float):
            raise InputError("floating point values are not allowed; write rationals like 3/2")
        text = str(text)
    return _Parser(text, names, aliases).parse()


def parse_scalar_expr(text: str):
    p = parse_poly(text, [])
    return p.constant_term()


def _monomial_str(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, nm in zip(exps, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


def _is_negative(c) -> bool:
    if is_real(c):
        return real_part(c) < 0
    re_, im_ = real_part(c), imag_part(c)
    return re_ < 0 or (re_ == 0 and im_ < 0)


def format_poly(p: Poly, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = variable_names(n=p.nvars)
    if len(names) != p.nvars:
        raise InputError(f"{len(names)} names given for {p.nvars} variables")
    items = p.items()
    if not items:
        return "0"
    out = []
    for idx, (exps, c) in enumerate(items):
        neg = _is_negative(c)
        mag = -c if neg else c
        body = scalar_str(mag)
        mono = _monomial_str(exps, names)
        if mono:
            body = mono if mag == 1 else f"{body}*{mono}"
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
