"""Exact coefficient field: rationals (``gmpy2.mpq``) and Gaussian rationals.

Rational scalars are plain ``mpq`` values. Elements of Q(i) are ``QI``
instances. Both kinds mix freely in arithmetic; floats never enter.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import FieldError

__all__ = [
    "QI",
    "I",
    "mpq",
    "Field",
    "as_scalar",
    "is_real",
    "real_part",
    "imag_part",
    "abs2",
    "scalar_str",
    "parse_number",
]

_MPQ = type(mpq(0))


def _q(x) -> mpq:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise FieldError("floating point values are not allowed in exact arithmetic")
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class QI:
    """Gaussian rational ``re + im*I`` with exact ``mpq`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, QI):
            return other
        try:
            return QI(other, 0)
        except (TypeError, FieldError):
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QI(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, QI):
            return QI(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        try:
            o = _q(other)
        except (TypeError, FieldError):
            return NotImplemented
        return QI(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return QI((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QI(1) / (self ** (-k))
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        try:
            o = _q(other)
        except (TypeError, FieldError):
            return NotImplemented
        return self.im == 0 and self.re == o

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        return scalar_str(self)


I = QI(0, 1)


class Field:
    """Coefficient field tag: ``Q`` or ``Q(i)``."""

    Q = "Q"
    QI = "Q(i)"

    _ALIASES = {"Q": "Q", "QQ": "Q", "Q(i)": "Q(i)", "QI": "Q(i)", "Q(I)": "Q(i)", "QQ(i)": "Q(i)"}

    @classmethod
    def normalize(cls, tag: str) -> str:
        try:
            return cls._ALIASES[str(tag).strip()]
        except KeyError:
            raise FieldError(f"unknown field tag {tag!r}; expected 'Q' or 'Q(i)'") from None

    @classmethod
    def check(cls, tag: str, value) -> None:
        if cls.normalize(tag) == cls.Q and not is_real(value):
            raise FieldError(f"value {scalar_str(value)} is not rational but the field is Q")


def as_scalar(x):
    """Coerce ``x`` (int, Fraction, mpq, QI or numeric string) to an exact scalar."""
    if isinstance(x, QI):
        return x
    if isinstance(x, str):
        return parse_number(x)
    return _q(x)


def is_real(x) -> bool:
    return not isinstance(x, QI) or x.im == 0


def real_part(x) -> mpq:
    return x.re if isinstance(x, QI) else _q(x)


def imag_part(x) -> mpq:
    return x.im if isinstance(x, QI) else mpq(0)


def abs2(x) -> mpq:
    """Squared modulus, always an exact rational."""
    if isinstance(x, QI):
        return x.abs2()
    x = _q(x)
    return x * x


def _rat_str(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def scalar_str(x) -> str:
    """Canonical text of a scalar: ``3/2``, ``-1``, ``2*I``, ``(1/2-3*I)``."""
    if not isinstance(x, QI):
        return _rat_str(_q(x))
    if x.im == 0:
        return _rat_str(x.re)
    if x.im == 1:
        im = "I"
    elif x.im == -1:
        im = "-I"
    else:
        im = f"{_rat_str(x.im)}*I"
    if x.re == 0:
        return im
    sign = "" if im.startswith("-") else "+"
    return f"({_rat_str(x.re)}{sign}{im})"


def parse_number(text: str):
    """Parse a scalar literal using the polynomial grammar (``3/2``, ``1/2+3*I``)."""
    from .textio import parse_scalar_expr

    return parse_scalar_expr(text)
