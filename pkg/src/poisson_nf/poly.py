"""Sparse multivariate polynomials with exact coefficients.

Monomials are packed into a single Python int: each exponent occupies a
16-bit slot (variable 0 in the most significant slot) and the total degree
sits above all slots. Multiplying monomials is then integer addition, and
comparing keys orders terms by total degree first.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DimensionError, SplitNotConfiguredError
from .scalar import as_scalar, mpq

__all__ = [
    "Poly",
    "Monomial",
    "monomial_degree",
    "bidegree",
    "monomials_of_degree",
    "poly_add",
    "poly_mul",
    "graded_component",
    "bidegree_component",
    "truncate",
]

SLOT = 16
_SLOT_MASK = (1 << SLOT) - 1
MAX_DEGREE = (1 << (SLOT - 1)) - 1

Monomial = tuple  # tuple[int, ...] of nonnegative exponents


@lru_cache(maxsize=None)
def _layout(n: int) -> tuple[int, tuple[int, ...]]:
    """(degree shift, per-variable shifts) for ``n`` variables."""
    return SLOT * n, tuple(SLOT * (n - 1 - i) for i in range(n))


def _pack(exps: Sequence[int], n: int) -> int:
    ds, shifts = _layout(n)
    key = 0
    deg = 0
    for e, s in zip(exps, shifts):
        if e < 0:
            raise ValueError("negative exponent")
        key |= e << s
        deg += e
    if deg > MAX_DEGREE:
        raise OverflowError(f"total degree {deg} exceeds {MAX_DEGREE}")
    return key | (deg << ds)


@lru_cache(maxsize=1 << 20)
def _unpack(key: int, n: int) -> tuple[int, ...]:
    _, shifts = _layout(n)
    return tuple((key >> s) & _SLOT_MASK for s in shifts)


def monomial_degree(exps: Sequence[int]) -> int:
    return sum(exps)


def bidegree(exps: Sequence[int], nsymp: int) -> tuple[int, int]:
    """(degree in the first ``nsymp`` coordinates, degree in the rest)."""
    p = sum(exps[:nsymp])
    return p, sum(exps) - p


def monomials_of_degree(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors of length ``n`` and total degree ``r``, graded-lex descending."""
    if n == 0:
        if r == 0:
            yield ()
        return
    if n == 1:
        yield (r,)
        return
    for first in range(r, -1, -1):
        for rest in monomials_of_degree(n - 1, r - first):
            yield (first,) + rest


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables.

    ``terms`` never stores zero coefficients, so equality is exact
    coefficientwise equality.
    """

    __slots__ = ("nvars", "_t", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.nvars = int(nvars)
        t: dict[int, object] = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != self.nvars:
                    raise DimensionError(f"monomial {tuple(exps)} has wrong length for {self.nvars} variables")
                c = as_scalar(c)
                if not c:
                    continue
                k = _pack(exps, self.nvars)
                v = t.get(k)
                v = c if v is None else v + c
                if v:
                    t[k] = v
                else:
                    t.pop(k, None)
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, t: dict) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._t = t
        p._hash = None
        return p

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = as_scalar(c)
        if not c:
            return cls.zero(nvars)
        return cls._raw(nvars, {0: c})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Poly":
        if not 0 <= i < nvars:
            raise DimensionError(f"variable index {i} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Poly":
        return cls(len(exps), {tuple(exps): coeff})

    # inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms as ``(exponents, coefficient)`` in graded-lex order (low degree first,
        ``x1`` before ``x2`` within a degree)."""
        n = self.nvars
        ds = _layout(n)[0]
        keys = sorted(self._t, key=lambda k: (k >> ds, -k))
        return [(_unpack(k, n), self._t[k]) for k in keys]

    def to_dict(self) -> dict[tuple[int, ...], object]:
        n = self.nvars
        return {_unpack(k, n): c for k, c in self._t.items()}

    def coefficient(self, exps: Sequence[int]):
        return self._t.get(_pack(exps, self.nvars), mpq(0))

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._t:
            return -1
        return max(self._t) >> _layout(self.nvars)[0]

    def order(self) -> int:
        """Lowest total degree present; ``-1`` for zero."""
        if not self._t:
            return -1
        return min(self._t) >> _layout(self.nvars)[0]

    def degrees(self) -> list[int]:
        ds = _layout(self.nvars)[0]
        return sorted({k >> ds for k in self._t})

    def constant_term(self):
        return self._t.get(0, mpq(0))

    def coefficients(self):
        return self._t.values()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        if len(other._t) > len(self._t):
            self, other = other, self
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v = v + c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return Poly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = as_scalar(c)
        if not c:
            return Poly.zero(self.nvars)
        if c == 1:
            return self
        return Poly._raw(self.nvars, {k: v * c for k, v in self._t.items()})

    def add_scaled(self, other: "Poly", c) -> "Poly":
        """``self + c*other`` without building the intermediate."""
        self._check(other)
        c = as_scalar(c)
        if not c or not other._t:
            return self
        t = dict(self._t)
        for k, v in other._t.items():
            w = t.get(k)
            if w is None:
                t[k] = v * c
            else:
                w = w + v * c
                if w:
                    t[k] = w
                else:
                    del t[k]
        return Poly._raw(self.nvars, t)

    def mul(self, other: "Poly", N: int | None = None) -> "Poly":
        """Product, dropping every term of total degree above ``N``."""
        self._check(other)
        if not self._t or not other._t:
            return Poly.zero(self.nvars)
        n = self.nvars
        ds = _layout(n)[0]
        if N is None:
            N = self.degree() + other.degree()
            if N > MAX_DEGREE:
                raise OverflowError(f"product degree {N} exceeds {MAX_DEGREE}")
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        groups: dict[int, list] = {}
        for k, c in b.items():
            groups.setdefault(k >> ds, []).append((k, c))
        glist = sorted(groups.items())
        out: dict[int, object] = {}
        get = out.get
        for ka, ca in a.items():
            room = N - (ka >> ds)
            for db, lst in glist:
                if db > room:
                    break
                for kb, cb in lst:
                    k = ka + kb
                    v = get(k)
                    out[k] = ca * cb if v is None else v + ca * cb
        return Poly._raw(n, {k: v for k, v in out.items() if v})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        return self.pow(k)

    def pow(self, k: int, N: int | None = None) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base, N)
            k >>= 1
            if k:
                base = base.mul(base, N)
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._t == other._t
        if not self._t:
            return other == 0
        if set(self._t) == {0}:
            return self._t[0] == other
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._t.items())))
        return self._hash

    # calculus and grading -------------------------------------------------

    def diff(self, i: int) -> "Poly":
        n = self.nvars
        ds, shifts = _layout(n)
        s = shifts[i]
        step = (1 << s) + (1 << ds)
        out = {}
        for k, c in self._t.items():
            e = (k >> s) & _SLOT_MASK
            if e:
                out[k - step] = c * e
        return Poly._raw(n, out)

    def graded_component(self, r: int) -> "Poly":
        ds = _layout(self.nvars)[0]
        return Poly._raw(self.nvars, {k: c for k, c in self._t.items() if k >> ds == r})

    def graded_range(self, lo: int, hi: int) -> "Poly":
        """Terms with ``lo <= degree <= hi``."""
        ds = _layout(self.nvars)[0]
        return Poly._raw(self.nvars, {k: c for k, c in self._t.items() if lo <= k >> ds <= hi})

    def truncate(self, N: int) -> "Poly":
        ds = _layout(self.nvars)[0]
        if not self._t or max(self._t) >> ds <= N:
            return self
        return Poly._raw(self.nvars, {k: c for k, c in self._t.items() if k >> ds <= N})

    def bidegree_component(self, p: int, q: int, nsymp: int | None) -> "Poly":
        if nsymp is None:
            raise SplitNotConfiguredError("bidegree split (2l, m) is not configured")
        n = self.nvars
        out = {}
        for k, c in self._t.items():
            if bidegree(_unpack(k, n), nsymp) == (p, q):
                out[k] = c
        return Poly._raw(n, out)

    def select(self, pred) -> "Poly":
        """Terms whose exponent tuple satisfies ``pred``."""
        n = self.nvars
        return Poly._raw(n, {k: c for k, c in self._t.items() if pred(_unpack(k, n))})

    def map_coefficients(self, fn) -> "Poly":
        out = {}
        for k, c in self._t.items():
            v = fn(c)
            if v:
                out[k] = v
        return Poly._raw(self.nvars, out)

    def divide_terms(self, fn) -> "Poly":
        """Divide each term by ``fn(exponents)``; used by diagonal homological solves."""
        n = self.nvars
        return Poly._raw(n, {k: c / fn(_unpack(k, n)) for k, c in self._t.items()})

    def substitute(self, images: Sequence["Poly"], N: int | None = None) -> "Poly":
        """``self(images[0], ..., images[n-1])`` truncated at ``N``."""
        if len(images) != self.nvars:
            raise DimensionError("one image per variable is required")
        if not images:
            return self
        m = images[0].nvars
        for g in images:
            if g.nvars != m:
                raise DimensionError("images live in different polynomial rings")
        if not self._t:
            return Poly.zero(m)
        powers: list[list[Poly]] = [[Poly.const(m, 1)] for _ in images]

        def power(i: int, e: int) -> Poly:
            lst = powers[i]
            while len(lst) <= e:
                lst.append(lst[-1].mul(images[i], N))
            return lst[e]

        prefix: dict[tuple, Poly] = {(): Poly.const(m, 1)}
        acc: dict[int, object] = {}
        for exps, c in self.items():
            # longest cached prefix, then extend
            j = len(exps)
            while exps[:j] not in prefix:
                j -= 1
            cur = prefix[exps[:j]]
            for i in range(j, len(exps)):
                if exps[i]:
                    cur = cur.mul(power(i, exps[i]), N)
                prefix[exps[: i + 1]] = cur
            for k, v in cur._t.items():
                w = acc.get(k)
                acc[k] = v * c if w is None else w + v * c
        return Poly._raw(m, {k: v for k, v in acc.items() if v})

    def max_abs2_by_degree(self) -> dict[int, object]:
        """Largest squared coefficient modulus per total degree."""
        from .scalar import abs2

        ds = _layout(self.nvars)[0]
        out: dict[int, object] = {}
        for k, c in self._t.items():
            d = k >> ds
            a = abs2(c)
            if d not in out or a > out[d]:
                out[d] = a
        return out

    # text -----------------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        from .textio import format_poly

        return format_poly(self, names)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()!r})"


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly, N: int | None = None) -> Poly:
    return a.mul(b, N)


def graded_component(f: Poly, r: int) -> Poly:
    if r < 0:
        raise ValueError("degree must be nonnegative")
    return f.graded_component(r)


def bidegree_component(f: Poly, p: int, q: int, nsymp: int | None) -> Poly:
    return f.bidegree_component(p, q, nsymp)


def truncate(f: Poly, N: int) -> Poly:
    if N < 0:
        raise ValueError("truncation degree must be nonnegative")
    return f.truncate(N)


def sum_polys(nvars: int, polys: Iterable[Poly]) -> Poly:
    acc: dict[int, object] = {}
    for p in polys:
        for k, c in p._t.items():
            v = acc.get(k)
            acc[k] = c if v is None else v + c
    return Poly._raw(nvars, {k: v for k, v in acc.items() if v})
