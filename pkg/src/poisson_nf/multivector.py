"""Polynomial multivector fields and the Schouten bracket.

A grade-``p`` field is stored as ``{(i1 < ... < ip): Poly}``, i.e. in the
basis ``d/dx_i1 ^ ... ^ d/dx_ip``. The bracket is computed with odd
variables ``t_i`` standing for ``d/dx_i``::

    [P, Q] = sum_i (dP/dt_i)(dQ/dx_i) - (-1)^((p-1)(q-1)) (dQ/dt_i)(dP/dx_i)

with right derivatives in ``t``. With this sign choice ``[X, f] = X(f)``,
``[X, Y]`` is the Lie bracket, ``[I, Pi_1] = -Pi_1`` and
``X_f = -[f, Pi]`` satisfies ``X_f(g) = {f, g}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, NonTerminatingSeriesError
from .poly import Poly, sum_polys
from .scalar import as_scalar, mpq

__all__ = [
    "MultiVec",
    "CoordMap",
    "schouten",
    "lie_bracket",
    "apply_vf",
    "hamiltonian_vf",
    "poisson_bracket",
    "flow_pushforward",
    "flow_function",
    "coordmap_compose",
    "euler_field",
    "linear_vf_matrix",
]


def _merge_sign(a: tuple, b: tuple) -> tuple[int, tuple] | None:
    """Sign and sorted index tuple of ``t_a ^ t_b``; ``None`` if they overlap."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if sa.intersection(b):
        return None
    inversions = 0
    for j in b:
        inversions += sum(1 for i in a if i > j)
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


class MultiVec:
    """Immutable polynomial multivector field of fixed grade."""

    __slots__ = ("grade", "nvars", "comps")

    def __init__(self, grade: int, nvars: int, comps: Mapping[Sequence[int], Poly] | None = None):
        if grade < 0:
            raise ValueError("grade must be nonnegative")
        self.grade = grade
        self.nvars = nvars
        acc: dict[tuple, Poly] = {}
        for idx, f in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != grade:
                raise DimensionError(f"index {idx} does not have length {grade}")
            if any(not 0 <= i < nvars for i in idx):
                raise DimensionError(f"index {idx} out of range")
            if f.nvars != nvars:
                raise DimensionError("component lives in the wrong polynomial ring")
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(grade), key=lambda k: idx[k])
            sidx = tuple(idx[k] for k in order)
            if _perm_parity(order):
                f = -f
            acc[sidx] = acc[sidx] + f if sidx in acc else f
        self.comps = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, grade: int, nvars: int, comps: dict) -> "MultiVec":
        mv = cls.__new__(cls)
        mv.grade = grade
        mv.nvars = nvars
        mv.comps = comps
        return mv

    @classmethod
    def function(cls, f: Poly) -> "MultiVec":
        return cls._raw(0, f.nvars, {(): f} if f else {})

    @classmethod
    def vector_field(cls, components: Sequence[Poly]) -> "MultiVec":
        n = len(components)
        return cls._raw(1, n, {(i,): c for i, c in enumerate(components) if c})

    @classmethod
    def zero(cls, grade: int, nvars: int) -> "MultiVec":
        return cls._raw(grade, nvars, {})

    # inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self) -> bool:
        return bool(self.comps)

    def component(self, *idx: int) -> Poly:
        """Component at ``idx`` in any order; a transposition flips the sign."""
        f = self.comps.get(tuple(idx))
        if f is not None:
            return f
        if len(set(idx)) != len(idx):
            return Poly.zero(self.nvars)
        order = sorted(range(len(idx)), key=lambda k: idx[k])
        f = self.comps.get(tuple(idx[k] for k in order))
        if f is None:
            return Poly.zero(self.nvars)
        return -f if _perm_parity(order) else f

    def as_function(self) -> Poly:
        if self.grade != 0:
            raise ValueError("not a grade-0 field")
        return self.component()

    def components(self) -> list[Poly]:
        """Grade 1 only: the component list ``[X^0, ..., X^(n-1)]``."""
        if self.grade != 1:
            raise ValueError("not a vector field")
        return [self.component(i) for i in range(self.nvars)]

    def items(self) -> list[tuple[tuple, Poly]]:
        return sorted(self.comps.items())

    def degree(self) -> int:
        return max((f.degree() for f in self.comps.values()), default=-1)

    def order(self) -> int:
        return min((f.order() for f in self.comps.values()), default=-1)

    def max_abs2_by_degree(self) -> dict[int, object]:
        out: dict[int, object] = {}
        for f in self.comps.values():
            for d, a in f.max_abs2_by_degree().items():
                if d not in out or a > out[d]:
                    out[d] = a
        return out

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiVec") -> None:
        if self.grade != other.grade or self.nvars != other.nvars:
            raise DimensionError(
                f"cannot combine grade {self.grade}/{self.nvars} with grade {other.grade}/{other.nvars}"
            )

    def __add__(self, other: "MultiVec") -> "MultiVec":
        self._check(other)
        out = dict(self.comps)
        for k, f in other.comps.items():
            g = out.get(k)
            s = f if g is None else g + f
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiVec._raw(self.grade, self.nvars, out)

    def __neg__(self) -> "MultiVec":
        return MultiVec._raw(self.grade, self.nvars, {k: -f for k, f in self.comps.items()})

    def __sub__(self, other: "MultiVec") -> "MultiVec":
        return self + (-other)

    def scale(self, c) -> "MultiVec":
        c = as_scalar(c)
        if not c:
            return MultiVec.zero(self.grade, self.nvars)
        return MultiVec._raw(self.grade, self.nvars, {k: f.scale(c) for k, f in self.comps.items()})

    def truncate(self, N: int) -> "MultiVec":
        out = {}
        for k, f in self.comps.items():
            g = f.truncate(N)
            if g:
                out[k] = g
        return MultiVec._raw(self.grade, self.nvars, out)

    def graded_component(self, r: int) -> "MultiVec":
        out = {}
        for k, f in self.comps.items():
            g = f.graded_component(r)
            if g:
                out[k] = g
        return MultiVec._raw(self.grade, self.nvars, out)

    def map_components(self, fn) -> "MultiVec":
        out = {}
        for k, f in self.comps.items():
            g = fn(f)
            if g:
                out[k] = g
        return MultiVec._raw(self.grade, self.nvars, out)

    def __eq__(self, other):
        if not isinstance(other, MultiVec):
            return NotImplemented
        return self.grade == other.grade and self.nvars == other.nvars and self.comps == other.comps

    def __hash__(self):
        return hash((self.grade, self.nvars, frozenset(self.comps.items())))

    def to_pairs(self, names: Sequence[str] | None = None) -> list[tuple[list[int], str]]:
        """Serialized form: ``[(index tuple, polynomial text), ...]`` sorted by index."""
        return [(list(k), f.to_str(names)) for k, f in self.items()]

    @classmethod
    def from_pairs(cls, grade: int, nvars: int, pairs: Iterable, names: Sequence[str]) -> "MultiVec":
        from .textio import parse_poly

        return cls(grade, nvars, {tuple(idx): parse_poly(txt, names) for idx, txt in pairs})

    def __repr__(self):
        body = ", ".join(f"{k}: {f}" for k, f in self.items())
        return f"MultiVec(grade={self.grade}, {{{body}}})"


def _perm_parity(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    parity = 0
    for i in range(len(order)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def euler_field(nvars: int) -> MultiVec:
    """``I = sum_i x_i d/dx_i``."""
    return MultiVec.vector_field([Poly.var(nvars, i) for i in range(nvars)])


# bracket --------------------------------------------------------------------


def _theta_derivatives(P: MultiVec) -> dict[int, dict[tuple, Poly]]:
    """Right derivatives ``dP/dt_i`` keyed by ``i``."""
    out: dict[int, dict[tuple, Poly]] = {}
    p = P.grade
    for idx, f in P.comps.items():
        for pos, i in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1:]
            g = -f if (p - 1 - pos) & 1 else f
            slot = out.setdefault(i, {})
            slot[rest] = slot[rest] + g if rest in slot else g
    return out


def _half_bracket(P: MultiVec, Q: MultiVec, N: int | None, acc: dict, sign: int) -> None:
    """Accumulate ``sign * sum_i (dP/dt_i)(dQ/dx_i)`` into ``acc``."""
    dtheta = _theta_derivatives(P)
    if not dtheta:
        return
    dcache: dict[tuple, Poly] = {}
    for i, parts in dtheta.items():
        for J, g in Q.comps.items():
            key = (J, i)
            gi = dcache.get(key)
            if gi is None:
                gi = g.diff(i)
                dcache[key] = gi
            if not gi:
                continue
            for I_, f in parts.items():
                if not f:
                    continue
                ms = _merge_sign(I_, J)
                if ms is None:
                    continue
                s, K = ms
                acc.setdefault(K, []).append((s * sign, f, gi))


def schouten(a: MultiVec, b: MultiVec, N: int | None = None) -> MultiVec:
    """Schouten bracket ``[a, b]``, truncated at total degree ``N`` if given."""
    if a.nvars != b.nvars:
        raise DimensionError("multivectors on different spaces")
    p, q = a.grade, b.grade
    g = p + q - 1
    if g < 0:
        raise ValueError("bracket of two functions is undefined (grade would be -1)")
    acc: dict[tuple, list] = {}
    _half_bracket(a, b, N, acc, 1)
    eps = -1 if ((p - 1) * (q - 1)) & 1 else 1
    _half_bracket(b, a, N, acc, -eps)
    n = a.nvars
    out = {}
    for K, terms in acc.items():
        pos = [f.mul(h, N) for s, f, h in terms if s > 0]
        neg = [f.mul(h, N) for s, f, h in terms if s < 0]
        total = sum_polys(n, pos) - sum_polys(n, neg)
        if total:
            out[K] = total
    return MultiVec._raw(g, n, out)


def lie_bracket(X: MultiVec, Y: MultiVec, N: int | None = None) -> MultiVec:
    """Lie bracket of vector fields; identical to ``schouten`` on grade 1."""
    if X.grade != 1 or Y.grade != 1:
        raise ValueError("lie_bracket expects vector fields")
    return schouten(X, Y, N)


def apply_vf(X: MultiVec, f: Poly, N: int | None = None) -> Poly:
    """Directional derivative ``X(f)``."""
    if X.grade != 1:
        raise ValueError("apply_vf expects a vector field")
    terms = [c.mul(f.diff(i), N) for (i,), c in X.comps.items()]
    return sum_polys(f.nvars, terms)


def hamiltonian_vf(f: Poly, Pi: MultiVec, N: int | None = None) -> MultiVec:
    """``X_f = -[f, Pi]``, so that ``X_f(g) = {f, g}``."""
    if Pi.grade != 2:
        raise ValueError("Poisson tensor must have grade 2")
    return -schouten(MultiVec.function(f), Pi, N)


def poisson_bracket(f: Poly, g: Poly, Pi: MultiVec, N: int | None = None) -> Poly:
    """``{f, g} = sum_{i<j} Pi^ij (f_i g_j - f_j g_i)``."""
    if Pi.grade != 2:
        raise ValueError("Poisson tensor must have grade 2")
    if not f or not g:
        return Poly.zero(f.nvars)
    n = f.nvars
    df: dict[int, Poly] = {}
    dg: dict[int, Poly] = {}

    def d(cache, h, i):
        v = cache.get(i)
        if v is None:
            v = h.diff(i)
            cache[i] = v
        return v

    pos = []
    neg = []
    for (i, j), c in Pi.comps.items():
        fi, gj = d(df, f, i), d(dg, g, j)
        if fi and gj:
            pos.append(c.mul(fi.mul(gj, N), N))
        fj, gi = d(df, f, j), d(dg, g, i)
        if fj and gi:
            neg.append(c.mul(fj.mul(gi, N), N))
    return sum_polys(n, pos) - sum_polys(n, neg)


def linear_vf_matrix(X: MultiVec) -> list[list]:
    """Matrix ``M`` of the linear part: ``X^i = sum_j M[i][j] x_j + ...``."""
    n = X.nvars
    M = [[mpq(0)] * n for _ in range(n)]
    for (i,), f in X.comps.items():
        for exps, c in f.graded_component(1).items():
            M[i][exps.index(1)] = c
    return M


def _check_terminates(G: Poly, Pi: MultiVec) -> None:
    """Series ``exp(ad X_G)`` terminates mod degree N+1 iff the linear part of X_G is nilpotent."""
    if G.order() == 0:
        raise NonTerminatingSeriesError("generator has a constant term", {"order": 0})
    if G.order() == 1:
        raise NonTerminatingSeriesError(
            "generator has a nonzero linear part; its adjoint does not raise degree", {"order": 1}
        )
    G2 = G.graded_component(2)
    if not G2:
        return
    from .linalg import is_nilpotent

    L = linear_vf_matrix(hamiltonian_vf(G2, Pi))
    if not is_nilpotent(L):
        raise NonTerminatingSeriesError(
            "quadratic part of the generator has a non-nilpotent linear Hamiltonian field",
            {"order": 2},
        )


def _series_cap(N: int, n: int) -> int:
    return (N + 2) * (N + 2) * (n + 1)


def flow_pushforward(T: MultiVec | Poly, G: Poly, Pi: MultiVec, N: int) -> MultiVec | Poly:
    """``T + [X_G, T] + 1/2 [X_G, [X_G, T]] + ...`` truncated at degree ``N``.

    Functions (``Poly`` or grade-0 ``MultiVec``) transform as ``T o phi`` where
    ``phi`` is the time-1 flow of ``X_G``.
    """
    as_poly = isinstance(T, Poly)
    if as_poly:
        T = MultiVec.function(T)
    if not G:
        return T.as_function().truncate(N) if as_poly else T.truncate(N)
    _check_terminates(G, Pi)
    XG = hamiltonian_vf(G, Pi, N)
    result = T.truncate(N)
    term = result
    cap = _series_cap(N, T.nvars)
    k = 0
    while True:
        k += 1
        if term.grade == 0:
            f = term.as_function()
            term = MultiVec.function(apply_vf(XG, f, N).scale(mpq(1, k)))
        else:
            term = schouten(XG, term, N).scale(mpq(1, k))
        if term.is_zero():
            break
        result = result + term
        if k > cap:
            raise NonTerminatingSeriesError("adjoint series did not vanish", {"iterations": k})
    return result.as_function() if as_poly else result


def flow_function(f: Poly, G: Poly, Pi: MultiVec, N: int) -> Poly:
    """``f o exp(X_G)`` via the Lie series ``sum_k X_G^k f / k!``."""
    return flow_pushforward(f, G, Pi, N)


# coordinate maps -------------------------------------------------------------


@dataclass(frozen=True)
class CoordMap:
    """Formal map given by the images of the coordinates, truncated at ``N``.

    ``images[i] = x_i o phi``. Pulling back a function is substitution.
    """

    images: tuple[Poly, ...]
    N: int

    def __post_init__(self):
        for f in self.images:
            if f.constant_term():
                raise ValueError("coordinate images must have zero constant term")

    @property
    def nvars(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int, N: int) -> "CoordMap":
        return cls(tuple(Poly.var(n, i) for i in range(n)), N)

    @classmethod
    def from_flow(cls, G: Poly, Pi: MultiVec, N: int) -> "CoordMap":
        return cls.identity(G.nvars, N).then_flow(G, Pi)

    @classmethod
    def linear(cls, M: Sequence[Sequence], N: int) -> "CoordMap":
        n = len(M)
        ims = []
        for i in range(n):
            f = Poly.zero(n)
            for j in range(n):
                if M[i][j]:
                    f = f + Poly.var(n, j, M[i][j])
            ims.append(f)
        return cls(tuple(ims), N)

    def then_flow(self, G: Poly, Pi: MultiVec) -> "CoordMap":
        """Compose with one more time-1 flow applied after this map (Lie series on images)."""
        return CoordMap(tuple(flow_function(f, G, Pi, self.N) for f in self.images), self.N)

    def pull(self, f: Poly, N: int | None = None) -> Poly:
        """``f o self``."""
        return f.substitute(self.images, self.N if N is None else N)

    def linear_part(self) -> list[list]:
        n = self.nvars
        M = [[mpq(0)] * n for _ in range(n)]
        for i, f in enumerate(self.images):
            for exps, c in f.graded_component(1).items():
                M[i][exps.index(1)] = c
        return M

    def linear_inverse(self) -> "CoordMap":
        from .linalg import mat_inverse

        return CoordMap.linear(mat_inverse(self.linear_part()), self.N)

    def truncate(self, N: int) -> "CoordMap":
        return CoordMap(tuple(f.truncate(N) for f in self.images), N)

    def __eq__(self, other):
        if not isinstance(other, CoordMap):
            return NotImplemented
        return self.N == other.N and self.images == other.images

    def __hash__(self):
        return hash((self.images, self.N))

    def to_list(self, names: Sequence[str] | None = None) -> list[str]:
        return [f.to_str(names) for f in self.images]


def coordmap_compose(outer: CoordMap, inner: CoordMap) -> CoordMap:
    """Images ``outer_i(inner(x))`` truncated at ``N``."""
    if outer.nvars != inner.nvars:
        raise DimensionError("maps on different spaces")
    if outer.N != inner.N:
        raise ValueError("maps with different truncation degrees")
    return CoordMap(tuple(f.substitute(inner.images, outer.N) for f in outer.images), outer.N)
