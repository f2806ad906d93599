"""Resonance lattice, its annihilator and the toric generators.

The resonance lattice is the integer kernel of the functional
``(-gamma, gamma, alpha)`` on ``Z^(2l+m)``. Over Q(i) the real and imaginary
parts give two rational constraints each; denominators are cleared and the
kernel is taken with unimodular integer row operations. Bases are returned
in row Hermite normal form so they are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .multivector import MultiVec
from .poly import Poly
from .scalar import as_scalar, imag_part, real_part

__all__ = [
    "ResonanceData",
    "resonance_lattice",
    "toric_generators",
    "resonant_monomials",
    "hnf",
    "integer_kernel",
    "eigen_functional",
]

IntMatrix = list  # list[list[int]]


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped).

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    """
    A = [[int(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    m = len(A)
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(A[i][c]), i))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return [row for row in A[:r] if any(row)]


def integer_kernel(A: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Basis (row HNF) of ``{u in Z^n : A u = 0}`` for an integer matrix ``A`` with ``n`` columns."""
    k = len(A)
    if k == 0:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # rows of [A^T | I]; unimodular row operations on the first k columns
    M = [[int(A[j][i]) for j in range(k)] + [1 if t == i else 0 for t in range(n)] for i in range(n)]
    r = 0
    for c in range(k):
        while True:
            nz = [i for i in range(r, n) if M[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(M[i][c]), i))
            M[r], M[piv] = M[piv], M[r]
            clean = True
            for i in range(r + 1, n):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    if M[i][c]:
                        clean = False
            if clean:
                break
        if r < n and M[r][c]:
            r += 1
    kernel = [row[k:] for row in M if not any(row[:k])]
    return hnf(kernel, n)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def eigen_functional(gamma: Sequence, alpha: Sequence) -> list:
    """``(-gamma, gamma, alpha)``."""
    g = [as_scalar(x) for x in gamma]
    return [-x for x in g] + g + [as_scalar(x) for x in alpha]


def _integer_constraints(w: Sequence) -> IntMatrix:
    rows = []
    for part in (real_part, imag_part):
        vals = [part(x) for x in w]
        if not any(vals):
            continue
        den = 1
        for v in vals:
            den = _lcm(den, int(v.denominator))
        row = [int(v * den) for v in vals]
        g = 0
        for x in row:
            g = gcd(g, x)
        rows.append([x // g for x in row])
    return rows


@dataclass
class ResonanceData:
    l: int
    m: int
    functional: list
    constraints: IntMatrix
    R_basis: IntMatrix
    Q_basis: IntMatrix
    generators: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return 2 * self.l + self.m

    @property
    def toric_degree(self) -> int:
        return len(self.Q_basis)

    @property
    def resonance_degree(self) -> int:
        return len(self.R_basis)


def resonance_lattice(gamma: Sequence, alpha: Sequence) -> ResonanceData:
    w = eigen_functional(gamma, alpha)
    n = len(w)
    cons = _integer_constraints(w)
    R = integer_kernel(cons, n)
    Q = integer_kernel(R, n) if R else [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    data = ResonanceData(len(gamma), len(alpha), w, cons, R, Q)
    data.generators = toric_generators(data)
    return data


def toric_generators(data: ResonanceData) -> list[MultiVec]:
    """``Z_k = sum_i rho^(k)_i x_i d/dx_i`` for each row ``rho^(k)`` of the annihilator basis."""
    n = data.n
    return [
        MultiVec.vector_field([Poly.var(n, i, rho[i]) if rho[i] else Poly.zero(n) for i in range(n)])
        for rho in data.Q_basis
    ]


def resonant_monomials(data: ResonanceData, N: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree ``1..N`` annihilated by the functional, graded-lex sorted."""
    n = data.n
    cons = data.constraints
    k = len(cons)
    # per-row bounds of what the remaining coordinates can still contribute per unit degree
    lo_tail = [[0] * (n + 1) for _ in range(k)]
    hi_tail = [[0] * (n + 1) for _ in range(k)]
    for j in range(k):
        for i in range(n - 1, -1, -1):
            lo_tail[j][i] = min(lo_tail[j][i + 1], cons[j][i])
            hi_tail[j][i] = max(hi_tail[j][i + 1], cons[j][i])
    out: list[tuple[int, ...]] = []
    exps = [0] * n

    def feasible(i: int, acc: list, budget: int) -> bool:
        for j in range(k):
            if acc[j] + budget * lo_tail[j][i] > 0 or acc[j] + budget * hi_tail[j][i] < 0:
                return False
        return True

    def dfs(i: int, acc: list, deg: int):
        if i == n:
            if deg >= 1 and not any(acc):
                out.append(tuple(exps))
            return
        budget = N - deg
        if not feasible(i, acc, budget):
            return
        for e in range(budget + 1):
            exps[i] = e
            dfs(i + 1, [acc[j] + e * cons[j][i] for j in range(k)], deg + e)
        exps[i] = 0

    dfs(0, [0] * k, 0)
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out
