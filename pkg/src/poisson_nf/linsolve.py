"""Sparse exact linear systems with deterministic pivoting.

Rows are ``{column: coefficient}`` dicts with integer column ids. Elimination
keeps the pivot rows fully reduced against each other, so back substitution
is trivial: pivot variables take the reduced right-hand side and free
variables are set to zero.
"""

from __future__ import annotations

from typing import Hashable, Sequence

from .scalar import QI, as_scalar, mpq


class InconsistentSystem(ArithmeticError):
    def __init__(self, row_tag):
        super().__init__(f"inconsistent row {row_tag!r}")
        self.row_tag = row_tag


def _inv(c):
    return QI(1) / c if isinstance(c, QI) else 1 / as_scalar(c)


def solve_sparse(rows: Sequence[dict], rhs: Sequence, tags: Sequence[Hashable] | None = None) -> dict:
    """Solve ``rows . v = rhs``; returns ``{column: value}`` for nonzero values.

    Rows are processed sparsest first (ties by input order). Within a row the
    pivot is the smallest column id. Raises ``InconsistentSystem`` carrying the
    tag of the first row that reduces to ``0 = nonzero``.
    """
    tags = list(range(len(rows))) if tags is None else list(tags)
    order = sorted(range(len(rows)), key=lambda i: (len(rows[i]), i))
    pivots: dict[int, tuple[dict, object]] = {}  # pivot col -> (row with coeff 1 at pivot, rhs)
    users: dict[int, set[int]] = {}  # col -> pivot cols whose rows contain col (col not a pivot)
    for idx in order:
        row = dict(rows[idx])
        b = rhs[idx]
        for col in [c for c in row if c in pivots]:
            f = row.pop(col, None)
            if not f:
                continue
            prow, pb = pivots[col]
            for c2, v in prow.items():
                if c2 == col:
                    continue
                w = row.get(c2)
                w = -f * v if w is None else w - f * v
                if w:
                    row[c2] = w
                else:
                    row.pop(c2, None)
            b = b - f * pb
        if not row:
            if b:
                raise InconsistentSystem(tags[idx])
            continue
        p = min(row)
        inv = _inv(row[p])
        row = {c: v * inv for c, v in row.items()}
        b = b * inv
        # eliminate p from existing pivot rows
        for q in sorted(users.pop(p, ())):
            qrow, qb = pivots[q]
            f = qrow.pop(p)
            for c2, v in row.items():
                if c2 == p:
                    continue
                w = qrow.get(c2)
                w = -f * v if w is None else w - f * v
                if w:
                    qrow[c2] = w
                    users.setdefault(c2, set()).add(q)
                else:
                    qrow.pop(c2, None)
                    users.get(c2, set()).discard(q)
            pivots[q] = (qrow, qb - f * b)
        pivots[p] = (row, b)
        for c2 in row:
            if c2 != p:
                users.setdefault(c2, set()).add(p)
    return {p: b for p, (row, b) in pivots.items() if b}


def solve_dense(A: Sequence[Sequence], b: Sequence) -> list:
    """Convenience wrapper: dense matrix in, dense solution (free variables 0) out."""
    rows = [{j: as_scalar(v) for j, v in enumerate(r) if v} for r in A]
    sol = solve_sparse(rows, [as_scalar(x) for x in b])
    n = len(A[0]) if A else 0
    return [sol.get(j, mpq(0)) for j in range(n)]
