"""Enumeration of weight sums ``sum_i lambda_i w_i`` over degree shells.

The divisors ``|lambda| - 1 + sum_i lambda_i w_i`` only depend on ``|lambda|``
and the weight sum, so a table of reachable sums per degree replaces the
enumeration of all exponent vectors. One witness exponent vector is kept per
sum (the first reached; coordinates are added in index order).
"""

from __future__ import annotations

from math import comb
from typing import Sequence

from .poly import monomials_of_degree
from .scalar import mpq


def weight_sum_table(weights: Sequence, rmax: int) -> list[dict]:
    """``table[r] = {sum: [witness exponent tuple, count]}`` for ``0 <= r <= rmax``.

    ``count`` is the number of exponent vectors of degree ``r`` with that sum.
    """
    n = len(weights)
    table: list[dict] = [dict() for _ in range(rmax + 1)]
    table[0][mpq(0)] = [(0,) * n, 1]
    for i, w in enumerate(weights):
        for r in range(1, rmax + 1):
            prev = table[r - 1]
            cur = table[r]
            for s, (lam, cnt) in list(prev.items()):
                t = s + w
                entry = cur.get(t)
                if entry is None:
                    lst = list(lam)
                    lst[i] += 1
                    cur[t] = [tuple(lst), cnt]
                else:
                    entry[1] += cnt
    return table


def shell_size(n: int, r: int) -> int:
    """Number of exponent vectors of length ``n`` and total degree ``r``."""
    return comb(r + n - 1, n - 1) if n else int(r == 0)


def brute_force_monomials(n: int, rmin: int, rmax: int):
    for r in range(rmin, rmax + 1):
        yield from monomials_of_degree(n, r)
