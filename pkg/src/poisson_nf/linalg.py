"""Exact dense matrices and univariate polynomials over Q and Q(i).

Matrices are lists of row lists of scalars. Univariate polynomials are
coefficient lists, lowest degree first, with no trailing zeros.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionError
from .scalar import QI, as_scalar, mpq

Matrix = list  # list[list[scalar]]

_ZERO = mpq(0)
_ONE = mpq(1)


def _inv(c):
    return QI(1) / c if isinstance(c, QI) else _ONE / c


def _norm(c):
    """Demote Gaussian rationals with zero imaginary part to mpq."""
    if isinstance(c, QI) and c.im == 0:
        return c.re
    return c


def identity(n: int) -> Matrix:
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[_ZERO] * (n if m is None else m) for _ in range(n)]


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    M = zeros(n)
    for i, e in enumerate(entries):
        M[i][i] = _norm(as_scalar(e))
    return M


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[_norm(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[_norm(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[_norm(a * c) for a in row] for row in A]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if A and len(A[0]) != len(B):
        raise DimensionError("matrix shapes do not match")
    cols = list(zip(*B)) if B else []
    out = []
    for row in A:
        out.append([_norm(sum((a * b for a, b in zip(row, col) if a and b), _ZERO)) for col in cols])
    return out


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def is_zero_matrix(A: Matrix) -> bool:
    return all(not a for row in A for a in row)


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    n = len(A)
    M = [list(row) + e for row, e in zip(A, identity(n))]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = _inv(M[c][c])
        M[c] = [_norm(v * inv) for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [_norm(a - f * b) for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def mat_power(A: Matrix, k: int) -> Matrix:
    out = identity(len(A))
    for _ in range(k):
        out = mat_mul(out, A)
    return out


def is_nilpotent(A: Matrix) -> bool:
    n = len(A)
    if n == 0:
        return True
    return is_zero_matrix(mat_power(A, n))


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


# univariate polynomials ------------------------------------------------------


def upoly_trim(p: list) -> list:
    p = [_norm(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def upoly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return upoly_trim([(a[i] if i < len(a) else _ZERO) - (b[i] if i < len(b) else _ZERO) for i in range(n)])


def upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return upoly_trim(out)


def upoly_divmod(a: list, b: list) -> tuple[list, list]:
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    a = upoly_trim(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 0)
    lead = _inv(b[-1])
    while len(a) >= len(b):
        k = len(a) - len(b)
        c = _norm(a[-1] * lead)
        q[k] = c
        a = upoly_sub(a, [_ZERO] * k + [c * x for x in b])
    return upoly_trim(q), a


def upoly_monic(p: list) -> list:
    p = upoly_trim(p)
    if not p:
        return p
    inv = _inv(p[-1])
    return [_norm(c * inv) for c in p]


def upoly_gcd(a: list, b: list) -> list:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def upoly_deriv(p: list) -> list:
    return upoly_trim([c * i for i, c in enumerate(p)][1:])


def upoly_eval_matrix(p: list, A: Matrix) -> Matrix:
    """``p(A)`` by Horner's rule."""
    n = len(A)
    out = zeros(n)
    for c in reversed(p):
        out = mat_mul(out, A)
        for i in range(n):
            out[i][i] = _norm(out[i][i] + c)
    return out


def charpoly(A: Matrix) -> list:
    """Characteristic polynomial ``det(tI - A)`` by Faddeev-LeVerrier (char 0)."""
    n = len(A)
    coeffs = [_ZERO] * (n + 1)
    coeffs[n] = _ONE
    M = zeros(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        for i in range(n):
            M[i][i] = _norm(M[i][i] + coeffs[n - k + 1])
        AM = mat_mul(A, M)
        tr = sum((AM[i][i] for i in range(n)), _ZERO)
        coeffs[n - k] = _norm(-tr / k)
    return coeffs


def squarefree_part(p: list) -> list:
    p = upoly_monic(p)
    g = upoly_gcd(p, upoly_deriv(p))
    return upoly_monic(upoly_divmod(p, g)[0])


def jordan_chevalley(A: Matrix) -> tuple[Matrix, Matrix]:
    """Additive Jordan-Chevalley decomposition ``A = S + N``.

    Newton iteration ``S <- S - q(S) q'(S)^-1`` with ``q`` the squarefree part
    of the characteristic polynomial. It stays in the field of the entries
    and needs no eigenvalues.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionError("matrix must be square")
    if n == 0:
        return [], []
    q = squarefree_part(charpoly(A))
    dq = upoly_deriv(q)
    S = [list(row) for row in A]
    for _ in range(n + 1):
        qS = upoly_eval_matrix(q, S)
        if is_zero_matrix(qS):
            break
        S = mat_sub(S, mat_mul(qS, mat_inverse(upoly_eval_matrix(dq, S))))
    else:
        raise ArithmeticError("Jordan-Chevalley iteration did not converge")
    return S, mat_sub(A, S)


def is_diagonalizable(A: Matrix) -> bool:
    """True when the minimal polynomial is squarefree, i.e. ``q(A) = 0``."""
    return is_zero_matrix(upoly_eval_matrix(squarefree_part(charpoly(A)), A))
