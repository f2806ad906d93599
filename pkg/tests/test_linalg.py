import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_nf.linalg import (
    charpoly,
    commutator,
    diag,
    identity,
    is_diagonalizable,
    is_nilpotent,
    is_zero_matrix,
    jordan_chevalley,
    mat_eq,
    mat_inverse,
    mat_mul,
    mat_sub,
)
from poisson_nf.scalar import QI
from strategies import rationals


def test_charpoly_of_diagonal():
    # coefficients low to high
    p = charpoly(diag([1, 2]))
    assert [mpq(x) for x in p] == [2, -3, 1]


def test_jordan_block_decomposition():
    A = [[2, 1], [0, 2]]
    S, Nn = jordan_chevalley(A)
    assert mat_eq(S, diag([2, 2]))
    assert mat_eq(Nn, [[0, 1], [0, 0]])


def test_rotation_is_semisimple_without_splitting():
    # eigenvalues +-i are not rational; the decomposition still works over Q
    A = [[0, -1], [1, 0]]
    S, Nn = jordan_chevalley(A)
    assert mat_eq(S, A) and is_zero_matrix(Nn)
    assert is_diagonalizable(A)


def test_nilpotent():
    assert is_nilpotent([[0, 1, 5], [0, 0, 1], [0, 0, 0]])
    assert not is_nilpotent([[1, 0], [0, 0]])


def test_inverse_gaussian():
    A = [[QI(1, 1), 2], [0, QI(0, 1)]]
    assert mat_eq(mat_mul(A, mat_inverse(A)), identity(2))
    with pytest.raises(ZeroDivisionError):
        mat_inverse([[1, 2], [2, 4]])


def _conjugated_jordan(rng: random.Random, n: int):
    J = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        J[i][i] = mpq(rng.choice([-2, -1, 1, 3]), rng.choice([1, 2]))
        if i + 1 < n and rng.random() < 0.5:
            J[i][i + 1] = mpq(1)
    while True:
        P = [[mpq(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            Pinv = mat_inverse(P)
            break
        except ZeroDivisionError:
            continue
    return mat_mul(mat_mul(P, J), Pinv)


@given(st.integers(0, 10_000), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_jordan_chevalley_properties(seed, n):
    A = _conjugated_jordan(random.Random(seed), n)
    S, Nn = jordan_chevalley(A)
    assert mat_eq(mat_sub(A, S), Nn)
    assert is_zero_matrix(commutator(S, Nn))
    assert is_nilpotent(Nn)
    assert is_diagonalizable(S)


@given(st.lists(rationals, min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_inverse_property(vals):
    A = [vals[:2], vals[2:]]
    if A[0][0] * A[1][1] - A[0][1] * A[1][0] == 0:
        return
    assert mat_eq(mat_mul(mat_inverse(A), A), identity(2))
