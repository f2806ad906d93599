from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_nf.birkhoff import ss_eigenvalue
from poisson_nf.lie import sl3
from poisson_nf.multivector import apply_vf
from poisson_nf.poly import Poly, monomials_of_degree
from poisson_nf.resonance import hnf, integer_kernel, resonance_lattice, resonant_monomials
from poisson_nf.scalar import QI


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def sl3_alpha():
    a = sl3()
    return a.weight_pairing([QI(mpq(2, 3), mpq(1, 3)), QI(mpq(1, 3), mpq(2, 3))])


def test_hnf_canonical():
    assert hnf([[2, 4], [1, 3]]) == [[1, 1], [0, 2]]
    assert hnf([[0, 0], [3, 6]]) == [[3, 6]]


def test_integer_kernel_small():
    K = integer_kernel([[1, 1, 0]], 3)
    assert K == [[1, -1, 0], [0, 0, 1]]
    assert integer_kernel([], 2) == [[1, 0], [0, 1]]


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=3))
@settings(max_examples=60, deadline=None)
def test_kernel_is_kernel(A):
    K = integer_kernel(A, 4)
    for v in K:
        assert all(_dot(row, v) == 0 for row in A)
    assert K == hnf(K, 4)


def test_sl2_generic():
    data = resonance_lattice([], [2, -2, 0])
    assert data.toric_degree == 1
    assert data.Q_basis == [[1, -1, 0]]
    assert data.R_basis == [[1, 1, 0], [0, 0, 1]]


def test_symplectic_lattice():
    data = resonance_lattice([1, 2], [])
    # functional (-1, -2, 1, 2): x1*y1, x2*y2 and x1^2*y2 are resonant
    assert all(_dot(r, data.functional) == 0 for r in data.R_basis)
    assert data.R_basis == hnf([[1, 0, 1, 0], [0, 1, 0, 1], [2, 0, 0, 1]], 4)
    assert data.resonance_degree == 3 and data.toric_degree == 1


def test_sl3_lattice():
    data = resonance_lattice([], sl3_alpha())
    assert data.resonance_degree == 6 and data.toric_degree == 2
    assert len(resonant_monomials(data, 4)) == 44


def test_resonant_monomials_match_brute_force_mixed():
    gamma, alpha = [mpq(1, 2)], [mpq(1, 2), mpq(-1, 2), 0]
    data = resonance_lattice(gamma, alpha)
    got = set(resonant_monomials(data, 4))
    want = {
        e
        for r in range(1, 5)
        for e in monomials_of_degree(5, r)
        if ss_eigenvalue(e[:1], e[1:2], e[2:], gamma, alpha) == 0
    }
    assert got == want


def test_generators_commute_with_resonant_monomials():
    data = resonance_lattice([], [2, -2, 0])
    (Z,) = data.generators
    for e in resonant_monomials(data, 4):
        assert apply_vf(Z, Poly.monomial(e)).is_zero()
    assert not apply_vf(Z, Poly.var(3, 0)).is_zero()
