import pytest
from gmpy2 import mpq

from poisson_nf.errors import DimensionError, NotInCartanError, ValidationError
from poisson_nf.lie import (
    BUILTIN_NAMES,
    ProblemSpace,
    abelian,
    builtin_algebra,
    lie_poisson,
    lie_validate,
    make_algebra,
    product_poisson,
    sl2,
    sl3,
    so3,
)
from poisson_nf.multivector import euler_field, schouten
from poisson_nf.poly import Poly
from poisson_nf.scalar import QI


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_are_poisson(name):
    alg = builtin_algebra(name)
    Pi = lie_poisson(alg)
    assert schouten(Pi, Pi).is_zero()
    assert schouten(euler_field(alg.dim), Pi) == -Pi


def test_sl2_constants():
    a = sl2()
    assert a.c(2, 0, 0) == 2 and a.c(2, 1, 1) == -2 and a.c(0, 1, 2) == 1
    assert a.c(0, 2, 0) == -2
    assert a.weights == ((2,), (-2,), (0,))


def test_sl3_weights_and_validation():
    a = sl3()
    assert a.dim == 8 and a.rank == 2 and a.cartan_indices == (6, 7)
    assert lie_validate(a).ok
    # Cartan coordinates have weight zero
    assert all(w == 0 for w in a.weights[6]) and all(w == 0 for w in a.weights[7])


def test_so3_has_no_root_basis():
    rep = lie_validate(so3())
    assert rep.checks["antisymmetry"] and rep.checks["jacobi"]
    assert not rep.checks["weights"]
    with pytest.raises(NotInCartanError):
        so3().weight_pairing([])


def test_jacobi_violation_reported():
    # [z1,z2] = z3, [z2,z3] = z1, [z1,z3] = z1 violates Jacobi
    bad = make_algebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}}, [], None, "bad")
    rep = lie_validate(bad)
    assert not rep.checks["jacobi"]
    assert rep.failures["jacobi"]
    with pytest.raises(ValidationError):
        lie_poisson(bad)


def test_weight_pairing_and_cartan_coefficients():
    a = sl3()
    h1 = Poly(8, {(0,) * 6 + (1, 0): QI(mpq(2, 3), mpq(1, 3)), (0,) * 7 + (1,): QI(mpq(1, 3), mpq(2, 3))})
    alpha = a.weight_pairing(a.cartan_coefficients(h1))
    assert alpha[:6] == [1, QI(0, 1), QI(-1, -1), -1, QI(0, -1), QI(1, 1)]
    with pytest.raises(NotInCartanError):
        a.cartan_coefficients(Poly.var(8, 0))
    with pytest.raises(DimensionError):
        a.cartan_coefficients(Poly.var(3, 0))


def test_abelian_is_zero():
    assert lie_poisson(abelian(4)).is_zero()


def test_product_structure():
    sp = ProblemSpace(2, sl2(), 4)
    Pi = product_poisson(sp)
    assert sp.n == 7 and sp.names()[:4] == ["x1", "x2", "y1", "y2"]
    assert schouten(Pi, Pi).is_zero()
    assert Pi.component(0, 2) == Poly.const(7, 1)


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_algebra("e8")
