import random

import pytest
from gmpy2 import mpq

from poisson_nf.errors import CohomologyError, NotInCartanError, PreconditionError, ResonanceError
from poisson_nf.lie import ProblemSpace, lie_poisson, sl2, sl3, so3
from poisson_nf.linearize import (
    HomogeneousPair,
    check_nonresonance,
    linearize,
    push_linear_field,
    recover_hamiltonian,
    schedule_blocks,
    theta_eigenvalue,
    verify_map,
)
from poisson_nf.multivector import MultiVec, euler_field, hamiltonian_vf
from poisson_nf.poly import Poly
from strategies import random_poly

SL2_H1 = Poly.var(3, 2, mpq(1, 10))


def test_schedules():
    assert schedule_blocks(8) == [(2, 2), (3, 4), (5, 8)]
    assert schedule_blocks(6) == [(2, 2), (3, 4), (5, 6)]
    assert schedule_blocks(4, "degree") == [(2, 2), (3, 3), (4, 4)]
    with pytest.raises(ValueError):
        schedule_blocks(4, "random")


def test_theta_eigenvalue():
    assert theta_eigenvalue((1, 1, 0), [2, -2, 0], 2) == 1
    assert theta_eigenvalue((0, 1, 1), [1, -1, 0], 2) == 0
    with pytest.raises(ValueError):
        theta_eigenvalue((1, 0, 0), [1, -1, 0], 2)


def test_nonresonance_report():
    assert check_nonresonance([mpq(1, 5), mpq(-1, 5), 0], 8).nonresonant
    rep = check_nonresonance([1, -1, 0], 3)
    assert rep.resonances[0]["degree"] == 2
    assert rep.resonances[0]["witness"] == [0, 1, 1]


def test_recover_hamiltonian_roundtrip():
    Pi = lie_poisson(sl2())
    h = random_poly(random.Random(3), 3, [1, 2, 3], 6)
    assert hamiltonian_vf(recover_hamiltonian(hamiltonian_vf(h, Pi), Pi, 4), Pi) == hamiltonian_vf(h, Pi)


def test_recover_hamiltonian_rejects_non_poisson_field():
    Pi = lie_poisson(sl2())
    Y = MultiVec.vector_field([Poly.var(3, 0) * Poly.var(3, 0), Poly.zero(3), Poly.zero(3)])
    with pytest.raises(CohomologyError):
        recover_hamiltonian(Y, Pi, 3)


def test_linear_field_is_already_normal():
    sp = ProblemSpace(0, sl2(), 5)
    X = euler_field(3) + hamiltonian_vf(SL2_H1, lie_poisson(sl2()))
    res = linearize(HomogeneousPair.from_space(sp, X))
    assert res.ok and not res.generators
    assert res.map == res.map.identity(3, 5)


@pytest.mark.parametrize("schedule", ["block", "degree"])
def test_sl2_roundtrip(schedule):
    rng = random.Random(11)
    g = random_poly(rng, 3, [3, 4], 4)
    X = push_linear_field(sl2(), SL2_H1, g, 6)
    res = linearize(HomogeneousPair.from_space(ProblemSpace(0, sl2(), 6), X), schedule)
    assert res.ok
    assert res.linear_field == euler_field(3) + hamiltonian_vf(SL2_H1, lie_poisson(sl2()))
    assert verify_map(X, res)
    assert res.h1 == SL2_H1


def test_schedules_agree_on_final_hamiltonian():
    g = Poly(3, {(1, 1, 1): 1, (0, 0, 3): mpq(-1, 2)})
    X = push_linear_field(sl2(), SL2_H1, g, 5)
    pair = HomogeneousPair.from_space(ProblemSpace(0, sl2(), 5), X)
    a, b = linearize(pair, "block"), linearize(pair, "degree")
    assert a.ok and b.ok and a.linear_field == b.linear_field


def test_resonant_problem_has_witness():
    h1 = Poly.var(3, 2, mpq(1, 2))
    X = push_linear_field(sl2(), h1, Poly(3, {(0, 1, 2): 1}), 4)
    with pytest.raises(ResonanceError) as e:
        linearize(HomogeneousPair.from_space(ProblemSpace(0, sl2(), 4), X))
    assert e.value.witness["monomial"] == [0, 1, 1]


def test_h1_outside_cartan():
    X = push_linear_field(sl2(), Poly.var(3, 0), Poly.zero(3), 3)
    with pytest.raises(NotInCartanError):
        linearize(HomogeneousPair.from_space(ProblemSpace(0, sl2(), 3), X))


def test_so3_cannot_be_linearized_without_root_basis():
    X = euler_field(3)
    with pytest.raises(NotInCartanError):
        linearize(HomogeneousPair.from_space(ProblemSpace(0, so3(), 3), X))


def test_precondition_violations():
    sp = ProblemSpace(0, sl2(), 3)
    with pytest.raises(PreconditionError):
        linearize(HomogeneousPair.from_space(sp, MultiVec.zero(1, 3)))
    shifted = euler_field(3) + MultiVec.vector_field([Poly.const(3, 1), Poly.zero(3), Poly.zero(3)])
    with pytest.raises(PreconditionError):
        linearize(HomogeneousPair.from_space(sp, shifted))


def test_sl3_small():
    h1 = Poly.var(8, 6, mpq(1, 20)) + Poly.var(8, 7, mpq(1, 30))
    g = Poly(8, {(1, 0, 0, 1, 0, 0, 1, 0): 1, (0,) * 7 + (3,): mpq(-2, 3)})
    X = push_linear_field(sl3(), h1, g, 5)
    res = linearize(HomogeneousPair.from_space(ProblemSpace(0, sl3(), 5), X))
    assert res.ok and verify_map(X, res)
