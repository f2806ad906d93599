import random

import pytest
from gmpy2 import mpq

from poisson_nf.birkhoff import (
    BirkhoffInput,
    birkhoff_normalize,
    check_semisimple_claim,
    map_is_poisson,
    resonant_split,
    semisimple_hamiltonian,
    split_hamiltonian_field,
    ss_eigenvalue,
    stage_component,
    stage_of,
)
from poisson_nf.errors import DimensionError, InconsistentLinearPartError, NotInCartanError, PreconditionError
from poisson_nf.lie import ProblemSpace, product_poisson, sl2, symplectic_poisson
from poisson_nf.multivector import poisson_bracket
from poisson_nf.poly import Poly
from poisson_nf.textio import parse_poly

SP = ProblemSpace(1, sl2(), 4)
NAMES = SP.names()


def P(text):
    return parse_poly(text, NAMES)


def test_stage_numbers():
    assert stage_of(0, 1) == 1 and stage_of(2, 0) == 1 and stage_of(1, 1) == 1
    assert stage_of(0, 3) == 3 and stage_of(3, 0) == 2 and stage_of(1, 2) == 2
    f = P("x1*y1 + z3 + z3^2 + x1*z3 + x1^3")
    assert stage_component(f, 1, 2) == P("x1*y1 + z3 + x1*z3")
    assert stage_component(f, 2, 2) == P("z3^2 + x1^3")


def test_ss_eigenvalue():
    assert ss_eigenvalue([1], [0], [0, 0, 0], [mpq(1, 2)], [2, -2, 0]) == mpq(-1, 2)
    assert ss_eigenvalue([1], [1], [1, 1, 4], [3], [2, -2, 0]) == 0
    with pytest.raises(DimensionError):
        ss_eigenvalue([1], [], [0], [1], [0])


def test_resonant_split_solves_homological_equation():
    gamma, alpha = [mpq(1, 2)], [mpq(2, 5), mpq(-2, 5), 0]
    Pi = product_poisson(SP)
    H_ss = semisimple_hamiltonian(5, 1, gamma, P("1/5*z3"))
    f = P("x1*z1 + y1^2*z3 + x1*y1*z3 + z1*z2")
    K, Kt = resonant_split(f, gamma, alpha)
    assert Kt == P("x1*y1*z3 + z1*z2")
    assert poisson_bracket(H_ss, K, Pi) + Kt == f


def test_split_field_components():
    Pi = product_poisson(SP)
    sym, trans = split_hamiltonian_field(P("x1*z3"), SP)
    assert all(k[0] < 2 for k, _ in sym.items()) and all(k[0] >= 2 for k, _ in trans.items())
    with pytest.raises(ValueError):
        split_hamiltonian_field(P("x1"), Pi)


def test_normal_form_example():
    H = P("1/2*x1*y1 + 1/5*z3 + x1*z1*z2 - 3*y1^2*z3 + 1/3*z3^2 + x1^2*y1^2")
    inp = BirkhoffInput(SP, H, [mpq(1, 2)], P("1/5*z3"))
    res = birkhoff_normalize(inp)
    assert res.ok
    assert res.H_normalized == P("1/2*x1*y1 + 1/5*z3 + 1/3*z3^2 + x1^2*y1^2")
    # images are kept one degree higher so brackets are exact through N
    assert res.map.N == 5
    assert map_is_poisson(res.map, product_poisson(SP), 4)
    assert check_semisimple_claim(inp, res) == {"normalized": True, "original": True}


def test_pure_symplectic_case():
    sp = ProblemSpace(2, None, 4)
    x1, x2, y1, y2 = (Poly.var(4, i) for i in range(4))
    H = x1 * y1 + (x2 * y2).scale(mpq(1, 3)) + x1 * x1 * y2 + y1 * y1 * y1
    res = birkhoff_normalize(BirkhoffInput(sp, H, [1, mpq(1, 3)], Poly.zero(4)))
    assert res.ok
    assert not poisson_bracket(res.H_normalized, res.H_ss, symplectic_poisson(2)).truncate(4)


def test_rejects_bidegree_one_zero():
    with pytest.raises(PreconditionError):
        birkhoff_normalize(BirkhoffInput(SP, P("x1 + 1/2*x1*y1 + z3"), [mpq(1, 2)], P("z3")))


def test_rejects_inconsistent_linear_part():
    with pytest.raises(InconsistentLinearPartError):
        birkhoff_normalize(BirkhoffInput(SP, P("1/2*x1*y1 + z3 + y1^2"), [mpq(1, 2)], P("z3")))


def test_rejects_h1_outside_cartan():
    with pytest.raises(NotInCartanError):
        birkhoff_normalize(BirkhoffInput(SP, P("1/2*x1*y1 + z1"), [mpq(1, 2)], P("z1")))


def test_loop_counts_are_small_on_random_cases():
    rng = random.Random(5)
    for _ in range(3):
        H = P("1/2*x1*y1 + 1/7*z3")
        for _ in range(5):
            e = tuple(rng.randint(0, 2) for _ in range(5))
            if sum(e) < 2 or (sum(e[:2]), sum(e[2:])) == (2, 0):
                continue
            H = H + Poly(5, {e: mpq(rng.randint(1, 3), rng.randint(1, 3))})
        res = birkhoff_normalize(BirkhoffInput(SP, H, [mpq(1, 2)], P("1/7*z3")))
        assert res.ok
        assert all(entry["iterations"] <= SP.n + 1 for entry in res.loop_log)
