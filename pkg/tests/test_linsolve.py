import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from poisson_nf.linsolve import InconsistentSystem, solve_dense, solve_sparse
from strategies import rationals


def _apply(rows, sol):
    return [sum((c * sol.get(k, 0) for k, c in r.items()), mpq(0)) for r in rows]


def test_underdetermined_sets_free_variables_to_zero():
    sol = solve_sparse([{0: 1, 1: 1}], [mpq(3)])
    assert sol == {0: 3}


def test_deterministic_pivot_is_smallest_column():
    sol = solve_sparse([{2: 1, 5: 2}], [mpq(4)])
    assert sol == {2: 4}


def test_inconsistent_row_tag():
    rows = [{0: 1}, {0: 2}]
    with pytest.raises(InconsistentSystem) as e:
        solve_sparse(rows, [mpq(1), mpq(3)], tags=["a", "b"])
    assert e.value.row_tag == "b"


def test_dense():
    assert solve_dense([[2, 1], [1, 3]], [3, 5]) == [mpq(4, 5), mpq(7, 5)]


@given(st.lists(st.dictionaries(st.integers(0, 5), rationals.filter(bool), min_size=1, max_size=3), min_size=1, max_size=6),
       st.dictionaries(st.integers(0, 5), rationals))
@settings(max_examples=80, deadline=None)
def test_consistent_systems_are_solved(rows, x):
    b = _apply(rows, x)
    sol = solve_sparse(rows, b)
    assert _apply(rows, sol) == b
    assert solve_sparse(rows, b) == sol
