import mpmath
import pytest
from gmpy2 import mpq

from poisson_nf.diagnostics import (
    majorant_norm,
    omega_sequence,
    radii_from_omegas,
    radii_schedule,
    siegel_check,
    sup_norm_estimate,
)
from poisson_nf.errors import ResonanceError
from poisson_nf.lie import sl3
from poisson_nf.linearize import theta_eigenvalue
from poisson_nf.poly import Poly, monomials_of_degree
from poisson_nf.scalar import QI
from poisson_nf.shells import shell_size, weight_sum_table

W = [mpq(1, 5), mpq(-1, 5), 0]


def test_weight_table_counts_match_shells():
    table = weight_sum_table(W, 6)
    for r in range(7):
        assert sum(c for _, c in table[r].values()) == shell_size(3, r)
        for s, (lam, _) in table[r].items():
            assert sum(lam) == r and sum(a * b for a, b in zip(lam, W)) == s


def test_omega_matches_brute_force():
    prof = omega_sequence(W, 3)
    for d in range(1, 4):
        best = min(
            abs(theta_eigenvalue(lam, W, r)) for r in range(2, 2 ** (d + 1) + 1) for lam in monomials_of_degree(3, r)
        )
        assert prof.omega(d) == min(best, mpq(1, 2 * d))


def test_omega_zero_divisor():
    with pytest.raises(ResonanceError) as e:
        omega_sequence([1, -1, 0], 2)
    assert e.value.witness["degree"] == 2


def test_gaussian_weights_use_squared_moduli():
    a = sl3()
    w = a.weight_pairing([QI(mpq(1, 30), mpq(1, 60)), QI(mpq(1, 60), mpq(1, 30))])
    prof = omega_sequence(w, 2, 30)
    assert not prof.exact
    for (d, sq), (_, om) in zip(prof.omega_sq, prof.omegas):
        assert abs(mpmath.mpf(int(sq.numerator)) / int(sq.denominator) - om**2) < mpmath.mpf(10) ** -25


def test_monotone_profile_and_radii():
    prof = omega_sequence(W, 5)
    om = [w for _, w in prof.omegas]
    assert all(a >= b for a, b in zip(om, om[1:]))
    assert all(w <= mpq(1, 2 * d) for d, w in prof.omegas)
    bp = [b for _, b in prof.bruno_partials]
    assert all(a <= b for a, b in zip(bp, bp[1:]))
    rs = radii_schedule(prof)
    assert rs.interleaved()


def test_radii_lemma_for_capped_sequence():
    omegas = [mpq(1, 2 * d) for d in range(1, 60)]
    checks = radii_from_omegas(omegas).lemma_checks()
    assert all(c["a"] for c in checks if c["d"] >= 12)
    assert all(c["b"] for c in checks if c["d"] >= 41 and c["b"] is not None)


def test_radii_reject_nonpositive():
    with pytest.raises(ResonanceError):
        radii_from_omegas([mpq(1, 2), 0])


def test_siegel_exact_and_violation():
    rep = siegel_check([mpq(1, 3), mpq(-1, 7)], mpq(1, 100), 2, 8)
    assert rep.consistent and not rep.s_exceeds_n
    assert rep.min_margin == mpq(20, 7)
    bad = siegel_check([mpq(1, 2), mpq(-1, 2)], mpq(1, 10), 1, 4)
    assert not bad.consistent
    assert bad.violations[0]["divisor"] == "0"


def test_siegel_flags_large_exponent():
    assert siegel_check([mpq(1, 3)], mpq(1, 100), 3, 5).s_exceeds_n


def test_majorant_norm():
    f = Poly(2, {(1, 0): mpq(-3), (1, 1): mpq(2)})
    assert majorant_norm(f, mpq(1, 2)) == mpq(2)
    assert sup_norm_estimate(f, mpq(1, 2), samples=64) <= mpmath.mpf(2) + mpmath.mpf(10) ** -20
