"""Acceptance suite: one check per criterion, one PASS/FAIL line each.

Under pytest the lines appear in the terminal summary. Run the file directly
(``python tests/test_acceptance.py``) to print them without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest
from gmpy2 import mpq

sys.path.insert(0, str(Path(__file__).parent))

from poisson_nf.birkhoff import (  # noqa: E402
    BirkhoffInput,
    birkhoff_normalize,
    check_semisimple_claim,
    map_is_poisson,
    semisimple_hamiltonian,
    ss_eigenvalue,
)
from poisson_nf.diagnostics import omega_sequence, radii_schedule  # noqa: E402
from poisson_nf.lie import BUILTIN_NAMES, ProblemSpace, builtin_algebra, lie_poisson, product_poisson, sl2, sl3  # noqa: E402
from poisson_nf.linearize import HomogeneousPair, linearize, push_linear_field, theta_eigenvalue, verify_map  # noqa: E402
from poisson_nf.multivector import (  # noqa: E402
    apply_vf,
    euler_field,
    flow_pushforward,
    hamiltonian_vf,
    poisson_bracket,
    schouten,
)
from poisson_nf.poly import Poly, monomials_of_degree  # noqa: E402
from poisson_nf.resonance import resonance_lattice, resonant_monomials  # noqa: E402
from poisson_nf.scalar import QI  # noqa: E402
from poisson_nf.textio import parse_poly, variable_names  # noqa: E402
from strategies import random_multivec, random_poly, sign  # noqa: E402

RESULTS: dict[int, tuple[str, bool, str, float]] = {}

TITLES = {
    1: "structure constants: [Pi, Pi] = 0 for sl2, sl3, so3",
    2: "Euler identity [I, Pi_1] = -Pi_1",
    3: "linearization round trip, 20 cases each on sl2 and sl3, N = 8",
    4: "block and degree schedules agree",
    5: "Birkhoff residual, 20 cases, l = 1, sl2, N = 5",
    6: "semisimple part of the linear part is Hamiltonian",
    7: "sl2 resonant monomials through degree 4",
    8: "sl3 resonant monomials through degree 4",
    9: "omega_d against brute-force divisors, d <= 3",
    10: "omega monotone and capped, Bruno sums, radii interleave",
    11: "bracket calculus property suite, 200 cases each",
}

SL2_H1 = Poly.var(3, 2, mpq(1, 10))
SL3_H1 = Poly.var(8, 6, mpq(1, 20)) + Poly.var(8, 7, mpq(1, 30))


# shared case generators ------------------------------------------------------------------


def _linearization_cases():
    rng = random.Random(20240301)
    cases = []
    for alg, h1 in ((sl2(), SL2_H1), (sl3(), SL3_H1)):
        for _ in range(20):
            g = random_poly(rng, alg.dim, [3, 4], rng.randint(3, 6))
            cases.append((alg, h1, g, push_linear_field(alg, h1, g, 8)))
    return cases


def _birkhoff_cases():
    rng = random.Random(5150)
    sp = ProblemSpace(1, sl2(), 5)
    n = sp.n
    cases = []
    while len(cases) < 20:
        gamma = [mpq(rng.choice([1, 2, 3, 5]), rng.choice([2, 3, 7]))]
        h1 = Poly.var(n, 4, mpq(rng.choice([1, 2, 3]), rng.choice([5, 7, 11])))
        H = semisimple_hamiltonian(n, 1, gamma, h1)
        terms = {}
        for _ in range(rng.randint(4, 8)):
            e = rng.choice(list(monomials_of_degree(n, rng.choice([2, 3]))))
            if (sum(e[:2]), sum(e[2:])) == (2, 0):
                continue
            terms[e] = mpq(rng.randint(-3, 3), rng.randint(1, 4))
        H = H + Poly(n, terms)
        cases.append(BirkhoffInput(sp, H, gamma, h1))
    return cases


_CACHE: dict[str, object] = {}


def _cached(key, fn):
    if key not in _CACHE:
        _CACHE[key] = fn()
    return _CACHE[key]


def _linearized(schedule):
    def run():
        out = []
        for alg, h1, g, X in _cached("lin_cases", _linearization_cases):
            sp = ProblemSpace(0, alg, 8)
            out.append((alg, h1, X, linearize(HomogeneousPair.from_space(sp, X), schedule)))
        return out

    return _cached(f"lin_{schedule}", run)


def _birkhoff_results():
    return _cached("birkhoff", lambda: [(inp, birkhoff_normalize(inp)) for inp in _birkhoff_cases()])


# criteria -------------------------------------------------------------------------------------


def check_1():
    worst = 0.0
    for name in BUILTIN_NAMES:
        t = time.perf_counter()
        Pi = lie_poisson(builtin_algebra(name))
        if not schouten(Pi, Pi).is_zero():
            return False, f"{name}: nonzero self-bracket"
        worst = max(worst, time.perf_counter() - t)
    return worst < 1.0, f"{len(BUILTIN_NAMES)} algebras, slowest {worst:.3f}s"


def check_2():
    for name in BUILTIN_NAMES:
        alg = builtin_algebra(name)
        Pi = lie_poisson(alg)
        if schouten(euler_field(alg.dim), Pi) != -Pi:
            return False, name
    return True, ", ".join(BUILTIN_NAMES)


def check_3():
    slowest = {}
    for alg, h1, g, X in _cached("lin_cases", _linearization_cases):
        t = time.perf_counter()
        res = linearize(HomogeneousPair.from_space(ProblemSpace(0, alg, 8), X), "block")
        target = euler_field(alg.dim) + hamiltonian_vf(h1, lie_poisson(alg))
        ok = (
            res.ok
            and res.linear_field == target
            and all(not v for v in res.residual_by_degree.values())
            and res.poisson_preserved
            and verify_map(X, res)
        )
        if not ok:
            return False, f"{alg.name}: residual or map check failed"
        slowest[alg.name] = max(slowest.get(alg.name, 0.0), time.perf_counter() - t)
    ok = slowest["sl2"] < 60 and slowest["sl3"] < 300
    return ok, "40 cases, slowest " + ", ".join(f"{k} {v:.2f}s" for k, v in slowest.items())


def check_4():
    for (alg, _, _, a), (_, _, _, b) in zip(_linearized("block"), _linearized("degree")):
        if not (a.ok and b.ok and a.linear_field == b.linear_field):
            return False, alg.name
    return True, "40 cases, both schedules zero residual"


def check_5():
    Pi = product_poisson(ProblemSpace(1, sl2(), 5))
    n = 5
    max_iter = 0
    slowest = 0.0
    for inp, _ in _birkhoff_results():
        t = time.perf_counter()
        res = birkhoff_normalize(inp)
        slowest = max(slowest, time.perf_counter() - t)
        if poisson_bracket(res.H_normalized, res.H_ss, Pi, 5).truncate(5):
            return False, "nonzero {H_normalized, H_ss}"
        if not (res.ok and res.poisson_preserved and map_is_poisson(res.map, Pi, 5)):
            return False, "map is not Poisson through degree 5"
        iters = max(e["iterations"] for e in res.loop_log)
        if iters > n + 1:
            return False, f"loop count {iters} exceeds {n + 1}"
        max_iter = max(max_iter, iters)
    return slowest < 120, f"20 cases, max loop count {max_iter} (bound {n + 1}), slowest {slowest:.2f}s"


def check_6():
    for inp, res in _birkhoff_results():
        claim = check_semisimple_claim(inp, res)
        if not all(claim.values()):
            return False, str(claim)
    return True, "20 cases, normalized and original coordinates"


def check_7():
    names = variable_names(0, 3)
    data = resonance_lattice([], sl2().weight_pairing([1]))
    got = resonant_monomials(data, 4)
    want = {
        parse_poly(s, names).items()[0][0]
        for s in ("z3", "z3^2", "z1*z2", "z3^3", "z1*z2*z3", "z3^4", "z1^2*z2^2", "z1*z2*z3^2")
    }
    return set(got) == want and len(got) == len(want) and data.toric_degree == 1, f"{len(got)} monomials"


def check_8():
    alpha = sl3().weight_pairing([QI(mpq(2, 3), mpq(1, 3)), QI(mpq(1, 3), mpq(2, 3))])
    t = time.perf_counter()
    got = resonant_monomials(resonance_lattice([], alpha), 4)
    for e in got:
        # root coordinates (E12, E23, E31) and their opposites (E21, E32, E13)
        if not e[0] - e[3] == e[1] - e[4] == e[2] - e[5]:
            return False, f"{e} violates a1-b1 = a2-b2 = a3-b3"
    brute = [
        e for r in range(1, 5) for e in monomials_of_degree(8, r) if ss_eigenvalue([], [], e, [], alpha) == 0
    ]
    ok = set(got) == set(brute) and len(got) == len(brute)
    return ok and time.perf_counter() - t < 30, f"{len(got)} monomials, brute force agrees"


def check_9():
    weight_sets = [
        [mpq(1, 5), mpq(-1, 5), 0],
        [mpq(1, 3), mpq(-1, 3), 0],
        [mpq(2, 7), mpq(-2, 7), 0],
        [mpq(3, 10), mpq(-3, 10), 0],
    ]
    for w in weight_sets:
        prof = omega_sequence(w, 3)
        for d in range(1, 4):
            best = min(
                abs(theta_eigenvalue(lam, w, r))
                for r in range(2, 2 ** (d + 1) + 1)
                for lam in monomials_of_degree(3, r)
            )
            if prof.omega(d) != min(best, mpq(1, 2 * d)):
                return False, f"weights {w}, d = {d}"
    return True, f"{len(weight_sets)} weight sets, exact equality"


def check_10():
    weight_sets = [
        [mpq(1, 5), mpq(-1, 5), 0],
        [mpq(1, 3), mpq(-1, 3), 0],
        [mpq(1, 20), mpq(-1, 20), 0],
        sl3().weight_pairing([mpq(1, 30), mpq(1, 70)]),
        sl3().weight_pairing([QI(mpq(1, 30), mpq(1, 60)), QI(mpq(1, 60), mpq(1, 30))]),
    ]
    for w in weight_sets:
        prof = omega_sequence(w, 5 if len(w) == 3 else 4, 64)
        om = [x for _, x in prof.omegas]
        if any(a < b for a, b in zip(om, om[1:])):
            return False, "omega increases"
        if any(x > mpq(1, 2 * d) for d, x in prof.omegas):
            return False, "omega above cap"
        bp = [b for _, b in prof.bruno_partials]
        if any(a > b for a, b in zip(bp, bp[1:])):
            return False, "Bruno partial sums decrease"
        if not radii_schedule(prof).interleaved():
            return False, "radii do not interleave"
    return True, f"{len(weight_sets)} profiles at 64 digits"


def check_11():
    rng = random.Random(777)
    n = 3
    counts = dict.fromkeys(("antisymmetry", "jacobi", "leibniz", "flow"), 0)
    while counts["antisymmetry"] < 200:
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        if p + q < 1:
            continue
        a, b = random_multivec(rng, p, n, 4), random_multivec(rng, q, n, 4)
        if schouten(a, b) != schouten(b, a).scale(-sign((p - 1) * (q - 1))):
            return False, f"antisymmetry, grades {p}, {q}"
        counts["antisymmetry"] += 1
    while counts["jacobi"] < 200:
        p, q, r = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
        if min(p + q, q + r, r + p) < 1 or p + q + r < 2:
            continue
        a, b, c = (random_multivec(rng, g, n, 2) for g in (p, q, r))
        total = (
            schouten(a, schouten(b, c)).scale(sign((p - 1) * (r - 1)))
            + schouten(b, schouten(c, a)).scale(sign((q - 1) * (p - 1)))
            + schouten(c, schouten(a, b)).scale(sign((r - 1) * (q - 1)))
        )
        if not total.is_zero():
            return False, f"jacobi, grades {p}, {q}, {r}"
        counts["jacobi"] += 1
    structures = [lie_poisson(sl2()), lie_poisson(builtin_algebra("so3"))]
    while counts["leibniz"] < 200:
        Pi = structures[counts["leibniz"] % len(structures)]
        f, g, h = (random_poly(rng, n, range(5), 4) for _ in range(3))
        if apply_vf(hamiltonian_vf(f, Pi), g) != poisson_bracket(f, g, Pi):
            return False, "X_f(g) != {f, g}"
        if poisson_bracket(f, g * h, Pi) != poisson_bracket(f, g, Pi) * h + g * poisson_bracket(f, h, Pi):
            return False, "Leibniz rule"
        counts["leibniz"] += 1
    Pi = lie_poisson(sl2())
    while counts["flow"] < 200:
        G = random_poly(rng, n, [3, 4], rng.randint(1, 4))
        N = rng.randint(2, 6)
        T = random_poly(rng, n, range(5), 4) if counts["flow"] % 2 else random_multivec(rng, rng.randint(1, 2), n, 3)
        back = flow_pushforward(flow_pushforward(T, G, Pi, N), -G, Pi, N)
        if back != T.truncate(N):
            return False, "flow_pushforward is not inverted by the opposite generator"
        counts["flow"] += 1
    return True, ", ".join(f"{k} {v}" for k, v in counts.items())


CHECKS = {k: globals()[f"check_{k}"] for k in TITLES}


def _run(k: int) -> tuple[bool, str]:
    t = time.perf_counter()
    try:
        ok, detail = CHECKS[k]()
    except Exception as e:  # recorded as a failure, then re-raised by the test
        RESULTS[k] = (TITLES[k], False, f"{type(e).__name__}: {e}", time.perf_counter() - t)
        raise
    RESULTS[k] = (TITLES[k], ok, detail, time.perf_counter() - t)
    return ok, detail


def format_line(k: int) -> str:
    title, ok, detail, secs = RESULTS[k]
    return f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title} ({detail}; {secs:.2f}s)"


@pytest.mark.parametrize("k", sorted(TITLES))
def test_criterion(k):
    ok, detail = _run(k)
    print(format_line(k))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k in sorted(TITLES):
        try:
            _run(k)
        except Exception:
            pass
        print(format_line(k))
        failed += not RESULTS[k][1]
    sys.exit(1 if failed else 0)
