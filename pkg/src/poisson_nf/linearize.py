"""Truncated formal linearization of homogeneous Poisson structures.

Input: a linear Lie-Poisson bivector ``Pi`` and a vector field ``X`` with
``[X, Pi] = -Pi``. Then ``X = I + X_h`` for a function ``h`` recovered by a
sparse exact solve, and the normalization runs at the function level: a flow
of ``X_G`` sends ``I + X_h`` to ``I + X_h'`` with

    h' = h + sum_k c_k / k!,   c_1 = {G, h} - E(G),   c_(k+1) = {G, c_k}

where ``E(G) = sum_u (u - 1) G_u``. Choosing ``G_u`` with
``(u - 1) G_u + {h_1, G_u} = h_u`` removes the degree-``u`` part of ``h``.
The final residual is recomputed independently by pushing the vector field
``X`` through each generator with the Schouten bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    CohomologyError,
    NotInCartanError,
    PreconditionError,
    ResonanceError,
    ValidationError,
)
from .lie import LieAlgebraData, ProblemSpace, lie_poisson
from .linsolve import InconsistentSystem, solve_sparse
from .multivector import (
    CoordMap,
    MultiVec,
    euler_field,
    flow_pushforward,
    hamiltonian_vf,
    poisson_bracket,
    schouten,
)
from .poly import Poly, monomial_degree, sum_polys
from .scalar import Field, as_scalar, mpq
from .shells import weight_sum_table

__all__ = [
    "HomogeneousPair",
    "LinearizationResult",
    "NonresonanceReport",
    "recover_hamiltonian",
    "theta_eigenvalue",
    "check_nonresonance",
    "linearize",
    "schedule_blocks",
    "push_linear_field",
    "verify_map",
]


# first Poisson cohomology solve -------------------------------------------------


def _pi_columns(Pi: MultiVec) -> dict[int, list[tuple[int, tuple, object]]]:
    """For each target coordinate ``a``: terms ``(i, t, c)`` of ``Pi^{ia} = sum c x^t``."""
    out: dict[int, list] = {}
    for (i, j), f in Pi.comps.items():
        for t, c in f.items():
            out.setdefault(j, []).append((i, t, c))
            out.setdefault(i, []).append((j, t, -c))
    return out


def recover_hamiltonian(Y: MultiVec, Pi: MultiVec, N: int) -> Poly:
    """``h`` with ``hamiltonian_vf(h, Pi) = Y`` through degree ``N`` and ``h(0) = 0``.

    Only the monomials reachable from the support of ``Y`` enter the system.
    Free directions (Casimirs) are fixed to zero; any solution gives the same
    Hamiltonian field. Raises ``CohomologyError`` when some degree has no
    solution.
    """
    n = Y.nvars
    Y = Y.truncate(N)
    if Y.is_zero():
        return Poly.zero(n)
    bracket = schouten(Y, Pi, N)
    if not bracket.is_zero():
        deg = min(f.order() for f in bracket.comps.values())
        raise CohomologyError(
            f"the field is not Poisson: [Y, Pi] has a nonzero part of degree {deg}",
            {"degree": deg},
        )
    cols_of = _pi_columns(Pi)
    max_col_deg = N + 1 if any(f.constant_term() for f in Pi.comps.values()) else N

    def row_candidates(a: int, mu: tuple):
        for i, t, c in cols_of.get(a, ()):
            m = list(mu)
            ok = True
            for k, tk in enumerate(t):
                m[k] -= tk
                if m[k] < 0:
                    ok = False
                    break
            if not ok:
                continue
            m[i] += 1
            yield tuple(m), c * m[i]

    def column_rows(m: tuple):
        for i, mi in enumerate(m):
            if not mi:
                continue
            for a, terms in cols_of.items():
                for j, t, c in terms:
                    if j != i:
                        continue
                    mu = list(m)
                    mu[i] -= 1
                    for k, tk in enumerate(t):
                        mu[k] += tk
                    if sum(mu) <= N:
                        yield (a, tuple(mu))

    rhs_of: dict[tuple, object] = {}
    for (a,), f in Y.comps.items():
        for mu, c in f.items():
            rhs_of[(a, mu)] = c

    rows: dict[tuple, dict[tuple, object]] = {}
    columns: set[tuple] = set()
    pending = sorted(rhs_of)
    while pending:
        new_cols = []
        for key in pending:
            if key in rows:
                continue
            a, mu = key
            entries: dict[tuple, object] = {}
            for m, c in row_candidates(a, mu):
                if not 1 <= sum(m) <= max_col_deg:
                    continue
                v = entries.get(m, 0) + c
                if v:
                    entries[m] = v
                else:
                    entries.pop(m, None)
                if m not in columns:
                    columns.add(m)
                    new_cols.append(m)
            rows[key] = entries
        pending = []
        for m in sorted(set(new_cols)):
            for key in column_rows(m):
                if key not in rows:
                    pending.append(key)
        pending = sorted(set(pending))

    col_order = sorted(columns, key=lambda m: (sum(m), tuple(-e for e in m)))
    col_id = {m: k for k, m in enumerate(col_order)}
    keys = sorted(rows)
    sparse_rows = [{col_id[m]: c for m, c in rows[k].items()} for k in keys]
    rhs = [rhs_of.get(k, mpq(0)) for k in keys]
    try:
        sol = solve_sparse(sparse_rows, rhs, keys)
    except InconsistentSystem as e:
        a, mu = e.row_tag
        deg = monomial_degree(mu)
        raise CohomologyError(
            f"no Hamiltonian exists at degree {deg}",
            {"degree": deg, "component": a + 1, "monomial": list(mu)},
        ) from None
    h = Poly(n, {col_order[k]: v for k, v in sol.items()})
    if hamiltonian_vf(h, Pi, N).truncate(N) != Y:
        raise CohomologyError("recovered Hamiltonian failed the forward check", {"degree": N})
    return h


# the homological operator ---------------------------------------------------------


def theta_eigenvalue(lam: Sequence[int], h1_weights: Sequence, r: int):
    """``r - 1 + sum_i lam_i <alpha_i, h1>``: the eigenvalue of the homological operator on ``x^lam``."""
    if sum(lam) != r:
        raise ValueError(f"|lambda| = {sum(lam)} differs from r = {r}")
    if len(lam) != len(h1_weights):
        raise ValueError("exponent vector and weights have different lengths")
    s = mpq(r - 1)
    for e, w in zip(lam, h1_weights):
        if e:
            s = s + e * as_scalar(w)
    return s


@dataclass
class NonresonanceReport:
    N: int
    resonances: list[dict]  # {"degree", "witness", "count"}

    @property
    def nonresonant(self) -> bool:
        return not self.resonances

    def as_dict(self) -> dict:
        return {"N": self.N, "nonresonant": self.nonresonant, "resonances": self.resonances}


def check_nonresonance(h1_weights: Sequence, N: int) -> NonresonanceReport:
    """All degrees ``2 <= r <= N`` at which some eigenvalue vanishes, one witness each."""
    w = [as_scalar(x) for x in h1_weights]
    table = weight_sum_table(w, N)
    res = []
    for r in range(2, N + 1):
        hit = table[r].get(mpq(1 - r))
        if hit is not None:
            res.append({"degree": r, "witness": list(hit[0]), "count": hit[1]})
    return NonresonanceReport(N, res)


# schedules -----------------------------------------------------------------------


def schedule_blocks(N: int, schedule: str = "block") -> list[tuple[int, int]]:
    """Degree ranges solved per step: ``[2^d + 1, 2^(d+1)]`` or one degree at a time."""
    if schedule in ("degree", "degree-by-degree"):
        return [(r, r) for r in range(2, N + 1)]
    if schedule not in ("block", "block-doubling"):
        raise ValueError(f"unknown schedule {schedule!r}")
    out = []
    d = 0
    while 2**d + 1 <= N:
        out.append((2**d + 1, min(2 ** (d + 1), N)))
        d += 1
    return out


# pipeline ---------------------------------------------------------------------------


@dataclass
class HomogeneousPair:
    Pi: MultiVec
    X: MultiVec
    space: ProblemSpace

    @classmethod
    def from_space(cls, space: ProblemSpace, X: MultiVec) -> "HomogeneousPair":
        if space.algebra is None:
            raise PreconditionError("linearization needs a Lie algebra")
        return cls(lie_poisson(space.algebra), X, space)

    def check(self) -> None:
        sp = self.space
        N = sp.N
        if sp.l != 0:
            raise PreconditionError("linearization works on g* alone (l = 0)", {"l": sp.l})
        if sp.algebra is None:
            raise PreconditionError("linearization needs a Lie algebra")
        if self.Pi != lie_poisson(sp.algebra):
            raise PreconditionError("Pi must equal the linear Lie-Poisson bivector of the algebra")
        if self.X.grade != 1 or self.X.nvars != sp.n:
            raise PreconditionError("X must be a vector field on the algebra's coordinates")
        for f in self.X.comps.values():
            if f.constant_term():
                raise PreconditionError("X(0) must vanish")
            for c in f.coefficients():
                Field.check(sp.field, c)
        defect = schouten(self.X, self.Pi, N) + self.Pi
        if not defect.is_zero():
            deg = min(f.order() for f in defect.comps.values())
            raise PreconditionError("[X, Pi] = -Pi fails", {"degree": deg})


@dataclass
class LinearizationResult:
    map: CoordMap
    linear_field: MultiVec
    h: Poly
    h1: Poly
    weights: list
    generators: list[Poly]
    residual_by_degree: dict[int, object]
    divisor_log: list[tuple[int, object]]
    step_log: list[dict] = field(default_factory=list)
    poisson_preserved: bool = True
    schedule: str = "block"

    @property
    def ok(self) -> bool:
        return self.poisson_preserved and all(not v for v in self.residual_by_degree.values())


def _euler_part(G: Poly) -> Poly:
    """``E(G) = sum_u (u - 1) G_u``."""
    return sum_polys(G.nvars, [G.graded_component(u).scale(u - 1) for u in G.degrees() if u != 1])


def _flow_hamiltonian(h: Poly, G: Poly, Pi: MultiVec, N: int) -> Poly:
    """``h'`` with ``exp(ad X_G)(I + X_h) = I + X_h'`` through ``N``."""
    term = poisson_bracket(G, h, Pi, N) - _euler_part(G).truncate(N)
    out = h
    k = 1
    fact = mpq(1)
    while term:
        fact *= k
        out = out.add_scaled(term, 1 / fact)
        term = poisson_bracket(G, term, Pi, N)
        k += 1
    return out


def linearize(pair: HomogeneousPair, schedule: str = "block", verify: bool = True) -> LinearizationResult:
    """Normalize ``(Pi_1, X)`` to ``(Pi_1, I + X_h1)`` through the space's degree ``N``."""
    pair.check()
    sp = pair.space
    N = sp.N
    alg: LieAlgebraData = sp.algebra
    Pi = pair.Pi
    n = sp.n
    if alg.weights is None:
        raise NotInCartanError(f"algebra {alg.name} is not given in a root basis")
    I = euler_field(n)
    h = recover_hamiltonian(pair.X - I, Pi, N)
    h1 = h.graded_component(1)
    a = alg.cartan_coefficients(h1)
    w = alg.weight_pairing(a)
    diag = MultiVec.vector_field([Poly.var(n, i, w[i]) for i in range(n)])
    if hamiltonian_vf(h1, Pi) != diag:
        raise NotInCartanError("the Hamiltonian field of h1 is not diagonal with the stored weights")
    rep = check_nonresonance(w, N)
    if not rep.nonresonant:
        first = rep.resonances[0]
        raise ResonanceError(
            f"zero divisor at degree {first['degree']}",
            {"degree": first["degree"], "monomial": first["witness"], "eigenvalue": "0"},
        )

    def eig(exps):
        return theta_eigenvalue(exps, w, sum(exps))

    hcur = h
    images = CoordMap.identity(n, N)
    divisors: set[tuple[int, object]] = set()
    generators: list[Poly] = []
    steps: list[dict] = []
    for lo, hi in schedule_blocks(N, schedule):
        target = hcur.graded_range(lo, hi)
        entry = {"block": [lo, hi], "terms": len(target)}
        if target:
            for exps, _ in target.items():
                divisors.add((sum(exps), eig(exps)))
            G = target.divide_terms(eig)
            hcur = _flow_hamiltonian(hcur, G, Pi, N)
            images = images.then_flow(G, Pi)
            generators.append(G)
        clean = hcur.graded_range(2, hi)
        if clean or hcur.graded_component(1) != h1:
            raise ValidationError("step did not clear its block", {"block": [lo, hi]})
        nxt = hcur.graded_range(hi + 1, N)
        entry["clean_through"] = hi if not nxt else nxt.order() - 1
        steps.append(entry)
    if hcur != h1:
        raise ValidationError("normalized Hamiltonian differs from h1", {"degree": hcur.degree()})

    linear_field = I + diag
    residual_by_degree = {d: mpq(0) for d in range(N + 1)}
    preserved = True
    if verify:
        Xcur = pair.X.truncate(N)
        for G in generators:
            Xcur = flow_pushforward(Xcur, G, Pi, N)
            if flow_pushforward(Pi, G, Pi, N) != Pi:
                preserved = False
        for d, v in (Xcur - linear_field).max_abs2_by_degree().items():
            residual_by_degree[d] = v
    log = sorted(divisors, key=lambda t: (t[0], _sort_key(t[1])))
    return LinearizationResult(
        map=images,
        linear_field=linear_field,
        h=h,
        h1=h1,
        weights=w,
        generators=generators,
        residual_by_degree=residual_by_degree,
        divisor_log=log,
        step_log=steps,
        poisson_preserved=preserved,
        schedule=schedule,
    )


def _sort_key(c):
    from .scalar import imag_part, real_part

    return (real_part(c), imag_part(c))


# helpers for tests and examples ------------------------------------------------------


def push_linear_field(alg: LieAlgebraData, h1: Poly, g: Poly, N: int) -> MultiVec:
    """``exp(ad X_g)(I + X_h1)`` on ``g*``: a homogeneous field with known linearization."""
    Pi = lie_poisson(alg)
    n = alg.dim
    X = euler_field(n) + hamiltonian_vf(h1, Pi)
    return flow_pushforward(X, g, Pi, N)


def verify_map(X: MultiVec, result: LinearizationResult) -> bool:
    """``X_lin(m_i) = X^i o m`` through ``N`` for every coordinate image ``m_i``."""
    from .multivector import apply_vf

    m = result.map
    N = m.N
    for i, mi in enumerate(m.images):
        lhs = apply_vf(result.linear_field, mi, N)
        rhs = X.component(i).substitute(list(m.images), N)
        if lhs != rhs:
            return False
    return True
