"""Truncated Poincare-Birkhoff normalization on ``K^(2l) x g*``.

Coordinates are ``x1..xl, y1..yl`` (canonical pairs, ``{x_j, y_j} = 1``) and
``z1..zm`` (Lie-Poisson). The semisimple part of the linearized dynamics is
``H_ss = h1 + sum_j gamma_j x_j y_j``; it acts diagonally on monomials with
eigenvalue ``<gamma, mu - lambda> + <alpha, nu>``.

Terms are organized by stage: a monomial of bidegree ``(p, q)`` has stage
``p + q - 1`` when ``p >= 1`` and ``q`` when ``p = 0``. Brackets satisfy
``stage({A, B}) >= stage(A) + stage(B) - 1``, so normalizing stages in
increasing order never disturbs earlier ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    DimensionError,
    InconsistentLinearPartError,
    LoopBoundError,
    NotInCartanError,
    PreconditionError,
    ValidationError,
)
from .lie import ProblemSpace, product_poisson
from .linalg import is_nilpotent, jordan_chevalley, mat_eq, mat_inverse, mat_mul
from .multivector import (
    CoordMap,
    MultiVec,
    flow_function,
    flow_pushforward,
    hamiltonian_vf,
    linear_vf_matrix,
    poisson_bracket,
)
from .poly import Poly
from .scalar import Field, as_scalar, mpq

__all__ = [
    "BirkhoffInput",
    "BirkhoffResult",
    "split_hamiltonian_field",
    "ss_eigenvalue",
    "resonant_split",
    "semisimple_hamiltonian",
    "birkhoff_normalize",
    "semisimple_part_oracle",
    "stage_of",
    "stage_component",
    "map_is_poisson",
    "check_semisimple_claim",
    "linear_part_matrix",
]


def stage_of(p: int, q: int) -> int:
    return p + q - 1 if p >= 1 else q


def stage_component(f: Poly, r: int, nsymp: int) -> Poly:
    """Terms of stage ``r``: bidegree ``(0, r)`` and ``(p, r + 1 - p)`` for ``p >= 1``."""
    return f.select(lambda e: stage_of(sum(e[:nsymp]), sum(e[nsymp:])) == r)


def stage_range(f: Poly, lo: int, hi: int, nsymp: int) -> Poly:
    return f.select(lambda e: lo <= stage_of(sum(e[:nsymp]), sum(e[nsymp:])) <= hi)


def split_hamiltonian_field(f: Poly, space_or_pi, nsymp: int | None = None) -> tuple[MultiVec, MultiVec]:
    """``(X_f^symp, X_f^g)``: the components of ``X_f`` along ``x, y`` and along ``z``."""
    if isinstance(space_or_pi, ProblemSpace):
        Pi = product_poisson(space_or_pi)
        nsymp = space_or_pi.nsymp
    else:
        Pi = space_or_pi
        if nsymp is None:
            raise ValueError("nsymp is required when passing a bivector")
    X = hamiltonian_vf(f, Pi)
    n = X.nvars
    symp = MultiVec._raw(1, n, {k: v for k, v in X.comps.items() if k[0] < nsymp})
    trans = MultiVec._raw(1, n, {k: v for k, v in X.comps.items() if k[0] >= nsymp})
    return symp, trans


def ss_eigenvalue(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int], gamma: Sequence, alpha: Sequence):
    """``<gamma, mu - lambda> + <alpha, nu>``, the action of ``{H_ss, .}`` on ``x^lam y^mu z^nu``."""
    if len(lam) != len(gamma) or len(mu) != len(gamma) or len(nu) != len(alpha):
        raise DimensionError("exponent vectors do not match (l, l, m)")
    s = mpq(0)
    for a, b, g in zip(lam, mu, gamma):
        if a != b:
            s = s + (b - a) * as_scalar(g)
    for c, w in zip(nu, alpha):
        if c:
            s = s + c * as_scalar(w)
    return s


def _eig_of(exps: Sequence[int], gamma: Sequence, alpha: Sequence):
    l = len(gamma)
    return ss_eigenvalue(exps[:l], exps[l:2 * l], exps[2 * l:], gamma, alpha)


def resonant_split(f: Poly, gamma: Sequence, alpha: Sequence) -> tuple[Poly, Poly]:
    """``(K, K_tilde)`` with ``f = {H_ss, K} + K_tilde`` and ``K_tilde`` the resonant part."""
    if f.nvars != 2 * len(gamma) + len(alpha):
        raise DimensionError("polynomial does not live on 2l + m coordinates")
    eig = {}
    for exps, _ in f.items():
        eig[exps] = _eig_of(exps, gamma, alpha)
    K_tilde = f.select(lambda e: not eig[e])
    K = f.select(lambda e: bool(eig[e])).divide_terms(lambda e: eig[e])
    return K, K_tilde


def semisimple_hamiltonian(n: int, l: int, gamma: Sequence, h1: Poly) -> Poly:
    """``h1 + sum_j gamma_j x_j y_j``."""
    h2 = Poly.zero(n)
    for j, g in enumerate(gamma):
        if g:
            e = [0] * n
            e[j] = 1
            e[l + j] = 1
            h2 = h2 + Poly(n, {tuple(e): g})
    return h1 + h2


@dataclass
class BirkhoffInput:
    space: ProblemSpace
    H: Poly
    gamma: list
    h1: Poly  # linear, on the global coordinates, supported on the Cartan z's

    def __post_init__(self):
        self.gamma = [as_scalar(g) for g in self.gamma]

    def alpha(self) -> list:
        sp = self.space
        if sp.algebra is None:
            if self.h1:
                raise NotInCartanError("h1 must vanish when there is no Lie algebra factor")
            return []
        alg = sp.algebra
        if alg.weights is None:
            raise NotInCartanError(f"algebra {alg.name} is not given in a root basis")
        shift = sp.nsymp
        if self.h1.nvars != sp.n:
            raise DimensionError("h1 must be written in the global coordinates")
        if self.h1.select(lambda e: sum(e[:shift]) > 0):
            raise NotInCartanError("h1 depends on symplectic coordinates")
        local = Poly(alg.dim, {e[shift:]: c for e, c in self.h1.items()})
        return alg.weight_pairing(alg.cartan_coefficients(local))


@dataclass
class BirkhoffResult:
    map: CoordMap
    H_normalized: Poly
    H_ss: Poly
    residual: Poly
    loop_log: list[dict]
    generators: list[Poly]
    gamma: list
    alpha: list
    poisson_preserved: bool = True
    composition_check: bool = True
    N: int = 0

    @property
    def ok(self) -> bool:
        return not self.residual and self.poisson_preserved and self.composition_check

    def resonant_part(self) -> Poly:
        return self.H_normalized - self.H_ss


def _check_field(sp: ProblemSpace, values) -> None:
    for v in values:
        Field.check(sp.field, v)


def map_is_poisson(m: CoordMap, Pi: MultiVec, N: int) -> bool:
    """``{m_i, m_j} = Pi^ij(m)`` through degree ``N`` for all coordinate pairs."""
    n = m.nvars
    for i in range(n):
        for j in range(i + 1, n):
            lhs = poisson_bracket(m.images[i], m.images[j], Pi, N).truncate(N)
            rhs = Pi.component(i, j).substitute(list(m.images), N)
            if lhs != rhs:
                return False
    return True


def birkhoff_normalize(inp: BirkhoffInput, verify: bool = True) -> BirkhoffResult:
    """Normalize ``H`` so that ``{H_normalized, H_ss} = 0`` through degree ``N``."""
    sp = inp.space
    N, n, l, ns = sp.N, sp.n, sp.l, sp.nsymp
    if inp.H.nvars != n:
        raise DimensionError(f"H must have {n} variables")
    if len(inp.gamma) != l:
        raise DimensionError(f"gamma must have length l = {l}")
    Pi = product_poisson(sp)
    alpha = inp.alpha()
    gamma = inp.gamma
    _check_field(sp, gamma)
    _check_field(sp, alpha)
    _check_field(sp, inp.H.coefficients())

    H = inp.H.truncate(N)
    H = H - H.constant_term()
    lin10 = H.bidegree_component(1, 0, ns)
    if lin10:
        raise PreconditionError(
            "X_H(0) != 0: H has terms of bidegree (1, 0)", {"terms": lin10.to_str(sp.names())}
        )
    H_ss = semisimple_hamiltonian(n, l, gamma, inp.h1)
    F1 = H.bidegree_component(0, 1, ns) + H.bidegree_component(2, 0, ns) - H_ss
    if poisson_bracket(H_ss, F1, Pi):
        raise InconsistentLinearPartError(
            "declared (gamma, h1) do not commute with the remaining linear part",
            {"F1": F1.to_str(sp.names())},
        )
    if not is_nilpotent(linear_vf_matrix(hamiltonian_vf(F1, Pi))):
        raise InconsistentLinearPartError(
            "declared (gamma, h1) leave a non-nilpotent linear remainder",
            {"F1": F1.to_str(sp.names())},
        )

    Nmap = N + 1
    images = CoordMap.identity(n, Nmap)
    generators: list[Poly] = []
    loop_log: list[dict] = []
    for r in range(1, N + 1):
        below = stage_range(H, 0, r - 1, ns)
        cap = (r + 1) * max(n - 1, 1) + 2
        counts = []
        it = 0
        while True:
            part = stage_component(H, r, ns)
            if r == 1:
                part = part - H_ss
            K, _ = resonant_split(part, gamma, alpha)
            if not K:
                break
            it += 1
            if it > cap:
                raise LoopBoundError(
                    f"nilpotent correction at stage {r} exceeded {cap} iterations", {"stage": r, "bound": cap}
                )
            counts.append(len(K))
            H = flow_function(H, K, Pi, N)
            images = CoordMap(tuple(flow_function(f, K, Pi, Nmap) for f in images.images), Nmap)
            generators.append(K)
        if stage_range(H, 0, r - 1, ns) != below:
            raise ValidationError(f"stage {r} modified earlier stages", {"stage": r})
        loop_log.append({"stage": r, "iterations": it, "generator_terms": counts})

    residual = poisson_bracket(H, H_ss, Pi, N).truncate(N)
    preserved = True
    composed = True
    if verify:
        for K in generators:
            if flow_pushforward(Pi, K, Pi, N) != Pi:
                preserved = False
                break
        composed = inp.H.truncate(N).substitute(list(images.images), N) - inp.H.constant_term() == H
    return BirkhoffResult(
        map=images,
        H_normalized=H,
        H_ss=H_ss,
        residual=residual,
        loop_log=loop_log,
        generators=generators,
        gamma=list(gamma),
        alpha=list(alpha),
        poisson_preserved=preserved,
        composition_check=composed,
        N=N,
    )


def semisimple_part_oracle(L: Sequence[Sequence]) -> tuple[list, list]:
    """``(S, N_part)`` with ``L = S + N_part``, ``S`` semisimple, ``N_part`` nilpotent, commuting.

    Computed by Newton iteration on the squarefree part of the characteristic
    polynomial, independently of the normal-form pipeline.
    """
    return jordan_chevalley([[as_scalar(x) for x in row] for row in L])


def linear_part_matrix(H: Poly, Pi: MultiVec) -> list:
    """Matrix of the linear part of ``X_H``."""
    return linear_vf_matrix(hamiltonian_vf(H.truncate(2), Pi, 1))


def check_semisimple_claim(inp: BirkhoffInput, res: BirkhoffResult) -> dict:
    """Compare the Jordan-Chevalley semisimple parts with the matrix of ``X_{H_ss}``.

    In normalized coordinates the semisimple part must equal it; in the
    original coordinates it must equal its conjugate by the map's linear part.
    """
    Pi = product_poisson(inp.space)
    D = linear_part_matrix(res.H_ss, Pi)
    S_norm, _ = semisimple_part_oracle(linear_part_matrix(res.H_normalized, Pi))
    S_orig, _ = semisimple_part_oracle(linear_part_matrix(inp.H, Pi))
    P = res.map.linear_part()
    conj = mat_mul(mat_mul(P, D), mat_inverse(P))
    return {"normalized": mat_eq(S_norm, D), "original": mat_eq(S_orig, conj)}
