"""Lie algebra descriptions and the linear Poisson structures they induce.

Coordinates ``z_1..z_m`` are assumed adapted to a root decomposition: each
Cartan element ``y`` acts by ``[y, z_i] = <alpha_i, y> z_i``. Weights are
stored per coordinate as vectors over the Cartan basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import DimensionError, FieldError, NotInCartanError, ValidationError
from .multivector import MultiVec
from .poly import Poly
from .scalar import Field, as_scalar, mpq
from .textio import variable_names

__all__ = [
    "LieAlgebraData",
    "ValidationReport",
    "ProblemSpace",
    "lie_validate",
    "lie_poisson",
    "product_poisson",
    "builtin_algebra",
    "sl2",
    "sl3",
    "so3",
    "abelian",
    "BUILTIN_NAMES",
]

Constants = dict  # {(i, j): {k: c}} with i < j


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants ``c_ij^k`` (sparse, ``i < j``), Cartan coordinates and weights.

    ``weights`` is ``None`` when the basis is not a root basis; such data can
    still define a Lie-Poisson structure but cannot drive the pipelines.
    """

    dim: int
    constants: Mapping[tuple[int, int], Mapping[int, object]]
    cartan_indices: tuple[int, ...] = ()
    weights: tuple[tuple, ...] | None = None
    name: str = "custom"
    raw_constants: Mapping[tuple[int, int], Mapping[int, object]] | None = field(default=None, compare=False)

    def c(self, i: int, j: int, k: int):
        """``c_ij^k`` with antisymmetry applied."""
        if i == j:
            return mpq(0)
        if i < j:
            return self.constants.get((i, j), {}).get(k, mpq(0))
        return -self.constants.get((j, i), {}).get(k, mpq(0))

    @property
    def rank(self) -> int:
        return len(self.cartan_indices)

    def weight_pairing(self, cartan_coeffs: Sequence) -> list:
        """``<alpha_i, h>`` for every coordinate, ``h = sum_t a_t z_{cartan[t]}``."""
        if self.weights is None:
            raise NotInCartanError(f"algebra {self.name} has no root-basis weights")
        a = [as_scalar(x) for x in cartan_coeffs]
        if len(a) != self.rank:
            raise DimensionError(f"expected {self.rank} Cartan coefficients, got {len(a)}")
        return [sum((w * x for w, x in zip(wi, a)), mpq(0)) for wi in self.weights]

    def cartan_coefficients(self, h1: Poly) -> list:
        """Coefficients of a linear ``h1`` on the Cartan coordinates; error otherwise.

        ``h1`` lives in ``m`` variables (the algebra's coordinates).
        """
        if h1.nvars != self.dim:
            raise DimensionError("h1 must be a polynomial in the algebra's coordinates")
        if h1.degree() > 1 or h1.constant_term():
            raise NotInCartanError("h1 must be linear")
        coeffs = [mpq(0)] * self.rank
        pos = {t: k for k, t in enumerate(self.cartan_indices)}
        for exps, c in h1.items():
            i = exps.index(1)
            if i not in pos:
                raise NotInCartanError(
                    f"h1 has a component along the non-Cartan coordinate {i + 1}",
                    {"coordinate": i + 1},
                )
            coeffs[pos[i]] = c
        return coeffs


@dataclass
class ValidationReport:
    checks: dict[str, bool]
    failures: dict[str, list[str]]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": {k: list(v) for k, v in self.failures.items()}}


def _raw_get(raw, i, j, k):
    return as_scalar(raw.get((i, j), {}).get(k, 0))


def lie_validate(data: LieAlgebraData) -> ValidationReport:
    """Check antisymmetry, the Jacobi identity and weight consistency of ``data``."""
    m = data.dim
    checks: dict[str, bool] = {}
    failures: dict[str, list[str]] = {"antisymmetry": [], "jacobi": [], "weights": []}

    raw = data.raw_constants
    if raw is not None:
        for (i, j), row in raw.items():
            for k in set(row) | set(raw.get((j, i), {})):
                if i == j and _raw_get(raw, i, i, k):
                    failures["antisymmetry"].append(f"c_{i + 1}{i + 1}^{k + 1} != 0")
                elif i != j and (j, i) in raw and _raw_get(raw, i, j, k) != -_raw_get(raw, j, i, k):
                    failures["antisymmetry"].append(f"c_{i + 1}{j + 1}^{k + 1} != -c_{j + 1}{i + 1}^{k + 1}")
    checks["antisymmetry"] = not failures["antisymmetry"]

    for i, j, k in combinations(range(m), 3):
        for t in range(m):
            s = mpq(0)
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for u in range(m):
                    s += data.c(a, b, u) * data.c(u, c, t)
            if s:
                failures["jacobi"].append(f"jacobi({i + 1},{j + 1},{k + 1}) has component {t + 1}")
    checks["jacobi"] = not failures["jacobi"]

    if data.weights is None:
        failures["weights"].append("no root-basis weights configured")
        checks["weights"] = False
    elif len(data.weights) != m or any(len(w) != data.rank for w in data.weights):
        failures["weights"].append("weights must be one vector of Cartan-rank length per coordinate")
        checks["weights"] = False
    else:
        for pos, t in enumerate(data.cartan_indices):
            for i in range(m):
                for k in range(m):
                    want = data.weights[i][pos] if k == i else 0
                    if data.c(t, i, k) != want:
                        failures["weights"].append(
                            f"[z{t + 1}, z{i + 1}] component z{k + 1} is {data.c(t, i, k)}, expected {want}"
                        )
        checks["weights"] = not failures["weights"]
    return ValidationReport(checks, failures)


def lie_poisson(data: LieAlgebraData, require_valid: bool = True) -> MultiVec:
    """Linear bivector with ``{z_i, z_j} = sum_k c_ij^k z_k``."""
    if require_valid:
        rep = lie_validate(data)
        if not (rep.checks["antisymmetry"] and rep.checks["jacobi"]):
            raise ValidationError("structure constants fail validation", rep.as_dict())
    m = data.dim
    comps = {}
    for (i, j), row in data.constants.items():
        f = Poly(m, {tuple(1 if t == k else 0 for t in range(m)): c for k, c in row.items()})
        if f:
            comps[(i, j)] = f
    return MultiVec(2, m, comps)


# constructors -----------------------------------------------------------------


def _from_dense(dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]]) -> dict:
    """Normalize a bracket table to ``i < j`` keys; both orders may be given."""
    out: dict[tuple[int, int], dict[int, object]] = {}
    for (i, j), row in brackets.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise DimensionError(f"bracket index ({i}, {j}) out of range")
        if i == j:
            continue
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        if (j, i) in brackets and i > j:
            continue  # the i<j entry is authoritative; disagreement is an antisymmetry failure
        tgt = out.setdefault(key, {})
        for k, c in row.items():
            c = as_scalar(c) * sign
            if c:
                tgt[k] = c
    return {k: v for k, v in out.items() if v}


def make_algebra(
    dim: int,
    brackets: Mapping[tuple[int, int], Mapping[int, object]],
    cartan_indices: Sequence[int] = (),
    weights: Sequence[Sequence] | None = None,
    name: str = "custom",
) -> LieAlgebraData:
    raw = {k: {t: as_scalar(c) for t, c in v.items()} for k, v in brackets.items()}
    w = None if weights is None else tuple(tuple(as_scalar(x) for x in wi) for wi in weights)
    return LieAlgebraData(dim, _from_dense(dim, brackets), tuple(cartan_indices), w, name, raw)


def weights_from_constants(dim: int, constants: Mapping, cartan_indices: Sequence[int]) -> tuple[tuple, ...]:
    """Read ``<alpha_i, e_t>`` off the diagonal of ``ad z_t`` (assumes a root basis)."""
    tmp = LieAlgebraData(dim, constants, tuple(cartan_indices))
    return tuple(tuple(tmp.c(t, i, i) for t in cartan_indices) for i in range(dim))


def sl2() -> LieAlgebraData:
    """Root basis ``z1 = e``, ``z2 = f``, ``z3 = h`` with ``[h,e] = 2e``, ``[h,f] = -2f``, ``[e,f] = h``."""
    consts = {(0, 1): {2: mpq(1)}, (0, 2): {0: mpq(-2)}, (1, 2): {1: mpq(2)}}
    return LieAlgebraData(3, consts, (2,), weights_from_constants(3, consts, (2,)), "sl2")


def _sl3_basis() -> list:
    def E(i, j):
        M = [[0] * 3 for _ in range(3)]
        M[i][j] = 1
        return M

    H1 = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    H2 = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]
    # xi_1..3, zeta_1..3, then the Cartan pair
    return [E(0, 1), E(1, 2), E(2, 0), E(1, 0), E(2, 1), E(0, 2), H1, H2]


def _sl3_coords(M) -> dict[int, object]:
    """Coordinates of a traceless 3x3 matrix in the basis of ``_sl3_basis``."""
    off = {(0, 1): 0, (1, 2): 1, (2, 0): 2, (1, 0): 3, (2, 1): 4, (0, 2): 5}
    out = {k: mpq(M[i][j]) for (i, j), k in off.items() if M[i][j]}
    # diag(d1, d2, d3) = d1*H1 + (d1 + d2)*H2
    a, b = M[0][0], M[0][0] + M[1][1]
    if a:
        out[6] = mpq(a)
    if b:
        out[7] = mpq(b)
    return out


def sl3() -> LieAlgebraData:
    """Root basis ``xi_j = E12, E23, E31``, ``zeta_j = E21, E32, E13``, Cartan ``E11-E22, E22-E33``.

    The three roots of the ``xi_j`` sum to zero, so a monomial is resonant for
    generic Cartan data iff ``a1 - b1 = a2 - b2 = a3 - b3`` on the exponents of
    ``xi_j`` and ``zeta_j``.
    """
    B = _sl3_basis()

    def mm(X, Y):
        return [[sum(X[i][k] * Y[k][j] for k in range(3)) for j in range(3)] for i in range(3)]

    consts = {}
    for i in range(8):
        for j in range(i + 1, 8):
            XY, YX = mm(B[i], B[j]), mm(B[j], B[i])
            br = [[XY[r][s] - YX[r][s] for s in range(3)] for r in range(3)]
            row = _sl3_coords(br)
            if row:
                consts[(i, j)] = row
    return LieAlgebraData(8, consts, (6, 7), weights_from_constants(8, consts, (6, 7)), "sl3")


def so3() -> LieAlgebraData:
    """``{z1,z2} = z3`` and cyclic. Not a root basis over Q, so no weights."""
    consts = {(0, 1): {2: mpq(1)}, (1, 2): {0: mpq(1)}, (0, 2): {1: mpq(-1)}}
    return LieAlgebraData(3, consts, (), None, "so3")


def abelian(m: int) -> LieAlgebraData:
    """Zero brackets; every coordinate is Cartan with zero weight."""
    return LieAlgebraData(m, {}, tuple(range(m)), tuple(tuple(mpq(0) for _ in range(m)) for _ in range(m)), f"abelian{m}")


_BUILTINS = {"sl2": sl2, "sl3": sl3, "so3": so3}
BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_algebra(name: str) -> LieAlgebraData:
    key = name.lower().replace("(", "").replace(")", "").replace("_", "")
    if key in _BUILTINS:
        return _BUILTINS[key]()
    if key.startswith("abelian") and key[7:].isdigit():
        return abelian(int(key[7:]))
    raise ValueError(f"unknown built-in algebra {name!r}; choose from {', '.join(BUILTIN_NAMES)} or abelianN")


# ambient product space ---------------------------------------------------------


@dataclass(frozen=True)
class ProblemSpace:
    """``K^(2l+m)`` with coordinates ``x1..xl, y1..yl, z1..zm``."""

    l: int
    algebra: LieAlgebraData | None
    N: int
    field: str = Field.Q

    def __post_init__(self):
        if self.l < 0:
            raise DimensionError("l must be nonnegative")
        if self.N < 0:
            raise ValueError("truncation degree must be nonnegative")
        object.__setattr__(self, "field", Field.normalize(self.field))
        if self.algebra is not None and self.algebra.weights is not None:
            for w in self.algebra.weights:
                for x in w:
                    try:
                        Field.check(self.field, x)
                    except FieldError as e:
                        raise FieldError(f"algebra weight outside the field: {e}") from None

    @property
    def m(self) -> int:
        return 0 if self.algebra is None else self.algebra.dim

    @property
    def n(self) -> int:
        return 2 * self.l + self.m

    @property
    def nsymp(self) -> int:
        return 2 * self.l

    def names(self) -> list[str]:
        return variable_names(self.l, self.m)

    def z_index(self, k: int) -> int:
        """Global index of the algebra coordinate ``k`` (0-based)."""
        return 2 * self.l + k

    def with_degree(self, N: int) -> "ProblemSpace":
        return ProblemSpace(self.l, self.algebra, N, self.field)


def symplectic_poisson(l: int, n: int | None = None) -> MultiVec:
    """``sum_i d/dx_i ^ d/dy_i`` on the first ``2l`` of ``n`` coordinates."""
    n = 2 * l if n is None else n
    one = Poly.const(n, 1)
    return MultiVec(2, n, {(i, l + i): one for i in range(l)})


def product_poisson(space: ProblemSpace) -> MultiVec:
    """``Pi_symp + Pi_g`` on ``K^(2l+m)``."""
    n = space.n
    Pi = symplectic_poisson(space.l, n)
    if space.algebra is None or space.m == 0:
        return Pi
    lp = lie_poisson(space.algebra)
    shift = 2 * space.l
    images = [Poly.var(n, shift + k) for k in range(space.m)]
    comps = {(i + shift, j + shift): f.substitute(images) for (i, j), f in lp.comps.items()}
    return Pi + MultiVec(2, n, comps)
