"""Small-divisor diagnostics: omega sequences, Bruno partial sums, Siegel
checks, majorant norms and the radii schedule.

Divisors are exact. Their moduli are exact rationals for real weights; for
Gaussian weights the comparison is done on squared moduli and only the
reported values go through ``mpmath`` square roots. Logarithms and
fractional powers use ``mpmath`` at a configurable number of significant
digits (64 by default).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import ResonanceError
from .poly import Poly
from .scalar import abs2, as_scalar, is_real, mpq, real_part, scalar_str
from .shells import shell_size, weight_sum_table

__all__ = [
    "DEFAULT_DPS",
    "DivisorProfile",
    "RadiiSchedule",
    "SiegelReport",
    "omega_sequence",
    "siegel_check",
    "majorant_norm",
    "sup_norm_estimate",
    "radii_schedule",
    "radii_from_omegas",
    "to_mpf",
]

DEFAULT_DPS = 64


def to_mpf(x):
    """Exact scalar or decimal text to ``mpmath.mpf`` at the current precision."""
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, str):
        return mpmath.mpf(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    q = real_part(as_scalar(x)) if not isinstance(x, int) else mpq(x)
    return mpmath.mpf(int(q.numerator)) / int(q.denominator)


def _modulus(x):
    """``|x|`` as an exact rational when possible, else an ``mpf``."""
    if is_real(x):
        return abs(real_part(x))
    return mpmath.sqrt(to_mpf(abs2(x)))


@dataclass
class DivisorProfile:
    omegas: list  # [(d, omega_d)] exact mpq for real weights, mpf otherwise
    omega_sq: list  # [(d, omega_d^2)] always exact
    witnesses: list  # [(d, exponent tuple or None when the cap 1/(2d) is the minimum)]
    bruno_partials: list  # [(d, partial sum)] as mpf
    d_max: int
    exact: bool
    precision: int
    enumeration_count: int

    def omega(self, d: int):
        return dict(self.omegas)[d]

    def as_dict(self) -> dict:
        return {
            "d_max": self.d_max,
            "exact": self.exact,
            "precision_digits": self.precision,
            "enumeration_count": self.enumeration_count,
            "omegas": [[d, _num_str(w, self.precision)] for d, w in self.omegas],
            "witnesses": [[d, list(w) if w is not None else None] for d, w in self.witnesses],
            "bruno_partials": [[d, _num_str(b, self.precision)] for d, b in self.bruno_partials],
        }


def _num_str(x, dps: int = DEFAULT_DPS) -> str:
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, dps)
    return scalar_str(x)


def omega_sequence(h1_weights: Sequence, d_max: int, precision: int = DEFAULT_DPS) -> DivisorProfile:
    """``omega_d = min(1/(2d), min_{2 <= |lam| <= 2^(d+1)} ||lam| - 1 + sum lam_i w_i|)``."""
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    w = [as_scalar(x) for x in h1_weights]
    n = len(w)
    exact = all(is_real(x) for x in w)
    rmax = 2 ** (d_max + 1)
    table = weight_sum_table(w, rmax)
    # smallest squared divisor per shell, with witness
    shell_min: list = [None] * (rmax + 1)
    for r in range(2, rmax + 1):
        best = None
        for s, (lam, _) in table[r].items():
            a2 = abs2(r - 1 + s)
            if not a2:
                raise ResonanceError(
                    f"zero divisor at degree {r}", {"degree": r, "monomial": list(lam), "eigenvalue": "0"}
                )
            if best is None or a2 < best[0] or (a2 == best[0] and lam > best[1]):
                best = (a2, lam)
        shell_min[r] = best
    omegas, omega_sq, wit, partials = [], [], [], []
    with mpmath.workdps(precision):
        running = None
        total = mpmath.mpf(0)
        for d in range(1, d_max + 1):
            for r in range(2 ** d + 1 if d > 1 else 2, 2 ** (d + 1) + 1):
                cand = shell_min[r]
                if cand is not None and (running is None or cand[0] < running[0]):
                    running = cand
            cap = mpq(1, 2 * d)
            if running is not None and running[0] < cap * cap:
                sq, lam = running
            else:
                sq, lam = cap * cap, None
            omega_sq.append((d, sq))
            if lam is None:
                val = cap
            elif exact:
                val = _modulus(r_minus_one_plus(lam, w))
            else:
                val = mpmath.sqrt(to_mpf(sq))
            omegas.append((d, val))
            wit.append((d, lam))
            total += -mpmath.log(to_mpf(val) if not isinstance(val, mpmath.mpf) else val) / 2 ** d
            partials.append((d, +total))
    count = sum(shell_size(n, r) for r in range(2, rmax + 1))
    return DivisorProfile(omegas, omega_sq, wit, partials, d_max, exact, precision, count)


def r_minus_one_plus(lam: Sequence[int], w: Sequence):
    s = mpq(sum(lam) - 1)
    for e, x in zip(lam, w):
        if e:
            s = s + e * x
    return s


# Siegel-type condition --------------------------------------------------------------


@dataclass
class SiegelReport:
    c: object
    s: object
    lambda_max: int
    violations: list  # [{"degree", "witness", "divisor", "bound", "count"}]
    min_margin: object  # min over the range of |divisor| * |lam|^s
    min_margin_witness: tuple | None
    s_exceeds_n: bool
    precision: int = DEFAULT_DPS

    @property
    def consistent(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "c": _num_str(self.c, self.precision),
            "s": _num_str(self.s, self.precision),
            "lambda_max": self.lambda_max,
            "consistent_so_far": self.consistent,
            "s_exceeds_n": self.s_exceeds_n,
            "violations": self.violations,
            "min_margin": _num_str(self.min_margin, self.precision) if self.min_margin is not None else None,
            "min_margin_witness": list(self.min_margin_witness) if self.min_margin_witness else None,
        }


def _is_int_like(x) -> bool:
    if isinstance(x, int):
        return True
    try:
        q = as_scalar(x)
    except (TypeError, ValueError):
        return False
    return is_real(q) and real_part(q).denominator == 1


def siegel_check(gamma_vec: Sequence, c, s, lambda_max: int, precision: int = DEFAULT_DPS) -> SiegelReport:
    """Violations of ``||lam| - 1 + <gamma, lam>| >= c / |lam|^s`` for ``2 <= |lam| <= lambda_max``."""
    g = [as_scalar(x) for x in gamma_vec]
    n = len(g)
    table = weight_sum_table(g, lambda_max)
    exact = _is_int_like(s) and not isinstance(c, (mpmath.mpf, float))
    violations = []
    best = None
    with mpmath.workdps(precision):
        if exact:
            cq = as_scalar(c)
            si = int(real_part(as_scalar(s)))
        else:
            cm, sm = to_mpf(c), to_mpf(s)
        for r in range(2, lambda_max + 1):
            for t, (lam, cnt) in sorted(table[r].items(), key=lambda kv: kv[1][0], reverse=True):
                div = r - 1 + t
                if exact:
                    lhs2 = abs2(div) * mpq(r) ** (2 * si)
                    bad = lhs2 < abs2(cq)
                    margin_sq = lhs2
                    key = margin_sq
                else:
                    mod = mpmath.sqrt(to_mpf(abs2(div)))
                    margin = mod * mpmath.mpf(r) ** sm
                    bad = margin < cm
                    key = margin
                if best is None or key < best[0]:
                    best = (key, lam)
                if bad:
                    bound = cq / mpq(r) ** si if exact else cm / mpmath.mpf(r) ** sm
                    violations.append(
                        {
                            "degree": r,
                            "witness": list(lam),
                            "divisor": scalar_str(div),
                            "bound": _num_str(bound, precision),
                            "count": cnt,
                        }
                    )
        if best is None:
            margin, wit = None, None
        else:
            margin = best[0]
            wit = best[1]
            if exact:
                margin = _sqrt_exact_or_mpf(margin)
    return SiegelReport(c, s, lambda_max, violations, margin, wit, to_mpf(s) > n, precision)


def _sqrt_exact_or_mpf(q: mpq):
    from gmpy2 import is_square, isqrt

    num, den = int(q.numerator), int(q.denominator)
    if is_square(num) and is_square(den):
        return mpq(int(isqrt(num)), int(isqrt(den)))
    return mpmath.sqrt(to_mpf(q))


# norms --------------------------------------------------------------------------------


def majorant_norm(f: Poly, rho, precision: int = DEFAULT_DPS):
    """``|f|_rho = sum |a_lam| rho^|lam|``; exact for rational ``rho`` and real coefficients."""
    exact_rho = not isinstance(rho, (mpmath.mpf, float, str))
    if isinstance(rho, str):
        try:
            rho = as_scalar(rho)
            exact_rho = True
        except Exception:
            pass
    if exact_rho and all(is_real(c) for c in f.coefficients()):
        r = as_scalar(rho)
        total = mpq(0)
        for exps, c in f.items():
            total += abs(real_part(c)) * r ** sum(exps)
        return total
    with mpmath.workdps(precision):
        r = to_mpf(rho)
        total = mpmath.mpf(0)
        for exps, c in f.items():
            total += mpmath.sqrt(to_mpf(abs2(c))) * r ** sum(exps)
        return +total


def majorant_norm_field(components: Sequence[Poly], rho, precision: int = DEFAULT_DPS):
    """``|F|_rho = max_i |F_i|_rho``."""
    vals = [majorant_norm(f, rho, precision) for f in components]
    return max(vals, key=to_mpf) if vals else mpq(0)


def sup_norm_estimate(f: Poly, rho, samples: int = 256, seed: int = 0, precision: int = 30):
    """Sampled lower estimate of ``||f||_rho`` on the distinguished boundary ``|z_i| = rho``."""
    rng = random.Random(seed)
    n = f.nvars
    terms = []
    for exps, c in f.items():
        terms.append((exps, mpmath.mpc(to_mpf(real_part(c)), to_mpf(as_scalar(c).im if not is_real(c) else 0))))
    with mpmath.workdps(precision):
        r = to_mpf(rho)
        best = mpmath.mpf(0)
        for _ in range(samples):
            pt = [r * mpmath.expj(2 * mpmath.pi * rng.random()) for _ in range(n)]
            val = mpmath.mpc(0)
            for exps, c in terms:
                t = c
                for z, e in zip(pt, exps):
                    if e:
                        t *= z ** e
                val += t
            best = max(best, abs(val))
        return best


# radii -----------------------------------------------------------------------------------


@dataclass
class RadiiSchedule:
    rho0: object
    pairs: list  # [(d, r_d, rho_d)]
    limit_estimate: object
    error_bar: object
    precision: int

    def interleaved(self) -> bool:
        prev_rho = self.rho0
        prev_r = None
        for _, r, rho in self.pairs:
            if not (rho < r < prev_rho):
                return False
            if prev_r is not None and not r < prev_r:
                return False
            prev_rho, prev_r = rho, r
        return True

    def lemma_checks(self) -> list[dict]:
        """Per ``d``: ``r_d - rho_d > 2^-d`` and ``rho_d - r_(d+1) > 2^-d``."""
        out = []
        for k, (d, r, rho) in enumerate(self.pairs):
            a = r - rho > mpmath.mpf(2) ** (-d)
            b = None
            if k + 1 < len(self.pairs):
                b = rho - self.pairs[k + 1][1] > mpmath.mpf(2) ** (-d)
            out.append({"d": d, "a": bool(a), "b": None if b is None else bool(b)})
        return out

    def as_dict(self) -> dict:
        dps = min(self.precision, 40)
        return {
            "precision_digits": self.precision,
            "pairs": [[d, mpmath.nstr(r, dps), mpmath.nstr(rho, dps)] for d, r, rho in self.pairs],
            "limit_estimate": mpmath.nstr(self.limit_estimate, dps),
            "error_bar": mpmath.nstr(self.error_bar, dps),
            "interleaved": self.interleaved(),
        }


def radii_from_omegas(omegas: Sequence, precision: int = DEFAULT_DPS) -> RadiiSchedule:
    """``r_d = (omega_d / 2^d)^(1/(2^d+1)) rho_(d-1)`` and ``rho_d = (1 - 1/(d+1)^2) r_d``.

    ``omegas`` is the list ``[omega_1, omega_2, ...]``.
    """
    with mpmath.workdps(precision):
        rho = mpmath.mpf(1)
        pairs = []
        for d, w in enumerate(omegas, start=1):
            wv = to_mpf(w) if not isinstance(w, mpmath.mpf) else w
            if wv <= 0:
                raise ResonanceError("omega_d must be positive", {"d": d})
            r = (wv / mpmath.mpf(2) ** d) ** (mpmath.mpf(1) / (2 ** d + 1)) * rho
            rho = (1 - mpmath.mpf(1) / (d + 1) ** 2) * r
            pairs.append((d, +r, +rho))
        last = pairs[-1][2] if pairs else mpmath.mpf(1)
        prev = pairs[-2][2] if len(pairs) > 1 else mpmath.mpf(1)
        return RadiiSchedule(mpmath.mpf(1), pairs, last, prev - last, precision)


def radii_schedule(profile: DivisorProfile | Sequence, precision: int | None = None) -> RadiiSchedule:
    if isinstance(profile, DivisorProfile):
        prec = precision or profile.precision
        return radii_from_omegas([w for _, w in profile.omegas], prec)
    return radii_from_omegas(list(profile), precision or DEFAULT_DPS)
