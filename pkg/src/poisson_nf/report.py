"""Report dictionaries and their serialization.

Every report is a plain dict of strings, ints, bools and lists, so the
machine format (sorted-key JSON) is byte-stable. The text format renders the
same dict for reading.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

import mpmath

from .multivector import MultiVec
from .poly import Poly
from .scalar import scalar_str
from .textio import format_poly

__all__ = [
    "emit_report",
    "linearization_report",
    "birkhoff_report",
    "resonance_report",
    "omega_report",
    "siegel_report",
    "lie_report",
    "error_report",
    "monomial_str",
]


def monomial_str(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, nm in zip(exps, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts) or "1"


def _field_pairs(X: MultiVec, names: Sequence[str]) -> dict[str, str]:
    return {names[k[0]]: format_poly(f, names) for k, f in X.items()}


def _degree_table(table: dict) -> dict[str, str]:
    return {str(d): scalar_str(v) for d, v in sorted(table.items())}


def linearization_report(res, names: Sequence[str], algebra: str, N: int) -> dict:
    return {
        "task": "linearize",
        "algebra": algebra,
        "N": N,
        "schedule": res.schedule,
        "pass": res.ok,
        "h1": format_poly(res.h1, names),
        "weights": {nm: scalar_str(w) for nm, w in zip(names, res.weights)},
        "linear_field": _field_pairs(res.linear_field, names),
        "map": res.map.to_list(names),
        "residual_by_degree": _degree_table(res.residual_by_degree),
        "divisor_log": [[d, scalar_str(e)] for d, e in res.divisor_log],
        "steps": res.step_log,
        "poisson_preserved": res.poisson_preserved,
    }


def birkhoff_report(inp, res, names: Sequence[str], semisimple: dict | None = None) -> dict:
    resid_table = {str(d): "0" for d in range(res.N + 1)}
    for d, v in res.residual.max_abs2_by_degree().items():
        resid_table[str(d)] = scalar_str(v)
    resonant = [monomial_str(e, names) for e, _ in res.resonant_part().items()]
    out = {
        "task": "birkhoff",
        "N": res.N,
        "pass": res.ok,
        "gamma": [scalar_str(g) for g in res.gamma],
        "alpha": [scalar_str(a) for a in res.alpha],
        "H_ss": format_poly(res.H_ss, names),
        "H_normalized": format_poly(res.H_normalized, names),
        "resonant_monomials": resonant,
        "residual_by_degree": resid_table,
        "loop_log": res.loop_log,
        "map": res.map.to_list(names),
        "poisson_preserved": res.poisson_preserved,
        "composition_check": res.composition_check,
    }
    if semisimple is not None:
        out["semisimple_check"] = semisimple
        out["pass"] = out["pass"] and all(semisimple.values())
    return out


def _euler_like(rho: Sequence[int], names: Sequence[str]) -> str:
    terms = [(c, f"{nm}*d/d{nm}") for c, nm in zip(rho, names) if c]
    out = ""
    for k, (c, t) in enumerate(terms):
        body = t if abs(c) == 1 else f"{abs(c)}*{t}"
        if k == 0:
            out = f"-{body}" if c < 0 else body
        else:
            out += f" - {body}" if c < 0 else f" + {body}"
    return out or "0"


def resonance_report(data, monomials, names: Sequence[str], N: int) -> dict:
    return {
        "task": "resonance",
        "N": N,
        "functional": [scalar_str(w) for w in data.functional],
        "R_basis": data.R_basis,
        "Q_basis": data.Q_basis,
        "resonance_degree": data.resonance_degree,
        "toric_degree": data.toric_degree,
        "generators": [_euler_like(rho, names) for rho in data.Q_basis],
        "resonant_monomials": [monomial_str(e, names) for e in monomials],
    }


def omega_report(profile, radii) -> dict:
    out = {"task": "omega"}
    out.update(profile.as_dict())
    if radii is not None:
        out["radii"] = radii.as_dict()
        out["radii"]["lemma_checks"] = radii.lemma_checks()
    out["note"] = f"no divergence evidence through d_max = {profile.d_max}; convergence is not decided"
    return out


def siegel_report(rep) -> dict:
    out = {"task": "siegel"}
    out.update(rep.as_dict())
    return out


def lie_report(name: str, rep, extra: dict) -> dict:
    out = {"task": "lie-validate", "algebra": name, "pass": rep.ok and all(extra.values())}
    out.update(rep.as_dict())
    out.update(extra)
    return out


def error_report(err) -> dict:
    return {"status": "error", "error": err.as_dict()}


def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    if isinstance(x, Poly):
        return format_poly(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 40)
    try:
        return scalar_str(x)
    except TypeError:
        return str(x)


def _text(x: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(x)}")
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and len(v) <= 12 and all(not isinstance(e, (dict, list)) for e in v)


def _inline(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{}" if not v else ", ".join(f"{k}={_inline(e)}" for k, e in v.items())
    return str(v)


def emit_report(report: dict, fmt: str = "text") -> str:
    """Serialize ``report``: ``machine`` is sorted-key JSON, ``text`` an indented listing."""
    data = _jsonable(report)
    if fmt == "machine":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(_text(data)) + "\n"
