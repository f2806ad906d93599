"""YAML problem files.

One document per file. Common keys::

    task: linearize            # optional; must match the subcommand when given
    field: Q                   # Q or Q(i)
    l: 0                       # number of canonical pairs
    algebra: sl2               # built-in name, or a mapping (see below)
    N: 8                       # truncation degree

Task payloads:

* ``linearize``: ``X`` (mapping coordinate name -> polynomial) or
  ``X_from: {h1: ..., g: ...}`` which builds ``X`` by pushing ``I + X_h1``
  through the time-1 flow of ``X_g``.
* ``birkhoff``: ``H``, ``gamma`` (list of l scalars), ``h1``.
* ``resonance``: ``gamma`` and either ``alpha`` (one scalar per algebra
  coordinate) or ``h1``.
* ``omega``: ``weights`` or ``h1``; ``d_max``.
* ``siegel``: ``gamma_vec``, ``c``, ``s``, ``lambda_max``.
* ``lie-validate``: only ``algebra``.

A custom algebra is a mapping::

    algebra:
      name: mysl2
      dim: 3
      brackets: {"z3 z1": "2*z1", "z3 z2": "-2*z2", "z1 z2": "z3"}
      cartan: [z3]
      weights: {z1: [2], z2: [-2], z3: [0]}   # optional; read off ad(cartan) if omitted

Scalars are integers or strings such as ``"3/2"`` or ``"1/2+I"``; floats are
rejected. Unknown keys are an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import FieldError, InputError
from .lie import LieAlgebraData, ProblemSpace, builtin_algebra, make_algebra, weights_from_constants
from .multivector import MultiVec
from .poly import Poly
from .scalar import Field, as_scalar
from .textio import parse_poly, variable_names

__all__ = ["Problem", "load_problem", "parse_problem", "TASKS"]

TASKS = ("lie-validate", "linearize", "birkhoff", "resonance", "omega", "siegel")

_COMMON = {"task", "field", "l", "algebra", "N", "description"}
_TASK_KEYS = {
    "lie-validate": set(),
    "linearize": {"X", "X_from"},
    "birkhoff": {"H", "gamma", "h1"},
    "resonance": {"gamma", "alpha", "h1"},
    "omega": {"weights", "h1", "d_max", "precision"},
    "siegel": {"gamma_vec", "c", "s", "lambda_max", "precision"},
}
_ALGEBRA_KEYS = {"name", "dim", "brackets", "cartan", "weights"}


@dataclass
class Problem:
    task: str
    field: str
    l: int
    algebra: LieAlgebraData | None
    N: int
    data: dict = field(default_factory=dict)
    description: str = ""

    @property
    def space(self) -> ProblemSpace:
        return ProblemSpace(self.l, self.algebra, self.N, self.field)

    def names(self) -> list[str]:
        return self.space.names()


def _scalar(v, what: str, fld: str):
    if isinstance(v, bool) or v is None:
        raise InputError(f"{what}: expected a number, got {v!r}")
    if isinstance(v, float):
        raise InputError(f"{what}: floating point value {v!r} is not allowed; write it as a fraction string")
    if isinstance(v, (int, str)):
        try:
            x = as_scalar(v)
        except InputError as e:
            raise InputError(f"{what}: {e}") from None
        except (TypeError, ValueError) as e:
            raise InputError(f"{what}: {e}") from None
        try:
            Field.check(fld, x)
        except FieldError as e:
            raise InputError(f"{what}: {e}") from None
        return x
    raise InputError(f"{what}: expected a number, got {type(v).__name__}")


def _scalar_list(v, what: str, fld: str, length: int | None = None) -> list:
    if not isinstance(v, list):
        raise InputError(f"{what}: expected a list")
    if length is not None and len(v) != length:
        raise InputError(f"{what}: expected {length} entries, got {len(v)}")
    return [_scalar(x, f"{what}[{i}]", fld) for i, x in enumerate(v)]


def _int(v, what: str, lo: int = 0) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{what}: expected an integer")
    if v < lo:
        raise InputError(f"{what}: must be at least {lo}")
    return v


def _poly(text, names, what: str, fld: str) -> Poly:
    if isinstance(text, float):
        raise InputError(f"{what}: floating point value {text!r} is not allowed")
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"{what}: expected a polynomial string")
    try:
        p = parse_poly(str(text), names)
    except InputError as e:
        raise InputError(f"{what}: {e}") from None
    for c in p.coefficients():
        try:
            Field.check(fld, c)
        except FieldError as e:
            raise InputError(f"{what}: {e}") from None
    return p


def _parse_algebra(desc, fld: str) -> LieAlgebraData | None:
    if desc is None:
        return None
    if isinstance(desc, str):
        try:
            return builtin_algebra(desc)
        except ValueError as e:
            raise InputError(str(e)) from None
    if not isinstance(desc, dict):
        raise InputError("algebra: expected a built-in name or a mapping")
    unknown = set(desc) - _ALGEBRA_KEYS
    if unknown:
        raise InputError(f"algebra: unknown keys {sorted(unknown)}")
    if "dim" not in desc:
        raise InputError("algebra: 'dim' is required")
    m = _int(desc["dim"], "algebra.dim", 1)
    names = variable_names(0, m)
    index = {nm: k for k, nm in enumerate(names)}
    brackets: dict[tuple[int, int], dict[int, Any]] = {}
    raw = desc.get("brackets") or {}
    if not isinstance(raw, dict):
        raise InputError("algebra.brackets: expected a mapping 'zi zj' -> polynomial")
    for key, val in raw.items():
        parts = str(key).replace(",", " ").split()
        if len(parts) != 2 or any(p not in index for p in parts):
            raise InputError(f"algebra.brackets: bad key {key!r}; expected two coordinate names like 'z1 z2'")
        p = _poly(val, names, f"algebra.brackets[{key}]", fld)
        if p.degree() > 1 or p.constant_term():
            raise InputError(f"algebra.brackets[{key}]: bracket must be linear in the coordinates")
        row = {}
        for exps, c in p.items():
            row[exps.index(1)] = c
        brackets[(index[parts[0]], index[parts[1]])] = row
    cartan_names = desc.get("cartan", [])
    if not isinstance(cartan_names, list) or any(c not in index for c in cartan_names):
        raise InputError("algebra.cartan: expected a list of coordinate names")
    cartan = [index[c] for c in cartan_names]
    weights = None
    if "weights" in desc:
        wspec = desc["weights"]
        if not isinstance(wspec, dict):
            raise InputError("algebra.weights: expected a mapping coordinate -> list")
        weights = []
        for nm in names:
            if nm not in wspec:
                raise InputError(f"algebra.weights: missing entry for {nm}")
            weights.append(_scalar_list(wspec[nm], f"algebra.weights[{nm}]", fld, len(cartan)))
        extra = set(wspec) - set(names)
        if extra:
            raise InputError(f"algebra.weights: unknown coordinates {sorted(extra)}")
    alg = make_algebra(m, brackets, cartan, weights, str(desc.get("name", "custom")))
    if weights is None and cartan:
        alg = LieAlgebraData(
            alg.dim, alg.constants, alg.cartan_indices,
            weights_from_constants(alg.dim, alg.constants, alg.cartan_indices), alg.name, alg.raw_constants,
        )
    return alg


def parse_problem(doc: Any, task: str | None = None) -> Problem:
    if not isinstance(doc, dict):
        raise InputError("problem file must be a mapping at the top level")
    ftask = doc.get("task")
    if ftask is not None and ftask not in TASKS:
        raise InputError(f"task: unknown task {ftask!r}")
    if task is not None and ftask is not None and task != ftask:
        raise InputError(f"problem file is for task {ftask!r}, not {task!r}")
    task = task or ftask
    if task is None:
        raise InputError("task is not specified")
    allowed = _COMMON | _TASK_KEYS[task]
    unknown = set(doc) - allowed
    if unknown:
        raise InputError(f"unknown keys for task {task}: {sorted(unknown)}")
    try:
        fld = Field.normalize(doc.get("field", "Q"))
    except FieldError as e:
        raise InputError(str(e)) from None
    l = _int(doc.get("l", 0), "l")
    algebra = _parse_algebra(doc.get("algebra"), fld)
    N = _int(doc.get("N", 4), "N")
    prob = Problem(task, fld, l, algebra, N, {}, str(doc.get("description", "")))
    names = variable_names(l, algebra.dim if algebra else 0)
    d = prob.data
    if task == "lie-validate":
        if algebra is None:
            raise InputError("lie-validate needs an algebra")
    elif task == "linearize":
        if algebra is None:
            raise InputError("linearize needs an algebra")
        if l != 0:
            raise InputError("linearize works on g* alone: l must be 0")
        n = len(names)
        if ("X" in doc) == ("X_from" in doc):
            raise InputError("give exactly one of X and X_from")
        if "X" in doc:
            xs = doc["X"]
            if not isinstance(xs, dict):
                raise InputError("X: expected a mapping coordinate -> polynomial")
            extra = set(xs) - set(names)
            if extra:
                raise InputError(f"X: unknown coordinates {sorted(extra)}")
            d["X"] = MultiVec.vector_field(
                [_poly(xs[nm], names, f"X[{nm}]", fld) if nm in xs else Poly.zero(n) for nm in names]
            )
        else:
            xf = doc["X_from"]
            if not isinstance(xf, dict) or set(xf) - {"h1", "g"} or "h1" not in xf:
                raise InputError("X_from: expected a mapping with keys h1 and optional g")
            d["h1"] = _poly(xf["h1"], names, "X_from.h1", fld)
            d["g"] = _poly(xf.get("g", "0"), names, "X_from.g", fld)
    elif task == "birkhoff":
        for k in ("H", "gamma", "h1"):
            if k not in doc:
                raise InputError(f"birkhoff needs {k}")
        d["H"] = _poly(doc["H"], names, "H", fld)
        d["gamma"] = _scalar_list(doc["gamma"], "gamma", fld, l)
        d["h1"] = _poly(doc["h1"], names, "h1", fld)
    elif task == "resonance":
        d["gamma"] = _scalar_list(doc.get("gamma", []), "gamma", fld, l)
        m = algebra.dim if algebra else 0
        if "alpha" in doc and "h1" in doc:
            raise InputError("give alpha or h1, not both")
        if "alpha" in doc:
            d["alpha"] = _scalar_list(doc["alpha"], "alpha", fld, m)
        elif "h1" in doc:
            d["h1"] = _poly(doc["h1"], names, "h1", fld)
        else:
            d["alpha"] = _scalar_list([0] * m, "alpha", fld, m)
    elif task == "omega":
        if ("weights" in doc) == ("h1" in doc):
            raise InputError("omega needs exactly one of weights and h1")
        if "weights" in doc:
            d["weights"] = _scalar_list(doc["weights"], "weights", fld)
        else:
            d["h1"] = _poly(doc["h1"], names, "h1", fld)
        d["d_max"] = _int(doc.get("d_max", 3), "d_max", 1)
        d["precision"] = _int(doc.get("precision", 64), "precision", 10)
    elif task == "siegel":
        for k in ("gamma_vec", "c", "s", "lambda_max"):
            if k not in doc:
                raise InputError(f"siegel needs {k}")
        d["gamma_vec"] = _scalar_list(doc["gamma_vec"], "gamma_vec", fld)
        d["c"] = _scalar(doc["c"], "c", Field.Q)
        d["s"] = _scalar(doc["s"], "s", Field.Q)
        d["lambda_max"] = _int(doc["lambda_max"], "lambda_max", 2)
        d["precision"] = _int(doc.get("precision", 64), "precision", 10)
    return prob


def load_problem(path: str | Path, task: str | None = None) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise InputError(f"{path}: invalid YAML: {e}") from None
    return parse_problem(doc, task)
