"""Command-line entry point.

Exit status: 0 on success, 1 on a domain error (resonance, failed
precondition, ...), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from .birkhoff import BirkhoffInput, birkhoff_normalize, check_semisimple_claim
from .diagnostics import omega_sequence, radii_schedule, siegel_check
from .errors import InputError, NormalFormError
from .lie import builtin_algebra, lie_poisson, lie_validate
from .linearize import HomogeneousPair, linearize, push_linear_field
from .multivector import euler_field, schouten
from .poly import Poly
from .problem import Problem, load_problem, parse_problem
from .report import (
    birkhoff_report,
    emit_report,
    error_report,
    lie_report,
    linearization_report,
    omega_report,
    resonance_report,
    siegel_report,
)
from .resonance import resonance_lattice, resonant_monomials

__all__ = ["main", "run", "run_problem"]


def _local_h1(prob: Problem, h1: Poly) -> Poly:
    shift = 2 * prob.l
    if h1.select(lambda e: sum(e[:shift]) > 0):
        raise InputError("h1 must only involve the algebra coordinates")
    return Poly(prob.algebra.dim, {e[shift:]: c for e, c in h1.items()})


def _alpha_from_h1(prob: Problem, h1: Poly) -> list:
    if prob.algebra is None:
        if h1:
            raise InputError("h1 given but there is no algebra")
        return []
    alg = prob.algebra
    return alg.weight_pairing(alg.cartan_coefficients(_local_h1(prob, h1)))


def run_problem(prob: Problem, schedule: str = "block") -> dict:
    """Run the pipeline for ``prob.task`` and return its report dict."""
    names = prob.names()
    task = prob.task
    if task == "lie-validate":
        alg = prob.algebra
        rep = lie_validate(alg)
        extra = {}
        if rep.checks["antisymmetry"] and rep.checks["jacobi"]:
            Pi = lie_poisson(alg)
            extra["self_bracket_zero"] = schouten(Pi, Pi).is_zero()
            extra["euler_identity"] = schouten(euler_field(alg.dim), Pi) == -Pi
        return lie_report(alg.name, rep, extra)
    if task == "linearize":
        sp = prob.space
        X = prob.data.get("X")
        if X is None:
            X = push_linear_field(prob.algebra, prob.data["h1"], prob.data["g"], sp.N)
        res = linearize(HomogeneousPair.from_space(sp, X), schedule)
        return linearization_report(res, names, prob.algebra.name, sp.N)
    if task == "birkhoff":
        d = prob.data
        inp = BirkhoffInput(prob.space, d["H"], d["gamma"], d["h1"])
        res = birkhoff_normalize(inp)
        return birkhoff_report(inp, res, names, check_semisimple_claim(inp, res))
    if task == "resonance":
        d = prob.data
        alpha = d["alpha"] if "alpha" in d else _alpha_from_h1(prob, d["h1"])
        data = resonance_lattice(d["gamma"], alpha)
        return resonance_report(data, resonant_monomials(data, prob.N), names, prob.N)
    if task == "omega":
        d = prob.data
        w = d["weights"] if "weights" in d else _alpha_from_h1(prob, d["h1"])
        profile = omega_sequence(w, d["d_max"], d["precision"])
        return omega_report(profile, radii_schedule(profile))
    if task == "siegel":
        d = prob.data
        return siegel_report(siegel_check(d["gamma_vec"], d["c"], d["s"], d["lambda_max"], d["precision"]))
    raise InputError(f"unknown task {task!r}")


def _load(args, task: str) -> Problem:
    src = args.problem
    if task == "lie-validate" and not Path(src).exists():
        try:
            builtin_algebra(src)
        except ValueError:
            raise InputError(f"{src!r} is neither a problem file nor a built-in algebra") from None
        return parse_problem({"algebra": src}, task)
    prob = load_problem(src, task)
    if getattr(args, "degree", None) is not None:
        if args.degree < 0:
            raise InputError("--degree must be nonnegative")
        prob.N = args.degree
    if task == "omega" and getattr(args, "d_max", None) is not None:
        prob.data["d_max"] = args.d_max
    return prob


def _problems_dir():
    return resources.files("poisson_nf") / "problems"


def _golden_dir():
    return resources.files("poisson_nf") / "golden"


def selftest(update: bool = False, out=sys.stdout) -> int:
    """Run every packaged problem and compare machine output with its golden file."""
    failures = 0
    pdir = _problems_dir()
    gdir = Path(str(_golden_dir()))
    for entry in sorted(pdir.iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".yaml"):
            continue
        stem = entry.name[: -len(".yaml")]
        prob = load_problem(str(entry))
        try:
            text = emit_report(run_problem(prob), "machine")
        except NormalFormError as e:
            text = emit_report(error_report(e), "machine")
        golden = gdir / f"{stem}.json"
        if update:
            golden.write_text(text)
            print(f"updated {stem}", file=out)
            continue
        if golden.exists() and golden.read_text() == text:
            print(f"ok      {stem}", file=out)
        else:
            failures += 1
            print(f"FAIL    {stem}", file=out)
    print("selftest passed" if not failures else f"selftest: {failures} failure(s)", file=out)
    return 0 if not failures else 1


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text", help="output format")
    common.add_argument(
        "--threads", type=int, default=1, help="cap on internal parallelism (execution is sequential; output never depends on it)"
    )
    p = argparse.ArgumentParser(prog="poisson-nf", description="Exact truncated normal forms on Poisson manifolds.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lie-validate", parents=[common], help="validate structure constants")
    s.add_argument("problem", help="problem file or built-in algebra name (sl2, sl3, so3)")

    s = sub.add_parser("linearize", parents=[common], help="linearize a homogeneous Poisson structure")
    s.add_argument("problem")
    s.add_argument("--schedule", choices=("block", "degree"), default="block")
    s.add_argument("--degree", type=int, help="override the truncation degree N")

    s = sub.add_parser("birkhoff", parents=[common], help="Poincare-Birkhoff normal form of a Hamiltonian")
    s.add_argument("problem")
    s.add_argument("--degree", type=int, help="override the truncation degree N")

    s = sub.add_parser("resonance", parents=[common], help="resonance lattice and toric generators")
    s.add_argument("problem")
    s.add_argument("--degree", type=int, help="override the degree bound N for resonant monomials")

    s = sub.add_parser("omega", parents=[common], help="omega sequence, Bruno partial sums and radii")
    s.add_argument("problem")
    s.add_argument("--d-max", dest="d_max", type=int)

    s = sub.add_parser("siegel", parents=[common], help="Siegel-type divisor check")
    s.add_argument("problem")

    s = sub.add_parser("selftest", parents=[common], help="run the packaged golden suite")
    s.add_argument("--update", action="store_true", help="rewrite the golden files")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=err)
        return 2
    if args.command == "selftest":
        return selftest(args.update, out)
    try:
        prob = _load(args, args.command)
        report = run_problem(prob, getattr(args, "schedule", "block"))
    except InputError as e:
        out.write(emit_report(error_report(e), args.format))
        print(f"error: {e}", file=err)
        return 2
    except NormalFormError as e:
        out.write(emit_report(error_report(e), args.format))
        print(f"error [{e.code}]: {e}", file=err)
        return 1
    out.write(emit_report(report, args.format))
    return 0 if report.get("pass", True) else 1


def main() -> None:
    sys.exit(run())
