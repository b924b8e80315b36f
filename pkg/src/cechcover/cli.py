"""Command-line front end.

Subcommands: check | cech | amitsur | verify | oracle.  One self-contained
problem file per invocation; reports are emitted as JSON (machine) or an
aligned text rendering of the same data.

Exit codes: 0 success, 1 property violation found, 2 input error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import __version__
from .amitsur import TensorTower, amitsur_homology, build_amitsur
from .cech import (
    build_cech, cech_cohomology, default_phi_choice, space_layout, verify_chain_map,
)
from .coverings import build_tau, completeness_check
from .errors import (
    CechcoverError, DimensionCapError, NotAComplexError, ProblemFormatError, StructureError,
)
from .linalg import rank
from .nerve import nerve_cohomology
from .problem import (
    Problem, build_problem_functor, field_spec_to_json, load_problem,
    normalize, parse_field_spec, tuple_to_key,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_CAP = 3


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="cechcover",
        description="Exact Cech cohomology of algebra coverings")
    parser.add_argument("--version", action="version", version=f"cechcover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("check", "covering and completeness report"),
            ("cech", "Cech cohomology of the problem's functor"),
            ("amitsur", "Amitsur complex dimensions and homology"),
            ("verify", "run every structural check and report pass/fail"),
            ("oracle", "compare Cech dimensions against the nerve oracle")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, help="problem file (JSON)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--n-max", type=int, help="override options.n_max")
        p.add_argument("--dim-cap", type=int, help="override options.dim_cap")
        p.add_argument("--field-override",
                       help='compute over this field instead ("Q" or "Fp:5")')
    args = parser.parse_args(argv)

    try:
        override = _parse_field_flag(args.field_override)
        problem, digest = load_problem(args.input, field_override=override)
        if args.n_max is not None:
            if args.n_max < 1:
                raise ProblemFormatError("n_max must be >= 1", "--n-max")
            problem.n_max = args.n_max
        if args.dim_cap is not None:
            if args.dim_cap < 1:
                raise ProblemFormatError("dim_cap must be positive", "--dim-cap")
            problem.dim_cap = args.dim_cap
    except ProblemFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    started = time.perf_counter()
    try:
        results, checks, code = _dispatch(args.command, problem)
    except ProblemFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NotAComplexError, StructureError) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    elapsed = time.perf_counter() - started

    report = {
        "tool": "cechcover",
        "version": __version__,
        "command": args.command,
        "input": {"path": args.input, "sha256": digest},
        "field": field_spec_to_json(problem.field),
        "problem": normalize(problem),
        "results": results,
        "checks": checks,
        "timing": {"seconds": round(elapsed, 6)},
    }
    rendered = (json.dumps(report, indent=2, sort_keys=True) + "\n"
                if args.format == "json" else _render_text(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return code


def _parse_field_flag(flag: Optional[str]):
    if flag is None:
        return None
    if flag == "Q":
        return parse_field_spec("Q", "--field-override")
    if flag.startswith("Fp:"):
        try:
            return parse_field_spec({"Fp": int(flag[3:])}, "--field-override")
        except ValueError:
            pass
    raise ProblemFormatError('expected "Q" or "Fp:<prime>"', "--field-override")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _need_covering(problem: Problem):
    if problem.covering is None:
        raise ProblemFormatError("this command needs algebra, ideals and covering sections",
                                 "covering")
    return problem.covering


def _dispatch(command: str, problem: Problem):
    if command == "check":
        return _cmd_check(problem)
    if command == "cech":
        return _cmd_cech(problem)
    if command == "amitsur":
        return _cmd_amitsur(problem)
    if command == "verify":
        return _cmd_verify(problem)
    return _cmd_oracle(problem)


def _cmd_check(problem: Problem):
    c = _need_covering(problem)
    report = completeness_check(c)
    results = {
        "covering": report.as_dict(),
        "patch_dims": list(c.patch_dims()),
        "pair_dims": list(c.pair_dims()),
        "tau_rank": rank(build_tau(c)),
    }
    return results, {}, EXIT_OK


def _functor_summary(functor) -> dict:
    dims = {}
    for length in range(functor.n_patches + 1):
        layout = space_layout(functor, length)
        for zeta, _, d in layout.blocks:
            dims[tuple_to_key(zeta)] = d
    return dims


def _cmd_cech(problem: Problem):
    try:
        functor, kind, _ = build_problem_functor(problem)
        cx = build_cech(functor)
    except StructureError as exc:
        return ({"error": str(exc), "witness": repr(exc.witness)},
                {"functor_validation": False}, EXIT_VIOLATION)
    results = {
        "functor": kind,
        "ring_dims": _functor_summary(functor),
        "cech_cohomology": cech_cohomology(cx),
    }
    checks = {"functor_validation": True, "dprime_squared_zero": True}
    return results, checks, EXIT_OK


def _cmd_amitsur(problem: Problem):
    c = _need_covering(problem)
    cx = build_amitsur(c, problem.n_max, cap=problem.dim_cap)
    results = {
        "covering": completeness_check(c).as_dict(),
        "degree_dims": list(cx.degree_dims()),
        "homology_augmented": amitsur_homology(cx, augmented=True),
        "homology_unaugmented": amitsur_homology(cx, augmented=False),
    }
    checks = {"d_squared_zero": True, "augmentation_chain": True}
    return results, checks, EXIT_OK


def _cmd_verify(problem: Problem):
    c = _need_covering(problem)
    checks: dict = {}
    results: dict = {}
    ok = True

    report = completeness_check(c)
    results["covering"] = report.as_dict()

    try:
        tower = TensorTower(c, cap=problem.dim_cap)
        cx = build_amitsur(c, problem.n_max, cap=problem.dim_cap, tower=tower)
        checks["d_squared_zero"] = True
        results["degree_dims"] = list(cx.degree_dims())
        results["homology_augmented"] = amitsur_homology(cx, augmented=True)
    except NotAComplexError as exc:
        checks["d_squared_zero"] = False
        results["d_squared_witness"] = str(exc)
        ok = False
        tower = None

    functor = None
    try:
        functor, kind, _ = build_problem_functor(problem)
        from .cech import validate_functor
        validate_functor(functor)
        checks["functor_validation"] = True
        results["functor"] = kind
    except StructureError as exc:
        functor = None
        checks["functor_validation"] = False
        results["functor_witness"] = f"{exc} [{exc.witness!r}]"
        ok = False

    if functor is not None:
        try:
            ccx = build_cech(functor, validate=False)
            checks["dprime_squared_zero"] = True
            results["cech_cohomology"] = cech_cohomology(ccx)
        except NotAComplexError as exc:
            checks["dprime_squared_zero"] = False
            results["dprime_witness"] = str(exc)
            ok = False

    if functor is not None and tower is not None:
        try:
            choice = default_phi_choice(functor, c)
        except CechcoverError:
            choice = None
            checks["chain_map"] = "skipped"
            results["chain_map_note"] = ("no canonical patch homs A_i -> R((i,)); "
                                         "chain-map check needs the default ringed functor")
        if choice is not None:
            cm = verify_chain_map(functor, choice, c, problem.n_max,
                                  tower=tower, cap=problem.dim_cap)
            checks["chain_map"] = cm.passed
            results["chain_map"] = cm.as_dict()
            ok = ok and cm.passed

    return results, checks, EXIT_OK if ok else EXIT_VIOLATION


def _cmd_oracle(problem: Problem):
    functor, kind, cd = build_problem_functor(problem)
    if cd is None:
        raise ProblemFormatError('oracle needs a {"cover": ...} functor section', "functor")
    nerve_dims = nerve_cohomology(cd)
    cech_dims = cech_cohomology(build_cech(functor))
    match = nerve_dims == cech_dims
    results = {
        "functor": kind,
        "nerve_cohomology": nerve_dims,
        "cech_cohomology": cech_dims,
    }
    checks = {"oracle_match": match}
    return results, checks, EXIT_OK if match else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------

def _render_text(report: dict) -> str:
    lines = [f"cechcover {report['version']} - {report['command']}"]
    lines.append(f"input: {report['input']['path']} (sha256 {report['input']['sha256'][:12]}...)")
    lines.append(f"field: {json.dumps(report['field'])}")
    lines.append("")
    lines.append("results:")
    lines.extend(_render_block(report["results"], indent=2))
    if report["checks"]:
        lines.append("checks:")
        for key in sorted(report["checks"]):
            lines.append(f"  {key}: {report['checks'][key]}")
    lines.append(f"timing: {report['timing']['seconds']} s")
    return "\n".join(lines) + "\n"


def _render_block(value, indent: int) -> list:
    pad = " " * indent
    lines = []
    if isinstance(value, dict):
        for key in value:
            sub = value[key]
            if isinstance(sub, (dict, list)) and sub and not _is_flat(sub):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_block(sub, indent + 2))
            else:
                lines.append(f"{pad}{key}: {json.dumps(sub)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.extend(_render_block(item, indent))
            else:
                lines.append(f"{pad}- {json.dumps(item)}")
    else:
        lines.append(f"{pad}{json.dumps(value)}")
    return lines


def _is_flat(value) -> bool:
    if isinstance(value, list):
        return all(not isinstance(x, (dict, list)) for x in value)
    return False


if __name__ == "__main__":
    sys.exit(main())
