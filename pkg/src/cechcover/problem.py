"""Problem documents: parsing, validation and canonical re-emission.

A problem file is a single self-contained JSON document; see
docs/file_formats.md for the schema.  Scalars are JSON integers or exact
fraction strings like "2/3".  Structure constants are sparse quadruples
[i, j, k, coeff] meaning b_i * b_j contains coeff * b_k (0-based indices).

``normalize`` re-emits the parsed problem in canonical form; parsing the
normalized document yields an equivalent problem, which is what report
round-tripping relies on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from hashlib import sha256
from pathlib import Path
from typing import Optional

from .algebras import Algebra, AlgebraHom, ideal_closure, make_algebra
from .cech import PosetFunctor, all_tuples, insert_index
from .coverings import Covering
from .errors import CechcoverError, ProblemFormatError
from .linalg import GF, QQ, Field, Matrix
from .nerve import CoverDescription

DEFAULT_N_MAX = 3
DEFAULT_DIM_CAP = 20000


@dataclass
class Problem:
    field: Field
    algebra: Optional[Algebra]
    ideals: dict
    covering: Optional[Covering]
    functor_spec: Optional[dict]  # {"kind": ..., ...}
    n_max: int = DEFAULT_N_MAX
    dim_cap: int = DEFAULT_DIM_CAP
    raw: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

def parse_scalar(field: Field, value, loc: str):
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not scalars")
        if isinstance(value, int):
            return field.coerce(value)
        if isinstance(value, str):
            return field.coerce(Fraction(value))
        raise ValueError(f"unsupported scalar {value!r}")
    except (ValueError, ZeroDivisionError) as exc:
        raise ProblemFormatError(str(exc), loc)


def scalar_to_json(field: Field, value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return int(value)


def parse_vector(field: Field, value, length: int, loc: str) -> tuple:
    if not isinstance(value, list) or len(value) != length:
        raise ProblemFormatError(f"expected a list of {length} scalars", loc)
    return tuple(parse_scalar(field, x, f"{loc}[{i}]") for i, x in enumerate(value))


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

def parse_field_spec(spec, loc: str = "field") -> Field:
    if spec == "Q":
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        p = spec["Fp"]
        if not isinstance(p, int):
            raise ProblemFormatError("Fp order must be an integer", loc)
        try:
            return GF(p)
        except ValueError as exc:
            raise ProblemFormatError(str(exc), loc)
    raise ProblemFormatError('field must be "Q" or {"Fp": p}', loc)


def field_spec_to_json(field: Field):
    if field == QQ:
        return "Q"
    return {"Fp": field.p}


def parse_algebra_section(field: Field, spec, loc: str) -> Algebra:
    if not isinstance(spec, dict):
        raise ProblemFormatError("algebra section must be an object", loc)
    for key in ("dim", "mul", "unit"):
        if key not in spec:
            raise ProblemFormatError(f"missing '{key}'", loc)
    dim = spec["dim"]
    if not isinstance(dim, int) or dim < 0:
        raise ProblemFormatError("dim must be a non-negative integer", f"{loc}.dim")
    table = [[[field.zero] * dim for _ in range(dim)] for _ in range(dim)]
    if not isinstance(spec["mul"], list):
        raise ProblemFormatError("mul must be a list of [i, j, k, coeff] quadruples", f"{loc}.mul")
    for t, quad in enumerate(spec["mul"]):
        qloc = f"{loc}.mul[{t}]"
        if not isinstance(quad, list) or len(quad) != 4:
            raise ProblemFormatError("expected [i, j, k, coeff]", qloc)
        i, j, k, coeff = quad
        for name, idx in (("i", i), ("j", j), ("k", k)):
            if not isinstance(idx, int) or not 0 <= idx < dim:
                raise ProblemFormatError(f"index {name}={idx} out of range 0..{dim - 1}", qloc)
        table[i][j][k] = field.add(table[i][j][k], parse_scalar(field, coeff, qloc))
    unit = parse_vector(field, spec["unit"], dim, f"{loc}.unit")
    labels = spec.get("labels")
    if labels is not None:
        if (not isinstance(labels, list) or len(labels) != dim
                or not all(isinstance(x, str) for x in labels)):
            raise ProblemFormatError(f"labels must be {dim} strings", f"{loc}.labels")
    try:
        return make_algebra(field, dim,
                            tuple(tuple(tuple(v) for v in row) for row in table),
                            unit, labels)
    except CechcoverError as exc:
        raise ProblemFormatError(str(exc), loc)


def algebra_to_json(a: Algebra) -> dict:
    f = a.field
    triples = []
    for i in range(a.dim):
        for j in range(a.dim):
            for k, c in enumerate(a.mul_table[i][j]):
                if c != f.zero:
                    triples.append([i, j, k, scalar_to_json(f, c)])
    out = {
        "dim": a.dim,
        "mul": triples,
        "unit": [scalar_to_json(f, x) for x in a.unit],
    }
    if a.labels:
        out["labels"] = list(a.labels)
    return out


def _parse_tuple_key(key: str, n: int, loc: str) -> tuple:
    if key == "":
        return ()
    try:
        t = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise ProblemFormatError(f"bad tuple key {key!r}", loc)
    if list(t) != sorted(set(t)) or (t and (t[0] < 1 or t[-1] > n)):
        raise ProblemFormatError(f"tuple key {key!r} is not an increasing tuple in 1..{n}", loc)
    return t


def tuple_to_key(t: tuple) -> str:
    return ",".join(str(i) for i in t)


def parse_functor_spec(spec, loc: str = "functor") -> dict:
    if spec == "ringed_default":
        return {"kind": "ringed_default"}
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ProblemFormatError(
            'functor must be "ringed_default" or one of {"constant"|"cover"|"explicit": ...}', loc)
    kind, body = next(iter(spec.items()))
    if kind not in ("constant", "cover", "explicit"):
        raise ProblemFormatError(f"unknown functor kind {kind!r}", loc)
    if not isinstance(body, dict):
        raise ProblemFormatError("functor body must be an object", f"{loc}.{kind}")
    if "n" not in body or not isinstance(body["n"], int) or body["n"] < 1:
        raise ProblemFormatError("functor body needs a patch count 'n' >= 1", f"{loc}.{kind}")
    return {"kind": kind, "body": body}


# ---------------------------------------------------------------------------
# Whole documents
# ---------------------------------------------------------------------------

def parse_problem(doc, field_override: Optional[Field] = None) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemFormatError("problem document must be a JSON object", "$")
    known = {"field", "algebra", "ideals", "covering", "functor", "options"}
    for key in doc:
        if key not in known:
            raise ProblemFormatError(f"unknown section {key!r}", key)
    field = field_override or parse_field_spec(doc.get("field", "Q"))

    algebra = None
    if "algebra" in doc:
        algebra = parse_algebra_section(field, doc["algebra"], "algebra")

    ideals: dict = {}
    if "ideals" in doc:
        if algebra is None:
            raise ProblemFormatError("ideals need an algebra section", "ideals")
        if not isinstance(doc["ideals"], dict):
            raise ProblemFormatError("ideals must map names to generator lists", "ideals")
        for name, gens in doc["ideals"].items():
            iloc = f"ideals.{name}"
            if not isinstance(gens, list):
                raise ProblemFormatError("generators must be a list of vectors", iloc)
            vecs = [parse_vector(field, g, algebra.dim, f"{iloc}[{gi}]")
                    for gi, g in enumerate(gens)]
            try:
                ideals[name] = ideal_closure(algebra, vecs)
            except CechcoverError as exc:
                raise ProblemFormatError(str(exc), iloc)

    covering = None
    if "covering" in doc:
        names = doc["covering"]
        if (not isinstance(names, list) or not names
                or not all(isinstance(x, str) for x in names)):
            raise ProblemFormatError("covering must be a non-empty list of ideal names", "covering")
        for name in names:
            if name not in ideals:
                raise ProblemFormatError(f"unknown ideal name {name!r}", "covering")
        try:
            covering = Covering(algebra, [ideals[n] for n in names])
        except CechcoverError as exc:
            raise ProblemFormatError(str(exc), "covering")

    functor_spec = None
    if "functor" in doc:
        functor_spec = parse_functor_spec(doc["functor"])

    n_max, dim_cap = DEFAULT_N_MAX, DEFAULT_DIM_CAP
    if "options" in doc:
        opts = doc["options"]
        if not isinstance(opts, dict):
            raise ProblemFormatError("options must be an object", "options")
        for key in opts:
            if key not in ("n_max", "dim_cap"):
                raise ProblemFormatError(f"unknown option {key!r}", "options")
        if "n_max" in opts:
            n_max = opts["n_max"]
            if not isinstance(n_max, int) or n_max < 1:
                raise ProblemFormatError("n_max must be an integer >= 1", "options.n_max")
        if "dim_cap" in opts:
            dim_cap = opts["dim_cap"]
            if not isinstance(dim_cap, int) or dim_cap < 1:
                raise ProblemFormatError("dim_cap must be a positive integer", "options.dim_cap")

    return Problem(field, algebra, ideals, covering, functor_spec,
                   n_max, dim_cap, raw=doc)


def load_problem(path: str, field_override: Optional[Field] = None):
    """Read a problem file; returns (Problem, sha256 hex digest)."""
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise ProblemFormatError(str(exc), str(path))
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}", str(path))
    problem = parse_problem(doc, field_override)
    return problem, sha256(data).hexdigest()


def normalize(problem: Problem) -> dict:
    """Canonical re-emission; parsing it back gives an equivalent problem."""
    doc: dict = {"field": field_spec_to_json(problem.field)}
    if problem.algebra is not None:
        doc["algebra"] = algebra_to_json(problem.algebra)
    if problem.ideals:
        f = problem.field
        doc["ideals"] = {
            name: [[scalar_to_json(f, x) for x in row] for row in ideal.space.basis.entries]
            for name, ideal in problem.ideals.items()}
    if problem.covering is not None:
        names = list(problem.raw.get("covering", []))
        doc["covering"] = names
    if problem.functor_spec is not None:
        doc["functor"] = (problem.raw or {}).get("functor", "ringed_default")
    doc["options"] = {"n_max": problem.n_max, "dim_cap": problem.dim_cap}
    return doc


# ---------------------------------------------------------------------------
# Building functors from problem documents
# ---------------------------------------------------------------------------

def build_problem_functor(problem: Problem):
    """Returns (PosetFunctor, kind, CoverDescription | None).

    ``ringed_default`` (also the default when a covering is present) uses
    the covering with the default ringed structure; ``cover`` also returns
    the CoverDescription so the oracle can run.
    """
    from .cech import constant_functor, functor_from_ringed_covering
    from .nerve import functor_from_cover

    spec = problem.functor_spec or {"kind": "ringed_default"}
    kind = spec["kind"]
    if kind == "ringed_default":
        if problem.covering is None:
            raise ProblemFormatError("ringed_default functor needs a covering", "functor")
        return functor_from_ringed_covering(problem.covering), kind, None
    body = spec["body"]
    n = body["n"]
    if kind == "constant":
        if "ring" not in body:
            raise ProblemFormatError("constant functor needs a 'ring'", "functor.constant")
        ring = parse_algebra_section(problem.field, body["ring"], "functor.constant.ring")
        return constant_functor(n, ring), kind, None
    if kind == "cover":
        overlaps = body.get("nonempty_overlaps")
        if not isinstance(overlaps, list):
            raise ProblemFormatError("cover functor needs 'nonempty_overlaps'", "functor.cover")
        tuples = set()
        for t, item in enumerate(overlaps):
            if not isinstance(item, list) or not all(isinstance(x, int) for x in item):
                raise ProblemFormatError("overlaps must be integer lists",
                                         f"functor.cover.nonempty_overlaps[{t}]")
            tuples.add(tuple(item))
        try:
            cd = CoverDescription(n, frozenset(tuples), problem.field)
        except CechcoverError as exc:
            raise ProblemFormatError(str(exc), "functor.cover")
        return functor_from_cover(cd), kind, cd
    # explicit
    rings_spec = body.get("rings")
    rest_spec = body.get("restrictions")
    if not isinstance(rings_spec, dict) or not isinstance(rest_spec, dict):
        raise ProblemFormatError("explicit functor needs 'rings' and 'restrictions'",
                                 "functor.explicit")
    rings = {}
    for key, spec_a in rings_spec.items():
        zeta = _parse_tuple_key(key, n, f"functor.explicit.rings.{key!r}")
        rings[zeta] = parse_algebra_section(problem.field, spec_a,
                                            f"functor.explicit.rings.{key}")
    for length in range(n + 1):
        for zeta in all_tuples(n, length):
            if zeta not in rings:
                raise ProblemFormatError(f"missing ring for tuple {zeta}",
                                         "functor.explicit.rings")
    steps = {}
    for key, rows in rest_spec.items():
        loc = f"functor.explicit.restrictions.{key}"
        if "->" not in key:
            raise ProblemFormatError("restriction keys look like 'zeta->eta'", loc)
        src_key, dst_key = key.split("->", 1)
        zeta = _parse_tuple_key(src_key, n, loc)
        eta = _parse_tuple_key(dst_key, n, loc)
        if len(eta) != len(zeta) + 1 or not set(zeta) <= set(eta):
            raise ProblemFormatError("restrictions are single-index inclusions", loc)
        dom, cod = rings[zeta], rings[eta]
        if not isinstance(rows, list):
            raise ProblemFormatError("restriction matrix must be a list of rows", loc)
        mat_rows = [parse_vector(problem.field, row, dom.dim, f"{loc}[{ri}]")
                    for ri, row in enumerate(rows)]
        if len(mat_rows) != cod.dim:
            raise ProblemFormatError(f"restriction matrix must have {cod.dim} rows", loc)
        matrix = Matrix(problem.field, cod.dim, dom.dim, tuple(mat_rows))
        try:
            steps[(zeta, eta)] = AlgebraHom(dom, cod, matrix)
        except CechcoverError as exc:
            raise ProblemFormatError(str(exc), loc)
    for length in range(n):
        for zeta in all_tuples(n, length):
            for i in range(1, n + 1):
                if i in zeta:
                    continue
                _, eta = insert_index(zeta, i)
                if (zeta, eta) not in steps:
                    raise ProblemFormatError(
                        f"missing restriction {tuple_to_key(zeta)}->{tuple_to_key(eta)}",
                        "functor.explicit.restrictions")
    return PosetFunctor(n, rings, steps), kind, None
