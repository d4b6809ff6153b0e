"""Batch front end: sectioned text configs in, deterministic reports out.

A config names two groups and two actions and the command line names one
task. Section names follow the triangle glyphs: [action.left] holds the
left-pointing action (s, x) -> s <| x landing in the second group, and
[action.right] the right-pointing action (s, x) -> s |> x landing in the
first. Reports are emitted as a human table on stdout and, on request, as
a JSON document with sorted keys, so two runs on the same input are
byte-identical; the per-task "ms" field stays 0 unless --timings is passed
for exactly that reason.

Exit codes: 0 success, 2 for anything wrong with the input (parse errors,
validation errors, broken pair axioms, an oracle asked outside its
hypotheses), 3 for a refused size cap, 4 for an internal invariant failure,
which is always a bug worth reporting.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
import time
from configparser import ConfigParser
from configparser import Error as IniSyntaxError
from fractions import Fraction
from math import isqrt

import numpy as np

from .cohomology import CIRCLE, group_cohomology
from .complexes import NotSemidirect, SizeBound
from .exactlin import FpAbGroup
from .groups import (
    FiniteGroup,
    NotAbelian,
    NotAGroup,
    abelian_group,
    cyclic_group,
    direct_product,
    group_from_permutations,
    group_from_table,
)
from .kac import (
    HypothesisViolated,
    IncompatiblePair,
    LiftFailed,
    NotCocycle,
    five_term,
    involution_opext,
    kac_sequence,
    odd_abelian_opext,
    opext,
    swap_opext,
)
from .matched import AxiomViolation, MatchedPair, NotExactFactorization, \
    is_semidirect, validate_matched_pair

TASKS = ("validate", "opext", "five-term", "kac-seq", "cohomology",
         "oracle-compare")
ROUTE_NAMES = ("kac_total", "relative", "five_term_reconstruction")
DIRECT_SIGMA_CAP = 128
SEQUENCE_SIGMA_CAP = 12


class ParseError(Exception):
    """The config text cannot be read; carries a line number and a reason."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}" if line else reason)


class ValidationError(Exception):
    """The config parses but describes something inconsistent."""

    def __init__(self, field: str, reason: str = ""):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}" if reason else field)


# ---------------------------------------------------------------------------
# config grammar


_GROUP_KEYS = {
    "cyclic": {"kind", "n"},
    "abelian": {"kind", "moduli"},
    "mult_table": {"kind", "table"},
    "permutations": {"kind", "degree", "generators"},
    "direct_product": {"kind", "copies", "factor_kind", "factor_n",
                       "factor_moduli", "factor_table", "factor_degree",
                       "factor_generators"},
}
_ACTION_KEYS = {
    "trivial": {"kind"},
    "permutation_table": {"kind", "table"},
    "matrices_mod": {"kind"},
    "swap": {"kind"},
    "matrix_A": {"kind", "n", "a"},
}
_COMPUTE_KEYS = {"tasks", "route", "degrees", "subject", "reps", "resolution",
                 "max_sigma", "tail_cells", "depth"}
_SECTIONS = ("group.F", "group.G", "action.left", "action.right", "compute")


def _line_of(text: str, needle: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return 0


def _reject_unknown(text: str, got, allowed, where: str) -> None:
    for key in got:
        if key in allowed:
            continue
        hint = difflib.get_close_matches(key, sorted(allowed), n=1)
        extra = f" (did you mean {hint[0]!r}?)" if hint else ""
        raise ParseError(_line_of(text, key),
                         f"unknown key {key!r} in [{where}]{extra}")


def _ints(value: str, field: str) -> list[int]:
    try:
        return [int(tok) for tok in value.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(field, f"expected integers, got {value!r}")


def _one_int(value: str, field: str) -> int:
    got = _ints(value, field)
    if len(got) != 1:
        raise ValidationError(field, "expected a single integer")
    return got[0]


def _perms(value: str, field: str) -> list[list[int]]:
    return [_ints(part, field) for part in value.split(";") if part.strip()]


class ProblemSpec:
    """A parsed config: two group builds, two action sections, options."""

    __slots__ = ("f_build", "g_build", "left", "right", "tasks", "options")

    def __init__(self, f_build, g_build, left, right, tasks, options):
        self.f_build = f_build
        self.g_build = g_build
        self.left = left
        self.right = right
        self.tasks = tasks
        self.options = options


class _Build:
    """A constructed group plus how it was described in the config."""

    __slots__ = ("group", "moduli", "square_of")

    def __init__(self, group, moduli=None, square_of=None):
        self.group = group
        self.moduli = moduli
        self.square_of = square_of


def _build_factor(sec: dict, field: str, prefix: str = "") -> _Build:
    kind = sec.get(prefix + "kind")
    if kind is None:
        raise ValidationError(field, "missing kind")
    if kind == "cyclic":
        n = _ints(sec.get(prefix + "n", ""), field)
        if len(n) != 1 or n[0] < 1:
            raise ValidationError(field, "cyclic needs one positive n")
        return _Build(cyclic_group(n[0]), moduli=[n[0]])
    if kind == "abelian":
        moduli = _ints(sec.get(prefix + "moduli", ""), field)
        if not moduli or any(d < 1 for d in moduli):
            raise ValidationError(field, "abelian needs positive moduli")
        half = len(moduli) // 2
        square_of = (abelian_group(moduli[:half])
                     if half and moduli[:half] == moduli[half:] else None)
        return _Build(abelian_group(moduli), moduli=list(moduli),
                      square_of=square_of)
    if kind == "mult_table":
        flat = _ints(sec.get(prefix + "table", ""), field)
        n = isqrt(len(flat))
        if n * n != len(flat):
            raise ValidationError(field, "mult_table length is not a square")
        table = np.array(flat, dtype=np.int64).reshape(n, n)
        return _Build(group_from_table(table))
    if kind == "permutations":
        deg = _ints(sec.get(prefix + "degree", ""), field)
        gens = _perms(sec.get(prefix + "generators", ""), field)
        if len(deg) != 1 or not gens:
            raise ValidationError(field, "permutations needs degree and generators")
        return _Build(group_from_permutations(gens, deg[0]))
    raise ValidationError(field, f"unknown group kind {kind!r}")


def _build_group(sec: dict, field: str) -> _Build:
    if sec.get("kind") == "direct_product":
        copies = _ints(sec.get("copies", "2"), field)
        if len(copies) != 1 or copies[0] < 2:
            raise ValidationError(field, "copies must be a single integer >= 2")
        factor = _build_factor(sec, field, prefix="factor_")
        grp = factor.group
        moduli = factor.moduli
        for _ in range(copies[0] - 1):
            grp = direct_product(grp, factor.group)
            moduli = moduli + factor.moduli if moduli else None
        return _Build(grp, moduli=moduli,
                      square_of=factor.group if copies[0] == 2 else None)
    return _build_factor(sec, field)


def _coords_of(idx: int, moduli) -> list[int]:
    out = []
    for d in reversed(moduli):
        out.append(idx % d)
        idx //= d
    return list(reversed(out))


def _index_of(coords, moduli) -> int:
    idx = 0
    for c, d in zip(coords, moduli):
        idx = idx * d + (int(c) % d)
    return idx


def _matrix_keys(sec: dict, count: int, field: str, k: int):
    mats = {}
    for key, value in sec.items():
        if key in ("kind",):
            continue
        if not key.startswith("matrix_"):
            raise ValidationError(field, f"unexpected key {key!r}")
        x = _one_int(key[len("matrix_"):], field)
        flat = _ints(value, field)
        if len(flat) != k * k:
            raise ValidationError(field, f"{key} must have {k * k} entries")
        mats[x] = np.array(flat, dtype=object).reshape(k, k)
    eye = np.eye(k, dtype=object)
    mats.setdefault(0, eye)
    for x in range(count):
        if x not in mats:
            raise ValidationError(field, f"missing matrix_{x}")
    return mats


def parse_config(text: str) -> ProblemSpec:
    """Read a config document into a validated ProblemSpec."""
    cp = ConfigParser(delimiters=("=",), inline_comment_prefixes=("#",),
                      strict=True)
    try:
        cp.read_string(text)
    except IniSyntaxError as exc:
        line = getattr(exc, "lineno", 0) or 0
        raise ParseError(line, exc.message.splitlines()[0]
                         if exc.message else str(exc))
    for section in cp.sections():
        if section not in _SECTIONS:
            hint = difflib.get_close_matches(section, _SECTIONS, n=1)
            extra = f" (did you mean [{hint[0]}]?)" if hint else ""
            raise ParseError(_line_of(text, f"[{section}]"),
                             f"unknown section [{section}]{extra}")
    for section in ("group.F", "group.G", "action.left", "action.right"):
        if section not in cp:
            raise ParseError(0, f"missing section [{section}]")
    sections = {name: dict(cp[name]) for name in cp.sections()}

    for name in ("group.F", "group.G"):
        kind = sections[name].get("kind")
        if kind not in _GROUP_KEYS:
            raise ValidationError(f"{name}.kind", f"unknown group kind {kind!r}")
        _reject_unknown(text, sections[name], _GROUP_KEYS[kind], name)
    for name in ("action.left", "action.right"):
        kind = sections[name].get("kind")
        if kind not in _ACTION_KEYS:
            raise ValidationError(f"{name}.kind", f"unknown action kind {kind!r}")
        if kind == "matrices_mod":
            pass  # matrix_<i> keys are dynamic, checked in _matrix_keys
        else:
            _reject_unknown(text, sections[name], _ACTION_KEYS[kind], name)
    compute = sections.get("compute", {})
    _reject_unknown(text, compute, _COMPUTE_KEYS, "compute")

    tasks = compute.get("tasks", "").split()
    for task in tasks:
        if task not in TASKS:
            hint = difflib.get_close_matches(task, TASKS, n=1)
            extra = f" (did you mean {hint[0]!r}?)" if hint else ""
            raise ParseError(_line_of(text, task),
                             f"unknown task {task!r}{extra}")
    f_build = _build_group(sections["group.F"], "group.F")
    g_build = _build_group(sections["group.G"], "group.G")
    return ProblemSpec(f_build, g_build, sections["action.left"],
                       sections["action.right"], tasks, compute)


# ---------------------------------------------------------------------------
# building the pair


def _left_table(spec: ProblemSpec) -> np.ndarray:
    """The table of s <| x from [action.left]; values index into G."""
    F, G = spec.f_build.group, spec.g_build.group
    sec = spec.left
    kind = sec["kind"]
    table = np.zeros((G.n, F.n), dtype=np.int64)
    if kind == "trivial":
        table[:] = np.arange(G.n)[:, None]
        return table
    if kind == "permutation_table":
        flat = _ints(sec.get("table", ""), "action.left.table")
        if len(flat) != G.n * F.n:
            raise ValidationError("action.left.table",
                                  f"need {G.n * F.n} entries")
        table[:] = np.array(flat, dtype=np.int64).reshape(G.n, F.n)
        if table.min() < 0 or table.max() >= G.n:
            raise ValidationError("action.left.table", "entries outside G")
        return table
    if kind == "matrices_mod":
        moduli = spec.g_build.moduli
        if moduli is None:
            raise ValidationError("action.left.kind",
                                  "matrices_mod needs a coordinate group G")
        k = len(moduli)
        mats = _matrix_keys(sec, F.n, "action.left", k)
        if any(int(v) % d != (1 if i == j else 0) % d
               for (i, j), v in np.ndenumerate(mats[0])
               for d in [moduli[i]]):
            raise ValidationError("action.left.matrix_0",
                                  "the identity of F must act as the identity")
        for s in range(G.n):
            coords = _coords_of(s, moduli)
            for x in range(F.n):
                table[s, x] = _index_of(mats[x] @ np.array(coords, dtype=object),
                                        moduli)
        return table
    if kind == "swap":
        H = spec.g_build.square_of
        if H is None:
            raise ValidationError("action.left.kind",
                                  "swap needs G = direct_product with copies = 2")
        if F.n != 2:
            raise ValidationError("group.F", "swap needs F of order 2")
        for a in range(H.n):
            for b in range(H.n):
                s = a * H.n + b
                table[s, 0] = s
                table[s, 1] = b * H.n + a
        return table
    if kind == "matrix_A":
        n = _one_int(sec.get("n", ""), "action.left.n")
        flat = _ints(sec.get("a", ""), "action.left.a")
        if len(flat) != 4:
            raise ValidationError("action.left.a", "need a 2x2 matrix")
        a, b, c, d = flat
        if (a * d - b * c) % n != (n - 1) % n:
            raise ValidationError("action.left.a", "determinant must be -1")
        A = np.array([[a, b], [c, d]], dtype=object)
        if ((A @ A) % n != np.eye(2, dtype=object)).any():
            raise ValidationError("action.left.a", "matrix must square to 1")
        if spec.g_build.moduli != [n, n] or F.n != 2:
            raise ValidationError("group.G",
                                  f"matrix_a needs G abelian [{n} {n}] and F of order 2")
        for s in range(G.n):
            coords = _coords_of(s, [n, n])
            table[s, 0] = s
            table[s, 1] = _index_of(A @ np.array(coords, dtype=object), [n, n])
        return table
    raise ValidationError("action.left.kind", f"unsupported kind {kind!r}")


def _right_table(spec: ProblemSpec) -> np.ndarray:
    """The table of s |> x from [action.right]; values index into F."""
    F, G = spec.f_build.group, spec.g_build.group
    sec = spec.right
    kind = sec["kind"]
    table = np.zeros((G.n, F.n), dtype=np.int64)
    if kind == "trivial":
        table[:] = np.arange(F.n)[None, :]
        return table
    if kind == "permutation_table":
        flat = _ints(sec.get("table", ""), "action.right.table")
        if len(flat) != G.n * F.n:
            raise ValidationError("action.right.table",
                                  f"need {G.n * F.n} entries")
        table[:] = np.array(flat, dtype=np.int64).reshape(G.n, F.n)
        if table.min() < 0 or table.max() >= F.n:
            raise ValidationError("action.right.table", "entries outside F")
        return table
    if kind == "matrices_mod":
        moduli = spec.f_build.moduli
        if moduli is None:
            raise ValidationError("action.right.kind",
                                  "matrices_mod needs a coordinate group F")
        k = len(moduli)
        mats = _matrix_keys(sec, G.n, "action.right", k)
        for s in range(G.n):
            mat = mats[s]
            for x in range(F.n):
                coords = _coords_of(x, moduli)
                table[s, x] = _index_of(mat @ np.array(coords, dtype=object),
                                        moduli)
        return table
    raise ValidationError("action.right.kind",
                          f"kind {kind!r} only makes sense in [action.left]")


def build_pair(spec: ProblemSpec) -> MatchedPair:
    """Assemble and axiom-check the matched pair a spec describes."""
    lt = _right_table(spec)  # s |> x, the F-valued table
    rt = _left_table(spec)  # s <| x, the G-valued table
    mp = MatchedPair(spec.f_build.group, spec.g_build.group, lt, rt)
    validate_matched_pair(mp)
    return mp


# ---------------------------------------------------------------------------
# report assembly


def _group_json(grp) -> dict:
    return {"free_rank": int(grp.free_rank),
            "invariant_factors": [int(d) for d in grp.invariant_factors]}


def _group_text(grp) -> str:
    if grp is None:
        return "skipped"
    parts = [str(int(d)) for d in grp.invariant_factors]
    text = "(" + ",".join(parts) + ")"
    if grp.free_rank:
        text = f"Z^{grp.free_rank} x " + text
    return text


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _rep_json(rep) -> dict:
    sigma, tau = rep
    return {"sigma": [[[str(v) for v in row] for row in plane] for plane in sigma],
            "tau": [[[str(v) for v in row] for row in plane] for plane in tau]}


def _resolve_resolution(subject: FiniteGroup, choice: str) -> str:
    if choice != "auto":
        return choice
    return "cyclic-tensor" if (subject.table == subject.table.T).all() else "bar"


def _task_validate(mp, spec, flags):
    certs = {"axioms": "ok", "sigma_order": mp.F.n * mp.G.n,
             "f_order": mp.F.n, "g_order": mp.G.n,
             "semidirect": is_semidirect(mp)}
    return "ok", FpAbGroup.from_factors([]), certs, None


def _task_opext(mp, spec, flags):
    if mp.F.n * mp.G.n > flags["max_sigma"]:
        raise SizeBound(f"|Sigma| = {mp.F.n * mp.G.n} over the direct-route "
                        f"cap {flags['max_sigma']}; raise --max-sigma to proceed")
    route = spec.options.get("route", "kac_total")
    if route not in ROUTE_NAMES:
        raise ValidationError("compute.route", f"unknown route {route!r}")
    res = opext(mp, route=route, reps=flags["reps"],
                resolution=flags["resolution"])
    reps = [_rep_json(r) for r in res.representatives] if flags["reps"] else None
    return "ok", res.group, {"route": route}, reps


def _task_five_term(mp, spec, flags):
    tail = _one_int(spec.options.get("tail_cells", "50000"),
                    "compute.tail_cells")
    rep = five_term(mp, tail_cells=tail)
    certs = {"terms": [_group_text(t) for t in rep.terms],
             "kernel": _group_text(rep.kernel),
             "exactness": _jsonable(rep.certificates)}
    return "ok", rep.group, certs, None


def _task_kac_seq(mp, spec, flags):
    depth = _one_int(spec.options.get("depth", "4"), "compute.depth")
    rep = kac_sequence(mp, depth=depth, max_sigma=flags["max_sigma"])
    certs = {
        "terms": {lab: _group_text(t) for lab, t in zip(rep.labels, rep.terms)},
        "joints": _jsonable(rep.certificates),
    }
    grp = rep.terms[5] if len(rep.terms) > 5 else rep.terms[-1]
    return "ok", grp, certs, None


def _task_cohomology(mp, spec, flags):
    subject = spec.options.get("subject", "G")
    groups = {"F": mp.F, "G": mp.G, "whole": None}
    if subject not in groups:
        raise ValidationError("compute.subject", "must be F, G, or whole")
    subj = mp.sigma() if subject == "whole" else groups[subject]
    degrees = _ints(spec.options.get("degrees", "1 2"), "compute.degrees")
    if not degrees or any(d < 0 for d in degrees):
        raise ValidationError("compute.degrees", "need nonnegative degrees")
    resolution = _resolve_resolution(subj, flags["resolution"])
    values = {}
    grp = FpAbGroup.from_factors([])
    for m in degrees:
        H = group_cohomology(subj, CIRCLE, m, resolution=resolution)
        grp = H.value
        values[f"H^{m}"] = _group_text(grp)
    certs = {"subject": subject, "coefficients": "Q/Z",
             "resolution": resolution, "values": values}
    return "ok", grp, certs, None


def _pick_oracle(mp, spec):
    kind = spec.left.get("kind")
    if kind == "swap":
        return "swap", lambda: swap_opext(spec.g_build.square_of)
    if kind == "matrix_A":
        flat = _ints(spec.left["a"], "action.left.a")
        n = _one_int(spec.left["n"], "action.left.n")
        return ("involution",
                lambda: involution_opext(n, flat[0], flat[1], flat[2]))
    return "odd_abelian", lambda: odd_abelian_opext(mp)


def _task_oracle_compare(mp, spec, flags):
    if mp.F.n * mp.G.n > flags["max_sigma"]:
        raise SizeBound(f"|Sigma| = {mp.F.n * mp.G.n} over the direct-route "
                        f"cap {flags['max_sigma']}; raise --max-sigma to proceed")
    name, closed_form = _pick_oracle(mp, spec)
    oracle_val = closed_form()
    route = spec.options.get("route", "kac_total")
    if route not in ROUTE_NAMES:
        raise ValidationError("compute.route", f"unknown route {route!r}")
    direct = opext(mp, route=route, reps=False,
                   resolution=flags["resolution"]).group
    match = direct == oracle_val
    certs = {"oracle": name, "closed_form": _group_text(oracle_val),
             "direct": _group_text(direct), "route": route,
             "match": bool(match)}
    return ("ok" if match else "mismatch"), direct, certs, None


_RUNNERS = {
    "validate": _task_validate,
    "opext": _task_opext,
    "five-term": _task_five_term,
    "kac-seq": _task_kac_seq,
    "cohomology": _task_cohomology,
    "oracle-compare": _task_oracle_compare,
}


def run(spec: ProblemSpec, tasks, flags) -> dict:
    """Execute tasks against the spec's pair and assemble the report.

    A pair that fails its axioms is a computable *answer* for the validate
    task (status "invalid" with the failing axiom and witness) and an input
    error for everything else.
    """
    try:
        mp = build_pair(spec)
    except AxiomViolation as exc:
        if list(tasks) != ["validate"]:
            raise
        entry = {"name": "validate", "status": "invalid",
                 "group": _group_json(FpAbGroup.from_factors([])),
                 "certificates": {"axiom": exc.axiom,
                                  "witness": [int(v) for v in exc.witness]},
                 "ms": 0}
        return {"tasks": [entry]}
    entries = []
    for task in tasks:
        start = time.perf_counter()
        status, grp, certs, reps = _RUNNERS[task](mp, spec, flags)
        ms = int((time.perf_counter() - start) * 1000) if flags["timings"] else 0
        entry = {"name": task, "status": status, "group": _group_json(grp),
                 "certificates": certs, "ms": ms}
        if reps is not None:
            entry["representatives"] = reps
        entries.append(entry)
    return {"tasks": entries}


def compare(report: dict, golden_path: str):
    """Diff a report against a stored golden file; None means identical."""
    rendered = json.dumps(report, indent=2, sort_keys=True) + "\n"
    with open(golden_path, "r", encoding="utf-8") as fh:
        golden = fh.read()
    if rendered == golden:
        return None
    diff = difflib.unified_diff(golden.splitlines(True),
                                rendered.splitlines(True),
                                fromfile=golden_path, tofile="report")
    return "".join(diff)


# ---------------------------------------------------------------------------
# entry point


def _print_human(report: dict) -> None:
    for entry in report["tasks"]:
        grp = entry["group"]
        text = "(" + ",".join(str(d) for d in grp["invariant_factors"]) + ")"
        if grp["free_rank"]:
            text = f"Z^{grp['free_rank']} x " + text
        print(f"{entry['name']}: {entry['status']}  group = {text}")
        certs = entry["certificates"]
        if entry["name"] == "oracle-compare":
            if certs["match"]:
                print(f"  direct = oracle = {certs['direct']}")
            else:
                print(f"  direct = {certs['direct']}  oracle = "
                      f"{certs['closed_form']}  MISMATCH")
        elif entry["name"] == "five-term":
            print(f"  terms = {' -> '.join(certs['terms'])}")
            print(f"  kernel = {certs['kernel']}")
        elif entry["name"] == "kac-seq":
            for lab, val in certs["terms"].items():
                print(f"  {lab} = {val}")
        elif entry["name"] == "cohomology":
            for lab, val in certs["values"].items():
                print(f"  {lab} = {val}")
        elif entry["name"] == "validate":
            if entry["status"] == "ok":
                print(f"  |Sigma| = {certs['sigma_order']}  semidirect = "
                      f"{str(certs['semidirect']).lower()}")
            else:
                print(f"  axiom {certs['axiom']!r} fails at witness "
                      f"{tuple(certs['witness'])}")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opextkit",
        description="extension groups of matched pairs, exactly")
    sub = parser.add_subparsers(dest="task", required=True)
    for task in TASKS:
        p = sub.add_parser(task)
        p.add_argument("--config", required=True)
        p.add_argument("--json", dest="json_out")
        p.add_argument("--reps", action="store_true")
        p.add_argument("--resolution", default="auto",
                       choices=("bar", "cyclic-tensor", "auto"))
        p.add_argument("--max-sigma", type=int, default=None)
        p.add_argument("--timings", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        spec = parse_config(text)
        if spec.tasks and args.task not in spec.tasks:
            raise ValidationError(
                "compute.tasks",
                f"config lists tasks {spec.tasks} but {args.task!r} was invoked")
        default_cap = (SEQUENCE_SIGMA_CAP if args.task == "kac-seq"
                       else DIRECT_SIGMA_CAP)
        if args.max_sigma is not None:
            cap = args.max_sigma
        elif "max_sigma" in spec.options:
            cap = _one_int(spec.options["max_sigma"], "compute.max_sigma")
        else:
            cap = default_cap
        flags = {"reps": args.reps or spec.options.get("reps", "") == "true",
                 "resolution": args.resolution, "max_sigma": cap,
                 "timings": args.timings}
        report = run(spec, [args.task], flags)
    except AxiomViolation as exc:
        print(f"error: matched-pair axiom {exc.axiom!r} fails at witness "
              f"{tuple(exc.witness)}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError, NotAGroup, NotAbelian,
            NotExactFactorization, NotSemidirect, HypothesisViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeBound as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return 3
    except (AssertionError, LiftFailed, NotCocycle, IncompatiblePair) as exc:
        print(f"internal invariant failure (a bug): {exc!r}", file=sys.stderr)
        return 4
    if args.json_out:
        rendered = json.dumps(report, indent=2, sort_keys=True) + "\n"
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    _print_human(report)
    if any(entry["status"] == "invalid" for entry in report["tasks"]):
        return 2
    if any(entry["status"] == "mismatch" for entry in report["tasks"]):
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
