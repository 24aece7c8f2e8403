"""Command-line driver: load JSON descriptors, run a verification suite, print a JSON report.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

import jsonschema

from .cogroup import (
    check_cogroup_module,
    check_square_group,
    confluence_check,
    evaluate_on_free,
    hall_petrescu_check,
    power_expansion_matches,
    random_word,
    square_group_from_json,
    square_group_to_cogroup_module,
    SQUARE_GROUP_SCHEMA,
)
from .functordata import T2, TensorFunctor, Functor, u_functor
from .qmodule import MODULE_SCHEMA, ModuleError, check_quadratic, module_from_json
from .report import Report, jsonable
from .ringoid import build_ringoid, check_associativity, end_e_matches_lambda_bbar
from .tensor import cross_effect_gamma, decomposition, presentations_agree, qtensor, roundtrip, tensor_functor
from .theory import THEORY_SCHEMA, Theory, reduce_word, theory_from_descriptor
from .ufunctor import lambda_rings, t2_of_U

THREADS_ENV = "QUADFUN_THREADS"


class InputError(Exception):
    """Malformed or schema-violating input; reported with exit code 2."""

    def __init__(self, message: str, source: str = "", field: str = "", line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.source = source
        self.field = field
        self.line = line

    def to_json(self) -> dict:
        out: dict[str, Any] = {"error": self.message}
        if self.source:
            out["source"] = self.source
        if self.field:
            out["field"] = self.field
        if self.line is not None:
            out["line"] = self.line
        return out


# ---------------------------------------------------------------------------
# input handling


def _read(arg: str) -> tuple[str, str]:
    """Inline JSON if the argument looks like JSON, otherwise a file path."""
    text = arg.strip()
    if text.startswith(("{", "[")):
        return arg, "<inline>"
    path = Path(arg)
    try:
        return path.read_text(), str(path)
    except OSError as exc:
        raise InputError(f"cannot read {arg}: {exc.strerror}", str(path)) from None


def _line_of(text: str, path: Sequence[Any]) -> int | None:
    """Line of the deepest object key named in ``path`` (best effort)."""
    for key in reversed(list(path)):
        if isinstance(key, str):
            idx = text.find(json.dumps(key))
            if idx >= 0:
                return text.count("\n", 0, idx) + 1
    return 1 if "\n" not in text.strip() else None


def load_json(arg: str, schema: dict | None = None) -> tuple[Any, str]:
    text, source = _read(arg)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", source, line=exc.lineno) from None
    if schema is not None:
        errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(obj), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            path = "/" + "/".join(str(p) for p in err.absolute_path)
            raise InputError(err.message, source, path, _line_of(text, err.absolute_path))
    return obj, source


def load_theory(arg: str) -> Theory:
    obj, _ = load_json(arg, THEORY_SCHEMA)
    return theory_from_descriptor(obj)


def _require_finite(th: Theory) -> None:
    if not th.enumerable:
        raise InputError(f"theory {th.descriptor()['kind']} has infinite hom-sets; use the squaregroup command")


def load_module(arg: str, theory: Theory | None):
    obj, source = load_json(arg, MODULE_SCHEMA)
    try:
        M = module_from_json(obj)
    except ModuleError as exc:
        raise InputError(str(exc), source) from None
    if theory is not None and M.theory.descriptor() != theory.descriptor():
        raise InputError("module theory differs from --theory", source, "/theory")
    _require_finite(M.theory)
    return M


def threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn: Callable[[Any], Any], items: Sequence[Any]) -> list[Any]:
    """Map preserving input order, on ``QUADFUN_THREADS`` workers."""
    n = threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# commands; each returns (report, data)

Result = tuple[Report, dict]


def cmd_theory_info(th: Theory) -> Result:
    r = Report("theory-info")
    data: dict[str, Any] = {"theory": th.descriptor()}
    if not th.enumerable:
        data["enumerable"] = False
        r.add("theory.loaded", "theory descriptor accepted", True)
        return r, data
    data["hom_counts"] = {f"{n}->{m}": sum(1 for _ in th.homs(n, m)) for n in range(3) for m in range(3)}
    rings = lambda_rings(th)
    for ring in rings:
        data[ring.name] = list(ring.group.invariants)
    t2u, _ = t2_of_U(th, 2)
    data["T2U(E∨E)"] = list(t2u.invariants)
    r.add("rings.sound", "Λ, Λ̄, Λ̄̄, Λ̄⊗Λ̄ and the wreath ring satisfy the ring axioms", True)
    return r, data


def cmd_ringoid_check(th: Theory) -> Result:
    _require_finite(th)
    R = build_ringoid(th)
    assoc = check_associativity(R)
    r = assoc.to_report()
    r.suite = "ringoid-check"
    r.add("end_e=Λ̄̄", "End(e) is Λ̄̄", end_e_matches_lambda_bbar(R))
    data = {
        "theory": th.descriptor(),
        "hom": {f"{a}->{b}": list(R.hom(a, b).invariants) for a in ("e", "ee") for b in ("e", "ee")},
        "instances": sum(assoc.counts.values()),
        "violations": assoc.to_json(),
    }
    return r, data


def cmd_qmod_check(M) -> Result:
    r = check_quadratic(M)
    r.suite = "qmod-check"
    return r, {"module": M.name, "me": list(M.me.invariants), "mee": list(M.mee.invariants)}


def cmd_tensor_eval(M, rank: int) -> Result:
    if not 0 <= rank <= 4:
        raise InputError("--rank must lie in 0..4", field="--rank")
    r = Report("tensor-eval")
    pres = qtensor(M.theory, rank, M)
    r.add("pushout.commutes", "both legs of the pushout agree", pres.commutes())
    r.add("pushout.alternative", "route through the comparison isomorphism agrees", pres.agrees_with_alternative())
    r.add("presentation.generators", "generators-and-relations presentation agrees", presentations_agree(M, rank))
    r.add("decomposition", "X⊗M ≅ M_e^n ⊕ M_ee^C(n,2)", decomposition(M, rank).verify(), rank)
    for a in range(1, 3):
        for b in range(1, 3):
            g = cross_effect_gamma(M, a, b)
            r.add("gamma.iso", "γ is an isomorphism", g.is_iso, {"a": a, "b": b, "witness": g.witness})
    data = {
        "module": M.name,
        "rank": rank,
        "value": list(pres.group.invariants),
        "values": {str(n): list(tensor_functor(M).value(n).invariants) for n in range(rank + 1)},
    }
    return r, data


FUNCTORS: dict[str, Callable[[Theory], Functor]] = {
    "u": lambda th: u_functor(th),
    "u_tensor_u": lambda th: TensorFunctor(u_functor(th), u_functor(th), "U⊗U"),
    "t2u": lambda th: T2(u_functor(th)),
}


def cmd_roundtrip(F: Functor) -> Result:
    rt = roundtrip(F)
    r = rt.to_report()
    return r, {"functor": F.name, "theory": F.theory.descriptor()}


def cmd_squaregroup(S, words: list[tuple[int, ...]], letters: int = 3) -> Result:
    r = check_square_group(S)
    r.suite = "squaregroup"
    if not r.ok:
        return r, {"square_group": S.name}
    C = square_group_to_cogroup_module(S)
    r.extend(check_cogroup_module(C))
    for n in range(-5, 6):
        r.add("expansion.power", "xⁿ⊗a = na + C(n,2)PH(a)", power_expansion_matches(S, n), n)
    for n in range(6):
        r.add("hall_petrescu", "h([n]) ≡ C(n,2)[i₂,i₁]", hall_petrescu_check(n, [S]), n)

    def confluent(w: tuple[int, ...]) -> bool:
        return confluence_check(S, [w], letters)[1] is None

    for w, ok in zip(words, ordered_map(confluent, words)):
        r.add("expansion.confluence", "left, right and split expansions agree", ok, w)
    ev = evaluate_on_free(S, letters)
    data = {
        "square_group": S.name,
        "delta": [jsonable(v) for v in S.delta.images],
        "evaluations": [{"word": list(w), "images": [jsonable(ev.expand(w, {k: 1})) for k in range(S.me.num_gens)]} for w in words],
    }
    return r, data


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadfun", description="Verify quadratic functors and quadratic modules.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("theory-info", parents=[common], help="hom counts and the rings Λ, Λ̄, Λ̄̄")
    s.add_argument("--theory", required=True, help="theory descriptor: JSON file or inline JSON")

    s = sub.add_parser("ringoid-check", parents=[common], help="build the ringoid and check its laws")
    s.add_argument("--theory", required=True)

    s = sub.add_parser("qmod-check", parents=[common], help="check the quadratic-module axioms")
    s.add_argument("--theory")
    s.add_argument("--module", required=True)

    s = sub.add_parser("tensor-eval", parents=[common], help="evaluate the quadratic tensor product")
    s.add_argument("--theory")
    s.add_argument("--module", required=True)
    s.add_argument("--rank", type=int, default=2)

    s = sub.add_parser("roundtrip", parents=[common], help="unit, counit and triangle identities")
    s.add_argument("--theory")
    s.add_argument("--suite", default="u_tensor_u", help=f"functor name ({', '.join(FUNCTORS)})")
    s.add_argument("--module", help="use the functor -⊗M of this module instead of --suite")

    s = sub.add_parser("squaregroup", parents=[common], help="square-group axioms, evaluation and confluence")
    s.add_argument("--module", required=True, help="square-group descriptor")
    s.add_argument("--words", help="JSON list of words (lists of nonzero letters)")
    s.add_argument("--samples", type=int, default=200, help="random words when --words is absent")
    s.add_argument("--seed", type=int, default=0)
    return p


def _dispatch(args: argparse.Namespace) -> Result:
    theory = load_theory(args.theory) if getattr(args, "theory", None) else None
    if args.command == "theory-info":
        return cmd_theory_info(theory)
    if args.command == "ringoid-check":
        return cmd_ringoid_check(theory)
    if args.command == "qmod-check":
        return cmd_qmod_check(load_module(args.module, theory))
    if args.command == "tensor-eval":
        return cmd_tensor_eval(load_module(args.module, theory), args.rank)
    if args.command == "roundtrip":
        if args.module:
            M = load_module(args.module, theory)
            return cmd_roundtrip(tensor_functor(M))
        if theory is None:
            raise InputError("roundtrip needs --theory or --module", field="--theory")
        _require_finite(theory)
        if args.suite not in FUNCTORS:
            raise InputError(f"unknown functor {args.suite!r}", field="--suite")
        return cmd_roundtrip(FUNCTORS[args.suite](theory))
    if args.command == "squaregroup":
        obj, source = load_json(args.module, SQUARE_GROUP_SCHEMA)
        try:
            S = square_group_from_json(obj)
        except ValueError as exc:
            raise InputError(str(exc), source) from None
        if args.words:
            raw, _ = load_json(args.words, {"type": "array", "items": SQUARE_GROUP_SCHEMA["properties"]["words"]["items"]})
            words = [tuple(w) for w in raw]
        elif "words" in obj:
            words = [tuple(w) for w in obj["words"]]
        else:
            rng = random.Random(args.seed)
            words = [random_word(rng, 3, 6) for _ in range(args.samples)]
        letters = max([3] + [abs(x) for w in words for x in w])
        for w in words:
            if reduce_word(w) != w:
                raise InputError(f"word {list(w)} is not freely reduced", field="--words")
        return cmd_squaregroup(S, words, letters)
    raise InputError(f"unknown command {args.command}")  # pragma: no cover


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, data = _dispatch(args)
    except InputError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True, ensure_ascii=False) + "\n")
        return 2
    payload = report.to_json(time.perf_counter() - start if args.timing else None)
    payload["data"] = jsonable(data)
    _emit(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False), args.out)
    return 0 if report.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
