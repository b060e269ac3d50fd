"""Command-line front end: ``biaskit <command> ...``.

Structures are named built-ins (Z2, Z3, Z4, S3, triv, I1..I4) or JSON files.
Exit codes: 0 success, 1 negative verdict under --strict, 2 bad input,
3 resource cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from . import caps
from .bias import FiniteBias, bias_from_json, boolean_closure, congruence_lattice, identity_counterexample
from .errors import InconclusiveError, ResourceCapError, ValidationError
from .freebias import decide_equal, falsify
from .groups import FiniteGroup, cyclic_group, group_from_json, symmetric_group, trivial_group
from .semigroup import symmetric_inverse_monoid
from .terms import parse
from .typestructure import decompose, index_consistency, type_monoid
from .variety import (VarietySpec, check_radical_chain, matrix_bias_embeds, radical,
                      units_of_matrix_bias)

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

_GROUPS = {"triv": trivial_group, "Z2": lambda: cyclic_group(2), "Z3": lambda: cyclic_group(3),
           "Z4": lambda: cyclic_group(4), "S3": lambda: symmetric_group(3)}


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_group(ref: str) -> FiniteGroup:
    if ref in _GROUPS:
        return _GROUPS[ref]()
    return group_from_json(_read_json(ref))


def load_bias(ref: str) -> FiniteBias:
    if len(ref) == 2 and ref[0] == "I" and ref[1] in "1234":
        return boolean_closure(symmetric_inverse_monoid(int(ref[1]))[0])
    return bias_from_json(_read_json(ref))


def _group_ref(data) -> FiniteGroup:
    return load_group(data) if isinstance(data, str) else group_from_json(data)


def load_variety(path: str) -> VarietySpec:
    data = _read_json(path)
    if "generators" not in data:
        raise ValidationError("variety JSON needs 'generators'")
    return VarietySpec.from_json(data, builtin=_group_ref)


# ---------------------------------------------------------------- commands
# each returns (report, verdict); verdict is None for non-decision commands

def cmd_decide(a):
    alphabet = [s for s in a.alphabet.split(",") if s] if a.alphabet else None
    t1, t2 = parse(a.t1, alphabet), parse(a.t2, alphabet)
    eq = decide_equal(t1, t2, alphabet)
    return {"equal": eq}, eq


def cmd_falsify(a):
    sep = falsify(a.t1, a.t2, a.max_n, cap=a.cap_search or caps.IDENTITY_EVALUATIONS)
    return {"separated": sep is not None, "separator": sep.to_json() if sep else None}, sep is None


def cmd_check_identity(a):
    S = load_bias(a.bias)
    w = identity_counterexample(S, a.t1, a.t2, a.cap_search or caps.IDENTITY_EVALUATIONS)
    ce = None if w is None else {k: S.names[v] for k, v in sorted(w.items())}
    return {"holds": w is None, "counterexample": ce}, w is None


def cmd_decompose(a):
    return decompose(load_bias(a.bias)).to_json(), None


def cmd_typemonoid(a):
    S = load_bias(a.bias)
    tm = type_monoid(S)
    return {"k": tm.k, "unit": list(tm.unit),
            "types": {S.names[e]: list(v) for e, v in sorted(tm.typ.items())}}, None


def cmd_index(a):
    rep = index_consistency(load_bias(a.bias))
    if not rep.consistent:
        raise AssertionError(f"index mismatch: elements {rep.bias_index}, types {rep.monoid_index}")
    return {"index": rep.bias_index}, None


def cmd_congruences(a):
    S = load_bias(a.bias)
    lat = congruence_lattice(S, a.cap_elements or caps.CONGRUENCE_ELEMENTS)
    return {"count": len(lat), "congruences": [c.to_json() for c in lat]}, None


def cmd_units(a):
    U = units_of_matrix_bias(a.n, load_group(a.group), a.cap_elements or caps.WREATH_ORDER)
    return {"order": U.group.order, "wreath_order": U.wreath.order, "iso_checked": True}, None


def cmd_embeds(a):
    v = matrix_bias_embeds(a.m, load_group(a.g), a.n, load_group(a.h),
                           a.cap_elements or caps.WREATH_ORDER)
    return v.to_json(), v.embeds


def cmd_radical(a):
    rad = radical(a.n, load_variety(a.variety), a.cap_elements or caps.WREATH_ORDER)
    return {"n": a.n, "empty": rad is None, "generators": [G.to_json() for G in rad or []]}, None


def cmd_check_chain(a):
    rep = check_radical_chain(load_variety(a.variety), a.cap_elements or caps.WREATH_ORDER)
    if rep.inconclusive and not rep.failed:
        raise InconclusiveError("radical chain", a.cap_elements or caps.WREATH_ORDER)
    return rep.to_json(), rep.passed


def cmd_symmetric(a):
    S, _ = symmetric_inverse_monoid(a.n)
    return S.to_json(), None


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--strict", action="store_true", help="exit 1 on a negative verdict")
    common.add_argument("--cap-elements", type=int, default=None,
                        help="size cap for congruence enumeration and wreath products")
    common.add_argument("--cap-search", type=int, default=None,
                        help="cap on assignments evaluated by identity checks and the falsifier")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; all commands run on one thread")

    p = argparse.ArgumentParser(prog="biaskit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("decide", cmd_decide, "word problem for free biases")
    sp.add_argument("t1")
    sp.add_argument("t2")
    sp.add_argument("--alphabet", default=None, help="comma-separated variable names")
    sp = add("falsify", cmd_falsify, "search I_N for an assignment separating two terms")
    sp.add_argument("t1")
    sp.add_argument("t2")
    sp.add_argument("--max-n", type=int, default=caps.FALSIFY_N)
    sp = add("check-identity", cmd_check_identity, "does a finite bias satisfy t1 = t2")
    sp.add_argument("bias")
    sp.add_argument("t1")
    sp.add_argument("t2")
    for name, fn, h in (("decompose", cmd_decompose, "split into matrix biases over groups"),
                        ("typemonoid", cmd_typemonoid, "type vectors of idempotents"),
                        ("index", cmd_index, "index of a finite bias"),
                        ("congruences", cmd_congruences, "all bias congruences")):
        add(name, fn, h).add_argument("bias")
    sp = add("units", cmd_units, "unit group of M_n(G^0)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--group", required=True)
    sp = add("embeds", cmd_embeds, "does M_m(G^0) embed in M_n(H^0)")
    for flag in ("--m", "--n"):
        sp.add_argument(flag, type=int, required=True)
    for flag in ("--g", "--h"):
        sp.add_argument(flag, required=True)
    sp = add("radical", cmd_radical, "generators of Rad_n of a variety")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--variety", required=True)
    sp = add("check-chain", cmd_check_chain, "check the radical chain of a variety")
    sp.add_argument("--variety", required=True)
    sp = add("symmetric", cmd_symmetric, "emit the symmetric inverse monoid I_n as JSON")
    sp.add_argument("--n", type=int, required=True)
    return p


def _emit(obj, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
        return
    for k in sorted(obj):
        v = obj[k]
        print(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")


def _fail(fmt: str, code: int, kind: str, exc: Exception) -> int:
    err = {"type": kind, "message": str(exc)}
    if isinstance(exc, ResourceCapError):
        err.update(cap=exc.cap, limit=exc.limit, needed=exc.needed)
    if fmt == "json":
        print(json.dumps({"error": err}, sort_keys=True))
    print(f"error: {exc}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, verdict = args.func(args)
    except ResourceCapError as exc:
        kind = "inconclusive" if isinstance(exc, InconclusiveError) else "resource_cap"
        return _fail(args.format, EXIT_CAP, kind, exc)
    except ValidationError as exc:
        return _fail(args.format, EXIT_INPUT, "input", exc)
    _emit(report, args.format)
    return EXIT_FALSE if args.strict and verdict is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
