"""Command-line interface.

Indices on the command line and in JSON documents are 1-based.  Elements are
written in the coordinates of the root seed (see ``expr``).
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from pathlib import Path
from typing import Sequence

from .demo import format_table, run_a2_checks
from .graph import MODES, explore, export_dot, graph_document, theta_subset
from .membership import (
    NotMember,
    center_test,
    convert_path,
    member_central_subalgebra,
    member_intersection,
)
from .monoid import MonoidSpec, ch_degree_monomial, classify, parse_inequality
from .seed import Seed, a2_seed, make_seed, mutate_word
from .trace_ch import TraceKind, matrix_crosscheck, trace, verify_cayley_hamilton
from .expr import parse_element


class UsageError(Exception):
    pass


def seed_document(s: Seed) -> dict:
    return {
        "ell": s.ell,
        "n": s.n,
        "ex": [i + 1 for i in s.ex],
        "inv": sorted(i + 1 for i in s.idx.inv),
        "btilde": [list(r) for r in s.btilde],
        "lambda": s.lam.signed(),
        "d": list(s.dvals),
    }


def load_seed(doc: dict, ell: int | None = None) -> Seed:
    """Root seed from a JSON document {ell, n, ex, inv, btilde, lambda, d}."""
    missing = [k for k in ("btilde", "lambda") if k not in doc]
    if missing:
        raise UsageError(f"seed document lacks {', '.join(missing)}")
    doc_ell = doc.get("ell")
    if ell is not None and doc_ell is not None and ell != doc_ell:
        raise UsageError(f"--ell {ell} conflicts with ell {doc_ell} in the seed file")
    ell = ell if ell is not None else doc_ell
    if ell is None:
        raise UsageError("ell is not given")
    lam = doc["lambda"]
    n = doc.get("n", len(lam))
    if len(lam) != n:
        raise UsageError("lambda size does not match n")
    m = len(doc["btilde"][0]) if doc["btilde"] else 0
    ex = [i - 1 for i in doc.get("ex", range(1, m + 1))]
    inv = [i - 1 for i in doc.get("inv", [])]
    d = doc.get("d", [1] * m)
    return make_seed(doc["btilde"], lam, d, ell, ex, inv)


def _parse_word(text: str | None) -> list[int]:
    if not text or text.strip() in ("", "root", "-"):
        return []
    try:
        return [int(t) - 1 for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed word {text!r}") from exc


def _parse_vectors(text: str) -> list[tuple[int, ...]]:
    try:
        return [tuple(int(x) for x in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed vector list {text!r}") from exc


def _root(args) -> Seed:
    if args.seed_file:
        path = Path(args.seed_file)
        if not path.exists():
            raise UsageError(f"seed file {path} does not exist")
        return load_seed(json.loads(path.read_text()), args.ell)
    return a2_seed(args.ell if args.ell is not None else 3)


def _element(args, root: Seed):
    if not args.element:
        raise UsageError("--element is required")
    return parse_element(args.element, root.lam)


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_mutate(args) -> int:
    root = _root(args)
    s = mutate_word(root, _parse_word(args.word), check=True)
    doc = seed_document(s)
    doc.update(path=[k + 1 for k in s.path], frame=[str(x) for x in s.frame])
    _emit(args, doc)
    return 0


def cmd_graph(args) -> int:
    root = _root(args)
    g = explore(root, args.bound, args.mode)
    _emit(args, export_dot(g) if args.format == "dot" else graph_document(g))
    return 0


def _theta(args, root: Seed):
    g = explore(root, args.bound, "labelled" if args.mode == "labelled" else "unlabelled")
    if args.theta in (None, "all"):
        ids, connected = list(range(len(g.vertices))), True
        if g.truncated:
            raise UsageError("exchange graph exceeds --bound; give --theta explicitly")
    else:
        ids, connected = theta_subset(g, [_parse_word(w) for w in args.theta.split(";")])
    return [g.vertices[i] for i in ids], connected


def cmd_member(args) -> int:
    root = _root(args)
    u = _element(args, root)
    theta, connected = _theta(args, root)
    rep = member_intersection(root, u, theta)
    out = {"element": str(u), "theta_connected": connected, "member": rep.member, "seeds": rep.per_seed}
    if rep.member:
        out["coordinates"] = {",".join(str(k + 1) for k in p) or "root": str(c.element) for p, c in rep.coordinates.items()}
        out["central_subalgebra"] = member_central_subalgebra(root, u, theta)
        out["center"] = center_test(root, u, theta)
    _emit(args, out)
    return 0


def cmd_trace(args) -> int:
    root = _root(args)
    u = _element(args, root)
    c = convert_path(root, u, _parse_word(args.word))
    t = trace(c.element, args.kind)
    _emit(args, {"seed_path": [k + 1 for k in c.seed.path], "coordinates": str(c.element), "kind": args.kind, "trace": str(t)})
    return 0


def cmd_ch_check(args) -> int:
    root = _root(args)
    u = _element(args, root)
    c = convert_path(root, u, _parse_word(args.word))
    rep = verify_cayley_hamilton(c.element, args.kind, args.degree)
    out = rep.to_dict()
    out["seed_path"] = [k + 1 for k in c.seed.path]
    ok = rep.is_zero
    if args.matrix_check:
        mc = matrix_crosscheck(c.element)
        out["matrix_check"] = mc
        ok = ok and mc
    _emit(args, out)
    return 0 if ok else 1


def cmd_classify_monoid(args) -> int:
    if bool(args.gens) == bool(args.ineq):
        raise UsageError("give exactly one of --gens or --ineq")
    if args.gens:
        m = MonoidSpec.from_generators(_parse_vectors(args.gens))
    else:
        n = args.rank or max(int(t) for text in args.ineq for t in re.findall(r"x(\d+)", text))
        m = MonoidSpec(n, halfspaces=tuple(parse_inequality(t, n) for t in args.ineq))
    out = classify(m).to_dict()
    if args.gens and args.ell is not None and m.n == 2:
        out["ch_degree_a2_lambda"] = ch_degree_monomial(m, a2_seed(args.ell).lam)
    _emit(args, out)
    return 0


def cmd_a2_demo(args) -> int:
    ell = args.ell if args.ell is not None else 3
    checks = run_a2_checks(ell)
    _emit(args, format_table(ell, checks))
    return 0 if all(c.passed is not False for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcluster", description="Exact computations with root-of-unity quantum cluster algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, element=False):
        sp.add_argument("--ell", type=int, help="order of the root of unity z (default 3)")
        sp.add_argument("--seed-file", help="JSON seed document (default: the A2 seed)")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--rng-seed", type=int, default=0)
        if element:
            sp.add_argument("--element", help="element in root coordinates, e.g. 'x1^-1 + z*x1^-1*x2'")

    sp = sub.add_parser("mutate", help="apply a mutation word and print the seed")
    common(sp)
    sp.add_argument("--word", default="", help="comma separated indices, e.g. 1,2,1")
    sp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("graph", help="explore the exchange graph")
    common(sp)
    sp.add_argument("--mode", choices=MODES, default="unlabelled")
    sp.add_argument("--bound", type=int, default=10000)
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.set_defaults(func=cmd_graph)

    kinds = [k.value for k in TraceKind]
    sp = sub.add_parser("trace", help="trace of an element at a seed")
    common(sp, element=True)
    sp.add_argument("--word", default="", help="seed reached from the root by this word")
    sp.add_argument("--kind", choices=kinds, default="reduced")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("ch-check", help="verify the Cayley-Hamilton identity")
    common(sp, element=True)
    sp.add_argument("--word", default="")
    sp.add_argument("--kind", choices=kinds, default="reduced")
    sp.add_argument("--degree", type=int, help="default: ell^N (regular), d (reduced), d^2 (standard)")
    sp.add_argument("--matrix-check", action="store_true", help="also compare with the matrix characteristic polynomial (rank 2, odd ell)")
    sp.set_defaults(func=cmd_ch_check)

    sp = sub.add_parser("member", help="membership in the intersection over a set of seeds")
    common(sp, element=True)
    sp.add_argument("--theta", help="'all' or words separated by ';' (use 'root' for the empty word)")
    sp.add_argument("--mode", choices=MODES, default="unlabelled")
    sp.add_argument("--bound", type=int, default=10000)
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("classify-monoid", help="maximal-order test for a monomial subalgebra")
    sp.add_argument("--gens", help="generators, e.g. '1,0;0,1'")
    sp.add_argument("--ineq", action="append", help="halfspace such as 'x1>=0' or 'x1+x2>0' (repeatable)")
    sp.add_argument("--rank", type=int, help="ambient rank for --ineq (default: largest variable index)")
    sp.add_argument("--ell", type=int, help="also report the CH degree for the A2 bicharacter at this ell")
    sp.add_argument("--out")
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.set_defaults(func=cmd_classify_monoid)

    sp = sub.add_parser("a2-demo", help="run the A2 verification suite")
    sp.add_argument("--ell", type=int, default=3)
    sp.add_argument("--out")
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.set_defaults(func=cmd_a2_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.rng_seed)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, NotMember, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NotMember):
            err["certificate"] = exc.certificate()
        print(json.dumps(err), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
