"""Command line front end.

Exit status: 0 when the property holds or the artifact was produced, 1 when
the property is refuted (the counterexample goes to a file), 2 on parse
errors, missing files or an exhausted deadline.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from ._util import DeadlineExceeded
from .io import ParseError, RunManifest, dumps, parse, sha256_bytes, write_atomic

HOLDS, REFUTED, FAILED = 0, 1, 2


class Refuted(Exception):
    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


def _seq(ref, manifest):
    from . import sequences, transduce
    builtins = {
        "split-permutation": sequences.split_permutation_regular,
        "split-permutation-periodic": sequences.split_permutation_periodic,
        "backward-free": transduce.backward_free_sequence,
    }
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in builtins:
            raise ParseError(ref, f"unknown builtin sequence; known: {', '.join(builtins)}")
        return builtins[name]()
    return parse(ref, "seq", manifest)


def _interp(ref, manifest):
    from .interp import builtin
    if ref.startswith("builtin:"):
        try:
            return builtin(ref.split(":", 1)[1])
        except KeyError as exc:
            raise ParseError(ref, str(exc)) from None
    return parse(ref, "interp", manifest)


def _regular(s, what):
    from .sequences import RegularSequence
    if not isinstance(s, RegularSequence):
        raise ParseError(what, "a regular sequence is required here")
    return s


def _tree_split(args, manifest):
    t = parse(args.tree, "tree", manifest)
    s = parse(args.split, "split", manifest) if getattr(args, "split", None) else None
    return t, s


def _bough(args, t, s):
    from .bough import Bough, enumerate_boughs
    if args.backbone:
        return Bough(t, s, tuple(int(x) for x in args.backbone.split(",")), args.level)
    found = enumerate_boughs(t, s, args.level)
    if not found:
        raise Refuted(f"no bough of level {args.level}", {"level": args.level})
    return found[0]


# subcommand bodies: each returns the data to write, or raises Refuted

def cmd_monoid_check(args, man):
    from .monoid import idempotents
    try:
        m = parse(args.file, "monoid", man)
    except ParseError as exc:
        if exc.detail.startswith("invalid monoid"):
            raise Refuted(exc.detail, {"file": args.file, "reason": exc.detail}) from None
        raise
    return {"size": m.size, "identity": m.identity, "idempotents": idempotents(m)}


def cmd_tree_show(args, man):
    t = parse(args.tree, "tree", man)
    print(t.show())
    return t.to_json()


def cmd_interp_run(args, man):
    from .interp import interpret, interpret_marked
    i = _interp(args.interp, man)
    if args.marked:
        return interpret_marked(i, parse(args.tree, "marked", man)).to_json()
    return interpret(i, parse(args.tree, "tree", man)).to_json()


def cmd_split_build(args, man):
    from .split import construct_split
    t = parse(args.tree, "tree", man)
    return construct_split(t, args.budget, args.deadline).to_json()


def cmd_split_check(args, man):
    from .split import validate_ramseyan
    t, s = _tree_split(args, man)
    v = validate_ramseyan(t, s)
    if not v:
        raise Refuted(v.reason, {"reason": v.reason, "witness": v.witness})
    return {"ramseyan": True}


def cmd_split_query(args, man):
    from .split import certify, fast_tlbl
    t, s = _tree_split(args, man)
    s = certify(t, s)
    fast = fast_tlbl(t, s, args.x, args.y)
    plain = t.tlbl(args.x, args.y)
    if fast != plain:
        raise Refuted("fast product disagrees", {"x": args.x, "y": args.y, "fast": fast,
                                                 "plain": plain})
    return {"x": args.x, "y": args.y, "product": fast, "name": t.monoid.name(fast)}


def _load_map(path, man):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(path, f"cannot read file ({exc.strerror})") from None
    man.inputs[str(path)] = sha256_bytes(raw)
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError:
        raise ParseError(path, "not UTF-8") from None
    except json.JSONDecodeError as exc:
        raise ParseError(path, f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    raw = data.get("map", data) if isinstance(data, dict) else None
    if not isinstance(raw, dict):
        raise ParseError(path, "expected an object mapping node ids")
    return {int(k): int(v) for k, v in raw.items()}


def cmd_gap_check(args, man):
    from .gap import check_marked_gap
    m1, m2 = parse(args.t1, "marked", man), parse(args.t2, "marked", man)
    h = _load_map(args.map, man)
    v = check_marked_gap(m1, m2, h)
    if not v:
        raise Refuted(v.reason, {"reason": v.reason, "witness": repr(v.witness), "map": h})
    return {"gap_embedding": True, "map": h}


def cmd_gap_search(args, man):
    from .gap import search_marked_gap
    m1, m2 = parse(args.t1, "marked", man), parse(args.t2, "marked", man)
    w = search_marked_gap(m1, m2, args.deadline)
    if w is None:
        raise Refuted("no marked gap-embedding exists", {"t1": args.t1, "t2": args.t2})
    return {"map": {str(k): v for k, v in sorted(w.map.items())}}


def cmd_gap_encode(args, man):
    from .gap import encode_dershowitz
    e = encode_dershowitz(parse(args.tree, "marked", man), args.L)
    out = e.tree.to_json()
    out.update({"height": e.split.height, "split": list(e.split.value),
                "labels": [list(lab) for lab in e.labels]})
    # a tree file already uses "labels" for the edge label kind
    out["node_labels"] = out.pop("labels")
    out["labels"] = "element"
    return out


def cmd_bough_list(args, man):
    from .bough import all_boughs, enumerate_boughs
    t, s = _tree_split(args, man)
    bs = enumerate_boughs(t, s, args.level) if args.level else all_boughs(t, s)
    return {"boughs": [dict(b.to_json(), dimension=b.dimension) for b in bs]}


def cmd_bough_decompose(args, man):
    from .bough import decompose, substitute
    t, s = _tree_split(args, man)
    b = _bough(args, t, s)
    ctx, standalone, blocks = decompose(t, s, b)
    t2, s2 = substitute(ctx, standalone)
    if t2 != t or s2.value != s.value:
        raise Refuted("substituting the bough back does not give the tree", b.to_json())
    return {"bough": b.to_json(), "blocks": [list(bl) for bl in blocks],
            "standalone": {"tree": standalone.tree.to_json(),
                           "split": standalone.split.to_json(),
                           "backbone": list(standalone.backbone)},
            "context": {"root": ctx.t_root.to_json(), "hole": ctx.hole,
                        "left": ctx.t_left.to_json(), "right": ctx.t_right.to_json()}}


def cmd_bough_perfect(args, man):
    from .bough import decompose, is_perfect_bough
    i = _interp(args.interp, man)
    t, s = _tree_split(args, man)
    b = _bough(args, t, s)
    ctx, standalone, _ = decompose(t, s, b)
    cert = is_perfect_bough(i, ctx, standalone, args.deadline)
    if cert is None:
        raise Refuted("bough is not perfect", b.to_json())
    return {"bough": b.to_json(),
            "sides": {str(k): v for k, v in sorted(cert.sides.items())},
            "leaf_map": {str(k): v for k, v in sorted(cert.leaf_map.items())}}


def cmd_seq_expand(args, man):
    from .sequences import expand, with_endpoints
    e = expand(_seq(args.seq, man), args.r)
    g = with_endpoints(e) if args.endpoints else e.graph
    return dict(g.to_json(), copy=list(e.copy), base=list(e.base))


def cmd_seq_certify(args, man):
    from .sequences import certify_antichain
    ok, pair = certify_antichain(_seq(args.seq, man), range(args.rmin, args.rmax + 1),
                                 args.deadline)
    if not ok:
        raise Refuted(f"member {pair[0]} embeds into member {pair[1]}",
                      {"small": pair[0], "big": pair[1]})
    return {"antichain": True, "r": [args.rmin, args.rmax]}


def cmd_transduce_arrows(args, man):
    from .transduce import phi_arrow
    return phi_arrow(_regular(_seq(args.seq, man), args.seq), args.r).to_json()


def cmd_transduce_claims(args, man):
    from .transduce import check_arrow_claims, phi_arrow
    s = _regular(_seq(args.seq, man), args.seq)
    report = {}
    for r in range(1, args.rmax + 1):
        for key, v in check_arrow_claims(phi_arrow(s, r)).items():
            if not v and key not in report:
                report[key] = {"r": r, "reason": v.reason, "witness": v.witness}
    keys = ("forward", "backward", "backward-equal", "backward-far")
    out = {k: k not in report for k in keys}
    if any(k in report for k in ("forward", "backward")):
        raise Refuted("arc claims fail", dict(out, failures=report))
    out["failures"] = report
    return out


def cmd_transduce_path(args, man):
    from .transduce import PathAssertionError, transduce_pipeline
    s = _regular(_seq(args.seq, man), args.seq)
    try:
        st = transduce_pipeline(s, args.target, args.deadline)
    except PathAssertionError as exc:
        raise Refuted(str(exc), exc.state.to_json()) from None
    return st.to_json()


def cmd_corpus_gen(args, man):
    from . import corpus
    rng = random.Random(args.seed)
    out = Path(args.out) / "corpus"
    names = []
    for n in range(args.count):
        if args.kind == "monoid":
            obj = corpus.random_monoid(rng)
        elif args.kind == "tree":
            obj = corpus.random_tree(rng, corpus.random_monoid(rng), 2 * rng.randint(0, args.size // 2) + 1)
        elif args.kind == "marked":
            obj = corpus.random_marked(rng, corpus.random_monoid(rng), 2 * rng.randint(0, args.size // 2) + 1)
        else:
            obj = corpus.random_regular_sequence(rng, max(1, args.size))
        path = out / f"{args.kind}_{n:04d}.json"
        man.write(path, obj)
        names.append(str(path))
    return {"kind": args.kind, "count": args.count, "files": names}


COMMANDS = {
    ("monoid", "check"): cmd_monoid_check,
    ("tree", "show"): cmd_tree_show,
    ("interp", "run"): cmd_interp_run,
    ("split", "build"): cmd_split_build,
    ("split", "check"): cmd_split_check,
    ("split", "query"): cmd_split_query,
    ("gap", "check"): cmd_gap_check,
    ("gap", "search"): cmd_gap_search,
    ("gap", "encode"): cmd_gap_encode,
    ("bough", "list"): cmd_bough_list,
    ("bough", "decompose"): cmd_bough_decompose,
    ("bough", "perfect"): cmd_bough_perfect,
    ("seq", "expand"): cmd_seq_expand,
    ("seq", "certify"): cmd_seq_certify,
    ("transduce", "arrows"): cmd_transduce_arrows,
    ("transduce", "claims"): cmd_transduce_claims,
    ("transduce", "path"): cmd_transduce_path,
    ("corpus", "gen"): cmd_corpus_gen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--deadline", type=float, default=None, help="seconds")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".", help="directory for artifacts and the manifest")
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("-o", "--output", default=None, help="result file (default: <out>/<group>_<cmd>.json)")

    p = argparse.ArgumentParser(prog="wqotrees", parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group, name):
        g = sub.groups.get(group)
        if g is None:
            g = groups.add_parser(group).add_subparsers(dest="cmd", required=True)
            sub.groups[group] = g
        return g.add_parser(name, parents=[common])
    sub.groups = {}

    sub("monoid", "check").add_argument("file")
    sub("tree", "show").add_argument("tree")
    q = sub("interp", "run")
    q.add_argument("--interp", required=True, help="file or builtin:<name>")
    q.add_argument("--tree", required=True)
    q.add_argument("--marked", action="store_true", help="tree file is a marked tree")
    q = sub("split", "build")
    q.add_argument("--tree", required=True)
    q.add_argument("--budget", type=int, default=None)
    for name in ("check", "query"):
        q = sub("split", name)
        q.add_argument("--tree", required=True)
        q.add_argument("--split", required=True)
        if name == "query":
            q.add_argument("--x", type=int, required=True)
            q.add_argument("--y", type=int, required=True)
    q = sub("gap", "check")
    q.add_argument("--t1", required=True)
    q.add_argument("--t2", required=True)
    q.add_argument("--map", required=True)
    q = sub("gap", "search")
    q.add_argument("--t1", required=True)
    q.add_argument("--t2", required=True)
    q = sub("gap", "encode")
    q.add_argument("--tree", required=True)
    q.add_argument("--L", type=int, required=True)
    for name in ("list", "decompose", "perfect"):
        q = sub("bough", name)
        q.add_argument("--tree", required=True)
        q.add_argument("--split", required=True)
        q.add_argument("--level", type=int, default=None if name == "list" else 1)
        if name != "list":
            q.add_argument("--backbone", default=None, help="comma separated node ids")
        if name == "perfect":
            q.add_argument("--interp", required=True)
    q = sub("seq", "expand")
    q.add_argument("--seq", required=True, help="file or builtin:<name>")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--endpoints", action="store_true")
    q = sub("seq", "certify")
    q.add_argument("--seq", required=True)
    q.add_argument("--rmin", type=int, default=1)
    q.add_argument("--rmax", type=int, default=6)
    q = sub("transduce", "arrows")
    q.add_argument("--seq", required=True)
    q.add_argument("--r", type=int, default=3)
    q = sub("transduce", "claims")
    q.add_argument("--seq", required=True)
    q.add_argument("--rmax", type=int, default=6)
    q = sub("transduce", "path")
    q.add_argument("--seq", required=True)
    q.add_argument("--target", type=int, required=True)
    q = sub("corpus", "gen")
    q.add_argument("--kind", choices=["monoid", "tree", "marked", "seq"], required=True)
    q.add_argument("--count", type=int, default=10)
    q.add_argument("--size", type=int, default=15)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    man = RunManifest(argv, seed=args.seed)
    out = Path(args.out)
    result = out / f"{args.group}_{args.cmd}.json" if args.output is None else Path(args.output)
    fn = COMMANDS[(args.group, args.cmd)]
    try:
        data = fn(args, man)
        man.write(result, data)
        man.finish("holds", HOLDS)
    except Refuted as exc:
        cex = out / "counterexample.json"
        man.write(cex, {"command": f"{args.group} {args.cmd}", "reason": str(exc),
                        "witness": exc.witness})
        print(f"refuted: {exc} (see {cex})", file=sys.stderr)
        man.finish("refuted", REFUTED)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        man.finish(f"parse error: {exc}", FAILED)
    except DeadlineExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        man.finish("deadline exceeded", FAILED)
    except ValueError as exc:
        # invariant errors raised while building objects from valid files
        print(f"error: {exc}", file=sys.stderr)
        man.finish(f"invalid input: {exc}", FAILED)
    try:
        write_atomic(out / "manifest.json", dumps(man.to_json()))
    except OSError as exc:
        print(f"error: cannot write manifest ({exc})", file=sys.stderr)
    return man.exit_code
