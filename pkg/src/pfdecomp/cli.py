"""Command line entry point.

Exit codes: 0 success (decomposition / verified / orientation found),
1 verification failed, 2 bad input or schema mismatch, 3 density
certificate emitted, 4 iteration cap hit, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .decomposer import Decomposer, InternalInconsistency, IterationCapExceeded, PotentialError
from .density import mad_exact
from .formats import (
    ParseError,
    SchemaError,
    document_result,
    dumps_document,
    format_edge_list,
    frac_str,
    parse_edge_list,
    result_document,
    to_dot,
)
from .gen import gen_above_threshold, gen_below_threshold, gen_pseudoforest_union
from .orient import hakimi_orient
from .results import DensityCertificate, Decomposition, Params
from .verify import verify_certificate, verify_decomposition

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CERTIFICATE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    pass


def _read_graph(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_edge_list(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_document(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None


def _params(args) -> Params:
    try:
        return Params(args.k, args.d)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_mad(args) -> int:
    g = _read_graph(args.graph)
    if g.n == 0:
        raise InputError("mad of the empty graph is undefined")
    w = mad_exact(g)
    print(json.dumps({"mad": frac_str(w.density), "vertices": list(w.vertices), "edge_count": w.edge_count}))
    return EXIT_OK


def cmd_orient(args) -> int:
    g = _read_graph(args.graph)
    if args.cap < 1:
        raise InputError("--cap must be at least 1")
    res = hakimi_orient(g, args.cap, seed=args.seed)
    if res.ok:
        print(json.dumps({"result": "orientation", "cap": args.cap, "tails": res.state.tail}))
        return EXIT_OK
    w = res.witness
    print(json.dumps({"result": "witness", "cap": args.cap, "witness_vertices": list(w.vertices),
                      "witness_density": frac_str(w.density)}))
    return EXIT_CERTIFICATE


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    p = _params(args)
    # d = 1 runs quietly (a matching is still a valid special part); only d > 2k+2 is flagged
    if p.d > 2 * p.k + 2:
        print(f"warning: d={p.d} > 2k+2={2 * p.k + 2}; no guarantee, running best-effort", file=sys.stderr)
    run = Decomposer(g, p, seed=args.seed, max_iters=args.max_iters, assert_potential=args.assert_potential)
    try:
        result = run.run()
    except IterationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InternalInconsistency, PotentialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = dumps_document(result_document(result, p, run.stats))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if isinstance(result, Decomposition) else EXIT_CERTIFICATE


def _load_result(args, g):
    doc = _read_document(args.result)
    try:
        result = document_result(doc, g)
    except SchemaError as exc:
        raise InputError(f"{args.result}: schema mismatch: {exc}") from None
    return doc, result


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    doc, result = _load_result(args, g)
    k = doc["k"] if args.k is None else args.k
    d = doc["d"] if args.d is None else args.d
    if (k, d) != (doc["k"], doc["d"]):
        raise InputError(f"command line k={k}, d={d} does not match document k={doc['k']}, d={doc['d']}")
    p = Params(k, d)
    if isinstance(result, Decomposition):
        bad = verify_decomposition(g, result, p)
    else:
        bad = verify_certificate(g, result, p)
    if bad is not None:
        report = {"ok": False, "check": bad.check, "message": bad.message}
        if bad.edge is not None:
            report["edge"] = bad.edge
        if bad.vertices is not None:
            report["vertices"] = list(bad.vertices)
        print(json.dumps(report))
        return EXIT_VIOLATION
    print(json.dumps({"ok": True, "result": doc["result"]}))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    g = _read_graph(args.graph)
    _, result = _load_result(args, g)
    if isinstance(result, DensityCertificate):
        raise InputError("certificate documents have no decomposition to draw")
    sys.stdout.write(to_dot(g, result))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "union":
        out = gen_pseudoforest_union(args.n, args.k, args.d, args.seed)
    else:
        if args.n < 2 or args.k < 1 or args.d < 1:
            raise InputError("gen below/above needs n >= 2, k >= 1, d >= 1")
        fn = gen_below_threshold if args.kind == "below" else gen_above_threshold
        out = fn(args.n, args.k, args.d, args.seed)
    text = format_edge_list(out.graph)
    meta = json.dumps(out.meta, indent=2) + "\n"
    if args.out:
        Path(args.out + ".txt").write_text(text)
        Path(args.out + ".json").write_text(meta)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfdecomp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mad", help="exact maximum average degree")
    s.add_argument("graph")
    s.set_defaults(func=cmd_mad)

    s = sub.add_parser("orient", help="orientation with out-degree <= cap, or a density witness")
    s.add_argument("graph")
    s.add_argument("--cap", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_orient)

    s = sub.add_parser("decompose", help="k+1 pseudoforests or a density certificate")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=None)
    s.add_argument("--assert-potential", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="check a result document against its graph")
    s.add_argument("graph")
    s.add_argument("result")
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export-dot", help="draw a decomposition as Graphviz DOT")
    s.add_argument("graph")
    s.add_argument("result")
    s.set_defaults(func=cmd_export_dot)

    s = sub.add_parser("gen", help="generate a test instance")
    s.add_argument("kind", choices=["below", "above", "union"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="write OUT.txt and OUT.json instead of printing the edge list")
    s.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    # the CLI prints its own warnings; keep library log records off stderr
    lib = logging.getLogger("pfdecomp")
    if not lib.handlers:
        lib.addHandler(logging.NullHandler())
        lib.propagate = False
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
