"""Edge-list files, JSON result documents and DOT export."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

import jsonschema

from .density import threshold
from .graph import Multigraph
from .results import DensityCertificate, Decomposition, Params


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_edge_list(text: str) -> Multigraph:
    """Parse ``p <n> <m>`` followed by ``m`` lines ``e <u> <v>``; ``#`` starts a comment line."""
    n = m = None
    edges: list[tuple[int, int]] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "p" or len(tok) != 3:
                raise ParseError(lineno, f"expected header 'p <n> <m>', got {line!r}")
            try:
                n, m = int(tok[1]), int(tok[2])
            except ValueError:
                raise ParseError(lineno, "header counts must be integers") from None
            if n < 0 or m < 0:
                raise ParseError(lineno, "header counts must be nonnegative")
            continue
        if tok[0] != "e" or len(tok) != 3:
            raise ParseError(lineno, f"expected 'e <u> <v>', got {line!r}")
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise ParseError(lineno, "edge endpoints must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"endpoint outside 0..{n - 1}")
        if u == v:
            raise ParseError(lineno, f"loop at vertex {u}")
        edges.append((u, v))
    if n is None:
        raise ParseError(1, "missing header 'p <n> <m>'")
    if len(edges) != m:
        raise ParseError(last, f"header promises {m} edges, found {len(edges)}")
    return Multigraph(n, edges)


def format_edge_list(g: Multigraph) -> str:
    lines = [f"p {g.n} {g.m}"] + [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


_FRAC = {"type": "string", "pattern": r"^-?[0-9]+/[1-9][0-9]*$"}
_STATS = {
    "type": "object",
    "required": ["moves", "flips", "iterations", "seed"],
    "properties": {key: {"type": "integer"} for key in ("moves", "flips", "iterations", "seed")},
}

RESULT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["k", "d", "threshold", "result", "stats"],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "d": {"type": "integer", "minimum": 1},
        "threshold": _FRAC,
        "result": {"enum": ["decomposition", "certificate"]},
        "parts": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "special_index": {"type": "integer", "minimum": 0},
        "tails": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "witness_vertices": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "witness_edge_count": {"type": "integer", "minimum": 0},
        "witness_density": _FRAC,
        "stats": _STATS,
    },
    "oneOf": [
        {
            "properties": {"result": {"const": "decomposition"}},
            "required": ["parts", "special_index"],
            "not": {"anyOf": [{"required": ["witness_vertices"]}, {"required": ["witness_density"]}]},
        },
        {
            "properties": {"result": {"const": "certificate"}},
            "required": ["witness_vertices", "witness_density"],
            "not": {"anyOf": [{"required": ["parts"]}, {"required": ["special_index"]}]},
        },
    ],
}


class SchemaError(ValueError):
    pass


def validate_document(doc: Any) -> None:
    try:
        jsonschema.validate(doc, RESULT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None


def result_document(result: Union[Decomposition, DensityCertificate], p: Params, stats: dict) -> dict[str, Any]:
    doc: dict[str, Any] = {"k": p.k, "d": p.d, "threshold": frac_str(threshold(p.k, p.d))}
    if isinstance(result, Decomposition):
        doc["result"] = "decomposition"
        doc["parts"] = [list(part) for part in result.parts]
        doc["special_index"] = result.special_index
        if result.tails is not None:
            doc["tails"] = list(result.tails)
    else:
        doc["result"] = "certificate"
        doc["witness_vertices"] = list(result.vertices)
        doc["witness_edge_count"] = result.edge_count
        doc["witness_density"] = frac_str(result.density)
    doc["stats"] = {key: int(stats.get(key, 0)) for key in ("moves", "flips", "iterations", "seed")}
    return doc


def dumps_document(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def document_result(doc: dict[str, Any], g: Multigraph) -> Union[Decomposition, DensityCertificate]:
    """Rebuild the result object from a (schema-valid) document."""
    validate_document(doc)
    if doc["result"] == "decomposition":
        tails = doc.get("tails")
        return Decomposition(
            tuple(tuple(part) for part in doc["parts"]),
            doc["special_index"],
            tuple(tails) if tails is not None else None,
        )
    verts = tuple(doc["witness_vertices"])
    count = doc.get("witness_edge_count")
    if count is None:
        count = g.induced_edge_count(verts)
    return DensityCertificate(verts, count, parse_frac(doc["witness_density"]), parse_frac(doc["threshold"]))


PALETTE = ("blue", "darkgreen", "orange", "purple", "brown", "cyan4", "magenta", "gray40")


def to_dot(g: Multigraph, dec: Decomposition) -> str:
    """Special-part edges dashed red, other parts solid with one colour per part index."""
    owner = {e: i for i, part in enumerate(dec.parts) for e in part}
    out = ["digraph decomposition {"]
    for v in range(g.n):
        out.append(f"  {v};")
    blue_index = {}
    for i in range(len(dec.parts)):
        if i != dec.special_index:
            blue_index[i] = len(blue_index)
    for e, (u, v) in enumerate(g.edges):
        if dec.tails is not None:
            tail = dec.tails[e]
            head = v if tail == u else u
            attrs = []
        else:
            tail, head = u, v
            attrs = ["dir=none"]
        part = owner.get(e)
        if part == dec.special_index:
            attrs = ["style=dashed", "color=red"] + attrs
        else:
            attrs = ["style=solid", f"color={PALETTE[blue_index.get(part, 0) % len(PALETTE)]}"] + attrs
        attrs.append(f'label="e{e}/p{part}"')
        out.append(f"  {tail} -> {head} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
