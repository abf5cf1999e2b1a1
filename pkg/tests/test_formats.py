import pytest

from pfdecomp.formats import ParseError, SchemaError, parse_edge_list, validate_document


def test_parse_comments_and_parallel_edges():
    g = parse_edge_list("# hi\np 3 3\ne 0 1\n\ne 0 1\n# mid\ne 1 2\n")
    assert g.n == 3 and g.edges == ((0, 1), (0, 1), (1, 2))


@pytest.mark.parametrize(
    "text,line",
    [
        ("x 3 1\ne 0 1\n", 1),
        ("p 3 1\ne 0 3\n", 2),
        ("p 3 1\ne 1 1\n", 2),
        ("p 3 2\ne 0 1\n", 2),
        ("p 3 1\ne 0 1\ne 1 2\n", 3),
        ("p 3 1\nf 0 1\n", 2),
    ],
)
def test_parse_errors_cite_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text)
    assert info.value.line == line


def base_doc():
    return {
        "k": 1,
        "d": 2,
        "threshold": "3/1",
        "result": "decomposition",
        "parts": [[0], [1]],
        "special_index": 1,
        "stats": {"moves": 0, "flips": 0, "iterations": 1, "seed": 0},
    }


def test_schema_accepts_decomposition():
    validate_document(base_doc())


def test_schema_rejects_mixed_fields():
    doc = base_doc()
    doc["witness_vertices"] = [0]
    doc["witness_density"] = "2/1"
    with pytest.raises(SchemaError):
        validate_document(doc)


def test_schema_rejects_float_rationals():
    doc = base_doc()
    doc["threshold"] = 3.0
    with pytest.raises(SchemaError):
        validate_document(doc)
