from finspan.catalog import gen_free_category
from finspan.classes import factorization_category
from finspan.dot import category_dot, cell_dot, check_dot, dot_nodes_edges, span_dot, zigzag_dot
from finspan.report import Report, digest
from finspan.classes import Verdict
from finspan.span2 import Span2
from finspan.spancat import Span

from conftest import decomposition


def test_twisted_arrow_shape():
    C = gen_free_category(["0", "1"], [("a", "0", "1")])
    text = category_dot(C, reduce=False)
    assert check_dot(text)[0]
    assert dot_nodes_edges(text) == (2, 1)


def test_hasse_reduction():
    D = decomposition("div12-all")
    text = category_dot(D.C)
    assert check_dot(text) == (True, "ok")
    # covering relations of the divisors of 12
    assert dot_nodes_edges(text) == (6, 7)


def test_span_and_cell():
    D = decomposition("div6-all")
    C = D.C
    s = Span(C.identity[1], C.hom(1, 6)[0])
    assert check_dot(span_dot(C, s))[0]
    S2 = Span2(C, D.E, D.I, D.P)
    cell = S2.identity_cell(s)
    text = cell_dot(C, cell)
    assert check_dot(text)[0] and dot_nodes_edges(text)[1] == 6


def test_zigzag():
    D = decomposition("finset2-inj")
    e = next(m for m in D.E if not D.C.is_identity(m))
    K = factorization_category(D.C, e, D.I, D.P).category
    start = K.objects[0]
    path = [(m, 1) for m in K.out_of(start) if not K.is_identity(m)][:1]
    text = zigzag_dot(path, start)
    assert check_dot(text)[0]
    assert dot_nodes_edges(text) == (1 + len(path), len(path))


def test_grammar_rejects():
    assert not check_dot("digraph { a -> }")[0]
    assert not check_dot('digraph "x" { "a" [label="b" }')[0]
    assert not check_dot("graph { a }")[0]


def test_report_json():
    r = Report("demo", {"b": 1, "a": [1, 2]})
    r.add(Verdict("law", True, instances=3))
    r.add(Verdict("other", False, witness={"m": "f"}, instances=1))
    d = r.to_dict()
    assert set(d) == {"command", "inputs", "checks", "duration_ms"}
    assert not r.passed
    assert r.to_json() == Report("demo", {"a": [1, 2], "b": 1}, list(r.checks)).to_json()
    assert "witness" in r.human()
    assert digest("x").startswith("sha256:")
