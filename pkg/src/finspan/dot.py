"""DOT export for categories, spans, 2-cells and zig-zags, plus a small
grammar check for the emitted subset of DOT."""
from __future__ import annotations

import re

from .classes import label
from .fincat import FinCat


def _q(x):
    s = str(label(x))
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _graph(name, nodes, edges, rankdir="LR"):
    out = [f"digraph {_q(name)} {{", f"  graph [rankdir={rankdir}];"]
    for n, attrs in nodes:
        out.append(f"  {_q(n)}{_attrs(attrs)};")
    for a, b, attrs in edges:
        out.append(f"  {_q(a)} -> {_q(b)}{_attrs(attrs)};")
    out.append("}")
    return "\n".join(out) + "\n"


def _attrs(attrs):
    if not attrs:
        return ""
    return " [" + ", ".join(f"{k}={_q(v)}" for k, v in attrs.items()) + "]"


def category_dot(C: FinCat, reduce=None):
    """Objects and non-identity morphisms; thin categories show only their Hasse diagram by default."""
    if reduce is None:
        reduce = C.is_thin
    edges = []
    for m in C.morphisms:
        if C.is_identity(m):
            continue
        a, b = C.src[m], C.tgt[m]
        if reduce and any(
            not C.is_identity(f) and not C.is_identity(g) and C.comp(g, f) == m
            for f in C.out_of(a) for g in C.hom(C.tgt[f], b)
        ):
            continue
        edges.append((a, b, {} if reduce else {"label": label(m)}))
    return _graph(C.name, [(x, {}) for x in C.objects], edges)


def span_dot(C, s, name="span"):
    z = ("apex", C.src[s.left])
    x, y = C.tgt[s.left], C.tgt[s.right]
    nodes = [(("source", x), {"label": label(x)}), (z, {"label": label(C.src[s.left])}),
             (("target", y), {"label": label(y)})]
    edges = [(z, ("source", x), {"label": label(s.left)}), (z, ("target", y), {"label": label(s.right)})]
    return _graph(name, nodes, edges)


def cell_dot(C, c, name="2-cell"):
    """Layered picture: endpoints, the two apexes, and the 2-cell apex w below."""
    s, t = c.source, c.target
    x, y = C.tgt[s.left], C.tgt[s.right]
    u, v, w = ("u", C.src[s.left]), ("v", C.src[t.left]), ("w", C.src[c.up])
    nodes = [(("x", x), {"label": label(x)}), (("y", y), {"label": label(y)}),
             (u, {"label": label(u[1])}), (v, {"label": label(v[1])}), (w, {"label": label(w[1])})]
    edges = [
        (u, ("x", x), {"label": label(s.left)}), (u, ("y", y), {"label": label(s.right)}),
        (v, ("x", x), {"label": label(t.left)}), (v, ("y", y), {"label": label(t.right)}),
        (w, u, {"label": label(c.up), "style": "dashed"}), (w, v, {"label": label(c.down)}),
    ]
    return _graph(name, nodes, edges, rankdir="BT")


def zigzag_dot(path, start, name="zig-zag"):
    """A path of factorization morphisms (m, ±1) starting at `start`."""
    nodes = [(start, {})]
    edges = []
    for m, d in path:
        fa, fb, mid = m
        nodes.append((fb if d > 0 else fa, {}))
        edges.append((fa, fb, {"label": label(mid)}))
    return _graph(name, nodes, edges)


# grammar check

_TOKEN = re.compile(r'\s*(?:(->)|([{}\[\];,=])|("(?:[^"\\]|\\.)*")|([A-Za-z_][A-Za-z0-9_]*|-?\d+(?:\.\d+)?))')


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad token at offset {pos}")
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


def check_dot(text):
    """(ok, message) for the subset: digraph ID { (node | edge | attr) stmts }."""
    try:
        toks = _tokens(text)
    except ValueError as exc:
        return False, str(exc)
    k = 0

    def peek():
        return toks[k] if k < len(toks) else None

    def take(expected=None):
        nonlocal k
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise SyntaxError(f"expected {expected or 'token'} at token {k}, got {t!r}")
        k += 1
        return t

    def is_id(t):
        return t is not None and (t[0] == '"' or re.match(r"[A-Za-z_0-9-]", t)) and t != "->"

    def ident():
        t = take()
        if not is_id(t):
            raise SyntaxError(f"expected identifier at token {k - 1}, got {t!r}")

    def attr_list():
        take("[")
        while peek() != "]":
            ident()
            take("=")
            ident()
            if peek() in (",", ";"):
                take()
        take("]")

    try:
        take("digraph")
        if peek() != "{":
            ident()
        take("{")
        while peek() != "}":
            t = peek()
            if t in ("graph", "node", "edge"):
                take()
                attr_list()
            else:
                ident()
                while peek() == "->":
                    take("->")
                    ident()
                if peek() == "[":
                    attr_list()
            if peek() == ";":
                take(";")
        take("}")
        if peek() is not None:
            raise SyntaxError("trailing tokens")
    except SyntaxError as exc:
        return False, str(exc)
    return True, "ok"


def dot_nodes_edges(text):
    """Counts of node statements and edges in emitted DOT."""
    nodes = edges = 0
    for line in text.splitlines():
        line = line.strip()
        if "->" in line:
            edges += line.count("->")
        elif line.startswith('"'):
            nodes += 1
    return nodes, edges
