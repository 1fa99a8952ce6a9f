"""Cartesian monoidal structure on a finite category and on its spans, and
projection formulas for Cat-valued functors with fiberwise products.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classes import Verdict, label
from .errors import (
    FamilyNotClosedUnderTensor,
    MissingProduct,
    NoFiberProducts,
    NoTerminalObject,
    SizeGuardExceeded,
)
from .fincat import DEFAULT_GUARD
from .limits import product, terminal
from .spancat import Span, compose_spans, span_class


@dataclass
class MonoidalFailure:
    reason: str
    witness: dict

    ok = False


@dataclass
class MonoidalData:
    """Chosen products and terminal object of C with the structure isomorphisms."""

    C: object
    unit: object
    products: dict
    _assoc: dict = field(default_factory=dict)

    ok = True

    def cone(self, a, b):
        try:
            return self.products[(a, b)]
        except KeyError:
            raise MissingProduct(a, b) from None

    def obj(self, a, b):
        return self.cone(a, b).apex

    def mor(self, f, g):
        """f × g."""
        C = self.C
        src = self.cone(C.src[f], C.src[g])
        tgt = self.cone(C.tgt[f], C.tgt[g])
        return tgt.mediate(C.comp(f, src.p1), C.comp(g, src.p2))

    def pair(self, u, v):
        """<u, v>: z -> a × b."""
        C = self.C
        return self.cone(C.tgt[u], C.tgt[v]).mediate(u, v)

    def associator(self, a, b, c):
        """(a × b) × c -> a × (b × c)."""
        key = (a, b, c)
        if key not in self._assoc:
            C = self.C
            ab, abc = self.cone(a, b), self.cone(self.obj(a, b), c)
            pa = C.comp(ab.p1, abc.p1)
            pb = C.comp(ab.p2, abc.p1)
            self._assoc[key] = self.pair(pa, self.pair(pb, abc.p2))
        return self._assoc[key]

    def left_unitor(self, a):
        """1 × a -> a."""
        return self.cone(self.unit, a).p2

    def right_unitor(self, a):
        """a × 1 -> a."""
        return self.cone(a, self.unit).p1

    def symmetry(self, a, b):
        """a × b -> b × a."""
        k = self.cone(a, b)
        return self.pair(k.p2, k.p1)


def cartesian_structure(C):
    """MonoidalData, or a MonoidalFailure naming the first missing product."""
    try:
        one = terminal(C)
    except NoTerminalObject:
        one = None
    if one is None:
        return MonoidalFailure("no terminal object", {"kind": "terminal"})
    products = {}
    for a in C.objects:
        for b in C.objects:
            cone = product(C, a, b)
            if cone is None:
                return MonoidalFailure(f"missing product {label(a)} × {label(b)}",
                                       {"kind": "product", "pair": [label(a), label(b)]})
            products[(a, b)] = cone
    return MonoidalData(C, one, products)


def structure_witnesses(M):
    """Verdicts that the structure maps are isomorphisms and satisfy pentagon and triangle."""
    C = M.C
    obs = C.objects
    bad_iso = None
    n = 0
    for a in obs:
        for f in (M.left_unitor(a), M.right_unitor(a)):
            n += 1
            if bad_iso is None and not C.is_iso(f):
                bad_iso = {"kind": "unitor", "object": label(a)}
        for b in obs:
            n += 1
            if bad_iso is None and not C.is_iso(M.symmetry(a, b)):
                bad_iso = {"kind": "symmetry", "objects": [label(a), label(b)]}
            for c in obs:
                n += 1
                if bad_iso is None and not C.is_iso(M.associator(a, b, c)):
                    bad_iso = {"kind": "associator", "objects": [label(a), label(b), label(c)]}
    bad_pent = None
    n_pent = 0
    for a in obs:
        for b in obs:
            for c in obs:
                for d in obs:
                    n_pent += 1
                    ab, cd = M.obj(a, b), M.obj(c, d)
                    lhs = C.comp(M.associator(a, b, cd), M.associator(ab, c, d))
                    rhs = C.comp(M.mor(C.identity[a], M.associator(b, c, d)),
                                 C.comp(M.associator(a, M.obj(b, c), d),
                                        M.mor(M.associator(a, b, c), C.identity[d])))
                    if lhs != rhs:
                        bad_pent = {"kind": "pentagon", "objects": [label(x) for x in (a, b, c, d)]}
                        break
                if bad_pent:
                    break
            if bad_pent:
                break
        if bad_pent:
            break
    bad_tri = None
    n_tri = 0
    for a in obs:
        for b in obs:
            n_tri += 1
            lhs = C.comp(M.mor(C.identity[a], M.left_unitor(b)), M.associator(a, M.unit, b))
            rhs = M.mor(M.right_unitor(a), C.identity[b])
            if lhs != rhs:
                bad_tri = {"kind": "triangle", "objects": [label(a), label(b)]}
                break
    return [
        Verdict("structure maps invertible", bad_iso is None, bad_iso, n),
        Verdict("pentagon", bad_pent is None, bad_pent, n_pent),
        Verdict("triangle", bad_tri is None, bad_tri, n_tri),
    ]


# tensor of spans

def tensor_spans(s, t, M, E=None):
    """Class of (x × x' <- z × z' -> y × y'); with E, the right leg must stay in E."""
    C = M.C
    left = M.mor(s.left, t.left)
    right = M.mor(s.right, t.right)
    if E is not None and s.right in E and t.right in E and right not in E:
        raise FamilyNotClosedUnderTensor(f"{label(s.right)} × {label(t.right)} = {label(right)} not in {E.name}")
    return span_class(C, Span(left, right))


def forward_span(C, f):
    return span_class(C, Span(C.identity[C.src[f]], f))


def tensor_laws(M, spans, E=None, guard=DEFAULT_GUARD):
    """Verdicts: tensor of spans is associative and unital up to the structure
    isomorphisms, and interchanges with composition."""
    C = M.C
    ids = {x: span_class(C, Span(C.identity[x], C.identity[x])) for x in C.objects}
    one = ids[M.unit]

    def then(s, t):
        return compose_spans(C, s, t)

    n = len(spans) ** 3
    if n > guard:
        raise SizeGuardExceeded("span triples", n, guard)
    bad_assoc = bad_unit = None
    n_assoc = n_unit = 0
    for s in spans:
        x, y = C.tgt[s.left], C.tgt[s.right]
        n_unit += 1
        lu = then(tensor_spans(one, s, M, E), forward_span(C, M.left_unitor(y)))
        lu2 = then(forward_span(C, M.left_unitor(x)), s)
        ru = then(tensor_spans(s, one, M, E), forward_span(C, M.right_unitor(y)))
        ru2 = then(forward_span(C, M.right_unitor(x)), s)
        if bad_unit is None and (lu != lu2 or ru != ru2):
            bad_unit = {"kind": "unitality", "span": [label(s.left), label(s.right)]}
        for t in spans:
            for u in spans:
                n_assoc += 1
                if bad_assoc is not None:
                    continue
                xs = [C.tgt[v.left] for v in (s, t, u)]
                ys = [C.tgt[v.right] for v in (s, t, u)]
                lhs = then(tensor_spans(tensor_spans(s, t, M, E), u, M, E), forward_span(C, M.associator(*ys)))
                rhs = then(forward_span(C, M.associator(*xs)), tensor_spans(s, tensor_spans(t, u, M, E), M, E))
                if lhs != rhs:
                    bad_assoc = {"kind": "associativity", "spans": [[label(v.left), label(v.right)] for v in (s, t, u)]}
    return [
        Verdict("tensor associative", bad_assoc is None, bad_assoc, n_assoc),
        Verdict("tensor unital", bad_unit is None, bad_unit, n_unit),
    ]


def interchange(M, pairs_a, pairs_b, E=None):
    """(s'∘s) ⊗ (t'∘t) = (s'⊗t')∘(s⊗t) for composable pairs (s, s') and (t, t')."""
    C = M.C
    n = 0
    for s, s2 in pairs_a:
        for t, t2 in pairs_b:
            n += 1
            lhs = tensor_spans(compose_spans(C, s, s2), compose_spans(C, t, t2), M, E)
            rhs = compose_spans(C, tensor_spans(s, t, M, E), tensor_spans(s2, t2, M, E))
            if lhs != rhs:
                return Verdict("tensor interchanges with composition", False,
                               {"kind": "interchange", "s": [label(s.left), label(s.right)],
                                "t": [label(t.left), label(t.right)]}, n)
    return Verdict("tensor interchanges with composition", True, None, n)


# projection formulas

class FiberProducts:
    """Binary products in each fiber, used as the fiberwise tensor."""

    def __init__(self, F):
        self.F = F
        self._cache = {}

    def cone(self, x, A, B):
        key = (x, A, B)
        if key not in self._cache:
            X = self.F.fiber(x)
            try:
                cone = product(X, A, B)
            except NoTerminalObject:
                raise NoFiberProducts(f"fiber at {label(x)} has no terminal object") from None
            if cone is None:
                raise NoFiberProducts(f"no product of {A} and {B} in the fiber at {label(x)}")
            self._cache[key] = cone
        return self._cache[key]

    def internal_hom(self, x, B, A):
        """[B, A] in a thin fiber: the largest C with C × B ≤ A."""
        X = self.F.fiber(x)
        if not X.is_thin:
            raise NoFiberProducts("internal homs are only computed in thin fibers")
        best = [c for c in X.objects if X.hom(self.cone(x, c, B).apex, A)]
        for c in best:
            if all(X.hom(d, c) for d in best):
                return c
        return None


def projection_comparison(F, T, i, A, B, swap=False):
    """i_♯(A ⊗ i^*B) -> i_♯A ⊗ B (or i_♯(i^*B ⊗ A) -> B ⊗ i_♯A with swap)."""
    C = F.base
    x, y = C.src[i], C.tgt[i]
    adj = F.lower(i)
    X, Y = F.fiber(x), F.fiber(y)
    iB = F.star(i).obj[B]
    inner = T.cone(x, iB, A) if swap else T.cone(x, A, iB)
    to_A = inner.p2 if swap else inner.p1
    to_iB = inner.p1 if swap else inner.p2
    first = adj.left.mor[to_A]
    second = Y.comp(adj.counit[B], adj.left.mor[to_iB])
    iA = adj.left.obj[A]
    outer = T.cone(y, B, iA) if swap else T.cone(y, iA, B)
    return outer.mediate(second, first) if swap else outer.mediate(first, second)


def dual_projection_comparison(F, T, p, A, B, swap=False):
    """p_*A ⊗ B -> p_*(A ⊗ p^*B) (or B ⊗ p_*A -> p_*(p^*B ⊗ A) with swap)."""
    C = F.base
    x, y = C.src[p], C.tgt[p]
    adj = F.upper(p)
    X, Y = F.fiber(x), F.fiber(y)
    pst = F.star(p)
    pA = adj.right.obj[A]
    outer = T.cone(y, B, pA) if swap else T.cone(y, pA, B)
    to_pA = outer.p2 if swap else outer.p1
    to_B = outer.p1 if swap else outer.p2
    pB = pst.obj[B]
    inner = T.cone(x, pB, A) if swap else T.cone(x, A, pB)
    # p^*(p_*A ⊗ B) -> A and -> p^*B, paired into the inner product, then transposed
    to_A = X.comp(adj.counit[A], pst.mor[to_pA])
    to_pB = pst.mor[to_B]
    med = inner.mediate(to_pB, to_A) if swap else inner.mediate(to_A, to_pB)
    return Y.comp(adj.right.mor[med], adj.unit[outer.apex])


def closed_dual_comparison(F, T, p, A, B):
    """p_*[p^*B, A] -> [B, p_*A] in thin fibers; None when either hom is missing."""
    C = F.base
    x, y = C.src[p], C.tgt[p]
    adj = F.upper(p)
    Y = F.fiber(y)
    h1 = T.internal_hom(x, F.star(p).obj[B], A)
    h2 = T.internal_hom(y, B, adj.right.obj[A])
    if h1 is None or h2 is None:
        return None
    src = adj.right.obj[h1]
    found = Y.hom(src, h2)
    return found[0] if found else None


def check_projection_formulas(F, I, P, tensors=None, swap=False, closed=False, guard=DEFAULT_GUARD):
    """Verdicts for the projection formula along I and its dual along P.

    `tensors` supplies `cone(x, A, B)` per fiber (default: fiber products).
    With `closed`, the dual law is also checked in internal-hom form.
    """
    C = F.base
    T = tensors or FiberProducts(F)
    total = sum(len(F.fiber(C.src[m]).objects) * len(F.fiber(C.tgt[m]).objects) for m in C.morphisms)
    if total > guard:
        raise SizeGuardExceeded("projection instances", total, guard)
    suffix = " (swapped)" if swap else ""
    out = []
    for name, fam, build in (
        ("projection formula" + suffix, I, projection_comparison),
        ("dual projection formula" + suffix, P, dual_projection_comparison),
    ):
        n, bad = 0, None
        for m in fam:
            x, y = C.src[m], C.tgt[m]
            for A in F.fiber(x).objects:
                for B in F.fiber(y).objects:
                    n += 1
                    if bad is not None:
                        continue
                    c = build(F, T, m, A, B, swap)
                    if not F.fiber(y).is_iso(c):
                        bad = {"kind": "projection" if fam is I else "dual_projection", "m": label(m),
                               "A": label(A), "B": label(B), "swap": swap}
        out.append(Verdict(name, bad is None, bad, n))
    if closed:
        n, bad = 0, None
        for p in P:
            x, y = C.src[p], C.tgt[p]
            for A in F.fiber(x).objects:
                for B in F.fiber(y).objects:
                    n += 1
                    if bad is None:
                        c = closed_dual_comparison(F, T, p, A, B)
                        if c is None or not F.fiber(y).is_iso(c):
                            bad = {"kind": "closed_dual_projection", "m": label(p), "A": label(A), "B": label(B)}
        out.append(Verdict("dual projection formula (internal hom)", bad is None, bad, n))
    return out
