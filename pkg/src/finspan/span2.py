"""The span 2-category, stored homwise.

HOM(x, y) has as objects the span classes x <- z -> y with right leg in E.  A
2-cell s => t is a span of spans: an apex w with an upward leg p: w -> apex(s)
in P and a downward leg i: w -> apex(t) in I, such that both legs of s and t
agree through w.  2-cells are identified up to isomorphism of w.
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

from .errors import MissingPullback, SizeGuardExceeded
from .fincat import DEFAULT_GUARD, FinCat, Functor, LazyMap, product_category
from .limits import pullback
from .spancat import Span, normalize_span, span_class, span_key

TwoCell = namedtuple("TwoCell", "source target up down")


def cell_apex(C, c):
    return C.src[c.up]


def normalize_cell(C, source, target, up, down):
    w = C.src[up]
    for w2 in C.objects:
        isos = C.isos(w2, w)
        if not isos:
            continue
        best = min(isos, key=lambda phi: (C.key(C.comp(up, phi)), C.key(C.comp(down, phi))))
        return TwoCell(source, target, C.comp(up, best), C.comp(down, best))
    raise AssertionError("apex not isomorphic to any object")


class HomCat:
    """HOM(x, y) as a FinCat whose objects are spans and morphisms are 2-cells."""

    def __init__(self, s2, x, y, category):
        self.s2 = s2
        self.x = x
        self.y = y
        self.category = category

    @property
    def objects(self):
        return self.category.objects


class Span2:
    """The span 2-category of a suitable decomposition (C, E, I, P)."""

    def __init__(self, C, E, I, P, guard=DEFAULT_GUARD):
        self.C = C
        self.E = E
        self.I = I
        self.P = P
        self.guard = guard
        self._homs = {}

    # 2-cells

    def make_cell(self, source_raw, target_raw, up, down):
        """Normalize a 2-cell between raw spans into one between canonical spans."""
        C = self.C
        sl, sr, phi_s = normalize_span(C, source_raw.left, source_raw.right)
        tl, tr, phi_t = normalize_span(C, target_raw.left, target_raw.right)
        up = C.comp(C.inverse(phi_s), up)
        down = C.comp(C.inverse(phi_t), down)
        return normalize_cell(C, Span(sl, sr), Span(tl, tr), up, down)

    def is_cell(self, c):
        C = self.C
        s, t = c.source, c.target
        return (
            c.up in self.P and c.down in self.I
            and C.comp(s.left, c.up) == C.comp(t.left, c.down)
            and C.comp(s.right, c.up) == C.comp(t.right, c.down)
        )

    def identity_cell(self, s):
        i = self.C.identity[self.C.src[s.left]]
        return normalize_cell(self.C, s, s, i, i)

    def vertical_compose(self, alpha, beta):
        """β∘α for α: s => t and β: t => r."""
        C = self.C
        if alpha.target != beta.source:
            raise ValueError("2-cells are not vertically composable")
        pb = pullback(C, alpha.down, beta.up)
        if pb is None:
            raise MissingPullback(alpha.down, beta.up)
        return normalize_cell(C, alpha.source, beta.target, C.comp(alpha.up, pb.p1), C.comp(beta.down, pb.p2))

    def compose_raw(self, s, t):
        """Raw composite of s: x -> y then t: y -> z, with its pullback cone."""
        C = self.C
        pb = pullback(C, s.right, t.left)
        if pb is None:
            raise MissingPullback(s.right, t.left)
        return Span(C.comp(s.left, pb.p1), C.comp(t.right, pb.p2)), pb

    def compose_objects(self, s, t):
        raw, _ = self.compose_raw(s, t)
        return span_class(self.C, raw)

    def horizontal_compose_cells(self, alpha, beta):
        """α then β, for α in HOM(x, y) and β in HOM(y, z)."""
        C = self.C
        s, s2, t, t2 = alpha.source, alpha.target, beta.source, beta.target
        raw_src, pb_src = self.compose_raw(s, t)
        raw_tgt, pb_tgt = self.compose_raw(s2, t2)
        a = C.comp(s.right, alpha.up)
        b = C.comp(t.left, beta.up)
        pw = pullback(C, a, b)
        if pw is None:
            raise MissingPullback(a, b)
        up = pb_src.mediate(C.comp(alpha.up, pw.p1), C.comp(beta.up, pw.p2))
        down = pb_tgt.mediate(C.comp(alpha.down, pw.p1), C.comp(beta.down, pw.p2))
        return self.make_cell(raw_src, raw_tgt, up, down)

    # hom categories

    def hom(self, x, y):
        key = (x, y)
        if key not in self._homs:
            self._homs[key] = self._build_hom(x, y)
        return self._homs[key]

    def hom_objects(self, x, y):
        C = self.C
        classes = set()
        for z in C.objects:
            rs = [r for r in C.hom(z, y) if r in self.E]
            for l in C.hom(z, x):
                for r in rs:
                    classes.add(span_class(C, Span(l, r)))
        return sorted(classes, key=lambda s: span_key(C, s))

    def _build_hom(self, x, y):
        C = self.C
        objs = self.hom_objects(x, y)
        index = {}
        for t in objs:
            d = {}
            for w in C.objects:
                for i in C.hom(w, C.src[t.left]):
                    if i in self.I:
                        d.setdefault((C.comp(t.left, i), C.comp(t.right, i)), []).append(i)
            index[t] = d
        cells = set()
        budget = 0
        for s in objs:
            u = C.src[s.left]
            for p in C.into(u):
                if p not in self.P:
                    continue
                key = (C.comp(s.left, p), C.comp(s.right, p))
                for t in objs:
                    for i in index[t].get(key, ()):
                        budget += 1
                        if budget > self.guard:
                            raise SizeGuardExceeded(f"2-cells of HOM({x},{y})", budget, self.guard)
                        cells.add(normalize_cell(C, s, t, p, i))
        pos = {s: k for k, s in enumerate(objs)}
        ordered = sorted(cells, key=lambda c: (pos[c.source], pos[c.target], C.okey(C.src[c.up]), C.key(c.up), C.key(c.down)))
        records = [(c, c.source, c.target) for c in ordered]
        ids = {s: self.identity_cell(s) for s in objs}
        K = FinCat(objs, records, ids, lambda b, a: self.vertical_compose(a, b), name=f"HOM({x},{y})")
        return HomCat(self, x, y, K)

    def horizontal_compose(self, x, y, z, guard=DEFAULT_GUARD):
        """The composition functor HOM(x,y) × HOM(y,z) -> HOM(x,z)."""
        A, B, T = self.hom(x, y).category, self.hom(y, z).category, self.hom(x, z).category
        n = len(A.morphisms) * len(B.morphisms)
        if n > guard:
            raise SizeGuardExceeded("product of hom categories", n, guard)
        Pc = product_category(A, B)
        obj = {(s, t): self.compose_objects(s, t) for s, t in Pc.objects}
        mor = LazyMap(Pc.morphisms, lambda ab: self.horizontal_compose_cells(ab[0], ab[1]))
        return Functor(Pc, T, obj, mor, name=f"∘_{x},{y},{z}")

    def one_cells(self):
        return [s for x in self.C.objects for y in self.C.objects for s in self.hom(x, y).objects]


def underlying_one_category(S2):
    """Objects and 1-cells with horizontal composition on objects."""
    C = S2.C
    cells = []
    for x in C.objects:
        for y in C.objects:
            cells += S2.hom_objects(x, y)
    records = [(s, C.tgt[s.left], C.tgt[s.right]) for s in cells]
    ids = {x: span_class(C, Span(C.identity[x], C.identity[x])) for x in C.objects}
    return FinCat(C.objects, records, ids, lambda t, s: S2.compose_objects(s, t), name=f"U(Span2({C.name}))")


def comparison_to_span_category(U, S):
    """Identity-on-identifiers comparison U -> Span(C, all, E)."""
    return Functor(U, S, {x: x for x in U.objects}, {m: m for m in U.morphisms}, name="cmp")


@dataclass
class AdjunctionWitness:
    left: Span
    right: Span
    unit: TwoCell
    counit: TwoCell
    triangle_left: bool
    triangle_right: bool

    @property
    def ok(self):
        return self.triangle_left and self.triangle_right


def _triangles(S2, L, R, eta, eps):
    """Triangle identities for L: a -> b, R: b -> a, η: id_a => R∘L, ε: L∘R => id_b."""
    one_L, one_R = S2.identity_cell(L), S2.identity_cell(R)
    t1 = S2.vertical_compose(S2.horizontal_compose_cells(eta, one_L), S2.horizontal_compose_cells(one_L, eps))
    t2 = S2.vertical_compose(S2.horizontal_compose_cells(one_R, eta), S2.horizontal_compose_cells(eps, one_R))
    return t1 == one_L, t2 == one_R


def unit_counit_witnesses(S2, i):
    """Witnesses that (x = x -> y) is left adjoint to (y <- x = x) for i: x -> y in I."""
    C = S2.C
    x, y = C.src[i], C.tgt[i]
    ix, iy = C.identity[x], C.identity[y]
    L0, R0 = Span(ix, i), Span(i, ix)
    RL, pb_rl = S2.compose_raw(L0, R0)      # x <- x ×_y x -> x
    LR, pb_lr = S2.compose_raw(R0, L0)      # y <- x -> y
    eps = S2.make_cell(LR, Span(iy, iy), pb_lr.mediate(ix, ix), i)
    eta = S2.make_cell(Span(ix, ix), RL, ix, pb_rl.mediate(ix, ix))
    L, R = span_class(C, L0), span_class(C, R0)
    t1, t2 = _triangles(S2, L, R, eta, eps)
    return AdjunctionWitness(L, R, eta, eps, t1, t2)


def unit_counit_witnesses_dual(S2, p):
    """Witnesses that (y <- x = x) is left adjoint to (x = x -> y) for p: x -> y in P."""
    C = S2.C
    x, y = C.src[p], C.tgt[p]
    ix, iy = C.identity[x], C.identity[y]
    L0, R0 = Span(p, ix), Span(ix, p)       # p^*: y -> x, p_*: x -> y
    RL, pb_rl = S2.compose_raw(L0, R0)      # y <- x -> y
    LR, pb_lr = S2.compose_raw(R0, L0)      # x <- x ×_y x -> x
    eta = S2.make_cell(Span(iy, iy), RL, p, pb_rl.mediate(ix, ix))
    eps = S2.make_cell(LR, Span(ix, ix), pb_lr.mediate(ix, ix), ix)
    L, R = span_class(C, L0), span_class(C, R0)
    t1, t2 = _triangles(S2, L, R, eta, eps)
    return AdjunctionWitness(L, R, eta, eps, t1, t2)


def bc_sharp_cell(S2, cone):
    """Beck-Chevalley 2-cell for C^op -> Span2 at the pullback of i ∈ I along f.

    `cone` is the canonical pullback of (f: y' -> y, i: x -> y), so p1 = j: x' -> y'
    and p2 = g: x' -> x.  The mate runs from (x <-g x' -j-> y') to the composite
    of (x = x -i-> y) with (y <-f- y' = y').
    """
    C = S2.C
    f, i = cone.cospan
    j, g = cone.p1, cone.p2
    wi = unit_counit_witnesses(S2, i)
    wj = unit_counit_witnesses(S2, j)
    r_then_jsharp = S2.compose_objects(span_class(C, Span(g, C.identity[cone.apex])), wj.left)
    isharp_then_f = S2.compose_objects(wi.left, span_class(C, Span(f, C.identity[C.src[f]])))
    step1 = S2.horizontal_compose_cells(wi.unit, S2.identity_cell(r_then_jsharp))
    step3 = S2.horizontal_compose_cells(S2.identity_cell(isharp_then_f), wj.counit)
    if step1.target != step3.source:
        raise AssertionError("mate steps do not compose")
    return S2.vertical_compose(step1, step3)


def bc_star_cell(S2, cone):
    """Beck-Chevalley 2-cell of the pullback of f along p ∈ P, for C^op -> Span2.

    `cone` is the canonical pullback of (p: x -> y, f: y' -> y) with
    p1 = g: x' -> x and p2 = q: x' -> y'.
    """
    C = S2.C
    p, f = cone.cospan
    g, q = cone.p1, cone.p2
    wp = unit_counit_witnesses_dual(S2, p)
    wq = unit_counit_witnesses_dual(S2, q)
    Lstar_T = S2.compose_objects(wp.right, span_class(C, Span(f, C.identity[C.src[f]])))
    Bo_Rstar = S2.compose_objects(span_class(C, Span(g, C.identity[cone.apex])), wq.right)
    step1 = S2.horizontal_compose_cells(S2.identity_cell(Lstar_T), wq.unit)
    step3 = S2.horizontal_compose_cells(wp.counit, S2.identity_cell(Bo_Rstar))
    if step1.target != step3.source:
        raise AssertionError("mate steps do not compose")
    return S2.vertical_compose(step1, step3)


def is_identity_cell(S2, c):
    return c.source == c.target and c == S2.identity_cell(c.source)
