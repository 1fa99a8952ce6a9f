"""Canonical pullbacks, products and terminal objects, plus slice, arrow and
fiber-product category builders.

Pullbacks are found by enumerating cones and testing terminality; one cone
per cospan is chosen (least apex, then least projections) and memoized on the
category, so repeated calls return the identical cone.
"""
from __future__ import annotations

from .errors import NoTerminalObject, TargetMismatch
from .fincat import FinCat, Functor, terminal_object


class PullbackCone:
    """A terminal cone over the cospan (f, g) with projections p1, p2."""

    def __init__(self, category, f, g, apex, p1, p2):
        self.category = category
        self.cospan = (f, g)
        self.apex = apex
        self.p1 = p1
        self.p2 = p2
        self._mediators = {}

    def mediate(self, u, v):
        """The unique m with p1∘m = u and p2∘m = v."""
        try:
            return self._mediators[(u, v)]
        except KeyError:
            pass
        C = self.category
        z = C.src[u]
        found = None
        for m in C.hom(z, self.apex):
            if C.comp(self.p1, m) == u and C.comp(self.p2, m) == v:
                found = m
                break
        if found is None:
            raise ValueError(f"({u}, {v}) is not a cone over {self.cospan}")
        self._mediators[(u, v)] = found
        return found

    def as_tuple(self):
        return (self.apex, self.p1, self.p2)

    def __repr__(self):
        return f"PullbackCone(apex={self.apex!r}, p1={self.p1!r}, p2={self.p2!r})"


def cones(C, f, g):
    """All cones over (f, g), grouped by apex: {z: set of (u, v)}."""
    b, c = C.src[f], C.src[g]
    out = {}
    for z in C.objects:
        s = set()
        gvs = [(v, C.comp(g, v)) for v in C.hom(z, c)]
        for u in C.hom(z, b):
            fu = C.comp(f, u)
            for v, gv in gvs:
                if gv == fu:
                    s.add((u, v))
        out[z] = s
    return out


def _terminal_among(C, cones_at, z0, p1, p2):
    for z, cs in cones_at.items():
        hs = C.hom(z, z0)
        if len(hs) != len(cs):
            return False
        if len({(C.comp(p1, m), C.comp(p2, m)) for m in hs}) != len(hs):
            return False
    return True


def _thin_pullback(C, f, g):
    b, c = C.src[f], C.src[g]
    below = [z for z in C.objects if C.hom(z, b) and C.hom(z, c)]
    for w in below:
        if all(C.hom(z, w) for z in below):
            return w, C.hom(w, b)[0], C.hom(w, c)[0]
    return None


def pullback(C, f, g):
    """The canonical pullback of the cospan b -f-> a <-g- c, or None."""
    if C.tgt[f] != C.tgt[g]:
        raise TargetMismatch(f"cospan ({f}, {g}) has no common target")
    key = ("pullback", f, g)
    memo = C.cache
    if key in memo:
        return memo[key]
    result = None
    if C.is_thin:
        found = _thin_pullback(C, f, g)
        if found is not None:
            result = PullbackCone(C, f, g, *found)
    else:
        cones_at = cones(C, f, g)
        for z0 in C.objects:
            own = cones_at[z0]
            if len(own) != len(C.hom(z0, z0)):
                continue
            for u, v in sorted(own, key=lambda uv: (C.key(uv[0]), C.key(uv[1]))):
                if _terminal_among(C, cones_at, z0, u, v):
                    result = PullbackCone(C, f, g, z0, u, v)
                    break
            if result is not None:
                break
    memo[key] = result
    return result


def is_pullback_square(C, top, left, right, bottom):
    """Whether the commuting square right∘top = bottom∘left is a pullback.

        a --top--> b
        |left      |right
        c -bottom-> d
    """
    if C.comp(right, top) != C.comp(bottom, left):
        return False
    if C.is_thin:
        pb = pullback(C, right, bottom)
        return pb is not None and bool(C.hom(pb.apex, C.src[top])) and bool(C.hom(C.src[top], pb.apex))
    return _terminal_among(C, cones(C, right, bottom), C.src[top], top, left)


def terminal(C):
    key = ("terminal",)
    if key not in C.cache:
        C.cache[key] = terminal_object(C)
    return C.cache[key]


def product(C, a, b):
    """Canonical product a × b as a pullback over the terminal object, or None."""
    t = terminal(C)
    if t is None:
        raise NoTerminalObject(C.name)
    return pullback(C, C.hom(a, t)[0], C.hom(b, t)[0])


def slice(C, a, name=None):
    """The slice C/a and its projection to C."""
    objects = sorted(C.into(a), key=lambda f: (C.okey(C.src[f]), C.key(f)))
    records = []
    for f in objects:
        for f2 in objects:
            for m in C.hom(C.src[f], C.src[f2]):
                if C.comp(f2, m) == f:
                    records.append(((m, f, f2), f, f2))
    ids = {f: (C.identity[C.src[f]], f, f) for f in objects}

    def comp(g, f):
        return (C.comp(g[0], f[0]), f[1], g[2])

    S = FinCat(objects, records, ids, comp, name=name or f"{C.name}/{a}")
    proj = Functor(S, C, {f: C.src[f] for f in objects}, {r[0]: r[0][0] for r in records}, name="proj")
    return S, proj


def arrow_category_on_family(C, members, name=None):
    """The full subcategory of the arrow category on the given morphisms, with ev0 and ev1."""
    members = set(members)
    objects = [m for m in C.morphisms if m in members]
    records = []
    for n in objects:
        for n2 in objects:
            for u in C.hom(C.src[n], C.src[n2]):
                n2u = C.comp(n2, u)
                for v in C.hom(C.tgt[n], C.tgt[n2]):
                    if C.comp(v, n) == n2u:
                        records.append(((n, n2, u, v), n, n2))
    ids = {n: (n, n, C.identity[C.src[n]], C.identity[C.tgt[n]]) for n in objects}

    def comp(g, f):
        return (f[0], g[1], C.comp(g[2], f[2]), C.comp(g[3], f[3]))

    Ar = FinCat(objects, records, ids, comp, name=name or f"Ar({C.name})")
    ev0 = Functor(Ar, C, {n: C.src[n] for n in objects}, {r[0]: r[0][2] for r in records}, name="ev0")
    ev1 = Functor(Ar, C, {n: C.tgt[n] for n in objects}, {r[0]: r[0][3] for r in records}, name="ev1")
    return Ar, ev0, ev1


class FiberProduct:
    def __init__(self, category, left, right):
        self.category = category
        self.left = left
        self.right = right


def fiber_product_categories(F, G, name=None):
    """The strict fiber product A ×_C B of F: A → C and G: B → C."""
    C = F.target
    if G.target is not C and G.target != C:
        raise TargetMismatch("fiber product needs a common target")
    A, B = F.source, G.source
    objects = [(a, b) for a in A.objects for b in B.objects if F.obj[a] == G.obj[b]]
    by_image = {}
    for v in B.morphisms:
        by_image.setdefault(G.mor[v], []).append(v)
    records = []
    for u in A.morphisms:
        for v in by_image.get(F.mor[u], ()):
            records.append(((u, v), (A.src[u], B.src[v]), (A.tgt[u], B.tgt[v])))
    records.sort(key=lambda r: (A.key(r[0][0]), B.key(r[0][1])))
    ids = {(a, b): (A.identity[a], B.identity[b]) for a, b in objects}

    def comp(g, f):
        return (A.comp(g[0], f[0]), B.comp(g[1], f[1]))

    K = FinCat(objects, records, ids, comp, name=name or f"{A.name}×{B.name}")
    left = Functor(K, A, {o: o[0] for o in objects}, {r[0]: r[0][0] for r in records}, name="pr1")
    right = Functor(K, B, {o: o[1] for o in objects}, {r[0]: r[0][1] for r in records}, name="pr2")
    return FiberProduct(K, left, right)
