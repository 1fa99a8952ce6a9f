"""Contravariant Cat-valued functors on a finite category, adjoints by
universal-arrow search, Beck-Chevalley mates and biadjointability verdicts.

Squares are commuting squares of the base written

    w --top--> x
    |left      |right
    z -bottom-> y

with right∘top = bottom∘left.  The canonical pullback of (right, bottom)
gives such a square through `cone_square`.  The bottom edge plays the role
of the I-map and the right edge the role of the P-map.
"""
from __future__ import annotations

import random
from collections import namedtuple
from dataclasses import dataclass, field

from .classes import Verdict, label
from .errors import NoLeftAdjoint, NoRightAdjoint, PrerequisiteMateNotInvertible, SizeGuardExceeded
from .fincat import DEFAULT_GUARD, Functor, NatTransform, identity_functor, vcomp
from .limits import pullback

CSquare = namedtuple("CSquare", "top left right bottom")


def cone_square(cone):
    return CSquare(cone.p1, cone.p2, cone.cospan[0], cone.cospan[1])


def square_commutes(C, sq):
    return C.comp(sq.right, sq.top) == C.comp(sq.bottom, sq.left)


def _idfun(C):
    F = C.cache.get("idfun")
    if F is None:
        F = C.cache["idfun"] = identity_functor(C)
    return F


# adjunctions

@dataclass
class Adjunction:
    """left ⊣ right with unit id ⇒ right∘left and counit left∘right ⇒ id."""

    left: Functor
    right: Functor
    unit: NatTransform
    counit: NatTransform
    triangle_left: bool = False
    triangle_right: bool = False

    @property
    def ok(self):
        return self.triangle_left and self.triangle_right


def triangle_identities(adj):
    """(εL∘Lη = 1_L, Rε∘ηR = 1_R), checked componentwise."""
    L, R = adj.left, adj.right
    A, B = L.target, L.source
    t1 = all(
        A.comp(adj.counit[L.obj[b]], L.mor[adj.unit[b]]) == A.identity[L.obj[b]] for b in B.objects
    )
    t2 = all(
        B.comp(R.mor[adj.counit[a]], adj.unit[R.obj[a]]) == B.identity[R.obj[a]] for a in A.objects
    )
    return t1, t2


def _candidates(u, b, side, seed):
    A, B = u.source, u.target
    objs = list(A.objects)
    if seed is None:
        objs.sort(key=lambda a: 0 if u.obj[a] == b else 1)
    else:
        random.Random(f"{seed}:{b!r}").shuffle(objs)
    for a in objs:
        arrows = list(B.hom(b, u.obj[a]) if side == "left" else B.hom(u.obj[a], b))
        if seed is not None:
            random.Random(f"{seed}:{b!r}:{a!r}").shuffle(arrows)
        for arrow in arrows:
            yield a, arrow


def _universal(u, b, side, seed):
    """A universal arrow b -> u(a) (left) or u(a) -> b (right) with its factorization table."""
    A, B = u.source, u.target
    for a, arrow in _candidates(u, b, side, seed):
        if side == "left":
            if any(len(A.hom(a, a2)) != len(B.hom(b, u.obj[a2])) for a2 in A.objects):
                continue
        elif any(len(A.hom(a2, a)) != len(B.hom(u.obj[a2], b)) for a2 in A.objects):
            continue
        table = {}
        ok = True
        for a2 in A.objects:
            gs = A.hom(a, a2) if side == "left" else A.hom(a2, a)
            for g in gs:
                phi = B.comp(u.mor[g], arrow) if side == "left" else B.comp(arrow, u.mor[g])
                if (a2, phi) in table:
                    ok = False
                    break
                table[(a2, phi)] = g
            if not ok:
                break
        if ok:
            return a, arrow, table
    return None


def _adjoint(u, side, seed):
    A, B = u.source, u.target
    found = {}
    for b in B.objects:
        hit = _universal(u, b, side, seed)
        if hit is None:
            return None, b
        found[b] = hit
    obj = {b: found[b][0] for b in B.objects}
    mor = {}
    for m in B.morphisms:
        b, b2 = B.src[m], B.tgt[m]
        if side == "left":
            mor[m] = found[b][2][(found[b2][0], B.comp(found[b2][1], m))]
        else:
            mor[m] = found[b2][2][(found[b][0], B.comp(m, found[b][1]))]
    G = Functor(B, A, obj, mor, name=("L" if side == "left" else "R") + f"[{u.name}]")
    IdA, IdB = _idfun(A), _idfun(B)
    if side == "left":
        unit = NatTransform(IdB, u.after(G), {b: found[b][1] for b in B.objects}, name="η")
        counit = NatTransform(G.after(u), IdA,
                              {a: found[u.obj[a]][2][(a, B.identity[u.obj[a]])] for a in A.objects}, name="ε")
        adj = Adjunction(G, u, unit, counit)
    else:
        unit = NatTransform(IdA, G.after(u),
                            {a: found[u.obj[a]][2][(a, B.identity[u.obj[a]])] for a in A.objects}, name="η")
        counit = NatTransform(u.after(G), IdB, {b: found[b][1] for b in B.objects}, name="ε")
        adj = Adjunction(u, G, unit, counit)
    adj.triangle_left, adj.triangle_right = triangle_identities(adj)
    return adj, None


def left_adjoint(u, seed=None):
    """Left adjoint of u: A -> B from initial objects of the comma categories (b ↓ u), or None.

    `seed` permutes the search order; any two results are isomorphic.
    """
    if u.is_identity:
        C = u.source
        adj = Adjunction(u, u, _identity_nat(C), _identity_nat(C), True, True)
        return adj
    adj, _ = _adjoint(u, "left", seed)
    return adj


def right_adjoint(u, seed=None):
    """Right adjoint of u: A -> B from terminal objects of (u ↓ b), or None."""
    if u.is_identity:
        C = u.source
        return Adjunction(u, u, _identity_nat(C), _identity_nat(C), True, True)
    adj, _ = _adjoint(u, "right", seed)
    return adj


def adjoint_failure(u, side="left"):
    """The first object of the target with no universal arrow, or None."""
    return _adjoint(u, side, None)[1]


def _identity_nat(C):
    I = _idfun(C)
    return NatTransform(I, I, {x: C.identity[x] for x in C.objects}, name="1")


def left_adjoint_comparison(adj1, adj2):
    """The canonical transformation L1 ⇒ L2 between two left adjoints of the same functor."""
    u = adj1.right
    A, B = u.source, u.target
    comps = {}
    for b in B.objects:
        a1, a2 = adj1.left.obj[b], adj2.left.obj[b]
        target = adj2.unit[b]
        comps[b] = next(g for g in A.hom(a1, a2) if B.comp(u.mor[g], adj1.unit[b]) == target)
    return NatTransform(adj1.left, adj2.left, comps, name="cmp")


def right_adjoint_comparison(adj1, adj2):
    """The canonical transformation R1 ⇒ R2 between two right adjoints of the same functor."""
    u = adj1.left
    A, B = u.source, u.target
    comps = {}
    for b in B.objects:
        r1, r2 = adj1.right.obj[b], adj2.right.obj[b]
        target = adj1.counit[b]
        comps[b] = next(g for g in A.hom(r1, r2) if B.comp(adj2.counit[b], u.mor[g]) == target)
    return NatTransform(adj1.right, adj2.right, comps, name="cmp")


# Cat-valued functors

class CatFunctor:
    """A strict functor C^op -> Cat: fibers per object, restriction functors per morphism.

    `restrict[f]` for f: x -> y is the functor F(y) -> F(x).
    """

    def __init__(self, base, fibers, restrict, name="F", seed=None):
        self.base = base
        self.fibers = fibers
        self.restrict = restrict
        self.name = name
        self.seed = seed
        self._lower = {}
        self._upper = {}

    def fiber(self, x):
        return self.fibers[x]

    def star(self, f):
        return self.restrict[f]

    def lower(self, f):
        """The adjunction f_♯ ⊣ f^*; raises NoLeftAdjoint."""
        if f not in self._lower:
            self._lower[f] = left_adjoint(self.star(f), self.seed)
        adj = self._lower[f]
        if adj is None:
            raise NoLeftAdjoint(f"{label(f)}^*")
        return adj

    def upper(self, f):
        """The adjunction f^* ⊣ f_*; raises NoRightAdjoint."""
        if f not in self._upper:
            self._upper[f] = right_adjoint(self.star(f), self.seed)
        adj = self._upper[f]
        if adj is None:
            raise NoRightAdjoint(f"{label(f)}^*")
        return adj

    def with_seed(self, seed):
        return CatFunctor(self.base, self.fibers, self.restrict, self.name, seed)

    def __repr__(self):
        return f"CatFunctor({self.name} on {self.base.name})"


def strictness(F, guard=DEFAULT_GUARD):
    """Verdict that F(id) = id and F(g∘f) = F(f)∘F(g) hold on the nose."""
    C = F.base
    n = 0
    for x in C.objects:
        R = F.star(C.identity[x])
        X = F.fiber(x)
        n += 1
        if R.source != X or R.target != X or not all(R.obj[a] == a for a in X.objects) or not all(
            R.mor[m] == m for m in X.morphisms
        ):
            return Verdict("strict", False, {"kind": "strict_identity", "object": label(x)}, n)
    cost = 0
    for g, f in C.composable_pairs():
        cost += len(F.fiber(C.tgt[g]).morphisms)
        if cost > guard:
            raise SizeGuardExceeded("strictness check", cost, guard)
        n += 1
        Rgf = F.star(C.comp(g, f))
        Rf, Rg = F.star(f), F.star(g)
        Z = F.fiber(C.tgt[g])
        if any(Rgf.obj[a] != Rf.obj[Rg.obj[a]] for a in Z.objects) or any(
            Rgf.mor[m] != Rf.mor[Rg.mor[m]] for m in Z.morphisms
        ):
            return Verdict("strict", False, {"kind": "strict_composition", "f": label(f), "g": label(g)}, n)
    return Verdict("strict", True, None, n)


def restriction_validity(F, guard=DEFAULT_GUARD):
    """Verdict that every fiber restriction is a functor between the right fibers."""
    C = F.base
    for f in C.morphisms:
        R = F.star(f)
        if R.source != F.fiber(C.tgt[f]) or R.target != F.fiber(C.src[f]) or not R.is_valid(guard):
            return Verdict("restrictions are functors", False, {"kind": "restriction", "f": label(f)}, len(C.morphisms))
    return Verdict("restrictions are functors", True, None, len(C.morphisms))


def transport(F, fiber_maps, name=None):
    """The CatFunctor isomorphic to F obtained by renaming fiber identifiers.

    `fiber_maps[x] = (obj_map, mor_map)`.
    """
    from .fincat import LazyMap, relabel

    C = F.base
    fibers = {x: relabel(F.fiber(x), *fiber_maps[x], name=f"{F.fiber(x).name}'") for x in C.objects}

    def restrict(f):
        R = F.star(f)
        src_o, src_m = fiber_maps[C.tgt[f]]
        tgt_o, tgt_m = fiber_maps[C.src[f]]
        X = F.fiber(C.tgt[f])
        obj = {src_o[a]: tgt_o[R.obj[a]] for a in X.objects}
        mor = {src_m[m]: tgt_m[R.mor[m]] for m in X.morphisms}
        return Functor(fibers[C.tgt[f]], fibers[C.src[f]], obj, mor, name=f"{label(f)}^*")

    return CatFunctor(C, fibers, LazyMap(C.morphisms, restrict), name or f"{F.name}'", F.seed)


def rebase(F, C2, obj_map, mor_map, name=None):
    """F viewed over a relabeled copy C2 of its base."""
    from .fincat import LazyMap

    inv_o = {obj_map[x]: x for x in F.base.objects}
    inv_m = {mor_map[m]: m for m in F.base.morphisms}
    fibers = {y: F.fiber(inv_o[y]) for y in C2.objects}
    restrict = LazyMap(C2.morphisms, lambda m: F.star(inv_m[m]))
    return CatFunctor(C2, fibers, restrict, name or F.name, F.seed)


# Beck-Chevalley mates

@dataclass
class BCWitness:
    kind: str
    square: CSquare
    steps: list
    mate: NatTransform
    invertible: bool
    failing_object: object = None

    def natural(self):
        return self.mate.is_natural()


def _finish(kind, sq, steps):
    mate = vcomp(*reversed(steps))
    bad = mate.non_invertible_at()
    return BCWitness(kind, sq, steps, mate, bad is None, bad)


def bc_sharp(F, sq):
    """BC_♯: top_♯ left^* ⇒ right^* bottom_♯, from the unit of bottom and the counit of top."""
    j, g, f, i = sq
    ai, aj = F.lower(i), F.lower(j)
    isharp, jsharp = ai.left, aj.left
    gs, fs, js = F.star(g), F.star(f), F.star(j)
    src = jsharp.after(gs)
    mid = jsharp.after(js).after(fs).after(isharp)
    tgt = fs.after(isharp)
    X = F.fiber(F.base.src[i])
    step1 = NatTransform(src, mid, {A: jsharp.mor[gs.mor[ai.unit[A]]] for A in X.objects}, name="η")
    step2 = NatTransform(mid, tgt, {A: aj.counit[fs.obj[isharp.obj[A]]] for A in X.objects}, name="ε")
    return _finish("bc_sharp", sq, [step1, step2])


def bc_star(F, sq):
    """BC_*: bottom^* right_* ⇒ left_* top^*, from the unit of left and the counit of right."""
    g, q, p, f = sq
    ap, aq = F.upper(p), F.upper(q)
    pstar, qstar = ap.right, aq.right
    fs, gs, qs = F.star(f), F.star(g), F.star(q)
    src = fs.after(pstar)
    mid = qstar.after(qs).after(fs).after(pstar)
    tgt = qstar.after(gs)
    X = F.fiber(F.base.src[p])
    step1 = NatTransform(src, mid, {A: aq.unit[fs.obj[pstar.obj[A]]] for A in X.objects}, name="η")
    step2 = NatTransform(mid, tgt, {A: qstar.mor[gs.mor[ap.counit[A]]] for A in X.objects}, name="ε")
    return _finish("bc_star", sq, [step1, step2])


def bc_double(F, sq, sharp=None):
    """The double mate bottom_♯ left_* ⇒ right_* top_♯ through the inverse of BC_♯.

    Raises PrerequisiteMateNotInvertible when BC_♯ of the square is not invertible.
    """
    j, q, p, i = sq
    if sharp is None:
        sharp = bc_sharp(F, sq)
    if not sharp.invertible:
        raise PrerequisiteMateNotInvertible(
            f"BC_♯ not invertible at {label(sharp.failing_object)} on {tuple(map(label, sq))}")
    inv = sharp.mate.inverse()
    ai, aj, ap, aq = F.lower(i), F.lower(j), F.upper(p), F.upper(q)
    isharp, jsharp, pstar, qstar = ai.left, aj.left, ap.right, aq.right
    ps, qs = F.star(p), F.star(q)
    src = isharp.after(qstar)
    mid1 = pstar.after(ps).after(isharp).after(qstar)
    mid2 = pstar.after(jsharp).after(qs).after(qstar)
    tgt = pstar.after(jsharp)
    W = F.fiber(F.base.src[j])
    step1 = NatTransform(src, mid1, {A: ap.unit[isharp.obj[qstar.obj[A]]] for A in W.objects}, name="η")
    step2 = NatTransform(mid1, mid2, {A: pstar.mor[inv[qstar.obj[A]]] for A in W.objects}, name="BC♯⁻¹")
    step3 = NatTransform(mid2, tgt, {A: pstar.mor[jsharp.mor[aq.counit[A]]] for A in W.objects}, name="ε")
    return _finish("bc_double", sq, [step1, step2, step3])


def bc_double_symmetric(F, sq, star=None):
    """The other double mate, through the inverse of BC_* of the same square."""
    j, q, p, i = sq
    if star is None:
        star = bc_star(F, sq)
    if not star.invertible:
        raise PrerequisiteMateNotInvertible(
            f"BC_* not invertible at {label(star.failing_object)} on {tuple(map(label, sq))}")
    inv = star.mate.inverse()
    ai, aj, ap, aq = F.lower(i), F.lower(j), F.upper(p), F.upper(q)
    isharp, jsharp, pstar, qstar = ai.left, aj.left, ap.right, aq.right
    js, is_ = F.star(j), F.star(i)
    src = isharp.after(qstar)
    mid1 = isharp.after(qstar).after(js).after(jsharp)
    mid2 = isharp.after(is_).after(pstar).after(jsharp)
    tgt = pstar.after(jsharp)
    W = F.fiber(F.base.src[j])
    step1 = NatTransform(src, mid1, {A: isharp.mor[qstar.mor[aj.unit[A]]] for A in W.objects}, name="η")
    step2 = NatTransform(mid1, mid2, {A: isharp.mor[inv[jsharp.obj[A]]] for A in W.objects}, name="BC*⁻¹")
    step3 = NatTransform(mid2, tgt, {A: ai.counit[pstar.obj[jsharp.obj[A]]] for A in W.objects}, name="ε")
    return _finish("bc_double_symmetric", sq, [step1, step2, step3])


def paste_horizontal(F, outer, first, second):
    """Compare BC_♯ of an outer rectangle with the pasting of BC_♯ of its two halves.

    `first` sits on the bottom edge, `second` on top of it (second.bottom = first.top),
    and `outer` has bottom = first.bottom, right = first.right∘second.right.
    Returns (outer mate, pasted mate).
    """
    C = F.base
    w1, w2, w = bc_sharp(F, first), bc_sharp(F, second), bc_sharp(F, outer)
    fs2 = F.star(second.right)
    gs = F.star(first.left)
    X = F.fiber(C.src[first.bottom])
    comps = {}
    for A in X.objects:
        a = w2.mate[gs.obj[A]]
        b = fs2.mor[w1.mate[A]]
        comps[A] = F.fiber(C.src[second.right]).comp(b, a)
    pasted = NatTransform(w.mate.source, w.mate.target, comps, name="pasted")
    return w.mate, pasted


# biadjointability

@dataclass
class BiadjReport:
    verdicts: list = field(default_factory=list)

    @property
    def passed(self):
        return all(v.ok is not False for v in self.verdicts)

    def failures(self):
        return [v for v in self.verdicts if v.ok is False]

    def verdict(self, name):
        return next(v for v in self.verdicts if v.name == name)


def _sq_labels(sq):
    return {"top": label(sq.top), "left": label(sq.left), "right": label(sq.right), "bottom": label(sq.bottom)}


def _adjoint_verdict(F, K, which, name):
    n = 0
    for m in K:
        n += 1
        try:
            adj = F.lower(m) if which == "lower" else F.upper(m)
        except (NoLeftAdjoint, NoRightAdjoint):
            return Verdict(name, False, {"kind": f"adjoint_{which}", "m": label(m)}, n)
        if not adj.ok:
            return Verdict(name, False, {"kind": f"triangle_{which}", "m": label(m)}, n)
    return Verdict(name, True, None, n)


def _squares(C, K, role):
    """Canonical pullback squares with the given family on the bottom (I) or right (P) edge."""
    for k in K:
        for f in C.into(C.tgt[k]):
            cone = pullback(C, f, k) if role == "bottom" else pullback(C, k, f)
            yield (f, k), (None if cone is None else cone_square(cone))


def _bc_sweep(F, name, kind, squares, build, naturality):
    n = missing = 0
    for cospan, sq in squares:
        if sq is None:
            missing += 1
            continue
        n += 1
        try:
            w = build(sq)
        except (NoLeftAdjoint, NoRightAdjoint) as exc:
            return Verdict(name, False, {"kind": kind, **_sq_labels(sq), "reason": str(exc)}, n, missing)
        except PrerequisiteMateNotInvertible as exc:
            return Verdict(name, False, {"kind": kind, **_sq_labels(sq), "reason": "prerequisite",
                                         "detail": str(exc)}, n, missing)
        if not w.invertible:
            return Verdict(name, False, {"kind": kind, **_sq_labels(sq), "object": label(w.failing_object)},
                           n, missing)
        if naturality and not w.natural():
            return Verdict(name, False, {"kind": kind, **_sq_labels(sq), "reason": "not natural"}, n, missing)
    return Verdict(name, True, None, n, missing)


def check_biadjointable(F, I, P, naturality=False):
    """Left I-adjointability, right P-adjointability and the double condition."""
    C = F.base
    vs = [
        _adjoint_verdict(F, I, "lower", "I-maps have left adjoints"),
        _adjoint_verdict(F, P, "upper", "P-maps have right adjoints"),
    ]
    vs.append(_bc_sweep(F, "left I-adjointable", "bc_sharp", _squares(C, I, "bottom"),
                        lambda sq: bc_sharp(F, sq), naturality))
    vs.append(_bc_sweep(F, "right P-adjointable", "bc_star", _squares(C, P, "right"),
                        lambda sq: bc_star(F, sq), naturality))

    def mixed():
        for p in P:
            for i in C.into(C.tgt[p]):
                if i not in I:
                    continue
                cone = pullback(C, p, i)
                yield (p, i), (None if cone is None else cone_square(cone))

    vs.append(_bc_sweep(F, "double Beck-Chevalley", "bc_double", mixed(), lambda sq: bc_double(F, sq), naturality))
    return BiadjReport(vs)


def fiber_object(X, lab):
    """Resolve a label of an object of X."""
    for a in X.objects:
        if label(a) == lab:
            return a
    raise KeyError(lab)


def recheck_bc(F, witness):
    """Re-run a single Beck-Chevalley witness; True iff it fails again."""
    from .classes import resolve

    C = F.base
    kind = witness["kind"]
    if kind in ("adjoint_lower", "adjoint_upper"):
        m = resolve(C, witness["m"])
        try:
            F.lower(m) if kind == "adjoint_lower" else F.upper(m)
        except (NoLeftAdjoint, NoRightAdjoint):
            return True
        return False
    sq = CSquare(*(resolve(C, witness[k]) for k in ("top", "left", "right", "bottom")))
    build = {"bc_sharp": bc_sharp, "bc_star": bc_star, "bc_double": bc_double}[kind]
    try:
        w = build(F, sq)
    except (NoLeftAdjoint, NoRightAdjoint, PrerequisiteMateNotInvertible):
        return "reason" in witness
    if "object" in witness:
        A = fiber_object(w.mate.domain, witness["object"])
        return not w.mate.codomain.is_iso(w.mate[A])
    return not w.invertible


# transformations

class CatTransform:
    """A strictly natural transformation F ⇒ G of CatFunctors: functors F(x) -> G(x)."""

    def __init__(self, source, target, components, name="α"):
        self.source = source
        self.target = target
        self.components = components
        self.name = name

    def __getitem__(self, x):
        return self.components[x]

    def naturality(self):
        C = self.source.base
        for f in C.morphisms:
            x, y = C.src[f], C.tgt[f]
            lhs = self.target.star(f).after(self[y])
            rhs = self[x].after(self.source.star(f))
            if not lhs.same_as(rhs):
                return Verdict("strictly natural", False, {"kind": "transformation_naturality", "f": label(f)},
                               len(C.morphisms))
        return Verdict("strictly natural", True, None, len(C.morphisms))


def transformation_bc_sharp(alpha, i):
    """i_♯ α_x ⇒ α_y i_♯ for i: x -> y."""
    F, G = alpha.source, alpha.target
    C = F.base
    x, y = C.src[i], C.tgt[i]
    aF, aG = F.lower(i), G.lower(i)
    ax, ay = alpha[x], alpha[y]
    src = aG.left.after(ax)
    mid = aG.left.after(G.star(i)).after(ay).after(aF.left)
    tgt = ay.after(aF.left)
    X = F.fiber(x)
    step1 = NatTransform(src, mid, {A: aG.left.mor[ax.mor[aF.unit[A]]] for A in X.objects}, name="η")
    step2 = NatTransform(mid, tgt, {A: aG.counit[ay.obj[aF.left.obj[A]]] for A in X.objects}, name="ε")
    return _finish("transformation_sharp", (i,), [step1, step2])


def transformation_bc_star(alpha, p):
    """α_y p_* ⇒ p_* α_x for p: x -> y."""
    F, G = alpha.source, alpha.target
    C = F.base
    x, y = C.src[p], C.tgt[p]
    aF, aG = F.upper(p), G.upper(p)
    ax, ay = alpha[x], alpha[y]
    src = ay.after(aF.right)
    mid = aG.right.after(G.star(p)).after(ay).after(aF.right)
    tgt = aG.right.after(ax)
    X = F.fiber(x)
    step1 = NatTransform(src, mid, {A: aG.unit[ay.obj[aF.right.obj[A]]] for A in X.objects}, name="η")
    step2 = NatTransform(mid, tgt, {A: aG.right.mor[ax.mor[aF.counit[A]]] for A in X.objects}, name="ε")
    return _finish("transformation_star", (p,), [step1, step2])


def check_transformation_biadjointable(alpha, I, P):
    vs = [alpha.naturality()]
    for K, name, build, kind in ((I, "left I-adjointable", transformation_bc_sharp, "transformation_sharp"),
                                 (P, "right P-adjointable", transformation_bc_star, "transformation_star")):
        n = 0
        verdict = None
        for m in K:
            n += 1
            try:
                w = build(alpha, m)
            except (NoLeftAdjoint, NoRightAdjoint) as exc:
                verdict = Verdict(name, False, {"kind": kind, "m": label(m), "reason": str(exc)}, n)
                break
            if not w.invertible:
                verdict = Verdict(name, False, {"kind": kind, "m": label(m), "object": label(w.failing_object)}, n)
                break
        vs.append(verdict or Verdict(name, True, None, n))
    return BiadjReport(vs)
