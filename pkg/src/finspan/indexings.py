"""Example Cat-valued functors used as coefficient systems."""
from __future__ import annotations

from math import gcd

from .catfun import CatFunctor, CatTransform
from .fincat import Functor, LazyMap, poset_category


def subset_poset(n):
    """Subsets of {0..n-1} as sorted tuples, ordered by inclusion; listed by bitmask."""
    elems = [tuple(v for v in range(n) if mask >> v & 1) for mask in range(2**n)]
    return poset_category(elems, lambda a, b: set(a) <= set(b), name=f"Sub({n})")


def subset_indexing(C):
    """X ↦ subsets of X, f ↦ preimage, over a category of finite sets with `functions`."""
    fibers = {x: subset_poset(x) for x in C.objects}

    def restrict(f):
        k, m, images = C.functions[f]
        Y, X = fibers[m], fibers[k]

        def pre(S):
            return tuple(v for v in range(k) if images[v] in S)

        obj = {S: pre(S) for S in Y.objects}
        mor = LazyMap(Y.morphisms, lambda st: (pre(st[0]), pre(st[1])))
        return Functor(Y, X, obj, mor, name=f"{f}^*")

    return CatFunctor(C, fibers, LazyMap(C.morphisms, restrict), name="Sub")


def exists_along(C, f, S):
    """Elementwise image of S along f."""
    return tuple(sorted({C.functions[f][2][v] for v in S}))


def forall_along(C, f, S):
    """Elementwise largest T with preimage of T inside S."""
    k, m, images = C.functions[f]
    return tuple(w for w in range(m) if all(v in S for v in range(k) if images[v] == w))


def downset_indexing(C):
    """Divisor lattice self-indexing: d ↦ divisors of d, (a | b) ↦ gcd(-, a)."""
    fibers = {}
    for d in C.objects:
        elems = [x for x in C.objects if d % x == 0]
        fibers[d] = poset_category(elems, lambda a, b: b % a == 0, name=f"↓{d}")

    def restrict(m):
        a, b = C.src[m], C.tgt[m]
        Y, X = fibers[b], fibers[a]
        obj = {x: gcd(x, a) for x in Y.objects}
        mor = LazyMap(Y.morphisms, lambda st: (gcd(st[0], a), gcd(st[1], a)))
        return Functor(Y, X, obj, mor, name=f"{m}^*")

    return CatFunctor(C, fibers, LazyMap(C.morphisms, restrict), name="Down")


def constant_top(F):
    """The endo-transformation of the subset indexing sending every subset to the whole set."""
    comps = {}
    for x in F.base.objects:
        X = F.fiber(x)
        top = X.objects[-1]
        comps[x] = Functor(X, X, {S: top for S in X.objects}, LazyMap(X.morphisms, lambda m, t=top: (t, t)),
                           name=f"top_{x}")
    return CatTransform(F, F, comps, name="top")


def identity_transformation(F):
    comps = {}
    for x in F.base.objects:
        X = F.fiber(x)
        comps[x] = Functor(X, X, {a: a for a in X.objects}, LazyMap(X.morphisms, lambda m: m), name=f"id_{x}")
    return CatTransform(F, F, comps, name="id")
