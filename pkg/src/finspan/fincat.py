"""Finite categories, functors and natural transformations.

Morphism equality is identifier equality and every commutation check is
exact.  Ties are broken by a canonical order: objects in declaration order,
morphisms identity-first inside each hom-set and then in declaration order.
"""
from __future__ import annotations

import itertools
from collections.abc import Mapping

from .errors import (
    BadIdentity,
    DanglingEndpoint,
    InvalidCategory,
    MissingComposite,
    NonAssociative,
    SizeGuardExceeded,
    TargetMismatch,
)

DEFAULT_GUARD = 10**6


class LazyMap(Mapping):
    """Read-only mapping over fixed keys whose values are computed on demand."""

    def __init__(self, keys, fn):
        self._keys = keys
        self._fn = fn
        self._cache = {}

    def __getitem__(self, key):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = self._fn(key)
            return value

    def __iter__(self):
        return iter(self._keys)

    def __len__(self):
        return len(self._keys)


class FinCat:
    """A finite category with an explicit (or lazily computed) composition.

    `compose` is either a dict {(g, f): g∘f} or a callable (g, f) -> g∘f.
    The constructor does not validate; use `validate_category` for raw input.
    """

    def __init__(self, objects, morphisms, identities, compose, name="C"):
        self.name = name
        self.objects = tuple(objects)
        self._oindex = {x: k for k, x in enumerate(self.objects)}
        records = [tuple(r) for r in morphisms]
        self.morphisms = tuple(r[0] for r in records)
        self.src = {m: s for m, s, _ in records}
        self.tgt = {m: t for m, _, t in records}
        self._mindex = {m: k for k, m in enumerate(self.morphisms)}
        self.identity = dict(identities)
        self._ids = set(self.identity.values())
        if callable(compose):
            self._fn = compose
            self._table = {}
        else:
            self._fn = None
            self._table = dict(compose)
        self._hom = {}
        self._out = {}
        self._in = {}
        for m in self.morphisms:
            s, t = self.src[m], self.tgt[m]
            self._hom.setdefault((s, t), []).append(m)
            self._out.setdefault(s, []).append(m)
            self._in.setdefault(t, []).append(m)
        for table in (self._hom, self._out, self._in):
            for k, ms in table.items():
                table[k] = tuple(sorted(ms, key=self.key))
        self._iso_cache = {}
        self._thin = None
        self.cache = {}

    # ordering
    def key(self, m):
        return (0 if m in self._ids else 1, self._mindex[m])

    def okey(self, x):
        return self._oindex[x]

    # structure
    def hom(self, a, b):
        return self._hom.get((a, b), ())

    def out_of(self, a):
        return self._out.get(a, ())

    def into(self, b):
        return self._in.get(b, ())

    def is_identity(self, m):
        return m in self._ids

    def has_object(self, x):
        return x in self._oindex

    def has_morphism(self, m):
        return m in self._mindex

    def comp(self, g, f):
        """g∘f."""
        try:
            return self._table[(g, f)]
        except KeyError:
            pass
        if self._fn is None:
            raise MissingComposite(g, f)
        if f in self._ids:
            return g
        if g in self._ids:
            return f
        if self.tgt[f] != self.src[g]:
            raise MissingComposite(g, f, detail="not composable")
        h = self._fn(g, f)
        self._table[(g, f)] = h
        return h

    def chain(self, *ms):
        """Right-to-left composite: chain(h, g, f) = h∘g∘f."""
        result = ms[-1]
        for m in reversed(ms[:-1]):
            result = self.comp(m, result)
        return result

    @property
    def is_thin(self):
        if self._thin is None:
            self._thin = all(len(v) <= 1 for v in self._hom.values())
        return self._thin

    def inverse(self, m):
        """Two-sided inverse of m, or None."""
        try:
            return self._iso_cache[m]
        except KeyError:
            pass
        result = None
        s, t = self.src[m], self.tgt[m]
        for n in self.hom(t, s):
            if self.comp(n, m) == self.identity[s] and self.comp(m, n) == self.identity[t]:
                result = n
                break
        self._iso_cache[m] = result
        return result

    def is_iso(self, m):
        return self.inverse(m) is not None

    def isos(self, a, b):
        return [m for m in self.hom(a, b) if self.is_iso(m)]

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self.out_of(self.tgt[f]):
                yield g, f

    def table(self):
        """The full composition table (forces lazy composition)."""
        return {(g, f): self.comp(g, f) for g, f in self.composable_pairs()}

    def size(self):
        return len(self.objects), len(self.morphisms)

    def records(self):
        return [(m, self.src[m], self.tgt[m]) for m in self.morphisms]

    def __repr__(self):
        return f"FinCat({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        if self.objects != other.objects or self.morphisms != other.morphisms:
            return False
        if self.src != other.src or self.tgt != other.tgt or self.identity != other.identity:
            return False
        return all(other.comp(g, f) == self.comp(g, f) for g, f in self.composable_pairs())

    def __hash__(self):
        return hash((self.objects, self.morphisms))


# validation

def _triple_bound(C):
    total = 0
    for (b, c), ms in C._hom.items():
        total += len(C.into(b)) * len(ms) * len(C.out_of(c))
    return total


def category_violations(C, guard=DEFAULT_GUARD, first_only=False):
    """All violated axioms of C, each naming its witnesses."""
    out = []

    def add(v):
        out.append(v)
        return first_only

    seen = set()
    for m in C.morphisms:
        if m in seen:
            if add(DanglingEndpoint(m, detail="duplicate morphism identifier")):
                return out
        seen.add(m)
        for end in (C.src[m], C.tgt[m]):
            if not C.has_object(end):
                if add(DanglingEndpoint(m, end)):
                    return out
    for x in C.objects:
        i = C.identity.get(x)
        if i is None or not C.has_morphism(i):
            if add(BadIdentity(x, detail="missing identity")):
                return out
            continue
        if C.src[i] != x or C.tgt[i] != x:
            if add(BadIdentity(x, detail="identity is not an endomorphism")):
                return out
    if out:
        return out
    table = C._table if C._fn is None else None

    def lookup(g, f):
        if table is None:
            return C.comp(g, f)
        return table.get((g, f))

    for g, f in C.composable_pairs():
        h = lookup(g, f)
        if h is None or not C.has_morphism(h):
            if add(MissingComposite(g, f)):
                return out
        elif C.src[h] != C.src[f] or C.tgt[h] != C.tgt[g]:
            if add(MissingComposite(g, f, detail=f"composite {h} has wrong endpoints")):
                return out
    if out:
        return out
    for x in C.objects:
        i = C.identity[x]
        for f in C.into(x):
            if lookup(i, f) != f:
                if add(BadIdentity(x, detail=f"id∘{f} != {f}")):
                    return out
        for g in C.out_of(x):
            if lookup(g, i) != g:
                if add(BadIdentity(x, detail=f"{g}∘id != {g}")):
                    return out
    if out:
        return out
    bound = _triple_bound(C)
    if bound > guard:
        raise SizeGuardExceeded("associativity triples", bound, guard)
    for f in C.morphisms:
        for g in C.out_of(C.tgt[f]):
            gf = lookup(g, f)
            for h in C.out_of(C.tgt[g]):
                if lookup(h, gf) != lookup(lookup(h, g), f):
                    if add(NonAssociative(f, g, h)):
                        return out
    return out


def validate_category(objects, morphisms, identities, compose, name="C", guard=DEFAULT_GUARD):
    """Build a FinCat from a raw description, raising InvalidCategory on violations."""
    C = FinCat(objects, morphisms, identities, compose, name=name)
    problems = category_violations(C, guard)
    if problems:
        raise InvalidCategory(problems)
    return C


def opposite(C, name=None):
    """C^op: same identifiers, endpoints swapped, composition reversed."""
    records = [(m, C.tgt[m], C.src[m]) for m in C.morphisms]
    op = FinCat(C.objects, records, C.identity, lambda g, f: C.comp(f, g), name=name or f"{C.name}^op")
    return op


def full_subcategory(C, objects, name=None):
    keep = set(objects)
    objs = [x for x in C.objects if x in keep]
    records = [r for r in C.records() if r[1] in keep and r[2] in keep]
    return FinCat(objs, records, {x: C.identity[x] for x in objs}, C.comp, name=name or f"{C.name}|sub")


def discrete(objects, name="disc"):
    objects = list(objects)
    ids = {x: ("id", x) for x in objects}
    return FinCat(objects, [(i, x, x) for x, i in ids.items()], ids, {(i, i): i for i in ids.values()}, name=name)


def poset_category(elements, leq, name="poset"):
    """The thin category of a finite preorder; morphism ids are pairs (a, b) for a ≤ b."""
    elements = list(elements)
    records = [((a, b), a, b) for a in elements for b in elements if leq(a, b)]
    return FinCat(elements, records, {a: (a, a) for a in elements}, lambda g, f: (f[0], g[1]), name=name)


def interval(n):
    """The poset [n] = {0 < 1 < ... < n}."""
    return poset_category(range(n + 1), lambda a, b: a <= b, name=f"[{n}]")


def product_category(A, B, name=None):
    objects = [(a, b) for a in A.objects for b in B.objects]
    records = [((f, g), (A.src[f], B.src[g]), (A.tgt[f], B.tgt[g])) for f in A.morphisms for g in B.morphisms]
    ids = {(a, b): (A.identity[a], B.identity[b]) for a, b in objects}

    def comp(v, u):
        return (A.comp(v[0], u[0]), B.comp(v[1], u[1]))

    return FinCat(objects, records, ids, comp, name=name or f"{A.name}×{B.name}")


def relabel(C, obj_map, mor_map, name=None):
    """Transport C along bijections of identifiers."""
    inv = {mor_map[m]: m for m in C.morphisms}
    records = [(mor_map[m], obj_map[C.src[m]], obj_map[C.tgt[m]]) for m in C.morphisms]
    ids = {obj_map[x]: mor_map[C.identity[x]] for x in C.objects}
    return FinCat(
        [obj_map[x] for x in C.objects],
        records,
        ids,
        lambda g, f: mor_map[C.comp(inv[g], inv[f])],
        name=name or f"{C.name}'",
    )


# functors

class Functor:
    """A functor given by object and morphism assignments (dicts or lazy maps)."""

    def __init__(self, source, target, obj, mor, name="F"):
        self.source = source
        self.target = target
        self.obj = obj
        self.mor = mor
        self.name = name
        self.is_identity = False

    def after(self, other):
        """self∘other."""
        if other.target is not self.source and other.target != self.source:
            raise TargetMismatch(f"{self.name}∘{other.name}")
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        obj = {x: self.obj[other.obj[x]] for x in other.source.objects}
        outer, inner = self.mor, other.mor
        mor = LazyMap(other.source.morphisms, lambda m: outer[inner[m]])
        return Functor(other.source, self.target, obj, mor, name=f"{self.name}∘{other.name}")

    def violations(self, guard=DEFAULT_GUARD):
        A, B = self.source, self.target
        out = []
        for x in A.objects:
            if not B.has_object(self.obj[x]):
                out.append(("object", x))
        for m in A.morphisms:
            fm = self.mor[m]
            if not B.has_morphism(fm) or B.src[fm] != self.obj[A.src[m]] or B.tgt[fm] != self.obj[A.tgt[m]]:
                out.append(("endpoints", m))
        if out:
            return out
        for x in A.objects:
            if self.mor[A.identity[x]] != B.identity[self.obj[x]]:
                out.append(("identity", x))
        pairs = sum(len(A.out_of(A.tgt[f])) for f in A.morphisms)
        if pairs > guard:
            raise SizeGuardExceeded("functor composition pairs", pairs, guard)
        for g, f in A.composable_pairs():
            if self.mor[A.comp(g, f)] != B.comp(self.mor[g], self.mor[f]):
                out.append(("composition", (g, f)))
                break
        return out

    def is_valid(self, guard=DEFAULT_GUARD):
        return not self.violations(guard)

    def same_as(self, other):
        if self is other:
            return True
        if self.source != other.source or self.target != other.target:
            return False
        if any(self.obj[x] != other.obj[x] for x in self.source.objects):
            return False
        return all(self.mor[m] == other.mor[m] for m in self.source.morphisms)

    def __repr__(self):
        return f"Functor({self.name}: {self.source.name} -> {self.target.name})"


def identity_functor(C):
    F = Functor(C, C, {x: x for x in C.objects}, LazyMap(C.morphisms, lambda m: m), name=f"id_{C.name}")
    F.is_identity = True
    return F


def constant_functor(A, B, b, name=None):
    i = B.identity[b]
    return Functor(A, B, {x: b for x in A.objects}, {m: i for m in A.morphisms}, name=name or f"const_{b}")


def is_isomorphism(F):
    """True iff F is a valid functor bijective on objects and on every hom-set."""
    A, B = F.source, F.target
    if len(A.objects) != len(B.objects) or len(A.morphisms) != len(B.morphisms):
        return False
    if len({F.obj[x] for x in A.objects}) != len(A.objects):
        return False
    if len({F.mor[m] for m in A.morphisms}) != len(A.morphisms):
        return False
    return F.is_valid()


class NatTransform:
    """A natural transformation source ⇒ target with explicit components."""

    def __init__(self, source, target, components, name="α"):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    @property
    def domain(self):
        return self.source.source

    @property
    def codomain(self):
        return self.source.target

    def __getitem__(self, x):
        return self.components[x]

    def naturality_failures(self, limit=1):
        A, B = self.domain, self.codomain
        F, G = self.source, self.target
        bad = []
        for m in A.morphisms:
            x, y = A.src[m], A.tgt[m]
            if B.comp(G.mor[m], self.components[x]) != B.comp(self.components[y], F.mor[m]):
                bad.append(m)
                if len(bad) >= limit:
                    break
        return bad

    def is_natural(self):
        A, B = self.domain, self.codomain
        for x in A.objects:
            c = self.components[x]
            if B.src[c] != self.source.obj[x] or B.tgt[c] != self.target.obj[x]:
                return False
        return not self.naturality_failures()

    def non_invertible_at(self):
        """First object whose component has no inverse, or None."""
        B = self.codomain
        for x in self.domain.objects:
            if not B.is_iso(self.components[x]):
                return x
        return None

    def is_iso(self):
        return self.non_invertible_at() is None

    def inverse(self):
        B = self.codomain
        comps = {}
        for x, c in self.components.items():
            inv = B.inverse(c)
            if inv is None:
                raise ValueError(f"component at {x} is not invertible")
            comps[x] = inv
        return NatTransform(self.target, self.source, comps, name=f"{self.name}^-1")

    def same_as(self, other):
        return self.components == other.components

    def is_identity(self):
        B = self.codomain
        return all(B.is_identity(c) for c in self.components.values())

    def __repr__(self):
        return f"NatTransform({self.name}: {self.source.name} => {self.target.name})"


def identity_nat(F):
    B = F.target
    return NatTransform(F, F, {x: B.identity[F.obj[x]] for x in F.source.objects}, name=f"1_{F.name}")


def vcomp(*alphas):
    """Vertical composite, right to left: vcomp(γ, β, α) = γ∘β∘α."""
    result = alphas[-1]
    for beta in reversed(alphas[:-1]):
        alpha = result
        for x in alpha.domain.objects:
            if alpha.target.obj[x] != beta.source.obj[x]:
                raise TargetMismatch(f"cannot compose {beta.name} after {alpha.name} at {x}")
        B = alpha.codomain
        comps = {x: B.comp(beta.components[x], alpha.components[x]) for x in alpha.domain.objects}
        result = NatTransform(alpha.source, beta.target, comps, name=f"{beta.name}·{alpha.name}")
    return result


def whisker_post(H, alpha):
    """H∘α."""
    comps = {x: H.mor[c] for x, c in alpha.components.items()}
    return NatTransform(H.after(alpha.source), H.after(alpha.target), comps, name=f"{H.name}{alpha.name}")


def whisker_pre(alpha, K):
    """α∘K."""
    comps = {y: alpha.components[K.obj[y]] for y in K.source.objects}
    return NatTransform(alpha.source.after(K), alpha.target.after(K), comps, name=f"{alpha.name}{K.name}")


def whisker(H, alpha, K):
    """H∘α∘K, where either whisker may be None."""
    if K is not None:
        alpha = whisker_pre(alpha, K)
    if H is not None:
        alpha = whisker_post(H, alpha)
    return alpha


def hcomp_nat(beta, alpha):
    """Horizontal composite β*α : G∘F ⇒ G'∘F' for α: F ⇒ F', β: G ⇒ G'."""
    C = beta.codomain
    comps = {}
    for x in alpha.domain.objects:
        comps[x] = C.comp(beta.target.mor[alpha.components[x]], beta.components[alpha.source.obj[x]])
    return NatTransform(beta.source.after(alpha.source), beta.target.after(alpha.target), comps, name=f"{beta.name}*{alpha.name}")


# universal objects and searches

def initial_object(C):
    """Least initial object, or None."""
    for x in C.objects:
        if all(len(C.hom(x, y)) == 1 for y in C.objects):
            return x
    return None


def terminal_object(C):
    """Least terminal object, or None."""
    for x in C.objects:
        if all(len(C.hom(y, x)) == 1 for y in C.objects):
            return x
    return None


class CommaCat:
    """The comma category (F ↓ G) with its two projections."""

    def __init__(self, category, left, right):
        self.category = category
        self.left = left
        self.right = right


def comma_category(F, G, name=None):
    C = F.target
    if G.target is not C and G.target != C:
        raise TargetMismatch("comma_category needs a common target")
    A, B = F.source, G.source
    objects = [(a, b, phi) for a in A.objects for b in B.objects for phi in C.hom(F.obj[a], G.obj[b])]
    records = []
    for o in objects:
        a, b, phi = o
        for o2 in objects:
            a2, b2, phi2 = o2
            for u in A.hom(a, a2):
                fu = F.mor[u]
                for v in B.hom(b, b2):
                    if C.comp(G.mor[v], phi) == C.comp(phi2, fu):
                        records.append(((o, o2, u, v), o, o2))
    ids = {o: (o, o, A.identity[o[0]], B.identity[o[1]]) for o in objects}

    def comp(g, f):
        return (f[0], g[1], A.comp(g[2], f[2]), B.comp(g[3], f[3]))

    K = FinCat(objects, records, ids, comp, name=name or f"({F.name}↓{G.name})")
    left = Functor(K, A, {o: o[0] for o in objects}, {r[0]: r[0][2] for r in records}, name="pr_left")
    right = Functor(K, B, {o: o[1] for o in objects}, {r[0]: r[0][3] for r in records}, name="pr_right")
    return CommaCat(K, left, right)


def _assignments(F, G, iso_only=False):
    """Yield natural transformations F ⇒ G in lexicographic order of components."""
    A, B = F.source, F.target
    objs = list(A.objects)
    pos = {x: k for k, x in enumerate(objs)}
    # constraints checked once both endpoints are assigned
    checks = {k: [] for k in range(len(objs))}
    for m in A.morphisms:
        k = max(pos[A.src[m]], pos[A.tgt[m]])
        checks[k].append(m)
    cands = []
    for x in objs:
        hs = B.hom(F.obj[x], G.obj[x])
        cands.append([h for h in hs if B.is_iso(h)] if iso_only else list(hs))
    comps = {}

    def rec(k):
        if k == len(objs):
            yield dict(comps)
            return
        x = objs[k]
        for c in cands[k]:
            comps[x] = c
            ok = True
            for m in checks[k]:
                s, t = A.src[m], A.tgt[m]
                if B.comp(G.mor[m], comps[s]) != B.comp(comps[t], F.mor[m]):
                    ok = False
                    break
            if ok:
                yield from rec(k + 1)
        comps.pop(x, None)

    yield from rec(0)


def nat_transforms(F, G):
    for comps in _assignments(F, G):
        yield NatTransform(F, G, comps)


def nat_iso_search(F, G):
    """The lexicographically least natural isomorphism F ⇒ G, or None."""
    for comps in _assignments(F, G, iso_only=True):
        return NatTransform(F, G, comps, name="iso")
    return None


def enumerate_functors(A, B):
    """All functors A → B, in lexicographic order of assignments."""
    objs = list(A.objects)
    nonid = [m for m in A.morphisms if not A.is_identity(m)]
    pos = {m: k for k, m in enumerate(nonid)}
    constraints = {k: [] for k in range(len(nonid))}
    for g, f in A.composable_pairs():
        if A.is_identity(g) or A.is_identity(f):
            continue
        h = A.comp(g, f)
        ks = [pos[g], pos[f]] + ([pos[h]] if h in pos else [])
        constraints[max(ks)].append((g, f, h))
    for ob in itertools.product(B.objects, repeat=len(objs)):
        omap = dict(zip(objs, ob))
        mmap = {A.identity[x]: B.identity[omap[x]] for x in objs}

        def rec(k):
            if k == len(nonid):
                yield dict(mmap)
                return
            m = nonid[k]
            for c in B.hom(omap[A.src[m]], omap[A.tgt[m]]):
                mmap[m] = c
                if all(mmap[h] == B.comp(mmap[g], mmap[f]) for g, f, h in constraints[k]):
                    yield from rec(k + 1)
            mmap.pop(m, None)

        for mm in rec(0):
            yield Functor(A, B, dict(omap), mm)


def functor_category(A, B, guard=DEFAULT_GUARD, name=None):
    """Fun(A, B): objects are functors, morphisms natural transformations."""
    bound = len(B.objects) ** len(A.objects) * len(B.morphisms) ** len(A.morphisms)
    if bound > guard:
        raise SizeGuardExceeded("functor category candidates", bound, guard)
    functors = list(enumerate_functors(A, B))
    objects = list(range(len(functors)))
    records = []
    ids = {}
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            for comps in _assignments(F, G):
                key = (i, j, tuple(comps[x] for x in A.objects))
                records.append((key, i, j))
                if i == j and all(B.is_identity(c) for c in comps.values()):
                    ids[i] = key

    def comp(g, f):
        return (f[0], g[1], tuple(B.comp(b, a) for a, b in zip(f[2], g[2])))

    K = FinCat(objects, records, ids, comp, name=name or f"Fun({A.name},{B.name})")
    K.functors = functors
    return K
