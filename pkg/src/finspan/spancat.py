"""Adequate triples, span categories, twisted arrow categories and the
comparison between chains of spans and Tw[n]-shaped diagrams.

A span x <- z -> y is stored as the pair of legs (left, right).  Spans are
identified up to isomorphism of the apex commuting with both legs; each class
is represented by its least member (apex first, then left leg, then right leg
in the canonical order of the host).
"""
from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field

from .classes import Verdict, is_wide, closed_under_composition, label
from .errors import MissingPullback, SizeGuardExceeded
from .fincat import DEFAULT_GUARD, FinCat, Functor, LazyMap, poset_category
from .limits import is_pullback_square, pullback

Span = namedtuple("Span", "left right")


def apex(C, s):
    return C.src[s.left]


def span_source(C, s):
    return C.tgt[s.left]


def span_target(C, s):
    return C.tgt[s.right]


def normalize_span(C, l, r):
    """(canonical left, canonical right, phi) with canonical legs = raw legs ∘ phi."""
    key = ("nspan", l, r)
    memo = C.cache
    if key in memo:
        return memo[key]
    z = C.src[l]
    result = None
    for z2 in C.objects:
        isos = C.isos(z2, z)
        if not isos:
            continue
        best = None
        for phi in isos:
            cand = (C.key(C.comp(l, phi)), C.key(C.comp(r, phi)))
            if best is None or cand < best[0]:
                best = (cand, phi)
        phi = best[1]
        result = (C.comp(l, phi), C.comp(r, phi), phi)
        break
    memo[key] = result
    return result


def span_class(C, s):
    l, r, _ = normalize_span(C, s.left, s.right)
    return Span(l, r)


def span_orbit(C, s):
    """All spans isomorphic to s."""
    z = C.src[s.left]
    out = set()
    for z2 in C.objects:
        for phi in C.isos(z2, z):
            out.add(Span(C.comp(s.left, phi), C.comp(s.right, phi)))
    return out


@dataclass
class AdTriple:
    host: FinCat
    backward: object
    forward: object
    certificate: dict = field(default_factory=dict)


@dataclass
class AdequacyFailure:
    reason: str
    witness: dict


def check_adequate(C, B, F):
    """An AdTriple with certificate, or an AdequacyFailure naming a cospan."""
    for K, role in ((B, "backward"), (F, "forward")):
        for v in (is_wide(K), closed_under_composition(K)):
            if not v.ok:
                w = dict(v.witness)
                w["role"] = role
                return AdequacyFailure(f"{role} family not {v.name}", w)
    n = 0
    for f in F:
        for b in C.into(C.tgt[f]):
            if b not in B:
                continue
            n += 1
            pb = pullback(C, f, b)
            if pb is None:
                return AdequacyFailure("missing pullback", {"kind": "adequacy", "forward": label(f), "backward": label(b)})
            if pb.p2 not in F or pb.p1 not in B:
                return AdequacyFailure("base change leaves the family",
                                       {"kind": "adequacy", "forward": label(f), "backward": label(b)})
    return AdTriple(C, B, F, {"cospans": n})


def compose_spans(C, s, t):
    """Class of t∘s for s: x -> y and t: y -> w."""
    pb = pullback(C, s.right, t.left)
    if pb is None:
        raise MissingPullback(s.right, t.left)
    l, r, _ = normalize_span(C, C.comp(s.left, pb.p1), C.comp(t.right, pb.p2))
    return Span(l, r)


def span_key(C, s):
    return (C.okey(C.tgt[s.left]), C.okey(C.tgt[s.right]), C.okey(C.src[s.left]), C.key(s.left), C.key(s.right))


def build_span_category(T, guard=DEFAULT_GUARD, name=None):
    """Span(C, B, F): objects of C, morphisms canonical span classes."""
    C, B, F = T.host, T.backward, T.forward
    raw = sum(
        sum(1 for l in C.out_of(z) if l in B) * sum(1 for r in C.out_of(z) if r in F) for z in C.objects
    )
    if raw > guard:
        raise SizeGuardExceeded("raw spans", raw, guard)
    classes = set()
    for z in C.objects:
        rs = [r for r in C.out_of(z) if r in F]
        for l in C.out_of(z):
            if l not in B:
                continue
            for r in rs:
                classes.add(span_class(C, Span(l, r)))
    morphisms = sorted(classes, key=lambda s: span_key(C, s))
    records = [(s, C.tgt[s.left], C.tgt[s.right]) for s in morphisms]
    ids = {x: span_class(C, Span(C.identity[x], C.identity[x])) for x in C.objects}

    def comp(t, s):
        return compose_spans(C, s, t)

    S = FinCat(C.objects, records, ids, comp, name=name or f"Span({C.name},{B.name},{F.name})")
    S.triple = T
    return S


def span_functor(S1, S2, G, name="Span(G)"):
    """Span(G): S1 -> S2 for a functor G between the hosts preserving both families."""
    C2 = S2.triple.host

    def on_mor(s):
        return span_class(C2, Span(G.mor[s.left], G.mor[s.right]))

    return Functor(S1, S2, {x: G.obj[x] for x in S1.objects}, LazyMap(S1.morphisms, on_mor), name=name)


def forward_comparison(C, S):
    """C -> Span(C, iso, all), f |-> (id, f)."""
    mor = {f: span_class(C, Span(C.identity[C.src[f]], f)) for f in C.morphisms}
    return Functor(C, S, {x: x for x in C.objects}, mor, name="fwd")


def backward_comparison(Cop, C, S):
    """C^op -> Span(C, all, iso), f |-> (f, id)."""
    mor = {f: span_class(C, Span(f, C.identity[C.src[f]])) for f in Cop.morphisms}
    return Functor(Cop, S, {x: x for x in Cop.objects}, mor, name="bwd")


# twisted arrow categories

class TwCat:
    def __init__(self, n, category, forward, backward):
        self.n = n
        self.category = category
        self.forward = forward
        self.backward = backward


def tw(n):
    """Tw[n]: pairs (i ≤ j), with (i,j) -> (i',j') iff i ≤ i' and j' ≤ j.

    Forward arrows keep j fixed, backward arrows keep i fixed.
    """
    objs = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    P = poset_category(objs, lambda a, b: a[0] <= b[0] and b[1] <= a[1], name=f"Tw[{n}]")
    fwd = [m for m in P.morphisms if m[0][1] == m[1][1]]
    bwd = [m for m in P.morphisms if m[0][0] == m[1][0]]
    from .classes import MorphismFamily

    return TwCat(n, P, MorphismFamily(P, fwd, "Tw^f"), MorphismFamily(P, bwd, "Tw^b"))


# Tw/Span comparison

@dataclass
class SegalReport:
    n: int
    count_a: int
    count_b: int
    method: str
    note: str = ""

    @property
    def equal(self):
        return self.count_a == self.count_b


SEGAL_NOTE = (
    "functors [n] -> Span counted up to objectwise equality of span classes; "
    "Tw[n]-diagrams counted up to natural isomorphisms that are identities on the "
    "diagonal objects (i <= i)"
)


def raw_orbits(C, B, F):
    """{(x, y): list of orbit representatives of spans x <- z -> y}, by explicit orbit enumeration."""
    seen = set()
    out = {}
    for z in C.objects:
        isos = [(z2, phi) for z2 in C.objects for phi in C.isos(z2, z)]
        rs = [r for r in C.out_of(z) if r in F]
        for l in C.out_of(z):
            if l not in B:
                continue
            for r in rs:
                if (l, r) in seen:
                    continue
                orbit = {(C.comp(l, phi), C.comp(r, phi)) for _, phi in isos}
                seen |= orbit
                out.setdefault((C.tgt[l], C.tgt[r]), []).append((l, r))
    return out


def _chain_count(objects, weight, n):
    vec = {x: 1 for x in objects}
    for _ in range(n):
        vec = {y: sum(vec[x] * weight(x, y) for x in objects) for y in objects}
    return sum(vec.values())


def _complete_diagram(C, T, spine):
    """Fill a Tw[n]-diagram from its spine of spans; None if it does not exist."""
    n = len(spine)
    X = {}
    back = {}  # (i, j) -> leg X(i,j) -> X(i,j-1)
    fwd = {}   # (i, j) -> leg X(i,j) -> X(i+1,j)
    for i, (l, r) in enumerate(spine):
        X[(i, i)] = C.tgt[l]
        X[(i + 1, i + 1)] = C.tgt[r]
        X[(i, i + 1)] = C.src[l]
        back[(i, i + 1)] = l
        fwd[(i, i + 1)] = r
    for d in range(2, n + 1):
        for i in range(0, n - d + 1):
            j = i + d
            f = fwd[(i, j - 1)]
            g = back[(i + 1, j)]
            pb = pullback(C, f, g)
            if pb is None:
                return None
            if not is_pullback_square(C, pb.p1, pb.p2, f, g):
                return None
            X[(i, j)] = pb.apex
            back[(i, j)] = pb.p1
            fwd[(i, j)] = pb.p2
    for k, m in back.items():
        if m not in T.backward:
            return None
    for k, m in fwd.items():
        if m not in T.forward:
            return None
    return X


def segal_compare(n, T, S=None, guard=DEFAULT_GUARD, explicit_limit=20_000):
    """Compare functors [n] -> Span(T) with Tw[n]-shaped diagrams in T."""
    C = T.host
    if S is None:
        S = build_span_category(T, guard)
    count_a = _chain_count(S.objects, lambda x, y: len(S.hom(x, y)), n)
    orbits = raw_orbits(C, T.backward, T.forward)
    spines = _chain_count(C.objects, lambda x, y: len(orbits.get((x, y), ())), n)
    if spines > guard:
        raise SizeGuardExceeded("Tw-diagram spines", spines, guard)
    if n <= 1 or spines <= explicit_limit:
        count_b = 0
        for spine in _spines(C, orbits, n):
            if _complete_diagram(C, T, spine) is not None:
                count_b += 1
        if n == 0:
            count_b = len(C.objects)
        method = "explicit Tw-diagram completion"
    else:
        count_b = spines
        method = "orbit counting along spines; completion guaranteed by the adequacy certificate"
    return SegalReport(n, count_a, count_b, method, SEGAL_NOTE)


def _spines(C, orbits, n):
    by_source = {}
    for (x, y), reps in orbits.items():
        by_source.setdefault(x, []).extend(reps)
    def rec(x, k):
        if k == 0:
            yield []
            return
        for l, r in by_source.get(x, ()):
            for rest in rec(C.tgt[r], k - 1):
                yield [(l, r)] + rest
    for x in C.objects:
        yield from rec(x, n)


def segal_verdict(report):
    return Verdict(f"segal n={report.n}", report.equal,
                   None if report.equal else {"kind": "segal", "n": report.n, "count_a": report.count_a,
                                              "count_b": report.count_b},
                   report.count_a, 0, report.method)
