"""Morphism families and the axioms imposed on I, P and E, plus factorization
categories.

Every failing verdict carries a witness dictionary with a `kind` field that
`recheck_witness` can re-run in isolation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyFactorizationSet
from .fincat import FinCat
from .limits import pullback


def label(x):
    """JSON-friendly label of an identifier."""
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    return repr(x)


def resolve(C, lab):
    """Inverse of `label` on the morphisms of C."""
    table = C.cache.get("labels")
    if table is None:
        table = C.cache["labels"] = {label(m): m for m in C.morphisms}
    return table[lab]


@dataclass
class Verdict:
    name: str
    ok: bool | None
    witness: dict | None = None
    instances: int = 0
    untestable: int = 0
    note: str = ""

    @property
    def status(self):
        if self.ok is None:
            return "info"
        return "pass" if self.ok else "fail"


class MorphismFamily:
    """A named family of morphisms of a host category."""

    def __init__(self, host, members, name="K"):
        self.host = host
        self.members = frozenset(members)
        unknown = [m for m in self.members if not host.has_morphism(m)]
        if unknown:
            raise ValueError(f"family {name} has non-morphisms: {unknown[:3]}")
        self.name = name
        self.verdicts = {}

    def __contains__(self, m):
        return m in self.members

    def __iter__(self):
        return (m for m in self.host.morphisms if m in self.members)

    def __len__(self):
        return len(self.members)

    def with_identities(self):
        return MorphismFamily(self.host, self.members | set(self.host.identity.values()), self.name)

    def __and__(self, other):
        return MorphismFamily(self.host, self.members & other.members, f"{self.name}∩{other.name}")

    def __repr__(self):
        return f"MorphismFamily({self.name}, {len(self.members)} members)"


def family(C, pred=None, name="K"):
    if pred is None:
        return MorphismFamily(C, C.morphisms, name)
    return MorphismFamily(C, [m for m in C.morphisms if pred(m)], name)


def all_family(C):
    return MorphismFamily(C, C.morphisms, "all")


def iso_family(C):
    return MorphismFamily(C, [m for m in C.morphisms if C.is_iso(m)], "iso")


def identity_family(C):
    return MorphismFamily(C, C.identity.values(), "id")


def _cached(K, name, compute):
    if name not in K.verdicts:
        K.verdicts[name] = compute()
    return K.verdicts[name]


def is_wide(K):
    def run():
        C = K.host
        for x in C.objects:
            if C.identity[x] not in K:
                return Verdict("wide", False, {"kind": "wide", "object": label(x), "family": K.name}, len(C.objects))
        return Verdict("wide", True, None, len(C.objects))

    return _cached(K, "wide", run)


def closed_under_composition(K):
    def run():
        C = K.host
        n = 0
        for f in K:
            for g in C.out_of(C.tgt[f]):
                if g not in K:
                    continue
                n += 1
                if C.comp(g, f) not in K:
                    return Verdict("composition-closed", False,
                                   {"kind": "composition", "f": label(f), "g": label(g), "family": K.name}, n)
        return Verdict("composition-closed", True, None, n)

    return _cached(K, "composition", run)


def is_left_cancellable(K):
    def run():
        C = K.host
        n = 0
        for f in C.morphisms:
            for g in C.out_of(C.tgt[f]):
                if g not in K:
                    continue
                n += 1
                if f not in K and C.comp(g, f) in K:
                    return Verdict("left-cancellable", False,
                                   {"kind": "left_cancel", "f": label(f), "g": label(g), "family": K.name}, n)
        return Verdict("left-cancellable", True, None, n)

    return _cached(K, "left_cancel", run)


def closed_under_base_change(K):
    """Pulled-back legs of K-members along arbitrary maps stay in K.

    Cospans without a canonical pullback are counted as untestable.
    """
    def run():
        C = K.host
        n = missing = 0
        for k in K:
            for g in C.into(C.tgt[k]):
                pb = pullback(C, k, g)
                if pb is None:
                    missing += 1
                    continue
                n += 1
                if pb.p2 not in K:
                    return Verdict("base-change-closed", False,
                                   {"kind": "base_change", "k": label(k), "g": label(g), "family": K.name}, n, missing)
        return Verdict("base-change-closed", True, None, n, missing)

    return _cached(K, "base_change", run)


def is_mono(C, f):
    for z in C.objects:
        images = [C.comp(f, g) for g in C.hom(z, C.src[f])]
        if len(set(images)) != len(images):
            return False
    return True


def contained_in(K, L):
    for m in K:
        if m not in L:
            return Verdict(f"⊆ {L.name}", False, {"kind": "containment", "m": label(m), "family": L.name}, len(K))
    return Verdict(f"⊆ {L.name}", True, None, len(K))


def factorizations(C, e, I, P):
    """All (i, p) with p∘i = e, i ∈ I, p ∈ P: middles in object order, then legs."""
    a, b = C.src[e], C.tgt[e]
    out = []
    for m in C.objects:
        ps = [p for p in C.hom(m, b) if p in P]
        if not ps:
            continue
        for i in C.hom(a, m):
            if i not in I:
                continue
            for p in ps:
                if C.comp(p, i) == e:
                    out.append((i, p))
    if not out:
        raise EmptyFactorizationSet(e)
    return out


def every_factors(E, I, P):
    C = E.host
    n = 0
    for e in E:
        n += 1
        try:
            factorizations(C, e, I, P)
        except EmptyFactorizationSet:
            return Verdict("E factors as p∘i", False, {"kind": "factorization", "e": label(e)}, n)
    return Verdict("E factors as p∘i", True, None, n)


@dataclass
class DecompositionReport:
    verdicts: list = field(default_factory=list)

    @property
    def passed(self):
        return all(v.ok is not False for v in self.verdicts)

    def failures(self):
        return [v for v in self.verdicts if v.ok is False]


def check_suitable_decomposition(C, E, I, P):
    """Decide whether (I, P) is a suitable decomposition of (C, E)."""
    vs = [_role(v, "E") for v in (is_wide(E), closed_under_composition(E), closed_under_base_change(E))]
    for role, K in (("I", I), ("P", P)):
        for v in (is_wide(K), closed_under_composition(K), is_left_cancellable(K),
                  closed_under_base_change(K), contained_in(K, E)):
            vs.append(_role(v, role))
    vs.append(every_factors(E, I, P))
    both = [m for m in I if m in P]
    monos = sum(1 for m in both if is_mono(C, m))
    vs.append(Verdict(
        "I∩P truncated", None, None, len(both),
        note=(f"automatic for 1-categories; {monos} of {len(both)} maps in I∩P are monomorphisms"),
    ))
    return DecompositionReport(vs)


def _role(v, role):
    """Copy of a family verdict whose name and witness refer to the role (I, P or E)."""
    w = None
    if v.witness is not None:
        w = dict(v.witness)
        w["family"] = role
        if w["kind"] == "containment":
            w["family"] = "E"
            w["family_sub"] = role
    name = f"{role} ⊆ E" if v.name.startswith("⊆") else f"{role} {v.name}"
    return Verdict(name, v.ok, w, v.instances, v.untestable, v.note)


class FactorizationCat:
    """Factorizations e = p∘i with the mediating maps between their middles."""

    def __init__(self, e, category, factorizations):
        self.e = e
        self.category = category
        self.factorizations = factorizations


def factorization_category(C, e, I, P):
    facs = factorizations(C, e, I, P)
    records = []
    for f1 in facs:
        i, p = f1
        for f2 in facs:
            i2, p2 = f2
            for m in C.hom(C.tgt[i], C.tgt[i2]):
                if C.comp(m, i) == i2 and C.comp(p2, m) == p:
                    records.append(((f1, f2, m), f1, f2))
    ids = {f: (f, f, C.identity[C.tgt[f[0]]]) for f in facs}

    def comp(g, f):
        return (f[0], g[1], C.comp(g[2], f[2]))

    K = FinCat(facs, records, ids, comp, name=f"Fact({e})")
    return FactorizationCat(e, K, facs)


def is_cofiltered(K):
    if not K.objects:
        return Verdict("cofiltered", False, {"kind": "cofiltered", "reason": "empty"}, 0)
    n = 0
    for x in K.objects:
        for y in K.objects:
            n += 1
            if not any(K.hom(z, x) and K.hom(z, y) for z in K.objects):
                return Verdict("cofiltered", False, {"kind": "cofiltered", "pair": [label(x), label(y)]}, n)
    for x in K.objects:
        for y in K.objects:
            hs = K.hom(x, y)
            for a in hs:
                for b in hs:
                    if a == b:
                        continue
                    n += 1
                    if not any(K.comp(a, h) == K.comp(b, h) for h in K.into(x)):
                        return Verdict("cofiltered", False,
                                       {"kind": "cofiltered", "parallel": [label(a), label(b)]}, n)
    return Verdict("cofiltered", True, None, n)


def components(K):
    parent = {x: x for x in K.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in K.morphisms:
        a, b = find(K.src[m]), find(K.tgt[m])
        if a != b:
            parent[max(a, b, key=K.okey)] = min(a, b, key=K.okey)
    groups = {}
    for x in K.objects:
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def is_connected(K):
    comps = components(K)
    if len(comps) == 1:
        return Verdict("connected", True, None, len(K.objects))
    witness = {"kind": "connected", "objects": [label(c[0]) for c in comps[:2]]} if comps else {"kind": "connected", "reason": "empty"}
    return Verdict("connected", False, witness, len(K.objects))


def generated_family(C, I, P, name="E'"):
    members = set()
    for i in I:
        for p in C.out_of(C.tgt[i]):
            if p in P:
                members.add(C.comp(p, i))
    return MorphismFamily(C, members, name)


def recheck_witness(C, witness, families):
    """Re-run the single-instance predicate behind a witness; True iff it fails again."""
    kind = witness["kind"]
    if kind == "wide":
        return resolve_identity(C, witness) not in families[witness["family"]]
    if kind == "composition":
        K = families[witness["family"]]
        f, g = resolve(C, witness["f"]), resolve(C, witness["g"])
        return f in K and g in K and C.comp(g, f) not in K
    if kind == "left_cancel":
        K = families[witness["family"]]
        f, g = resolve(C, witness["f"]), resolve(C, witness["g"])
        return g in K and C.comp(g, f) in K and f not in K
    if kind == "base_change":
        K = families[witness["family"]]
        k, g = resolve(C, witness["k"]), resolve(C, witness["g"])
        pb = pullback(C, k, g)
        return k in K and pb is not None and pb.p2 not in K
    if kind == "containment":
        K, L = families[witness["family_sub"]], families[witness["family"]]
        m = resolve(C, witness["m"])
        return m in K and m not in L
    if kind == "factorization":
        e = resolve(C, witness["e"])
        try:
            factorizations(C, e, families["I"], families["P"])
        except EmptyFactorizationSet:
            return True
        return False
    raise ValueError(f"unknown witness kind {kind}")


def resolve_identity(C, witness):
    for x in C.objects:
        if label(x) == witness["object"]:
            return C.identity[x]
    raise KeyError(witness["object"])
