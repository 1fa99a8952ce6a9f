"""Built-in example categories and decompositions."""
from __future__ import annotations

import itertools

from .classes import MorphismFamily, all_family, iso_family
from .errors import RelationClosureDiverges, SizeGuardExceeded
from .fincat import DEFAULT_GUARD, FinCat, category_violations
from .errors import InvalidCategory


def _check(C, validate, guard):
    if validate:
        problems = category_violations(C, guard)
        if problems:
            raise InvalidCategory(problems)
    return C


def fn_name(k, m, images):
    return f"{k}>{m}:" + "".join(str(v) for v in images)


def gen_finset(n, validate=True, guard=DEFAULT_GUARD):
    """Skeletal finite sets {0, ..., n} with all functions.

    A function k -> m is named "k>m:" followed by its images, e.g. "2>1:00".
    """
    if n > 9:
        raise SizeGuardExceeded("finite set size", n, 9)
    bound = sum(m**k for k in range(n + 1) for m in range(n + 1))
    if bound > guard:
        raise SizeGuardExceeded("finite set morphisms", bound, guard)
    objects = list(range(n + 1))
    records = []
    funcs = {}
    for k in objects:
        for m in objects:
            for images in itertools.product(range(m), repeat=k):
                name = fn_name(k, m, images)
                funcs[name] = (k, m, images)
                records.append((name, k, m))
    ids = {k: fn_name(k, k, range(k)) for k in objects}

    def comp(g, f):
        k, _, fi = funcs[f]
        _, m, gi = funcs[g]
        return fn_name(k, m, [gi[v] for v in fi])

    C = FinCat(objects, records, ids, comp, name=f"FinSet≤{n}")
    C.functions = funcs
    if n <= 3:
        C._table = C.table()
    return _check(C, validate and n <= 3, guard)


def is_injective(C, m):
    images = C.functions[m][2]
    return len(set(images)) == len(images)


def is_surjective(C, m):
    _, target, images = C.functions[m]
    return set(images) == set(range(target))


def injections(C, name="inj"):
    return MorphismFamily(C, [m for m in C.morphisms if is_injective(C, m)], name)


def surjections(C, name="surj"):
    return MorphismFamily(C, [m for m in C.morphisms if is_surjective(C, m)], name)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def gen_divisor_lattice(n, validate=True, guard=DEFAULT_GUARD):
    """Divisors of n ordered by divisibility; a | b is the morphism "a|b"."""
    ds = divisors(n)
    records = [(f"{a}|{b}", a, b) for a in ds for b in ds if b % a == 0]
    ids = {a: f"{a}|{a}" for a in ds}

    def comp(g, f):
        return f"{f.split('|')[0]}|{g.split('|')[1]}"

    C = FinCat(ds, records, ids, comp, name=f"Div({n})")
    C._table = C.table()
    return _check(C, validate, guard)


def cyclic_group_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def _actions(table, k):
    """All actions of the group (by multiplication table) on {0..k-1}."""
    g = len(table)
    e = next(a for a in range(g) if all(table[a][b] == b for b in range(g)))
    perms = list(itertools.permutations(range(k)))
    for assignment in itertools.product(perms, repeat=g):
        if assignment[e] != tuple(range(k)):
            continue
        ok = True
        for a in range(g):
            for b in range(g):
                ab = assignment[table[a][b]]
                if any(ab[x] != assignment[a][assignment[b][x]] for x in range(k)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield assignment


def _canonical(action, k):
    best = None
    for sigma in itertools.permutations(range(k)):
        inv = [0] * k
        for x, y in enumerate(sigma):
            inv[y] = x
        conj = tuple(tuple(sigma[p[inv[y]]] for y in range(k)) for p in action)
        if best is None or conj < best:
            best = conj
    return best


def _orbits(action, k):
    seen, out = set(), []
    for x in range(k):
        if x in seen:
            continue
        orb = {p[x] for p in action}
        seen |= orb
        out.append(len(orb))
    return sorted(out)


def gen_gset(table, bound, validate=True, guard=DEFAULT_GUARD):
    """Finite G-sets of cardinality ≤ bound up to isomorphism, with equivariant maps.

    Objects are named by their orbit sizes ("0" for the empty set, "1+1" for
    two fixed points, "2" for a free C2-orbit); morphisms "X>Y:images".
    """
    g = len(table)
    if (max(bound, 1) ** max(bound, 1)) ** g > guard:
        raise SizeGuardExceeded("G-set actions", (bound**bound) ** g, guard)
    reps = []
    for k in range(bound + 1):
        forms = sorted({_canonical(a, k) for a in _actions(table, k)})
        reps += [(k, f) for f in forms]
    names = []
    used = {}
    for k, f in reps:
        base = "+".join(str(s) for s in _orbits(f, k)) or "0"
        used[base] = used.get(base, 0) + 1
        names.append(base if used[base] == 1 else f"{base}#{used[base]}")
    info = dict(zip(names, reps))
    records, funcs = [], {}
    for x in names:
        k, fx = info[x]
        for y in names:
            m, fy = info[y]
            for images in itertools.product(range(m), repeat=k):
                if all(images[fx[a][v]] == fy[a][images[v]] for a in range(g) for v in range(k)):
                    name = f"{x}>{y}:" + "".join(map(str, images))
                    funcs[name] = (x, y, images)
                    records.append((name, x, y))
    ids = {x: f"{x}>{x}:" + "".join(map(str, range(info[x][0]))) for x in names}

    def comp(gm, fm):
        x, _, fi = funcs[fm]
        _, y, gi = funcs[gm]
        return f"{x}>{y}:" + "".join(str(gi[v]) for v in fi)

    C = FinCat(names, records, ids, comp, name=f"GSet≤{bound}")
    C.functions = funcs
    C.actions = info
    C._table = C.table()
    return _check(C, validate, guard)


def gen_free_category(vertices, edges, relations=(), guard=10_000):
    """The free category on a finite graph modulo path relations.

    `edges` are (name, src, tgt); `relations` are pairs of paths, each a list of
    edge names in the order they are traversed.  Morphisms are normal-form
    paths named by edge names joined with "." in composition order (g.f).
    """
    vertices = list(vertices)
    esrc = {e: s for e, s, _ in edges}
    etgt = {e: t for e, _, t in edges}
    order = {e: k for k, (e, _, _) in enumerate(edges)}
    rules = [(tuple(a), tuple(b)) for a, b in relations]
    delta = max((abs(len(a) - len(b)) for a, b in rules), default=0)

    def slk(p):
        return (len(p), [order[e] for e in p])

    def neighbours(p, limit):
        for lhs, rhs in rules:
            for a, b in ((lhs, rhs), (rhs, lhs)):
                n = len(a)
                for i in range(len(p) - n + 1):
                    if p[i:i + n] == a:
                        q = p[:i] + b + p[i + n:]
                        if len(q) <= limit:
                            yield q

    nf_cache = {}

    def normal(p):
        if p in nf_cache:
            return nf_cache[p]
        limit = len(p) + delta
        seen = {p}
        frontier = [p]
        while frontier:
            nxt = []
            for q in frontier:
                for r in neighbours(q, limit):
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
                        if len(seen) > guard:
                            raise RelationClosureDiverges(f"class of {p} exceeds {guard} paths")
            frontier = nxt
        best = min(seen, key=slk)
        for q in seen:
            nf_cache[q] = best
        return best

    # identities are handled per vertex, so paths here are nonempty
    frontier = [(e,) for e, _, _ in edges]
    seen_paths = set()
    while frontier:
        nxt = []
        for p in frontier:
            q = normal(p)
            if q in seen_paths:
                continue
            if len(q) == 0:
                continue
            seen_paths.add(q)
            if len(seen_paths) > guard:
                raise RelationClosureDiverges(f"more than {guard} normal forms")
            for e, s, _ in edges:
                if s == etgt[q[-1]]:
                    nxt.append(q + (e,))
        frontier = nxt

    def name(p):
        return ".".join(reversed(p))

    paths = sorted(seen_paths, key=slk)
    records = [(f"id_{v}", v, v) for v in vertices]
    records += [(name(p), esrc[p[0]], etgt[p[-1]]) for p in paths]
    ids = {v: f"id_{v}" for v in vertices}
    by_name = {name(p): p for p in paths}

    def comp(g, f):
        q = normal(by_name[f] + by_name[g])
        if not q:
            return f"id_{esrc[by_name[f][0]]}"
        return name(q)

    C = FinCat(vertices, records, ids, comp, name="Free")
    C._table = C.table()
    return _check(C, True, guard * 100)


# decompositions

class Decomposition:
    """A category with families E, I, P, under a catalog name."""

    def __init__(self, name, C, E, I, P, expect_pass=True):
        self.name = name
        self.C = C
        self.E = E
        self.I = I
        self.P = P
        self.expect_pass = expect_pass

    def families(self):
        return {"E": self.E, "I": self.I, "P": self.P}


def _named(K, name):
    return MorphismFamily(K.host, K.members, name)


def decomposition(name):
    """Catalog decompositions by name (see DECOMPOSITIONS)."""
    if name == "finset3-inj":
        C = gen_finset(3)
        inj = injections(C)
        return Decomposition(name, C, _named(inj, "E"), _named(inj, "I"), _named(inj, "P"))
    if name == "finset2-inj":
        C = gen_finset(2)
        inj = injections(C)
        return Decomposition(name, C, _named(inj, "E"), _named(inj, "I"), _named(inj, "P"))
    if name == "finset3-inj-iso":
        C = gen_finset(3)
        inj = injections(C)
        return Decomposition(name, C, _named(inj, "E"), _named(inj, "I"), _named(iso_family(C), "P"))
    if name in ("div12-all", "div6-all"):
        C = gen_divisor_lattice(12 if name == "div12-all" else 6)
        a = all_family(C)
        return Decomposition(name, C, _named(a, "E"), _named(a, "I"), _named(a, "P"))
    if name == "div12-all-iso":
        C = gen_divisor_lattice(12)
        a = all_family(C)
        return Decomposition(name, C, _named(a, "E"), _named(a, "I"), _named(iso_family(C), "P"))
    if name == "c2set2-inj":
        C = gen_gset(cyclic_group_table(2), 2)
        inj = MorphismFamily(C, [m for m in C.morphisms if len(set(C.functions[m][2])) == len(C.functions[m][2])])
        return Decomposition(name, C, _named(inj, "E"), _named(inj, "I"), _named(inj, "P"))
    if name in ("finset2-inj-surj", "finset3-inj-surj"):
        C = gen_finset(2 if name.startswith("finset2") else 3)
        return Decomposition(name, C, _named(all_family(C), "E"), _named(injections(C), "I"),
                             _named(surjections(C), "P"), expect_pass=False)
    raise KeyError(name)


DECOMPOSITIONS = [
    "finset3-inj", "finset2-inj", "finset3-inj-iso", "div12-all", "div6-all", "div12-all-iso",
    "c2set2-inj", "finset2-inj-surj", "finset3-inj-surj",
]
PASSING = [d for d in DECOMPOSITIONS if "surj" not in d]


def builtin_category(name):
    """Builtin categories by name: finset<N>, div<N>, c2set<N>."""
    if name.startswith("finset"):
        return gen_finset(int(name[6:]))
    if name.startswith("div"):
        return gen_divisor_lattice(int(name[3:]))
    if name.startswith("c2set"):
        return gen_gset(cyclic_group_table(2), int(name[5:]))
    raise KeyError(name)
