"""Acceptance suite: one test per criterion part, summarized as one line per criterion."""
import contextlib
import glob
import json
import os
import subprocess
import sys

from finspan.catalog import PASSING, gen_finset
from finspan.catfun import (
    bc_double,
    bc_sharp,
    bc_star,
    check_biadjointable,
    cone_square,
    left_adjoint,
    left_adjoint_comparison,
    rebase,
    right_adjoint,
    right_adjoint_comparison,
)
from finspan.classes import (
    MorphismFamily,
    all_family,
    check_suitable_decomposition,
    factorization_category,
    is_cofiltered,
    is_connected,
    iso_family,
)
from finspan.cli import main
from finspan.extend import (
    build_formalism,
    check_ambidexterity,
    check_factorization_independence,
    check_one_functoriality,
    check_two_cell_pasting,
    free_biadjointable,
    verify_hom_formula,
)
from finspan.fincat import category_violations, is_isomorphism, opposite, relabel
from finspan.indexings import downset_indexing, exists_along, forall_along, subset_indexing
from finspan.limits import pullback
from finspan.monoidal import check_projection_formulas
from finspan.span2 import Span2, unit_counit_witnesses, unit_counit_witnesses_dual
from finspan.spancat import backward_comparison, build_span_category, check_adequate, forward_comparison, segal_compare
from finspan.textformat import parse_category_file, serialize_category

from conftest import decomposition, downsets, record, subsets

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "finspan", "data")


@contextlib.contextmanager
def criterion(number, part):
    try:
        yield
    except BaseException:
        record(number, part, False)
        raise
    record(number, part, True)


def pre(C, f, S):
    return tuple(v for v in range(C.functions[f][0]) if C.functions[f][2][v] in S)


def meet(S, T):
    return tuple(sorted(set(S) & set(T)))


def subsets_of(n):
    return [tuple(v for v in range(n) if mask >> v & 1) for mask in range(2 ** n)]


def double_oracle(C, sq):
    return all(exists_along(C, sq.bottom, forall_along(C, sq.left, S))
               == forall_along(C, sq.right, exists_along(C, sq.top, S))
               for S in subsets_of(C.src[sq.top]))


# 1

def test_c01_decompositions():
    with criterion(1, "decomposition suite"):
        for name in ("finset3-inj", "div12-all", "c2set2-inj"):
            D = decomposition(name)
            assert check_suitable_decomposition(D.C, D.E, D.I, D.P).passed, name
        D = decomposition("finset2-inj-surj")
        r = check_suitable_decomposition(D.C, D.E, D.I, D.P)
        assert not r.passed
        w = next(v for v in r.failures() if v.name == "P left-cancellable").witness
        assert (w["f"], w["g"]) == ("1>2:0", "2>1:00")
        assert (D.C.src[w["f"]], D.C.tgt[w["f"]], D.C.src[w["g"]], D.C.tgt[w["g"]]) == (1, 2, 2, 1)


# 2

def test_c02_span_laws():
    with criterion(2, "span-category laws"):
        for name in PASSING:
            D = decomposition(name)
            C = D.C
            S = build_span_category(check_adequate(C, all_family(C), D.E))
            assert category_violations(S) == [], name
            fwd = build_span_category(check_adequate(C, iso_family(C), all_family(C)))
            assert is_isomorphism(forward_comparison(C, fwd)), name
            bwd = build_span_category(check_adequate(C, all_family(C), iso_family(C)))
            assert is_isomorphism(backward_comparison(opposite(C), C, bwd)), name


# 3

def test_c03_segal():
    with criterion(3, "Segal counts"):
        for name in PASSING:
            D = decomposition(name)
            T = check_adequate(D.C, all_family(D.C), D.E)
            for n in range(4):
                r = segal_compare(n, T)
                assert r.equal and r.count_a == r.count_b, (name, n)


# 4

def test_c04_contractibility():
    with criterion(4, "factorization categories"):
        for name in PASSING:
            D = decomposition(name)
            for e in D.E:
                K = factorization_category(D.C, e, D.I, D.P).category
                assert K.objects, (name, e)
                assert is_cofiltered(K).ok and is_connected(K).ok, (name, e)


# 5

def catalog_functors():
    systems = [subsets("finset3-inj"), downsets("div12-all")]
    for name, a in (("finset2-inj", 1), ("div6-all", 6), ("c2set2-inj", "1")):
        D = decomposition(name)
        systems.append(free_biadjointable(D.C, D.E, D.I, D.P, a))
    for F in systems:
        for f in F.base.morphisms:
            yield F.star(f)


def test_c05_adjunctions():
    with criterion(5, "adjunction soundness"):
        found = 0
        for u in catalog_functors():
            for find, compare in ((left_adjoint, left_adjoint_comparison), (right_adjoint, right_adjoint_comparison)):
                a1, a2 = find(u), find(u, seed=11)
                assert (a1 is None) == (a2 is None)
                if a1 is None:
                    continue
                found += 1
                assert a1.triangle_left and a1.triangle_right
                assert a2.triangle_left and a2.triangle_right
                assert compare(a1, a2).non_invertible_at() is None
        assert found > 0


# 6

def test_c06_beck_chevalley():
    with criterion(6, "Beck-Chevalley ground truth"):
        D = decomposition("finset3-inj")
        C = D.C
        F = subsets("finset3-inj")
        for i in D.I:
            for f in C.into(C.tgt[i]):
                assert bc_sharp(F, cone_square(pullback(C, f, i))).invertible, (f, i)
        for p in D.P:
            for f in C.into(C.tgt[p]):
                assert bc_star(F, cone_square(pullback(C, p, f))).invertible, (p, f)
        for p in D.P:
            for i in C.into(C.tgt[p]):
                if i in D.I:
                    sq = cone_square(pullback(C, p, i))
                    assert bc_double(F, sq).invertible == double_oracle(C, sq), sq
        C4 = gen_finset(4, validate=False)
        sq = cone_square(pullback(C4, "2>1:00", "2>1:00"))
        assert "2>1:00" not in D.I
        assert not bc_double(subset_indexing(C4), sq).invertible
        assert not double_oracle(C4, sq)


# 7

def test_c07_subsets_injections():
    with criterion(7, "subset indexing, injections/injections"):
        D = decomposition("finset3-inj")
        r = check_biadjointable(subsets("finset3-inj"), D.I, D.P)
        assert r.passed, [(v.name, v.witness) for v in r.failures()]


def test_c07_free():
    with criterion(7, "free functors"):
        for name in PASSING:
            D = decomposition(name)
            for a in D.C.objects:
                F = free_biadjointable(D.C, D.E, D.I, D.P, a)
                assert check_biadjointable(F, D.I, D.P).passed, (name, a)


def relabeled(name):
    D = decomposition(name)
    C = D.C
    om = {x: f"o{x}" for x in C.objects}
    mm = {m: f"m{m}" for m in C.morphisms}
    C2 = relabel(C, om, mm)
    fams = [MorphismFamily(C2, [mm[m] for m in K], K.name) for K in (D.E, D.I, D.P)]
    return D, C2, om, mm, fams


def test_c07_relabeling():
    with criterion(7, "relabeling"):
        for name, a in (("div6-all", 6), ("finset2-inj", 1)):
            D, C2, om, mm, (E2, I2, P2) = relabeled(name)
            before = check_biadjointable(free_biadjointable(D.C, D.E, D.I, D.P, a), D.I, D.P)
            after = check_biadjointable(free_biadjointable(C2, E2, I2, P2, om[a]), I2, P2)
            assert [(v.name, v.ok) for v in before.verdicts] == [(v.name, v.ok) for v in after.verdicts]
        for name, system in (("div12-all", downset_indexing), ("finset3-inj", subset_indexing)):
            D, C2, om, mm, (_, I2, P2) = relabeled(name)
            before = check_biadjointable(system(D.C), D.I, D.P)
            after = check_biadjointable(rebase(system(D.C), C2, om, mm), I2, P2)
            assert [(v.name, v.ok) for v in before.verdicts] == [(v.name, v.ok) for v in after.verdicts]


# 8

BUNDLES = [
    ("div12-all-iso", "down", None),
    ("finset3-inj-iso", "subset", 2000),
    ("finset2-inj", 1, None),
    ("div6-all", 6, None),
    ("div12-all", 12, 2000),
    ("c2set2-inj", "1", 2000),
    ("finset3-inj", 1, 2000),
]


def bundle(name, index):
    D = decomposition(name)
    if index == "down":
        F = downsets(name)
    elif index == "subset":
        F = subsets(name)
    else:
        F = free_biadjointable(D.C, D.E, D.I, D.P, index)
    return build_formalism(D.C, D.E, D.I, D.P, F)


def test_c08_extension():
    with criterion(8, "extension engine"):
        for name, index, sample in BUNDLES:
            D = bundle(name, index)
            assert check_factorization_independence(D).ok, name
            assert check_one_functoriality(D).ok, name
            assert all(v.ok for v in check_two_cell_pasting(D, sample=sample, seed=0)), name
            assert check_ambidexterity(D).ok, name


# 9

def test_c09_hom_formula():
    with criterion(9, "hom formula and unit/counit triangles"):
        for name in PASSING:
            D = decomposition(name)
            S2 = Span2(D.C, D.E, D.I, D.P)
            for a in D.C.objects:
                assert verify_hom_formula(S2, a).passed, (name, a)
            for i in D.I:
                assert unit_counit_witnesses(S2, i).ok, (name, i)
            for p in D.P:
                assert unit_counit_witnesses_dual(S2, p).ok, (name, p)


# 10

def _projection(dual):
    D = decomposition("finset3-inj")
    C = D.C
    F = subsets("finset3-inj")
    proj, dual_v = check_projection_formulas(F, D.I, D.P)
    if not dual:
        oracle = all(exists_along(C, i, meet(S, pre(C, i, T))) == meet(exists_along(C, i, S), T)
                     for i in D.I for S in subsets_of(C.src[i]) for T in subsets_of(C.tgt[i]))
        return proj.ok, oracle
    oracle = all(forall_along(C, p, meet(S, pre(C, p, T))) == meet(forall_along(C, p, S), T)
                 for p in D.P for S in subsets_of(C.src[p]) for T in subsets_of(C.tgt[p]))
    return dual_v.ok, oracle


def test_c10_projection():
    with criterion(10, "projection formula"):
        verdict, oracle = _projection(False)
        assert verdict == oracle
        assert verdict


def test_c10_dual_projection():
    with criterion(10, "dual projection formula"):
        verdict, oracle = _projection(True)
        assert verdict == oracle
        assert verdict


# 11

def test_c11_determinism(tmp_path):
    with criterion(11, "byte-identical reports"):
        argv = ["check-biadjointable", "--decomposition", "finset3-inj", "--indexing", "subset"]
        outs = []
        for k, seed in enumerate(("0", "12345")):
            out = tmp_path / f"r{k}.json"
            env = dict(os.environ, PYTHONHASHSEED=seed)
            subprocess.run([sys.executable, "-m", "finspan", *argv, "--out", str(out)],
                           env=env, capture_output=True, check=False)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


RECHECK = [
    ["check-decomposition", "--decomposition", "finset2-inj-surj"],
    ["check-decomposition", "--decomposition", "c2set2-inj"],
    ["build-span", "--decomposition", "div6-all"],
    ["check-biadjointable", "--decomposition", "finset3-inj", "--indexing", "subset"],
    ["check-biadjointable", "--decomposition", "div12-all", "--indexing", "downset"],
    ["verify-extension", "--decomposition", "finset3-inj", "--indexing", "subset"],
    ["check-projection", "--decomposition", "finset3-inj", "--indexing", "subset"],
    ["segal-compare", "--decomposition", "finset2-inj"],
]


def test_c11_recheck(tmp_path):
    with criterion(11, "recheck"):
        for k, argv in enumerate(RECHECK):
            out = tmp_path / f"r{k}.json"
            main(argv + ["--out", str(out)])
            rep = json.loads(out.read_text())
            assert rep["checks"]
            assert main(["recheck", str(out)]) == 0, argv


def test_c11_round_trip():
    with criterion(11, "category-file round trip"):
        paths = sorted(glob.glob(os.path.join(DATA, "*.cat")))
        assert paths
        for path in paths:
            text = open(path, encoding="utf-8").read()
            body = "".join(l for l in text.splitlines(True) if not l.startswith("#"))
            assert serialize_category(parse_category_file(text)) == body, path
