import functools

from finspan.catalog import PASSING
from finspan.catfun import check_biadjointable
from finspan.classes import MorphismFamily, all_family, factorizations
from finspan.extend import (
    build_formalism,
    check_ambidexterity,
    check_factorization_independence,
    check_one_functoriality,
    check_total_category,
    check_two_cell_pasting,
    composition_iso,
    distinguished_object,
    factorization_independence,
    free_biadjointable,
    total_category_free,
    total_fiber,
    two_cell_image,
    verify_hom_formula,
)
from finspan.fincat import discrete, nat_iso_search, relabel, vcomp
from finspan.span2 import Span2, unit_counit_witnesses, unit_counit_witnesses_dual
from finspan.spancat import Span, span_class

from conftest import decomposition, downsets


@functools.lru_cache(maxsize=None)
def down_formalism():
    D = decomposition("div12-all-iso")
    return build_formalism(D.C, D.E, D.I, D.P, downsets("div12-all-iso"))


@functools.lru_cache(maxsize=None)
def free_formalism(name, a):
    D = decomposition(name)
    return build_formalism(D.C, D.E, D.I, D.P, free_biadjointable(D.C, D.E, D.I, D.P, a))


def same_functor(G, H):
    return all(G.obj[x] == H.obj[x] for x in G.source.objects) and all(
        G.mor[m] == H.mor[m] for m in G.source.morphisms)


def test_elementary_spans():
    D = down_formalism()
    C = D.C
    for x in C.objects:
        G = D.one_cell(span_class(C, Span(C.identity[x], C.identity[x])))
        assert all(G.obj[a] == a for a in G.source.objects)
    for f in C.morphisms:
        assert same_functor(D.one_cell(Span(f, C.identity[C.src[f]])), D.F.star(f))
    for i in D.I:
        assert D.factorization(i) == (i, C.identity[C.tgt[i]])
        assert same_functor(D.one_cell(Span(C.identity[C.src[i]], i)), D.F.lower(i).left)


def test_independence_identity_witness():
    D = free_formalism("div12-all", 12)
    e = "1|12"
    fac = D.factorization(e)
    w = factorization_independence(D, e, fac, fac)
    assert w.verified and w.iso.is_identity()


def test_independence_through_4_and_3():
    D = free_formalism("div12-all", 12)
    C = D.C
    e = "1|12"
    via4 = ("1|4", "4|12")
    via3 = ("1|3", "3|12")
    facs = factorizations(C, e, D.I, D.P)
    assert via4 in facs and via3 in facs
    w = factorization_independence(D, e, via4, via3)
    assert w.verified and w.iso.is_iso()
    co = D.coherence
    left = co.pstar("4|12").after(co.sharp("1|4"))
    right = co.pstar("3|12").after(co.sharp("1|3"))
    assert nat_iso_search(left, right) is not None


def test_independence_finset_two_middles():
    D = free_formalism("finset2-inj", 1)
    C = D.C
    e = "1>2:0"
    facs = [f for f in factorizations(C, e, D.I, D.P) if C.tgt[f[0]] == 2]
    assert len(facs) == 2
    w = factorization_independence(D, e, facs[0], facs[1], paths=2)
    assert w.verified


def test_independence_and_functoriality_downsets():
    D = down_formalism()
    assert check_factorization_independence(D).ok
    v = check_one_functoriality(D, naturality=True)
    assert v.ok and v.instances == 910


def test_composition_with_identity_is_identity():
    D = down_formalism()
    C = D.C
    for s in [span_class(C, Span(l, r)) for l in C.morphisms for r in C.morphisms if C.src[l] == C.src[r]]:
        iy = span_class(C, Span(C.identity[C.tgt[s.right]], C.identity[C.tgt[s.right]]))
        alpha, st = composition_iso(D, s, iy)
        assert st == s and alpha.is_identity()


def test_two_cell_images():
    D = down_formalism()
    S2 = Span2(D.C, D.E, D.I, D.P)
    C = D.C
    s = span_class(C, Span("2|4", "2|6"))
    assert two_cell_image(D, S2.identity_cell(s)).is_identity()
    for i in D.I:
        w = unit_counit_witnesses(S2, i)
        alpha, _ = composition_iso(D, w.left, w.right)
        assert two_cell_image(D, w.unit).components == vcomp(alpha, D.F.lower(i).unit).components
        beta, _ = composition_iso(D, w.right, w.left)
        assert two_cell_image(D, w.counit).components == vcomp(D.F.lower(i).counit, beta.inverse()).components
    for p in D.P:
        w = unit_counit_witnesses_dual(S2, p)
        alpha, _ = composition_iso(D, w.left, w.right)
        assert two_cell_image(D, w.unit).components == vcomp(alpha, D.F.upper(p).unit).components


def test_pasting_and_ambidexterity():
    D = down_formalism()
    assert all(v.ok for v in check_two_cell_pasting(D))
    assert check_ambidexterity(D).ok


def test_free_functor_basics():
    for name in PASSING:
        Dc = decomposition(name)
        for a in Dc.C.objects:
            F = free_biadjointable(Dc.C, Dc.E, Dc.I, Dc.P, a)
            assert distinguished_object(Dc.C, a) in F.fiber(a).objects
            assert check_biadjointable(F, Dc.I, Dc.P).passed, (name, a)


def test_free_functor_over_terminal():
    C = discrete(["*"])
    A = all_family(C)
    F = free_biadjointable(C, A, A, A, "*")
    X = F.fiber("*")
    assert len(X.objects) == 1 and len(X.morphisms) == 1
    S = total_category_free(C, A, A, A, "*")
    assert len(total_fiber(S, "*", C).objects) == 1


def test_total_category():
    D = decomposition("div12-all")
    assert check_total_category(D.C, D.E, D.I, D.P, 12).ok
    D = decomposition("finset2-inj")
    assert check_total_category(D.C, D.E, D.I, D.P, 1).ok


def test_hom_formula_lattice():
    Dc = decomposition("div12-all")
    S2 = Span2(Dc.C, Dc.E, Dc.I, Dc.P)
    for a in Dc.C.objects:
        r = verify_hom_formula(S2, a)
        assert r.passed, a
        assert r.verdicts[1].name == "id_a ↦ (a=a=a)" and r.verdicts[1].ok


def test_hom_formula_invariant_under_relabeling():
    Dc = decomposition("div6-all")
    C = Dc.C
    om = {x: f"o{x}" for x in C.objects}
    mm = {m: f"m{m}" for m in C.morphisms}
    C2 = relabel(C, om, mm)
    fam = lambda K: MorphismFamily(C2, [mm[m] for m in K], K.name)
    S = Span2(C, Dc.E, Dc.I, Dc.P)
    S_2 = Span2(C2, fam(Dc.E), fam(Dc.I), fam(Dc.P))
    for a in C.objects:
        before = [(v.name, v.ok, v.instances) for v in verify_hom_formula(S, a).verdicts]
        after = [(v.name, v.ok, v.instances) for v in verify_hom_formula(S_2, om[a]).verdicts]
        assert before == after
