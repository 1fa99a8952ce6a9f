from math import gcd

from hypothesis import given, settings, strategies as st

from finspan.catalog import gen_divisor_lattice, gen_finset
from finspan.fincat import full_subcategory
from finspan.indexings import exists_along, forall_along
from finspan.monoidal import (
    FiberProducts,
    MonoidalFailure,
    cartesian_structure,
    check_projection_formulas,
    interchange,
    projection_comparison,
    structure_witnesses,
    tensor_laws,
    tensor_spans,
)
from finspan.span2 import Span2
from finspan.spancat import Span, apex, compose_spans, span_class

from conftest import builtin, decomposition, downsets, subsets


def pre(C, f, S):
    return tuple(v for v in range(C.functions[f][0]) if C.functions[f][2][v] in S)


def meet(S, T):
    return tuple(sorted(set(S) & set(T)))


def test_lattice_structure():
    C = gen_divisor_lattice(12)
    M = cartesian_structure(C)
    assert M.ok and M.unit == 12
    assert M.obj(4, 6) == 2
    assert all(v.ok for v in structure_witnesses(M))


def test_finset_products():
    r = cartesian_structure(builtin("finset3"))
    assert isinstance(r, MonoidalFailure) and r.witness["pair"] == [2, 2]
    C4 = gen_finset(4, validate=False)
    r = cartesian_structure(full_subcategory(C4, [0, 1, 2]))
    assert not r.ok and r.witness["pair"] == [2, 2]
    M = cartesian_structure(full_subcategory(C4, [0, 1]))
    assert M.ok and all(v.ok for v in structure_witnesses(M))


def test_tensor_unit_and_meets():
    D = decomposition("div12-all")
    C = D.C
    M = cartesian_structure(C)
    one = span_class(C, Span(C.identity[12], C.identity[12]))
    for l in C.morphisms:
        for r in C.out_of(C.src[l]):
            s = span_class(C, Span(l, r))
            t = tensor_spans(s, one, M, D.E)
            assert t == s
            for l2 in C.morphisms:
                for r2 in C.out_of(C.src[l2]):
                    u = tensor_spans(s, span_class(C, Span(l2, r2)), M)
                    assert apex(C, u) == gcd(C.src[l], C.src[l2])
                    assert C.tgt[u.left] == gcd(C.tgt[l], C.tgt[l2])
                    assert C.tgt[u.right] == gcd(C.tgt[r], C.tgt[r2])


def test_apex_sizes_multiply():
    C4 = gen_finset(4, validate=False)
    M = cartesian_structure(full_subcategory(C4, [0, 1]))
    assert M.ok
    C = M.C
    for l in C.morphisms:
        for r in C.out_of(C.src[l]):
            for l2 in C.morphisms:
                for r2 in C.out_of(C.src[l2]):
                    u = tensor_spans(Span(l, r), Span(l2, r2), M)
                    assert apex(C, u) == C.src[l] * C.src[l2]


def test_tensor_laws_sample():
    D = decomposition("div6-all")
    C = D.C
    M = cartesian_structure(C)
    S2 = Span2(C, D.E, D.I, D.P)
    spans = [s for x in C.objects for y in C.objects for s in S2.hom_objects(x, y)]
    assert all(v.ok for v in tensor_laws(M, spans, D.E))


def test_interchange_lattice():
    D = decomposition("div6-all")
    C = D.C
    M = cartesian_structure(C)
    S2 = Span2(C, D.E, D.I, D.P)
    spans = [s for x in C.objects for y in C.objects for s in S2.hom_objects(x, y)]
    pairs = [(s, t) for s in spans for t in spans if C.tgt[s.right] == C.tgt[t.left]]
    assert interchange(M, pairs[:60], pairs[:60], D.E).ok


def test_identity_comparisons():
    F = subsets("finset3-inj")
    C = F.base
    T = FiberProducts(F)
    for x in C.objects:
        X = F.fiber(x)
        for A in X.objects:
            for B in X.objects:
                c = projection_comparison(F, T, C.identity[x], A, B)
                assert X.is_identity(c)


def test_frobenius_oracle_agrees():
    D = decomposition("finset3-inj")
    C = D.C
    F = subsets("finset3-inj")
    proj, dual = check_projection_formulas(F, D.I, D.P)
    oracle = all(exists_along(C, i, meet(S, pre(C, i, T))) == meet(exists_along(C, i, S), T)
                 for i in D.I for S in F.fiber(C.src[i]).objects for T in F.fiber(C.tgt[i]).objects)
    assert proj.ok == oracle is True
    oracle_dual = all(forall_along(C, p, meet(S, pre(C, p, T))) == meet(forall_along(C, p, S), T)
                      for p in D.P for S in F.fiber(C.src[p]).objects for T in F.fiber(C.tgt[p]).objects)
    assert dual.ok == oracle_dual is False
    assert dual.witness["m"] == "0>1:"


def test_closed_dual_holds():
    D = decomposition("finset3-inj")
    F = subsets("finset3-inj")
    vs = check_projection_formulas(F, D.I, D.P, closed=True)
    assert vs[-1].name == "dual projection formula (internal hom)" and vs[-1].ok


def test_downsets():
    D = decomposition("div12-all")
    vs = check_projection_formulas(downsets("div12-all"), D.I, D.P, closed=True)
    assert [v.ok for v in vs] == [True, False, True]


@settings(max_examples=4, deadline=None)
@given(st.sampled_from([("finset3-inj", subsets), ("div12-all", downsets), ("finset2-inj", subsets)]))
def test_swap_invariance(case):
    name, system = case
    D = decomposition(name)
    F = system(name)
    plain = [v.ok for v in check_projection_formulas(F, D.I, D.P)]
    swapped = [v.ok for v in check_projection_formulas(F, D.I, D.P, swap=True)]
    assert plain == swapped
