from hypothesis import given, settings, strategies as st

from finspan.catalog import PASSING, gen_divisor_lattice, injections, surjections
from finspan.classes import (
    MorphismFamily,
    all_family,
    check_suitable_decomposition,
    closed_under_base_change,
    closed_under_composition,
    factorization_category,
    factorizations,
    generated_family,
    identity_family,
    is_cofiltered,
    is_connected,
    is_left_cancellable,
    is_mono,
    is_wide,
    iso_family,
    recheck_witness,
)
from finspan.fincat import category_violations, discrete, interval, terminal_object

from conftest import builtin, decomposition


def test_identity_family():
    C = builtin("finset3")
    K = identity_family(C)
    assert is_wide(K).ok and closed_under_composition(K).ok


def test_injections_closed():
    C = builtin("finset3")
    inj = injections(C)
    assert is_wide(inj).ok and closed_under_composition(inj).ok
    assert is_left_cancellable(inj).ok
    v = closed_under_base_change(inj)
    assert v.ok and v.untestable == 0


def test_missing_identity_named():
    C = builtin("finset2")
    K = MorphismFamily(C, [m for m in C.morphisms if m != C.identity[1]], "K")
    v = is_wide(K)
    assert not v.ok and v.witness["object"] == 1


def test_surjections_not_left_cancellable():
    C = builtin("finset2")
    v = is_left_cancellable(surjections(C))
    assert not v.ok
    f, g = v.witness["f"], v.witness["g"]
    assert (C.src[f], C.tgt[f]) == (1, 2) and (C.src[g], C.tgt[g]) == (2, 1)
    assert C.is_identity(C.comp(g, f))
    assert is_left_cancellable(iso_family(C)).ok


def test_base_change_lattice_and_crafted():
    C = gen_divisor_lattice(12)
    v = closed_under_base_change(all_family(C))
    assert v.ok and v.untestable == 0
    K = MorphismFamily(C, list(C.identity.values()) + ["4|12"], "K")
    v = closed_under_base_change(K)
    assert not v.ok and v.witness["kind"] == "base_change"
    assert recheck_witness(C, v.witness, {"K": K})


def test_is_mono():
    C = builtin("finset3")
    assert all(is_mono(C, m) for m in injections(C))
    assert not is_mono(C, "2>1:00")
    D = gen_divisor_lattice(12)
    assert all(is_mono(D, m) for m in D.morphisms)


def test_decomposition_verdicts():
    D = decomposition("finset3-inj")
    assert check_suitable_decomposition(D.C, D.E, D.I, D.P).passed
    D = decomposition("div12-all")
    assert check_suitable_decomposition(D.C, D.E, D.I, D.P).passed
    C = builtin("finset3")
    r = check_suitable_decomposition(C, all_family(C), injections(C), surjections(C))
    assert not r.passed
    assert "P left-cancellable" in [v.name for v in r.failures()]


def test_factorizations():
    C = gen_divisor_lattice(12)
    A = all_family(C)
    assert ("1|1", "1|1") in factorizations(C, "1|1", A, A)
    facs = factorizations(C, "2|12", A, A)
    assert sorted(C.tgt[i] for i, _ in facs) == [2, 4, 6, 12]
    D = decomposition("finset3-inj")
    e = "1>3:0"
    oracle = sum(1 for m in D.C.objects for i in D.C.hom(1, m) for p in D.C.hom(m, 3)
                 if i in D.I and p in D.P and D.C.comp(p, i) == e)
    assert len(factorizations(D.C, e, D.I, D.P)) == oracle == 1 + 2 * 2 + 3 * 2


def test_factorization_category_shapes():
    C = gen_divisor_lattice(12)
    A = all_family(C)
    K = factorization_category(C, "1|1", A, A).category
    assert terminal_object(K) == ("1|1", "1|1")
    D = decomposition("finset3-inj")
    F = factorization_category(D.C, "1>3:0", D.I, D.P)
    K = F.category
    assert category_violations(K) == []
    assert len(K.objects) == 11
    # maps between middles commuting with both legs
    oracle = sum(1 for f1 in F.factorizations for f2 in F.factorizations
                 for m in D.C.hom(D.C.tgt[f1[0]], D.C.tgt[f2[0]])
                 if D.C.comp(m, f1[0]) == f2[0] and D.C.comp(f2[1], m) == f1[1])
    assert len(K.morphisms) == oracle


def test_cofiltered_examples():
    assert is_cofiltered(interval(2)).ok
    assert not is_cofiltered(discrete(["a", "b"])).ok
    assert not is_connected(discrete(["a", "b"])).ok


def test_contractibility_all_passing():
    for name in PASSING:
        D = decomposition(name)
        for e in D.E:
            K = factorization_category(D.C, e, D.I, D.P).category
            assert K.objects
            assert is_cofiltered(K).ok, (name, e)
            assert is_connected(K).ok, (name, e)


def test_generated_family():
    for name in PASSING:
        D = decomposition(name)
        G = generated_family(D.C, D.I, D.P)
        assert closed_under_composition(G).ok
        assert is_left_cancellable(G).ok


# properties

FAM_CATS = ["finset2", "div6", "c2set2"]


@st.composite
def families(draw):
    C = builtin(draw(st.sampled_from(FAM_CATS)))
    members = draw(st.sets(st.sampled_from(C.morphisms)))
    return C, MorphismFamily(C, members, "K")


def test_identities_can_break_left_cancellability():
    # g: 2 -> 1 has sections, so adding id_1 makes g∘f = id_1 with f outside the family
    C = builtin("finset2")
    K = MorphismFamily(C, ["2>1:00"] + list(C.hom(2, 2)), "K")
    assert is_left_cancellable(K).ok
    assert not is_left_cancellable(K.with_identities()).ok


@settings(max_examples=80, deadline=None)
@given(families())
def test_left_cancellable_stable_under_identities(data):
    C, K = data
    touched = {C.src[m] for m in K} | {C.tgt[m] for m in K}
    K = MorphismFamily(C, K.members | {C.identity[x] for x in touched}, "K")
    assert is_left_cancellable(K).ok == is_left_cancellable(K.with_identities()).ok


@settings(max_examples=80, deadline=None)
@given(families())
def test_failure_witnesses_recheck(data):
    C, K = data
    for check in (is_wide, closed_under_composition, is_left_cancellable, closed_under_base_change):
        v = check(K)
        if v.ok is False:
            fresh = MorphismFamily(C, K.members, "K")
            assert recheck_witness(C, v.witness, {"K": fresh})
