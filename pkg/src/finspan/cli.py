"""Command-line entry point: batch checks that print a human report and can
write the machine form (JSON) with `--out`.

Exit status: 0 when every check passes, 1 when any fails, 2 on usage or
parse errors.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

from . import catalog
from .classes import (
    Verdict,
    all_family,
    check_suitable_decomposition,
    factorization_category,
    factorizations,
    identity_family,
    is_cofiltered,
    is_connected,
    iso_family,
    label,
    recheck_witness,
)
from .errors import FinspanError, ParseError, PrerequisiteFailed, SizeGuardExceeded
from .fincat import DEFAULT_GUARD, category_violations, is_isomorphism, opposite
from .report import Report, digest, load_report

COMMANDS = (
    "check-decomposition", "build-span", "build-span2", "check-biadjointable", "extend",
    "verify-extension", "factorization-category", "segal-compare", "check-projection", "recheck",
)
CLASS_KINDS = {"wide", "composition", "left_cancel", "base_change", "containment", "factorization"}
BC_KINDS = {"adjoint_lower", "adjoint_upper", "bc_sharp", "bc_star", "bc_double"}


class UsageError(Exception):
    pass


# inputs

class Context:
    def __init__(self, C, families, inputs, spec=None, base_dir=".", guard=DEFAULT_GUARD, guard_objects=64,
                 seed=None):
        self.C = C
        self.families = families
        self.inputs = inputs
        self.spec = spec
        self.base_dir = base_dir
        self.guard = guard
        self.guard_objects = guard_objects
        self.seed = seed

    def family(self, role):
        return self.families[role]

    def obj(self, lab):
        for x in self.C.objects:
            if str(label(x)) == str(lab):
                return x
        raise UsageError(f"unknown object {lab!r}")

    def mor(self, lab):
        for m in self.C.morphisms:
            if str(label(m)) == str(lab):
                return m
        raise UsageError(f"unknown morphism {lab!r}")


def _named_family(C, name, file_families):
    if name in file_families:
        return file_families[name]
    if name == "all":
        return all_family(C)
    if name == "iso":
        return iso_family(C)
    if name == "id":
        return identity_family(C)
    if name in ("inj", "surj"):
        if not hasattr(C, "functions"):
            raise UsageError(f"family {name!r} needs a builtin category of finite (G-)sets")
        return catalog.injections(C) if name == "inj" else catalog.surjections(C)
    raise UsageError(f"unknown family {name!r}")


def _parse_families(text):
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"--family expects ROLE=NAME, got {part!r}")
        role, name = (s.strip() for s in part.split("=", 1))
        if role not in ("E", "I", "P", "B", "F"):
            raise UsageError(f"unknown family role {role!r}")
        out[role] = name
    return out


def build_context(args):
    from .textformat import load_category_file

    guard = args.guard_enum
    sources = [s for s in (args.input, args.builtin, args.decomposition) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of --input, --builtin, --decomposition")
    file_families, spec, base_dir = {}, None, "."
    inputs = {}
    roles = {}
    if args.decomposition:
        try:
            D = catalog.decomposition(args.decomposition)
        except KeyError:
            raise UsageError(f"unknown decomposition {args.decomposition!r}") from None
        C = D.C
        file_families = {"dE": D.E, "dI": D.I, "dP": D.P}
        roles = {"E": "dE", "I": "dI", "P": "dP"}
        inputs["decomposition"] = args.decomposition
    elif args.builtin:
        try:
            C = catalog.builtin_category(args.builtin)
        except (KeyError, ValueError):
            raise UsageError(f"unknown builtin category {args.builtin!r}") from None
        inputs["builtin"] = args.builtin
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
        C, file_families, spec = load_category_file(args.input)
        base_dir = os.path.dirname(os.path.abspath(args.input))
        inputs["input"] = args.input
        inputs["digest"] = digest(text)
    roles.update(_parse_families(args.family or ""))
    fams = {}
    for role in ("E", "I", "P"):
        fams[role] = _named_family(C, roles.get(role, "all"), file_families)
    fams["B"] = _named_family(C, roles.get("B", "all"), file_families)
    fams["F"] = fams["E"] if "F" not in roles else _named_family(C, roles["F"], file_families)
    inputs["families"] = {r: roles.get(r, "all" if r != "F" else roles.get("E", "all")) for r in ("E", "I", "P")}
    if args.indexing:
        inputs["indexing"] = args.indexing
    inputs["guards"] = {"objects": args.guard_objects, "enum": guard}
    if args.seed is not None:
        inputs["seed"] = args.seed
    return Context(C, fams, inputs, spec, base_dir, guard, args.guard_objects, args.seed)


def build_indexing(ctx, name):
    from .indexings import downset_indexing, subset_indexing

    C = ctx.C
    if name is None:
        raise UsageError("this command needs --indexing")
    if name == "subset":
        if not hasattr(C, "functions"):
            raise UsageError("the subset indexing needs a builtin category of finite sets")
        F = subset_indexing(C)
    elif name == "downset":
        if not all(isinstance(x, int) for x in C.objects):
            raise UsageError("the downset indexing needs a builtin divisor lattice")
        F = downset_indexing(C)
    elif name.startswith("free:"):
        from .extend import free_biadjointable

        F = free_biadjointable(C, ctx.family("E"), ctx.family("I"), ctx.family("P"), ctx.obj(name[5:]), ctx.guard)
    elif ctx.spec is not None and name in ctx.spec.indexings:
        from .textformat import load_indexing

        F = load_indexing(ctx.spec, C, name, ctx.base_dir)
    else:
        raise UsageError(f"unknown indexing {name!r}")
    for x in C.objects:
        n = len(F.fiber(x).objects)
        if n > ctx.guard_objects:
            raise SizeGuardExceeded(f"fiber at {label(x)}", n, ctx.guard_objects)
    if ctx.seed is not None:
        F = F.with_seed(ctx.seed)
    return F


# commands

def cmd_check_decomposition(ctx, args, rep):
    r = check_suitable_decomposition(ctx.C, ctx.family("E"), ctx.family("I"), ctx.family("P"))
    rep.extend(r.verdicts)
    return None


def _span_triple(ctx):
    from .spancat import check_adequate

    T = check_adequate(ctx.C, ctx.family("B"), ctx.family("F"))
    if not hasattr(T, "host"):
        return None, Verdict("adequate triple", False, T.witness, 0, note=T.reason)
    return T, Verdict("adequate triple", True, None, T.certificate.get("cospans", 0))


def cmd_build_span(ctx, args, rep):
    from .dot import category_dot
    from .spancat import backward_comparison, build_span_category, forward_comparison

    C = ctx.C
    T, v = _span_triple(ctx)
    rep.add(v)
    if T is None:
        return None
    S = build_span_category(T, ctx.guard)
    bad = category_violations(S, ctx.guard, first_only=True)
    rep.add(Verdict("span category axioms", not bad, {"kind": "span_axioms", "violation": str(bad[0])} if bad else None,
                    len(S.morphisms)))
    rep.extra["span category"] = {"objects": len(S.objects), "morphisms": len(S.morphisms)}
    from .spancat import check_adequate

    fwd = build_span_category(check_adequate(C, iso_family(C), all_family(C)), ctx.guard)
    ok = is_isomorphism(forward_comparison(C, fwd))
    rep.add(Verdict("Span(C, iso, all) ≅ C", ok, None if ok else {"kind": "span_forward"}, len(C.morphisms)))
    bwd = build_span_category(check_adequate(C, all_family(C), iso_family(C)), ctx.guard)
    ok = is_isomorphism(backward_comparison(opposite(C), C, bwd))
    rep.add(Verdict("Span(C, all, iso) ≅ C^op", ok, None if ok else {"kind": "span_backward"}, len(C.morphisms)))
    return category_dot(S)


def cmd_build_span2(ctx, args, rep):
    from .dot import cell_dot
    from .span2 import (
        Span2,
        bc_sharp_cell,
        comparison_to_span_category,
        is_identity_cell,
        underlying_one_category,
        unit_counit_witnesses,
        unit_counit_witnesses_dual,
    )
    from .spancat import build_span_category, check_adequate
    from .limits import pullback

    C, E, I, P = ctx.C, ctx.family("E"), ctx.family("I"), ctx.family("P")
    S2 = Span2(C, E, I, P, ctx.guard)
    n = 0
    bad = None
    cells = 0
    for x in C.objects:
        for y in C.objects:
            H = S2.hom(x, y).category
            n += 1
            cells += len(H.morphisms)
            if bad is None and category_violations(H, ctx.guard, first_only=True):
                bad = {"kind": "hom_axioms", "x": label(x), "y": label(y)}
    rep.add(Verdict("hom categories valid", bad is None, bad, n))
    rep.extra["2-cells"] = cells
    first = None
    for name, fam, build in (("unit/counit triangles for I", I, unit_counit_witnesses),
                             ("unit/counit triangles for P", P, unit_counit_witnesses_dual)):
        k, badw = 0, None
        for m in fam:
            k += 1
            w = build(S2, m)
            if first is None and not C.is_identity(m):
                first = w.unit
            if not w.ok:
                badw = {"kind": "triangles", "m": label(m), "left": w.triangle_left, "right": w.triangle_right}
                break
        rep.add(Verdict(name, badw is None, badw, k))
    k, badb = 0, None
    for i in I:
        for f in C.into(C.tgt[i]):
            cone = pullback(C, f, i)
            if cone is None:
                continue
            k += 1
            if not is_identity_cell(S2, bc_sharp_cell(S2, cone)):
                badb = {"kind": "bc_cell", "f": label(f), "i": label(i)}
                break
        if badb:
            break
    rep.add(Verdict("Beck-Chevalley cells are identities", badb is None, badb, k))
    U = underlying_one_category(S2)
    S = build_span_category(check_adequate(C, all_family(C), E), ctx.guard)
    ok = is_isomorphism(comparison_to_span_category(U, S))
    rep.add(Verdict("underlying 1-category ≅ Span(C, all, E)", ok, None if ok else {"kind": "underlying"},
                    len(U.morphisms)))
    return cell_dot(C, first) if first is not None else None


def cmd_check_biadjointable(ctx, args, rep):
    from .catfun import check_biadjointable, restriction_validity, strictness

    F = build_indexing(ctx, args.indexing)
    rep.add(restriction_validity(F, ctx.guard))
    rep.add(strictness(F, ctx.guard))
    rep.extend(check_biadjointable(F, ctx.family("I"), ctx.family("P"), naturality=args.naturality).verdicts)
    return None


def _formalism(ctx, args, rep):
    from .extend import build_formalism

    F = build_indexing(ctx, args.indexing)
    try:
        D = build_formalism(ctx.C, ctx.family("E"), ctx.family("I"), ctx.family("P"), F)
    except PrerequisiteFailed as exc:
        fails = [v for v in exc.report.verdicts if v.ok is False] if exc.report is not None else []
        w = {"kind": "prerequisite", "reason": str(exc)}
        if fails:
            w["failed"] = fails[0].name
            w["witness"] = fails[0].witness
        rep.add(Verdict("prerequisites", False, w, 1))
        return None
    rep.add(Verdict("prerequisites", True, None, len(D.report.verdicts)))
    return D


def cmd_extend(ctx, args, rep):
    from .spancat import Span, span_class

    D = _formalism(ctx, args, rep)
    if D is None:
        return None
    C = ctx.C
    rep.extra["factorizations"] = {str(label(e)): [label(i), label(p)] for e, (i, p) in
                                   sorted(D.chosen.items(), key=lambda kv: C.key(kv[0]))}
    n, bad = 0, None
    for x in C.objects:
        n += 1
        G = D.one_cell(span_class(C, Span(C.identity[x], C.identity[x])))
        X = D.F.fiber(x)
        if not (all(G.obj[a] == a for a in X.objects) and all(G.mor[m] == m for m in X.morphisms)):
            bad = {"kind": "identity_span", "object": label(x)}
            break
    rep.add(Verdict("identity spans give identity functors", bad is None, bad, n))
    n, bad = 0, None
    for f in C.morphisms:
        n += 1
        G = D.one_cell(Span(f, C.identity[C.src[f]]))
        if not G.same_as(D.F.star(f)):
            bad = {"kind": "backward_span", "f": label(f)}
            break
    rep.add(Verdict("backward spans give restrictions", bad is None, bad, n))
    n, bad = 0, None
    for i in D.I:
        if D.factorization(i) != (i, C.identity[C.tgt[i]]):
            continue
        n += 1
        G = D.one_cell(Span(C.identity[C.src[i]], i))
        if not G.same_as(D.F.lower(i).left):
            bad = {"kind": "forward_span", "i": label(i)}
            break
    rep.add(Verdict("forward spans give left adjoints", bad is None, bad, n))
    if args.span:
        parts = args.span.split(",")
        if len(parts) != 2:
            raise UsageError("--span expects LEFT,RIGHT")
        s = span_class(C, Span(ctx.mor(parts[0]), ctx.mor(parts[1])))
        G = D.one_cell(s)
        rep.extra["functor"] = {str(label(a)): label(G.obj[a]) for a in G.source.objects}
    return None


def cmd_verify_extension(ctx, args, rep):
    from .extend import (
        check_ambidexterity,
        check_factorization_independence,
        check_one_functoriality,
        check_total_category,
        check_two_cell_pasting,
        verify_hom_formula,
    )
    from .span2 import Span2

    D = _formalism(ctx, args, rep)
    if D is None:
        return None
    rep.add(check_factorization_independence(D))
    rep.add(check_one_functoriality(D, guard=ctx.guard, naturality=args.naturality))
    S2 = Span2(ctx.C, D.E, D.I, D.P, ctx.guard)
    rep.extend(check_two_cell_pasting(D, S2, ctx.guard, sample=args.sample, seed=args.seed or 0))
    rep.add(check_ambidexterity(D))
    if args.hom_formula:
        for a in ctx.C.objects:
            for v in verify_hom_formula(S2, a, guard=ctx.guard).verdicts:
                v.name = f"{v.name} [a={label(a)}]"
                rep.add(v)
            v = check_total_category(ctx.C, D.E, D.I, D.P, a, guard=ctx.guard)
            v.name = f"{v.name} [a={label(a)}]"
            rep.add(v)
    return None


def cmd_factorization_category(ctx, args, rep):
    from .dot import category_dot
    from .errors import EmptyFactorizationSet

    C, E, I, P = ctx.C, ctx.family("E"), ctx.family("I"), ctx.family("P")
    targets = [ctx.mor(args.morphism)] if args.morphism else list(E)
    res = {"nonempty": [0, None], "cofiltered": [0, None], "connected": [0, None]}
    dot = None
    for e in targets:
        try:
            K = factorization_category(C, e, I, P).category
        except EmptyFactorizationSet:
            K = None
        res["nonempty"][0] += 1
        if K is None or not K.objects:
            res["nonempty"][1] = res["nonempty"][1] or {"kind": "factorization", "e": label(e)}
            continue
        if dot is None:
            dot = category_dot(K, reduce=False)
        for key, fn in (("cofiltered", is_cofiltered), ("connected", is_connected)):
            v = fn(K)
            res[key][0] += 1
            if not v.ok and res[key][1] is None:
                res[key][1] = {**v.witness, "e": label(e)}
    for key, (n, w) in res.items():
        rep.add(Verdict(f"factorization categories {key}", w is None, w, n))
    if args.morphism:
        rep.extra["factorizations"] = [[label(i), label(p)] for i, p in factorizations(C, targets[0], I, P)]
    return dot


def cmd_segal_compare(ctx, args, rep):
    from .spancat import build_span_category, segal_compare, segal_verdict

    T, v = _span_triple(ctx)
    rep.add(v)
    if T is None:
        return None
    S = build_span_category(T, ctx.guard)
    for n in range(args.max_n + 1):
        rep.add(segal_verdict(segal_compare(n, T, S, ctx.guard)))
    return None


def cmd_check_projection(ctx, args, rep):
    from .monoidal import check_projection_formulas

    F = build_indexing(ctx, args.indexing)
    I, P = ctx.family("I"), ctx.family("P")
    rep.extend(check_projection_formulas(F, I, P, closed=True, guard=ctx.guard))
    rep.extend(check_projection_formulas(F, I, P, swap=True, guard=ctx.guard))
    return None


RUNNERS = {
    "check-decomposition": cmd_check_decomposition,
    "build-span": cmd_build_span,
    "build-span2": cmd_build_span2,
    "check-biadjointable": cmd_check_biadjointable,
    "extend": cmd_extend,
    "verify-extension": cmd_verify_extension,
    "factorization-category": cmd_factorization_category,
    "segal-compare": cmd_segal_compare,
    "check-projection": cmd_check_projection,
}


def execute(command, args):
    """Run one command; (Report, dot text or None)."""
    ctx = build_context(args)
    rep = Report(command, dict(ctx.inputs, options=_options(command, args)))
    start = time.perf_counter()
    try:
        dot = RUNNERS[command](ctx, args, rep)
    except SizeGuardExceeded as exc:
        rep.add(Verdict("size guard", False, {"kind": "guard", "what": exc.what, "bound": exc.bound,
                                              "guard": exc.guard}, 0))
        dot = None
    if args.timing:
        rep.duration_ms = round((time.perf_counter() - start) * 1000, 3)
    return rep, dot, ctx


def _options(command, args):
    keys = {"extend": ("span",), "verify-extension": ("sample", "hom_formula", "naturality"),
            "check-biadjointable": ("naturality",), "factorization-category": ("morphism",),
            "segal-compare": ("max_n",)}.get(command, ())
    return {k: getattr(args, k) for k in keys}


# recheck

def cmd_recheck(args):
    data = load_report(args.report)
    command = data["command"]
    if command not in RUNNERS:
        raise UsageError(f"report has unknown command {command!r}")
    inputs = data["inputs"]
    ns = _namespace_from_inputs(inputs, args)
    rep = Report("recheck", {"report": os.path.basename(args.report), "command": command})
    if "digest" in inputs:
        with open(ns.input, encoding="utf-8") as fh:
            same = digest(fh.read()) == inputs["digest"]
        rep.add(Verdict("input digest matches", same, None if same else {"kind": "digest"}, 1))
        if not same:
            return rep
    fresh, _, ctx = execute(command, ns)
    by_name = {c["name"]: c for c in fresh.checks}
    F = None
    for c in data["checks"]:
        now = by_name.get(c["name"])
        ok = now is not None and now["verdict"] == c["verdict"] and now["witness"] == c["witness"]
        w = c["witness"]
        if ok and c["verdict"] == "fail" and isinstance(w, dict):
            if w.get("kind") == "prerequisite" and isinstance(w.get("witness"), dict):
                w = w["witness"]
            kind = w.get("kind")
            if kind in CLASS_KINDS:
                ok = recheck_witness(ctx.C, w, ctx.families)
            elif kind in BC_KINDS:
                from .catfun import recheck_bc

                F = F or build_indexing(ctx, ns.indexing)
                ok = recheck_bc(F, w)
        rep.add(Verdict(f"reproduced: {c['name']}", ok,
                        None if ok else {"kind": "recheck", "recorded": c["verdict"],
                                         "now": None if now is None else now["verdict"]}, 1))
    return rep


def _namespace_from_inputs(inputs, args):
    ns = argparse.Namespace(
        input=None, builtin=inputs.get("builtin"), decomposition=inputs.get("decomposition"),
        family=None, indexing=inputs.get("indexing"), guard_objects=inputs["guards"]["objects"],
        guard_enum=inputs["guards"]["enum"], seed=inputs.get("seed"), timing=False, span=None, sample=None,
        hom_formula=False, naturality=False, morphism=None, max_n=3,
    )
    if "input" in inputs:
        path = args.input or inputs["input"]
        if not os.path.exists(path):
            path = os.path.join(os.path.dirname(os.path.abspath(args.report)), os.path.basename(path))
        ns.input = path
    fams = inputs.get("families", {})
    if not ns.decomposition:
        ns.family = ",".join(f"{r}={n}" for r, n in sorted(fams.items()))
    for k, v in inputs.get("options", {}).items():
        setattr(ns, k, v)
    return ns


# argument parsing

def _common(p):
    g = p.add_argument_group("inputs")
    g.add_argument("--input", metavar="FILE", help="category description file")
    g.add_argument("--builtin", metavar="NAME", help="builtin category: finsetN, divN, c2setN")
    g.add_argument("--decomposition", metavar="NAME", help=f"catalog decomposition: {', '.join(catalog.DECOMPOSITIONS)}")
    g.add_argument("--family", metavar="SPEC", help="roles, e.g. I=inj,P=inj,E=inj (names: all, iso, id, inj, "
                                                     "surj or a [family] of the input file)")
    g.add_argument("--indexing", metavar="NAME", help="subset, downset, free:OBJECT or an [indexing] of the file")
    o = p.add_argument_group("output")
    o.add_argument("--out", metavar="FILE", help="write the machine report (JSON)")
    o.add_argument("--dot", metavar="FILE", help="write a DOT picture when the command has one")
    o.add_argument("--figure", metavar="FILE", help="write a bar chart of the checks (matplotlib)")
    o.add_argument("--timing", action="store_true", help="record wall-clock duration in the report")
    s = p.add_argument_group("limits")
    s.add_argument("--guard-objects", type=int, default=64, help="largest fiber category (objects)")
    s.add_argument("--guard-enum", type=int, default=DEFAULT_GUARD, help="largest enumeration")
    s.add_argument("--seed", type=int, default=None, help="exploration order of searches")


def make_parser():
    parser = argparse.ArgumentParser(prog="finspan", description="Finite span categories and their extensions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "recheck":
            p.add_argument("report", help="machine report to reproduce")
            p.add_argument("--input", metavar="FILE", help="override the recorded input file location")
            p.add_argument("--out", metavar="FILE")
            p.add_argument("--figure", metavar="FILE")
            p.add_argument("--dot", metavar="FILE")
            continue
        _common(p)
        if name in ("check-biadjointable", "verify-extension"):
            p.add_argument("--naturality", action="store_true", help="also check naturality of every mate")
        if name == "extend":
            p.add_argument("--span", metavar="LEFT,RIGHT", help="print the functor assigned to this span")
        if name == "verify-extension":
            p.add_argument("--sample", type=int, default=None, help="sample this many 2-cell pastings")
            p.add_argument("--hom-formula", action="store_true", help="also verify HOM(a,-) against the free functor")
        if name == "factorization-category":
            p.add_argument("--morphism", metavar="E", help="only this morphism of E")
        if name == "segal-compare":
            p.add_argument("--max-n", type=int, default=3)
    return parser


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "recheck":
            rep, dot = cmd_recheck(args), None
        else:
            rep, dot, _ = execute(args.command, args)
    except (UsageError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FinspanError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(rep.human())
    if args.out:
        _write(args.out, rep.to_json())
    if args.dot and dot is not None:
        _write(args.dot, dot)
    if args.figure:
        from .plotting import report_figure

        report_figure(rep.to_dict(), args.figure)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
