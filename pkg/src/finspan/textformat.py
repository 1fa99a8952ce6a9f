"""The line-oriented category description format.

    # comment
    [objects]
    a
    [morphisms]
    f : a -> b
    [identities]
    a = id_a
    [compose]
    g . f = h
    [family I]
    wide
    f, g
    [functor NAME]
    obj x -> y
    mor f -> g
    [indexing NAME]
    fiber a = file.cat
    restrict f = NAME

Composites with an identity are implicit.  Identifiers are any run of
non-space characters other than `,` and `#`.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from .classes import MorphismFamily, label
from .errors import DuplicateIdentifier, ParseError, UnknownReference
from .fincat import FinCat, Functor, validate_category

SECTIONS = ("objects", "morphisms", "identities", "compose", "family", "functor", "indexing")
_HEADER = re.compile(r"\[(\w+)(?:\s+([^\s\]]+))?\]$")
_IDENT = r"([^\s,#]+)"
_MOR = re.compile(rf"{_IDENT}\s+:\s+{_IDENT}\s+->\s+{_IDENT}$")
_IDS = re.compile(rf"{_IDENT}\s+=\s+{_IDENT}$")
_COMP = re.compile(rf"{_IDENT}\s+\.\s+{_IDENT}\s+=\s+{_IDENT}$")
_FMAP = re.compile(rf"(obj|mor)\s+{_IDENT}\s+->\s+{_IDENT}$")
_FIBER = re.compile(rf"fiber\s+{_IDENT}\s+=\s+{_IDENT}$")
_RESTRICT = re.compile(rf"restrict\s+{_IDENT}\s+=\s+{_IDENT}$")
_NAME = re.compile(r"[^\s,#]+$")


@dataclass
class FunctorSpec:
    obj: dict = field(default_factory=dict)
    mor: dict = field(default_factory=dict)


@dataclass
class IndexingSpec:
    fibers: dict = field(default_factory=dict)
    restrict: dict = field(default_factory=dict)


@dataclass
class CategorySpec:
    objects: list = field(default_factory=list)
    morphisms: list = field(default_factory=list)   # (name, src, tgt)
    identities: dict = field(default_factory=dict)
    compose: dict = field(default_factory=dict)     # (g, f) -> h
    families: dict = field(default_factory=dict)    # name -> (members, wide)
    functors: dict = field(default_factory=dict)
    indexings: dict = field(default_factory=dict)


def _col(raw, token):
    k = raw.find(token)
    return k + 1 if k >= 0 else 1


def parse_category_file(text):
    """CategorySpec from text; ParseError, DuplicateIdentifier or UnknownReference with location."""
    spec = CategorySpec()
    section = None
    arg = None
    objs, mors = set(), {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col0 = len(raw) - len(raw.lstrip()) + 1
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m or m.group(1) not in SECTIONS:
                raise ParseError(n, col0, "a section header such as [objects] or [family NAME]")
            section, arg = m.group(1), m.group(2)
            needs_arg = section in ("family", "functor", "indexing")
            if needs_arg != (arg is not None):
                raise ParseError(n, col0, f"[{section} NAME]" if needs_arg else f"[{section}]")
            table = {"family": spec.families, "functor": spec.functors, "indexing": spec.indexings}.get(section)
            if table is not None:
                if arg in table:
                    raise DuplicateIdentifier(arg, n, col0)
                table[arg] = ([], False) if section == "family" else (
                    FunctorSpec() if section == "functor" else IndexingSpec())
            continue
        if section is None:
            raise ParseError(n, col0, "a section header before content")
        if section == "objects":
            if not _NAME.match(line):
                raise ParseError(n, col0, "one object identifier")
            if line in objs:
                raise DuplicateIdentifier(line, n, col0)
            objs.add(line)
            spec.objects.append(line)
        elif section == "morphisms":
            m = _MOR.match(line)
            if not m:
                raise ParseError(n, col0, "`name : source -> target`")
            name, s, t = m.groups()
            if name in mors:
                raise DuplicateIdentifier(name, n, _col(raw, name))
            for x in (s, t):
                if x not in objs:
                    raise UnknownReference(x, n, _col(raw, f" {x}") + 1)
            mors[name] = (s, t)
            spec.morphisms.append((name, s, t))
        elif section == "identities":
            m = _IDS.match(line)
            if not m:
                raise ParseError(n, col0, "`object = morphism`")
            x, i = m.groups()
            if x not in objs:
                raise UnknownReference(x, n, _col(raw, x))
            if i not in mors:
                raise UnknownReference(i, n, _col(raw, f"= {i}") + 2)
            if x in spec.identities:
                raise DuplicateIdentifier(x, n, _col(raw, x))
            spec.identities[x] = i
        elif section == "compose":
            m = _COMP.match(line)
            if not m:
                raise ParseError(n, col0, "`g . f = h`")
            g, f, h = m.groups()
            for tok, pos in ((g, _col(raw, g)), (f, _col(raw, f". {f}") + 2), (h, _col(raw, f"= {h}") + 2)):
                if tok not in mors:
                    raise UnknownReference(tok, n, pos)
            if (g, f) in spec.compose:
                raise DuplicateIdentifier(f"{g} . {f}", n, col0)
            spec.compose[(g, f)] = h
        elif section == "family":
            members, wide = spec.families[arg]
            if line == "wide":
                spec.families[arg] = (members, True)
                continue
            for part in line.split(","):
                tok = part.strip()
                if not tok:
                    continue
                if tok not in mors:
                    raise UnknownReference(tok, n, _col(raw, tok))
                members.append(tok)
        elif section == "functor":
            m = _FMAP.match(line)
            if not m:
                raise ParseError(n, col0, "`obj x -> y` or `mor f -> g`")
            kind, a, b = m.groups()
            table = spec.functors[arg].obj if kind == "obj" else spec.functors[arg].mor
            if a in table:
                raise DuplicateIdentifier(a, n, _col(raw, a))
            table[a] = b
        elif section == "indexing":
            idx = spec.indexings[arg]
            m = _FIBER.match(line)
            if m:
                x, path = m.groups()
                if x not in objs:
                    raise UnknownReference(x, n, _col(raw, x))
                idx.fibers[x] = path
                continue
            m = _RESTRICT.match(line)
            if m:
                f, fn = m.groups()
                if f not in mors:
                    raise UnknownReference(f, n, _col(raw, f))
                if fn not in spec.functors:
                    raise UnknownReference(fn, n, _col(raw, f"= {fn}") + 2)
                idx.restrict[f] = fn
                continue
            raise ParseError(n, col0, "`fiber x = FILE` or `restrict f = FUNCTOR`")
    last = len(text.splitlines())
    for x in spec.objects:
        if x not in spec.identities:
            raise ParseError(last, 1, f"an [identities] entry for object {x}")
    return spec


def serialize_category(spec):
    """Canonical text; parse(serialize(spec)) == spec."""
    out = ["[objects]"]
    out += spec.objects
    out.append("")
    out.append("[morphisms]")
    out += [f"{m} : {s} -> {t}" for m, s, t in spec.morphisms]
    out.append("")
    out.append("[identities]")
    out += [f"{x} = {i}" for x, i in spec.identities.items()]
    out.append("")
    out.append("[compose]")
    out += [f"{g} . {f} = {h}" for (g, f), h in spec.compose.items()]
    for name, (members, wide) in spec.families.items():
        out.append("")
        out.append(f"[family {name}]")
        if wide:
            out.append("wide")
        for k in range(0, len(members), 8):
            out.append(", ".join(members[k:k + 8]))
    for name, fs in spec.functors.items():
        out.append("")
        out.append(f"[functor {name}]")
        out += [f"obj {a} -> {b}" for a, b in fs.obj.items()]
        out += [f"mor {a} -> {b}" for a, b in fs.mor.items()]
    for name, idx in spec.indexings.items():
        out.append("")
        out.append(f"[indexing {name}]")
        out += [f"fiber {x} = {p}" for x, p in idx.fibers.items()]
        out += [f"restrict {f} = {fn}" for f, fn in idx.restrict.items()]
    return "\n".join(out) + "\n"


def to_fincat(spec, name="C", validate=True):
    """The FinCat described by spec (identity composites filled in)."""
    table = dict(spec.compose)
    for m, s, t in spec.morphisms:
        table.setdefault((spec.identities[t], m), m)
        table.setdefault((m, spec.identities[s]), m)
    if validate:
        return validate_category(spec.objects, spec.morphisms, spec.identities, table, name=name)
    return FinCat(spec.objects, spec.morphisms, spec.identities, table, name=name)


def families_of(spec, C):
    """Named MorphismFamily objects; `wide` adds every identity."""
    out = {}
    for name, (members, wide) in spec.families.items():
        ms = set(members)
        if wide:
            ms |= set(C.identity.values())
        out[name] = MorphismFamily(C, ms, name)
    return out


def token(x):
    """`label(x)` as a file identifier: spaces dropped, `,` and `#` replaced."""
    return str(label(x)).replace(" ", "").replace(",", ";").replace("#", "%")


def from_fincat(C, families=None):
    """CategorySpec of C with identifiers rendered by `token`; composites with identities omitted."""
    s = token
    for things in (C.objects, C.morphisms):
        names = [s(x) for x in things]
        if len(set(names)) != len(names):
            raise DuplicateIdentifier(next(n for n in names if names.count(n) > 1), 0, 0)

    spec = CategorySpec()
    spec.objects = [s(x) for x in C.objects]
    spec.morphisms = [(s(m), s(C.src[m]), s(C.tgt[m])) for m in C.morphisms]
    spec.identities = {s(x): s(C.identity[x]) for x in C.objects}
    for g, f in C.composable_pairs():
        if C.is_identity(g) or C.is_identity(f):
            continue
        spec.compose[(s(g), s(f))] = s(C.comp(g, f))
    for name, K in (families or {}).items():
        wide = all(C.identity[x] in K for x in C.objects)
        members = [s(m) for m in C.morphisms if m in K and not (wide and C.is_identity(m))]
        spec.families[name] = (members, wide)
    return spec


def load_category_file(path, validate=True):
    """(FinCat, families, spec) from a file."""
    with open(path, encoding="utf-8") as fh:
        spec = parse_category_file(fh.read())
    name = os.path.splitext(os.path.basename(path))[0]
    C = to_fincat(spec, name=name, validate=validate)
    return C, families_of(spec, C), spec


def load_indexing(spec, C, name, base_dir="."):
    """CatFunctor for an [indexing NAME] section; fibers are read from companion files."""
    from .catfun import CatFunctor

    if name not in spec.indexings:
        raise UnknownReference(name, 0, 0)
    idx = spec.indexings[name]
    fibers = {}
    for x in C.objects:
        if x not in idx.fibers:
            raise UnknownReference(f"fiber at {x}", 0, 0)
        Fx, _, _ = load_category_file(os.path.join(base_dir, idx.fibers[x]))
        fibers[x] = Fx
    restrict = {}
    for f in C.morphisms:
        Y, X = fibers[C.tgt[f]], fibers[C.src[f]]
        if C.is_identity(f) and f not in idx.restrict:
            restrict[f] = Functor(Y, X, {a: a for a in Y.objects}, {m: m for m in Y.morphisms}, name=f"{f}^*")
            continue
        if f not in idx.restrict:
            raise UnknownReference(f"restrict {f}", 0, 0)
        fs = spec.functors[idx.restrict[f]]
        restrict[f] = Functor(Y, X, dict(fs.obj), dict(fs.mor), name=idx.restrict[f])
    return CatFunctor(C, fibers, restrict, name=name)
