import glob
import os

import pytest

from finspan.catalog import builtin_category, decomposition
from finspan.errors import DuplicateIdentifier, ParseError, UnknownReference
from finspan.textformat import (
    families_of,
    from_fincat,
    load_category_file,
    parse_category_file,
    serialize_category,
    to_fincat,
)

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "finspan", "data")
SHIPPED = sorted(glob.glob(os.path.join(DATA, "*.cat")))

SMALL = """[objects]
a
b

[morphisms]
ida : a -> a
idb : b -> b
f : a -> b

[identities]
a = ida
b = idb

[compose]
"""


def body(text):
    return "".join(l for l in text.splitlines(True) if not l.startswith("#"))


def test_div12_file():
    C, fams, _ = load_category_file(os.path.join(DATA, "div12.cat"))
    assert len(C.objects) == 6 and len(C.morphisms) == 18
    assert set(fams) == {"E", "I", "P"}


@pytest.mark.parametrize("path", SHIPPED, ids=os.path.basename)
def test_round_trip(path):
    text = open(path, encoding="utf-8").read()
    assert serialize_category(parse_category_file(text)) == body(text)


def test_unknown_reference_located():
    bad = SMALL + "f . g = f\n"
    with pytest.raises(UnknownReference) as e:
        parse_category_file(bad)
    assert e.value.line == bad.count("\n")
    assert e.value.column >= 1


def test_duplicate_identifier():
    bad = SMALL.replace("f : a -> b", "f : a -> b\nf : b -> a")
    with pytest.raises(DuplicateIdentifier) as e:
        parse_category_file(bad)
    assert e.value.line == 9


def test_malformed_line():
    with pytest.raises(ParseError) as e:
        parse_category_file(SMALL.replace("f : a -> b", "f : a b"))
    assert e.value.line == 8


@pytest.mark.parametrize("name", ["finset2-inj", "div12-all", "c2set2-inj", "finset3-inj"])
def test_fincat_round_trip(name):
    D = decomposition(name)
    spec = from_fincat(D.C, {"E": D.E, "I": D.I, "P": D.P})
    again = parse_category_file(serialize_category(spec))
    assert again == spec
    C2 = to_fincat(again)
    assert len(C2.morphisms) == len(D.C.morphisms)
    fams = families_of(again, C2)
    assert len(fams["E"]) == len(D.E)


def test_builtin_survives_text():
    C = builtin_category("div6")
    C2 = to_fincat(parse_category_file(serialize_category(from_fincat(C))))
    assert C2.composable_pairs() and len(C2.objects) == 4
