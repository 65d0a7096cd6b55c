import random
from itertools import product

import pytest

from artifact import fixtures as fx
from artifact.co import check_co_relations
from artifact.documents import (
    build,
    document_from_category,
    document_from_co,
    document_from_linfty,
    document_from_morphism,
    document_from_system,
)
from artifact.errors import ArtifactError, GradingError, ParseError, StructureError
from artifact.fileformat import parse_document, serialize_document
from artifact.hochschild import check_ainfty
from artifact.linfty import LInftyMorphism, check_linfty_relations
from artifact.ops import TableOp
from helpers import weighted_linfty

HEADER = "%format artifact 1\nring Z\ngrading rank=1 iota=1 parity=1\n"


def _same_ops(a, b, module, arity):
    return all(a(x) == b(x) for x in product(module.ids, repeat=arity))


def _roundtrip(doc):
    text = serialize_document(doc)
    again = parse_document(text)
    assert serialize_document(again) == text
    return build(again)


def test_linfty_round_trip():
    rng = random.Random(2)
    for L in [fx.sl2_dgla(), fx.ell3_example(), fx.broken_differential(), weighted_linfty(rng)]:
        L2 = _roundtrip(document_from_linfty(L))
        assert L2.module == L.module
        for d, op in L.ops.items():
            assert _same_ops(op, L2.ops[d], L.module, d)
        assert bool(check_linfty_relations(L, 3)) == bool(check_linfty_relations(L2, 3))


def test_category_round_trip():
    for cat in [fx.path_category(), fx.dual_numbers_category(), fx.derivation_category(),
                fx.broken_mu1_category()]:
        c2 = _roundtrip(document_from_category(cat))
        assert c2.objects == cat.objects and c2.ends == cat.ends
        for k, op in cat.mu.items():
            for ys in cat.chains(k):
                assert op(ys) == c2.mu[k](ys)
        assert bool(check_ainfty(cat)) == bool(check_ainfty(c2))


def test_morphism_round_trip():
    L = fx.sl2_dgla()
    ident = TableOp(1, (0,), {(x,): {x: 1} for x in L.module.ids})
    F = LInftyMorphism(L, L, {1: ident})
    F2 = _roundtrip(document_from_morphism(F))
    assert _same_ops(F2.maps[1], ident, L.module, 1)


def test_co_round_trip():
    C = fx.derivation_co()
    C2 = _roundtrip(document_from_co(C))
    assert set(C2.co) == set(C.co)
    assert bool(check_co_relations(C2)) == bool(check_co_relations(C))


def test_system_round_trip():
    S = fx.random_system(random.Random(4), levels=3)
    S2 = _roundtrip(document_from_system(S))
    assert S2.delta == S.delta and S2.kappa == S.kappa and S2.module == S.module


def test_rational_coefficients_and_actions():
    text = HEADER.replace("ring Z", "ring Q") + (
        "kind linfty\nmodule main\ngen a deg=0 action=1/2\ngen b deg=1 action=-3\nend\n"
        "op l arity=1\na -> 3/4*b\nend\n"
    )
    L = build(parse_document(text))
    assert L.ell(1)(("a",)) == {"b": __import__("fractions").Fraction(3, 4)}
    assert str(L.module.generator("a").action) == "1/2"
    assert parse_document(serialize_document(parse_document(text))) == parse_document(text)


@pytest.mark.parametrize("text,line", [
    ("ring Z\n", 1),
    ("%format artifact 2\n", 1),
    (HEADER + "kind linfty\nmodule main\ngen a deg=0 colour=red\nend\n", 6),
    (HEADER + "kind linfty\nmodule main\ngen a deg=0\ngen a deg=1\nend\n", 7),
    (HEADER + "kind linfty\nmodule main\ngen a deg=0\ngen b deg=1\nend\nop l arity=1\na -> b\na -> b\nend\n", 11),
    (HEADER + "kind linfty\nmodule main\ngen a deg=0\nend\nop l arity=1\na b -> a\nend\n", 9),
    (HEADER + "kind linfty\nmodule main\ngen a deg=0\nend\nop l arity=1\na -> a\n", None),
    (HEADER + "kind linfty\nwhatever\n", 5),
    ("%format artifact 1\nring Z\ngrading rank=1 iota=2 parity=1\n", 3),
    (HEADER + "kind nonsense\n", 4),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_document(text)
    if line is not None:
        assert err.value.line == line


def test_validation_errors_after_parse():
    bad_degree = HEADER + "kind linfty\nmodule main\ngen a deg=0\ngen b deg=0\nend\nop l arity=1\na -> b\nend\n"
    with pytest.raises(GradingError):
        build(parse_document(bad_degree))
    unknown = HEADER + "kind linfty\nmodule main\ngen a deg=0\nend\nop l arity=1\na -> zz\nend\n"
    with pytest.raises(ArtifactError):
        build(parse_document(unknown))
    no_hom = HEADER + "kind ainfty\nobjects pt\nmodule main\ngen a deg=0\nend\n"
    with pytest.raises(StructureError):
        build(parse_document(no_hom))
