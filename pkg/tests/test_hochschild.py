import random
from itertools import product

import pytest

from artifact.errors import StructureError, WindowError
from artifact.fixtures import (
    broken_mu1_category,
    derivation_category,
    dual_numbers_category,
    ground_ring_category,
    path_category,
    perturb_category,
    random_category,
    truncated_path_category,
    zero_category,
)
from artifact.grading import GradedModule, Generator, GradingDatum
from artifact.hochschild import (
    AInftyCategory,
    CochainSpace,
    Hochschild,
    cc_as_linfty,
    certified_length,
    check_ainfty,
    elementary_basis,
    hochschild_cohomology,
    hochschild_degree,
)
from artifact.linfty import check_dgla_axioms, check_linfty_relations
from artifact.ops import TableOp
from artifact.rings import add_into


def exterior(sign=True):
    M = GradedModule([Generator("u", (0,)), Generator("a", (1,))])
    ends = {"u": ("pt", "pt"), "a": ("pt", "pt")}
    mu2 = TableOp(2, (0,), {("u", "u"): {"u": 1}, ("u", "a"): {"a": 1}, ("a", "u"): {"a": -1 if sign else 1}})
    return AInftyCategory(["pt"], M, ends, {2: mu2})


@pytest.mark.parametrize("make", [ground_ring_category, path_category, dual_numbers_category,
                                  derivation_category, zero_category, exterior])
def test_fixtures_are_ainfty(make):
    assert check_ainfty(make())


def test_product_sign_convention_matters():
    assert not check_ainfty(exterior(sign=False))


def test_broken_mu1_fails():
    v = check_ainfty(broken_mu1_category())
    assert not v and v.counterexample["chain"] == ["a"]


def test_perturbations_are_caught():
    rng = random.Random(4)
    caught = 0
    for _ in range(20):
        cat = random_category(rng)
        assert check_ainfty(cat)
        bad = perturb_category(cat, rng)
        if bad is not cat:
            caught += not check_ainfty(bad)
    assert caught >= 5


def test_category_validation():
    M = GradedModule([Generator("f", (0,))])
    with pytest.raises(StructureError):
        AInftyCategory(["A"], M, {"f": ("A", "B")}, {})
    with pytest.raises(StructureError):
        AInftyCategory(["A"], M, {}, {})
    with pytest.raises(StructureError):
        AInftyCategory(["A", "B"], M, {"f": ("A", "B")}, {2: TableOp(2, (0,), {("f", "f"): {"f": 1}})})


def test_hochschild_degree():
    cat = path_category()
    assert hochschild_degree(cat, ((), "eA")) == (0,)
    assert hochschild_degree(cat, (("f",), "f")) == (1,)
    assert hochschild_degree(cat, (("eA", "f"), "f")) == (2,)


def _all_cats(rng):
    cats = [path_category(), dual_numbers_category(), derivation_category(), exterior(),
            truncated_path_category(["A", "B", "C"], [("f", "A", "B", 1), ("g", "B", "C", 0)])]
    cats += [random_category(rng) for _ in range(5)]
    return cats


def test_differential_squares_to_zero():
    rng = random.Random(8)
    for cat in _all_cats(rng):
        H = Hochschild(cat)
        for key in elementary_basis(cat, 2):
            assert H.differential(H.differential({key: 1})) == {}


def _dpar(H, e):
    return (H.parity(e) + 1) % 2


def test_bracket_antisymmetry_and_jacobi():
    rng = random.Random(2)
    for cat in _all_cats(rng)[:6]:
        H = Hochschild(cat)
        basis = elementary_basis(cat, 2)
        for a, b in product(basis, repeat=2):
            ab = H.bracket_elementary(a, b)
            ba = H.bracket_elementary(b, a)
            s = -1 if _dpar(H, a) * _dpar(H, b) else 1
            assert add_into(dict(ab), ba, s) == {}
        trip = basis if len(basis) <= 10 else rng.sample(basis, 10)
        for a, b, c in product(trip, repeat=3):
            lhs = H.bracket({a: 1}, H.bracket_elementary(b, c))
            rhs = H.bracket(H.bracket_elementary(a, b), {c: 1})
            add_into(rhs, H.bracket({b: 1}, H.bracket_elementary(a, c)), -1 if _dpar(H, a) * _dpar(H, b) else 1)
            assert add_into(lhs, rhs, -1) == {}


def test_gerstenhaber_product_is_pre_lie():
    cat = truncated_path_category(["A", "B"], [("f", "A", "B", 1), ("g", "A", "B", 0)])
    H = Hochschild(cat)
    basis = elementary_basis(cat, 2)

    def assoc(a, b, c):
        left = H.circ(H.circ({a: 1}, {b: 1}), {c: 1})
        return add_into(left, H.circ({a: 1}, H.circ({b: 1}, {c: 1})), -1)

    for a, b, c in product(basis, repeat=3):
        s = -1 if _dpar(H, b) * _dpar(H, c) else 1
        assert add_into(assoc(a, b, c), assoc(a, c, b), -s) == {}


def test_cochain_dgla_axioms():
    for cat in (path_category(), exterior(), derivation_category()):
        L = cc_as_linfty(cat, 2)
        assert check_linfty_relations(L, 3)


def test_ground_ring_hh():
    hh = hochschild_cohomology(ground_ring_category(), (0, 3))
    assert [hh[n].rank for n in range(4)] == [1, 0, 0, 0]


def test_path_category_hh():
    hh = hochschild_cohomology(path_category(), (0, 2))
    assert hh[0].rank == 1 and hh[1].rank == 0 and hh[2].rank == 0


def test_dual_numbers_hh_low_degrees():
    hh = hochschild_cohomology(dual_numbers_category(), (0, 2))
    # Z[e]/e^2: HH^0 = the algebra, HH^1 = Z, HH^2 = Z + Z/2
    assert (hh[0].rank, hh[1].rank, hh[2].rank, hh[2].torsion) == (2, 1, 1, (2,))


def test_uncertified_windows_are_refused():
    with pytest.raises(WindowError):
        certified_length(exterior(), 0, 2)
    with pytest.raises(WindowError):
        hochschild_cohomology(path_category(), (0, 2), length_cap=1)
    G = GradingDatum(2, (1, 0), (1, 0))
    M = GradedModule([Generator("e", (0, 0))], grading=G)
    cat = AInftyCategory(["pt"], M, {"e": ("pt", "pt")}, {2: TableOp(2, (0, 0), {("e", "e"): {"e": 1}})})
    with pytest.raises(WindowError):
        hochschild_cohomology(cat, (0, 1))


def test_cochain_space_degrees():
    cat = path_category()
    C = CochainSpace(cat, 2)
    assert C.degree((("f",), "f")) == (1,)
    assert C.shifted(-1).degree((("f",), "f")) == (0,)
