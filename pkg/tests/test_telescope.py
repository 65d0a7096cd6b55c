import random
from fractions import Fraction
from itertools import product

import pytest

from artifact.errors import StructureError
from artifact.fixtures import (
    identity_system,
    ltilde_partial,
    one_level_system,
    qis_system,
    random_partial,
    random_system,
    telescope_module,
    zero_kappa_system,
)
from artifact.grading import GradedModule, Generator
from artifact.linalg import homology
from artifact.linfty import LInftyStructure, relation_residual
from artifact.ops import FunctionOp, TableOp
from artifact.telescope import (
    DirectedSystem,
    build_telescope,
    check_delt_equivariance,
    check_filtration,
    compare_with_colimit,
    del_t,
    extend_delt_equivariant,
    modified_structure,
    modify_unary,
    restrict_t_free,
    t_times,
    telescope_homology,
    truncate_to_level,
)


def square(T):
    d = T.differential
    return {x: d.apply([d((x,))], T.module.ring) for x in T.module.ids}


def test_del_t_and_t_times():
    assert del_t({"x": 3}) == {}
    assert del_t({"t:x": 2, "y": 1}) == {"x": 2}
    assert t_times({"x": 1, "t:y": 4}) == {"t:x": 1}


def test_differential_formula_on_identity_system():
    T = build_telescope(identity_system(2))
    d = T.differential
    assert d(("t:a1",)) == {"t:b1": -2, "a2": 1, "a1": -1}
    assert d(("t:z1",)) == {"z2": 1, "z1": -1}
    assert d(("a2",)) == {"b2": 2}
    assert "t:a2" not in T.module
    assert T.module.degree("t:b1") == (0,)


def test_top_cone_option():
    S = one_level_system()
    T = build_telescope(S, include_top_cone=True)
    assert T.differential(("t:a1",)) == {"t:b1": -3, "a1": -1}
    assert all(not v for v in square(T).values())
    # the cone on the identity is acyclic
    assert all(g.rank == 0 and not g.torsion for g in telescope_homology(T).values())
    plain = telescope_homology(build_telescope(S))
    assert plain[(1,)].torsion == (3,)


def test_square_zero_on_random_systems():
    rng = random.Random(17)
    for i in range(50):
        S = random_system(rng, qis=i % 2 == 0)
        T = build_telescope(S)
        assert all(not v for v in square(T).values())


def test_colimit_comparison():
    assert compare_with_colimit(identity_system(3))["equal"]
    assert compare_with_colimit(qis_system())["equal"]
    report = compare_with_colimit(zero_kappa_system())
    assert not report["equal"]
    rng = random.Random(5)
    for _ in range(20):
        assert compare_with_colimit(random_system(rng, qis=True))["equal"]


def test_zero_kappa_homology():
    H = telescope_homology(build_telescope(zero_kappa_system()))
    assert H[(0,)].rank == 1 and H[(-1,)].rank == 0


def test_identity_system_matches_level_homology():
    S = identity_system(2)
    H = telescope_homology(build_telescope(S))
    L = homology(S.level_complex(1))
    for deg in L:
        assert (H[deg].rank, H[deg].torsion) == (L[deg].rank, L[deg].torsion)


def test_system_validation():
    M = GradedModule([Generator("a", (0,), level=1), Generator("b", (0,), level=2)])
    with pytest.raises(StructureError):
        DirectedSystem(M, {"a": {"b": 1}}, {})
    with pytest.raises(StructureError):
        DirectedSystem(GradedModule([Generator("a", (0,))]), {}, {})
    N = GradedModule([Generator("a", (0,), level=1), Generator("b", (1,), level=2)])
    with pytest.raises(StructureError):
        DirectedSystem(N, {}, {"a": {"b": 1}})


def test_modify_unary_reproduces_differential():
    for S in (identity_system(3), qis_system(), zero_kappa_system()):
        T, P = ltilde_partial(S)
        m = modify_unary(extend_delt_equivariant(P, T.module), T.module)
        for x in T.module.ids:
            assert m((x,)) == T.differential((x,))


def test_modify_zero_is_minus_delt():
    X = telescope_module([0, 1])
    m = modify_unary(TableOp(1, (1,), {}), X)
    assert m(("t:x1",)) == {"x1": -1}
    assert m(("x1",)) == {}


@pytest.mark.parametrize("arity", [1, 2, 3])
def test_extend_then_restrict_is_identity(arity):
    rng = random.Random(arity)
    X = telescope_module([0, 1, 2])
    for _ in range(5):
        P = random_partial(X, arity, (3 - 2 * arity,), rng, density=0.5, t_inputs=True)
        E = extend_delt_equivariant(P, X)
        R = restrict_t_free(E)
        for a in product(X.ids, repeat=arity):
            assert R(a) == P(a)
        assert check_delt_equivariance(E, X)


def test_equivariance_with_open_slots():
    rng = random.Random(4)
    X = telescope_module([0, 1])
    Y = telescope_module([0, 1, 2], prefix="y")
    table = {}
    for x, y in product(X.ids, Y.ids):
        want = (X.degree(x)[0] + Y.degree(y)[0] - 1,)
        outs = [z for z in Y.ids if not z.startswith("t:") and Y.degree(z) == want]
        if outs and rng.random() < 0.8:
            table[(x, y)] = {rng.choice(outs): rng.choice((1, -1, 2))}
    Q = TableOp(2, (-1,), table)
    E = extend_delt_equivariant(Q, Y, "xy", inputs=[X, Y])
    assert check_delt_equivariance(E, Y, "xy", inputs=[X, Y])
    # reading the first slot as open flips the sign of every later t-term
    assert not check_delt_equivariance(E, Y, "yy", inputs=[X, Y])


def test_two_t_inputs_vanish():
    X = telescope_module([1, 1])
    P = FunctionOp(2, (-1,), lambda ids: {} if any(i.startswith("t:") for i in ids) else {"x0": 1})
    E = extend_delt_equivariant(P, X)
    assert E(("t:x0", "t:x1")) == {}
    assert E(("t:x0", "x1")) != {}


def test_zero_extension():
    X = telescope_module([0])
    E = extend_delt_equivariant(TableOp(2, (-1,), {}), X)
    assert all(E(a) == {} for a in product(X.ids, repeat=2))


def test_partial_with_t_output_rejected():
    X = telescope_module([0])
    P = TableOp(1, (0,), {("x0",): {"t:x0": 1}})
    with pytest.raises(StructureError):
        extend_delt_equivariant(P, X)(("x0",))


def test_tilde_and_modified_relations_agree():
    rng = random.Random(6)
    for _ in range(5):
        X = telescope_module([rng.randint(0, 3) for _ in range(2)])
        ops = {d: extend_delt_equivariant(
            random_partial(X, d, (3 - 2 * d,), rng, density=0.5, t_inputs=True, symmetric=True), X)
            for d in (1, 2, 3)}
        Lt = LInftyStructure(X, ops)
        Lm = modified_structure(Lt)
        for n in (1, 2, 3):
            for xs in product(X.ids, repeat=n):
                assert relation_residual(Lt, xs) == relation_residual(Lm, xs)


def _filtered(a1, a2, aout):
    M = GradedModule([
        Generator("p", (1,), action=Fraction(a1), level=1),
        Generator("q", (1,), action=Fraction(a2), level=1),
        Generator("r", (1,), action=Fraction(aout), level=1),
    ])
    l2 = TableOp(2, (-1,), {("p", "q"): {"r": 1}}, True, M.parity, M.sort_key)
    return LInftyStructure(M, {2: l2})


def test_filtration_checker():
    delta = Fraction(1, 3)
    assert check_filtration(_filtered(1, 2, 3 - delta / 2), delta, 1)
    assert check_filtration(_filtered(1, 2, 3 - delta), delta, 1)
    v = check_filtration(_filtered(1, 2, 3 - delta - Fraction(1, 10 ** 6)), delta, 1)
    assert not v and v.counterexample["deficit"] == "1/1000000"
    with pytest.raises(StructureError):
        check_filtration(_filtered(1, 2, 3), 0, 1)


def test_filtration_unary_needs_only_monotone_action():
    M = GradedModule([Generator("p", (0,), action=Fraction(1), level=1),
                      Generator("q", (1,), action=Fraction(1), level=1)])
    L = LInftyStructure(M, {1: TableOp(1, (1,), {("p",): {"q": 1}})})
    for delta in (Fraction(1, 100), Fraction(5)):
        assert check_filtration(L, delta, 1)


def test_truncation():
    S = identity_system(2)
    T = build_telescope(S)
    assert truncate_to_level(T, 1).module.ids == T.module.ids
    top = truncate_to_level(T, 2)
    assert set(top.module.ids) == {"z2", "a2", "b2"}
    with pytest.raises(StructureError):
        truncate_to_level(T, 3)
    M = GradedModule([Generator("a", (0,), level=1), Generator("b", (1,), level=2)])
    L = LInftyStructure(M, {1: TableOp(1, (1,), {("a",): {"b": 1}})})
    assert truncate_to_level(L, 2).module.ids == ["b"]
    N = GradedModule([Generator("a", (1,), level=1), Generator("b", (0,), level=2)])
    drop = LInftyStructure(N, {1: TableOp(1, (1,), {("b",): {"a": 1}})})
    with pytest.raises(StructureError):
        truncate_to_level(drop, 2)
