import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import NotAComplexError, ParseError, RingError
from artifact.linalg import (
    BoundedComplex,
    SparseIntMatrix,
    homology,
    invariant_factors,
    is_chain_complex,
    rank_over,
    read_matrix,
    smith_normal_form,
    write_matrix,
)
from artifact.rings import QQ, ZZ, IntegersMod
from oracles import dense_invariant_factors, dense_rank

small_matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def _det_pm1(m):
    from sympy import Matrix
    return abs(Matrix(m.to_dense()).det()) == 1


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_snf_certificate(rows):
    M = SparseIntMatrix.from_dense(rows)
    sf = smith_normal_form(M)
    assert sf.U @ M @ sf.V == sf.D
    assert _det_pm1(sf.U) and _det_pm1(sf.V)
    diag = [sf.D.entries.get((i, i), 0) for i in range(min(M.rows, M.cols))]
    assert [d for d in diag if d] == sf.factors
    assert len(sf.D.entries) == len(sf.factors)
    for a, b in zip(sf.factors, sf.factors[1:]):
        assert b % a == 0


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_invariant_factors_match_sympy(rows):
    M = SparseIntMatrix.from_dense(rows)
    assert invariant_factors(M) == dense_invariant_factors(rows, len(rows[0]))
    assert invariant_factors(M, "first") == invariant_factors(M)
    assert rank_over(M, QQ) == dense_rank(rows)


def test_snf_examples():
    assert invariant_factors(SparseIntMatrix.from_dense([[2, 4], [6, 8]])) == [2, 4]
    assert invariant_factors(SparseIntMatrix.from_dense([[0, 0], [0, 0]])) == []
    assert invariant_factors(SparseIntMatrix(0, 3)) == []
    with pytest.raises(RingError):
        smith_normal_form(SparseIntMatrix(1, 1, {(0, 0): Fraction(1, 2)}))


def test_rank_over_finite_field():
    M = SparseIntMatrix.from_dense([[2, 0], [0, 3]])
    assert rank_over(M, IntegersMod(2)) == 1
    assert rank_over(M, IntegersMod(3)) == 1
    assert rank_over(M, QQ) == 2


def test_matrix_round_trip():
    M = SparseIntMatrix.from_dense([[0, 3], [-2, 0], [0, 0]])
    assert read_matrix(write_matrix(M)) == M


@pytest.mark.parametrize("text", ["", "2 2 1\n", "2 2 1\n0 0\n", "1 1 1\n3 0 1\n", "x y z\n"])
def test_matrix_parse_errors(text):
    with pytest.raises((ParseError, IndexError, ValueError)):
        read_matrix(text)


def test_times_two_complex_has_torsion():
    C = BoundedComplex({0: 1, 1: 1}, {0: SparseIntMatrix.from_dense([[2]])})
    H = homology(C)
    assert H[0].rank == 0 and H[1].rank == 0 and H[1].torsion == (2,)
    Q = BoundedComplex({0: 1, 1: 1}, {0: SparseIntMatrix.from_dense([[2]])}, QQ)
    assert homology(Q)[1].torsion == ()


def test_not_a_complex():
    d = SparseIntMatrix.from_dense([[1]])
    C = BoundedComplex({0: 1, 1: 1, 2: 1}, {0: d, 1: d})
    assert not is_chain_complex(C)
    with pytest.raises(NotAComplexError) as err:
        homology(C)
    assert err.value.degree == 0


def test_shape_validation():
    with pytest.raises(ValueError):
        BoundedComplex({0: 2, 1: 1}, {0: SparseIntMatrix(1, 1)})


def random_three_term(rng):
    """Random C0 -> C1 -> C2 with d1 d0 = 0: d0 = A, d1 = B with B A = 0."""
    n0, n1, n2 = rng.randint(0, 5), rng.randint(1, 6), rng.randint(0, 5)
    # choose d1 first, then d0 from integer kernel vectors scaled randomly
    d1 = [[rng.randint(-4, 4) for _ in range(n1)] for _ in range(n2)]
    M1 = SparseIntMatrix.from_dense(d1) if n2 else SparseIntMatrix(0, n1)
    sf = smith_normal_form(M1) if n2 else None
    if sf is not None:
        V = sf.V.to_dense()
        kernel = [[V[i][j] for i in range(n1)] for j in range(len(sf.factors), n1)]
    else:
        kernel = [[int(i == j) for i in range(n1)] for j in range(n1)]
    cols = []
    for _ in range(n0):
        v = [0] * n1
        for k in kernel:
            c = rng.randint(-3, 3)
            v = [a + c * b for a, b in zip(v, k)]
        cols.append(v)
    d0 = [[cols[j][i] for j in range(n0)] for i in range(n1)]
    return (n0, n1, n2), d0, d1


def test_random_three_term_homology_against_dense_oracle():
    from oracles import dense_homology

    rng = random.Random(11)
    for _ in range(60):
        ranks, d0, d1 = random_three_term(rng)
        n0, n1, n2 = ranks
        C = BoundedComplex(
            {0: n0, 1: n1, 2: n2},
            {0: SparseIntMatrix(n1, n0, {(i, j): d0[i][j] for i in range(n1) for j in range(n0) if d0[i][j]}),
             1: SparseIntMatrix(n2, n1, {(i, j): d1[i][j] for i in range(n2) for j in range(n1) if d1[i][j]})},
        )
        H = homology(C)
        ref = dense_homology(ranks, (d0, d1))
        for n in range(3):
            assert (H[n].rank, list(H[n].torsion)) == ref[n]
