"""The compiled kernels and the pure-Python fallback must agree exactly."""

import random
from itertools import permutations, product

import pytest

from artifact import _fallback, kernels

try:
    from artifact import _kernels
except ImportError:  # extension not built in this environment
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    if _kernels is not None:
        assert kernels.BACKEND == "cython"


@needs_ext
def test_sign_kernels_agree():
    for n in range(0, 6):
        for sigma in permutations(range(1, n + 1)):
            assert _kernels.perm_parity(sigma) == _fallback.perm_parity(sigma)
            for pars in product((0, 1), repeat=n):
                assert _kernels.koszul_exponent(sigma, pars) == _fallback.koszul_exponent(sigma, pars)
                assert _kernels.reorder_exponent(sigma, pars) == _fallback.reorder_exponent(sigma, pars)


@needs_ext
def test_unshuffle_kernels_agree():
    for d in range(1, 9):
        for j in range(1, d + 1):
            assert list(_kernels.unshuffles(j, d)) == list(_fallback.unshuffles(j, d))


@needs_ext
def test_snf_kernels_agree():
    rng = random.Random(7)
    for _ in range(100):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        ents = [(i, j, rng.randint(-9, 9)) for i in range(r) for j in range(c) if rng.random() < 0.5]
        assert list(_kernels.invariant_factors_small(r, c, ents)) == list(
            _fallback.invariant_factors_small(r, c, ents))


def test_overflow_falls_back_to_big_integers():
    big = 2 ** 62
    ents = [(0, 0, big), (0, 1, big + 1), (1, 0, big - 1), (1, 1, big)]
    f = kernels.invariant_factors_small(2, 2, ents)
    assert f == [1, 1]
