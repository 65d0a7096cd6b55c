"""Grading data, graded modules, Koszul signs and unshuffles.

Degrees are tuples of ints of length ``rank`` (elements of Y = Z^r).  Sign
routines take parities (0/1), never degrees.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from . import kernels
from .errors import GradingError, StructureError
from .rings import ZZ


@dataclass(frozen=True)
class GradingDatum:
    rank: int = 1
    iota: tuple = (1,)
    parity_vector: tuple = (1,)

    def __post_init__(self):
        object.__setattr__(self, "iota", tuple(int(v) for v in self.iota))
        object.__setattr__(self, "parity_vector", tuple(int(v) % 2 for v in self.parity_vector))
        if self.rank < 1:
            raise GradingError("rank must be at least 1")
        if len(self.iota) != self.rank or len(self.parity_vector) != self.rank:
            raise GradingError(
                f"iota and parity must have length {self.rank}, got {self.iota}, {self.parity_vector}"
            )

    def degree(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise GradingError(f"degree {coords} has length {len(coords)}, expected {self.rank}")
        return tuple(int(c) for c in coords)

    def parity(self, deg):
        return parity(self, deg)

    def from_int(self, n):
        """Image of n under Z -> Y."""
        return tuple(n * a for a in self.iota)

    def zero(self):
        return (0,) * self.rank

    def add(self, *degs):
        out = [0] * self.rank
        for d in degs:
            self._check(d)
            for i, v in enumerate(d):
                out[i] += v
        return tuple(out)

    def sub(self, a, b):
        self._check(a)
        self._check(b)
        return tuple(x - y for x, y in zip(a, b))

    def shift(self, deg, n):
        """deg + n*iota."""
        self._check(deg)
        return tuple(x + n * a for x, a in zip(deg, self.iota))

    def as_int(self, deg):
        """Integer n with deg = n*iota, or None."""
        self._check(deg)
        n = None
        for x, a in zip(deg, self.iota):
            if a == 0:
                if x:
                    return None
                continue
            if x % a:
                return None
            q = x // a
            if n is None:
                n = q
            elif n != q:
                return None
        return 0 if n is None else n

    def _check(self, deg):
        if len(deg) != self.rank:
            raise GradingError(f"degree {tuple(deg)} has length {len(deg)}, expected {self.rank}")


DEFAULT_GRADING = GradingDatum()


def check_grading_datum(G):
    return sum(p * a for p, a in zip(G.parity_vector, G.iota)) % 2 == 1


def parity(G, deg):
    if len(deg) != G.rank:
        raise GradingError(f"degree {tuple(deg)} has length {len(deg)}, expected {G.rank}")
    return sum(p * x for p, x in zip(G.parity_vector, deg)) % 2


def expected_index(deg_out, degs_in):
    deg_out = tuple(deg_out)
    out = list(deg_out)
    for d in degs_in:
        if len(d) != len(out):
            raise GradingError(f"rank mismatch: {tuple(d)} vs {deg_out}")
        for i, v in enumerate(d):
            out[i] -= v
    return tuple(out)


# -- permutations and signs --------------------------------------------------

def _check_perm(sigma):
    d = len(sigma)
    if sorted(sigma) != list(range(1, d + 1)):
        raise GradingError(f"{tuple(sigma)} is not a permutation of 1..{d}")


def koszul_sign(sigma, parities):
    """(-1)^eps with eps = sum of p_i p_j over i<j, sigma(i)>sigma(j)."""
    if len(sigma) != len(parities):
        raise GradingError(f"permutation of length {len(sigma)} with {len(parities)} parities")
    return -1 if kernels.koszul_exponent(tuple(sigma), tuple(parities)) else 1


def reorder_sign(order, parities):
    """Koszul sign of moving (x_1..x_d) to (x_order[0], ..., x_order[d-1]).

    ``parities[i]`` is the parity of x_{i+1}.  Equals koszul_sign(order^-1).
    This is the sign every relation checker attaches to a permuted tuple.
    """
    if len(order) != len(parities):
        raise GradingError(f"permutation of length {len(order)} with {len(parities)} parities")
    return -1 if kernels.reorder_exponent(tuple(order), tuple(parities)) else 1


def inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s - 1] = i + 1
    return tuple(inv)


def compose(sigma, tau):
    """(sigma ∘ tau)(i) = sigma(tau(i))."""
    return tuple(sigma[t - 1] for t in tau)


def perm_sign(sigma):
    return -1 if kernels.perm_parity(tuple(sigma)) else 1


def unshuffles(j, d):
    return kernels.unshuffles(j, d)


def multi_unshuffles(blocks, ordered=False):
    """(j_1,...,j_k)-unshuffles of S_{j_k}; ``ordered`` keeps Unsh^<.

    ``blocks`` are the cumulative ends j_1 < ... < j_k.  Output order:
    lexicographic in the image tuple.
    """
    blocks = tuple(blocks)
    if not blocks or blocks[0] < 1 or any(b <= a for a, b in zip(blocks, blocks[1:])):
        raise GradingError(f"block ends must be strictly increasing positive integers, got {blocks}")
    n = blocks[-1]
    sizes = [blocks[0]] + [b - a for a, b in zip(blocks, blocks[1:])]
    out = []

    def rec(remaining, i, prefix):
        if i == len(sizes):
            out.append(tuple(prefix))
            return
        for head in combinations(remaining, sizes[i]):
            if ordered and prefix and i > 0 and head[0] < leaders[-1]:
                continue
            leaders.append(head[0])
            hs = set(head)
            rec([r for r in remaining if r not in hs], i + 1, prefix + list(head))
            leaders.pop()

    leaders = []
    rec(list(range(1, n + 1)), 0, [])
    out.sort()
    return out


def ordered_compositions(n):
    """All tuples of cumulative block ends (j_1 < ... < j_k = n)."""
    out = []
    for k in range(1, n + 1):
        for cuts in combinations(range(1, n), k - 1):
            out.append(cuts + (n,))
    return out


# -- graded modules ----------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    id: str
    degree: tuple
    action: Optional[Fraction] = None
    level: Optional[int] = None
    t_power: int = 0

    @property
    def base(self):
        """Id of the t-free generator this one is t times (itself if t-free)."""
        return self.id[2:] if self.t_power else self.id


class GradedModule:
    """Finite-rank free module with a fixed ordered basis."""

    def __init__(self, generators, ring=ZZ, grading=DEFAULT_GRADING):
        self.ring = ring
        self.grading = grading
        self.generators = tuple(generators)
        self._index = {}
        self._deg = {}
        self._par = {}
        for i, g in enumerate(self.generators):
            if g.id in self._index:
                raise StructureError(f"duplicate generator id {g.id!r}")
            if len(g.degree) != grading.rank:
                raise GradingError(f"generator {g.id!r} has degree {g.degree} of wrong rank")
            if g.t_power not in (0, 1):
                raise StructureError(f"generator {g.id!r}: t_power must be 0 or 1")
            if g.t_power and not g.id.startswith("t:"):
                raise StructureError(f"t-generator {g.id!r} must be named 't:<base id>'")
            if g.level is not None and g.level < 0:
                raise StructureError(f"generator {g.id!r}: negative level")
            self._index[g.id] = i
            self._deg[g.id] = g.degree
            self._par[g.id] = parity(grading, g.degree)

    @property
    def ids(self):
        return [g.id for g in self.generators]

    @property
    def rank(self):
        return len(self.generators)

    def __contains__(self, gid):
        return gid in self._index

    def index(self, gid):
        return self._index[gid]

    def generator(self, gid):
        return self.generators[self._index[gid]]

    def degree(self, gid):
        try:
            return self._deg[gid]
        except KeyError:
            raise StructureError(f"unknown generator {gid!r}") from None

    def parity(self, gid):
        try:
            return self._par[gid]
        except KeyError:
            raise StructureError(f"unknown generator {gid!r}") from None

    def sort_key(self, gid):
        """Position used for canonical (sorted) tuples."""
        return self._index[gid]

    def vector_parity(self, vec):
        """Common parity of a nonzero vector's support (None for zero)."""
        ps = {self.parity(k) for k in vec}
        if len(ps) > 1:
            raise GradingError("vector is not parity-homogeneous")
        return ps.pop() if ps else None

    def has_telescope_data(self):
        return any(g.t_power or g.level is not None for g in self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, GradedModule)
            and type(self) is type(other)
            and self.ring == other.ring
            and self.grading == other.grading
            and self.generators == other.generators
        )

    def __repr__(self):
        return f"GradedModule(rank={self.rank}, ring={self.ring})"
