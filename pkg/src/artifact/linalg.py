"""Sparse exact integer linear algebra: Smith normal form and homology."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .errors import NotAComplexError, ParseError, RingError
from .rings import QQ, ZZ, IntegersMod


class SparseIntMatrix:
    """rows x cols matrix stored as {(r, c): nonzero value}."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if v:
                self.entries[(r, c)] = v

    @classmethod
    def from_dense(cls, rows):
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self):
        m = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            m[r][c] = v
        return m

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, SparseIntMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def write_matrix(m):
    """Coordinate exchange format: header 'rows cols nnz' then 'r c v' lines."""
    lines = [f"{m.rows} {m.cols} {len(m.entries)}"]
    for (r, c) in sorted(m.entries):
        lines.append(f"{r} {c} {m.entries[(r, c)]}")
    return "\n".join(lines) + "\n"


def read_matrix(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        rows, cols, nnz = (int(t) for t in lines[0].split())
    except ValueError:
        raise ParseError("header must be 'rows cols nnz'", 1) from None
    if len(lines) - 1 != nnz:
        raise ParseError(f"header announces {nnz} entries, found {len(lines) - 1}")
    entries = {}
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError("entry must be 'row col value'", i)
        r, c = int(parts[0]), int(parts[1])
        v = Fraction(parts[2])
        v = int(v) if v.denominator == 1 else v
        if (r, c) in entries:
            raise ParseError(f"duplicate entry ({r}, {c})", i)
        if not v:
            raise ParseError("stored entries must be nonzero", i)
        if not (0 <= r < rows and 0 <= c < cols):
            raise ParseError(f"entry ({r}, {c}) outside {rows}x{cols}", i)
        entries[(r, c)] = v
    return SparseIntMatrix(rows, cols, entries)


# -- Smith normal form --------------------------------------------------------

@dataclass
class SmithForm:
    factors: list
    U: SparseIntMatrix
    V: SparseIntMatrix
    D: SparseIntMatrix


def smith_normal_form(M, strategy="min", transforms=True):
    """Invariant factors d1 | d2 | ... and unimodular U, V with U*M*V = D.

    ``strategy`` picks the initial pivot of each stage: "min" (smallest
    magnitude) or "first" (first nonzero in row-major order).
    """
    if strategy not in ("min", "first"):
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    for v in M.entries.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            raise RingError("Smith normal form needs integer entries")
    rows, cols = M.rows, M.cols
    if not transforms:
        ents = [(r, c, int(v)) for (r, c), v in M.entries.items()]
        if strategy == "min":
            return kernels.invariant_factors_small(rows, cols, ents)
    a = [[0] * cols for _ in range(rows)]
    for (r, c), v in M.entries.items():
        a[r][c] = int(v)
    U = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else None
    V = [[int(i == j) for j in range(cols)] for i in range(cols)] if transforms else None

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            if V is not None:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def row_axpy(dst, src, q):
        # row dst -= q * row src
        ad, as_ = a[dst], a[src]
        for c in range(cols):
            if as_[c]:
                ad[c] -= q * as_[c]
        if U is not None:
            ud, us = U[dst], U[src]
            for c in range(rows):
                if us[c]:
                    ud[c] -= q * us[c]

    def col_axpy(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    factors = []
    t = 0
    while t < rows and t < cols:
        pivot = None
        for r in range(t, rows):
            for c in range(t, cols):
                v = a[r][c]
                if v and (pivot is None or abs(v) < pivot[0]):
                    pivot = (abs(v), r, c)
                    if strategy == "first":
                        break
            if pivot is not None and strategy == "first":
                break
        if pivot is None:
            break
        swap_rows(t, pivot[1])
        swap_cols(t, pivot[2])
        while True:
            p = a[t][t]
            dirty = False
            for r in range(t + 1, rows):
                if a[r][t]:
                    q = a[r][t] // p
                    if q:
                        row_axpy(r, t, q)
                    if a[r][t]:
                        dirty = True
            for c in range(t + 1, cols):
                if a[t][c]:
                    q = a[t][c] // p
                    if q:
                        col_axpy(c, t, q)
                    if a[t][c]:
                        dirty = True
            if dirty:
                best = (abs(p), t, t)
                for r in range(t + 1, rows):
                    if a[r][t] and abs(a[r][t]) < best[0]:
                        best = (abs(a[r][t]), r, t)
                for c in range(t + 1, cols):
                    if a[t][c] and abs(a[t][c]) < best[0]:
                        best = (abs(a[t][c]), t, c)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = next(
                (r for r in range(t + 1, rows) if any(a[r][c] % p for c in range(t + 1, cols))),
                None,
            )
            if bad is None:
                break
            row_axpy(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        factors.append(a[t][t])
        t += 1
    if not transforms:
        return factors
    D = SparseIntMatrix(rows, cols, {(i, i): f for i, f in enumerate(factors)})
    return SmithForm(factors, SparseIntMatrix.from_dense(U) if rows else SparseIntMatrix(0, 0),
                     SparseIntMatrix.from_dense(V) if cols else SparseIntMatrix(0, 0), D)


def invariant_factors(M, strategy="min"):
    return smith_normal_form(M, strategy=strategy, transforms=False)


def rank_over(M, ring):
    """Rank of M over Q (for Z and Q) or over Z/p."""
    if ring == ZZ:
        return len(invariant_factors(M))
    rows = M.to_dense()
    if ring == QQ:
        conv = Fraction
    elif isinstance(ring, IntegersMod) and ring.is_field:
        conv = ring
    else:
        raise RingError(f"rank over {ring} is not supported (need Z, Q or a prime field)")
    m = [[conv(v) for v in row] for row in rows]
    return _rank_field(m, ring)


def _rank_field(m, ring):
    rank = 0
    nr = len(m)
    nc = len(m[0]) if nr else 0
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(r + 1, nr):
            if m[i][c]:
                f = ring.divide(m[i][c], pv)
                mi, mr = m[i], m[r]
                for j in range(c, nc):
                    if mr[j]:
                        mi[j] = ring(mi[j] - f * mr[j]) if ring != QQ else mi[j] - f * mr[j]
        r += 1
        rank += 1
        if r == nr:
            break
    return rank


# -- complexes ----------------------------------------------------------------

def _int_successor(n):
    return n + 1


@dataclass
class BoundedComplex:
    """Cochain complex of free modules: d maps degree n to successor(n).

    ``ranks`` maps each degree to the rank there; ``differentials[n]`` is a
    (rank[successor(n)] x rank[n]) matrix.  Missing differentials are zero.
    """

    ranks: dict
    differentials: dict = field(default_factory=dict)
    ring: object = ZZ
    successor: object = _int_successor

    def __post_init__(self):
        for n, m in self.differentials.items():
            tgt = self.successor(n)
            if m.cols != self.ranks.get(n, 0) or m.rows != self.ranks.get(tgt, 0):
                raise ValueError(
                    f"differential at {n} is {m.rows}x{m.cols}, expected "
                    f"{self.ranks.get(tgt, 0)}x{self.ranks.get(n, 0)}"
                )

    def degrees(self):
        return sorted(self.ranks)

    def differential(self, n):
        m = self.differentials.get(n)
        if m is None:
            m = SparseIntMatrix(self.ranks.get(self.successor(n), 0), self.ranks.get(n, 0))
        return m

    def incoming(self):
        """Map degree -> the degree whose differential lands there."""
        return {self.successor(n): n for n in self.ranks}


def is_chain_complex(C):
    return _first_square_violation(C) is None


def _first_square_violation(C):
    for n in sorted(C.differentials):
        m = C.differentials[n]
        nxt = C.differentials.get(C.successor(n))
        if nxt is None or m.is_zero():
            continue
        sq = nxt @ m
        if C.ring != ZZ and C.ring != QQ:
            sq = SparseIntMatrix(sq.rows, sq.cols, {k: C.ring(v) for k, v in sq.entries.items()})
        if not sq.is_zero():
            (r, c) = min(sq.entries)
            return n, r, c, sq.entries[(r, c)]
    return None


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple = ()

    def __str__(self):
        parts = [f"Z^{self.rank}" if self.rank else "0"] + [f"Z/{t}" for t in self.torsion]
        return " + ".join(p for p in parts if p != "0") or "0"


def homology(C):
    """Per-degree HomologyGroup: free rank and torsion invariant factors."""
    bad = _first_square_violation(C)
    if bad is not None:
        raise NotAComplexError(*bad)
    pred = C.incoming()
    ranks_d = {}
    torsion_in = {}
    for n in C.ranks:
        m = C.differential(n)
        if C.ring == ZZ:
            fs = invariant_factors(m) if not m.is_zero() else []
            ranks_d[n] = len(fs)
            torsion_in[C.successor(n)] = tuple(f for f in fs if f > 1)
        else:
            ranks_d[n] = rank_over(m, C.ring) if not m.is_zero() else 0
    out = {}
    for n in C.degrees():
        src = pred.get(n)
        im = ranks_d.get(src, 0) if src is not None else 0
        free = C.ranks[n] - ranks_d[n] - im
        out[n] = HomologyGroup(free, torsion_in.get(n, ()) if C.ring == ZZ else ())
    return out
