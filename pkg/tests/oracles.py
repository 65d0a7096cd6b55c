"""Independent reference computations used only by the tests.

Nothing here calls into the package's sign, linear-algebra or tree code.
"""

from fractions import Fraction
from itertools import combinations

import sympy
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors


def inversion_sign(sigma, parities):
    """(-1)^(sum of p_i p_j over inverted pairs), counting pairs by brute force."""
    n = len(sigma)
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                e += parities[i] * parities[j]
    return -1 if e % 2 else 1


def sort_sign(values, parities):
    """Koszul sign of bubble-sorting ``values`` into increasing order."""
    vals = list(values)
    pars = list(parities)
    s = 1
    for i in range(len(vals)):
        for j in range(len(vals) - 1 - i):
            if vals[j] > vals[j + 1]:
                if pars[j] and pars[j + 1]:
                    s = -s
                vals[j], vals[j + 1] = vals[j + 1], vals[j]
                pars[j], pars[j + 1] = pars[j + 1], pars[j]
    return s


def dense_rank(rows):
    """Rank over Q by fraction Gaussian elimination."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    rank, cols = 0, len(m[0])
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def dense_invariant_factors(rows, cols):
    if not rows or not cols:
        return []
    fs = sympy_invariant_factors(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(int(f)) for f in fs if f != 0)


def dense_homology(ranks, mats):
    """Homology of C0 -> C1 -> C2 (mats = (d0, d1) dense, rows x cols).

    Returns {degree: (free rank, torsion factors)}.
    """
    d0, d1 = mats
    r0 = dense_rank(d0) if ranks[0] and ranks[1] else 0
    r1 = dense_rank(d1) if ranks[1] and ranks[2] else 0
    t1 = [f for f in dense_invariant_factors(d0, ranks[0]) if f > 1] if ranks[0] and ranks[1] else []
    t2 = [f for f in dense_invariant_factors(d1, ranks[1]) if f > 1] if ranks[1] and ranks[2] else []
    return {
        0: (ranks[0] - r0, []),
        1: (ranks[1] - r1 - r0, t1),
        2: (ranks[2] - r1, t2),
    }


def laminar_interval_families(k):
    """Families of pairwise nested-or-disjoint intervals [a, b] of {1..k}
    with 2 <= b - a + 1 <= k - 1.  Their count per size equals the number of
    planar stable trees with k leaves per number of internal edges."""
    ivs = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1) if b - a + 1 < k]

    def compatible(x, y):
        (a, b), (c, d) = x, y
        return b < c or d < a or (a <= c and d <= b) or (c <= a and b <= d)

    return _laminar(ivs, compatible)


def laminar_set_families(d):
    """Families of pairwise nested-or-disjoint subsets of {1..d} of size 2..d-1."""
    sets = [frozenset(c) for r in range(2, d) for c in combinations(range(1, d + 1), r)]

    def compatible(x, y):
        return not (x & y) or x <= y or y <= x

    return _laminar(sets, compatible)


def _laminar(items, compatible):
    counts = {}

    def rec(start, chosen):
        counts[len(chosen)] = counts.get(len(chosen), 0) + 1
        for i in range(start, len(items)):
            if all(compatible(items[i], c) for c in chosen):
                chosen.append(items[i])
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    return counts


# -- stable trees by repeated edge insertion ------------------------------------------
#
# A node is ("L", label, dashed) or ("V", dashed, seq, bag, flavours): ``seq``
# holds the planar (solid) children in order, ``bag`` the unordered ones.
# Starting from the one-vertex tree, every tree is reached by inserting
# internal edges one at a time, so the closure is the whole face poset.

def _leaves(node):
    if node[0] == "L":
        return {node[1]}
    return set().union(*(_leaves(c) for c in node[2]), *(_leaves(c) for c in node[3]))


def _stable(kind, dashed, seq, bag, fl):
    if kind == "ordered":
        return len(seq) >= 2
    if kind == "unordered":
        return len(bag) >= 2
    if kind == "flavoured":
        return 2 * len(bag) + len(fl) >= 3
    if dashed:
        return len(bag) >= 2
    return 2 * len(bag) + len(seq) >= 2


def _subsets(items):
    items = sorted(items, key=repr)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, r))


def _insertions(kind, node, p):
    """Trees obtained by inserting one edge at this node or below."""
    if node[0] == "L":
        return
    _, dashed, seq, bag, fl = node
    # recurse into children
    for i, c in enumerate(seq):
        for new in _insertions(kind, c, p):
            yield ("V", dashed, seq[:i] + (new,) + seq[i + 1:], bag, fl)
    for c in bag:
        for new in _insertions(kind, c, p):
            yield ("V", dashed, seq, (bag - {c}) | {new}, fl)
    planar = kind == "ordered" or (kind == "two_colored" and not dashed)
    if planar:
        for a in range(len(seq) + 1):
            for b in range(a, len(seq) + 1):
                if a == b and kind == "ordered":
                    continue
                for E in (_subsets(bag) if kind == "two_colored" else [frozenset()]):
                    run = seq[a:b]
                    if len(run) == len(seq) and E == bag:
                        continue
                    if not _stable(kind, False, run, E, frozenset()):
                        continue
                    child = ("V", False, run, E, frozenset())
                    nseq, nbag = seq[:a] + (child,) + seq[b:], bag - E
                    if _stable(kind, dashed, nseq, nbag, fl):
                        yield ("V", dashed, nseq, nbag, fl)
    if kind == "ordered":
        return
    for E in _subsets(bag):
        below = set().union(*(_leaves(c) for c in E)) if E else set()
        H_all = [f for f in fl if p.get(f) in below]
        for H in _subsets(H_all):
            child_dashed = kind == "two_colored"
            if E == bag and H == fl and child_dashed == dashed:
                continue
            if kind == "two_colored" and (H or len(E) < 2):
                continue
            if not _stable(kind, child_dashed, (), E, H):
                continue
            child = ("V", child_dashed, (), E, H)
            nbag = (bag - E) | {child}
            if _stable(kind, dashed, seq, nbag, fl - H):
                yield ("V", dashed, seq, nbag, fl - H)


def stable_tree_closure(kind, k=0, d=0, flavours=None):
    """All stable trees, as canonical nested tuples, mapped to their number
    of internal edges.  ``k`` counts planar leaves, ``d`` unordered ones."""
    p = dict(flavours or {})
    seq = tuple(("L", i, False) for i in range(1, k + 1))
    bag = frozenset(("L", i, kind == "two_colored") for i in range(1, d + 1))
    root = ("V", False, seq, bag, frozenset(p))
    if not _stable(kind, False, seq, bag, frozenset(p)):
        return {}
    seen = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for t in frontier:
            for u in _insertions(kind, t, p):
                if u not in seen:
                    seen[u] = seen[t] + 1
                    nxt.append(u)
        frontier = nxt
    return seen


def canonical_from_package(t, kind):
    """Convert an artifact.trees tree into the nested-tuple form above."""
    if not hasattr(t, "children"):
        return ("L", t.label, kind == "two_colored" and t.dashed)
    kids = [canonical_from_package(c, kind) for c in t.children]
    if kind == "ordered":
        return ("V", False, tuple(kids), frozenset(), frozenset())
    if kind == "two_colored" and not t.dashed:
        seq = tuple(c for c, raw in zip(kids, t.children) if not raw.dashed)
        bag = frozenset(c for c, raw in zip(kids, t.children) if raw.dashed)
        return ("V", False, seq, bag, frozenset())
    return ("V", bool(t.dashed), (), frozenset(kids), frozenset(t.flavours))
