"""Stable rooted trees indexing strata of the disc, aligned and flavoured
moduli spaces, with the codimension-one split bookkeeping.

Kinds:
  ordered      planar trees with k boundary leaves, vertex stable iff k_v >= 2
  unordered    d labeled leaves, vertex stable iff d_v >= 2
  two_colored  solid (boundary) and dashed (interior) leaves; a solid vertex
               is stable iff 2 d_v + k_v >= 2, a dashed one iff d_v >= 2
  flavoured    unordered with flavour sets F_v, stable iff 2 d_v + |F_v| >= 3

Text form: a leaf is its label, a vertex is ``(child child ...)``, a
leading ``~`` marks a dashed edge and ``{f g}`` right after ``(`` lists the
vertex's flavours.  Example: ``({f} 1 ~(~2 ~3))``.
"""

import re
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, factorial

from .errors import StructureError
from .grading import perm_sign

KINDS = ("ordered", "unordered", "two_colored", "flavoured")


@dataclass(frozen=True)
class Leaf:
    label: int
    dashed: bool = False


@dataclass(frozen=True)
class Vertex:
    children: tuple
    dashed: bool = False
    flavours: tuple = ()


@dataclass(frozen=True)
class Flavouring:
    """p : F -> {1..d}; F is an ordered tuple of names."""

    F: tuple
    p: dict

    def __post_init__(self):
        if set(self.F) != set(self.p):
            raise StructureError("flavour map must be defined exactly on F")

    def __hash__(self):
        return hash((self.F, tuple(sorted(self.p.items()))))


# -- basic structure --------------------------------------------------------------

def leaves(t):
    if isinstance(t, Leaf):
        return (t,)
    return tuple(l for c in t.children for l in leaves(c))


def leaf_labels(t, dashed=None):
    return sorted(l.label for l in leaves(t) if dashed is None or l.dashed == dashed)


def vertices(t, path=()):
    """(path, vertex) pairs in preorder; the path lists child indices from the root."""
    if isinstance(t, Leaf):
        return []
    out = [(path, t)]
    for i, c in enumerate(t.children):
        out.extend(vertices(c, path + (i,)))
    return out


def internal_edges(t):
    return len(vertices(t)) - 1


def _min_label(t):
    return min(l.label for l in leaves(t)) if leaves(t) else 0


def _dashed_key(t):
    return min(l.label for l in leaves(t))


def flavours_used(t):
    return [f for _, v in vertices(t) for f in v.flavours]


# -- stability and dimension ----------------------------------------------------------

def _counts(v):
    d = sum(1 for c in v.children if c.dashed)
    k = len(v.children) - d
    return d, k


def check_condition_star(t, flav):
    """Every f in F_v has p(f) among the leaves above v; F is covered once."""
    seen = []
    for _, v in vertices(t):
        labels = set(leaf_labels(v))
        for f in v.flavours:
            if f not in flav.p:
                raise StructureError(f"vertex carries unknown flavour {f!r}")
            if flav.p[f] not in labels:
                raise StructureError(f"flavour {f!r} sits off the path from the root to leaf {flav.p[f]}")
            seen.append(f)
    if sorted(seen, key=str) != sorted(flav.F, key=str):
        raise StructureError("flavour partition is not a partition of F")


def is_stable(t, kind="unordered", flav=None):
    if flav is not None:
        check_condition_star(t, flav)
    for _, v in vertices(t):
        d, k = _counts(v)
        n = len(v.children)
        if kind == "flavoured":
            if 2 * n + len(v.flavours) < 3:
                return False
        elif kind == "two_colored":
            if v.dashed:
                if n < 2:
                    return False
            elif 2 * d + k < 2:
                return False
        elif kind in ("ordered", "unordered"):
            if n < 2:
                return False
        else:
            raise ValueError(f"unknown tree kind {kind!r}")
    return True


def top_dimension(kind, leaves_count, interior=0, flavour_count=0):
    if kind == "ordered":
        return leaves_count - 2
    if kind == "unordered":
        return 2 * leaves_count - 3
    if kind == "two_colored":
        return 2 * interior + leaves_count - 2
    if kind == "flavoured":
        return 2 * leaves_count + flavour_count - 3
    raise ValueError(f"unknown tree kind {kind!r}")


def stratum_dimension(t, kind="unordered", flav=None):
    """Dimension of the stratum indexed by t (the displayed global formula)."""
    if not is_stable(t, kind, flav):
        raise StructureError("stratum dimension is defined for stable trees only")
    ls = leaves(t)
    if kind == "two_colored":
        d = sum(1 for l in ls if l.dashed)
        top = top_dimension(kind, len(ls) - d, d)
    elif kind == "flavoured":
        top = top_dimension(kind, len(ls), flavour_count=len(flavours_used(t)))
    else:
        top = top_dimension(kind, len(ls))
    return top - internal_edges(t)


def local_dimension_sum(t, kind="unordered"):
    """Sum over vertices of the dimension of that vertex's own top stratum."""
    total = 0
    for _, v in vertices(t):
        d, k = _counts(v)
        n = len(v.children)
        if kind == "ordered":
            total += n - 2
        elif kind == "unordered":
            total += 2 * n - 3
        elif kind == "flavoured":
            total += 2 * n + len(v.flavours) - 3
        elif kind == "two_colored":
            total += 2 * n - 3 if v.dashed else 2 * d + k - 2
    return total


# -- enumeration -------------------------------------------------------------------------

def set_partitions(items):
    """Set partitions of a list, blocks in order of their first element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _compositions(lo, hi, min_parts):
    """Ways to cut [lo, hi) into consecutive nonempty intervals."""
    n = hi - lo
    for m in range(min_parts, n + 1):
        for cuts in combinations(range(lo + 1, hi), m - 1):
            bounds = (lo,) + cuts + (hi,)
            yield [(a, b) for a, b in zip(bounds, bounds[1:])]


def _ordered(lo, hi):
    if hi - lo == 1:
        return [Leaf(lo)]
    out = []
    for parts in _compositions(lo, hi, 2):
        for kids in product(*(_ordered(a, b) for a, b in parts)):
            out.append(Vertex(tuple(kids)))
    return out


def _unordered(labels):
    labels = tuple(sorted(labels))
    if len(labels) == 1:
        return [Leaf(labels[0])]
    out = []
    for part in set_partitions(labels):
        if len(part) < 2:
            continue
        for kids in product(*(_unordered(b) for b in part)):
            out.append(Vertex(tuple(sorted(kids, key=_min_label))))
    return out


def _dashed(labels):
    labels = tuple(sorted(labels))
    if len(labels) == 1:
        return [Leaf(labels[0], True)]
    out = []
    for part in set_partitions(labels):
        if len(part) < 2:
            continue
        for kids in product(*(_dashed(b) for b in part)):
            out.append(Vertex(tuple(sorted(kids, key=_dashed_key)), True))
    return out


def _solid_sequences(lo, hi, interior, forbid=None):
    """Planar sequences of solid subtrees covering [lo, hi), using disjoint
    subsets of ``interior``; yields (children, used interior labels).
    ``forbid`` excludes one child block (the parent's own data)."""
    if lo == hi:
        yield [], frozenset()
    # next child: interval [lo, m) with m >= lo, plus an interior subset
    for m in range(lo, hi + 1):
        for r in range(len(interior) + 1):
            for sub in combinations(sorted(interior), r):
                if m == lo and not sub:
                    continue
                sub = frozenset(sub)
                if forbid == (lo, m, sub):
                    continue
                for child in _solid(lo, m, sub):
                    for rest, used in _solid_sequences(m, hi, interior - sub):
                        yield [child] + rest, sub | used


def _solid(lo, hi, interior):
    if hi - lo == 1 and not interior:
        return [Leaf(lo)]
    out = []
    for kids, used in _solid_sequences(lo, hi, interior, (lo, hi, interior)):
        free = sorted(interior - used)
        for part in set_partitions(free):
            if 2 * len(part) + len(kids) < 2:
                continue
            if len(kids) == 1 and not part:
                continue
            for dash in product(*(_dashed(b) for b in part)):
                out.append(Vertex(tuple(kids) + tuple(sorted(dash, key=_dashed_key))))
    return out


def _flavoured(labels, G, p):
    labels = tuple(sorted(labels))
    if len(labels) == 1 and not G:
        return [Leaf(labels[0])]
    out = []
    for part in set_partitions(labels):
        for r in range(len(G) + 1):
            for here in combinations(G, r):
                if 2 * len(part) + len(here) < 3:
                    continue
                rest = [f for f in G if f not in here]
                blocks = [[f for f in rest if p[f] in b] for b in part]
                for kids in product(*(_flavoured(b, g, p) for b, g in zip(part, blocks))):
                    out.append(Vertex(tuple(sorted(kids, key=_min_label)), flavours=tuple(here)))
    return out


def enumerate_stable_trees(kind, leaves_count, interior=0, flavouring=None, max_internal_edges=None):
    """All stable trees of the given kind, duplicate-free and in canonical form.

    For ``two_colored``, ``leaves_count`` is the number k of boundary leaves
    and ``interior`` the number d of dashed leaves.  For ``flavoured`` pass
    a Flavouring on {1..leaves_count}.
    """
    if kind == "ordered":
        if leaves_count < 2:
            raise ValueError("ordered trees need k >= 2")
        trees = _ordered(1, leaves_count + 1)
    elif kind == "unordered":
        if leaves_count < 2:
            raise ValueError("unordered trees need d >= 2")
        trees = _unordered(range(1, leaves_count + 1))
    elif kind == "two_colored":
        if 2 * interior + leaves_count < 2:
            raise ValueError("two-colored trees need 2d + k >= 2")
        trees = _solid(1, leaves_count + 1, frozenset(range(1, interior + 1)))
    elif kind == "flavoured":
        flav = flavouring or Flavouring((), {})
        if leaves_count < 1:
            raise ValueError("flavoured trees need d >= 1")
        for f in flav.F:
            if not 1 <= flav.p[f] <= leaves_count:
                raise StructureError(f"flavour {f!r} points at a missing leaf")
        if 2 * leaves_count + len(flav.F) < 3:
            return []
        trees = _flavoured(range(1, leaves_count + 1), list(flav.F), flav.p)
    else:
        raise ValueError(f"unknown tree kind {kind!r}")
    if max_internal_edges is not None:
        trees = [t for t in trees if internal_edges(t) <= max_internal_edges]
    return trees


# -- weights ---------------------------------------------------------------------------------

@dataclass
class WeightedTree:
    tree: object
    flavouring: object
    root_weight: int
    weights: dict  # path of the node an edge flows into -> weight

    def verify(self):
        for path, v in vertices(self.tree):
            n_in = self.weights[path]
            n_out = sum(self.weights[path + (i,)] for i in range(len(v.children)))
            if n_in != n_out + len(v.flavours):
                return False
        return self.weights[()] == self.root_weight


def propagate_weights(t, flav, root_weight, leaf_weights):
    """Edge weights with n_in = sum n_out + |F_v| at every vertex.

    ``leaf_weights`` maps leaf labels to weights; the global balance
    n_0 = sum n_i + |F| is checked first.
    """
    F = flav.F if flav is not None else ()
    labels = leaf_labels(t)
    if sorted(leaf_weights) != labels:
        raise StructureError("leaf weights must be given for exactly the tree's leaves")
    if root_weight != sum(leaf_weights.values()) + len(F):
        raise StructureError(
            f"root weight {root_weight} != sum of leaf weights {sum(leaf_weights.values())} + |F| = {len(F)}"
        )
    if flav is not None:
        check_condition_star(t, flav)
    weights = {}

    def rec(node, path):
        if isinstance(node, Leaf):
            w = leaf_weights[node.label]
        else:
            w = sum(rec(c, path + (i,)) for i, c in enumerate(node.children)) + len(node.flavours)
        weights[path] = w
        return w

    rec(t, ())
    wt = WeightedTree(t, flav, root_weight, weights)
    if not wt.verify():
        raise StructureError("weight propagation failed its post-check")
    return wt


# -- codimension one -----------------------------------------------------------------------------

def split_count(d, d_minus):
    """Number of (S+, S-) with |S-| = d_minus: d!/(d_-! (d_+ - 1)!)."""
    d_plus = d + 1 - d_minus
    return factorial(d) // (factorial(d_minus) * factorial(d_plus - 1))


def codim1_splits(d, d_minus=None):
    """(S+, S-) with S- the leaves above the lower vertex, |S-| >= 1."""
    out = []
    sizes = range(1, d + 1) if d_minus is None else [d_minus]
    for m in sizes:
        for s_minus in combinations(range(1, d + 1), m):
            s_plus = tuple(i for i in range(1, d + 1) if i not in s_minus)
            out.append((s_plus, s_minus))
    return out


def split_tree(d, s_plus, s_minus):
    """The two-vertex unordered tree of a split."""
    lower = Vertex(tuple(Leaf(i) for i in s_minus))
    kids = [Leaf(i) for i in s_plus] + [lower]
    return Vertex(tuple(sorted(kids, key=_min_label)))


def split_flavour_q(q, p, split, f_plus=None):
    """Break q : G -> {1..d} along a split into (q+, q-).

    q+ is defined on all of G and sends g to "e" when q(g) lies in S-.  q-
    is defined on p+^{-1}(e) followed by q+^{-1}(e), where p+ is p restricted
    to the flavours ``f_plus`` at the upper vertex (default: all of F).
    """
    s_plus, s_minus = split
    s_minus = set(s_minus)
    for j in set(q.values()) & set(p.values()):
        raise StructureError(f"flavour constraint violated: both p and q hit {j}")
    if set(p) & set(q):
        raise StructureError("flavour names of p and q must be distinct")
    q_plus = {g: ("e" if j in s_minus else j) for g, j in q.items()}
    fp = list(p) if f_plus is None else list(f_plus)
    p_plus = {f: ("e" if p[f] in s_minus else p[f]) for f in fp}
    q_minus = {}
    for f, j in p_plus.items():
        if j == "e":
            q_minus[f] = p[f]
    for g, j in q_plus.items():
        if j == "e":
            q_minus[g] = q[g]
    return q_plus, q_minus


# -- symmetry groups --------------------------------------------------------------------------------

def sym_action_sign(pi):
    """sgn(pi) for a permutation of F given as images 1..|F|."""
    return perm_sign(tuple(pi))


def in_sym_p(pi, flav):
    """pi (a dict F -> F) preserves p: p(pi(f)) = p(f)."""
    return _is_bijection(pi, flav.F) and all(flav.p[pi[f]] == flav.p[f] for f in flav.F)


def in_sym_dp(sigma, pi, flav):
    """(sigma, pi) in Sym(d, p): p(pi(f)) = sigma(p(f)); sigma as images."""
    return _is_bijection(pi, flav.F) and all(flav.p[pi[f]] == sigma[flav.p[f] - 1] for f in flav.F)


def in_sym_dkp(sigma, pi, flav, k):
    """Membership in Sym(d, k, p): as Sym(k+d, p) with sigma fixing 1..k."""
    return all(sigma[i] == i + 1 for i in range(k)) and in_sym_dp(sigma, pi, flav)


def _is_bijection(pi, F):
    return set(pi) == set(F) and sorted(map(str, pi.values())) == sorted(map(str, F))


# -- text form ---------------------------------------------------------------------------------------

def format_tree(t):
    pre = "~" if t.dashed else ""
    if isinstance(t, Leaf):
        return f"{pre}{t.label}"
    fl = "{" + " ".join(t.flavours) + "} " if t.flavours else ""
    return f"{pre}({fl}" + " ".join(format_tree(c) for c in t.children) + ")"


_TOKEN = re.compile(r"\s*(~|\(|\)|\{[^}]*\}|-?\d+)")


def parse_tree(text):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise StructureError(f"bad tree text at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def node():
        nonlocal i
        dashed = False
        if i < len(toks) and toks[i] == "~":
            dashed = True
            i += 1
        if i >= len(toks):
            raise StructureError("tree text ends early")
        tok = toks[i]
        i += 1
        if tok == "(":
            flav = ()
            if i < len(toks) and toks[i].startswith("{"):
                flav = tuple(toks[i][1:-1].split())
                i += 1
            kids = []
            while i < len(toks) and toks[i] != ")":
                kids.append(node())
            if i >= len(toks):
                raise StructureError("unbalanced parentheses in tree text")
            i += 1
            if not kids:
                raise StructureError("vertex without children")
            return Vertex(tuple(kids), dashed, flav)
        if tok.lstrip("-").isdigit():
            return Leaf(int(tok), dashed)
        raise StructureError(f"unexpected token {tok!r}")

    t = node()
    if i != len(toks):
        raise StructureError("trailing text after tree")
    return t


def tree_table(kind, leaves_count, interior=0, flavouring=None):
    """Counts per number of internal edges plus dimension data."""
    trees = enumerate_stable_trees(kind, leaves_count, interior, flavouring)
    by_edges = {}
    for t in trees:
        by_edges[internal_edges(t)] = by_edges.get(internal_edges(t), 0) + 1
    return {"kind": kind, "count": len(trees), "by_internal_edges": {str(k): v for k, v in sorted(by_edges.items())}}


def split_table(d):
    """Per (d+, d-) the direct count of one-edge unordered trees and the formula."""
    rows = []
    trees = enumerate_stable_trees("unordered", d, max_internal_edges=1) if d >= 2 else []
    for d_minus in range(2, d):
        d_plus = d + 1 - d_minus
        direct = sum(
            1 for t in trees if internal_edges(t) == 1
            and len([c for c in t.children if isinstance(c, Vertex)][0].children) == d_minus
        )
        rows.append({"d_plus": d_plus, "d_minus": d_minus, "count": direct, "formula": split_count(d, d_minus)})
    return rows
