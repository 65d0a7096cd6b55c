"""Finite A-infinity categories and their Hochschild cochains.

Hom chains are written in composition order y_1, ..., y_k with
y_i in hom(L_{i-1}, L_i); mu^k and cochains send such a chain to
hom(L_0, L_k).  An elementary cochain is the key ``(ys, z)``: it sends the
basis chain ``ys`` to the generator ``z`` and every other basis chain to 0.
Its Hochschild degree is deg z - sum deg y_i + k*iota.
"""

from dataclasses import dataclass, field
from itertools import product

from .errors import GradingError, StructureError, WindowError
from .grading import GradedModule, Generator
from .linalg import BoundedComplex, SparseIntMatrix, homology
from .linfty import from_dgla
from .ops import FunctionOp, TableOp, Verdict, vec_repr
from .rings import add_into


class AInftyCategory:
    """Objects, a hom module (one generator list for all pairs) and mu^k.

    ``ends[id] = (a, b)`` places a hom generator in hom(a, b).  ``mu`` maps
    k to an arity-k op; ``mu_tilde`` (defaults to ``mu``) holds the
    unmodified operations of a telescope-backed category.
    """

    def __init__(self, objects, module, ends, mu, mu_tilde=None, name=""):
        self.objects = list(objects)
        self.module = module
        self.ends = dict(ends)
        self.mu = {k: op for k, op in mu.items() if op is not None}
        self.mu_tilde = dict(mu_tilde) if mu_tilde is not None else None
        self.name = name
        if 0 in self.mu:
            raise StructureError("mu^0 must vanish; do not supply an arity-0 operation")
        objs = set(self.objects)
        for gid in module.ids:
            if gid not in self.ends:
                raise StructureError(f"hom generator {gid!r} has no (source, target)")
            a, b = self.ends[gid]
            if a not in objs or b not in objs:
                raise StructureError(f"hom generator {gid!r} uses unknown object")
        self._chains = {}
        self._validate()

    @property
    def ring(self):
        return self.module.ring

    @property
    def grading(self):
        return self.module.grading

    @property
    def arity_cap(self):
        return max(self.mu, default=0)

    def ops_tilde(self):
        return self.mu if self.mu_tilde is None else self.mu_tilde

    def source(self, gid):
        return self.ends[gid][0]

    def target(self, gid):
        return self.ends[gid][1]

    def composable(self, ys):
        return all(self.target(a) == self.source(b) for a, b in zip(ys, ys[1:]))

    def chains(self, k):
        """All composable basis chains of length k >= 1, in sorted order."""
        if k in self._chains:
            return self._chains[k]
        ids = self.module.ids
        if k == 1:
            res = [(g,) for g in ids]
        else:
            res = [c + (g,) for c in self.chains(k - 1) for g in ids if self.source(g) == self.target(c[-1])]
        self._chains[k] = res
        return res

    def hom_between(self, a, b):
        return [g for g in self.module.ids if self.ends[g] == (a, b)]

    def _validate(self):
        G = self.grading
        for ops in (self.mu, self.mu_tilde or {}):
            for k, op in ops.items():
                if op.arity != k:
                    raise StructureError(f"mu^{k} has arity {op.arity}")
                if tuple(op.shift) != G.from_int(2 - k):
                    raise GradingError(f"mu^{k} must have degree shift {G.from_int(2 - k)}")
                if isinstance(op, TableOp):
                    for ys, out in op.entries():
                        self._check_entry(k, ys, out)

    def _check_entry(self, k, ys, out):
        G = self.grading
        if not self.composable(ys):
            raise StructureError(f"mu^{k} entry {ys} is not a composable chain")
        a, b = self.source(ys[0]), self.target(ys[-1])
        want = G.add(G.from_int(2 - k), *(self.module.degree(y) for y in ys))
        for z in out:
            if self.ends.get(z) != (a, b):
                raise StructureError(f"mu^{k}{ys} has output {z!r} outside hom({a}, {b})")
            if self.module.degree(z) != want:
                raise GradingError(f"mu^{k}{ys} -> {z!r} is not degree-homogeneous")


# -- cochains ------------------------------------------------------------------

class CochainSpace(GradedModule):
    """Hochschild cochains of a category.

    The listed generators are the elementary cochains of length <= cap; any
    other elementary cochain is still a valid id for degree lookups, so
    operations can land outside the listed basis exactly.
    """

    def __init__(self, cat, length_cap, degree_shift=0):
        self.cat = cat
        self.length_cap = length_cap
        self.degree_shift = degree_shift
        gens = [Generator(key, self._degree(key)) for key in elementary_basis(cat, length_cap)]
        super().__init__(gens, cat.ring, cat.grading)

    def _degree(self, key):
        ys, z = key
        G = self.cat.grading
        M = self.cat.module
        return G.shift(G.sub(M.degree(z), G.add(*(M.degree(y) for y in ys)) if ys else G.zero()),
                       len(ys) + self.degree_shift)

    def degree(self, key):
        d = self._deg.get(key)
        if d is None:
            d = self._degree(key)
        return d

    def parity(self, key):
        p = self._par.get(key)
        if p is None:
            p = self.grading.parity(self._degree(key))
        return p

    def shifted(self, n):
        return CochainSpace(self.cat, self.length_cap, self.degree_shift + n)


def elementary_basis(cat, length_cap):
    out = []
    for z in cat.module.ids:
        a, b = cat.ends[z]
        if a == b:
            out.append(((), z))
    for k in range(1, length_cap + 1):
        for ys in cat.chains(k):
            a, b = cat.source(ys[0]), cat.target(ys[-1])
            for z in cat.hom_between(a, b):
                out.append((ys, z))
    return out


def hochschild_degree(cat, key):
    ys, z = key
    G = cat.grading
    M = cat.module
    d = M.degree(z)
    for y in ys:
        d = G.sub(d, M.degree(y))
    return G.shift(d, len(ys))


def _hpar(cat, key):
    ys, z = key
    M = cat.module
    return (M.parity(z) + sum(M.parity(y) for y in ys) + len(ys)) % 2


class Hochschild:
    """Gerstenhaber calculus on cochain vectors of one category."""

    def __init__(self, cat):
        self.cat = cat
        self._circ = {}
        self._mu = None

    def parity(self, key):
        return _hpar(self.cat, key)

    def degree(self, key):
        return hochschild_degree(self.cat, key)

    def circ_elementary(self, e1, e2):
        key = (e1, e2)
        hit = self._circ.get(key)
        if hit is not None:
            return hit
        ys1, z1 = e1
        ys2, z2 = e2
        M = self.cat.module
        psi_odd = (self.parity(e2) + 1) % 2
        out = {}
        acc = 0
        for p, y in enumerate(ys1):
            if y == z2:
                s = -1 if psi_odd and acc % 2 else 1
                k = (ys1[:p] + ys2 + ys1[p + 1:], z1)
                c = out.get(k, 0) + s
                if c:
                    out[k] = c
                else:
                    out.pop(k, None)
            acc += M.parity(y) + 1
        self._circ[key] = out
        return out

    def circ(self, phi, psi):
        """Gerstenhaber product phi ∘ psi of cochain vectors."""
        ring = self.cat.ring
        out = {}
        for e1, c1 in phi.items():
            if not e1[0]:
                continue
            for e2, c2 in psi.items():
                v = self.circ_elementary(e1, e2)
                if v:
                    add_into(out, v, c1 * c2, ring)
        return out

    def bracket_elementary(self, e1, e2):
        a = self.circ_elementary(e1, e2)
        b = self.circ_elementary(e2, e1)
        s = -1 if (self.parity(e1) + 1) * (self.parity(e2) + 1) % 2 else 1
        return add_into(dict(a), b, -s, self.cat.ring)

    def bracket(self, phi, psi):
        ring = self.cat.ring
        out = {}
        for e1, c1 in phi.items():
            for e2, c2 in psi.items():
                v = self.bracket_elementary(e1, e2)
                if v:
                    add_into(out, v, c1 * c2, ring)
        return out

    def mu_cochain(self, tilde=False):
        """The structure cochain mu = sum_k mu^k as a finite vector."""
        if not tilde and self._mu is not None:
            return self._mu
        out = {}
        ops = self.cat.ops_tilde() if tilde else self.cat.mu
        for k, op in ops.items():
            if isinstance(op, TableOp):
                items = op.entries()
            else:
                items = ((ys, op(ys)) for ys in self.cat.chains(k))
            for ys, v in items:
                for z, c in v.items():
                    out[(tuple(ys), z)] = out.get((tuple(ys), z), 0) + c
        out = {k: c for k, c in out.items() if c}
        if not tilde:
            self._mu = out
        return out

    def differential(self, phi):
        """∂φ = [μ, φ] = μ∘φ + (-1)^{|φ|} φ∘μ (termwise in |φ|)."""
        ring = self.cat.ring
        mu = self.mu_cochain()
        out = {}
        for e, c in phi.items():
            v = self.circ(mu, {e: 1})
            add_into(out, v, c, ring)
            w = self.circ({e: 1}, mu)
            add_into(out, w, -c if self.parity(e) else c, ring)
        return out


def gerstenhaber_product(cat, phi, psi):
    return Hochschild(cat).circ(phi, psi)


def gerstenhaber_bracket(cat, phi, psi):
    return Hochschild(cat).bracket(phi, psi)


def hochschild_differential(cat, phi):
    return Hochschild(cat).differential(phi)


def check_ainfty(cat, tilde=False):
    """μ∘μ = 0, computed exactly as a cochain (covers chains of every length)."""
    H = Hochschild(cat)
    mu = H.mu_cochain(tilde)
    sq = H.circ(mu, mu)
    name = "A-infinity relations" + (" (unmodified operations)" if tilde else "")
    if sq:
        key = min(sq, key=lambda k: (len(k[0]), k))
        ys, z = key
        resid = {kk[1]: c for kk, c in sq.items() if kk[0] == ys}
        return Verdict(False, name, {"chain": list(ys), "residual": vec_repr(resid)},
                       {"terms": len(mu)})
    return Verdict(True, name, stats={"terms": len(mu)})


# -- cohomology -------------------------------------------------------------------

def certified_length(cat, lo, hi):
    """Chain length bounding every elementary cochain of degree lo-1..hi+1.

    Returns (bound, reason) or raises WindowError when no bound is provable
    from the degree data.  Only rank-1 gradings are supported.
    """
    G = cat.grading
    if G.rank != 1:
        raise WindowError("Hochschild cohomology windows are supported for rank-1 gradings only")
    M = cat.module
    if not M.ids:
        return 0, "no hom generators"
    iota = G.iota[0]
    w = {g: (iota - M.degree(g)[0]) for g in M.ids}  # -|y|' along Z
    zdeg = [M.degree(g)[0] for g in M.ids if cat.source(g) == cat.target(g)] + \
           [M.degree(g)[0] for g in M.ids]
    zmin, zmax = min(zdeg), max(zdeg)
    lo_n, hi_n = (lo - 1) * iota, (hi + 1) * iota
    longest = _longest_chain(cat)
    if longest is not None:
        return longest, f"hom quiver is acyclic; chains have length <= {longest}"
    gmin, gmax = min(w.values()), max(w.values())
    if gmin >= 1:
        bound = max(0, (hi_n - zmin) // gmin)
        return bound, f"every generator has deg <= 0, so degree grows with length; length <= {bound}"
    if gmax <= -1:
        bound = max(0, (zmax - lo_n) // (-gmax))
        return bound, f"every generator has deg >= 2, so degree falls with length; length <= {bound}"
    raise WindowError(
        "cannot certify the window: hom generators of degree 1, or of mixed sign "
        "reduced degree on a cyclic quiver, allow cochains of unbounded length in one degree"
    )


def _longest_chain(cat):
    ids = cat.module.ids
    succ = {g: [h for h in ids if cat.source(h) == cat.target(g)] for g in ids}
    state, depth = {}, {}

    def visit(g):
        if state.get(g) == 1:
            return False
        if state.get(g) == 2:
            return True
        state[g] = 1
        best = 1
        for h in succ[g]:
            if not visit(h):
                return False
            best = max(best, 1 + depth[h])
        state[g] = 2
        depth[g] = best
        return True

    for g in ids:
        if not visit(g):
            return None
    return max(depth.values(), default=0)


def hochschild_cohomology(cat, window, length_cap=None):
    """HH^n for lo <= n <= hi as {n: HomologyGroup}.

    The window is accepted only if every cochain in degrees lo-1..hi+1 has
    length at most ``length_cap`` (see certified_length); then the finite
    complex computed here is exactly the Hochschild complex there.
    """
    lo, hi = window
    bound, reason = certified_length(cat, lo, hi)
    if length_cap is None:
        length_cap = bound
    elif length_cap < bound:
        raise WindowError(f"length cap {length_cap} is below the certified bound {bound} ({reason})")
    H = Hochschild(cat)
    G = cat.grading
    iota = G.iota[0]
    by_deg = {n: [] for n in range(lo - 1, hi + 2)}
    for key in elementary_basis(cat, length_cap):
        d = hochschild_degree(cat, key)[0]
        if d % iota == 0 and d // iota in by_deg:
            by_deg[d // iota].append(key)
    index = {n: {k: i for i, k in enumerate(keys)} for n, keys in by_deg.items()}
    diffs = {}
    for n in range(lo - 1, hi + 1):
        ents = {}
        for col, key in enumerate(by_deg[n]):
            for out, c in H.differential({key: 1}).items():
                row = index[n + 1].get(out)
                if row is None:
                    raise WindowError(f"differential of {key} leaves the certified window at {out}")
                ents[(row, col)] = c
        diffs[n] = SparseIntMatrix(len(by_deg[n + 1]), len(by_deg[n]), ents)
    C = BoundedComplex({n: len(v) for n, v in by_deg.items()}, diffs, cat.ring)
    hom = homology(C)
    return {n: hom[n] for n in range(lo, hi + 1)}


# -- L-infinity repackaging ---------------------------------------------------------

def cc_as_linfty(cat, length_cap=2, negated=True, check_axioms=True):
    """Negated dgLa structure of CC* as an L-infinity structure.

    Inputs range over elementary cochains of length <= length_cap; the
    operations are exact on cochains of any length.
    """
    H = Hochschild(cat)
    module = CochainSpace(cat, length_cap)
    G = cat.grading
    D = FunctionOp(1, G.from_int(1), lambda ids: H.differential({ids[0]: 1}))
    B = FunctionOp(2, G.from_int(-1), lambda ids: H.bracket_elementary(ids[0], ids[1]))
    L = from_dgla(module, D, B, negated=negated, check_axioms=check_axioms)
    L.name = "CC*"
    L.hochschild = H
    return L
