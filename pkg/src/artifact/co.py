"""Closed-open data: maps co_{d,k} from d closed inputs and a length-k hom
chain to a hom element, their relations, and the assembled L-infinity
morphism into Hochschild cochains.

co_{d,k} is stored as an arity-(d+k) op on (x_1..x_d, y_1..y_k) with
degree shift (2-2d-k)*iota.  co_{0,k} is always mu~^k.  The assembled
CO^d sends x to the cochain sum co_{d,k}(x; ys)[z] * (ys, z), which has
Hochschild degree sum|x| + 2 - 2d: the hom shift -k is absorbed by the
cochain degree.
"""

from itertools import combinations_with_replacement, product

from .errors import GradingError, StructureError
from .grading import reorder_sign, unshuffles
from .hochschild import cc_as_linfty, check_ainfty
from .linfty import LInftyMorphism, check_linfty_morphism, check_linfty_relations
from .ops import FunctionOp, TableOp, Verdict, first_failure, vec_repr
from .rings import add_into


class ClosedOpenData:
    def __init__(self, source, target, co, name="", check_mu=True):
        self.source = source
        self.target = target
        self.name = name
        overlap = set(source.module.ids) & set(target.module.ids)
        if overlap:
            raise StructureError(f"closed and open generators share ids: {sorted(overlap)}")
        self.co = {}
        for (d, k), op in co.items():
            if d < 0 or k < 0 or (d == 0 and k == 0):
                raise StructureError(f"co_{{{d},{k}}} is not a valid component")
            if op.arity != d + k:
                raise StructureError(f"co_{{{d},{k}}} must take {d + k} inputs")
            if tuple(op.shift) != self.grading.from_int(2 - 2 * d - k):
                raise GradingError(f"co_{{{d},{k}}} must have degree shift {self.grading.from_int(2 - 2 * d - k)}")
            self.co[(d, k)] = op
        self._enforce_mu(check_mu)
        for (d, k), op in self.co.items():
            if d and isinstance(op, TableOp):
                for ids, out in op.entries():
                    self._check_entry(d, k, ids, out)

    @property
    def grading(self):
        return self.target.grading

    @property
    def ring(self):
        return self.target.ring

    def parity(self, gid):
        if gid in self.source.module:
            return self.source.module.parity(gid)
        return self.target.module.parity(gid)

    def _enforce_mu(self, check):
        mu = self.target.ops_tilde()
        for k in sorted(set(mu) | {k for d, k in self.co if d == 0}):
            given = self.co.get((0, k))
            m = mu.get(k)
            if given is None:
                if m is not None:
                    self.co[(0, k)] = m
                continue
            if not check:
                continue
            for ys in self.target.chains(k):
                a = dict(given(ys))
                b = m(ys) if m is not None else {}
                if add_into(a, b, -1, self.ring):
                    raise StructureError(f"co_{{0,{k}}} differs from mu~^{k} on the chain {list(ys)}")

    def _check_entry(self, d, k, ids, out):
        G = self.grading
        S, T = self.source.module, self.target.module
        xs, ys = ids[:d], ids[d:]
        for x in xs:
            if x not in S:
                raise StructureError(f"co_{{{d},{k}}} entry {ids}: {x!r} is not a closed generator")
        for y in ys:
            if y not in T:
                raise StructureError(f"co_{{{d},{k}}} entry {ids}: {y!r} is not a hom generator")
        if ys and not self.target.composable(ys):
            raise StructureError(f"co_{{{d},{k}}} entry {ids}: chain is not composable")
        want = G.add(G.from_int(2 - 2 * d - k), *(S.degree(x) for x in xs), *(T.degree(y) for y in ys))
        for z in out:
            if z not in T:
                raise StructureError(f"co_{{{d},{k}}} output {z!r} is not a hom generator")
            if ys and self.target.ends[z] != (self.target.source(ys[0]), self.target.target(ys[-1])):
                raise StructureError(f"co_{{{d},{k}}}{ids} -> {z!r} has the wrong ends")
            if not ys and self.target.source(z) != self.target.target(z):
                raise StructureError(f"co_{{{d},0}}{ids} -> {z!r} must be an endomorphism")
            if T.degree(z) != want:
                raise GradingError(f"co_{{{d},{k}}}{ids} -> {z!r} is not degree-homogeneous")

    def caps(self):
        dmax = max((d for d, k in self.co), default=0)
        kmax = max((k for d, k in self.co), default=0)
        return dmax, kmax

    def op(self, d, k, modified=False):
        if d == 0 and modified:
            return self.target.mu.get(k)
        return self.co.get((d, k))


def _apply_at(op, prefix, vec, suffix, ring):
    out = {}
    for g, c in vec.items():
        add_into(out, op(prefix + (g,) + suffix), c, ring)
    return out


def co_residual(C, xs, ys, modified=False):
    """Left side of the closed-open relation on basis inputs (xs; ys).

    Uses the unmodified operations ell~ and mu~ (``modified`` switches to
    ell and mu).
    """
    ring = C.ring
    d, k = len(xs), len(ys)
    L = C.source if modified else C.source.tilde()
    xpar = [C.parity(x) for x in xs]
    yred = [(C.parity(y) + 1) % 2 for y in ys]
    out = {}
    # ell~ inserted into the closed inputs
    for j in range(1, d + 1):
        ell = L.ell(j)
        outer = C.op(d - j + 1, k, modified)
        if ell is None or outer is None:
            continue
        for sigma in unshuffles(j, d):
            v = ell(tuple(xs[i - 1] for i in sigma[:j]))
            if not v:
                continue
            rest = tuple(xs[i - 1] for i in sigma[j:])
            add_into(out, _apply_at(outer, (), v, rest + ys, ring), reorder_sign(sigma, xpar), ring)
    # co nested inside co
    for j in range(0, d + 1):
        sigmas = [tuple(range(1, d + 1))] if j in (0, d) else unshuffles(j, d)
        for sigma in sigmas:
            eps = reorder_sign(sigma, xpar) if 0 < j < d else 1
            xo = tuple(xs[i - 1] for i in sigma[:j])
            xi = tuple(xs[i - 1] for i in sigma[j:])
            so = sum(C.parity(x) for x in xo)
            si = sum(C.parity(x) for x in xi)
            for k1 in range(k + 1):
                pre = sum(yred[:k1])
                for k2 in range(k1, k + 1):
                    inner = C.op(d - j, k2 - k1, modified)
                    outer = C.op(j, k1 + 1 + k - k2, modified)
                    if inner is None or outer is None:
                        continue
                    v = inner(xi + ys[k1:k2])
                    if not v:
                        continue
                    if k1 == k2:
                        obj = C.target.target(ys[k1 - 1]) if k1 else (C.target.source(ys[0]) if ys else None)
                        if obj is not None:
                            v = {z: c for z, c in v.items() if C.target.source(z) == obj}
                    e = (1 + si) * pre + so
                    s = eps * (-1 if e % 2 else 1)
                    add_into(out, _apply_at(outer, xo + ys[:k1], v, ys[k2:], ring), s, ring)
    return out


def _x_tuples(C, d, mode):
    ids = C.source.module.ids
    if mode == "all":
        return product(ids, repeat=d)
    return combinations_with_replacement(ids, d)


def _chains(C, k):
    if k == 0:
        return [()]
    return C.target.chains(k)


def default_relation_caps(C):
    """Caps beyond which every relation holds for lack of nonzero terms."""
    dmax, kmax = C.caps()
    lcap = C.source.tilde().arity_cap
    return max(dmax + lcap - 1, 2 * dmax, 0), max(2 * kmax - 1, 0)


def check_co_relations(C, max_d=None, max_k=None, tuples="canonical", modified=False, jobs=None):
    """Exhaustive closed-open relation check for d <= max_d, k <= max_k.

    Canonical (sorted) closed tuples suffice once co and ell~ are graded
    symmetric; ``tuples="all"`` tries every ordering.
    """
    dd, kk = default_relation_caps(C)
    max_d = dd if max_d is None else max_d
    max_k = kk if max_k is None else max_k
    items = []
    for d in range(0, max_d + 1):
        for k in range(0, max_k + 1):
            if d == 0 and k == 0:
                continue
            for xs in _x_tuples(C, d, tuples):
                for ys in _chains(C, k):
                    items.append((tuple(xs), tuple(ys)))

    def check(item):
        xs, ys = item
        r = co_residual(C, xs, ys, modified)
        if r:
            return {"d": len(xs), "k": len(ys), "xs": list(xs), "ys": list(ys), "residual": vec_repr(r)}
        return None

    bad = first_failure(items, check, jobs)
    name = "closed-open relations" + (" (modified operations)" if modified else "")
    return Verdict(bad is None, name, bad, {"tuples": len(items), "max_d": max_d, "max_k": max_k})


def check_co_symmetry(C, jobs=None):
    """co_{d,k}(.., x_{i+1}, x_i, ..; ys) = (-1)^{|x_i||x_{i+1}|} co_{d,k}(..; ys)."""
    ring = C.ring
    items = []
    for (d, k) in sorted(C.co):
        if d < 2:
            continue
        for xs in product(C.source.module.ids, repeat=d):
            for ys in _chains(C, k):
                items.append((d, k, xs, tuple(ys)))

    def check(item):
        d, k, xs, ys = item
        op = C.co[(d, k)]
        base = op(xs + ys)
        for i in range(d - 1):
            sw = xs[:i] + (xs[i + 1], xs[i]) + xs[i + 2:]
            s = -1 if C.parity(xs[i]) and C.parity(xs[i + 1]) else 1
            diff = add_into(dict(op(sw + ys)), base, -s, ring)
            if diff:
                return {"d": d, "k": k, "xs": list(xs), "ys": list(ys), "swap": [i + 1, i + 2],
                        "difference": vec_repr(diff)}
        return None

    bad = first_failure(items, check, jobs)
    return Verdict(bad is None, "graded symmetry of co", bad, {"tuples": len(items)})


def assemble_CO(C, length_cap=None, modified=False):
    """CO as an L-infinity morphism from the source into CC*(target).

    ``length_cap`` bounds the chains fed to co_{d,k}; it defaults to the
    largest k with a stored component, which is exact for table data.
    """
    cat = C.target
    if modified:
        src = C.source
    else:
        src = C.source.tilde()
        if cat.mu_tilde is not None:
            from .hochschild import AInftyCategory

            cat = AInftyCategory(cat.objects, cat.module, cat.ends, cat.ops_tilde(), name=cat.name)
    dmax, kmax = C.caps()
    cap = kmax if length_cap is None else length_cap
    tgt = cc_as_linfty(cat, length_cap=max(cap, 1), check_axioms=False)
    G = C.grading
    maps = {}
    for d in range(1, dmax + 1):
        comps = {k: op for (dd, k), op in C.co.items() if dd == d and k <= cap}
        if not comps:
            continue

        def fn(xs, comps=comps):
            out = {}
            for k, op in comps.items():
                for ys in _chains(C, k):
                    for z, c in op(tuple(xs) + tuple(ys)).items():
                        add_into(out, {(tuple(ys), z): c}, 1, C.ring)
            return out

        maps[d] = FunctionOp(d, G.from_int(2 - 2 * d), fn)
    return LInftyMorphism(src, tgt, maps)


def check_co_morphism(C, max_arity=None, length_cap=None, modified=False, jobs=None):
    """The assembled-morphism form of the closed-open relations."""
    F = assemble_CO(C, length_cap, modified)
    dd, _ = default_relation_caps(C)
    return check_linfty_morphism(F, max_arity=max(dd, 1) if max_arity is None else max_arity, jobs=jobs)


def check_co_inputs(C, max_arity=4):
    """Preconditions of the relation check: source and target relations, symmetry."""
    v = check_linfty_relations(C.source.tilde(), max_arity)
    if not v:
        return v
    v = check_ainfty(C.target, tilde=True)
    if not v:
        return v
    return check_co_symmetry(C)
