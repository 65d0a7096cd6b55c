"""L-infinity structures: relations, symmetry, conventions, morphisms, MC.

Convention: ell^d has degree (3-2d)*iota, is graded symmetric for the plain
degrees, and satisfies

    sum_{j, sigma in Unsh(j,n)} e(sigma) ell^{n-j+1}(ell^j(x_s1..x_sj), x_s(j+1)..x_sn) = 0,

where e(sigma) is the Koszul sign of moving (x_1..x_n) to (x_s1..x_sn).
The "LM" convention uses degrees shifted down by iota, antisymmetric
operations l_d of degree 2-d and the Lada-Markl relation.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial

from .errors import DgLaAxiomError, GradingError, RingError
from .grading import (
    GradedModule,
    Generator,
    multi_unshuffles,
    ordered_compositions,
    perm_sign,
    reorder_sign,
    unshuffles,
)
from .ops import FunctionOp, TableOp, Verdict, first_failure, scaled_op, vec_repr
from .rings import QQ, ZZ, add_into


@dataclass
class LInftyStructure:
    module: GradedModule
    ops: dict
    convention: str = "ours"
    name: str = ""
    ops_tilde: dict = None

    @property
    def arity_cap(self):
        return max(self.ops, default=0)

    def ell(self, d):
        return self.ops.get(d)

    def tilde(self):
        """The unmodified structure of a telescope-backed algebra (else self)."""
        if self.ops_tilde is None:
            return self
        return LInftyStructure(self.module, self.ops_tilde, self.convention, self.name)

    @property
    def ring(self):
        return self.module.ring

    def basis(self):
        return self.module.ids


@dataclass
class LInftyMorphism:
    source: LInftyStructure
    target: LInftyStructure
    maps: dict

    @property
    def arity_cap(self):
        return max(self.maps, default=0)


def _tuples(module, n, mode):
    ids = module.ids
    if mode == "all":
        return product(ids, repeat=n)
    return combinations_with_replacement(ids, n)


def _apply_first(op, vec, rest, ring):
    """op(vec, rest...) with vec a vector and rest basis ids."""
    out = {}
    for k, c in vec.items():
        add_into(out, op((k,) + rest), c, ring)
    return out


# -- graded symmetry ------------------------------------------------------------

def check_graded_symmetry(op, module, antisymmetric=False, name="op", jobs=None):
    """Check op(.., x_{i+1}, x_i, ..) = ±(-1)^{|x_i||x_{i+1}|} op(..) on all basis tuples.

    Adjacent transpositions generate the symmetric group, so this covers
    every permutation.  ``antisymmetric`` adds the extra sign of the
    Lada-Markl convention.
    """
    d = op.arity
    if d < 2:
        return Verdict(True, f"graded symmetry of {name}", stats={"tuples": 0})
    ring = module.ring
    extra = -1 if antisymmetric else 1

    def check(ids):
        base = op(ids)
        for i in range(d - 1):
            sw = ids[:i] + (ids[i + 1], ids[i]) + ids[i + 2:]
            s = extra * (-1 if module.parity(ids[i]) and module.parity(ids[i + 1]) else 1)
            diff = add_into(dict(op(sw)), base, -s, ring)
            if diff:
                images = list(range(1, d + 1))
                images[i], images[i + 1] = images[i + 1], images[i]
                return {"tuple": list(ids), "sigma": images, "difference": vec_repr(diff)}
        return None

    tuples = list(product(module.ids, repeat=d))
    bad = first_failure(tuples, check, jobs)
    return Verdict(bad is None, f"graded symmetry of {name}", bad, {"tuples": len(tuples)})


def check_symmetry(L, max_arity=None, jobs=None):
    cap = L.arity_cap if max_arity is None else min(max_arity, L.arity_cap)
    for d in range(2, cap + 1):
        op = L.ell(d)
        if op is None:
            continue
        v = check_graded_symmetry(op, L.module, L.convention == "LM", f"ell^{d}", jobs)
        if not v:
            return v
    return Verdict(True, "graded symmetry")


# -- relations ------------------------------------------------------------------

def relation_residual(L, xs):
    """Left side of the L-infinity relation on the basis tuple xs."""
    n = len(xs)
    ring = L.ring
    pars = [L.module.parity(x) for x in xs]
    out = {}
    lm = L.convention == "LM"
    for j in range(1, n + 1):
        inner = L.ell(j)
        outer = L.ell(n - j + 1)
        if inner is None or outer is None:
            continue
        for sigma in unshuffles(j, n):
            s = reorder_sign(sigma, pars)
            if lm:
                s *= perm_sign(sigma) * (-1 if (j * (n - j)) % 2 else 1)
            head = tuple(xs[i - 1] for i in sigma[:j])
            rest = tuple(xs[i - 1] for i in sigma[j:])
            v = inner(head)
            if not v:
                continue
            add_into(out, _apply_first(outer, v, rest, ring), s, ring)
    return out


def check_linfty_relations(L, max_arity=4, tuples="canonical", jobs=None):
    """Exhaustive relation check up to total arity ``max_arity``.

    With ``tuples="canonical"`` only sorted basis tuples are tried; the
    residual is Koszul-equivariant once the operations are graded symmetric,
    so this covers every tuple.  ``tuples="all"`` tries every ordering.
    """
    checked = 0
    for n in range(1, max_arity + 1):
        items = list(_tuples(L.module, n, tuples))
        checked += len(items)

        def check(xs, n=n):
            r = relation_residual(L, tuple(xs))
            if r:
                return {"arity": n, "tuple": list(xs), "residual": vec_repr(r)}
            return None

        bad = first_failure(items, check, jobs)
        if bad is not None:
            return Verdict(False, "L-infinity relations", bad, {"tuples": checked})
    return Verdict(True, "L-infinity relations", stats={"tuples": checked, "max_arity": max_arity})


# -- conventions ------------------------------------------------------------------

def _lm_exponent(ids, parity):
    d = len(ids)
    return sum((d - i) * parity(x) for i, x in enumerate(ids, start=1)) % 2


def _shift_module(module, n):
    G = module.grading
    gens = [
        Generator(g.id, G.shift(g.degree, n), g.action, g.level, g.t_power) for g in module.generators
    ]
    return _clone_module(module, gens, n)


def _clone_module(module, gens, n):
    if hasattr(module, "shifted"):
        return module.shifted(n)
    return GradedModule(gens, module.ring, module.grading)


def to_lada_markl(L):
    """Re-express L in the Lada-Markl convention (degrees shifted by -iota)."""
    if L.convention != "ours":
        raise ValueError("structure is already in the LM convention")
    par = L.module.parity
    G = L.module.grading
    ops = {}
    for d, op in L.ops.items():
        ops[d] = scaled_op(op, lambda ids: -1 if _lm_exponent(ids, par) else 1,
                           shift=G.shift(op.shift, d - 1))
    return LInftyStructure(_shift_module(L.module, -1), ops, "LM", L.name)


def from_lada_markl(L):
    """Inverse of to_lada_markl."""
    if L.convention != "LM":
        raise ValueError("structure is not in the LM convention")
    M = _shift_module(L.module, 1)
    par = M.parity
    G = M.grading
    ops = {}
    for d, op in L.ops.items():
        ops[d] = scaled_op(op, lambda ids: -1 if _lm_exponent(ids, par) else 1,
                           shift=G.shift(op.shift, 1 - d))
    return LInftyStructure(M, ops, "ours", L.name)


def negate(L):
    ops = {}
    for d, op in L.ops.items():
        if isinstance(op, TableOp):
            ops[d] = op.map_values(lambda k, v: {o: -c for o, c in v.items()})
        else:
            ops[d] = scaled_op(op, lambda ids: -1)
    return LInftyStructure(L.module, ops, L.convention, L.name)


# -- dgLa adapter -------------------------------------------------------------------

def check_dgla_axioms(module, differential, bracket, basis=None):
    """Raise DgLaAxiomError on the first failing axiom.

    Degrees in the dgLa are the module degrees minus iota, so the dgLa
    parity of x is parity(x) + 1.
    """
    ring = module.ring
    ids = list(module.ids if basis is None else basis)
    dp = lambda x: 1 - module.parity(x)

    for x in ids:
        if differential.apply([differential((x,))], ring):
            raise DgLaAxiomError("d^2=0", f"d(d({x!r})) != 0")
    for a, b in product(ids, repeat=2):
        ab = bracket((a, b))
        ba = bracket((b, a))
        s = -1 if dp(a) * dp(b) else 1
        if add_into(dict(ab), ba, s, ring):
            raise DgLaAxiomError("antisymmetry", f"[{a!r},{b!r}] + (-1)^|a||b| [{b!r},{a!r}] != 0")
        lhs = differential.apply([ab], ring)
        rhs = bracket.apply([differential((a,)), {b: 1}], ring)
        add_into(rhs, bracket.apply([{a: 1}, differential((b,))], ring), -1 if dp(a) else 1, ring)
        if add_into(lhs, rhs, -1, ring):
            raise DgLaAxiomError("Leibniz", f"d[{a!r},{b!r}] != [da,b] + (-1)^|a| [a,db]")
    for a, b, c in product(ids, repeat=3):
        lhs = bracket.apply([{a: 1}, bracket((b, c))], ring)
        rhs = bracket.apply([bracket((a, b)), {c: 1}], ring)
        add_into(rhs, bracket.apply([{b: 1}, bracket((a, c))], ring), -1 if dp(a) * dp(b) else 1, ring)
        if add_into(lhs, rhs, -1, ring):
            raise DgLaAxiomError("Jacobi", f"on ({a!r}, {b!r}, {c!r})")


def from_dgla(module, differential, bracket, negated=True, check_axioms=True, axiom_basis=None):
    """L-infinity structure of a dgLa whose shifted degrees are the module's.

    negated: ell^1 = -D, ell^2(x,y) = (-1)^{1+|x|}[x,y]
    otherwise: ell^1 = D, ell^2(x,y) = (-1)^{|x|}[x,y]
    """
    if check_axioms:
        check_dgla_axioms(module, differential, bracket, axiom_basis)
    G = module.grading
    par = module.parity
    s1 = -1 if negated else 1
    base = 1 if negated else 0

    def l1(ids):
        v = differential(ids)
        return v if s1 == 1 else {k: -c for k, c in v.items()}

    def l2(ids):
        v = bracket(ids)
        if (base + par(ids[0])) % 2:
            return {k: -c for k, c in v.items()}
        return v

    ops = {1: FunctionOp(1, G.from_int(1), l1), 2: FunctionOp(2, G.from_int(-1), l2)}
    return LInftyStructure(module, ops, "ours", "dgla")


# -- morphisms ------------------------------------------------------------------------

def morphism_residual(F, xs):
    src, tgt = F.source, F.target
    ring = tgt.ring
    n = len(xs)
    pars = [src.module.parity(x) for x in xs]
    out = {}
    for j in range(1, n + 1):
        inner = src.ell(j)
        outer = F.maps.get(n - j + 1)
        if inner is None or outer is None:
            continue
        for sigma in unshuffles(j, n):
            head = tuple(xs[i - 1] for i in sigma[:j])
            v = inner(head)
            if not v:
                continue
            rest = tuple(xs[i - 1] for i in sigma[j:])
            add_into(out, _apply_first(outer, v, rest, ring), reorder_sign(sigma, pars), ring)
    for blocks in ordered_compositions(n):
        ell = tgt.ell(len(blocks))
        if ell is None:
            continue
        sizes = [blocks[0]] + [b - a for a, b in zip(blocks, blocks[1:])]
        if any(F.maps.get(s) is None for s in sizes):
            continue
        for sigma in multi_unshuffles(blocks, ordered=True):
            vecs = []
            start = 0
            for s in sizes:
                part = tuple(xs[i - 1] for i in sigma[start:start + s])
                vecs.append(F.maps[s](part))
                start += s
            if any(not v for v in vecs):
                continue
            add_into(out, ell.apply(vecs, ring), -reorder_sign(sigma, pars), ring)
    return out


def check_linfty_morphism(F, max_arity=4, tuples="canonical", jobs=None):
    checked = 0
    for n in range(1, max_arity + 1):
        items = list(_tuples(F.source.module, n, tuples))
        checked += len(items)

        def check(xs, n=n):
            r = morphism_residual(F, tuple(xs))
            if r:
                return {"arity": n, "tuple": list(xs), "residual": vec_repr(r)}
            return None

        bad = first_failure(items, check, jobs)
        if bad is not None:
            return Verdict(False, "L-infinity morphism relations", bad, {"tuples": checked})
    return Verdict(True, "L-infinity morphism relations", stats={"tuples": checked, "max_arity": max_arity})


# -- Maurer-Cartan -----------------------------------------------------------------------

def mc_residual(L, x, max_arity=None, nilpotent_order=None):
    """sum_{d<=D} ell^d(x,...,x)/d! for x of even parity in our grading.

    Over Z this needs ``nilpotent_order`` N: terms with d >= N must vanish
    (checked) and the remaining ones must be divisible by d! (checked).
    """
    D = L.arity_cap if max_arity is None else max_arity
    ring = L.ring
    if not x:
        return {}
    p = L.module.vector_parity(x)
    if p != 0:
        raise GradingError("Maurer-Cartan elements have even parity in this convention")
    if ring != QQ and nilpotent_order is None:
        raise RingError(f"MC residual over {ring} needs 1/d! or an explicit nilpotency order")
    out = {}
    for d in range(1, D + 1):
        op = L.ell(d)
        if op is None:
            continue
        term = op.apply([x] * d, ring)
        if not term:
            continue
        if ring != QQ:
            if d >= nilpotent_order:
                raise RingError(f"x is not nilpotent of order {nilpotent_order}: ell^{d}(x,..,x) != 0")
            term = {k: ring.divide(c, factorial(d)) for k, c in term.items()}
        else:
            term = {k: c / factorial(d) for k, c in term.items()}
        add_into(out, term, 1, ring)
    return out


# -- boundary sign -------------------------------------------------------------------------

def boundary_sign(sigma, parities, s_minus=None):
    """(-1)^{1+eps} for the unshuffle sigma = (s-_1..s-_{d-}, s+_1..)."""
    sigma = tuple(sigma)
    d = len(sigma)
    if sorted(sigma) != list(range(1, d + 1)):
        raise GradingError(f"{sigma} is not a permutation")
    if s_minus is not None:
        k = len(s_minus)
        if tuple(sigma[:k]) != tuple(sorted(s_minus)):
            raise GradingError(f"{sigma} does not start with the block {sorted(s_minus)}")
        ok = list(sigma[k:]) == sorted(sigma[k:])
    else:
        ok = any(
            list(sigma[:k]) == sorted(sigma[:k]) and list(sigma[k:]) == sorted(sigma[k:])
            for k in range(1, d + 1)
        )
    if not ok:
        raise GradingError(f"{sigma} is not an unshuffle for the declared split")
    return -reorder_sign(sigma, parities)
