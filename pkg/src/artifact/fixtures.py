"""Worked instances and seeded random generators.

Everything here is deterministic for a given ``random.Random``.
"""

import random
from itertools import combinations_with_replacement, product

from .co import ClosedOpenData
from .grading import DEFAULT_GRADING, GradedModule, Generator
from .hochschild import AInftyCategory
from .linfty import LInftyStructure, from_dgla
from .ops import FunctionOp, TableOp
from .rings import ZZ, add_into
from .telescope import DirectedSystem, build_telescope, extend_delt_equivariant, is_t

G1 = DEFAULT_GRADING


def _gens(spec, **meta):
    return [Generator(g, (d,), **meta) for g, d in spec]


# -- L-infinity algebras ------------------------------------------------------------

def abelian_linfty(n=2, degree=1):
    M = GradedModule(_gens([(f"x{i}", degree + i) for i in range(n)]))
    return LInftyStructure(M, {}, name="abelian")


def abelian_dgla(negated=True):
    """Complex a -> b (a in degree 0, b in degree 1) with zero bracket."""
    M = GradedModule(_gens([("a", 0), ("b", 1), ("c", 2)]))
    D = TableOp(1, (1,), {("a",): {"b": 1}})
    B = TableOp(2, (-1,), {})
    return from_dgla(M, D, B, negated=negated)


def sl2_dgla(negated=True):
    """sl_2 with its Lie bracket, all generators in degree 1 (Lie degree 0)."""
    M = GradedModule(_gens([("h", 1), ("e", 1), ("f", 1)]))
    B = {
        ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
        ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2},
        ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
    }
    return from_dgla(M, TableOp(1, (1,), {}), TableOp(2, (-1,), B), negated=negated)


def ell3_example():
    """ell^3(x, x, x) = y with |x| = 2, |y| = 3 and nothing else."""
    M = GradedModule(_gens([("x", 2), ("y", 3)]))
    l3 = TableOp(3, (-3,), {("x", "x", "x"): {"y": 1}}, symmetric=True, parity=M.parity, sort_key=M.sort_key)
    return LInftyStructure(M, {3: l3}, name="ell3")


def broken_differential():
    """ell^1 with ell^1 ∘ ell^1 != 0."""
    M = GradedModule(_gens([("a", 0), ("b", 1), ("c", 2)]))
    l1 = TableOp(1, (1,), {("a",): {"b": 1}, ("b",): {"c": 1}})
    return LInftyStructure(M, {1: l1}, name="broken")


# -- A-infinity categories --------------------------------------------------------------

def truncated_path_category(objects, arrows, max_length=2, name="paths"):
    """Path category of a quiver modulo paths longer than ``max_length``.

    ``arrows`` lists (name, source, target, degree).  Generators are the
    units ``e<obj>``, the arrows, and composable words ``a.b`` up to the
    length bound.  mu^2(p, q) = (-1)^{|p|} p.q.
    """
    words = [((a,), s, t, d) for a, s, t, d in arrows]
    all_words = list(words)
    frontier = words
    for _ in range(max_length - 1):
        nxt = []
        for w, s, t, d in frontier:
            for a, s2, t2, d2 in arrows:
                if s2 == t:
                    nxt.append((w + (a,), s, t2, d + d2))
        all_words.extend(nxt)
        frontier = nxt
    gens, ends, deg = [], {}, {}
    for o in objects:
        gid = f"e{o}"
        gens.append(Generator(gid, (0,)))
        ends[gid] = (o, o)
        deg[gid] = 0
    wid = {}
    for w, s, t, d in all_words:
        gid = ".".join(w)
        wid[w] = gid
        gens.append(Generator(gid, (d,)))
        ends[gid] = (s, t)
        deg[gid] = d
    M = GradedModule(gens)
    table = {}
    for o in objects:
        e = f"e{o}"
        table[(e, e)] = {e: 1}
    for w, s, t, d in all_words:
        gid = wid[w]
        table[(f"e{s}", gid)] = {gid: 1}
        table[(gid, f"e{t}")] = {gid: -1 if d % 2 else 1}
    for (w1, s1, t1, d1), (w2, s2, t2, d2) in product(all_words, repeat=2):
        if t1 == s2 and (w1 + w2) in wid:
            table[(wid[w1], wid[w2])] = {wid[w1 + w2]: -1 if d1 % 2 else 1}
    mu2 = TableOp(2, (0,), table)
    return AInftyCategory(list(objects), M, ends, {2: mu2}, name=name)


def path_category():
    """Two objects A, B and one arrow f: A -> B, all in degree 0."""
    return truncated_path_category(["A", "B"], [("f", "A", "B", 0)], name="A2")


def ground_ring_category():
    M = GradedModule([Generator("e", (0,))])
    mu2 = TableOp(2, (0,), {("e", "e"): {"e": 1}})
    return AInftyCategory(["pt"], M, {"e": ("pt", "pt")}, {2: mu2}, name="ground ring")


def dual_numbers_category():
    """Z[e]/e^2 with |e| = 0 as a one-object category."""
    M = GradedModule([Generator("1", (0,)), Generator("e", (0,))])
    mu2 = TableOp(2, (0,), {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}})
    return AInftyCategory(["pt"], M, {"1": ("pt", "pt"), "e": ("pt", "pt")}, {2: mu2}, name="dual numbers")


def zero_category():
    return AInftyCategory(["pt"], GradedModule([]), {}, {}, name="zero")


def broken_mu1_category():
    """mu^1 with mu^1 ∘ mu^1 != 0."""
    M = GradedModule(_gens([("a", 0), ("b", 1), ("c", 2)]))
    ends = {g: ("pt", "pt") for g in "abc"}
    mu1 = TableOp(1, (1,), {("a",): {"b": 1}, ("b",): {"c": 1}})
    return AInftyCategory(["pt"], M, ends, {1: mu1}, name="broken mu1")


# -- closed-open data ---------------------------------------------------------------------

def derivation_category():
    """Objects A, B; units, f (degree 0) and g (degree 1) in hom(A, B)."""
    M = GradedModule(_gens([("eA", 0), ("eB", 0), ("f", 0), ("g", 1)]))
    ends = {"eA": ("A", "A"), "eB": ("B", "B"), "f": ("A", "B"), "g": ("A", "B")}
    mu2 = TableOp(2, (0,), {
        ("eA", "eA"): {"eA": 1}, ("eB", "eB"): {"eB": 1},
        ("eA", "f"): {"f": 1}, ("f", "eB"): {"f": 1},
        ("eA", "g"): {"g": 1}, ("g", "eB"): {"g": -1},
    })
    return AInftyCategory(["A", "B"], M, ends, {2: mu2}, name="derivation target")


def derivation_co(value=1, extra=None):
    """Abelian source on one even generator x (degree 2) acting through
    co_{1,1}(x; f) = value * g, a derivation of mu^2.

    ``extra`` adds entries {(xs, ys): vec} to break or extend the data.
    """
    cat = derivation_category()
    S = LInftyStructure(GradedModule([Generator("x", (2,))]), {}, name="x")
    tables = {(1, 1): {("x", "f"): {"g": value}} if value else {}}
    for (xs, ys), vec in (extra or {}).items():
        tables.setdefault((len(xs), len(ys)), {})[tuple(xs) + tuple(ys)] = vec
    co = {dk: TableOp(sum(dk), (2 - 2 * dk[0] - dk[1],), t) for dk, t in tables.items()}
    return ClosedOpenData(S, cat, co, name="derivation")


# -- directed systems --------------------------------------------------------------------------

def _system(levels, delta, kappa):
    gens = [Generator(g, (d,), level=n) for n, spec in levels.items() for g, d in spec]
    return DirectedSystem(GradedModule(gens), delta, kappa)


def identity_system(levels=2):
    """Each level is Z in degree 0 plus a -> 2b; kappa is the identity."""
    lv = {n: [(f"z{n}", 0), (f"a{n}", 0), (f"b{n}", 1)] for n in range(1, levels + 1)}
    delta = {f"a{n}": {f"b{n}": 2} for n in lv}
    kappa = {}
    for n in range(1, levels):
        for g in ("z", "a", "b"):
            kappa[f"{g}{n}"] = {f"{g}{n + 1}": 1}
    return _system(lv, delta, kappa)


def zero_kappa_system():
    lv = {1: [("z1", 0)], 2: [("z2", 0)]}
    return _system(lv, {}, {})


def qis_system():
    """kappa: Z -> Z + (acyclic pair), a quasi-isomorphism that is not onto."""
    lv = {1: [("z1", 0)], 2: [("z2", 0), ("u2", -1), ("v2", 0)]}
    delta = {"u2": {"v2": 1}}
    return _system(lv, delta, {"z1": {"z2": 1}})


def one_level_system():
    lv = {1: [("a1", 0), ("b1", 1)]}
    return _system(lv, {"a1": {"b1": 3}}, {})


def ltilde_partial(S):
    """Partial unmodified differential: x -> delta x, t:x -> kappa x."""
    T = build_telescope(S)

    def fn(ids):
        x = ids[0]
        if is_t(x):
            return S.kappa.get(x[2:], {})
        return S.delta.get(x, {})

    return T, FunctionOp(1, (1,), fn)


# -- random generators ---------------------------------------------------------------------------

def random_unimodular(n, rng, steps=None):
    """(P, Q) integer n x n with P Q = 1, as dense lists."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 3 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # P <- P E, E = I + c e_ij (column op); Q <- E^-1 Q (row op)
        for r in range(n):
            P[r][j] += c * P[r][i]
        for col in range(n):
            Q[i][col] -= c * Q[j][col]
    if n and rng.random() < 0.5:
        k = rng.randrange(n)
        for r in range(n):
            P[r][k] = -P[r][k]
        Q[k] = [-v for v in Q[k]]
    return P, Q


def random_complex_cells(rng, max_rank=5, degrees=(-1, 0, 1, 2), max_torsion=3, prefix="c"):
    """Generators and a differential built from cells: a free cycle, or a
    pair u -> m v.  Returns (gens as (id, degree), delta)."""
    gens, delta = [], {}
    i = 0
    while len(gens) < max_rank:
        if rng.random() < 0.4 or len(gens) + 2 > max_rank:
            gens.append((f"{prefix}{i}", rng.choice(degrees)))
            i += 1
            if rng.random() < 0.3:
                break
        else:
            k = rng.choice(degrees)
            u, v = f"{prefix}{i}", f"{prefix}{i + 1}"
            gens += [(u, k - 1), (v, k)]
            delta[u] = {v: rng.randint(1, max_torsion)}
            i += 2
    return gens, delta


def change_basis(gens, table, rng):
    """Conjugate a unary table by a random unimodular change in each degree.

    Returns (table', P) where P maps each id to its expression in the old basis.
    """
    by_deg = {}
    for g, d in gens:
        by_deg.setdefault(d, []).append(g)
    Pmap, Qmap = {}, {}
    for d, ids in by_deg.items():
        P, Q = random_unimodular(len(ids), rng)
        for j, g in enumerate(ids):
            Pmap[g] = {ids[i]: P[i][j] for i in range(len(ids)) if P[i][j]}
            Qmap[g] = {ids[i]: Q[i][j] for i in range(len(ids)) if Q[i][j]}
    out = {}
    for g in Pmap:
        v = {}
        for old, c in Pmap[g].items():
            for w, e in table.get(old, {}).items():
                add_into(v, Qmap[w], c * e)
        if v:
            out[g] = v
    return out, Pmap, Qmap


def random_system(rng, levels=None, max_rank=5, qis=False):
    """Random directed system.

    With ``qis`` every kappa is a quasi-isomorphism: level n+1 is level n
    plus an acyclic pair, in a scrambled basis.  Otherwise kappa is a random
    integer multiple of the inclusion (possibly 0).
    """
    N = levels if levels is not None else rng.randint(1, 4)
    gens0, delta0 = random_complex_cells(rng, max(1, max_rank - (N - 1) * (2 if qis else 0)), prefix="c")
    lv_gens = {1: list(gens0)}
    lv_delta = {1: dict(delta0)}
    for n in range(2, N + 1):
        g = list(lv_gens[n - 1])
        dl = dict(lv_delta[n - 1])
        if qis and len(g) + 2 <= max_rank:
            k = rng.choice((-1, 0, 1))
            g += [(f"p{n}", k - 1), (f"q{n}", k)]
            dl[f"p{n}"] = {f"q{n}": 1}
        lv_gens[n], lv_delta[n] = g, dl
    # rename per level and scramble bases
    gens, delta, kappa = [], {}, {}
    prev_Q = None
    prev_names = None
    for n in range(1, N + 1):
        names = {g: f"L{n}_{g}" for g, _ in lv_gens[n]}
        local = [(names[g], d) for g, d in lv_gens[n]]
        table = {names[a]: {names[b]: c for b, c in v.items()} for a, v in lv_delta[n].items()}
        new_table, P, Q = change_basis(local, table, rng)
        for gid, d in local:
            gens.append(Generator(gid, (d,), level=n))
        delta.update(new_table)
        if n > 1:
            m = 1 if qis else rng.choice((0, 1, 1, 2, -1))
            # kappa(new basis of n-1) = Q_n (incl (P_{n-1} b))
            for g, expr in prev_P.items():
                v = {}
                for old, c in expr.items():
                    tgt = names[_strip(old, n - 1)]
                    add_into(v, Q[tgt], c * m)
                if v:
                    kappa[g] = v
        prev_P = P
    return DirectedSystem(GradedModule(gens), delta, kappa)


def _strip(gid, n):
    return gid[len(f"L{n}_"):]


def transport_linfty(L, rng):
    """Same structure in a random unimodular basis (per degree)."""
    M = L.module
    by_deg = {}
    for g in M.generators:
        by_deg.setdefault(g.degree, []).append(g.id)
    Pmap, Qmap = {}, {}
    for d, ids in by_deg.items():
        P, Q = random_unimodular(len(ids), rng)
        for j, g in enumerate(ids):
            Pmap[g] = {ids[i]: P[i][j] for i in range(len(ids)) if P[i][j]}
            Qmap[g] = {ids[i]: Q[i][j] for i in range(len(ids)) if Q[i][j]}
    ops = {}
    for d, op in L.ops.items():
        def fn(ids, op=op):
            v = op.apply([Pmap[i] for i in ids], M.ring)
            out = {}
            for w, c in v.items():
                add_into(out, Qmap[w], c, M.ring)
            return out

        ops[d] = FunctionOp(d, op.shift, fn)
    from .ops import materialize

    ops = {d: materialize(op, M.ids) for d, op in ops.items()}
    return LInftyStructure(M, ops, L.convention, L.name + "'")


def perturb_linfty(L, rng):
    """Add one random degree-compatible entry to a random operation.

    The perturbation is Koszul-symmetrized so the result stays graded
    symmetric; it usually breaks the relations.
    """
    from .ops import materialize

    M = L.module
    G = M.grading
    for _ in range(200):
        d = rng.randint(1, 3)
        ids = tuple(sorted(rng.choices(M.ids, k=d), key=M.index))
        shift = G.from_int(3 - 2 * d)
        want = G.add(shift, *(M.degree(x) for x in ids))
        outs = [g for g in M.ids if M.degree(g) == want]
        if not outs:
            continue
        z = rng.choice(outs)
        c = rng.choice((1, -1, 2))
        base = materialize(L.ops[d], M.ids) if d in L.ops else TableOp(d, shift, {})
        from .grading import reorder_sign
        from itertools import permutations

        table = {k: dict(v) for k, v in base.table.items()}
        pars = [M.parity(x) for x in ids]
        seen = set()
        ok = True
        for order in permutations(range(1, d + 1)):
            key = tuple(ids[i - 1] for i in order)
            if key in seen:
                continue
            seen.add(key)
            s = reorder_sign(order, pars)
            v = table.setdefault(key, {})
            add_into(v, {z: c * s}, 1)
        # a repeated odd input forces the symmetrized entry to vanish
        if len(seen) < len(list(permutations(range(d)))) and any(
            ids.count(x) > 1 and M.parity(x) for x in ids
        ):
            continue
        ops = dict(L.ops)
        ops[d] = TableOp(d, shift, {k: v for k, v in table.items() if v})
        return LInftyStructure(M, ops, L.convention, L.name + "~")
    return L


def random_category(rng, max_objects=3, max_arrows=3):
    objs = [chr(ord("A") + i) for i in range(rng.randint(1, max_objects))]
    arrows = []
    for i in range(rng.randint(0, max_arrows)):
        s, t = rng.choice(objs), rng.choice(objs)
        if s == t or objs.index(s) > objs.index(t):
            s, t = sorted((s, t), key=objs.index)
        if s == t:
            continue
        arrows.append((f"a{i}", s, t, rng.randint(-1, 1)))
    return truncated_path_category(objs, arrows, max_length=2, name="random paths")


def perturb_category(cat, rng):
    """Add a random composable, degree-compatible mu^2 or mu^1 entry."""
    M = cat.module
    G = cat.grading
    for _ in range(200):
        k = rng.choice((1, 2))
        if not cat.chains(k):
            continue
        ys = rng.choice(cat.chains(k))
        a, b = cat.source(ys[0]), cat.target(ys[-1])
        want = G.add(G.from_int(2 - k), *(M.degree(y) for y in ys))
        outs = [z for z in cat.hom_between(a, b) if M.degree(z) == want]
        if not outs:
            continue
        z = rng.choice(outs)
        mu = dict(cat.mu)
        old = mu.get(k)
        table = {kk: dict(v) for kk, v in (old.table.items() if old is not None else [])}
        add_into(table.setdefault(tuple(ys), {}), {z: rng.choice((1, -1, 2))})
        mu[k] = TableOp(k, G.from_int(2 - k), {kk: v for kk, v in table.items() if v})
        return AInftyCategory(cat.objects, M, cat.ends, mu, name=cat.name + "~")
    return cat


def random_partial(module, arity, shift, rng, density=0.3, t_inputs=False, targets=None, symmetric=False,
                   keys=None):
    """Random degree-homogeneous table with t-free outputs.

    Inputs are t-free unless ``t_inputs``; ``targets`` restricts outputs;
    ``keys`` overrides the candidate input tuples.  With ``symmetric`` the
    table is graded symmetric (stored on sorted tuples).
    """
    G = module.grading
    ids = [g for g in module.ids if t_inputs or not is_t(g)]
    outs_all = [g for g in (targets or module.ids) if not is_t(g)]
    table = {}
    if keys is None:
        keys = combinations_with_replacement(ids, arity) if symmetric else product(ids, repeat=arity)
    for key in keys:
        if rng.random() > density:
            continue
        if symmetric and any(key.count(x) > 1 and module.parity(x) for x in key):
            continue
        want = G.add(shift, *(module.degree(x) for x in key))
        outs = [z for z in outs_all if module.degree(z) == want]
        if outs:
            z = rng.choice(outs)
            table[tuple(key)] = {z: rng.choice((1, -1, 2, -3))}
    if symmetric:
        return TableOp(arity, shift, table, True, module.parity, module.sort_key)
    return TableOp(arity, shift, table)


def telescope_module(spec, prefix="x", level=1, ends=None):
    """Module with generators prefix<i> of the given degrees and their t-copies."""
    gens = []
    for i, d in enumerate(spec):
        gens.append(Generator(f"{prefix}{i}", (d,), level=level))
        gens.append(Generator(f"t:{prefix}{i}", (d - 1,), level=level, t_power=1))
    return GradedModule(gens)


def random_hom_partial(cat_module, ends, closed, d, k, rng, density=0.4, chains=None):
    """Random t-free-valued table for an op on (x_1..x_d; y_1..y_k).

    ``closed`` is the closed module (None when d = 0); outputs respect the
    chain's ends and degrees, and the table is graded symmetric in the
    closed inputs.
    """
    G = cat_module.grading
    shift = G.from_int(2 - 2 * d - k)
    xs_all = list(combinations_with_replacement(closed.ids, d)) if d else [()]
    table = {}
    for xs in xs_all:
        if any(xs.count(x) > 1 and closed.parity(x) for x in xs):
            continue
        for ys in chains:
            if rng.random() > density:
                continue
            if ys:
                a, b = ends[ys[0]][0], ends[ys[-1]][1]
                pool = [z for z in cat_module.ids if ends[z] == (a, b)]
            else:
                pool = [z for z in cat_module.ids if ends[z][0] == ends[z][1]]
            want = G.add(shift, *(closed.degree(x) for x in xs), *(cat_module.degree(y) for y in ys))
            outs = [z for z in pool if not is_t(z) and cat_module.degree(z) == want]
            if outs:
                table[tuple(xs) + tuple(ys)] = {rng.choice(outs): rng.choice((1, -1, 2))}
    if d >= 2:
        par = lambda g: closed.parity(g) if g in closed else cat_module.parity(g)
        return TableOp(d + k, shift, table, True, par, closed.sort_key, sym_arity=d)
    return TableOp(d + k, shift, table)
