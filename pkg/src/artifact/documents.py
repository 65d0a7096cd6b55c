"""Build in-memory structures from parsed documents, and documents back
from structures."""

from itertools import product

from .co import ClosedOpenData
from .errors import GradingError, ParseError, StructureError
from .fileformat import Document, OpBlock
from .grading import GradedModule
from .hochschild import AInftyCategory
from .linfty import LInftyMorphism, LInftyStructure
from .ops import TableOp, materialize
from .telescope import DirectedSystem, _complex_from

SHIFTS = {
    "l": lambda p: 3 - 2 * p["arity"],
    "ltilde": lambda p: 3 - 2 * p["arity"],
    "F": lambda p: 2 - 2 * p["arity"],
    "mu": lambda p: 2 - p["k"],
    "mutilde": lambda p: 2 - p["k"],
    "co": lambda p: 2 - 2 * p["d"] - p["k"],
    "d": lambda p: 1,
    "delta": lambda p: 1,
    "kappa": lambda p: 0,
}

MODULES = {
    "linfty": ("main",),
    "ainfty": ("main",),
    "morphism": ("source", "target"),
    "co": ("closed", "open"),
    "complex": ("main",),
    "system": ("main",),
}


def _table_op(block, in_mods, out_mod, G, parity=None, sort_key=None, sym_arity=None):
    shift = G.from_int(SHIFTS[block.kind](block.params))
    table = {}
    for key, vec in block.entries.items():
        ids = key[0] + key[1] if block.kind == "co" else key
        for i, x in enumerate(ids):
            if x not in in_mods[i]:
                raise StructureError(f"op {block.kind}: input {x!r} is not a generator of the right module")
        want = G.add(shift, *(in_mods[i].degree(x) for i, x in enumerate(ids)))
        for z in vec:
            if z not in out_mod:
                raise StructureError(f"op {block.kind}: output {z!r} is not a generator of the right module")
            if out_mod.degree(z) != want:
                raise GradingError(f"op {block.kind} entry {' '.join(ids)} -> {z}: degree {out_mod.degree(z)}, expected {want}")
        table[ids] = vec
    n = len(in_mods)
    sym = block.storage == "symmetric"
    if sym and parity is None:
        parity = in_mods[0].parity
        sort_key = in_mods[0].sort_key
    try:
        return TableOp(n, shift, table, sym, parity if sym else None, sort_key if sym else None,
                       out_mod.ring, sym_arity)
    except ValueError as e:
        raise StructureError(f"op {block.kind}: {e}") from None


def _ops(doc, kind, module, key="arity", on=None):
    out = {}
    for b in doc.blocks(kind, on):
        n = b.params[key]
        if n < 1:
            raise StructureError(f"op {kind} must have {key} >= 1")
        out[n] = _table_op(b, [module] * n, module, doc.grading)
    return out


def _require_modules(doc):
    want = MODULES[doc.kind]
    if set(doc.modules) != set(want):
        raise StructureError(f"a {doc.kind} file needs modules {', '.join(want)}; found {', '.join(doc.modules) or 'none'}")
    allowed = {
        "linfty": {"l", "ltilde"}, "ainfty": {"mu", "mutilde"}, "morphism": {"l", "F"},
        "co": {"l", "ltilde", "mu", "mutilde", "co"}, "complex": {"d"}, "system": {"delta", "kappa"},
    }[doc.kind]
    for b in doc.ops:
        if b.kind not in allowed:
            raise StructureError(f"op {b.kind} does not belong in a {doc.kind} file")
        if b.on and not (doc.kind == "morphism" and b.kind == "l" and b.on in ("source", "target")):
            raise StructureError(f"on={b.on} is not valid here")
        if doc.kind == "morphism" and b.kind == "l" and not b.on:
            raise StructureError("morphism files must say on=source or on=target for l blocks")


def build_linfty(doc, module_name="main"):
    M = doc.module(module_name)
    ops = _ops(doc, "l", M)
    tilde = _ops(doc, "ltilde", M) or None
    return LInftyStructure(M, ops, "ours", module_name, ops_tilde=tilde)


def build_category(doc, module_name="main"):
    M = doc.module(module_name)
    ends = {g.id: doc.ends.get(g.id) for g in doc.modules[module_name]}
    missing = [g for g, e in ends.items() if e is None]
    if missing:
        raise StructureError(f"hom generators need hom=A,B: {', '.join(missing)}")
    mu = _ops(doc, "mu", M, "k")
    mut = _ops(doc, "mutilde", M, "k") or None
    return AInftyCategory(doc.objects, M, ends, mu, mu_tilde=mut)


def build(doc):
    """Dispatch on the document kind."""
    _require_modules(doc)
    kind = doc.kind
    G = doc.grading
    if kind == "linfty":
        return build_linfty(doc)
    if kind == "ainfty":
        return build_category(doc)
    if kind == "morphism":
        S, T = doc.module("source"), doc.module("target")
        src = LInftyStructure(S, _ops(doc, "l", S, on="source"), name="source")
        tgt = LInftyStructure(T, _ops(doc, "l", T, on="target"), name="target")
        maps = {}
        for b in doc.blocks("F"):
            n = b.params["arity"]
            maps[n] = _table_op(b, [S] * n, T, G)
        return LInftyMorphism(src, tgt, maps)
    if kind == "co":
        X = doc.module("closed")
        src = LInftyStructure(X, _ops(doc, "l", X), name="closed", ops_tilde=_ops(doc, "ltilde", X) or None)
        cat = build_category(doc, "open")
        Y = cat.module
        co = {}
        par = lambda g: X.parity(g) if g in X else Y.parity(g)
        for b in doc.blocks("co"):
            d, k = b.params["d"], b.params["k"]
            co[(d, k)] = _table_op(b, [X] * d + [Y] * k, Y, G, par, X.sort_key, d)
        return ClosedOpenData(src, cat, co)
    if kind == "complex":
        M = doc.module("main")
        blocks = doc.blocks("d")
        if len(blocks) != 1:
            raise StructureError("a complex file needs exactly one op d block")
        d = _table_op(blocks[0], [M], M, G)
        return _complex_from(M.ids, M, lambda x: d((x,)))
    if kind == "system":
        M = doc.module("main")
        delta, kappa = {}, {}
        for b in doc.blocks("delta"):
            delta.update({k[0]: v for k, v in _table_op(b, [M], M, G).table.items()})
        for b in doc.blocks("kappa"):
            kappa.update({k[0]: v for k, v in _table_op(b, [M], M, G).table.items()})
        return DirectedSystem(M, delta, kappa)
    raise StructureError(f"unknown kind {kind!r}")


# -- structures to documents -----------------------------------------------------------------

def _block(kind, params, op, basis_lists, on=""):
    entries = {}
    if isinstance(op, TableOp):
        items = op.entries()
        storage = "symmetric" if op.symmetric else "raw"
    else:
        items = ((ids, op(ids)) for ids in product(*basis_lists))
        storage = "raw"
    for ids, vec in items:
        vec = {k: c for k, c in vec.items() if c}
        if not vec:
            continue
        if kind == "co":
            d = params["d"]
            entries[(tuple(ids[:d]), tuple(ids[d:]))] = dict(vec)
        else:
            entries[tuple(ids)] = dict(vec)
    return OpBlock(kind, dict(params), storage, on, entries)


def _doc(kind, ring, grading):
    return Document(kind, ring, grading)


def document_from_linfty(L):
    M = L.module
    doc = _doc("linfty", M.ring, M.grading)
    doc.modules["main"] = list(M.generators)
    for d, op in sorted(L.ops.items()):
        doc.ops.append(_block("l", {"arity": d}, op, [M.ids] * d))
    for d, op in sorted((L.ops_tilde or {}).items()):
        doc.ops.append(_block("ltilde", {"arity": d}, op, [M.ids] * d))
    return doc


def _category_into(doc, cat, name):
    M = cat.module
    doc.objects = list(cat.objects)
    doc.modules[name] = list(M.generators)
    doc.ends.update(cat.ends)
    for k, op in sorted(cat.mu.items()):
        doc.ops.append(_block("mu", {"k": k}, op, [M.ids] * k))
    for k, op in sorted((cat.mu_tilde or {}).items()):
        doc.ops.append(_block("mutilde", {"k": k}, op, [M.ids] * k))


def document_from_category(cat):
    doc = _doc("ainfty", cat.ring, cat.grading)
    _category_into(doc, cat, "main")
    return doc


def document_from_morphism(F):
    S, T = F.source.module, F.target.module
    doc = _doc("morphism", T.ring, T.grading)
    doc.modules["source"] = list(S.generators)
    doc.modules["target"] = list(T.generators)
    for d, op in sorted(F.source.ops.items()):
        doc.ops.append(_block("l", {"arity": d}, op, [S.ids] * d, on="source"))
    for d, op in sorted(F.target.ops.items()):
        doc.ops.append(_block("l", {"arity": d}, op, [T.ids] * d, on="target"))
    for d, op in sorted(F.maps.items()):
        doc.ops.append(_block("F", {"arity": d}, op, [S.ids] * d))
    return doc


def document_from_co(C):
    X = C.source.module
    doc = _doc("co", C.ring, C.grading)
    doc.modules["closed"] = list(X.generators)
    for d, op in sorted(C.source.ops.items()):
        doc.ops.append(_block("l", {"arity": d}, op, [X.ids] * d))
    for d, op in sorted((C.source.ops_tilde or {}).items()):
        doc.ops.append(_block("ltilde", {"arity": d}, op, [X.ids] * d))
    _category_into(doc, C.target, "open")
    for (d, k), op in sorted(C.co.items()):
        if d == 0:
            continue
        chains = [tuple(c) for c in (C.target.chains(k) if k else [()])]
        if isinstance(op, TableOp):
            blk = _block("co", {"d": d, "k": k}, op, None)
        else:
            entries = {}
            for xs in product(X.ids, repeat=d):
                for ys in chains:
                    v = op(tuple(xs) + ys)
                    if v:
                        entries[(tuple(xs), ys)] = dict(v)
            blk = OpBlock("co", {"d": d, "k": k}, "raw", "", entries)
        doc.ops.append(blk)
    return doc


def document_from_system(S):
    M = S.module
    doc = _doc("system", M.ring, M.grading)
    doc.modules["main"] = list(M.generators)
    doc.ops.append(OpBlock("delta", {}, "raw", "", {(x,): dict(v) for x, v in sorted(S.delta.items())}))
    doc.ops.append(OpBlock("kappa", {}, "raw", "", {(x,): dict(v) for x, v in sorted(S.kappa.items())}))
    return doc


def document_from_complex_table(module, table):
    """Complex file from a module and {id: d(id)}."""
    doc = _doc("complex", module.ring, module.grading)
    doc.modules["main"] = list(module.generators)
    doc.ops.append(OpBlock("d", {}, "raw", "", {(x,): dict(v) for x, v in table.items() if v}))
    return doc
