"""Multilinear operations on basis ids, verdicts, and deterministic fan-out."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Any, Optional

from .grading import reorder_sign
from .rings import add_into


class MultilinearOp:
    """Arity-d operation: a tuple of basis ids maps to a sparse vector.

    Returned vectors are shared; callers must not mutate them.
    """

    arity: int
    shift: tuple

    def __call__(self, ids):
        raise NotImplementedError

    def apply(self, vectors, ring=None):
        """Evaluate on arbitrary vectors by multilinear expansion."""
        if len(vectors) != self.arity:
            raise ValueError(f"arity {self.arity} op applied to {len(vectors)} arguments")
        out = {}
        if any(not v for v in vectors):
            return out
        for combo in product(*(v.items() for v in vectors)):
            c = 1
            ids = []
            for k, a in combo:
                c *= a
                ids.append(k)
            add_into(out, self(tuple(ids)), c, ring)
        return out

    def is_table(self):
        return False


class TableOp(MultilinearOp):
    """Structure-constant table.

    With ``symmetric=True`` the table holds one entry per canonical tuple
    (ids sorted by ``sort_key``) and other orderings are recovered by the
    Koszul sign; ``parity`` gives each id's parity.  Otherwise lookups are
    literal.
    """

    def __init__(self, arity, shift, table, symmetric=False, parity=None, sort_key=None, ring=None,
                 sym_arity=None):
        self.arity = arity
        self.sym_arity = arity if sym_arity is None else sym_arity
        self.shift = tuple(shift)
        self.symmetric = symmetric
        self.parity = parity
        self.sort_key = sort_key
        self.ring = ring
        if symmetric and (parity is None or sort_key is None):
            raise ValueError("symmetric storage needs parity and sort_key")
        self.table = {}
        for k, v in table.items():
            k = tuple(k)
            if len(k) != arity:
                raise ValueError(f"entry {k} has {len(k)} inputs, arity is {arity}")
            if symmetric and self._canonical(k)[0] != k:
                raise ValueError(f"symmetric table entry {k} is not in canonical order")
            v = {o: c for o, c in v.items() if c}
            if v:
                self.table[k] = v

    def _canonical(self, ids):
        m = self.sym_arity
        order = sorted(range(m), key=lambda i: self.sort_key(ids[i])) + list(range(m, len(ids)))
        return tuple(ids[i] for i in order), order

    def __call__(self, ids):
        if not self.symmetric:
            return self.table.get(ids, _EMPTY)
        canon, order = self._canonical(ids)
        v = self.table.get(canon)
        if v is None:
            return _EMPTY
        s = reorder_sign([o + 1 for o in order], [self.parity(i) for i in ids])
        return v if s == 1 else {k: -c for k, c in v.items()}

    def entries(self):
        """Nonzero stored entries, in sorted key order (canonical if symmetric)."""
        m = self.sym_arity
        for k in sorted(self.table, key=lambda t: tuple(self.sort_key(i) for i in t[:m]) + t[m:] if self.sort_key else t):
            yield k, self.table[k]

    def is_table(self):
        return True

    def map_values(self, fn):
        """New table with each stored (inputs, vector) replaced by fn(inputs, vector)."""
        return TableOp(
            self.arity, self.shift, {k: fn(k, v) for k, v in self.table.items()},
            symmetric=self.symmetric, parity=self.parity, sort_key=self.sort_key, ring=self.ring,
            sym_arity=self.sym_arity,
        )

    def __eq__(self, other):
        return (
            isinstance(other, TableOp)
            and self.arity == other.arity
            and self.shift == other.shift
            and self.symmetric == other.symmetric
            and self.sym_arity == other.sym_arity
            and self.table == other.table
        )


_EMPTY = {}


class FunctionOp(MultilinearOp):
    def __init__(self, arity, shift, fn, cache=True):
        self.arity = arity
        self.shift = tuple(shift)
        self.fn = fn
        self._cache = {} if cache else None

    def __call__(self, ids):
        if self._cache is None:
            return self.fn(ids)
        try:
            return self._cache[ids]
        except KeyError:
            v = self.fn(ids)
            self._cache[ids] = v
            return v


def scaled_op(op, sign_fn, shift=None):
    """op' (ids) = sign_fn(ids) * op(ids)."""

    def fn(ids):
        s = sign_fn(ids)
        v = op(ids)
        if s == 1:
            return v
        return {k: s * c for k, c in v.items()}

    return FunctionOp(op.arity, op.shift if shift is None else shift, fn)


def materialize(op, basis, symmetric=False, parity=None, sort_key=None, ring=None):
    """Tabulate a (finite-support) op over all basis tuples."""
    table = {}
    if symmetric:
        keys = combinations_with_replacement(sorted(basis, key=sort_key), op.arity)
    else:
        keys = product(basis, repeat=op.arity)
    for k in keys:
        v = op(tuple(k))
        if v:
            table[tuple(k)] = dict(v)
    return TableOp(op.arity, op.shift, table, symmetric, parity, sort_key, ring)


# -- verdicts -----------------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    check: str
    counterexample: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {
            "check": self.check,
            "status": "pass" if self.ok else "fail",
            "counterexample": self.counterexample,
            "stats": self.stats,
        }


def default_jobs():
    try:
        return max(1, int(os.environ.get("ARTIFACT_JOBS", "1")))
    except ValueError:
        return 1


def first_failure(items, check, jobs=None, chunk=64):
    """First non-None check(item) in item order, evaluated over ``jobs`` threads."""
    jobs = default_jobs() if jobs is None else max(1, jobs)
    items = list(items)
    if jobs == 1 or len(items) <= chunk:
        for it in items:
            r = check(it)
            if r is not None:
                return r
        return None

    def run(block):
        for it in block:
            r = check(it)
            if r is not None:
                return r
        return None

    blocks = [items[i:i + chunk] for i in range(0, len(items), chunk)]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        for r in ex.map(run, blocks):
            if r is not None:
                return r
    return None


def vec_repr(vec, ring=None):
    """Deterministic JSON-friendly form of a vector."""
    return [[k if isinstance(k, str) else repr(k), str(c)] for k, c in sorted(vec.items(), key=lambda kv: repr(kv[0]))]
