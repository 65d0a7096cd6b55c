"""Small builders shared by several test modules."""

import random
from itertools import combinations_with_replacement

from artifact.grading import GradedModule, Generator
from artifact.linfty import LInftyStructure
from artifact.ops import TableOp


def weighted_linfty(rng, rank=4):
    """Random structure whose operations raise a weight from 1 to 2.

    Inputs of every operation have weight 1 and outputs weight 2, so any
    composite vanishes and the relations hold for free.
    """
    n1 = rng.randint(1, rank - 1)
    gens = [Generator(f"u{i}", (rng.randint(-1, 2),)) for i in range(n1)]
    gens += [Generator(f"w{i}", (rng.randint(-2, 3),)) for i in range(rank - n1)]
    M = GradedModule(gens)
    low = [g.id for g in gens[:n1]]
    high = [g.id for g in gens[n1:]]
    ops = {}
    for d in (1, 2, 3):
        table = {}
        for key in combinations_with_replacement(low, d):
            if any(key.count(x) > 1 and M.parity(x) for x in key):
                continue
            want = (sum(M.degree(x)[0] for x in key) + 3 - 2 * d,)
            outs = [z for z in high if M.degree(z) == want]
            if outs and rng.random() < 0.7:
                table[key] = {rng.choice(outs): rng.choice((1, -1, 2))}
        if table:
            ops[d] = TableOp(d, (3 - 2 * d,), table, True, M.parity, M.sort_key)
    return LInftyStructure(M, ops, name="weighted")


def seeded(seed):
    return random.Random(seed)
