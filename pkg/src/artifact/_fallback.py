"""Pure-Python implementations of the hot kernels.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and results; ``artifact.kernels`` picks one of the two at import time.
Permutations are tuples of 1-based images.
"""

from itertools import combinations


def koszul_exponent(images, parities):
    """Parity of sum of p[i]*p[j] over position pairs i<j with images[i]>images[j]."""
    d = len(images)
    e = 0
    for i in range(d):
        if not parities[i]:
            continue
        si = images[i]
        for j in range(i + 1, d):
            if parities[j] and si > images[j]:
                e ^= 1
    return e


def reorder_exponent(order, parities):
    """Koszul parity of rearranging (x_1..x_d) into (x_order[0], ..., x_order[d-1])."""
    d = len(order)
    e = 0
    for i in range(d):
        oi = order[i]
        if not parities[oi - 1]:
            continue
        for j in range(i + 1, d):
            oj = order[j]
            if oi > oj and parities[oj - 1]:
                e ^= 1
    return e


def perm_parity(images):
    d = len(images)
    e = 0
    for i in range(d):
        for j in range(i + 1, d):
            if images[i] > images[j]:
                e ^= 1
    return e


def unshuffles(j, d):
    if not 1 <= j <= d:
        raise ValueError(f"need 1 <= j <= d, got j={j}, d={d}")
    full = range(1, d + 1)
    out = []
    for head in combinations(full, j):
        hs = set(head)
        out.append(head + tuple(i for i in full if i not in hs))
    return out


def invariant_factors_small(rows, cols, entries):
    """Invariant factors of a small integer matrix.

    Machine-integer fast path in the compiled twin; here it simply defers to
    arbitrary-precision elimination and never overflows.
    """
    m = [[0] * cols for _ in range(rows)]
    for r, c, v in entries:
        m[r][c] = v
    return _diagonalize(m, rows, cols)


def _diagonalize(m, rows, cols):
    diag = []
    top = 0
    while top < rows and top < cols:
        best = None
        for r in range(top, rows):
            row = m[r]
            for c in range(top, cols):
                v = row[c]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), r, c)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pr, pc = best
        m[top], m[pr] = m[pr], m[top]
        if pc != top:
            for row in m:
                row[top], row[pc] = row[pc], row[top]
        while True:
            p = m[top][top]
            dirty = False
            for r in range(top + 1, rows):
                v = m[r][top]
                if v:
                    q = v // p
                    if q:
                        rr, rt = m[r], m[top]
                        for c in range(top, cols):
                            rr[c] -= q * rt[c]
                    if m[r][top]:
                        dirty = True
            for c in range(top + 1, cols):
                v = m[top][c]
                if v:
                    q = v // p
                    if q:
                        for r in range(top, rows):
                            m[r][c] -= q * m[r][top]
                    if m[top][c]:
                        dirty = True
            if not dirty:
                bad = None
                for r in range(top + 1, rows):
                    for c in range(top + 1, cols):
                        if m[r][c] % p:
                            bad = r
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rb, rt = m[bad], m[top]
                for c in range(top, cols):
                    rt[c] += rb[c]
                continue
            # move the smallest remaining entry of the pivot cross into the pivot
            best = (abs(p), top, top)
            for r in range(top + 1, rows):
                v = m[r][top]
                if v and abs(v) < best[0]:
                    best = (abs(v), r, top)
            for c in range(top + 1, cols):
                v = m[top][c]
                if v and abs(v) < best[0]:
                    best = (abs(v), top, c)
            _, br, bc = best
            if br != top:
                m[top], m[br] = m[br], m[top]
            if bc != top:
                for row in m:
                    row[top], row[bc] = row[bc], row[top]
        diag.append(abs(m[top][top]))
        top += 1
    return diag
