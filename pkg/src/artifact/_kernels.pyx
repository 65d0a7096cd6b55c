# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_fallback``.

Same signatures and results; ``invariant_factors_small`` works in 64-bit
machine integers and raises OverflowError when an intermediate would not fit,
so the caller can retry on the arbitrary-precision path.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def koszul_exponent(images, parities):
    cdef Py_ssize_t d = len(images), i, j
    cdef long *im = <long *>malloc(d * sizeof(long))
    cdef char *p = <char *>malloc(d * sizeof(char))
    cdef int e = 0
    try:
        for i in range(d):
            im[i] = images[i]
            p[i] = 1 if parities[i] else 0
        for i in range(d):
            if not p[i]:
                continue
            for j in range(i + 1, d):
                if p[j] and im[i] > im[j]:
                    e ^= 1
    finally:
        free(im)
        free(p)
    return e


def reorder_exponent(order, parities):
    cdef Py_ssize_t d = len(order), i, j
    cdef long *o = <long *>malloc(d * sizeof(long))
    cdef char *p = <char *>malloc(d * sizeof(char))
    cdef int e = 0
    try:
        for i in range(d):
            o[i] = order[i]
        for i in range(d):
            p[i] = 1 if parities[o[i] - 1] else 0
        for i in range(d):
            if not p[i]:
                continue
            for j in range(i + 1, d):
                if p[j] and o[i] > o[j]:
                    e ^= 1
    finally:
        free(o)
        free(p)
    return e


def perm_parity(images):
    cdef Py_ssize_t d = len(images), i, j
    cdef long *im = <long *>malloc(d * sizeof(long))
    cdef int e = 0
    try:
        for i in range(d):
            im[i] = images[i]
        for i in range(d):
            for j in range(i + 1, d):
                if im[i] > im[j]:
                    e ^= 1
    finally:
        free(im)
    return e


def unshuffles(long j, long d):
    if not (1 <= j <= d):
        raise ValueError(f"need 1 <= j <= d, got j={j}, d={d}")
    cdef long *idx = <long *>malloc(j * sizeof(long))
    cdef char *used = <char *>malloc((d + 1) * sizeof(char))
    cdef long i, k, pos
    out = []
    try:
        for i in range(j):
            idx[i] = i + 1
        while True:
            for k in range(d + 1):
                used[k] = 0
            perm = []
            for i in range(j):
                used[idx[i]] = 1
                perm.append(idx[i])
            for k in range(1, d + 1):
                if not used[k]:
                    perm.append(k)
            out.append(tuple(perm))
            pos = j - 1
            while pos >= 0 and idx[pos] == d - j + pos + 1:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for i in range(pos + 1, j):
                idx[i] = idx[i - 1] + 1
    finally:
        free(idx)
        free(used)
    return out


cdef inline int64_t _mul(int64_t a, int64_t b) except? -1:
    cdef int64_t r
    if __builtin_mul_overflow(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef inline int64_t _sub(int64_t a, int64_t b) except? -1:
    cdef int64_t r
    if __builtin_sub_overflow(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef inline int64_t _add(int64_t a, int64_t b) except? -1:
    cdef int64_t r
    if __builtin_add_overflow(a, b, &r):
        raise OverflowError("int64 overflow")
    return r


cdef extern from *:
    bint __builtin_mul_overflow(int64_t, int64_t, int64_t *)
    bint __builtin_sub_overflow(int64_t, int64_t, int64_t *)
    bint __builtin_add_overflow(int64_t, int64_t, int64_t *)


cdef inline int64_t _abs(int64_t a):
    return -a if a < 0 else a


def invariant_factors_small(Py_ssize_t rows, Py_ssize_t cols, entries):
    cdef int64_t *m = <int64_t *>malloc(max(rows * cols, 1) * sizeof(int64_t))
    cdef Py_ssize_t r, c, top = 0, pr, pc, br, bc, bad
    cdef int64_t v, p, q, t, bestv
    cdef bint dirty, found
    diag = []
    try:
        for r in range(rows * cols):
            m[r] = 0
        for r, c, v in entries:
            if v > 9223372036854775807 or v < -9223372036854775807:
                raise OverflowError("entry exceeds int64")
            m[r * cols + c] = v
        while top < rows and top < cols:
            found = False
            bestv = 0
            pr = pc = 0
            for r in range(top, rows):
                for c in range(top, cols):
                    v = m[r * cols + c]
                    if v != 0 and (not found or _abs(v) < bestv):
                        found = True
                        bestv = _abs(v)
                        pr = r
                        pc = c
            if not found:
                break
            _swap_rows(m, cols, top, pr)
            _swap_cols(m, rows, cols, top, pc)
            while True:
                p = m[top * cols + top]
                dirty = False
                for r in range(top + 1, rows):
                    v = m[r * cols + top]
                    if v != 0:
                        q = v // p
                        if q != 0:
                            for c in range(top, cols):
                                m[r * cols + c] = _sub(m[r * cols + c], _mul(q, m[top * cols + c]))
                        if m[r * cols + top] != 0:
                            dirty = True
                for c in range(top + 1, cols):
                    v = m[top * cols + c]
                    if v != 0:
                        q = v // p
                        if q != 0:
                            for r in range(top, rows):
                                m[r * cols + c] = _sub(m[r * cols + c], _mul(q, m[r * cols + top]))
                        if m[top * cols + c] != 0:
                            dirty = True
                if not dirty:
                    bad = -1
                    for r in range(top + 1, rows):
                        for c in range(top + 1, cols):
                            if m[r * cols + c] % p != 0:
                                bad = r
                                break
                        if bad >= 0:
                            break
                    if bad < 0:
                        break
                    for c in range(top, cols):
                        m[top * cols + c] = _add(m[top * cols + c], m[bad * cols + c])
                    continue
                bestv = _abs(p)
                br = top
                bc = top
                for r in range(top + 1, rows):
                    v = m[r * cols + top]
                    if v != 0 and _abs(v) < bestv:
                        bestv = _abs(v)
                        br = r
                        bc = top
                for c in range(top + 1, cols):
                    v = m[top * cols + c]
                    if v != 0 and _abs(v) < bestv:
                        bestv = _abs(v)
                        br = top
                        bc = c
                _swap_rows(m, cols, top, br)
                _swap_cols(m, rows, cols, top, bc)
            diag.append(int(_abs(m[top * cols + top])))
            top += 1
    finally:
        free(m)
    return diag


cdef void _swap_rows(int64_t *m, Py_ssize_t cols, Py_ssize_t a, Py_ssize_t b):
    cdef Py_ssize_t c
    cdef int64_t t
    if a == b:
        return
    for c in range(cols):
        t = m[a * cols + c]
        m[a * cols + c] = m[b * cols + c]
        m[b * cols + c] = t


cdef void _swap_cols(int64_t *m, Py_ssize_t rows, Py_ssize_t cols, Py_ssize_t a, Py_ssize_t b):
    cdef Py_ssize_t r
    cdef int64_t t
    if a == b:
        return
    for r in range(rows):
        t = m[r * cols + a]
        m[r * cols + a] = m[r * cols + b]
        m[r * cols + b] = t
