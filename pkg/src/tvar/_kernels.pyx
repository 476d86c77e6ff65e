# cython: language_level=3, boundscheck=False, wraparound=False
"""C-integer versions of the enumeration kernels in ``_kernels_py``.

Callers must guarantee every intermediate fits in 64 bits; ``kernels.py``
checks magnitudes before dispatching here.
"""

from libc.stdlib cimport malloc, free


cdef long long* _to_c(list rows, int m, int n) except NULL:
    cdef long long* buf = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef int i, k
    for i in range(m):
        row = rows[i]
        for k in range(n):
            buf[i * n + k] = row[k]
    return buf


def box_points(A, b, lo, hi):
    cdef int d = len(lo)
    cdef int m = len(A)
    cdef int i, k
    if d == 0:
        return [()] if all(bi <= 0 for bi in b) else []
    for k in range(d):
        if lo[k] > hi[k]:
            return []
    cdef long long* a = _to_c([list(r) for r in A], m, d)
    cdef long long* bb = <long long*> malloc(max(m, 1) * sizeof(long long))
    cdef long long* x = <long long*> malloc(d * sizeof(long long))
    cdef long long* l = <long long*> malloc(d * sizeof(long long))
    cdef long long* h = <long long*> malloc(d * sizeof(long long))
    cdef long long* vals = <long long*> malloc(max(m, 1) * sizeof(long long))
    cdef long long span
    cdef bint ok
    out = []
    try:
        for i in range(m):
            bb[i] = b[i]
        for k in range(d):
            l[k] = lo[k]
            h[k] = hi[k]
            x[k] = l[k]
        for i in range(m):
            vals[i] = 0
            for k in range(d):
                vals[i] += a[i * d + k] * x[k]
        while True:
            ok = True
            for i in range(m):
                if vals[i] < bb[i]:
                    ok = False
                    break
            if ok:
                out.append(tuple([x[k] for k in range(d)]))
            k = d - 1
            while k >= 0 and x[k] == h[k]:
                span = h[k] - l[k]
                for i in range(m):
                    vals[i] -= a[i * d + k] * span
                x[k] = l[k]
                k -= 1
            if k < 0:
                break
            x[k] += 1
            for i in range(m):
                vals[i] += a[i * d + k]
    finally:
        free(a)
        free(bb)
        free(x)
        free(l)
        free(h)
        free(vals)
    return out


def weight_fibers(W, int bound):
    cdef int r = len(W)
    cdef int n = len(W[0]) if r else 0
    cdef int i, k, j
    if n == 0:
        return [((0,) * r, ())] if bound >= 0 else []
    out = []
    if bound < 0:
        return out
    cdef long long* w = _to_c([list(row) for row in W], r, n)
    cdef long long* a = <long long*> malloc(n * sizeof(long long))
    cdef long long* acc = <long long*> malloc(max(r, 1) * sizeof(long long))
    cdef long long used = 0
    try:
        for k in range(n):
            a[k] = 0
        for i in range(r):
            acc[i] = 0
        # lexicographic successor over {a >= 0 : sum(a) <= bound}
        while True:
            out.append((tuple([acc[i] for i in range(r)]), tuple([a[k] for k in range(n)])))
            if used < bound:
                k = n - 1
            else:
                j = n - 1
                while j >= 0 and a[j] == 0:
                    j -= 1
                if j <= 0:
                    break
                used -= a[j]
                for i in range(r):
                    acc[i] -= w[i * n + j] * a[j]
                a[j] = 0
                k = j - 1
            a[k] += 1
            used += 1
            for i in range(r):
                acc[i] += w[i * n + k]
    finally:
        free(w)
        free(a)
        free(acc)
    return out


def reducible_mask(vals):
    cdef int n = len(vals)
    cdef int m = len(vals[0]) if n else 0
    cdef int i, j, k
    cdef bint le
    mask = [False] * n
    if n == 0:
        return mask
    cdef long long* v = _to_c([list(r) for r in vals], n, m)
    try:
        for i in range(n):
            for j in range(n):
                if j == i:
                    continue
                le = True
                for k in range(m):
                    if v[j * m + k] > v[i * m + k]:
                        le = False
                        break
                if le:
                    mask[i] = True
                    break
    finally:
        free(v)
    return mask
