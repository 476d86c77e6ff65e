"""Pure-Python versions of the integer enumeration kernels.

These are the reference implementations; ``_kernels.pyx`` mirrors them with
C integers and must return identical results in identical order.
"""


def box_points(A, b, lo, hi):
    """Integer points ``x`` with ``lo <= x <= hi`` and ``A x >= b``, lexicographic order."""
    d = len(lo)
    if d == 0:
        return [()] if all(bi <= 0 for bi in b) else []
    if any(l > h for l, h in zip(lo, hi)):
        return []
    m = len(A)
    out = []
    x = list(lo)
    vals = [sum(A[i][k] * x[k] for k in range(d)) for i in range(m)]
    while True:
        if all(vals[i] >= b[i] for i in range(m)):
            out.append(tuple(x))
        k = d - 1
        while k >= 0 and x[k] == hi[k]:
            span = hi[k] - lo[k]
            for i in range(m):
                vals[i] -= A[i][k] * span
            x[k] = lo[k]
            k -= 1
        if k < 0:
            return out
        x[k] += 1
        for i in range(m):
            vals[i] += A[i][k]


def weight_fibers(W, bound):
    """All ``(W a, a)`` for ``a`` in ``N^n`` with ``sum(a) <= bound``.

    ``W`` is given row-wise (``r`` rows of length ``n``).  Exponent vectors
    come out in lexicographic order.
    """
    r = len(W)
    n = len(W[0]) if r else 0
    out = []
    if n == 0:
        return [((0,) * r, ())] if bound >= 0 else []
    a = [0] * n

    def rec(k, left, acc):
        if k == n - 1:
            for e in range(left + 1):
                a[k] = e
                out.append((tuple(acc[i] + W[i][k] * e for i in range(r)), tuple(a)))
            a[k] = 0
            return
        for e in range(left + 1):
            a[k] = e
            rec(k + 1, left - e, [acc[i] + W[i][k] * e for i in range(r)])
        a[k] = 0

    if bound >= 0:
        rec(0, bound, [0] * r)
    return out


def reducible_mask(vals):
    """``mask[i]`` is true when some other row is componentwise ``<=`` row ``i``."""
    n = len(vals)
    mask = [False] * n
    for i in range(n):
        vi = vals[i]
        for j in range(n):
            if j != i and all(p <= q for p, q in zip(vals[j], vi)):
                mask[i] = True
                break
    return mask
