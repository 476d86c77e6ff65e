"""Integer matrix algebra for lattice homomorphisms.

Everything here works on Python ints, so intermediate coefficient swell in
the Smith normal form never overflows.  A :class:`LatticeMap` with ``rows``
rows and ``cols`` columns is a homomorphism ``Z^cols -> Z^rows`` acting on
column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import NotEquivariantEmbedding, NotInvolution, NotSaturated, RankMismatch

__all__ = [
    "LatticeMap",
    "LatticeInvolution",
    "InvolutionType",
    "smith_normal_form",
    "hermite_normal_form",
    "integer_kernel",
    "solve_integer",
    "cokernel_projection",
    "cosection",
    "equivariant_cosection",
    "complement_section",
    "classify_involution",
    "integer_determinant",
]


@dataclass(frozen=True)
class LatticeMap:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, cols or 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int):
        return cls(rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "LatticeMap":
        return LatticeMap.from_rows(
            [self.col(j) for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other):
        if isinstance(other, LatticeMap):
            if self.cols != other.rows:
                raise RankMismatch(
                    f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
                )
            ocols = [other.col(j) for j in range(other.cols)]
            return LatticeMap(
                self.rows,
                other.cols,
                tuple(
                    sum(a * b for a, b in zip(self.row(i), c))
                    for i in range(self.rows)
                    for c in ocols
                ),
            )
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        """Image of a column vector (ints or Fractions)."""
        if len(v) != self.cols:
            raise RankMismatch(f"vector of length {len(v)} for a map with {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(self.row(i), v)) for i in range(self.rows))

    def __add__(self, other: "LatticeMap") -> "LatticeMap":
        self._same_shape(other)
        return LatticeMap(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "LatticeMap") -> "LatticeMap":
        self._same_shape(other)
        return LatticeMap(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "LatticeMap":
        return LatticeMap(self.rows, self.cols, tuple(-a for a in self.entries))

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise RankMismatch("shape mismatch")

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == LatticeMap.identity(self.rows)

    def __repr__(self):
        return f"LatticeMap({self.tolist()!r})" if self.rows else f"LatticeMap(0x{self.cols})"


class LatticeInvolution(LatticeMap):
    """A square lattice map squaring to the identity."""

    def __post_init__(self):
        super().__post_init__()
        if self.rows != self.cols:
            raise NotInvolution("an involution must be square")
        if not (LatticeMap(self.rows, self.cols, self.entries) @ LatticeMap(self.rows, self.cols, self.entries)).is_identity():
            raise NotInvolution(f"{self.tolist()} does not square to the identity")

    @classmethod
    def of(cls, m) -> "LatticeInvolution":
        if isinstance(m, LatticeInvolution):
            return m
        if isinstance(m, LatticeMap):
            return cls(m.rows, m.cols, m.entries)
        return cls.from_rows(m)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, LatticeMap.identity(n).entries)

    @property
    def T(self) -> "LatticeInvolution":
        t = LatticeMap.T.fget(self)
        return LatticeInvolution(t.rows, t.cols, t.entries)


@dataclass(frozen=True)
class InvolutionType:
    n0: int
    n1: int
    n2: int

    @property
    def rank(self) -> int:
        return self.n0 + self.n1 + 2 * self.n2

    @property
    def quasi_split(self) -> bool:
        return self.n1 == 0

    def as_dict(self) -> dict:
        return {"n0": self.n0, "n1": self.n1, "n2": self.n2}


# ---------------------------------------------------------------------------
# normal forms


def _mat(m) -> list:
    return m.tolist() if isinstance(m, LatticeMap) else [list(r) for r in m]


def _ident(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(a: list, nrows: int, ncols: int):
    """In-place Smith reduction; returns (U, S, V) as nested lists."""
    u = _ident(nrows)
    v = _ident(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row dst += k * row src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        if k:
            for r in a:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return u, a, v
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def smith_normal_form(A) -> tuple[LatticeMap, LatticeMap, LatticeMap]:
    """Return unimodular ``U``, ``V`` and diagonal ``S`` with ``U @ A @ V == S``.

    The diagonal is nonnegative and each entry divides the next.
    """
    rows = _mat(A)
    nrows = len(rows)
    ncols = A.cols if isinstance(A, LatticeMap) else (len(rows[0]) if rows else 0)
    u, s, v = _smith([list(r) for r in rows], nrows, ncols)
    return (
        LatticeMap.from_rows(u, cols=nrows),
        LatticeMap.from_rows(s, cols=ncols),
        LatticeMap.from_rows(v, cols=ncols),
    )


def smith_diagonal(S: LatticeMap) -> list:
    return [S[i, i] for i in range(min(S.rows, S.cols))]


def hermite_normal_form(A, keep_zero_rows: bool = False) -> tuple[LatticeMap, LatticeMap]:
    """Row-style Hermite normal form ``H = W @ A`` with ``W`` unimodular.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    Zero rows are dropped from ``H`` (and the matching rows of ``W``) unless
    ``keep_zero_rows`` is set.
    """
    a = _mat(A)
    nrows = len(a)
    ncols = A.cols if isinstance(A, LatticeMap) else (len(a[0]) if a else 0)
    w = _ident(nrows)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if a[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(a[k][c]))
            a[r], a[i] = a[i], a[r]
            w[r], w[i] = w[i], w[r]
            done = True
            for k in range(r + 1, nrows):
                if a[k][c]:
                    q = a[k][c] // a[r][c]
                    a[k] = [x - q * y for x, y in zip(a[k], a[r])]
                    w[k] = [x - q * y for x, y in zip(w[k], w[r])]
                    done &= a[k][c] == 0
            if done:
                break
        if r < nrows and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                w[r] = [-x for x in w[r]]
            pivots.append((r, c))
            r += 1
    for r_, c in pivots:
        p = a[r_][c]
        for k in range(r_):
            q = a[k][c] // p
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], a[r_])]
                w[k] = [x - q * y for x, y in zip(w[k], w[r_])]
    if not keep_zero_rows:
        a, w = a[:r], w[:r]
    return LatticeMap.from_rows(a, cols=ncols), LatticeMap.from_rows(w, cols=nrows)


def integer_determinant(A) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    m = [list(r) for r in _mat(A)]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def integer_kernel(A) -> list:
    """Basis (list of tuples) of the saturated integer kernel of ``A``."""
    A = A if isinstance(A, LatticeMap) else LatticeMap.from_rows(A)
    if A.cols == 0:
        return []
    _, S, V = smith_normal_form(A)
    rank = sum(1 for d in smith_diagonal(S) if d)
    return [V.col(j) for j in range(rank, A.cols)]


def solve_integer(A, b) -> tuple | None:
    """Return ``(x0, kernel_basis)`` describing all integer ``x`` with ``A x = b``.

    ``None`` when no integer solution exists.
    """
    A = A if isinstance(A, LatticeMap) else LatticeMap.from_rows(A)
    U, S, V = smith_normal_form(A)
    c = U.apply(tuple(b))
    diag = smith_diagonal(S)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    rank = sum(1 for d in diag if d)
    return V.apply(y), [V.col(j) for j in range(rank, A.cols)]


def _canonical_representative(x0, kernel) -> tuple:
    """Deterministic short representative of ``x0 + span_Z(kernel)``.

    HNF-reduce against the kernel lattice, then descend greedily in the L1
    norm (ties broken lexicographically) over single and paired basis moves.
    """
    x = list(x0)
    if not kernel:
        return tuple(x)
    H, _ = hermite_normal_form([list(k) for k in kernel])
    basis = [H.row(i) for i in range(H.rows)]
    for row in basis:
        c = next(j for j, v in enumerate(row) if v)
        q = x[c] // row[c]
        if q:
            x = [xi - q * ri for xi, ri in zip(x, row)]
    moves = []
    for i, b in enumerate(basis):
        moves.append(b)
        moves.append(tuple(-v for v in b))
        for b2 in basis[i + 1:]:
            for s1, s2 in product((1, -1), repeat=2):
                moves.append(tuple(s1 * p + s2 * q for p, q in zip(b, b2)))

    def key(v):
        return (sum(abs(t) for t in v), tuple(v))

    cur = key(x)
    while True:
        best = min((key([a + d for a, d in zip(x, mv)]) for mv in moves), default=cur)
        if best >= cur:
            return tuple(x)
        x = list(best[1])
        cur = best


# ---------------------------------------------------------------------------
# exact sequences


def _as_map(F) -> LatticeMap:
    return F if isinstance(F, LatticeMap) else LatticeMap.from_rows(F)


def _check_saturated(F: LatticeMap):
    U, S, V = smith_normal_form(F)
    diag = smith_diagonal(S)
    if len(diag) < F.cols or any(d != 1 for d in diag):
        raise NotSaturated(
            f"embedding {F.tolist()} has Smith invariants {diag}; "
            "need an injective map with torsion-free cokernel"
        )
    return U, S, V


def cokernel_projection(F) -> LatticeMap:
    """Surjection ``P`` with kernel exactly ``image(F)``, rows in Hermite form."""
    F = _as_map(F)
    U, _, _ = _check_saturated(F)
    n, r = F.rows, F.cols
    P = LatticeMap.from_rows([U.row(i) for i in range(r, n)], cols=n)
    if P.rows == 0:
        return P
    H, _ = hermite_normal_form(P)
    return H


def _linear_system(shape, maps, targets):
    """Assemble the integer system ``maps[k](X) == targets[k]`` in the entries of ``X``."""
    nr, nc = shape
    cols = []
    for idx in range(nr * nc):
        basis = LatticeMap(nr, nc, tuple(int(i == idx) for i in range(nr * nc)))
        cols.append(tuple(x for f in maps for x in f(basis).entries))
    rhs = tuple(x for t in targets for x in t.entries)
    A = LatticeMap.from_rows(
        [[c[i] for c in cols] for i in range(len(rhs))], cols=nr * nc
    )
    return A, rhs


def _solve_matrix_equation(shape, maps, targets) -> LatticeMap | None:
    A, rhs = _linear_system(shape, maps, targets)
    sol = solve_integer(A, rhs)
    if sol is None:
        return None
    x = _canonical_representative(*sol)
    return LatticeMap(shape[0], shape[1], x)


def cosection(F) -> LatticeMap:
    """A left inverse ``s`` of ``F`` (``s @ F == identity``), canonically normalized."""
    F = _as_map(F)
    _check_saturated(F)
    ident = LatticeMap.identity(F.cols)
    s = _solve_matrix_equation((F.cols, F.rows), [lambda X: X @ F], [ident])
    assert s is not None
    return s


def equivariant_cosection(F, tau_dom, tau_cod) -> LatticeMap | None:
    """A left inverse of ``F`` intertwining the involutions, or ``None``.

    ``tau_dom`` acts on the domain of ``F`` and ``tau_cod`` on its codomain;
    the result satisfies ``s @ F == 1`` and ``tau_dom @ s == s @ tau_cod``.
    """
    F = _as_map(F)
    tau_dom = LatticeInvolution.of(tau_dom)
    tau_cod = LatticeInvolution.of(tau_cod)
    if tau_dom.rows != F.cols or tau_cod.rows != F.rows:
        raise RankMismatch("involution ranks do not match the embedding")
    if F @ tau_dom != tau_cod @ F:
        raise NotEquivariantEmbedding(
            "F does not intertwine the involutions (F*tau != tau'*F)"
        )
    _check_saturated(F)
    ident = LatticeMap.identity(F.cols)
    zero = LatticeMap.zero(F.cols, F.rows)
    return _solve_matrix_equation(
        (F.cols, F.rows),
        [lambda X: X @ F, lambda X: tau_dom @ X - X @ tau_cod],
        [ident, zero],
    )


def complement_section(F, s, P) -> LatticeMap:
    """The map ``t`` with ``P @ t == 1`` and ``t @ P == 1 - F @ s``.

    Its transpose is the cosection ``t*`` of the dual sequence; it is
    uniquely determined by ``s`` and ``P``.
    """
    F, s, P = _as_map(F), _as_map(s), _as_map(P)
    n = F.rows
    target = LatticeMap.identity(n) - F @ s
    t = _solve_matrix_equation((n, P.rows), [lambda X: X @ P], [target])
    if t is None:
        raise NotSaturated("P is not a cokernel projection of F")
    return t


# ---------------------------------------------------------------------------
# involutions


def classify_involution(tau) -> InvolutionType:
    """Decompose a lattice involution into trivial, sign and swap factors.

    ``n2`` is the 2-rank of ``M / (M_+ + M_-)`` where ``M_+`` and ``M_-`` are
    the (saturated) fixed and anti-fixed sublattices.
    """
    tau = LatticeInvolution.of(tau)
    n = tau.rows
    ident = LatticeMap.identity(n)
    plus = integer_kernel(tau - ident)
    minus = integer_kernel(tau + ident)
    basis = plus + minus
    if len(basis) != n:
        raise NotInvolution("eigenlattices do not span")
    index = abs(integer_determinant([list(v) for v in basis])) if n else 1
    n2 = index.bit_length() - 1
    if index != 1 << n2:
        raise NotInvolution(f"index {index} of the eigenlattice sum is not a power of 2")
    return InvolutionType(len(plus) - n2, len(minus) - n2, n2)


def block_involution(kind: InvolutionType) -> LatticeInvolution:
    """The standard representative ``id^n0 + (-id)^n1 + swap^n2``."""
    n = kind.rank
    rows = [[0] * n for _ in range(n)]
    k = 0
    for _ in range(kind.n0):
        rows[k][k] = 1
        k += 1
    for _ in range(kind.n1):
        rows[k][k] = -1
        k += 1
    for _ in range(kind.n2):
        rows[k][k + 1] = rows[k + 1][k] = 1
        k += 2
    return LatticeInvolution.from_rows(rows, cols=n)


def inverse_unimodular(U) -> LatticeMap:
    U = _as_map(U)
    n = U.rows
    sol = _solve_matrix_equation((n, n), [lambda X: U @ X], [LatticeMap.identity(n)])
    if sol is None:
        raise ValueError("matrix is not unimodular")
    return sol


def primitive(v: Iterable[int]) -> tuple:
    from math import gcd

    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else v
