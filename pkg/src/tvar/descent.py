"""Descent data: cone stability, splitting of twisting cocycles, divisor twists.

A twisting function is ``h(m) = sign(m) * chi^{E m}`` with ``E : M -> M_Y``
and ``sign(m) = (-1)^<e, m>`` for a parity vector ``e``.  It is a cocycle when
``E + tau~_Y E tau~ = 0`` and ``(1 + tau~^T) e = 0 mod 2``.  It splits when
``h(m) = g(m)^{-1} sigma_Y(g(tau~ m))`` for some ``g(m) = c(m) chi^{G m}``,
which amounts to::

    E = -G + tau~_Y G tau~                      (over the integers)
    (1 + tau~)^T theta = e / 2      (mod Z^r)   with c(m) = exp(2 pi i <theta, m>)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .convex import RationalCone, TailedPolyhedron, rank_of
from .divisors import PolyhedralDivisor
from .errors import NotACocycle, RankMismatch
from .lattice import (
    LatticeInvolution,
    LatticeMap,
    _linear_system,
    _solve_matrix_equation,
    classify_involution,
    integer_determinant,
    smith_diagonal,
    smith_normal_form,
)

__all__ = [
    "CharacterCocycle",
    "SplitResult",
    "StabilityReport",
    "cone_stable",
    "stable_equivalent_involution",
    "split_cocycle",
    "twist_divisor",
    "twist_by_cokernel_element",
    "parity_from_generator_signs",
]


def _solve_mod2(rows, rhs):
    """A solution of ``rows x = rhs`` over GF(2), or ``None``."""
    n = len(rows[0]) if rows else 0
    aug = [[x % 2 for x in r] + [b % 2] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i][c]:
                aug[i] = [(x + y) % 2 for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] and not any(row[:-1]) for row in aug):
        return None
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return tuple(x)


def parity_from_generator_signs(generators, signs) -> tuple:
    """Parity vector ``e`` with ``(-1)^<e, g> = sign`` on every generator.

    Raises :class:`NotACocycle` when the signs are not multiplicative, i.e.
    violate a relation among the generators.
    """
    generators = [tuple(int(x) for x in g) for g in generators]
    rows = generators
    rhs = [0 if s == 1 else 1 for s in signs]
    if any(s not in (1, -1) for s in signs):
        raise NotACocycle("signs must be +1 or -1")
    e = _solve_mod2(rows, rhs)
    if e is None:
        raise NotACocycle("generator signs do not extend to a character")
    return e


@dataclass(frozen=True)
class CharacterCocycle:
    exponent: LatticeMap
    parity: tuple
    tau_tilde: LatticeInvolution
    tau_tilde_Y: LatticeInvolution

    def __post_init__(self):
        E, t, tY = self.exponent, self.tau_tilde, self.tau_tilde_Y
        if E.cols != t.rows or E.rows != tY.rows or len(self.parity) != t.rows:
            raise RankMismatch("cocycle data of inconsistent ranks")
        if any((E + tY @ E @ t).entries):
            raise NotACocycle("exponent violates E + tau_Y E tau = 0")
        if any((x + y) % 2 for x, y in zip(self.parity, t.T.apply(self.parity))):
            raise NotACocycle("sign violates sign(m) sign(tau m) = 1")

    @classmethod
    def build(cls, exponent, tau_tilde, tau_tilde_Y, parity=None):
        tau_tilde = LatticeInvolution.of(tau_tilde)
        tau_tilde_Y = LatticeInvolution.of(tau_tilde_Y)
        if not isinstance(exponent, LatticeMap):
            exponent = LatticeMap.from_rows(exponent, cols=tau_tilde.rows)
        parity = tuple(int(x) % 2 for x in parity) if parity is not None else (0,) * tau_tilde.rows
        return cls(exponent, parity, tau_tilde, tau_tilde_Y)

    def sign(self, m) -> int:
        return -1 if sum(e * x for e, x in zip(self.parity, m)) % 2 else 1

    def __call__(self, m) -> tuple:
        return self.sign(m), self.exponent.apply(m)

    def coboundary_twist(self, G: LatticeMap) -> "CharacterCocycle":
        """The cohomologous cocycle ``E - G + tau_Y G tau``."""
        E = self.exponent - G + self.tau_tilde_Y @ G @ self.tau_tilde
        return CharacterCocycle(E, self.parity, self.tau_tilde, self.tau_tilde_Y)


# ---------------------------------------------------------------------------
# cone stability


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    equivalent: LatticeInvolution | None
    exhaustive: bool


def cone_stable(tau: LatticeMap, cone: RationalCone) -> bool:
    if tau.rows != cone.dim or tau.cols != cone.dim:
        raise RankMismatch("involution and cone ranks differ")
    return cone.image(tau) == cone


def _is_unimodular(U: LatticeMap) -> bool:
    return abs(integer_determinant(U)) == 1


def _ray_automorphisms(cone: RationalCone):
    """Unimodular maps permuting the rays of a pointed full-dimensional cone."""
    d = cone.dim
    rays = list(cone.rays)
    basis = []
    for r in rays:
        if rank_of(basis + [r]) > len(basis):
            basis.append(r)
    B = [[Fraction(basis[j][i]) for j in range(d)] for i in range(d)]
    Binv = _rational_inverse(B)
    for images in permutations(rays, d):
        # U = images_matrix * B^{-1}
        Im = [[Fraction(images[j][i]) for j in range(d)] for i in range(d)]
        U = [[sum(Im[i][k] * Binv[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
        if any(x.denominator != 1 for row in U for x in row):
            continue
        Um = LatticeMap.from_rows([[int(x) for x in row] for row in U])
        if not _is_unimodular(Um):
            continue
        if sorted(Um.apply(r) for r in rays) != rays:
            continue
        yield Um


def _rational_inverse(A):
    n = len(A)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _signed_permutations(d):
    for perm in permutations(range(d)):
        for signs in product((1, -1), repeat=d):
            rows = [[0] * d for _ in range(d)]
            for i, j in enumerate(perm):
                rows[j][i] = signs[i]
            yield LatticeMap.from_rows(rows)


def stable_equivalent_involution(tau: LatticeMap, cone: RationalCone) -> StabilityReport:
    """Look for an involution of the same type as ``tau`` that preserves ``cone``.

    Two lattice involutions are conjugate exactly when their types agree, so
    for pointed full-dimensional cones the search over the cone's finite
    automorphism group is complete.  Other cones fall back to conjugating
    ``tau`` by signed permutations in rank at most 3.
    """
    tau = LatticeInvolution.of(tau)
    if cone_stable(tau, cone):
        return StabilityReport(True, tau, True)
    kind = classify_involution(tau)
    if cone.is_pointed and cone.is_full:
        for U in _ray_automorphisms(cone):
            if (U @ U).is_identity() and classify_involution(U) == kind:
                return StabilityReport(False, LatticeInvolution.of(U), True)
        return StabilityReport(False, None, True)
    if cone.dim > 3:
        return StabilityReport(False, None, False)
    for S in _signed_permutations(cone.dim):
        conj = S @ tau @ S.T
        if cone_stable(conj, cone):
            return StabilityReport(False, LatticeInvolution.of(conj), False)
    return StabilityReport(False, None, False)


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class SplitResult:
    """Outcome of :func:`split_cocycle`.

    On success ``g_exponent`` is ``G`` and ``theta`` gives the constant
    ``c(m) = exp(2 pi i <theta, m>)``.  On failure ``exponent_obstruction``
    or ``sign_obstruction`` explains why.
    """

    g_exponent: LatticeMap | None
    theta: tuple | None
    method: str
    exponent_obstruction: str | None = None
    sign_obstruction: int | None = None
    sign_witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.g_exponent is not None and self.theta is not None

    def describe(self) -> str:
        if self.ok:
            return f"splits ({self.method}): G = {self.g_exponent.tolist()}, theta = {[str(x) for x in self.theta]}"
        parts = []
        if self.exponent_obstruction:
            parts.append(f"exponent: {self.exponent_obstruction}")
        if self.sign_obstruction is not None:
            parts.append(f"sign obstruction {self.sign_obstruction} (witness {list(self.sign_witness)})")
        return "no splitting; " + "; ".join(parts)


_SWAP = ((0, 1), (1, 0))


def _closed_form_swap(c: CharacterCocycle) -> LatticeMap | None:
    """``G(m, m') = E(-m, 0)`` for a single swap factor."""
    if c.tau_tilde.tolist() != [list(r) for r in _SWAP]:
        return None
    col = c.exponent.col(0)
    return LatticeMap.from_rows([[-x, 0] for x in col], cols=2)


def _exponent_obstruction(c: CharacterCocycle) -> str:
    k, r = c.exponent.rows, c.exponent.cols
    A, rhs = _linear_system(
        (k, r), [lambda G: -G + c.tau_tilde_Y @ G @ c.tau_tilde], [c.exponent]
    )
    U, S, _ = smith_normal_form(A)
    diag = smith_diagonal(S)
    Ub = U.apply(rhs)
    for i, b in enumerate(Ub):
        d = diag[i] if i < len(diag) else 0
        if d == 0 and b != 0:
            return f"component {i} of the reduced system reads 0 = {b}"
        if d and b % d:
            return f"component {i} of the reduced system reads {d}*g = {b}, no integer solution"
    return "integer system inconsistent"


def _sign_split(c: CharacterCocycle):
    r = c.tau_tilde.rows
    A = (LatticeMap.identity(r) + c.tau_tilde).T
    U, S, V = smith_normal_form(A)
    diag = smith_diagonal(S)
    Ue = U.apply(c.parity)
    phi = []
    for i in range(r):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if Ue[i] % 2:
                witness = U.row(i)
                return None, witness
            phi.append(Fraction(0))
        else:
            phi.append(Fraction(Ue[i], 2 * d))
    theta = tuple(sum(V[i, j] * phi[j] for j in range(r)) % 1 for i in range(r))
    return theta, None


def split_cocycle(c: CharacterCocycle) -> SplitResult:
    """Write the cocycle as a coboundary, or report the obstruction.

    ``sign_witness`` on failure is a row ``w`` with ``w (1 + tau~)^T = 0`` and
    ``<w, e>`` odd, which certifies that the sign class is ``-1``.
    """
    G = _closed_form_swap(c)
    method = "closed form"
    if G is None or (-G + c.tau_tilde_Y @ G @ c.tau_tilde) != c.exponent:
        k, r = c.exponent.rows, c.exponent.cols
        G = _solve_matrix_equation(
            (k, r), [lambda X: -X + c.tau_tilde_Y @ X @ c.tau_tilde], [c.exponent]
        )
        method = "integer solve"
    theta, witness = _sign_split(c)
    return SplitResult(
        g_exponent=G,
        theta=theta,
        method=method,
        exponent_obstruction=None if G is not None else _exponent_obstruction(c),
        sign_obstruction=None if theta is not None else -1,
        sign_witness=witness,
    )


# ---------------------------------------------------------------------------
# twisting


def twist_divisor(D: PolyhedralDivisor, g_exponent: LatticeMap) -> PolyhedralDivisor:
    """Polyhedral divisor with evaluations ``D(m) - div(chi^{g m})``.

    Each coefficient moves by ``-g^T v``, since ``<m, g^T v> = <g m, v>``.
    """
    if g_exponent.cols != D.tail.dim or g_exponent.rows != D.base.dim:
        raise RankMismatch("twist has the wrong shape")
    gT = g_exponent.T

    def shift(v, poly: TailedPolyhedron) -> TailedPolyhedron:
        return poly.translate([-x for x in gT.apply(v)])

    return D.map_coefficients(shift)


def twist_by_cokernel_element(D: PolyhedralDivisor, s0: LatticeMap) -> PolyhedralDivisor:
    """Shift coefficients by ``s0(v)``: the effect of replacing ``s`` by ``s + s0 P``."""
    return twist_divisor(D, -s0.T)
