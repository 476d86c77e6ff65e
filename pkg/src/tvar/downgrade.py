"""Downgrading an equivariant torus embedding to a polyhedral divisor.

Given a subtorus ``T`` of the big torus of a toric variety ``X_sigma'``
(``F : N -> N'``) together with compatible real structures, produce the
quotient fan, the fiber-polyhedron coefficients, the induced involution on
the quotient lattice and the twisting character ``h``.

Matrix conventions: lattice maps act on column vectors; the dual map of
``A`` is ``A.T``.  The weight of the ``i``-th coordinate is row ``i`` of
``F``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .convex import QuasiFan, RationalCone, common_refinement, fiber_coefficient, hilbert_basis, image_fan
from .divisors import (
    PolyhedralDivisor,
    ToricBase,
    evaluate,
    fan_permutation,
    principal_divisor,
    pullback_involution,
    weight_chambers,
)
from .errors import ConeNotStable, NonEquivariant, NotSaturated, RankMismatch
from .lattice import (
    LatticeInvolution,
    LatticeMap,
    _check_saturated,
    _solve_matrix_equation,
    cokernel_projection,
    complement_section,
    cosection as plain_cosection,
    equivariant_cosection,
)

__all__ = [
    "TorusEmbedding",
    "AHDatum",
    "CompatibilityReport",
    "validate_embedding",
    "downgrade",
    "induced_quotient_involution",
    "check_real_compatibility",
]


@dataclass(frozen=True)
class TorusEmbedding:
    F: LatticeMap
    tau_hat: LatticeInvolution
    tau_hat_prime: LatticeInvolution
    sigma_prime: RationalCone
    generator_weights: tuple = ()

    @classmethod
    def build(cls, F, tau_hat, tau_hat_prime, sigma_prime=None, generator_weights=()):
        F = F if isinstance(F, LatticeMap) else LatticeMap.from_rows(F)
        if sigma_prime is None:
            sigma_prime = RationalCone.orthant(F.rows)
        elif not isinstance(sigma_prime, RationalCone):
            sigma_prime = RationalCone.from_generators(sigma_prime, F.rows)
        return cls(
            F,
            LatticeInvolution.of(tau_hat),
            LatticeInvolution.of(tau_hat_prime),
            sigma_prime,
            tuple(tuple(int(x) for x in w) for w in generator_weights),
        )

    @property
    def coordinate_weights(self) -> tuple:
        return tuple(self.F.row(i) for i in range(self.F.rows))

    @property
    def tau_tilde(self) -> LatticeInvolution:
        return self.tau_hat.T

    @property
    def coordinate_permutation(self) -> tuple | None:
        """``pi`` with ``tau_hat' e_i = e_pi(i)``, or ``None`` if not a permutation."""
        t = self.tau_hat_prime
        perm = []
        for j in range(t.cols):
            col = t.col(j)
            if sorted(col) != [0] * (t.rows - 1) + [1]:
                return None
            perm.append(col.index(1))
        return tuple(perm)


def validate_embedding(e: TorusEmbedding) -> TorusEmbedding:
    F = e.F
    if e.tau_hat.rows != F.cols or e.tau_hat_prime.rows != F.rows or e.sigma_prime.dim != F.rows:
        raise RankMismatch("ranks of F, the involutions and the cone disagree")
    _check_saturated(F)
    if F @ e.tau_hat != e.tau_hat_prime @ F:
        raise NonEquivariant(
            f"F*tau_hat = {(F @ e.tau_hat).tolist()} differs from tau_hat'*F = {(e.tau_hat_prime @ F).tolist()}"
        )
    if e.sigma_prime.image(e.tau_hat_prime) != e.sigma_prime:
        raise ConeNotStable("tau_hat' does not preserve the ambient cone")
    perm = e.coordinate_permutation
    if perm is not None:
        w = e.coordinate_weights
        tt = e.tau_tilde
        for i, j in enumerate(perm):
            if w[j] != tt.apply(w[i]):
                raise NonEquivariant(f"weight of coordinate {j} is not the conjugate of coordinate {i}")
    if e.generator_weights:
        tt = e.tau_tilde
        orig = Counter(e.generator_weights)
        image = Counter(tt.apply(w) for w in e.generator_weights)
        if orig != image:
            raise NonEquivariant("generator weights are not stable under the involution")
    return e


def induced_quotient_involution(e: TorusEmbedding, P: LatticeMap) -> LatticeInvolution:
    """The involution ``tau_Y`` on ``N_Y`` with ``tau_Y P = P tau_hat'``."""
    k = P.rows
    sol = _solve_matrix_equation((k, k), [lambda X: X @ P], [P @ e.tau_hat_prime])
    if sol is None:
        raise NonEquivariant("tau_hat' does not descend to the quotient lattice")
    return LatticeInvolution.of(sol)


@dataclass(frozen=True)
class AHDatum:
    embedding: TorusEmbedding
    base: ToricBase
    tau_hat_Y: LatticeInvolution
    divisor: PolyhedralDivisor
    weight_cone: RationalCone
    cosection_s: LatticeMap
    projection_P: LatticeMap
    section_t: LatticeMap
    h_exponent: LatticeMap
    h_sign: tuple = field(default=())
    equivariant: bool = False

    @property
    def tau_tilde(self) -> LatticeInvolution:
        return self.embedding.tau_tilde

    @property
    def tau_tilde_Y(self) -> LatticeInvolution:
        return self.tau_hat_Y.T

    @property
    def rank(self) -> int:
        return self.embedding.F.cols

    def sign(self, m) -> int:
        parity = sum(e * x for e, x in zip(self.h_sign, m)) % 2
        return -1 if parity else 1

    def with_h(self, exponent: LatticeMap, sign: tuple | None = None) -> "AHDatum":
        return AHDatum(
            self.embedding, self.base, self.tau_hat_Y, self.divisor, self.weight_cone,
            self.cosection_s, self.projection_P, self.section_t, exponent,
            tuple(sign) if sign is not None else self.h_sign, self.equivariant,
        )

    def with_divisor(self, divisor: PolyhedralDivisor) -> "AHDatum":
        return AHDatum(
            self.embedding, self.base, self.tau_hat_Y, divisor, self.weight_cone,
            self.cosection_s, self.projection_P, self.section_t, self.h_exponent,
            self.h_sign, self.equivariant,
        )


def _check_projection(F: LatticeMap, P: LatticeMap):
    if P.cols != F.rows or P.rows != F.rows - F.cols:
        raise RankMismatch("projection has the wrong shape")
    if any((P @ F).entries):
        raise NotSaturated("projection does not annihilate the image of F")
    if P.rows:
        _check_saturated(P.T)


def downgrade(e: TorusEmbedding, projection=None, cosection=None) -> AHDatum:
    """Quotient fan, coefficients and twist for an embedding.

    ``projection`` and ``cosection`` may be supplied to fix the otherwise
    normalized choices.  Without a cosection an equivariant one is preferred.
    """
    validate_embedding(e)
    F = e.F
    if projection is None:
        P = cokernel_projection(F)
    else:
        P = projection if isinstance(projection, LatticeMap) else LatticeMap.from_rows(projection, cols=F.rows)
        _check_projection(F, P)
    equivariant = False
    if cosection is None:
        s = equivariant_cosection(F, e.tau_hat, e.tau_hat_prime)
        equivariant = s is not None
        if s is None:
            s = plain_cosection(F)
    else:
        s = cosection if isinstance(cosection, LatticeMap) else LatticeMap.from_rows(cosection, cols=F.rows)
        if s @ F != LatticeMap.identity(F.cols):
            raise NotSaturated("supplied cosection is not a left inverse of F")
        equivariant = e.tau_hat @ s == s @ e.tau_hat_prime
    t = complement_section(F, s, P)
    tau_Y = induced_quotient_involution(e, P)

    fan = image_fan(P, e.sigma_prime)
    base = ToricBase(fan)
    tail = RationalCone.from_inequalities(
        [(F.T).apply(a) for a in e.sigma_prime.facets],
        [(F.T).apply(c) for c in e.sigma_prime.equations],
        F.cols,
    )
    terms = {v: fiber_coefficient(P, s, e.sigma_prime, v, fan=fan) for v in fan.rays}
    divisor = PolyhedralDivisor(base, tail, terms)

    weights = [F.row(i) for i in range(F.rows)]
    dual_sigma = e.sigma_prime.dual()
    gens = [(F.T).apply(g) for g in dual_sigma.rays]
    gens += [(F.T).apply(l) for l in dual_sigma.lineality]
    gens += [tuple(-x for x in (F.T).apply(l)) for l in dual_sigma.lineality]
    weight_cone = RationalCone.from_generators(gens or weights, F.cols)

    tt, ttp = e.tau_tilde, e.tau_hat_prime.T
    # exponent of h(m) = t*(tau~' s* tau~(m) - s*(m))
    h_exp = t.T @ (ttp @ s.T @ tt - s.T)
    return AHDatum(
        embedding=e,
        base=base,
        tau_hat_Y=tau_Y,
        divisor=divisor,
        weight_cone=weight_cone,
        cosection_s=s,
        projection_P=P,
        section_t=t,
        h_exponent=h_exp,
        h_sign=(0,) * F.cols,
        equivariant=equivariant,
    )


# ---------------------------------------------------------------------------
# compatibility with the real structures


@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    checked: int
    cocycle_ok: bool
    sign_ok: bool
    failure: tuple | None = None

    def describe(self) -> str:
        if self.ok:
            return f"compatible ({self.checked} weights checked)"
        if not self.cocycle_ok:
            return "h exponent violates the cocycle identity"
        if not self.sign_ok:
            return "h sign violates the cocycle identity"
        m, lhs, rhs = self.failure
        return f"incompatible at m = {list(m)}: pullback {lhs!r} != {rhs!r}"


def compatibility_weights(a: AHDatum) -> list:
    """Hilbert bases of the chambers on which both sides of the identity are linear."""
    chambers = weight_chambers(a.divisor)
    tt = a.tau_tilde
    flipped = [c.image(tt) for c in chambers.maximal_cones]
    refined = common_refinement(
        [chambers, QuasiFan(chambers.dim, flipped)], a.divisor.weight_cone
    )
    points = {}
    for ch in refined.maximal_cones:
        for m in hilbert_basis(ch):
            points[m] = None
        points[ch.interior_point()] = None
    return sorted(points)


def check_real_compatibility(a: AHDatum) -> CompatibilityReport:
    """Verify ``sigma_Y^* D(m) = D(tau~ m) + div(h(tau~ m))`` and the cocycle identity."""
    tt, ttY = a.tau_tilde, a.tau_tilde_Y
    E = a.h_exponent
    cocycle_ok = not any((E + ttY @ E @ tt).entries)
    parity = [(x + y) % 2 for x, y in zip(a.h_sign, a.embedding.tau_hat.apply(a.h_sign))] if a.h_sign else []
    sign_ok = not any(parity)
    fan_permutation(a.base, a.tau_hat_Y)
    checked = 0
    failure = None
    for m in compatibility_weights(a):
        tm = tt.apply(m)
        lhs = pullback_involution(a.base, a.tau_hat_Y, evaluate(a.divisor, m))
        rhs = evaluate(a.divisor, tm) + principal_divisor(a.base, E.apply(tm))
        checked += 1
        if lhs != rhs:
            failure = (tuple(m), lhs, rhs)
            break
    return CompatibilityReport(
        ok=cocycle_ok and sign_ok and failure is None,
        checked=checked,
        cocycle_ok=cocycle_ok,
        sign_ok=sign_ok,
        failure=failure,
    )
