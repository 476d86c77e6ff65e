"""Polyhedral divisors on toric bases and their evaluations.

Prime toric divisors are labelled by the primitive ray generator of the
corresponding ray, as a tuple of ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .convex import (
    QuasiFan,
    RationalCone,
    TailedPolyhedron,
    as_fraction,
    common_refinement,
    dot,
    dual_cone,
    hilbert_basis,
    normal_quasifan,
    support_eval,
)
from .errors import FanNotStable, NonConvexSupport, NotARay, OutsideWeightCone, RankMismatch
from .lattice import LatticeMap, solve_integer

__all__ = [
    "ToricBase",
    "WeilQDivisor",
    "PolyhedralDivisor",
    "PPReport",
    "evaluate",
    "superadditivity_check",
    "principal_divisor",
    "sections_polyhedron",
    "divisor_properties",
    "pp_check",
    "fan_permutation",
    "pullback_involution",
]


class ToricBase:
    """A toric variety given by a pointed fan.

    ``semi_projective`` records a caller's claim; it is trusted, but
    :attr:`convex_support` is always computed.
    """

    def __init__(self, fan: QuasiFan, semi_projective: bool = True):
        if not fan.is_pointed:
            raise NonConvexSupport("toric bases need a pointed fan")
        self.fan = fan
        self.semi_projective = semi_projective

    @classmethod
    def from_cones(cls, dim: int, cones, semi_projective: bool = True) -> "ToricBase":
        return cls(QuasiFan(dim, [RationalCone.from_generators(c, dim) if c else RationalCone.zero(dim)
                                  for c in cones]), semi_projective)

    @classmethod
    def projective_line(cls) -> "ToricBase":
        return cls.from_cones(1, [[[1]], [[-1]]])

    @classmethod
    def point(cls) -> "ToricBase":
        return cls(QuasiFan(0, [RationalCone.zero(0)]))

    @property
    def dim(self) -> int:
        return self.fan.dim

    @property
    def ray_ids(self) -> tuple:
        return self.fan.rays

    @cached_property
    def convex_support(self) -> bool:
        cones = self.fan.maximal_cones
        dims = {c.dimension for c in cones}
        if len(dims) > 1:
            return False
        if not cones or dims == {0}:
            return True
        facet_sets = {}
        for c in cones:
            for a in c.facets:
                tight = frozenset(r for r in c.rays if dot(a, r) == 0)
                facet_sets.setdefault(tight, []).append(a)
        rays = self.fan.rays
        for normals in facet_sets.values():
            if len(normals) == 1:
                a = normals[0]
                if any(dot(a, r) < 0 for r in rays):
                    return False
        return True

    def key(self):
        return self.fan.key()

    def __eq__(self, other):
        return isinstance(other, ToricBase) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"ToricBase(rays={[list(r) for r in self.ray_ids]}, cones={len(self.fan.maximal_cones)})"


def _ray_key(base: ToricBase, ray) -> tuple:
    ray = tuple(int(x) for x in ray)
    if ray not in base.ray_ids:
        raise NotARay(f"{list(ray)} is not a ray of the base fan")
    return ray


class WeilQDivisor:
    """Finite formal sum of prime toric divisors with rational coefficients."""

    __slots__ = ("base", "_coeffs")

    def __init__(self, base: ToricBase, coefficients: Mapping | None = None):
        self.base = base
        coeffs = {}
        for ray, c in (coefficients or {}).items():
            c = as_fraction(c)
            if c:
                coeffs[_ray_key(base, ray)] = c
        self._coeffs = tuple(sorted(coeffs.items()))

    @property
    def coefficients(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, ray) -> Fraction:
        return self.coefficients.get(tuple(int(x) for x in ray), Fraction(0))

    def _combine(self, other, sign):
        if other.base != self.base:
            raise RankMismatch("divisors live on different bases")
        out = self.coefficients
        for r, c in other._coeffs:
            out[r] = out.get(r, Fraction(0)) + sign * c
        return WeilQDivisor(self.base, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return WeilQDivisor(self.base, {r: -c for r, c in self._coeffs})

    def __ge__(self, other):
        return all(c >= 0 for c in (self - other).coefficients.values())

    def __le__(self, other):
        return other >= self

    def __eq__(self, other):
        return isinstance(other, WeilQDivisor) and self.base == other.base and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.base, self._coeffs))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __repr__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"{c}*D{list(r)}" for r, c in self._coeffs)


@dataclass(frozen=True)
class PolyhedralDivisor:
    """``sum of coefficient (x) D_ray``; rays left out carry the tail itself."""

    base: ToricBase
    tail: RationalCone
    terms: tuple = ()
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        terms = {}
        for ray, poly in (self.terms.items() if isinstance(self.terms, Mapping) else self.terms):
            ray = _ray_key(self.base, ray)
            if poly.tail != self.tail:
                raise RankMismatch(f"coefficient at {list(ray)} has tail {poly.tail!r}, expected {self.tail!r}")
            if ray in terms:
                raise ValueError(f"two coefficients for ray {list(ray)}")
            if not _is_trivial(poly):
                terms[ray] = poly
        object.__setattr__(self, "terms", tuple(sorted(terms.items(), key=lambda kv: kv[0])))

    @property
    def weight_cone(self) -> RationalCone:
        """The dual of the tail, where evaluations are finite."""
        return dual_cone(self.tail)

    def coefficient(self, ray) -> TailedPolyhedron:
        ray = _ray_key(self.base, ray)
        return dict(self.terms).get(ray, TailedPolyhedron([(0,) * self.tail.dim], self.tail))

    def map_coefficients(self, fn) -> "PolyhedralDivisor":
        """Apply ``fn(ray, polyhedron)`` to every ray of the base, trivial ones included."""
        return PolyhedralDivisor(
            self.base, self.tail, tuple((r, fn(r, self.coefficient(r))) for r in self.base.ray_ids)
        )

    def __repr__(self):
        body = " + ".join(f"{p!r} (x) D{list(r)}" for r, p in self.terms) or "0"
        return f"PolyhedralDivisor({body})"


def _is_trivial(poly: TailedPolyhedron) -> bool:
    return poly.vertices == ((Fraction(0),) * poly.dim,)


def evaluate(D: PolyhedralDivisor, m) -> WeilQDivisor:
    m = [as_fraction(x) for x in m]
    if len(m) != D.tail.dim:
        raise RankMismatch("weight of the wrong rank")
    if not D.weight_cone.contains(m):
        raise OutsideWeightCone(f"{[str(x) for x in m]} is outside the weight cone")
    return WeilQDivisor(D.base, {r: support_eval(p, m) for r, p in D.terms})


def superadditivity_check(D: PolyhedralDivisor, m, m2) -> bool:
    total = [as_fraction(a) + as_fraction(b) for a, b in zip(m, m2)]
    return evaluate(D, total) >= evaluate(D, m) + evaluate(D, m2)


def principal_divisor(Y: ToricBase, u) -> WeilQDivisor:
    if len(u) != Y.dim:
        raise RankMismatch("character of the wrong rank")
    return WeilQDivisor(Y, {r: dot(u, r) for r in Y.ray_ids})


def sections_polyhedron(Y: ToricBase, E: WeilQDivisor) -> TailedPolyhedron | None:
    """``{u : <u, v_rho> >= -a_rho}``; ``None`` when empty."""
    ineqs = [(r, -E[r]) for r in Y.ray_ids]
    return TailedPolyhedron.from_inequalities(ineqs, (), dim=Y.dim)


# ---------------------------------------------------------------------------
# pp-divisor criteria


def _linear_witness(Y: ToricBase, E: WeilQDivisor, cone: RationalCone, others: bool):
    eqs = [(r, -E[r]) for r in cone.rays]
    ineqs = [(r, -E[r]) for r in Y.ray_ids if r not in cone.rays] if others else []
    return TailedPolyhedron.from_inequalities(ineqs, eqs, dim=Y.dim)


def divisor_properties(Y: ToricBase, E: WeilQDivisor) -> dict:
    """Toric criteria: Q-Cartier, Cartier, semi-ample (via convexity) and big."""
    if Y.dim == 0:
        return {"q_cartier": True, "cartier": True, "semiample": True, "big": True}
    q_cartier = cartier = semiample = True
    for cone in Y.fan.maximal_cones:
        if _linear_witness(Y, E, cone, others=False) is None:
            q_cartier = cartier = semiample = False
            break
        rhs = [-E[r] for r in cone.rays]
        if cartier and (
            any(c.denominator != 1 for c in rhs)
            or solve_integer(LatticeMap.from_rows([list(r) for r in cone.rays], cols=Y.dim),
                             [int(c) for c in rhs]) is None
        ):
            cartier = False
        if semiample and _linear_witness(Y, E, cone, others=True) is None:
            semiample = False
    sec = sections_polyhedron(Y, E)
    big = sec is not None and sec.dimension == Y.dim
    return {"q_cartier": q_cartier, "cartier": cartier, "semiample": semiample, "big": big}


@dataclass(frozen=True)
class PPSample:
    chamber: RationalCone
    m: tuple
    interior: bool
    q_cartier: bool
    cartier: bool
    semiample: bool
    big: bool

    @property
    def ok(self) -> bool:
        return self.q_cartier and self.semiample and (self.big or not self.interior)


@dataclass(frozen=True)
class PPReport:
    samples: tuple

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.samples)

    def first_failure(self) -> PPSample | None:
        return next((s for s in self.samples if not s.ok), None)

    @property
    def chambers(self) -> tuple:
        return tuple(dict.fromkeys(s.chamber for s in self.samples))


def weight_chambers(D: PolyhedralDivisor) -> QuasiFan:
    """Chambers of the weight cone on which every coefficient's support function is linear."""
    return common_refinement([normal_quasifan(p) for _, p in D.terms], D.weight_cone)


def pp_check(D: PolyhedralDivisor) -> PPReport:
    """Sample the pp-divisor axioms on every chamber of the weight cone.

    Each chamber contributes its Hilbert basis and the sum of its ray
    generators.  Bigness is demanded only at points interior to the weight
    cone.
    """
    Y = D.base
    if not Y.convex_support:
        raise NonConvexSupport("base fan support is not convex")
    omega_dual = D.weight_cone
    samples = []
    for chamber in weight_chambers(D).maximal_cones:
        points = list(hilbert_basis(chamber))
        rep = chamber.interior_point()
        if rep not in points:
            points.append(rep)
        for m in points:
            props = divisor_properties(Y, evaluate(D, m))
            samples.append(PPSample(chamber, tuple(m), omega_dual.contains_interior(m), **props))
    return PPReport(tuple(samples))


# ---------------------------------------------------------------------------
# real structures on the base


def fan_permutation(Y: ToricBase, tau: LatticeMap) -> dict:
    """Ray permutation induced by ``tau``; raises :class:`FanNotStable` otherwise."""
    if not isinstance(tau, LatticeMap):
        tau = LatticeMap.from_rows(tau, cols=Y.dim)
    if tau.rows != Y.dim or tau.cols != Y.dim:
        raise RankMismatch("involution rank differs from the base rank")
    rays = set(Y.ray_ids)
    perm = {}
    for r in Y.ray_ids:
        img = tau.apply(r)
        if img not in rays:
            raise FanNotStable(f"ray {list(r)} maps to {list(img)}, which is not a ray")
        perm[r] = img
    cones = {c.rays for c in Y.fan.maximal_cones}
    for c in Y.fan.maximal_cones:
        if tuple(sorted(perm[r] for r in c.rays)) not in cones:
            raise FanNotStable(f"cone {c!r} is not mapped onto a cone of the fan")
    return perm


def pullback_involution(Y: ToricBase, tau_Y: LatticeMap, E: WeilQDivisor) -> WeilQDivisor:
    perm = fan_permutation(Y, tau_Y)
    return WeilQDivisor(Y, {r: E[perm[r]] for r in Y.ray_ids})
