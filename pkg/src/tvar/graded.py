"""Graded pieces of the algebra of a polyhedral divisor.

The piece of weight ``m`` has a basis of characters indexed by the lattice
points of the sections polyhedron of ``D(m)``.  For a downgraded embedding
these correspond to the monomials ``x^a`` of weight ``m`` via
``a -> t*(a - s* m)``, which is what :func:`bijection_check` verifies.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from . import kernels
from .convex import TailedPolyhedron
from .divisors import evaluate, sections_polyhedron
from .downgrade import AHDatum
from .errors import OutsideWeightCone, PointNotInPiece, RankMismatch

__all__ = [
    "GradedPiece",
    "BijectionResult",
    "graded_piece",
    "weight_fiber_oracle",
    "weight_fiber_table",
    "bijection_check",
    "piece_involution",
    "real_orbits",
]


@dataclass(frozen=True)
class GradedPiece:
    weight: tuple
    points: tuple
    polyhedron: TailedPolyhedron | None

    @property
    def dimension(self) -> int:
        return len(self.points)


def _box(bounds, k):
    if isinstance(bounds, int):
        return [-bounds] * k, [bounds] * k
    lo, hi = bounds
    return list(lo), list(hi)


def _sections(a: AHDatum, m):
    m = tuple(int(x) for x in m)
    if len(m) != a.rank:
        raise RankMismatch("weight of the wrong rank")
    if not a.weight_cone.contains(m):
        raise OutsideWeightCone(f"{list(m)} is not in the weight cone")
    return m, sections_polyhedron(a.base, evaluate(a.divisor, m))


def graded_piece(a: AHDatum, m, box=6) -> GradedPiece:
    """Lattice points of the sections polyhedron of ``D(m)`` inside ``box``.

    ``box`` is either a half-width or a ``(lo, hi)`` pair of corners.
    """
    m, poly = _sections(a, m)
    if poly is None:
        return GradedPiece(m, (), None)
    lo, hi = _box(box, a.base.dim)
    return GradedPiece(m, tuple(poly.lattice_points(lo, hi)), poly)


def _weights_matrix(weights):
    weights = [tuple(int(x) for x in w) for w in weights]
    r = len(weights[0]) if weights else 0
    return [[w[i] for w in weights] for i in range(r)]


def weight_fiber_oracle(weights, m, degree_bound: int) -> list:
    """Exponents ``a >= 0`` with ``sum(a) <= degree_bound`` and ``sum a_i w_i = m``."""
    m = tuple(int(x) for x in m)
    return [a for w, a in kernels.weight_fibers(_weights_matrix(weights), degree_bound) if w == m]


def weight_fiber_table(weights, degree_bound: int) -> dict:
    """All oracle fibers up to ``degree_bound``, keyed by weight."""
    table = defaultdict(list)
    for w, a in kernels.weight_fibers(_weights_matrix(weights), degree_bound):
        table[w].append(a)
    return dict(table)


@dataclass(frozen=True)
class BijectionResult:
    ok: bool
    weight: tuple
    monomials: int
    points: int
    problem: str = ""

    def __bool__(self):
        return self.ok


def bijection_check(a: AHDatum, m, degree_bound: int, oracle: list | None = None) -> BijectionResult:
    """Match weight-``m`` monomials of degree at most ``degree_bound`` with piece points.

    The forward map is ``a -> t*(a - s* m)``; its inverse on the piece is
    ``p -> s* m + P* p``, which must land in nonnegative exponents.
    """
    m = tuple(int(x) for x in m)
    F = a.embedding.F
    weights = [F.row(i) for i in range(F.rows)]
    if oracle is None:
        oracle = weight_fiber_oracle(weights, m, degree_bound)
    tT, sT, PT = a.section_t.T, a.cosection_s.T, a.projection_P.T
    sm = sT.apply(m)
    k = a.base.dim

    def forward(exps):
        return tT.apply(tuple(x - y for x, y in zip(exps, sm)))

    def backward(p):
        return tuple(x + y for x, y in zip(sm, PT.apply(p)))

    images = {}
    for exps in oracle:
        p = forward(exps)
        if p in images:
            return BijectionResult(False, m, len(oracle), 0, f"exponents {images[p]} and {exps} collide at {p}")
        if backward(p) != tuple(exps):
            return BijectionResult(False, m, len(oracle), 0, f"exponent {exps} does not round-trip")
        images[p] = exps
    if not a.weight_cone.contains(m):
        ok = not oracle
        return BijectionResult(ok, m, len(oracle), 0, "" if ok else "monomials outside the weight cone")
    poly = sections_polyhedron(a.base, evaluate(a.divisor, m))
    if poly is None:
        ok = not oracle
        return BijectionResult(ok, m, len(oracle), 0, "" if ok else "empty piece but monomials exist")
    # bound every coordinate of t*(a - s* m) over 0 <= a_i <= degree_bound
    lo, hi = [], []
    for i in range(k):
        row = tT.row(i)
        base = -sum(c * x for c, x in zip(row, sm))
        lo.append(base + sum(min(0, c) for c in row) * degree_bound)
        hi.append(base + sum(max(0, c) for c in row) * degree_bound)
    points = []
    for p in poly.lattice_points(lo, hi):
        exps = backward(p)
        if any(x < 0 for x in exps):
            return BijectionResult(False, m, len(oracle), 0, f"piece point {p} pulls back to {exps}")
        if sum(exps) <= degree_bound:
            points.append(p)
    if set(points) != set(images):
        missing = sorted(set(images) - set(points))
        extra = sorted(set(points) - set(images))
        return BijectionResult(
            False, m, len(oracle), len(points), f"unmatched monomial images {missing}, unmatched points {extra}"
        )
    return BijectionResult(True, m, len(oracle), len(points))


def piece_involution(a: AHDatum, m, p) -> tuple:
    """Image of the basis section ``chi^p`` of weight ``m`` under the real structure.

    Returns ``(tau~ m, tau~_Y p + E(tau~ m), sign(tau~ m))``.
    """
    m, poly = _sections(a, m)
    p = tuple(int(x) for x in p)
    if poly is None or not poly.contains(p):
        raise PointNotInPiece(f"{list(p)} is not a section of weight {list(m)}")
    tm = a.tau_tilde.apply(m)
    shift = a.h_exponent.apply(tm)
    image = tuple(x + y for x, y in zip(a.tau_tilde_Y.apply(p), shift))
    return tm, image, a.sign(tm)


def real_orbits(a: AHDatum, weights, box=6) -> list:
    """Orbits of the real structure on basis sections of the given weights.

    Each entry is ``((m, p), (m', p'), sign)``; fixed sections have
    ``(m, p) == (m', p')``.  Pairs are listed once.
    """
    seen = set()
    out = []
    for m in weights:
        for p in graded_piece(a, m, box).points:
            key = (tuple(m), p)
            if key in seen:
                continue
            tm, q, sign = piece_involution(a, m, p)
            seen.add(key)
            seen.add((tm, q))
            out.append((key, (tm, q), sign))
    return out
