"""Exact rational convex geometry.

Cones and polyhedra keep both descriptions: generators (V) and linear
inequalities (H).  Conversion in either direction goes through a plain
double-description loop over Python integers; the ambient ranks used here
are small (at most 8), so no pivoting heuristics are needed.

Conventions
-----------
* Ray generators are primitive integer vectors.  Rays keep their direction.
* An inequality ``a`` of a cone means ``a . x >= 0``; an inequality
  ``(a, b)`` of a polyhedron means ``a . x >= b``.
* Cones may have a lineality space.  In that case rays are stored modulo the
  lineality space (projected onto its orthogonal complement), which keeps the
  V-representation canonical.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, reduce
from math import ceil, floor, gcd, lcm
from typing import Iterable, Sequence

from . import kernels
from .errors import EmptyInput, NonPointedImage, NotARay, RankMismatch, Unbounded
from .lattice import LatticeMap, hermite_normal_form, integer_kernel, inverse_unimodular, smith_normal_form

__all__ = [
    "RationalCone",
    "TailedPolyhedron",
    "QuasiFan",
    "dual_cone",
    "tail_decompose",
    "minkowski_sum",
    "support_eval",
    "normal_quasifan",
    "image_fan",
    "fiber_coefficient",
    "hilbert_basis",
    "common_refinement",
    "lattice_points",
    "as_fraction",
]


# ---------------------------------------------------------------------------
# small exact helpers


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def primitive_int(v) -> tuple:
    """Positive multiple of a rational vector that is a primitive integer vector."""
    v = [as_fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    w = [int(x * den) for x in v]
    g = reduce(gcd, w, 0)
    return tuple(x // g for x in w) if g else tuple(w)


def _sign_normalized(v) -> tuple:
    """Primitive representative of the line through ``v``: first nonzero entry positive."""
    p = primitive_int(v)
    for x in p:
        if x:
            return p if x > 0 else tuple(-y for y in p)
    return p


def rank_of(vectors) -> int:
    rows = [[as_fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def _project_out(v, basis_orth):
    """Project ``v`` onto the orthogonal complement of an orthogonal basis."""
    v = [as_fraction(x) for x in v]
    for b in basis_orth:
        bb = dot(b, b)
        c = dot(v, b) / bb
        v = [x - c * y for x, y in zip(v, b)]
    return v


def _gram_schmidt(vectors):
    out = []
    for v in vectors:
        w = _project_out(v, out)
        if any(w):
            out.append(w)
    return out


# ---------------------------------------------------------------------------
# double description


def _extreme_rays(ineqs: Sequence[Sequence[int]], dim: int):
    """Extreme rays and lineality basis of ``{x in Q^dim : a . x >= 0 for a in ineqs}``.

    Inequalities must be integer vectors.  Rays are primitive integer vectors
    (modulo the lineality space, not yet canonicalized).
    """
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[tuple] = []
    done: list[tuple] = []
    for a in ineqs:
        a = tuple(int(x) for x in a)
        if not any(a):
            done.append(a)
            continue
        k = next((i for i, l in enumerate(lin) if dot(a, l)), None)
        if k is not None:
            l = lin.pop(k)
            al = dot(a, l)
            if al < 0:
                l = tuple(-x for x in l)
                al = -al
            lin = [primitive_int([al * x - dot(a, m) * y for x, y in zip(m, l)]) for m in lin]
            lin = [m for m in lin if any(m)]
            rays = [primitive_int([al * x - dot(a, r) * y for x, y in zip(r, l)]) for r in rays]
            rays = [r for r in rays if any(r)]
            rays.append(primitive_int(l))
            done.append(a)
            rays = list(dict.fromkeys(rays))
            continue
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        zsets = {r: frozenset(i for i, c in enumerate(done) if dot(c, r) == 0) for r in rays}
        new = []
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if any(
                    common <= zsets[r] for r in rays if r != p and r != q
                ):
                    continue
                ap, aq = dot(a, p), -dot(a, q)
                w = primitive_int([ap * y + aq * x for x, y in zip(p, q)])
                if any(w):
                    new.append(w)
        rays = list(dict.fromkeys(pos + zero + new))
        done.append(a)
    return rays, lin


def _to_int_rows(rows) -> list:
    return [primitive_int(r) if any(as_fraction(x) for x in r) else tuple(0 for _ in r) for r in rows]


# ---------------------------------------------------------------------------
# cones


class RationalCone:
    """A polyhedral cone in ``Q^dim`` with canonical V- and H-representations."""

    def __init__(self, dim: int, rays, lineality=(), _facets=None, _equations=None):
        self.dim = dim
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)
        if _facets is not None:
            self.__dict__["_hrep"] = (tuple(_facets), tuple(_equations or ()))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_generators(cls, generators: Iterable, dim: int | None = None) -> "RationalCone":
        gens = [primitive_int(g) for g in generators]
        gens = [g for g in gens if any(g)]
        if dim is None:
            if not gens:
                raise EmptyInput("need an ambient rank for a cone without generators")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise RankMismatch("generators of different lengths")
        # facets of cone(gens) = extreme rays of its dual
        frays, flin = _extreme_rays(gens, dim)
        return cls.from_inequalities(frays, flin, dim)

    @classmethod
    def from_inequalities(cls, inequalities: Iterable, equations: Iterable = (), dim: int | None = None) -> "RationalCone":
        ineqs = _to_int_rows(list(inequalities))
        eqs = _to_int_rows(list(equations))
        if dim is None:
            rows = ineqs or eqs
            if not rows:
                raise EmptyInput("need an ambient rank")
            dim = len(rows[0])
        allrows = ineqs + eqs + [tuple(-x for x in e) for e in eqs]
        rays, lin = _extreme_rays(allrows, dim)
        return cls._canonical(dim, rays, lin)

    @classmethod
    def _canonical(cls, dim, rays, lin) -> "RationalCone":
        if lin:
            lin_lattice = integer_kernel(LatticeMap.from_rows(
                [list(v) for v in integer_kernel(LatticeMap.from_rows([list(l) for l in lin], cols=dim))]
                or [[0] * dim], cols=dim))
            H, _ = hermite_normal_form([list(v) for v in lin_lattice])
            lin = [H.row(i) for i in range(H.rows)]
            orth = _gram_schmidt(lin)
            rays = [primitive_int(_project_out(r, orth)) for r in rays]
            rays = [r for r in rays if any(r)]
        rays = sorted(set(rays))
        return cls(dim, rays, lin)

    @classmethod
    def orthant(cls, dim: int) -> "RationalCone":
        return cls.from_generators([[int(i == j) for j in range(dim)] for i in range(dim)], dim)

    @classmethod
    def zero(cls, dim: int) -> "RationalCone":
        return cls(dim, (), ())

    @classmethod
    def full(cls, dim: int) -> "RationalCone":
        return cls._canonical(dim, [], [tuple(int(i == j) for j in range(dim)) for i in range(dim)])

    # -- H-representation -------------------------------------------------

    @property
    def _hrep_pair(self):
        if "_hrep" not in self.__dict__:
            gens = list(self.rays) + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]
            frays, flin = _extreme_rays(gens, self.dim)
            eqs = []
            if flin:
                H, _ = hermite_normal_form([list(v) for v in flin])
                eqs = [H.row(i) for i in range(H.rows)]
                orth = _gram_schmidt(eqs)
                frays = [primitive_int(_project_out(f, orth)) for f in frays]
                frays = [f for f in frays if any(f)]
            self.__dict__["_hrep"] = (tuple(sorted(set(frays))), tuple(eqs))
        return self.__dict__["_hrep"]

    @property
    def facets(self) -> tuple:
        """Inward facet normals (``a . x >= 0``), modulo the equations."""
        return self._hrep_pair[0]

    @property
    def equations(self) -> tuple:
        """Basis of linear forms vanishing on the cone."""
        return self._hrep_pair[1]

    # -- predicates -------------------------------------------------------

    def contains(self, x) -> bool:
        x = [as_fraction(v) for v in x]
        if len(x) != self.dim:
            raise RankMismatch(f"point of length {len(x)} in a rank-{self.dim} cone")
        return all(dot(a, x) >= 0 for a in self.facets) and all(dot(e, x) == 0 for e in self.equations)

    def contains_interior(self, x) -> bool:
        """Relative-interior membership."""
        x = [as_fraction(v) for v in x]
        return all(dot(a, x) > 0 for a in self.facets) and all(dot(e, x) == 0 for e in self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @cached_property
    def dimension(self) -> int:
        return rank_of(list(self.rays) + list(self.lineality))

    @property
    def is_full(self) -> bool:
        return self.dimension == self.dim

    def interior_point(self) -> tuple:
        """A relative-interior point: the sum of the ray generators."""
        return tuple(sum(r[i] for r in self.rays) for i in range(self.dim))

    def intersect(self, other: "RationalCone") -> "RationalCone":
        if other.dim != self.dim:
            raise RankMismatch("cones in different ambient ranks")
        return RationalCone.from_inequalities(
            self.facets + other.facets, self.equations + other.equations, self.dim
        )

    def dual(self) -> "RationalCone":
        return dual_cone(self)

    def image(self, M: LatticeMap) -> "RationalCone":
        gens = [M.apply(r) for r in self.rays]
        gens += [M.apply(l) for l in self.lineality] + [M.apply(tuple(-x for x in l)) for l in self.lineality]
        return RationalCone.from_generators(gens, M.rows)

    def faces(self) -> list:
        """All faces of a pointed cone, as cones (including ``{0}`` and itself)."""
        if not self.is_pointed:
            raise NonPointedImage("face enumeration needs a pointed cone")
        full = frozenset(self.rays)
        seen = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for face in frontier:
                for a in self.facets:
                    sub = frozenset(r for r in face if dot(a, r) == 0)
                    if sub not in seen:
                        seen.add(sub)
                        nxt.append(sub)
            frontier = nxt
        return [RationalCone.from_generators(sorted(f), self.dim) if f else RationalCone.zero(self.dim)
                for f in sorted(seen, key=lambda s: (len(s), sorted(s)))]

    def key(self) -> tuple:
        return (self.dim, self.rays, self.lineality)

    def __eq__(self, other):
        return isinstance(other, RationalCone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        lin = f", lineality={list(self.lineality)}" if self.lineality else ""
        return f"RationalCone({[list(r) for r in self.rays]}{lin})"


def dual_cone(C: RationalCone) -> RationalCone:
    """``{u : u . v >= 0 for all v in C}``."""
    gens = list(C.facets) + list(C.equations) + [tuple(-x for x in e) for e in C.equations]
    if not gens:
        return RationalCone.zero(C.dim)
    return RationalCone.from_generators(gens, C.dim)


# ---------------------------------------------------------------------------
# polyhedra


class TailedPolyhedron:
    """``conv(vertices) + tail`` with a canonical minimal vertex list.

    ``vertices`` are rational points (tuples of Fractions).  When the tail
    has a lineality space the vertices are representatives of the minimal
    faces, projected onto its orthogonal complement.
    """

    def __init__(self, vertices, tail: RationalCone, _hrep=None):
        self.vertices = tuple(sorted(tuple(as_fraction(x) for x in v) for v in vertices))
        self.tail = tail
        if not self.vertices:
            raise EmptyInput("a tailed polyhedron needs at least one vertex")
        if _hrep is not None:
            self.__dict__["_hrep"] = _hrep

    @property
    def dim(self) -> int:
        return self.tail.dim

    @classmethod
    def from_inequalities(cls, inequalities, equations=(), dim=None):
        """Polyhedron ``{x : a.x >= b, c.x = d}``; ``None`` when empty.

        ``inequalities`` and ``equations`` are sequences of ``(a, b)`` pairs.
        """
        ineqs = [(list(a), b) for a, b in inequalities]
        eqs = [(list(a), b) for a, b in equations]
        if dim is None:
            dim = len((ineqs or eqs)[0][0])
        homog = [list(a) + [-as_fraction(b)] for a, b in ineqs]
        homog.append([0] * dim + [1])
        heqs = [list(a) + [-as_fraction(b)] for a, b in eqs]
        cone = RationalCone.from_inequalities(homog, heqs, dim + 1)
        return _dehomogenize(cone, dim)

    @property
    def _hrep_pair(self):
        if "_hrep" not in self.__dict__:
            gens = [primitive_int(list(v) + [1]) for v in self.vertices]
            gens += [tuple(r) + (0,) for r in self.tail.rays]
            gens += [tuple(l) + (0,) for l in self.tail.lineality]
            gens += [tuple(-x for x in l) + (0,) for l in self.tail.lineality]
            cone = RationalCone.from_generators(gens, self.dim + 1)
            ineqs = [(f[:-1], Fraction(-f[-1])) for f in cone.facets if any(f[:-1])]
            eqs = [(e[:-1], Fraction(-e[-1])) for e in cone.equations]
            self.__dict__["_hrep"] = (tuple(ineqs), tuple(eqs))
        return self.__dict__["_hrep"]

    @property
    def inequalities(self) -> tuple:
        """Facet inequalities ``(a, b)`` meaning ``a . x >= b``."""
        return self._hrep_pair[0]

    @property
    def equations(self) -> tuple:
        return self._hrep_pair[1]

    def contains(self, x) -> bool:
        x = [as_fraction(v) for v in x]
        return all(dot(a, x) >= b for a, b in self.inequalities) and all(
            dot(a, x) == b for a, b in self.equations
        )

    @property
    def is_bounded(self) -> bool:
        return not self.tail.rays and not self.tail.lineality

    @cached_property
    def dimension(self) -> int:
        v0 = self.vertices[0]
        diffs = [[a - b for a, b in zip(v, v0)] for v in self.vertices[1:]]
        return rank_of(diffs + [list(r) for r in self.tail.rays] + [list(l) for l in self.tail.lineality])

    def translate(self, shift) -> "TailedPolyhedron":
        shift = [as_fraction(s) for s in shift]
        return TailedPolyhedron([[a + b for a, b in zip(v, shift)] for v in self.vertices], self.tail)

    def image(self, M: LatticeMap) -> "TailedPolyhedron":
        return tail_decompose(
            [M.apply(v) for v in self.vertices],
            [M.apply(r) for r in self.tail.rays]
            + [M.apply(l) for l in self.tail.lineality]
            + [M.apply(tuple(-x for x in l)) for l in self.tail.lineality],
            dim=M.rows,
        )

    def lattice_points(self, lo, hi) -> list:
        return lattice_points(self.inequalities, self.equations, lo, hi)

    def key(self):
        return (self.vertices, self.tail.key())

    def __eq__(self, other):
        return isinstance(other, TailedPolyhedron) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        verts = [[str(x) for x in v] for v in self.vertices]
        return f"TailedPolyhedron(vertices={verts}, tail={self.tail!r})"


def _dehomogenize(cone: RationalCone, dim: int):
    if cone.lineality and any(l[-1] for l in cone.lineality):
        raise ValueError("homogenized cone has lineality outside t = 0")
    verts = [tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in cone.rays if r[-1] > 0]
    if not verts:
        return None
    tail_rays = [r[:-1] for r in cone.rays if r[-1] == 0]
    tail = RationalCone._canonical(dim, tail_rays, [l[:-1] for l in cone.lineality])
    if tail.lineality:
        orth = _gram_schmidt(tail.lineality)
        verts = [tuple(_project_out(v, orth)) for v in verts]
    hrep = (
        tuple((f[:-1], Fraction(-f[-1])) for f in cone.facets if any(f[:-1])),
        tuple((e[:-1], Fraction(-e[-1])) for e in cone.equations),
    )
    return TailedPolyhedron(sorted(set(verts)), tail, _hrep=hrep)


def tail_decompose(points, rays=(), dim: int | None = None) -> TailedPolyhedron:
    """Minimal ``conv(vertices) + tail`` form of ``conv(points) + cone(rays)``."""
    points = [tuple(as_fraction(x) for x in p) for p in points]
    if not points:
        raise EmptyInput("need at least one point")
    if dim is None:
        dim = len(points[0])
    gens = [primitive_int(list(p) + [1]) for p in points]
    gens += [primitive_int(list(r) + [0]) for r in rays if any(as_fraction(x) for x in r)]
    cone = RationalCone.from_generators(gens, dim + 1)
    return _dehomogenize(cone, dim)


def minkowski_sum(P: TailedPolyhedron, Q: TailedPolyhedron) -> TailedPolyhedron:
    if P.dim != Q.dim:
        raise RankMismatch("Minkowski sum of polyhedra in different ranks")
    pts = [[a + b for a, b in zip(p, q)] for p in P.vertices for q in Q.vertices]
    rays = list(P.tail.rays) + list(Q.tail.rays)
    for l in P.tail.lineality + Q.tail.lineality:
        rays += [l, tuple(-x for x in l)]
    return tail_decompose(pts, rays, P.dim)


def support_eval(D: TailedPolyhedron, m) -> Fraction:
    """``min {<m, v> : v in D}``; raises :class:`Unbounded` off the dual tail."""
    m = [as_fraction(x) for x in m]
    if len(m) != D.dim:
        raise RankMismatch("covector rank differs from polyhedron rank")
    tail = D.tail
    if any(dot(m, r) < 0 for r in tail.rays) or any(dot(m, l) for l in tail.lineality):
        raise Unbounded(f"{[str(x) for x in m]} is not in the dual of the tail cone")
    return min(dot(m, v) for v in D.vertices)


def lattice_points(inequalities, equations, lo, hi) -> list:
    """Integer points of ``{a.x >= b, c.x = d}`` inside the box ``[lo, hi]``."""
    A, bs = [], []
    for a, b in inequalities:
        a = [as_fraction(x) for x in a]
        den = reduce(lcm, (x.denominator for x in a), 1)
        A.append([int(x * den) for x in a])
        bs.append(ceil(as_fraction(b) * den))
    for a, b in equations:
        a = [as_fraction(x) for x in a]
        b = as_fraction(b)
        den = reduce(lcm, (x.denominator for x in a), b.denominator)
        row = [int(x * den) for x in a]
        rhs = b * den
        if rhs.denominator != 1:
            return []
        A.append(row)
        bs.append(int(rhs))
        A.append([-x for x in row])
        bs.append(-int(rhs))
    lo = [ceil(as_fraction(x)) for x in lo]
    hi = [floor(as_fraction(x)) for x in hi]
    return kernels.box_points(A, bs, lo, hi)


# ---------------------------------------------------------------------------
# fans


class QuasiFan:
    """A quasifan given by its maximal cones; faces are implicit."""

    def __init__(self, dim: int, maximal_cones: Iterable[RationalCone]):
        self.dim = dim
        cones = {c.key(): c for c in maximal_cones}
        self.maximal_cones = tuple(cones[k] for k in sorted(cones))

    @property
    def rays(self) -> tuple:
        return tuple(sorted({r for c in self.maximal_cones for r in c.rays}))

    @property
    def is_pointed(self) -> bool:
        return all(c.is_pointed for c in self.maximal_cones)

    def cones_containing(self, x) -> list:
        return [c for c in self.maximal_cones if c.contains(x)]

    def cone_of(self, x) -> RationalCone | None:
        """The maximal cone containing ``x`` (first in canonical order)."""
        cs = self.cones_containing(x)
        return cs[0] if cs else None

    def support_contains(self, x) -> bool:
        return any(c.contains(x) for c in self.maximal_cones)

    def key(self):
        return (self.dim, tuple(c.key() for c in self.maximal_cones))

    def __eq__(self, other):
        return isinstance(other, QuasiFan) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QuasiFan({list(self.maximal_cones)})"


def normal_quasifan(D: TailedPolyhedron) -> QuasiFan:
    """Normal quasifan of ``D``: one maximal cone per vertex, covering the dual tail."""
    target = dual_cone(D.tail)
    cones = []
    rays = list(D.tail.rays)
    lin = list(D.tail.lineality)
    for v in D.vertices:
        ineqs = [[w_i - v_i for w_i, v_i in zip(w, v)] for w in D.vertices if w != v]
        ineqs += [list(r) for r in rays]
        c = RationalCone.from_inequalities(ineqs or [[0] * D.dim], lin, D.dim)
        if c.dimension == target.dimension:
            cones.append(c)
    return QuasiFan(D.dim, cones)


def common_refinement(fans: Sequence[QuasiFan], support: RationalCone) -> QuasiFan:
    """Full-dimensional cones of the common refinement of fans restricted to ``support``."""
    chambers = [support]
    target = support.dimension
    for fan in fans:
        nxt = {}
        for ch in chambers:
            for c in fan.maximal_cones:
                inter = ch.intersect(c)
                if inter.dimension == target:
                    nxt[inter.key()] = inter
        chambers = list(nxt.values())
    return QuasiFan(support.dim, chambers)


def _split_cells(cells, normal, dim):
    out = []
    for c in cells:
        for sgn in (1, -1):
            a = [sgn * x for x in normal]
            piece = RationalCone.from_inequalities(list(c.facets) + [a], c.equations, dim)
            if piece.dimension == dim:
                out.append(piece)
    return out


def image_fan(P: LatticeMap, sigma: RationalCone) -> QuasiFan:
    """Coarsest common refinement of the images ``P(face)`` of a pointed cone.

    Maximal cones are the chambers ``cap {P(face) : x in P(face)}`` for
    generic ``x`` in ``P(sigma)``.
    """
    if not sigma.is_pointed:
        raise NonPointedImage("source cone must be pointed")
    if P.cols != sigma.dim:
        raise RankMismatch("projection does not match the cone's ambient rank")
    k = P.rows
    if k == 0:
        return QuasiFan(0, [RationalCone.zero(0)])
    images = {}
    for face in sigma.faces():
        img = face.image(P)
        if img.dimension == k:
            images[img.key()] = img
    images = list(images.values())
    if not images:
        raise NonPointedImage("projection of the cone is not full-dimensional")
    support = sigma.image(P)
    hyperplanes = sorted({_sign_normalized(a) for img in images for a in img.facets})
    cells = [RationalCone.from_inequalities(support.facets, support.equations, k)]
    for h in hyperplanes:
        cells = _split_cells(cells, h, k)
    chambers = {}
    for cell in cells:
        x = tuple(sum(r[i] for r in cell.rays) for i in range(k))
        containing = [img for img in images if img.contains(x)]
        ch = containing[0]
        for img in containing[1:]:
            ch = ch.intersect(img)
        if not ch.is_pointed:
            raise NonPointedImage(f"chamber {ch!r} of the image fan contains a line")
        chambers[ch.key()] = ch
    return QuasiFan(k, chambers.values())


def fiber_coefficient(P: LatticeMap, s: LatticeMap, sigma: RationalCone, v, fan: QuasiFan | None = None) -> TailedPolyhedron:
    """``s(sigma cap P^{-1}(v))`` for a ray generator ``v`` of the image fan."""
    v = tuple(int(x) for x in v)
    if fan is None:
        fan = image_fan(P, sigma)
    if v not in fan.rays:
        raise NotARay(f"{list(v)} is not a ray generator of the image fan")
    Q = TailedPolyhedron.from_inequalities(
        [(f, 0) for f in sigma.facets],
        [(e, 0) for e in sigma.equations] + [(P.row(i), v[i]) for i in range(P.rows)],
        dim=sigma.dim,
    )
    if Q is None:
        raise NotARay(f"fiber over {list(v)} is empty")
    return Q.image(s)


# ---------------------------------------------------------------------------
# Hilbert bases


def _pointed_hilbert_basis(cone: RationalCone) -> list:
    if not cone.rays:
        return []
    d = cone.dim
    lo = [sum(min(0, r[i]) for r in cone.rays) for i in range(d)]
    hi = [sum(max(0, r[i]) for r in cone.rays) for i in range(d)]
    A = [list(f) for f in cone.facets]
    for e in cone.equations:
        A.append(list(e))
        A.append([-x for x in e])
    b = [0] * len(A)
    cands = [x for x in kernels.box_points(A, b, lo, hi) if any(x)]
    # Facet values determine a point of a pointed cone; equalities add nothing.
    F = [list(f) for f in cone.facets]
    vals = [[dot(f, x) for f in F] for x in cands]
    mask = kernels.reducible_mask(vals)
    return sorted(x for x, red in zip(cands, mask) if not red)


def hilbert_basis(cone: RationalCone) -> list:
    """Minimal generating set of the monoid ``cone cap Z^dim``.

    For cones with a lineality space this is a basis of the lineality
    lattice with both signs, plus lifts of the Hilbert basis of the pointed
    quotient.
    """
    if cone.is_pointed:
        return _pointed_hilbert_basis(cone)
    d = cone.dim
    L = integer_kernel(LatticeMap.from_rows(
        [list(f) for f in cone.facets] + [list(e) for e in cone.equations] or [[0] * d], cols=d))
    Lmat = LatticeMap.from_rows([[v[i] for v in L] for i in range(d)], cols=len(L))
    U, _, _ = smith_normal_form(Lmat)
    k = len(L)

    Uinv = inverse_unimodular(U)
    proj = LatticeMap.from_rows([U.row(i) for i in range(k, d)], cols=d)
    quotient = RationalCone.from_generators([proj.apply(r) for r in cone.rays], d - k) if cone.rays \
        else RationalCone.zero(d - k)
    gens = []
    for h in _pointed_hilbert_basis(quotient):
        gens.append(Uinv.apply((0,) * k + tuple(h)))
    for l in L:
        gens.append(tuple(l))
        gens.append(tuple(-x for x in l))
    return sorted(set(gens))
