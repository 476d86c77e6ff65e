"""JSON encoding of engine values.

Rationals are written as ``"p/q"`` strings (``"p"`` when integral), matrices
as row-major lists.  Every encoded object carries a ``"type"`` tag so that
:func:`from_data` can rebuild it; ``from_data(to_data(x)) == x`` for every
supported value.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .convex import QuasiFan, RationalCone, TailedPolyhedron, as_fraction
from .divisors import PolyhedralDivisor, ToricBase, WeilQDivisor
from .downgrade import AHDatum, TorusEmbedding
from .lattice import InvolutionType, LatticeInvolution, LatticeMap

__all__ = ["to_data", "from_data", "dumps", "loads", "rational", "parse_rational"]


def rational(x) -> str:
    return str(as_fraction(x))


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise ValueError(f"expected an integer or a 'p/q' string, got {x!r}")


def _matrix(M: LatticeMap) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": M.tolist()}


def _unmatrix(d: dict, cls=LatticeMap):
    M = LatticeMap.from_rows(d["entries"], cols=d["cols"]) if d["rows"] else LatticeMap.zero(0, d["cols"])
    return cls.of(M) if cls is LatticeInvolution else M


def _cone(C: RationalCone) -> dict:
    return {"type": "cone", "dim": C.dim, "rays": [list(r) for r in C.rays],
            "lineality": [list(l) for l in C.lineality]}


def _uncone(d: dict) -> RationalCone:
    return RationalCone(d["dim"], [tuple(r) for r in d["rays"]], [tuple(l) for l in d["lineality"]])


def _poly(P: TailedPolyhedron) -> dict:
    return {"type": "polyhedron", "vertices": [[rational(x) for x in v] for v in P.vertices],
            "tail": _cone(P.tail)}


def _unpoly(d: dict) -> TailedPolyhedron:
    return TailedPolyhedron([[parse_rational(x) for x in v] for v in d["vertices"]], _uncone(d["tail"]))


def _fan(F: QuasiFan) -> dict:
    return {"type": "fan", "dim": F.dim, "cones": [_cone(c) for c in F.maximal_cones]}


def _unfan(d: dict) -> QuasiFan:
    return QuasiFan(d["dim"], [_uncone(c) for c in d["cones"]])


def _base(Y: ToricBase) -> dict:
    return {"type": "base", "fan": _fan(Y.fan), "semi_projective": Y.semi_projective}


def _unbase(d: dict) -> ToricBase:
    return ToricBase(_unfan(d["fan"]), d.get("semi_projective", True))


def _weil(E: WeilQDivisor) -> dict:
    return {"type": "weil", "base": _base(E.base),
            "terms": [{"ray": list(r), "coeff": rational(c)} for r, c in sorted(E.coefficients.items())]}


def _unweil(d: dict) -> WeilQDivisor:
    base = _unbase(d["base"])
    return WeilQDivisor(base, {tuple(t["ray"]): parse_rational(t["coeff"]) for t in d["terms"]})


def _pdiv(D: PolyhedralDivisor) -> dict:
    return {"type": "pdivisor", "base": _base(D.base), "tail": _cone(D.tail),
            "terms": [{"ray": list(r), **_poly(p)} for r, p in D.terms]}


def _unpdiv(d: dict) -> PolyhedralDivisor:
    base = _unbase(d["base"])
    return PolyhedralDivisor(base, _uncone(d["tail"]), tuple((tuple(t["ray"]), _unpoly(t)) for t in d["terms"]))


def _embedding(e: TorusEmbedding) -> dict:
    return {"type": "embedding", "F": _matrix(e.F), "tau_hat": _matrix(e.tau_hat),
            "tau_hat_prime": _matrix(e.tau_hat_prime), "sigma_prime": _cone(e.sigma_prime),
            "generator_weights": [list(w) for w in e.generator_weights]}


def _unembedding(d: dict) -> TorusEmbedding:
    return TorusEmbedding(
        _unmatrix(d["F"]), _unmatrix(d["tau_hat"], LatticeInvolution),
        _unmatrix(d["tau_hat_prime"], LatticeInvolution), _uncone(d["sigma_prime"]),
        tuple(tuple(w) for w in d["generator_weights"]),
    )


def _datum(a: AHDatum) -> dict:
    return {
        "type": "datum",
        "embedding": _embedding(a.embedding),
        "base": _base(a.base),
        "tau_hat_Y": _matrix(a.tau_hat_Y),
        "divisor": _pdiv(a.divisor),
        "weight_cone": _cone(a.weight_cone),
        "cosection_s": _matrix(a.cosection_s),
        "projection_P": _matrix(a.projection_P),
        "section_t": _matrix(a.section_t),
        "h_exponent": _matrix(a.h_exponent),
        "h_sign": list(a.h_sign),
        "equivariant": a.equivariant,
    }


def _undatum(d: dict) -> AHDatum:
    return AHDatum(
        embedding=_unembedding(d["embedding"]),
        base=_unbase(d["base"]),
        tau_hat_Y=_unmatrix(d["tau_hat_Y"], LatticeInvolution),
        divisor=_unpdiv(d["divisor"]),
        weight_cone=_uncone(d["weight_cone"]),
        cosection_s=_unmatrix(d["cosection_s"]),
        projection_P=_unmatrix(d["projection_P"]),
        section_t=_unmatrix(d["section_t"]),
        h_exponent=_unmatrix(d["h_exponent"]),
        h_sign=tuple(d["h_sign"]),
        equivariant=d["equivariant"],
    )


_ENCODERS = [
    (AHDatum, _datum),
    (TorusEmbedding, _embedding),
    (PolyhedralDivisor, _pdiv),
    (WeilQDivisor, _weil),
    (ToricBase, _base),
    (QuasiFan, _fan),
    (TailedPolyhedron, _poly),
    (RationalCone, _cone),
]

_DECODERS = {
    "datum": _undatum,
    "embedding": _unembedding,
    "pdivisor": _unpdiv,
    "weil": _unweil,
    "base": _unbase,
    "fan": _unfan,
    "polyhedron": _unpoly,
    "cone": _uncone,
}


def to_data(obj):
    for cls, enc in _ENCODERS:
        if isinstance(obj, cls):
            return enc(obj)
    if isinstance(obj, LatticeInvolution):
        return {"type": "involution", **_matrix(obj)}
    if isinstance(obj, LatticeMap):
        return {"type": "matrix", **_matrix(obj)}
    if isinstance(obj, InvolutionType):
        return {"type": "involution_type", **obj.as_dict()}
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_data(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_data(x) for x in obj]
    return obj


def from_data(d):
    kind = d.get("type")
    if kind == "matrix":
        return _unmatrix(d)
    if kind == "involution":
        return _unmatrix(d, LatticeInvolution)
    if kind == "involution_type":
        return InvolutionType(d["n0"], d["n1"], d["n2"])
    if kind not in _DECODERS:
        raise ValueError(f"unknown encoded type {kind!r}")
    return _DECODERS[kind](d)


def dumps(obj, **kw) -> str:
    return json.dumps(to_data(obj), sort_keys=True, **kw)


def loads(text: str):
    return from_data(json.loads(text))
