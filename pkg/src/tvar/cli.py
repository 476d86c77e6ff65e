"""Command-line workbench.

``tvar <command> <problem.json> [--json] [--grid N] [--degree-bound N]``

Problem files are JSON objects.  The command decides how the file is read,
so one embedding file serves ``downgrade``, ``check-real`` and
``oracle-check`` alike; a ``"kind"`` entry only matters when no command is
given to :func:`load_problem`.  Exit status is
0 when every check passes, 1 when a check fails (the report names it) and 2
for unreadable input or engine errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .convex import RationalCone, normal_quasifan, support_eval, tail_decompose
from .descent import CharacterCocycle, parity_from_generator_signs, split_cocycle
from .divisors import (
    PolyhedralDivisor,
    ToricBase,
    WeilQDivisor,
    evaluate,
    pp_check,
    sections_polyhedron,
)
from .downgrade import TorusEmbedding, check_real_compatibility, downgrade
from .errors import ParseError, TvarError
from .graded import bijection_check, graded_piece, weight_fiber_table
from .lattice import LatticeMap, classify_involution
from .serialize import parse_rational, rational, to_data

__all__ = ["Problem", "Report", "load_problem", "run", "main", "KINDS"]

KINDS = ("classify", "downgrade", "evaluate", "check-pp", "check-real", "split", "sections", "oracle-check")
_ALIASES = {"eval": "evaluate"}
DEFAULT_GRID = 6
DEFAULT_DEGREE_BOUND = 6


@dataclass(frozen=True)
class Problem:
    kind: str
    payload: dict
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Report:
    kind: str
    ok: bool
    data: dict
    failed_check: str | None = None
    lines: tuple = ()

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


# ---------------------------------------------------------------------------
# schema checks


def _fail(path, msg):
    raise ParseError(msg, path)


def _int(x, path):
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(path, f"expected an integer, got {x!r}")
    return x


def _vector(x, path, length=None):
    if not isinstance(x, list):
        _fail(path, "expected a list of integers")
    v = [_int(y, f"{path}[{i}]") for i, y in enumerate(x)]
    if length is not None and len(v) != length:
        _fail(path, f"expected length {length}, got {len(v)}")
    return v


def _rational(x, path):
    try:
        return parse_rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        _fail(path, str(exc))


def _rvector(x, path, length=None):
    if not isinstance(x, list):
        _fail(path, "expected a list of rationals")
    v = [_rational(y, f"{path}[{i}]") for i, y in enumerate(x)]
    if length is not None and len(v) != length:
        _fail(path, f"expected length {length}, got {len(v)}")
    return v


def _matrix(x, path, rows=None, cols=None, square=False):
    if not isinstance(x, list):
        _fail(path, "expected a list of rows")
    m = [_vector(r, f"{path}[{i}]") for i, r in enumerate(x)]
    width = len(m[0]) if m else (cols or 0)
    for i, r in enumerate(m):
        if len(r) != width:
            _fail(f"{path}[{i}]", f"row has length {len(r)}, expected {width}")
    if rows is not None and len(m) != rows:
        _fail(path, f"expected {rows} rows, got {len(m)}")
    if cols is not None and m and width != cols:
        _fail(path, f"expected {cols} columns, got {width}")
    if square and len(m) != width:
        _fail(path, f"matrix must be square, got {len(m)}x{width}")
    return LatticeMap.from_rows(m, cols=width if m else (cols or 0)) if m else LatticeMap.zero(0, cols or 0)


def _vectors(x, path, length):
    if not isinstance(x, list):
        _fail(path, "expected a list of vectors")
    return [_vector(v, f"{path}[{i}]", length) for i, v in enumerate(x)]


def _require(obj, key, path):
    if key not in obj:
        _fail(f"{path}.{key}", "missing required field")
    return obj[key]


def _embedding(obj, path="$"):
    F = _matrix(_require(obj, "F", path), f"{path}.F")
    n, r = F.rows, F.cols
    tau = _matrix(_require(obj, "tau_hat", path), f"{path}.tau_hat", rows=r, cols=r, square=True)
    taup = _matrix(_require(obj, "tau_hat_prime", path), f"{path}.tau_hat_prime", rows=n, cols=n, square=True)
    out = {"F": F, "tau_hat": tau, "tau_hat_prime": taup}
    out["sigma_prime"] = (
        _vectors(obj["sigma_prime"], f"{path}.sigma_prime", n) if "sigma_prime" in obj else None
    )
    if "projection" in obj:
        out["projection"] = _matrix(obj["projection"], f"{path}.projection", rows=n - r, cols=n)
    if "cosection" in obj:
        out["cosection"] = _matrix(obj["cosection"], f"{path}.cosection", rows=r, cols=n)
    gens = obj.get("generators", [])
    if not isinstance(gens, list):
        _fail(f"{path}.generators", "expected a list")
    out["generator_weights"] = [
        _vector(_require(g, "weight", f"{path}.generators[{i}]"), f"{path}.generators[{i}].weight", r)
        for i, g in enumerate(gens)
    ]
    if "h_exponent" in obj:
        out["h_exponent"] = _matrix(obj["h_exponent"], f"{path}.h_exponent", rows=n - r, cols=r)
    if "h_sign" in obj:
        out["h_sign"] = _vector(obj["h_sign"], f"{path}.h_sign", r)
    return out


def _base(obj, path):
    dim = _int(_require(obj, "dim", path), f"{path}.dim")
    cones = _require(obj, "cones", path)
    if not isinstance(cones, list) or not cones:
        _fail(f"{path}.cones", "expected a nonempty list of cones")
    return {"dim": dim, "cones": [_vectors(c, f"{path}.cones[{i}]", dim) for i, c in enumerate(cones)]}


def _polyhedron(obj, path, dim=None):
    verts = _require(obj, "vertices", path)
    if not isinstance(verts, list) or not verts:
        _fail(f"{path}.vertices", "expected a nonempty list of points")
    if dim is None:
        dim = len(verts[0]) if isinstance(verts[0], list) else 0
    vs = [_rvector(v, f"{path}.vertices[{i}]", dim) for i, v in enumerate(verts)]
    tail = _vectors(obj.get("tail", []), f"{path}.tail", dim)
    return {"vertices": vs, "tail": tail, "dim": dim}


def _divisor(obj, path):
    base = _base(_require(obj, "base", path), f"{path}.base")
    tail = _require(obj, "tail", path)
    if not isinstance(tail, list) or not tail:
        _fail(f"{path}.tail", "expected the generators of the tail cone")
    rank = len(tail[0]) if isinstance(tail[0], list) else 0
    tail = _vectors(tail, f"{path}.tail", rank)
    terms = obj.get("terms", [])
    if not isinstance(terms, list):
        _fail(f"{path}.terms", "expected a list")
    out = []
    for i, t in enumerate(terms):
        p = f"{path}.terms[{i}]"
        ray = _vector(_require(t, "ray", p), f"{p}.ray", base["dim"])
        verts = _require(t, "vertices", p)
        if not isinstance(verts, list) or not verts:
            _fail(f"{p}.vertices", "expected a nonempty list of points")
        out.append((ray, [_rvector(v, f"{p}.vertices[{j}]", rank) for j, v in enumerate(verts)]))
    return {"base": base, "tail": tail, "rank": rank, "terms": out}


def _weights(obj, path, rank):
    if "weights" not in obj:
        return None
    return _vectors(obj["weights"], path + ".weights", rank)


def _validate(kind, obj):
    p = {}
    if kind == "classify":
        p["matrix"] = _matrix(_require(obj, "matrix", "$"), "$.matrix", square=True)
    elif kind in ("downgrade", "check-real", "oracle-check"):
        p["embedding"] = _embedding(obj)
        if kind == "check-real":
            p["weights"] = None
    elif kind in ("evaluate", "check-pp"):
        if "divisor" in obj:
            p["divisor"] = _divisor(obj["divisor"], "$.divisor")
            rank = p["divisor"]["rank"]
        elif "polyhedron" in obj and kind == "evaluate":
            p["polyhedron"] = _polyhedron(obj["polyhedron"], "$.polyhedron")
            rank = p["polyhedron"]["dim"]
        elif "F" in obj:
            p["embedding"] = _embedding(obj)
            rank = p["embedding"]["F"].cols
        else:
            _fail("$", "expected one of 'divisor', 'polyhedron' or an embedding ('F')")
        p["weights"] = _weights(obj, "$", rank)
    elif kind == "split":
        if "F" in obj:
            p["embedding"] = _embedding(obj)
        else:
            tt = _matrix(_require(obj, "tau_tilde", "$"), "$.tau_tilde", square=True)
            ty = _matrix(_require(obj, "tau_tilde_Y", "$"), "$.tau_tilde_Y", square=True)
            p["tau_tilde"], p["tau_tilde_Y"] = tt, ty
            p["exponent"] = (
                _matrix(obj["exponent"], "$.exponent", rows=ty.rows, cols=tt.rows)
                if "exponent" in obj else LatticeMap.zero(ty.rows, tt.rows)
            )
            if "parity" in obj:
                p["parity"] = _vector(obj["parity"], "$.parity", tt.rows)
            elif "signs" in obj:
                signs = obj["signs"]
                if not isinstance(signs, list):
                    _fail("$.signs", "expected a list of {m, sign}")
                gens, vals = [], []
                for i, s in enumerate(signs):
                    gens.append(_vector(_require(s, "m", f"$.signs[{i}]"), f"$.signs[{i}].m", tt.rows))
                    v = _int(_require(s, "sign", f"$.signs[{i}]"), f"$.signs[{i}].sign")
                    if v not in (1, -1):
                        _fail(f"$.signs[{i}].sign", "sign must be 1 or -1")
                    vals.append(v)
                p["signs"] = (gens, vals)
    elif kind == "sections":
        if "F" in obj:
            p["embedding"] = _embedding(obj)
            p["weights"] = _weights(obj, "$", p["embedding"]["F"].cols)
        else:
            base = _base(_require(obj, "base", "$"), "$.base")
            terms = _require(obj, "divisor", "$")
            if not isinstance(terms, list):
                _fail("$.divisor", "expected a list of {ray, coeff}")
            p["base"] = base
            p["weil"] = [
                (_vector(_require(t, "ray", f"$.divisor[{i}]"), f"$.divisor[{i}].ray", base["dim"]),
                 _rational(_require(t, "coeff", f"$.divisor[{i}]"), f"$.divisor[{i}].coeff"))
                for i, t in enumerate(terms)
            ]
    return p


def load_problem(text: str, kind: str | None = None, path: str = "$") -> Problem:
    """Parse and validate a problem file.

    ``kind`` is the requested command; it defaults to the file's ``"kind"``.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", path) from None
    if not isinstance(obj, dict):
        raise ParseError("problem must be a JSON object", "$")
    file_kind = obj.get("kind")
    if file_kind is not None:
        file_kind = _ALIASES.get(file_kind, file_kind)
        if file_kind not in KINDS:
            raise ParseError(f"unknown kind {obj['kind']!r}", "$.kind")
    kind = _ALIASES.get(kind, kind) if kind else file_kind
    if kind is None:
        raise ParseError("no kind given", "$.kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", "$.kind")
    opts = obj.get("options", {})
    if not isinstance(opts, dict):
        raise ParseError("expected an object", "$.options")
    options = {}
    for key in ("grid", "degree_bound"):
        if key in opts:
            options[key] = _int(opts[key], f"$.options.{key}")
    return Problem(kind, _validate(kind, obj), options)


# ---------------------------------------------------------------------------
# dispatch


def _build_embedding(p: dict) -> TorusEmbedding:
    return TorusEmbedding.build(p["F"], p["tau_hat"], p["tau_hat_prime"], p["sigma_prime"], p["generator_weights"])


def _run_downgrade(p: dict):
    e = _build_embedding(p)
    a = downgrade(e, p.get("projection"), p.get("cosection"))
    if "h_exponent" in p or "h_sign" in p:
        a = a.with_h(p.get("h_exponent", a.h_exponent), p.get("h_sign"))
    return a


def _build_divisor(d: dict) -> PolyhedralDivisor:
    base = ToricBase.from_cones(d["base"]["dim"], d["base"]["cones"])
    tail = RationalCone.from_generators(d["tail"], d["rank"])
    terms = tuple((tuple(ray), tail_decompose(verts, d["tail"], d["rank"])) for ray, verts in d["terms"])
    return PolyhedralDivisor(base, tail, terms)


def _grid(cone: RationalCone, n: int) -> list:
    pts = product(range(-n, n + 1), repeat=cone.dim)
    return [m for m in pts if cone.contains(m)]


def _weil_lines(E: WeilQDivisor) -> str:
    return repr(E)


def _divisor_data(D: PolyhedralDivisor) -> list:
    return [
        {"ray": list(r), "vertices": [[rational(x) for x in v] for v in p.vertices], "tail": [list(t) for t in p.tail.rays]}
        for r, p in D.terms
    ]


def _datum_summary(a) -> dict:
    return {
        "base_rays": [list(r) for r in a.base.ray_ids],
        "base_cones": [[list(r) for r in c.rays] for c in a.base.fan.maximal_cones],
        "divisor": _divisor_data(a.divisor),
        "tail": [list(r) for r in a.divisor.tail.rays],
        "tau_hat_Y": a.tau_hat_Y.tolist(),
        "h_exponent": a.h_exponent.tolist(),
        "h_sign": list(a.h_sign),
        "cosection_s": a.cosection_s.tolist(),
        "projection_P": a.projection_P.tolist(),
        "section_t": a.section_t.tolist(),
        "equivariant_cosection": a.equivariant,
        "weight_cone": [list(r) for r in a.weight_cone.rays],
    }


def _lines_for_datum(a) -> list:
    lines = [
        f"quotient fan rays: {[list(r) for r in a.base.ray_ids]}",
        f"maximal cones: {[[list(r) for r in c.rays] for c in a.base.fan.maximal_cones]}",
        f"tail cone: {[list(r) for r in a.divisor.tail.rays]}",
    ]
    if not a.divisor.terms:
        lines.append("divisor: 0 (all coefficients equal the tail)")
    for r, p in a.divisor.terms:
        verts = [[str(x) for x in v] for v in p.vertices]
        lines.append(f"coefficient at ray {list(r)}: conv{verts} + tail")
    lines += [
        f"tau_hat_Y: {a.tau_hat_Y.tolist()}",
        f"h exponent: {a.h_exponent.tolist()}" + ("  (equivariant cosection)" if a.equivariant else ""),
        f"P = {a.projection_P.tolist()}, s = {a.cosection_s.tolist()}, t = {a.section_t.tolist()}",
    ]
    return lines


def run(problem: Problem, grid: int | None = None, degree_bound: int | None = None) -> Report:
    grid = grid if grid is not None else problem.options.get("grid", DEFAULT_GRID)
    degree_bound = degree_bound if degree_bound is not None else problem.options.get("degree_bound", DEFAULT_DEGREE_BOUND)
    p = problem.payload
    kind = problem.kind

    if kind == "classify":
        t = classify_involution(p["matrix"])
        return Report(kind, True, t.as_dict(), lines=(f"n0={t.n0} n1={t.n1} n2={t.n2}",))

    if kind == "downgrade":
        a = _run_downgrade(p["embedding"])
        return Report(kind, True, _datum_summary(a), lines=tuple(_lines_for_datum(a)))

    if kind == "check-real":
        a = _run_downgrade(p["embedding"])
        rep = check_real_compatibility(a)
        data = {"ok": rep.ok, "checked": rep.checked, "cocycle_ok": rep.cocycle_ok, "sign_ok": rep.sign_ok,
                "h_exponent": a.h_exponent.tolist()}
        failed = None
        if rep.failure:
            m, lhs, rhs = rep.failure
            data["failure"] = {"m": list(m), "lhs": to_data(lhs)["terms"], "rhs": to_data(rhs)["terms"]}
        if not rep.ok:
            failed = ("cocycle identity" if not rep.cocycle_ok else "sign identity" if not rep.sign_ok
                      else f"real compatibility at m = {list(rep.failure[0])}")
        return Report(kind, rep.ok, data, failed, (rep.describe(),))

    if kind == "evaluate":
        if "polyhedron" in p:
            d = p["polyhedron"]
            poly = tail_decompose(d["vertices"], d["tail"], d["dim"])
            cone = poly.tail.dual()
            weights = p["weights"] or _grid(cone, grid)
            values = [{"m": list(m), "value": rational(support_eval(poly, m))} for m in weights]
            fan = normal_quasifan(poly)
            data = {"values": values, "normal_fan": [[list(r) for r in c.rays] for c in fan.maximal_cones]}
            lines = [f"h({list(m['m'])}) = {m['value']}" for m in values]
            return Report(kind, True, data, lines=tuple(lines))
        D = _build_divisor(p["divisor"]) if "divisor" in p else _run_downgrade(p["embedding"]).divisor
        weights = p["weights"] or _grid(D.weight_cone, grid)
        rows = []
        for m in weights:
            E = evaluate(D, m)
            rows.append({"m": list(m), "divisor": [{"ray": list(r), "coeff": rational(c)}
                                                   for r, c in sorted(E.coefficients.items())]})
        lines = [f"D({r['m']}) = {_weil_lines(evaluate(D, r['m']))}" for r in rows]
        return Report(kind, True, {"evaluations": rows}, lines=tuple(lines))

    if kind == "check-pp":
        D = _build_divisor(p["divisor"]) if "divisor" in p else _run_downgrade(p["embedding"]).divisor
        rep = pp_check(D)
        samples = [
            {"chamber": [list(r) for r in s.chamber.rays], "m": list(s.m), "interior": s.interior,
             "q_cartier": s.q_cartier, "cartier": s.cartier, "semiample": s.semiample, "big": s.big}
            for s in rep.samples
        ]
        bad = rep.first_failure()
        failed = None
        if bad is not None:
            what = "Q-Cartier" if not bad.q_cartier else "semi-ample" if not bad.semiample else "big"
            failed = f"{what} at m = {list(bad.m)}"
        lines = [f"{len(rep.chambers)} chambers, {len(samples)} samples: " + ("pp-divisor" if rep.ok else f"fails {failed}")]
        return Report(kind, rep.ok, {"ok": rep.ok, "samples": samples}, failed, tuple(lines))

    if kind == "split":
        if "embedding" in p:
            a = _run_downgrade(p["embedding"])
            c = CharacterCocycle(a.h_exponent, tuple(a.h_sign), a.tau_tilde, a.tau_tilde_Y)
        else:
            if "parity" in p:
                parity = p["parity"]
            elif "signs" in p:
                parity = parity_from_generator_signs(*p["signs"])
            else:
                parity = None
            c = CharacterCocycle.build(p["exponent"], p["tau_tilde"], p["tau_tilde_Y"], parity)
        res = split_cocycle(c)
        data = {
            "ok": res.ok,
            "method": res.method,
            "g_exponent": res.g_exponent.tolist() if res.g_exponent is not None else None,
            "theta": [rational(x) for x in res.theta] if res.theta is not None else None,
            "exponent_obstruction": res.exponent_obstruction,
            "sign_obstruction": res.sign_obstruction,
        }
        failed = None
        if not res.ok:
            failed = "exponent splitting" if res.exponent_obstruction else "sign splitting"
        return Report(kind, res.ok, data, failed, (res.describe(),))

    if kind == "sections":
        if "embedding" in p:
            a = _run_downgrade(p["embedding"])
            weights = p["weights"] or _grid(a.weight_cone, min(grid, 3))
            pieces = [graded_piece(a, m, grid) for m in weights]
            data = {"pieces": [{"m": list(g.weight), "points": [list(x) for x in g.points]} for g in pieces]}
            lines = [f"weight {list(g.weight)}: {len(g.points)} sections {[list(x) for x in g.points]}" for g in pieces]
            return Report(kind, True, data, lines=tuple(lines))
        b = p["base"]
        Y = ToricBase.from_cones(b["dim"], b["cones"])
        E = WeilQDivisor(Y, {tuple(r): c for r, c in p["weil"]})
        poly = sections_polyhedron(Y, E)
        if poly is None:
            return Report(kind, True, {"empty": True, "points": []}, lines=("sections polyhedron is empty",))
        pts = poly.lattice_points([-grid] * Y.dim, [grid] * Y.dim)
        data = {"empty": False, "vertices": [[rational(x) for x in v] for v in poly.vertices],
                "tail": [list(r) for r in poly.tail.rays], "points": [list(x) for x in pts]}
        return Report(kind, True, data, lines=(f"{len(pts)} lattice points in [-{grid},{grid}]: {[list(x) for x in pts]}",))

    if kind == "oracle-check":
        a = _run_downgrade(p["embedding"])
        F = a.embedding.F
        table = weight_fiber_table([F.row(i) for i in range(F.rows)], degree_bound)
        results = [bijection_check(a, m, degree_bound, oracle=table[m]) for m in sorted(table)]
        bad = next((r for r in results if not r.ok), None)
        data = {"weights": len(results), "ok": bad is None,
                "dimensions": [{"m": list(r.weight), "dim": r.monomials} for r in results]}
        failed = None
        if bad is not None:
            failed = f"bijection at m = {list(bad.weight)}: {bad.problem}"
            data["failure"] = failed
        line = f"{len(results)} weights up to degree {degree_bound}: " + ("bijective" if bad is None else failed)
        return Report(kind, bad is None, data, failed, (line,))

    raise ParseError(f"unknown kind {kind!r}", "$.kind")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tvar", description="Polyhedral divisors of real torus actions")
    parser.add_argument("command", choices=sorted(set(KINDS) | set(_ALIASES)))
    parser.add_argument("file", type=Path)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--grid", type=int, default=None, help=f"grid half-width (default {DEFAULT_GRID})")
    parser.add_argument("--degree-bound", type=int, default=None,
                        help=f"monomial degree bound (default {DEFAULT_DEGREE_BOUND})")
    args = parser.parse_args(argv)
    command = _ALIASES.get(args.command, args.command)
    try:
        text = args.file.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        problem = load_problem(text, command, str(args.file))
        report = run(problem, args.grid, args.degree_bound)
    except TvarError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        out = {"kind": report.kind, "ok": report.ok, "failed_check": report.failed_check, "result": report.data}
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        for line in report.lines:
            print(line)
        if not report.ok:
            print(f"FAILED: {report.failed_check}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
