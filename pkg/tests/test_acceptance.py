"""Acceptance criteria.

Every check is exact (rational or integer arithmetic, tolerance 0).  Each
criterion prints one line ``criterion N PASS|FAIL ...`` with its measured
time against the pinned limit.  Run with ``pytest tests/test_acceptance.py``
or directly as ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from itertools import combinations, product
from math import gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import A3_WEIGHTS, A4_WEIGHTS, SWAP, SWAP_ID, SWAP_SWAP, datum_from  # noqa: E402
from tvar.convex import (  # noqa: E402
    RationalCone,
    TailedPolyhedron,
    dual_cone,
    minkowski_sum,
    normal_quasifan,
    support_eval,
    tail_decompose,
)
from tvar.descent import CharacterCocycle, parity_from_generator_signs, split_cocycle, twist_by_cokernel_element  # noqa: E402
from tvar.divisors import (  # noqa: E402
    PolyhedralDivisor,
    ToricBase,
    WeilQDivisor,
    evaluate,
    principal_divisor,
    superadditivity_check,
)
from tvar.downgrade import TorusEmbedding, check_real_compatibility, downgrade  # noqa: E402
from tvar.graded import bijection_check, graded_piece, piece_involution, weight_fiber_table  # noqa: E402
from tvar.lattice import (  # noqa: E402
    InvolutionType,
    LatticeMap,
    block_involution,
    classify_involution,
    integer_determinant,
    inverse_unimodular,
    smith_diagonal,
    smith_normal_form,
)

TOLERANCE = 0  # all comparisons are exact
TIME_LIMIT = {1: 1.0, 2: 1.0, 3: 1.0, 4: 1.0, 5: 1.0, 6: 1.0, 7: 30.0, 8: 60.0}
GRID = range(0, 21)  # criteria 1 and 2: [0, 20]^2
ORACLE_DEGREE = 8  # criterion 7
SEED = 20240601

# criterion 8 sample sizes
N_SNF, N_DUAL, N_MINKOWSKI, N_SUPERADD, N_CONJ = 500, 200, 200, 500, 200

Q2 = RationalCone.orthant(2)
ID2 = [[1, 0], [0, 1]]
DELTA = tail_decompose([[0, 1], [1, 0]], ID2)
DELTA3 = tail_decompose([[0, 1], [2, 0]], ID2)
DELTA4 = tail_decompose([[0, 2], [1, 0]], ID2)
P_51 = LatticeMap.from_rows([[-1, -1, 1]])
P_52 = LatticeMap.from_rows([[-1, -2, 1, 0], [-2, -1, 0, 1]])


def _criterion(n, title, check):
    start = time.perf_counter()
    failures = check()
    elapsed = time.perf_counter() - start
    limit = TIME_LIMIT[n]
    ok = not failures and elapsed < limit
    status = "PASS" if ok else "FAIL"
    line = f"criterion {n} {status}  {title}  ({elapsed:.3f} s, limit {limit:.0f} s)"
    if failures:
        line += f"  first failure: {failures[0]}"
    elif elapsed >= limit:
        line += "  over time"
    return ok, line


def _run(n, title, check, capsys=None):
    ok, line = _criterion(n, title, check)
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok, line


# ---------------------------------------------------------------------------
# 1. support functions


def check_support_functions():
    bad = []
    for m1, m2 in product(GRID, GRID):
        m = (m1, m2)
        # Delta: m2 on delta_1 = {m2 <= m1}, m1 on delta_2 = {m1 <= m2}
        expect = m2 if m2 <= m1 else m1
        if support_eval(DELTA, m) != expect:
            bad.append(("Delta", m))
        if support_eval(DELTA3, m) != min(m2, 2 * m1):
            bad.append(("Delta3", m))
        if support_eval(DELTA4, m) != min(2 * m2, m1):
            bad.append(("Delta4", m))
    fan = normal_quasifan(DELTA)
    if {c.rays for c in fan.maximal_cones} != {((0, 1), (1, 1)), ((1, 0), (1, 1))}:
        bad.append(("normal fan of Delta", [c.rays for c in fan.maximal_cones]))
    return bad


def test_criterion_1(capsys):
    ok, line = _run(1, "support functions on [0,20]^2", check_support_functions, capsys)
    assert ok, line


# ---------------------------------------------------------------------------
# 2. divisor evaluation


V3, V4 = (-2, -1), (-1, -2)
Y52 = ToricBase.from_cones(2, [[(1, 0), (0, 1)], [(0, 1), V3], [V3, V4], [V4, (1, 0)]])
D36 = PolyhedralDivisor(Y52, Q2, {V3: DELTA3, V4: DELTA4})


def three_branch(m1, m2):
    if 2 * m2 <= m1:  # delta_1 = cone((1,0), (2,1))
        return m2, 2 * m2
    if m2 <= 2 * m1:  # delta_2 = cone((2,1), (1,2))
        return m2, m1
    return 2 * m1, m1  # delta_3 = cone((1,2), (0,1))


def check_divisor_evaluation():
    bad = []
    for m1, m2 in product(GRID, GRID):
        c3, c4 = three_branch(m1, m2)
        expect = WeilQDivisor(Y52, {V3: c3, V4: c4})
        got = evaluate(D36, (m1, m2))
        if got != expect:
            bad.append(((m1, m2), got, expect))
    return bad


def test_criterion_2(capsys):
    ok, line = _run(2, "three-branch evaluation on [0,20]^2", check_divisor_evaluation, capsys)
    assert ok, line


# ---------------------------------------------------------------------------
# 3-5. downgrades


def _compare_to_reference(a, P_ref, rays, coeffs, tau_Y, label):
    """Compare ``a`` with reference data after the change ``U = P_ref t``."""
    bad = []
    U = P_ref @ a.section_t
    if abs(integer_determinant(U)) != 1 or U @ a.projection_P != P_ref:
        return [f"{label}: projections are not unimodularly equivalent"]
    mapped = {U.apply(r): a.divisor.coefficient(r) for r in a.base.ray_ids}
    if set(mapped) != set(rays):
        bad.append(f"{label}: rays {sorted(mapped)} != {sorted(rays)}")
    for r, poly in mapped.items():
        if poly != coeffs.get(r, TailedPolyhedron([(0,) * poly.dim], poly.tail)):
            bad.append(f"{label}: coefficient at {r} is {poly!r}")
    if (U @ a.tau_hat_Y @ inverse_unimodular(U)).tolist() != tau_Y:
        bad.append(f"{label}: tau_hat_Y {a.tau_hat_Y.tolist()} not conjugate to {tau_Y}")
    if any(a.h_exponent.entries):
        bad.append(f"{label}: h exponent {a.h_exponent.tolist()} != 0")
    return bad


def check_weil_split_a3():
    bad = []
    a = downgrade(TorusEmbedding.build(A3_WEIGHTS, SWAP, SWAP_ID))
    bad += _compare_to_reference(a, P_51, [(-1,), (1,)], {(-1,): DELTA}, [[1]], "normalized")
    ref = datum_from("weil_split_a3_reference.json")
    bad += _compare_to_reference(ref, P_51, [(-1,), (1,)], {(-1,): DELTA}, [[1]], "reference P")
    if ref.projection_P != P_51 or ref.base.fan != ToricBase.projective_line().fan:
        bad.append("reference run is not literally the projective line with the given P")
    return bad


def test_criterion_3(capsys):
    ok, line = _run(3, "downgrade of the Weil restriction on A^3", check_weil_split_a3, capsys)
    assert ok, line


def check_diagonal_swap():
    bad = []
    a = datum_from("diagonal_swap_a2.json")
    if a.base.ray_ids != ((-1,), (1,)):
        bad.append(f"base rays {a.base.ray_ids}")
    if a.divisor.terms != (((-1,), tail_decompose([[1]], [[1]])),):
        bad.append(f"divisor {a.divisor!r}")
    if a.tau_hat_Y.tolist() != [[-1]] or a.h_exponent.tolist() != [[1]]:
        bad.append(f"tau_Y {a.tau_hat_Y.tolist()}, h {a.h_exponent.tolist()}")
    if not check_real_compatibility(a).ok:
        bad.append("compatibility fails with h = x/y")
    forced = check_real_compatibility(a.with_h(LatticeMap.zero(1, 1)))
    if forced.ok or forced.failure[0] != (1,):
        bad.append("compatibility does not fail at m = 1 with h = 1")
    res = split_cocycle(CharacterCocycle(a.h_exponent, a.h_sign, a.tau_tilde, a.tau_tilde_Y))
    if res.ok or not res.exponent_obstruction:
        bad.append(f"split should be obstructed: {res.describe()}")
    a3 = datum_from("diagonal_swap_a3.json")
    if not a3.equivariant or any(a3.h_exponent.entries) or not check_real_compatibility(a3).ok:
        bad.append("A^3 variant should have an equivariant cosection and h = 1")
    return bad


def test_criterion_4(capsys):
    ok, line = _run(4, "diagonal action with swapped coordinates", check_diagonal_swap, capsys)
    assert ok, line


def check_weil_a4():
    rays = [(1, 0), (0, 1), V3, V4]
    coeffs = {V3: DELTA3, V4: DELTA4}
    a = downgrade(TorusEmbedding.build(A4_WEIGHTS, SWAP, SWAP_SWAP))
    bad = _compare_to_reference(a, P_52, rays, coeffs, SWAP, "normalized")
    ref = datum_from("weil_a4_reference.json")
    bad += _compare_to_reference(ref, P_52, rays, coeffs, SWAP, "reference P")
    if len(a.base.fan.maximal_cones) != 4:
        bad.append("quotient fan should have four maximal cones")
    return bad


def test_criterion_5(capsys):
    ok, line = _run(5, "downgrade of the Weil restriction on A^4", check_weil_a4, capsys)
    assert ok, line


# ---------------------------------------------------------------------------
# 6. circle forms


def check_circles():
    bad = []
    for sign, expect_ok in ((1, True), (-1, False)):
        parity = parity_from_generator_signs([[1], [-1]], [sign, sign])
        res = split_cocycle(CharacterCocycle.build([], [[-1]], [], parity))
        if res.ok != expect_ok:
            bad.append(f"sign {sign}: {res.describe()}")
        if not expect_ok and res.sign_obstruction != -1:
            bad.append(f"sign {sign}: obstruction {res.sign_obstruction}")
    return bad


def test_criterion_6(capsys):
    ok, line = _run(6, "circle forms: H^1 = {+1, -1}", check_circles, capsys)
    assert ok, line


# ---------------------------------------------------------------------------
# 7. graded-dimension oracle


def check_oracle():
    bad = []
    count = 0
    for name in ("weil_split_a3.json", "weil_split_a3_reference.json", "weil_a4.json", "weil_a4_reference.json"):
        a = datum_from(name)
        F = a.embedding.F
        table = weight_fiber_table([F.row(i) for i in range(F.rows)], ORACLE_DEGREE)
        for m in sorted(table):
            count += 1
            r = bijection_check(a, m, ORACLE_DEGREE, table[m])
            if not r.ok:
                bad.append(f"{name} m={m}: {r.problem}")
    if count < 200:
        bad.append(f"only {count} weights checked")
    return bad


def test_criterion_7(capsys):
    ok, line = _run(7, f"bijection with monomials of degree <= {ORACLE_DEGREE}", check_oracle, capsys)
    assert ok, line


# ---------------------------------------------------------------------------
# 8. property suites


def _bareiss_det(rows):
    m = [list(r) for r in rows]
    n = len(m)
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
    return sign * m[-1][-1] if n else 1


def _determinantal_divisors(rows, upto):
    nr, nc = len(rows), len(rows[0])
    out = []
    for k in range(1, upto + 1):
        g = 0
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                g = gcd(g, _bareiss_det([[rows[i][j] for j in ci] for i in ri]))
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g)
    return out


def _snf_suite(rng):
    bad = []
    for _ in range(N_SNF):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        A = LatticeMap.from_rows(rows)
        U, S, V = smith_normal_form(A)
        diag = smith_diagonal(S)
        if U @ A @ V != S or abs(integer_determinant(U)) != 1 or abs(integer_determinant(V)) != 1:
            bad.append(f"SNF identity {rows}")
            continue
        if any(b % a if a else b for a, b in zip(diag, diag[1:])):
            bad.append(f"SNF divisibility {rows}")
        # products of invariant factors are the gcds of the k x k minors
        k = min(r, c)
        prods = [_prod(diag[:i + 1]) for i in range(k)]
        if prods != _determinantal_divisors(rows, k):
            bad.append(f"SNF minors {rows}")
        if r == c and abs(_bareiss_det(rows)) != _prod(diag):
            bad.append(f"SNF determinant {rows}")
    return bad


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _dual_suite(rng):
    bad = []
    for _ in range(N_DUAL):
        d = rng.randint(1, 4)
        gens = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(rng.randint(1, 5))]
        if not any(any(g) for g in gens):
            gens[0][0] = 1
        C = RationalCone.from_generators(gens, d)
        if dual_cone(dual_cone(C)) != C:
            bad.append(f"double dual {gens}")
    return bad


def _random_polyhedron(rng):
    pts = [[rng.randint(-4, 4), rng.randint(-4, 4)] for _ in range(rng.randint(1, 5))]
    return tail_decompose(pts, ID2)


def _minkowski_suite(rng):
    bad = []
    for _ in range(N_MINKOWSKI):
        P, Q = _random_polyhedron(rng), _random_polyhedron(rng)
        S = minkowski_sum(P, Q)
        for m in product(range(4), repeat=2):
            if support_eval(S, m) != support_eval(P, m) + support_eval(Q, m):
                bad.append(f"Minkowski {P!r} {Q!r} at {m}")
                break
    return bad


def _superadditivity_suite(rng, divisors):
    bad = []
    for _ in range(N_SUPERADD):
        D = rng.choice(divisors)
        k = D.tail.dim
        cone = D.weight_cone
        while True:
            m = tuple(rng.randint(-20, 20) for _ in range(k))
            m2 = tuple(rng.randint(-20, 20) for _ in range(k))
            if cone.contains(m) and cone.contains(m2):
                break
        if not superadditivity_check(D, m, m2):
            bad.append(f"superadditivity {D!r} {m} {m2}")
    return bad


def _conjugation_suite(rng):
    bad = []
    for _ in range(N_CONJ):
        kind = InvolutionType(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
        if kind.rank == 0:
            kind = InvolutionType(0, 0, 1)
        n = kind.rank
        U = LatticeMap.identity(n)
        for _ in range(6):
            if n < 2:
                break
            i, j = rng.sample(range(n), 2)
            E = [[int(a == b) for b in range(n)] for a in range(n)]
            E[i][j] = rng.randint(-2, 2)
            U = LatticeMap.from_rows(E) @ U
        tau = U @ block_involution(kind) @ inverse_unimodular(U)
        if classify_involution(tau) != kind:
            bad.append(f"classification of {tau.tolist()}")
    return bad


def _involution_suite(datums):
    bad = []
    for a in datums:
        for m in product(range(7), repeat=a.rank):
            if not a.weight_cone.contains(m):
                continue
            for p in graded_piece(a, m, 8).points:
                m2, q, s1 = piece_involution(a, m, p)
                m3, r, s2 = piece_involution(a, m2, q)
                if (m3, r, s1 * s2) != (tuple(m), p, 1):
                    bad.append(f"alpha^2 at {m}, {p}")
    return bad


def _twist_suite():
    bad = []
    cases = [
        ("weil_split_a3_reference.json", [[1], [0]]),
        ("weil_split_a3_reference.json", [[-1], [2]]),
        ("weil_a4_reference.json", [[1, 0], [-1, 2]]),
        ("weil_a4_reference.json", [[0, 1], [1, 1]]),
    ]
    for name, s0 in cases:
        a2 = datum_from(name)
        S0 = LatticeMap.from_rows(s0)
        a1 = downgrade(a2.embedding, a2.projection_P, a2.cosection_s + S0 @ a2.projection_P)
        if a1.cosection_s == a2.cosection_s:
            bad.append(f"{name}: cosections coincide")
        if a1.divisor != twist_by_cokernel_element(a2.divisor, S0):
            bad.append(f"{name}: coefficients are not shifted by s0")
        for m in product(range(6), repeat=a2.rank):
            if evaluate(a1.divisor, m) != evaluate(a2.divisor, m) + principal_divisor(a1.base, S0.T.apply(m)):
                bad.append(f"{name}: twist relation at {m}")
                break
    return bad


def check_properties():
    rng = random.Random(SEED)
    datums = [datum_from(n) for n in (
        "weil_split_a3.json", "weil_split_a3_reference.json", "diagonal_swap_a2.json",
        "diagonal_swap_a3.json", "weil_a4.json", "weil_a4_reference.json",
    )]
    divisors = [D36] + [a.divisor for a in datums]
    bad = []
    bad += _snf_suite(rng)
    bad += _dual_suite(rng)
    bad += _minkowski_suite(rng)
    bad += _superadditivity_suite(rng, divisors)
    bad += _conjugation_suite(rng)
    bad += _involution_suite(datums)
    bad += _twist_suite()
    return bad


def test_criterion_8(capsys):
    ok, line = _run(8, "property suites", check_properties, capsys)
    assert ok, line


CRITERIA = [
    (1, "support functions on [0,20]^2", check_support_functions),
    (2, "three-branch evaluation on [0,20]^2", check_divisor_evaluation),
    (3, "downgrade of the Weil restriction on A^3", check_weil_split_a3),
    (4, "diagonal action with swapped coordinates", check_diagonal_swap),
    (5, "downgrade of the Weil restriction on A^4", check_weil_a4),
    (6, "circle forms: H^1 = {+1, -1}", check_circles),
    (7, f"bijection with monomials of degree <= {ORACLE_DEGREE}", check_oracle),
    (8, "property suites", check_properties),
]


if __name__ == "__main__":
    results = [_run(n, title, fn)[0] for n, title, fn in CRITERIA]
    sys.exit(0 if all(results) else 1)
