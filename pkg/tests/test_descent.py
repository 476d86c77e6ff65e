import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvar.convex import RationalCone, TailedPolyhedron, tail_decompose
from tvar.descent import (
    CharacterCocycle,
    cone_stable,
    parity_from_generator_signs,
    split_cocycle,
    stable_equivalent_involution,
    twist_by_cokernel_element,
    twist_divisor,
)
from tvar.divisors import ToricBase, WeilQDivisor, evaluate, principal_divisor
from tvar.downgrade import check_real_compatibility, downgrade
from tvar.errors import NotACocycle, RankMismatch
from tvar.lattice import (
    InvolutionType,
    LatticeMap,
    _linear_system,
    block_involution,
    classify_involution,
    integer_kernel,
    inverse_unimodular,
)

from conftest import SWAP

P1 = ToricBase.projective_line()
Q2 = RationalCone.orthant(2)
SLANTED = RationalCone.from_generators([[1, 0], [1, 2]])


def test_cone_stable_examples():
    assert cone_stable(LatticeMap.from_rows(SWAP), Q2)
    assert not cone_stable(LatticeMap.from_rows(SWAP), SLANTED)
    assert cone_stable(LatticeMap.identity(2), SLANTED)
    with pytest.raises(RankMismatch):
        cone_stable(LatticeMap.identity(3), Q2)


def test_stable_equivalent_involution():
    # the only nontrivial ray swap of the slanted cone is diagonalizable, so no swap-type structure exists
    report = stable_equivalent_involution(SWAP, SLANTED)
    assert not report.stable and report.equivalent is None and report.exhaustive
    flip = stable_equivalent_involution([[1, 0], [0, -1]], SLANTED)
    assert flip.equivalent.tolist() == [[1, 0], [2, -1]]
    assert cone_stable(flip.equivalent, SLANTED)
    assert classify_involution(flip.equivalent) == InvolutionType(1, 1, 0)
    assert stable_equivalent_involution(SWAP, Q2).stable


def test_split_diagonal_swap_is_obstructed():
    c = CharacterCocycle.build([[1]], [[1]], [[-1]])
    r = split_cocycle(c)
    assert not r.ok and r.g_exponent is None
    assert "2*g = -1" in r.exponent_obstruction


@pytest.mark.parametrize("sign,ok", [(1, True), (-1, False)])
def test_split_circle_forms(sign, ok):
    parity = parity_from_generator_signs([[1], [-1]], [sign, sign])
    r = split_cocycle(CharacterCocycle.build([], [[-1]], [], parity))
    assert r.ok is ok
    if not ok:
        assert r.sign_obstruction == -1 and r.sign_witness == (1,)


@pytest.mark.parametrize("u0", [(1, 0), (1, 2), (-3, 5)])
def test_split_regular_factor_closed_form(u0):
    E = LatticeMap.from_rows([[-u, u] for u in u0])
    r = split_cocycle(CharacterCocycle.build(E, SWAP, LatticeMap.identity(2)))
    assert r.ok and r.method == "closed form"
    assert r.g_exponent.tolist() == [[u, 0] for u in u0]


def test_split_trivial():
    r = split_cocycle(CharacterCocycle.build(LatticeMap.zero(1, 2), SWAP, [[1]]))
    assert r.ok and not any(r.g_exponent.entries) and all(x == 0 for x in r.theta)


def test_cocycle_validation():
    with pytest.raises(NotACocycle):
        CharacterCocycle.build([[1]], [[1]], [[1]])
    with pytest.raises(NotACocycle):
        CharacterCocycle.build(LatticeMap.zero(0, 2), SWAP, [], parity=(1, 0))
    with pytest.raises(NotACocycle):
        parity_from_generator_signs([[1], [2]], [-1, -1])


def random_unimodular(rng, n):
    U = LatticeMap.identity(n)
    for _ in range(4):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = [[int(a == b) for b in range(n)] for a in range(n)]
        E[i][j] = rng.randint(-2, 2)
        U = LatticeMap.from_rows(E) @ U
    return U


def random_involution(rng, kind):
    U = random_unimodular(rng, kind.rank)
    return U @ block_involution(kind) @ inverse_unimodular(U)


def random_cocycle(rng, tt, ttY):
    """Random integer combination of a basis of the cocycle module."""
    k, r = ttY.rows, tt.rows
    A, _ = _linear_system((k, r), [lambda X: X + ttY @ X @ tt], [LatticeMap.zero(k, r)])
    basis = integer_kernel(A)
    coeffs = [rng.randint(-3, 3) for _ in basis]
    flat = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(k * r)]
    E = LatticeMap.from_rows([flat[i * r:(i + 1) * r] for i in range(k)], cols=r)
    parities = [e for e in product((0, 1), repeat=r)
                if not any((x + y) % 2 for x, y in zip(e, tt.T.apply(e)))]
    return CharacterCocycle(E, rng.choice(parities), tt, ttY)


quasi_split = st.tuples(st.integers(0, 2), st.integers(0, 1)).filter(lambda t: t[0] + 2 * t[1] > 0)


@settings(max_examples=60, deadline=None)
@given(quasi_split, quasi_split, st.integers(0, 10**6))
def test_completeness_on_quasi_split_types(kind, kind_Y, seed):
    rng = random.Random(seed)
    tt = random_involution(rng, InvolutionType(kind[0], 0, kind[1]))
    ttY = random_involution(rng, InvolutionType(kind_Y[0], 0, kind_Y[1]))
    c = random_cocycle(rng, tt, ttY)
    r = split_cocycle(c)
    assert r.ok
    assert -r.g_exponent + ttY @ r.g_exponent @ tt == c.exponent


def test_quasi_split_source_alone_is_not_enough():
    # trivial action on M, sign action on M_Y: the identity cocycle does not split
    c = CharacterCocycle.build([[1]], [[1]], [[-1]])
    assert classify_involution(c.tau_tilde).quasi_split
    assert not split_cocycle(c).ok


kinds = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)).filter(
    lambda t: 0 < t[0] + t[1] + 2 * t[2] <= 3
)


@settings(max_examples=60, deadline=None)
@given(kinds, kinds, st.integers(0, 10**6))
def test_obstruction_is_a_class_invariant(kind, kind_Y, seed):
    rng = random.Random(seed)
    tt = random_involution(rng, InvolutionType(*kind))
    ttY = random_involution(rng, InvolutionType(*kind_Y))
    c = random_cocycle(rng, tt, ttY)
    G = LatticeMap.from_rows([[rng.randint(-3, 3) for _ in range(tt.rows)] for _ in range(ttY.rows)], cols=tt.rows)
    before, after = split_cocycle(c), split_cocycle(c.coboundary_twist(G))
    assert before.ok == after.ok
    assert (before.g_exponent is None) == (after.g_exponent is None)
    assert before.sign_obstruction == after.sign_obstruction
    for res, coc in ((before, c), (after, c.coboundary_twist(G))):
        if res.g_exponent is not None:
            assert -res.g_exponent + ttY @ res.g_exponent @ tt == coc.exponent


def test_twist_examples(diagonal):
    D = diagonal.divisor
    assert twist_divisor(D, LatticeMap.zero(1, 1)) == D
    twisted = twist_divisor(D, LatticeMap.from_rows([[1]]))
    assert evaluate(twisted, (1,)) == WeilQDivisor(P1, {(1,): -1, (-1,): 2})


def test_twist_by_cokernel_element_shifts_coefficients(a3_reference):
    D = a3_reference.divisor
    S0 = LatticeMap.from_rows([[1], [0]])
    twisted = twist_by_cokernel_element(D, S0)
    delta = tail_decompose([[0, 1], [1, 0]], [[1, 0], [0, 1]])
    assert twisted.coefficient((-1,)) == delta.translate([-1, 0])
    assert twisted.coefficient((1,)) == TailedPolyhedron([(1, 0)], Q2)
    for m in product(range(5), repeat=2):
        assert evaluate(twisted, m) == evaluate(D, m) + principal_divisor(D.base, S0.T.apply(m))


def test_twist_restores_compatibility(a3_reference):
    e = a3_reference.embedding
    P = a3_reference.projection_P
    s = a3_reference.cosection_s + LatticeMap.from_rows([[1], [0]]) @ P
    a = downgrade(e, P, s)
    assert not a.equivariant and any(a.h_exponent.entries)
    assert check_real_compatibility(a).ok
    c = CharacterCocycle.build(a.h_exponent, a.tau_tilde, a.tau_tilde_Y, a.h_sign)
    r = split_cocycle(c)
    assert r.ok
    untwisted = a.with_divisor(twist_divisor(a.divisor, r.g_exponent)).with_h(LatticeMap.zero(1, 2))
    assert check_real_compatibility(untwisted).ok
    assert not check_real_compatibility(a.with_h(LatticeMap.zero(1, 2))).ok
