from dataclasses import replace
from itertools import product

import pytest

from tvar.convex import RationalCone
from tvar.downgrade import TorusEmbedding, downgrade
from tvar.errors import OutsideWeightCone, PointNotInPiece
from tvar.graded import (
    bijection_check,
    graded_piece,
    piece_involution,
    real_orbits,
    weight_fiber_oracle,
    weight_fiber_table,
)
from tvar.lattice import LatticeMap

from conftest import A3_WEIGHTS, A4_WEIGHTS


@pytest.fixture(scope="module")
def circle_minus():
    a = downgrade(TorusEmbedding.build([[1]], [[-1]], [[-1]], RationalCone.zero(1)))
    return a.with_h(a.h_exponent, (1,))


def test_graded_piece_examples(a3_reference):
    assert graded_piece(a3_reference, (1, 1), 5).points == ((0,), (1,))
    assert graded_piece(a3_reference, (2, 0), 5).points == ((0,),)
    assert graded_piece(a3_reference, (0, 0), 5).points == ((0,),)
    assert graded_piece(a3_reference, (3, 2), ([-5], [5])).dimension == 3
    with pytest.raises(OutsideWeightCone):
        graded_piece(a3_reference, (-1, 0))


def test_oracle_examples():
    assert sorted(weight_fiber_oracle(A3_WEIGHTS, (1, 1), 4)) == [(0, 0, 1), (1, 1, 0)]
    assert weight_fiber_oracle(A3_WEIGHTS, (0, 0), 4) == [(0, 0, 0)]
    assert sorted(weight_fiber_oracle(A4_WEIGHTS, (1, 2), 4)) == [(0, 0, 1, 0), (1, 2, 0, 0)]


def test_oracle_table_agrees_with_brute_force():
    table = weight_fiber_table(A4_WEIGHTS, 4)
    for a in product(range(5), repeat=4):
        if sum(a) <= 4:
            w = tuple(sum(x * r[i] for x, r in zip(a, A4_WEIGHTS)) for i in range(2))
            assert a in table[w]
    assert sum(len(v) for v in table.values()) == 70


def test_bijection_examples(a3_reference, a4_reference, a3):
    assert bijection_check(a3_reference, (1, 1), 6)
    assert bijection_check(a3_reference, (0, 0), 6)
    r = bijection_check(a4_reference, (2, 2), 6)
    assert r.ok and r.monomials == r.points == 3
    assert bijection_check(a3, (2, 3), 6)


def test_bijection_detects_a_wrong_section(a3_reference):
    bad_t = LatticeMap.from_rows([[0], [0], [2]])
    assert not bijection_check(replace(a3_reference, section_t=bad_t), (1, 1), 6).ok


def test_piece_involution_examples(diagonal, circle_minus):
    assert piece_involution(diagonal, (1,), (0,)) == ((1,), (1,), 1)
    assert piece_involution(diagonal, (1,), (1,)) == ((1,), (0,), 1)
    m2, p2, sign = piece_involution(circle_minus, (1,), ())
    assert (m2, p2, sign) == ((-1,), (), -1)
    m3, p3, sign2 = piece_involution(circle_minus, m2, p2)
    assert (m3, p3, sign * sign2) == ((1,), (), 1)
    trivial = downgrade(TorusEmbedding.build([[1], [1]], [[1]], [[1, 0], [0, 1]]))
    for p in graded_piece(trivial, (3,)).points:
        assert piece_involution(trivial, (3,), p) == ((3,), p, 1)
    with pytest.raises(PointNotInPiece):
        piece_involution(diagonal, (1,), (2,))


@pytest.mark.parametrize("name", ["a3", "a3_reference", "a4", "a4_reference", "diagonal", "diagonal_a3"])
def test_piece_involution_squares_to_identity(name, request):
    a = request.getfixturevalue(name)
    for m in product(range(5), repeat=a.rank):
        for p in graded_piece(a, m, 6).points:
            m2, q, s1 = piece_involution(a, m, p)
            assert q in graded_piece(a, m2, (q, q)).points
            m3, r, s2 = piece_involution(a, m2, q)
            assert (m3, r, s1 * s2) == (tuple(m), p, 1)


@pytest.mark.parametrize("name", ["a3_reference", "a4_reference", "diagonal"])
def test_multiplicativity(name, request):
    a = request.getfixturevalue(name)
    weights = list(product(range(3), repeat=a.rank))
    for m in weights:
        for m2 in weights:
            total = tuple(x + y for x, y in zip(m, m2))
            big = graded_piece(a, total, 12).points
            for p in graded_piece(a, m, 6).points:
                for q in graded_piece(a, m2, 6).points:
                    assert tuple(x + y for x, y in zip(p, q)) in big


def test_real_orbits(diagonal):
    orbits = real_orbits(diagonal, [(1,), (2,)])
    assert orbits == [
        (((1,), (0,)), ((1,), (1,)), 1),
        (((2,), (0,)), ((2,), (2,)), 1),
        (((2,), (1,)), ((2,), (1,)), 1),
    ]
