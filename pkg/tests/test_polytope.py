"""Testes de multipolitopos e da função de Duistermaat–Heckman."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from src.fans.builders import projective_space_fan, weighted_p2_quotient
from src.fans.multifan import (
    EquivCohClass,
    MaximalSimplex,
    MultiFan,
    is_generic,
    is_injective_on,
    window_points,
)
from src.fans.polytope import (
    MultiPolytope,
    dh_character,
    dh_value,
    fixed_point_character,
    kronecker_pair,
    kronecker_vector,
    polytope_window,
)
from src.utils.errors import (
    InvalidFan,
    NonIntegralOffsets,
    NotGeneric,
    OutsideAffineSpace,
    PointOnWall,
    WindowNotInjective,
    WindowTooSmall,
)


def _sample_polytope(fan: MultiFan, coefficients, key=()) -> MultiPolytope:
    return MultiPolytope.from_class(fan, EquivCohClass(tuple(coefficients)), key)


def test_segment_on_projective_line(p1):
    polytope = _sample_polytope(p1, (2, 1))
    window = polytope_window(polytope, 4)
    expected = {(-1,): 1, (0,): 1, (1,): 1, (2,): 1}
    assert dh_character(polytope, window) == expected
    assert fixed_point_character(polytope, window) == expected


def test_zero_class_is_a_point(p2):
    polytope = _sample_polytope(p2, (0, 0, 0))
    window = polytope_window(polytope, 3)
    assert dh_character(polytope, window) == {(0, 0): 1}
    assert fixed_point_character(polytope, window) == {(0, 0): 1}


def test_triangle_on_projective_plane(p2):
    polytope = _sample_polytope(p2, (1, 0, 0))
    window = polytope_window(polytope, 3)
    character = dh_character(polytope, window)
    assert character == {(0, 0): 1, (1, 0): 1, (1, -1): 1}
    assert fixed_point_character(polytope, window) == character


@pytest.mark.parametrize(
    "fan, coefficients",
    [
        (projective_space_fan(2), (2, 1, 0)),
        (projective_space_fan(3), (1, 0, 0, 1)),
        (weighted_p2_quotient(2), (0, 0, 0)),
        (weighted_p2_quotient(2), (1, 1, 2)),
    ],
)
def test_dh_matches_fixed_points(fan, coefficients):
    polytope = _sample_polytope(fan, coefficients)
    window = polytope_window(polytope, 4)
    assert dh_character(polytope, window) == fixed_point_character(polytope, window)


@pytest.mark.parametrize(
    "fan, coefficients",
    [(projective_space_fan(1), c) for c in product(range(3), repeat=2)]
    + [(projective_space_fan(2), c) for c in product(range(3), repeat=3)],
)
def test_dh_matches_fixed_points_on_small_classes(fan, coefficients):
    polytope = _sample_polytope(fan, coefficients)
    window = polytope_window(polytope, sum(coefficients) + 2)
    character = dh_character(polytope, window)
    assert character
    assert character == fixed_point_character(polytope, window)


def test_kronecker_pair_is_independent(p2):
    first, second = kronecker_pair(p2)
    assert first[0] * second[1] != first[1] * second[0]


def test_kronecker_vector_separates_window(p2):
    window = window_points(3, 2)
    vector = kronecker_vector(p2, window)
    assert is_generic(p2, vector)
    assert is_injective_on(vector, window)


def test_kronecker_vector_in_rank_one(p1):
    window = window_points(3, 1)
    vector = kronecker_vector(p1, window)
    assert vector != (0,)
    assert is_injective_on(vector, window)


def test_fixed_point_vector_must_lie_in_lattice():
    fan = weighted_p2_quotient(2)
    polytope = _sample_polytope(fan, (0, 0, 0))
    with pytest.raises(NotGeneric):
        fixed_point_character(polytope, polytope_window(polytope, 2), vector=(1, 9))


def test_signed_multifan_character():
    rays = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
    simplices = [MaximalSimplex(key, 2, 0) for key in ((0, 1), (0, 2), (1, 2))]
    simplices += [MaximalSimplex(key, 0, 1) for key in ((3, 4), (3, 5), (4, 5))]
    fan = MultiFan(2, rays, simplices)
    polytope = _sample_polytope(fan, (0,) * 6)
    window = polytope_window(polytope, 2)
    assert dh_character(polytope, window) == {(0, 0): 1}
    assert fixed_point_character(polytope, window) == {(0, 0): 1}


def test_face_polytope_lives_in_affine_space(p2):
    polytope = _sample_polytope(p2, (1, 0, 0), key=(0,))
    assert polytope.in_affine_space((1, 5))
    assert not polytope.in_affine_space((0, 0))
    with pytest.raises(OutsideAffineSpace):
        dh_value(polytope.shifted(), (0, 0), (1, 2))


def test_point_on_wall(p1):
    polytope = _sample_polytope(p1, (2, 1))
    with pytest.raises(PointOnWall):
        dh_value(polytope, (2,), (1,))


def test_offsets_must_match_link(p2):
    with pytest.raises(InvalidFan):
        MultiPolytope(p2, (), {0: 1, 1: 0})


def test_non_integral_offsets(p1):
    polytope = _sample_polytope(p1, (Fraction(1, 2), 0))
    with pytest.raises(NonIntegralOffsets):
        dh_character(polytope, [(0,)])


def test_window_not_injective(p2):
    polytope = _sample_polytope(p2, (1, 0, 0))
    with pytest.raises(WindowNotInjective):
        fixed_point_character(polytope, window_points(1, 2), vector=(1, 2))


def test_window_too_small(p1):
    polytope = _sample_polytope(p1, (2, 1))
    with pytest.raises(WindowTooSmall):
        fixed_point_character(polytope, polytope_window(polytope, 1))
