"""Testes do modelo de multi-leque: estrutura, grau, completude e h/e-vetores."""

from __future__ import annotations

import pytest

from src.fans.builders import hirzebruch_fan, projective_space_fan, random_complete_multifan
from src.fans.multifan import (
    EquivCohClass,
    MaximalSimplex,
    MultiFan,
    deg,
    degree,
    e_vector,
    generic_vectors,
    h_vector,
    is_complete,
    is_generic,
    project,
    projected_degree,
    restriction,
    validate,
    window_points,
)
from src.utils.errors import (
    DependentRays,
    EmptyTopDimension,
    InvalidFan,
    KeyNotInSigma,
    NotGeneric,
)


def _sample_signed_fan() -> MultiFan:
    """2·ℙ² menos o ℙ² refletido, com grau 1."""
    rays = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
    simplices = [MaximalSimplex(key, 2, 0) for key in ((0, 1), (0, 2), (1, 2))]
    simplices += [MaximalSimplex(key, 0, 1) for key in ((3, 4), (3, 5), (4, 5))]
    return MultiFan(2, rays, simplices, name="com_sinal")


def _sample_incomplete_fan() -> MultiFan:
    rays = [(1, 0), (0, 1), (-1, -1)]
    return MultiFan(2, rays, [MaximalSimplex((0, 1)), MaximalSimplex((0, 2))], name="incompleto")


def test_validate_reports_isotropy(p2, p2_mod_2):
    smooth = validate(p2)
    assert smooth.nonsingular and smooth.primitive
    assert smooth.warnings == ()
    assert set(smooth.isotropy_orders.values()) == {1}

    orbifold = validate(p2_mod_2)
    assert not orbifold.nonsingular
    assert set(orbifold.isotropy_orders.values()) == {2}
    assert p2_mod_2.isotropy_lcm == 2


def test_validate_flags_non_primitive_and_unused_rays():
    fan = MultiFan(1, [(2,), (-1,), (3,)], [MaximalSimplex((0,)), MaximalSimplex((1,))])
    diagnostics = validate(fan)
    assert not diagnostics.primitive
    assert diagnostics.non_primitive_rays == (0, 2)
    assert any("fora de qualquer simplexo" in w for w in diagnostics.warnings)


def test_construction_errors():
    with pytest.raises(DependentRays):
        MultiFan(2, [(1, 0), (2, 0)], [MaximalSimplex((0, 1))])
    with pytest.raises(EmptyTopDimension):
        MultiFan(2, [(1, 0), (0, 1)], [])
    with pytest.raises(InvalidFan):
        MultiFan(2, [(1, 0, 0), (0, 1)], [MaximalSimplex((0, 1))])
    with pytest.raises(InvalidFan):
        MaximalSimplex((0, 0))


def test_maximal_data_requires_maximal_key(p2):
    with pytest.raises(KeyNotInSigma):
        p2.dual((0,))
    assert p2.group((0, 1)).order == 1


def test_degree_of_standard_fans(p1, p2, f2):
    assert deg(p1) == 1
    assert deg(p2) == 1
    assert deg(f2) == 1


def test_degree_rejects_wall_vectors(p2):
    with pytest.raises(NotGeneric):
        degree(p2, (1, 0))


def test_signed_fan_is_complete_with_degree_one():
    fan = _sample_signed_fan()
    assert is_complete(fan)
    assert deg(fan) == 1
    assert h_vector(fan) == (1, 1, 1)


def test_projective_line_is_complete(p1):
    assert is_complete(projective_space_fan(1))
    assert deg(p1) == 1
    assert h_vector(p1) == (1, 1)


def test_generic_vectors_in_rank_one(p1):
    vectors = generic_vectors(p1, 5)
    assert len(set(vectors)) == 5
    assert all(v != (0,) and is_generic(p1, v) for v in vectors)


def test_incomplete_fan_is_detected():
    assert not is_complete(_sample_incomplete_fan())


def test_h_and_e_vectors(p2, f2):
    assert h_vector(p2) == (1, 1, 1)
    assert e_vector(p2) == (1, 3, 3)
    assert h_vector(f2) == (1, 2, 1)
    assert e_vector(f2) == (1, 4, 4)


def test_h_vector_of_projective_space_is_all_ones():
    for n in range(1, 5):
        assert h_vector(projective_space_fan(n)) == (1,) * (n + 1)


def test_h_vector_is_symmetric_on_random_fans():
    for seed in range(100):
        fan = random_complete_multifan(seed)
        h = h_vector(fan)
        assert h == tuple(reversed(h)), fan.name
        assert h[0] == deg(fan)


def test_h_vector_does_not_depend_on_vector(f2):
    vectors = generic_vectors(f2, 3)
    assert len({h_vector(f2, v) for v in vectors}) == 1


def test_generic_vectors_are_generic_and_distinct(p2_mod_2):
    vectors = generic_vectors(p2_mod_2, 3)
    assert len(set(vectors)) == 3
    assert all(is_generic(p2_mod_2, v) for v in vectors)


def test_projected_degree_matches_projection(p2):
    vector = generic_vectors(p2, 1)[0]
    for key in p2.faces(1):
        projected = project(p2, key)
        assert projected.fan.rank == 1
        assert projected_degree(p2, key, vector) == deg(projected.fan)


def test_project_unknown_face(p2):
    with pytest.raises(KeyNotInSigma):
        project(p2, (0, 1, 2))


def test_face_isotropy_of_orbifold(p2_mod_2):
    assert p2_mod_2.face_isotropy((0,)).order == 1
    assert p2_mod_2.face_isotropy((1,)).order == 2


def test_pullback_restricts_to_itself():
    fan = hirzebruch_fan(3)
    u = (2, -5)
    x = EquivCohClass.pullback(fan, u)
    for key in fan.maximal_keys:
        assert restriction(fan, x, key) == u


def test_window_points_box():
    points = window_points(1, 2)
    assert len(points) == 9
    assert (0, 0) in points and (-1, 1) in points
