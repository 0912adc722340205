"""Testes de rigidez, anulamento, translação e corolários sobre T_y."""

from __future__ import annotations

import pytest

from src.algebra.cyclotomic import Angle
from src.analysis.rigidity import (
    counting_identities,
    covering_divisibility_transfer,
    divisibility_form_check,
    rigidity_check,
    spin_signature_check,
    translation_check,
    ty_root_vanishing,
    vanishing_check,
)
from src.fans.builders import (
    BundleSpec,
    hirzebruch_fan,
    projective_bundle_fan,
    projective_space_fan,
    weighted_p2_quotient,
)
from src.fans.multifan import MaximalSimplex, MultiFan
from src.utils.errors import ConditionPViolated, NotDivisible, PreconditionViolated, ZetaIsOne


def _sample_nonsingular_fixtures():
    return [
        projective_space_fan(1),
        projective_space_fan(2),
        projective_space_fan(3),
        hirzebruch_fan(0),
        hirzebruch_fan(1),
        hirzebruch_fan(2),
        projective_bundle_fan(BundleSpec(3, 1, (1, 0))),
        projective_bundle_fan(BundleSpec(3, 2, (-1,))),
    ]


def test_projective_plane_is_rigid_at_level_three(p2):
    verdict = rigidity_check(p2, 3, qorder=2)
    assert len(set(verdict.vectors)) >= 3
    assert verdict.is_constant
    assert verdict.constants_agree
    assert verdict.offending == ()
    assert verdict.vanishes
    assert set(verdict.v_types) == set(verdict.vectors)
    assert any(h != 0 for h in verdict.v_types.values())


def test_translation_on_reliable_window(p2):
    verdict = rigidity_check(p2, 3, qorder=2)
    for vector in verdict.vectors:
        assert translation_check(p2, vector, Angle(1, 3), qorder=2, level=3)


def test_translation_on_hirzebruch(f2):
    assert translation_check(f2, None, Angle(1, 2), qorder=2)


def test_vanishing_check(f2):
    assert vanishing_check(f2, 2, qorder=2)
    assert vanishing_check(projective_space_fan(1), 2, qorder=2)


def test_rigidity_requires_divisibility(p2):
    with pytest.raises(NotDivisible):
        rigidity_check(p2, 2, qorder=1)


def test_rigidity_requires_condition_P():
    fan = MultiFan(1, [(2,), (-1,)], [MaximalSimplex((0,)), MaximalSimplex((1,))])
    with pytest.raises(ConditionPViolated):
        rigidity_check(fan, 2, qorder=1)


def test_forced_rigidity_has_no_types(p2):
    verdict = rigidity_check(p2, 2, qorder=1, force=True)
    assert verdict.v_types == {}
    assert verdict.level == 2


def test_level_must_be_nontrivial(p2):
    with pytest.raises(ValueError):
        rigidity_check(p2, 1)
    with pytest.raises(ZetaIsOne):
        rigidity_check(p2, 3, k=3)


def test_explicit_vectors_are_used(p2):
    verdict = rigidity_check(p2, 3, qorder=1, vectors=[(1, 2), (2, 3)])
    assert verdict.vectors == ((1, 2), (2, 3))
    assert verdict.v_types == {(1, 2): 0, (2, 3): 2}
    assert verdict.is_constant


def test_ty_root_vanishing():
    assert ty_root_vanishing(projective_space_fan(2), 3)
    assert ty_root_vanishing(hirzebruch_fan(2), 2)
    with pytest.raises(NotDivisible):
        ty_root_vanishing(hirzebruch_fan(1), 2)


def test_spin_signature(f2):
    assert spin_signature_check(f2)
    assert spin_signature_check(projective_space_fan(2))
    with pytest.raises(PreconditionViolated):
        spin_signature_check(weighted_p2_quotient(2))


def test_divisibility_bound_on_nonsingular_fixtures():
    for fan in _sample_nonsingular_fixtures():
        assert divisibility_form_check(fan), fan.name


def test_counting_identities():
    for fan in _sample_nonsingular_fixtures():
        assert counting_identities(fan), fan.name


def test_counting_identities_require_unit_weights():
    rays = [(1, 0), (0, 1), (-1, -1)]
    fan = MultiFan(2, rays, [MaximalSimplex(key, 2, 0) for key in ((0, 1), (0, 2), (1, 2))])
    assert counting_identities(projective_space_fan(2))
    with pytest.raises(PreconditionViolated):
        counting_identities(fan)


@pytest.mark.parametrize("b, level", [(2, 2), (2, 3), (3, 3), (3, 2)])
def test_covering_divisibility_transfer(b, level):
    assert covering_divisibility_transfer(weighted_p2_quotient(b), level)
