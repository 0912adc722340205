"""Testes da condição (P), da divisibilidade de c₁ e dos tipos mod N."""

from __future__ import annotations

import pytest

from src.fans.builders import hirzebruch_fan
from src.fans.chern import (
    c1_divisibility,
    c1_restrictions,
    check_lattice_vector,
    condition_P,
    divisibility_by_restrictions,
    is_divisible,
    mod_m_partition,
    require_condition_P,
    v_type,
    vm_type,
)
from src.fans.multifan import MaximalSimplex, MultiFan
from src.utils.errors import ConditionPViolated, NotDivisible, NotGeneric


def _sample_fan_without_P() -> MultiFan:
    return MultiFan(1, [(2,), (-1,)], [MaximalSimplex((0,)), MaximalSimplex((1,))], name="sem_P")


def test_condition_P(p2, p2_mod_2):
    assert condition_P(p2)
    assert condition_P(p2_mod_2)
    assert not condition_P(_sample_fan_without_P())
    with pytest.raises(ConditionPViolated):
        require_condition_P(_sample_fan_without_P())


def test_c1_divisibility_of_projective_spaces(p1, p2):
    assert c1_divisibility(p1).n_max == 2
    result = c1_divisibility(p2)
    assert result.n_max == 3
    assert result.divisors == (1, 3)
    for ray in p2.rays:
        assert (sum(a * b for a, b in zip(result.witness, ray)) - 1) % 3 == 0


def test_hirzebruch_divisibility_by_two_follows_parity():
    for k in range(-3, 5):
        assert is_divisible(hirzebruch_fan(k), 2) == (k % 2 == 0), k


def test_restriction_criterion_agrees(p2, f2):
    for level in (1, 2, 3):
        assert divisibility_by_restrictions(p2, level) == is_divisible(p2, level)
        assert divisibility_by_restrictions(f2, level) == is_divisible(f2, level)


def test_is_divisible_rejects_non_positive_level(p2):
    with pytest.raises(ValueError):
        is_divisible(p2, 0)


def test_v_type(p2):
    assert v_type(p2, (1, 2), 3) == 0
    assert v_type(p2, (2, 3), 3) == 2


def test_v_type_requires_divisibility(p2):
    with pytest.raises(NotDivisible):
        v_type(p2, (1, 2), 2)


def test_check_lattice_vector_rejects_walls(p2):
    with pytest.raises(NotGeneric):
        check_lattice_vector(p2, (1, 1))


def test_mod_m_partition_blocks(p2):
    partition = mod_m_partition(p2, (1, 2), 2)
    cores = {block.core: block for block in partition.blocks}
    assert set(cores) == {(0,), (1, 2)}
    assert set(cores[(0,)].members) == {(0, 1), (0, 2)}
    assert cores[(0,)].residues == {0: 1}
    assert partition.block_of((1, 2)).core == (1, 2)


def test_vm_type_is_constant_on_blocks(p2):
    partition = mod_m_partition(p2, (2, 3), 2)
    for block in partition.blocks:
        assert 0 <= vm_type(p2, (2, 3), 2, 3, block) < 3


def test_c1_restrictions_of_projective_plane(p2):
    restrictions = c1_restrictions(p2)
    assert restrictions[(0, 1)] == (1, 1)
    assert restrictions[(0, 2)] == (1, -2)
    assert restrictions[(1, 2)] == (-2, 1)
