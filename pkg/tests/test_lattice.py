"""Testes da álgebra linear exata sobre ℤⁿ."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from src.algebra.cyclotomic import Angle
from src.algebra.lattice import (
    chi_angle,
    contains,
    determinant,
    dual_basis,
    lattice_intersection,
    lattice_span_basis,
    mat_mul,
    pairing,
    quotient_group,
    same_lattice,
    saturate,
    smith_normal_form,
    solve_rational,
)
from src.utils.errors import SingularInput


def _sample_matrices():
    return [
        ((2, 4, 4), (-6, 6, 12), (10, -4, -16)),
        ((1, 2), (3, 4)),
        ((0, 3, 1), (2, -1, 5), (7, 7, 0)),
        ((4, 0), (0, 6)),
    ]


def test_smith_normal_form_known_example():
    matrix = ((2, 4, 4), (-6, 6, 12), (10, -4, -16))
    snf = smith_normal_form(matrix)
    assert snf.diagonal == (2, 6, 12)
    assert mat_mul(mat_mul(snf.U, matrix), snf.V) == snf.D


def test_smith_normal_form_rank_deficient():
    snf = smith_normal_form(((1, 2), (2, 4)))
    assert snf.diagonal == (1, 0)
    assert snf.rank == 1


def test_smith_divisibility_chain():
    snf = smith_normal_form(((4, 0), (0, 6)))
    assert snf.diagonal == (2, 12)


def test_determinant_matches_sympy():
    for matrix in _sample_matrices():
        assert determinant(matrix) == Fraction(int(sympy.Matrix(matrix).det()))


def test_product_of_invariants_is_abs_determinant():
    for matrix in _sample_matrices():
        diagonal = smith_normal_form(matrix).diagonal
        product = 1
        for d in diagonal:
            product *= d
        assert product == abs(determinant(matrix))


def test_dual_basis_is_dual():
    vectors = [(1, 0), (1, 2)]
    duals = dual_basis(vectors)
    for i, u in enumerate(duals):
        for j, v in enumerate(vectors):
            assert pairing(u, v) == (1 if i == j else 0)


def test_dual_basis_rejects_dependent_vectors():
    with pytest.raises(SingularInput):
        dual_basis([(1, 2), (2, 4)])


def test_solve_rational_inconsistent_system():
    with pytest.raises(SingularInput):
        solve_rational(((1,), (1,)), (1, 2))


def test_quotient_group_order_and_elements():
    group = quotient_group([(1, 0), (1, 2)], 2)
    assert group.order == 2
    assert len(group.elements()) == 2
    reps = [group.representative(e) for e in group.elements()]
    assert len({group.reduce(r) for r in reps}) == 2


def test_quotient_group_infinite_index():
    with pytest.raises(SingularInput):
        quotient_group([(1, 0), (2, 0)], 2)


def test_lattice_intersection():
    basis = lattice_intersection([[(1, 0), (0, 2)], [(2, 0), (0, 1)]])
    assert same_lattice(basis, [(2, 0), (0, 2)])
    assert contains(basis, (4, -2))
    assert not contains(basis, (1, 0))


def test_chi_angle_is_reduced_mod_one():
    assert chi_angle((Fraction(1, 2), Fraction(3, 4)), (1, 1)) == Angle(1, 4)


def test_saturate_projection_kills_span():
    data = saturate([(2, 0)], 2)
    assert abs(data.basis[0][0]) == 1 and data.basis[0][1] == 0
    assert all(pairing(row, (1, 0)) == 0 for row in data.projection)


def test_lattice_span_basis_of_redundant_generators():
    basis = lattice_span_basis([(2, 0), (0, 2), (2, 2)], 2)
    assert len(basis) == 2
    assert abs(determinant(basis)) == 4
    assert contains(basis, (2, 2))
    assert not contains(basis, (1, 1))
