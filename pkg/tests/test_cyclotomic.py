"""Testes de ℚ(ζ_M) e dos ângulos."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from src.algebra.cyclotomic import (
    Angle,
    CycloNumber,
    field_tables,
    lift_conductor,
    restrict_conductor,
    root_of_unity,
)
from src.utils.errors import ConductorMismatch, CycloDivisionByZero


def _zeta(numerator: int, denominator: int, conductor: int) -> CycloNumber:
    return root_of_unity(Angle(numerator, denominator), conductor)


def test_angle_is_reduced_mod_one():
    assert Angle(5, 4) == Angle(1, 4)
    assert Angle.parse("-1/3") == Angle(2, 3)
    assert Angle(3, 3).is_zero()
    assert str(Angle(2, 6)) == "1/3"


def test_field_degree_is_euler_phi():
    assert field_tables(12).degree == 4
    assert field_tables(5).degree == 4
    assert field_tables(1).degree == 1


def test_sum_of_roots_of_unity_vanishes():
    zeta = _zeta(1, 3, 3)
    assert (1 + zeta + zeta * zeta).is_zero()
    assert zeta ** 3 == 1


def test_root_of_unity_half_turn_is_minus_one():
    assert _zeta(1, 2, 2) == -1
    assert _zeta(1, 2, 10) == -1


def test_inverse_and_division():
    x = 1 + 2 * _zeta(1, 5, 5)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert x ** -2 * x ** 2 == 1


def test_division_by_zero():
    with pytest.raises(CycloDivisionByZero):
        CycloNumber.zero(7).inverse()
    with pytest.raises(ZeroDivisionError):
        CycloNumber.one(3) / 0


def test_equality_across_conductors():
    assert _zeta(1, 3, 3) == _zeta(2, 6, 6)
    assert _zeta(1, 4, 4) != _zeta(1, 4, 8) * -1


def test_lift_and_restrict_are_inverse():
    x = 3 - _zeta(1, 4, 4) + Fraction(1, 2) * _zeta(3, 4, 4)
    lifted = lift_conductor(x, 12)
    assert lifted.conductor == 12
    assert restrict_conductor(lifted, 4) == x


def test_restrict_rejects_values_outside_subfield():
    with pytest.raises(ConductorMismatch):
        restrict_conductor(_zeta(1, 12, 12), 4)


def test_root_of_unity_conductor_mismatch():
    with pytest.raises(ConductorMismatch):
        root_of_unity(Angle(1, 3), 4)


def test_complex_shadow_matches_numpy():
    x = 2 * _zeta(1, 7, 7) - _zeta(3, 7, 7)
    expected = 2 * np.exp(2j * np.pi / 7) - np.exp(6j * np.pi / 7)
    assert np.isclose(x.to_complex(), expected)


def test_complex_shadow_of_products():
    a = 1 + _zeta(1, 9, 9)
    b = _zeta(2, 9, 9) - 3
    assert np.isclose((a * b).to_complex(), a.to_complex() * b.to_complex())
