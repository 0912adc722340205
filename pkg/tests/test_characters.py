"""Testes das tabelas de caracteres e da verificação cruzada."""

from __future__ import annotations

from fractions import Fraction

import pytest

from src.algebra.cyclotomic import Angle, CycloNumber, root_of_unity
from src.algebra.series import QSeries, big_phi_series
from src.analysis.characters import (
    character_table,
    crosscheck_character_vs_fixedpoint,
    orbifold_character_table,
)
from src.fans.builders import weighted_p2_quotient
from src.utils.errors import WindowNotInjective, WindowTooSmall


def _binomial(coefficient: CycloNumber, exponent: int, order: int, granularity: int) -> QSeries:
    """q^{max(0, −e)} · (1 − c q^e) como polinômio em q."""
    one = CycloNumber.one()
    if exponent == 0:
        return QSeries.from_terms({0: one - coefficient}, order, granularity)
    if exponent > 0:
        return QSeries.from_terms({0: one, exponent * granularity: -coefficient}, order, granularity)
    return QSeries.from_terms({-exponent * granularity: one, 0: -coefficient}, order, granularity)


def _closed_form_holds(entry: QSeries, b: int, m1: int, m2: int, sigma: Angle, conductor: int) -> bool:
    """
    Confere a fórmula fechada de ℙ²/ℤ_b multiplicando pelos denominadores.

    a·D = (1 − ζ^{3/b})(1 − ζ² q^{−b m₂}) Φ², com
    D = (1 − ζq^{m₁})(1 − ζq^{−m₁−b m₂})(1 − ζ^{1/b}q^{m₂})(1 − ζ^{2/b}q^{−m₂}).
    """

    order, granularity = entry.order, entry.granularity

    def zeta(power: Fraction) -> CycloNumber:
        return root_of_unity(Angle.of(sigma.value * power), conductor)

    denominators = [
        (zeta(Fraction(1)), m1),
        (zeta(Fraction(1)), -m1 - b * m2),
        (zeta(Fraction(1, b)), m2),
        (zeta(Fraction(2, b)), -m2),
    ]
    lhs = entry
    lifted = 0
    for coefficient, exponent in denominators:
        lhs = lhs * _binomial(coefficient, exponent, order, granularity)
        lifted += max(0, -exponent)

    phi_square = big_phi_series(sigma, order, granularity, conductor) ** 2
    rhs = phi_square * _binomial(zeta(Fraction(2)), -b * m2, order, granularity)
    rhs = rhs.scale(1 - zeta(Fraction(3, b)))

    # q^{S_D} do lado direito e q^{S_N} do lado esquerdo
    lhs = lhs.shift(max(0, b * m2) * granularity)
    rhs = rhs.shift(lifted * granularity)
    return lhs == rhs


def test_character_crosscheck_on_projective_line(p1):
    assert crosscheck_character_vs_fixedpoint(p1, None, Angle(1, 3), qorder=2, bound=4)


def test_character_crosscheck_on_projective_plane(p2):
    assert crosscheck_character_vs_fixedpoint(p2, None, Angle(1, 5), qorder=1, bound=4)


def test_orbifold_crosscheck_on_weighted_quotient(p2_mod_2):
    assert crosscheck_character_vs_fixedpoint(
        p2_mod_2, None, Angle(1, 5), qorder=1, bound=3, orbifold=True
    )


def test_crosscheck_rejects_non_injective_vector(p2):
    with pytest.raises(WindowNotInjective):
        crosscheck_character_vs_fixedpoint(p2, (1, 2), Angle(1, 5), qorder=1, bound=2)


def test_crosscheck_window_too_small(p1):
    with pytest.raises(WindowTooSmall):
        crosscheck_character_vs_fixedpoint(p1, None, Angle(1, 3), qorder=2, bound=1)


def test_projective_line_table_support(p1):
    table = character_table(p1, Angle(1, 3), qorder=2, bound=4)
    assert not table[(0,)].is_zero()
    assert set(table.support()) <= {(u,) for u in range(-2, 3)}
    assert all(table[u].is_zero() for u in table.boundary())


def test_table_vanishes_with_genus(p1):
    # ℙ¹ no nível 2: o gênero se anula e a tabela inteira também
    table = character_table(p1, Angle(1, 2), qorder=2, bound=3)
    assert table.support() == []


@pytest.mark.parametrize("b", [2, 3])
def test_weighted_quotient_closed_formula(b):
    fan = weighted_p2_quotient(b)
    sigma = Angle(1, 5)
    table = orbifold_character_table(fan, sigma, qorder=1, bound=2)
    assert table.orbifold
    for m1 in range(-2, 3):
        for m2 in range(-2, 3):
            assert _closed_form_holds(table[(m1, m2)], b, m1, m2, sigma, table.conductor), (m1, m2)
