"""Testes das séries em q, frações racionais e núcleos de expansão."""

from __future__ import annotations

from fractions import Fraction

import pytest

from src.algebra.cyclotomic import Angle, CycloNumber, root_of_unity
from src.algebra.series import (
    ExpArg,
    LaurentPoly,
    QSeries,
    RatFunc,
    assert_polynomial,
    big_phi_series,
    geometric_q,
    identity_series,
    phi_expansion,
    phi_series,
    shift_t_by_q,
    shifted_geometric_q,
    sum_to_laurent,
)
from src.utils.errors import PoleAtLatticePoint, ResidualPole, ZetaIsOne

SIGMA = Angle(1, 3)


def _t(exponent: int = 1) -> LaurentPoly:
    return LaurentPoly.monomial(exponent)


def _zeta(value, conductor: int = 6) -> CycloNumber:
    return root_of_unity(Angle.of(value), conductor)


def test_laurent_arithmetic():
    p = 1 + _t()
    assert p * p == 1 + 2 * _t() + _t(2)
    assert (p - p).is_zero()
    assert (_t(-1) * _t()).is_constant()


def test_ratfunc_reduces_common_factors():
    value = RatFunc(1 - _t(2), 1 - _t())
    assert value.is_polynomial()
    assert assert_polynomial(value) == 1 + _t()


def test_assert_polynomial_reports_residual_pole():
    with pytest.raises(ResidualPole):
        assert_polynomial(RatFunc(LaurentPoly.constant(1), 1 - _t()))


def test_geometric_q_positive_branch():
    series = geometric_q(1, SIGMA, 3, conductor=3)
    for s in range(4):
        assert series.coefficients[s] == root_of_unity(Angle(s, 3), 3)


def test_geometric_q_negative_branch():
    series = geometric_q(-1, SIGMA, 3, conductor=3)
    assert series.coefficients[0].is_zero()
    assert series.coefficients[1] == -root_of_unity(Angle(-1, 3), 3)
    assert series.coefficients[2] == -root_of_unity(Angle(-2, 3), 3)


def test_geometric_q_constant_branch():
    series = geometric_q(0, SIGMA, 2, conductor=3)
    value = series.coefficients[0]
    assert value * (1 - root_of_unity(SIGMA, 3)) == 1
    assert series.coefficients[1].is_zero()


def test_geometric_q_requires_zeta_not_one():
    with pytest.raises(ZetaIsOne):
        geometric_q(0, Angle(0), 2)


def test_shifted_geometric_q_with_zero_shift_is_geometric():
    assert shifted_geometric_q(2, Fraction(0), SIGMA, 4, 1, 3) == geometric_q(2, SIGMA, 4, 1, 3)


def test_shifted_geometric_q_fractional_start():
    # (ζq)^{1/2}/(1 − ζq) = ζ^{1/2} q^{1/2} + ζ^{3/2} q^{3/2} + …
    series = shifted_geometric_q(1, Fraction(1, 2), SIGMA, 3, 2, 6)
    assert series.coefficients[0].is_zero()
    assert series.coefficients[1] == _zeta(Fraction(1, 6))
    assert series.coefficients[3] == _zeta(Fraction(1, 2))


def test_big_phi_series_first_coefficients():
    conductor = 6
    series = big_phi_series(SIGMA, 2, 1, conductor)
    zeta = root_of_unity(SIGMA, conductor)
    lead = _zeta(Fraction(1, 6)) - _zeta(Fraction(-1, 6))
    assert series.coefficients[0] == lead
    assert series.coefficients[1] == lead * (2 - zeta - zeta.inverse())


def test_big_phi_series_rejects_trivial_sigma():
    with pytest.raises(ZetaIsOne):
        big_phi_series(Angle(0), 2)


def test_phi_expansion_pole_at_lattice_point():
    with pytest.raises(PoleAtLatticePoint):
        phi_expansion(ExpArg(m=0), SIGMA, 2)


def test_phi_expansion_leading_coefficient():
    # φ(z) em q^0 é ζ^{−1/2}(1 − ζt)/(1 − t)
    expansion = phi_expansion(ExpArg(m=1), SIGMA, 1, 1, 6)
    expected = RatFunc(1 - _t() * root_of_unity(SIGMA, 6), 1 - _t()) * _zeta(Fraction(-1, 6))
    assert expansion.prefactor == expected
    assert expansion.body.coefficients[0] == 1


def test_qseries_product_truncates():
    one_plus_q = QSeries.from_terms({0: CycloNumber.one(), 1: CycloNumber.one()}, 2)
    square = one_plus_q * one_plus_q
    assert [c == k for c, k in zip(square.coefficients, (1, 2, 1))] == [True, True, True]
    cube = one_plus_q ** 3
    assert cube.coefficients[2] == 3
    assert cube.order == 2


def test_regranulate_spreads_indices():
    series = QSeries.from_terms({1: CycloNumber.one()}, 2)
    fine = series.regranulate(3)
    assert fine.granularity == 3
    assert fine.coefficient(1) == 1
    assert fine.coefficients[3] == 1
    assert fine.order == 8


def test_shift_t_by_q_moves_terms():
    series = QSeries([_t(), _t(-1), LaurentPoly()], 1, LaurentPoly())
    shifted = shift_t_by_q(series)
    assert shifted.series.coefficients[0] == LaurentPoly()
    assert shifted.series.coefficients[1] == _t()
    assert shifted.backward.coefficients[0] == _t(-1)
    assert shifted.max_negative_exponent == 1
    assert shifted.reliable_order == 1


def test_shift_drops_backward_terms_from_forward_window():
    series = QSeries([LaurentPoly(), _t() + _t(-1), LaurentPoly()], 1, LaurentPoly())
    shifted = shift_t_by_q(series)
    assert shifted.series.coefficients == [LaurentPoly(), LaurentPoly(), _t()]
    assert shifted.backward.coefficients[0] == _t(-1)
    assert shifted.combined().coefficients[0] == _t(-1)
    assert shifted.reliable_order == 1


def test_shift_keeps_constant_series():
    series = QSeries([LaurentPoly.constant(2), LaurentPoly.constant(5)], 1, LaurentPoly())
    shifted = shift_t_by_q(series)
    assert shifted.series == series
    assert shifted.reliable_order == series.order


def test_sum_to_laurent_clears_denominators():
    body = identity_series(1, 1, LaurentPoly())
    terms = [
        (RatFunc(LaurentPoly.constant(1), 1 - _t()), body),
        (RatFunc(-_t(), 1 - _t()), body),
    ]
    total = sum_to_laurent(terms)
    assert total.coefficients[0] == 1
    assert total.coefficients[1].is_zero()


def test_sum_to_laurent_residual_pole():
    body = identity_series(0, 1, LaurentPoly())
    with pytest.raises(ResidualPole):
        sum_to_laurent([(RatFunc(LaurentPoly.constant(1), 1 - _t()), body)])


def test_phi_series_leading_coefficient():
    # q⁰: ζ^{−1/2} (1 − ζt)/(1 − t)
    zeta = _zeta(Fraction(1, 3))
    half_inv = _zeta(Fraction(-1, 6))
    num = (1 - LaurentPoly.monomial(1, zeta)) * half_inv
    den = 1 - LaurentPoly.monomial(1, CycloNumber.one(6))
    series = phi_series(ExpArg(1), SIGMA, 1, conductor=6)
    assert series.order == 1
    assert series.coefficients[0] == RatFunc(num, den)
