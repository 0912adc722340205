"""
Aritmética exata em corpos ciclotômicos ℚ(ζ_M).

Raízes da unidade são codificadas preferencialmente como ``Angle`` (um
racional módulo 1); ``CycloNumber`` guarda um elemento de ℚ(ζ_M) como
polinômio em ζ_M reduzido módulo o M-ésimo polinômio ciclotômico Φ_M.
As tabelas de redução são calculadas uma única vez por condutor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Sequence, Tuple, Union

import numpy as np
import sympy

from src.utils.errors import ConductorMismatch, CycloDivisionByZero

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Ângulos
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Angle:
    """
    Racional módulo 1, sempre reduzido com 0 ≤ numerator < denominator.

    Attributes
    ----------
    numerator : int
    denominator : int
    """

    numerator: int
    denominator: int = 1

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError("denominador de ângulo precisa ser positivo")
        value = Fraction(self.numerator, self.denominator)
        value -= value.numerator // value.denominator
        object.__setattr__(self, "numerator", value.numerator)
        object.__setattr__(self, "denominator", value.denominator)

    @classmethod
    def of(cls, value: Rational) -> "Angle":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Aceita ``"k/N"`` ou um inteiro."""
        return cls.of(Fraction(text.strip()))

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __add__(self, other: Union["Angle", Rational]) -> "Angle":
        other_value = other.value if isinstance(other, Angle) else Fraction(other)
        return Angle.of(self.value + other_value)

    def __sub__(self, other: Union["Angle", Rational]) -> "Angle":
        other_value = other.value if isinstance(other, Angle) else Fraction(other)
        return Angle.of(self.value - other_value)

    def __neg__(self) -> "Angle":
        return Angle.of(-self.value)

    def __mul__(self, factor: Rational) -> "Angle":
        return Angle.of(self.value * Fraction(factor))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def lcm(*values: int) -> int:
    result = 1
    for value in values:
        value = abs(int(value))
        if value:
            result = result * value // gcd(result, value)
    return result


# ---------------------------------------------------------------------------
# Tabelas por condutor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldTables:
    """
    Dados de redução de ℚ(ζ_M).

    Attributes
    ----------
    conductor : int
        M.
    degree : int
        φ(M) = grau de Φ_M.
    modulus : Tuple[int, ...]
        Coeficientes de Φ_M do grau 0 ao grau φ(M) (mônico).
    powers : Tuple[Tuple[int, ...], ...]
        ζ_M^j reduzido, para 0 ≤ j < M.
    """

    conductor: int
    degree: int
    modulus: Tuple[int, ...]
    powers: Tuple[Tuple[int, ...], ...]


@lru_cache(maxsize=None)
def field_tables(conductor: int) -> FieldTables:
    """Calcula (e memoriza) Φ_M e a redução das potências de ζ_M."""

    if conductor < 1:
        raise ConductorMismatch(f"condutor inválido {conductor}")
    x = sympy.Symbol("x")
    # all_coeffs devolve do maior para o menor grau
    modulus = tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(conductor, x), x).all_coeffs()))
    degree = len(modulus) - 1

    powers: List[Tuple[int, ...]] = []
    current = [1] + [0] * (degree - 1)
    for _ in range(conductor):
        powers.append(tuple(current))
        # multiplica por ζ e reduz o termo de grau `degree` usando Φ_M mônico
        shifted = [0] + current
        top = shifted[degree]
        current = [shifted[i] - top * modulus[i] for i in range(degree)]
    return FieldTables(conductor, degree, modulus, tuple(powers))


# ---------------------------------------------------------------------------
# Polinômios densos sobre ℚ (apenas para a inversão)
# ---------------------------------------------------------------------------


def _trim(poly: List[Fraction]) -> List[Fraction]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_divmod(num: List[Fraction], den: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    num = _trim(list(num))
    den = _trim(list(den))
    quotient = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        factor = num[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
        _trim(num)
    return _trim(quotient), num


def _poly_sub_mul(a: List[Fraction], q: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    # a − q·b
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        for j, y in enumerate(b):
            out[i + j] -= x * y
    return _trim(out)


@lru_cache(maxsize=4096)
def _inverse_coefficients(conductor: int, coefficients: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    tables = field_tables(conductor)
    modulus = [Fraction(c) for c in tables.modulus]
    r0, r1 = modulus, _trim([Fraction(c) for c in coefficients])
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    # Φ_M é irredutível: o mdc é uma constante não nula
    constant = r0[0]
    _, reduced = _poly_divmod([c / constant for c in s0], modulus)
    reduced = reduced + [Fraction(0)] * (tables.degree - len(reduced))
    return tuple(reduced)


# ---------------------------------------------------------------------------
# Números ciclotômicos
# ---------------------------------------------------------------------------


class CycloNumber:
    """
    Elemento de ℚ(ζ_M) na forma reduzida Σ c_j ζ_M^j, 0 ≤ j < φ(M).

    Operandos com condutores diferentes são levados ao mmc dos condutores
    antes da operação. A igualdade compara valores (após levar ao mmc), por
    isso instâncias não são hasheáveis.
    """

    __slots__ = ("conductor", "coefficients")

    def __init__(self, conductor: int, coefficients: Sequence[Rational]) -> None:
        tables = field_tables(conductor)
        coeffs = tuple(Fraction(c) for c in coefficients)
        if len(coeffs) != tables.degree:
            raise ConductorMismatch(
                f"esperados {tables.degree} coeficientes para M={conductor}"
            )
        self.conductor = conductor
        self.coefficients = coeffs

    # -- construtores -------------------------------------------------------

    @classmethod
    def rational(cls, value: Rational, conductor: int = 1) -> "CycloNumber":
        degree = field_tables(conductor).degree
        return cls(conductor, [Fraction(value)] + [Fraction(0)] * (degree - 1))

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycloNumber":
        return cls.rational(0, conductor)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycloNumber":
        return cls.rational(1, conductor)

    # -- consultas ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} não é racional")
        return self.coefficients[0]

    def to_complex(self) -> complex:
        """Sombra em ponto flutuante (apenas diagnóstico)."""
        exponents = np.arange(len(self.coefficients))
        roots = np.exp(2j * np.pi * exponents / self.conductor)
        weights = np.array([float(c) for c in self.coefficients])
        return complex(np.dot(weights, roots))

    # -- aritmética ----------------------------------------------------------

    def _coerce(self, other) -> Tuple["CycloNumber", "CycloNumber"]:
        if isinstance(other, (int, Fraction)):
            return self, CycloNumber.rational(other, self.conductor)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        if other.conductor == self.conductor:
            return self, other
        if self.is_rational() and self.conductor != other.conductor:
            return CycloNumber.rational(self.coefficients[0], other.conductor), other
        if other.is_rational():
            return self, CycloNumber.rational(other.coefficients[0], self.conductor)
        common = lcm(self.conductor, other.conductor)
        return lift_conductor(self, common), lift_conductor(other, common)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.conductor, [x + y for x, y in zip(a.coefficients, b.coefficients)])

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.conductor, [-x for x in self.coefficients])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return CycloNumber(a.conductor, [x - y for x, y in zip(a.coefficients, b.coefficients)])

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: Rational) -> "CycloNumber":
        factor = Fraction(factor)
        return CycloNumber(self.conductor, [factor * x for x in self.coefficients])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if b.is_rational():
            return a.scale(b.coefficients[0])
        if a.is_rational():
            return b.scale(a.coefficients[0])
        tables = field_tables(a.conductor)
        degree = tables.degree
        product_coeffs = [Fraction(0)] * (2 * degree - 1)
        for i, x in enumerate(a.coefficients):
            if x:
                for j, y in enumerate(b.coefficients):
                    if y:
                        product_coeffs[i + j] += x * y
        result = list(product_coeffs[:degree])
        for exponent in range(degree, len(product_coeffs)):
            c = product_coeffs[exponent]
            if c:
                for k, p in enumerate(tables.powers[exponent % tables.conductor]):
                    if p:
                        result[k] += c * p
        return CycloNumber(a.conductor, result)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise CycloDivisionByZero("inversão de zero em ℚ(ζ_M)", context=self.conductor)
        if self.is_rational():
            return CycloNumber.rational(1 / self.coefficients[0], self.conductor)
        return CycloNumber(self.conductor, _inverse_coefficients(self.conductor, self.coefficients))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycloDivisionByZero("divisão por zero", context=self)
            return self.scale(Fraction(1) / Fraction(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int) -> "CycloNumber":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloNumber.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coefficients[0] == other
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coefficients == b.coefficients

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycloNumber(M={self.conductor}, {self})"

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                power = "z" if j == 1 else f"z^{j}"
                coeff = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                terms.append(f"{coeff}{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Operações do módulo
# ---------------------------------------------------------------------------


def root_of_unity(angle: Union[Angle, Rational], conductor: int) -> CycloNumber:
    """
    ζ_M^{M·a} na forma reduzida.

    Raises
    ------
    ConductorMismatch
        Se o denominador do ângulo não dividir M.
    """

    if not isinstance(angle, Angle):
        angle = Angle.of(angle)
    if conductor % angle.denominator:
        raise ConductorMismatch(
            f"ângulo {angle} não cabe no condutor {conductor}", context=angle
        )
    tables = field_tables(conductor)
    exponent = angle.numerator * (conductor // angle.denominator)
    return CycloNumber(conductor, tables.powers[exponent])


def lift_conductor(value: CycloNumber, conductor: int) -> CycloNumber:
    """Mergulho canônico ℚ(ζ_M) ↪ ℚ(ζ_{M′}); exige M | M′."""

    if conductor % value.conductor:
        raise ConductorMismatch(
            f"{value.conductor} não divide {conductor}", context=value
        )
    if conductor == value.conductor:
        return value
    tables = field_tables(conductor)
    step = conductor // value.conductor
    result = [Fraction(0)] * tables.degree
    for j, c in enumerate(value.coefficients):
        if c:
            for k, p in enumerate(tables.powers[j * step]):
                if p:
                    result[k] += c * p
    return CycloNumber(conductor, result)


def restrict_conductor(value: CycloNumber, conductor: int) -> CycloNumber:
    """
    Inverso de ``lift_conductor`` quando o valor pertence ao corpo menor.

    Raises
    ------
    ConductorMismatch
        Se M não dividir o condutor atual ou o valor não estiver em ℚ(ζ_M).
    """

    from src.algebra.lattice import solve_rational
    from src.utils.errors import SingularInput

    if value.conductor % conductor:
        raise ConductorMismatch(f"{conductor} não divide {value.conductor}", context=value)
    small = field_tables(conductor)
    basis = [
        lift_conductor(CycloNumber(conductor, small.powers[j]), value.conductor).coefficients
        for j in range(small.degree)
    ]
    matrix = [[basis[j][i] for j in range(small.degree)] for i in range(len(value.coefficients))]
    try:
        coords = solve_rational(matrix, value.coefficients)
    except SingularInput as exc:
        raise ConductorMismatch(
            f"valor fora de ℚ(ζ_{conductor})", context=value
        ) from exc
    return CycloNumber(conductor, coords)


def common_conductor(values: Sequence[CycloNumber]) -> int:
    return lcm(*(v.conductor for v in values)) if values else 1
