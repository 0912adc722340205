"""
Séries truncadas em potências fracionárias de q.

Os coeficientes vivem em anéis plugáveis: números ciclotômicos, polinômios
de Laurent em uma variável t (o caractere ao longo de um vetor genérico) ou
frações racionais em t. Aqui também ficam os dois núcleos de expansão usados
pelo gênero elíptico: Φ(σ, τ) e φ(z, τ, σ).

Convenção de índices: uma ``QSeries`` de granularidade r̂ guarda o
coeficiente de q^{s/r̂} na posição s, para 0 ≤ s ≤ D.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.algebra.cyclotomic import Angle, CycloNumber, lcm, root_of_unity
from src.utils.errors import CycloDivisionByZero, PoleAtLatticePoint, ResidualPole, ZetaIsOne

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, CycloNumber]


def _as_cyclo(value: Scalar) -> CycloNumber:
    if isinstance(value, CycloNumber):
        return value
    return CycloNumber.rational(value)


# ---------------------------------------------------------------------------
# Polinômios de Laurent
# ---------------------------------------------------------------------------


class LaurentPoly:
    """
    Polinômio de Laurent Σ c_a t^a com coeficientes ciclotômicos.

    Nunca armazena coeficientes nulos; instâncias são tratadas como imutáveis.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[int, Scalar]] = None) -> None:
        cleaned: Dict[int, CycloNumber] = {}
        for exponent, coeff in (terms or {}).items():
            coeff = _as_cyclo(coeff)
            if not coeff.is_zero():
                cleaned[int(exponent)] = coeff
        self.terms = dict(sorted(cleaned.items()))

    @classmethod
    def constant(cls, value: Scalar) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    # -- consultas ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == 0 for e in self.terms)

    def coefficient(self, exponent: int) -> CycloNumber:
        return self.terms.get(exponent, CycloNumber.zero())

    @property
    def min_exponent(self) -> int:
        return next(iter(self.terms)) if self.terms else 0

    @property
    def max_exponent(self) -> int:
        return next(reversed(self.terms)) if self.terms else 0

    def nonconstant_terms(self) -> Dict[int, CycloNumber]:
        return {e: c for e, c in self.terms.items() if e != 0}

    # -- aritmética ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            if isinstance(other, CycloNumber) and other.is_zero() or other == 0:
                return LaurentPoly()
            return LaurentPoly({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        terms: Dict[int, CycloNumber] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = e1 + e2
                value = c1 * c2
                terms[key] = terms[key] + value if key in terms else value
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        result = LaurentPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiplica por t^k."""
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CycloNumber)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms.keys() == other.terms.keys() and all(
            self.terms[e] == other.terms[e] for e in self.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            power = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coeff = str(c)
            if power and coeff == "1":
                parts.append(power)
            elif power:
                parts.append(f"({coeff})*{power}")
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    # -- forma densa (expoentes ≥ 0) -----------------------------------------

    def to_dense(self) -> List[CycloNumber]:
        assert self.min_exponent >= 0
        dense = [CycloNumber.zero() for _ in range(self.max_exponent + 1)]
        for e, c in self.terms.items():
            dense[e] = c
        return dense

    @classmethod
    def from_dense(cls, coefficients: Sequence[CycloNumber], offset: int = 0) -> "LaurentPoly":
        return cls({i + offset: c for i, c in enumerate(coefficients)})


# ---------------------------------------------------------------------------
# Polinômios densos sobre ℚ(ζ_M): divisão e mdc
# ---------------------------------------------------------------------------


def _trim(poly: List[CycloNumber]) -> List[CycloNumber]:
    while poly and poly[-1].is_zero():
        poly.pop()
    return poly


def _dense_divmod(num: List[CycloNumber], den: List[CycloNumber]) -> Tuple[List[CycloNumber], List[CycloNumber]]:
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise CycloDivisionByZero("divisão polinomial por zero")
    lead_inv = den[-1].inverse()
    quotient = [CycloNumber.zero() for _ in range(max(len(num) - len(den) + 1, 0))]
    while len(num) >= len(den):
        shift = len(num) - len(den)
        factor = num[-1] * lead_inv
        quotient[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] = num[shift + i] - factor * c
        num.pop()
        _trim(num)
    return _trim(quotient), num


def _dense_gcd(a: List[CycloNumber], b: List[CycloNumber]) -> List[CycloNumber]:
    """mdc mônico pelo algoritmo de Euclides."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, remainder = _dense_divmod(a, b)
        a, b = b, remainder
    lead_inv = a[-1].inverse()
    return [c * lead_inv for c in a]


def _exact_quotient(num: List[CycloNumber], den: List[CycloNumber]) -> List[CycloNumber]:
    quotient, remainder = _dense_divmod(num, den)
    assert not remainder, "divisão que deveria ser exata deixou resto"
    return quotient


# ---------------------------------------------------------------------------
# Frações racionais em t
# ---------------------------------------------------------------------------


class RatFunc:
    """
    Fração num/den de polinômios de Laurent em forma canônica.

    O denominador tem menor expoente 0, coeficiente líder 1 e é primo com o
    numerador; a forma reduzida é única, o que torna a igualdade decidível.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LaurentPoly, Scalar], den: Union[LaurentPoly, Scalar, None] = None, *, reduced: bool = False) -> None:
        num = num if isinstance(num, LaurentPoly) else LaurentPoly.constant(num)
        den = LaurentPoly.constant(1) if den is None else den
        den = den if isinstance(den, LaurentPoly) else LaurentPoly.constant(den)
        if reduced:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize(num, den)

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(LaurentPoly(), reduced=True, den=LaurentPoly.constant(1))

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(LaurentPoly.constant(1), LaurentPoly.constant(1), reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            if self.is_polynomial():
                return RatFunc(self.num + other.num, self.den, reduced=True)
            return RatFunc(self.num + other.num, self.den)
        if other.is_polynomial():
            # mdc(a + c·b, b) = mdc(a, b) = 1
            return RatFunc(self.num + other.num * self.den, self.den, reduced=True)
        if self.is_polynomial():
            return RatFunc(other.num + self.num * other.den, other.den, reduced=True)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            if (other == 0) if not isinstance(other, CycloNumber) else other.is_zero():
                return RatFunc.zero()
            return RatFunc(self.num * other, self.den, reduced=True)
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFunc.zero()
        if self.is_polynomial() and other.is_polynomial():
            return RatFunc(self.num * other.num, self.den, reduced=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise CycloDivisionByZero("inversão de fração nula")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RatFunc(({self.num}) / ({self.den}))"


def _as_ratfunc(value):
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, LaurentPoly):
        return RatFunc(value, reduced=True)
    if isinstance(value, (int, Fraction, CycloNumber)):
        return RatFunc(LaurentPoly.constant(value), reduced=True)
    return NotImplemented


def _normalize(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise CycloDivisionByZero("denominador nulo")
    if num.is_zero():
        return LaurentPoly(), LaurentPoly.constant(1)

    # Menor expoente do denominador vira 0 e o líder vira 1
    offset = den.min_exponent
    den = den.shift(-offset)
    num = num.shift(-offset)
    lead = den.terms[den.max_exponent]
    if not lead == 1:
        lead_inv = lead.inverse()
        den = den * lead_inv
        num = num * lead_inv
    if den.is_constant():
        return num, den

    # t não divide den, logo mdc(num, den) = mdc(t^{-min}·num, den)
    num_offset = num.min_exponent
    dense_num = num.shift(-num_offset).to_dense()
    dense_den = den.to_dense()
    common = _dense_gcd(dense_num, dense_den)
    if len(common) > 1:
        num = LaurentPoly.from_dense(_exact_quotient(dense_num, common), num_offset)
        den = LaurentPoly.from_dense(_exact_quotient(dense_den, common))
    return num, den


def assert_polynomial(value: RatFunc) -> LaurentPoly:
    """
    Devolve o numerador quando o denominador reduzido é 1.

    Raises
    ------
    ResidualPole
        Com o denominador remanescente como contexto.
    """

    if isinstance(value, LaurentPoly):
        return value
    if value.is_polynomial():
        return value.num
    raise ResidualPole(f"polo residual: denominador {value.den}", context=value.den)


# ---------------------------------------------------------------------------
# Séries em q
# ---------------------------------------------------------------------------


def _is_zero(value) -> bool:
    return value.is_zero()


# Anéis de coeficientes em ordem crescente de generalidade
_RING_RANK = {CycloNumber: 0, LaurentPoly: 1, RatFunc: 2}


def _wider_zero(left, right):
    return left if _RING_RANK[type(left)] >= _RING_RANK[type(right)] else right


class QSeries:
    """
    Série truncada Σ_{s=0}^{D} c_s q^{s/r̂} + O(q^{(D+1)/r̂}).

    Attributes
    ----------
    coefficients : List
        c_0 … c_D, elementos de um anel com ``+``, ``*`` e ``is_zero()``.
    granularity : int
        r̂, o denominador comum dos expoentes de q.
    zero : object
        Zero do anel dos coeficientes.
    """

    __slots__ = ("coefficients", "granularity", "zero")

    def __init__(self, coefficients: Sequence, granularity: int = 1, zero=None) -> None:
        if granularity < 1:
            raise ValueError("granularidade precisa ser positiva")
        self.coefficients = list(coefficients)
        self.granularity = granularity
        self.zero = zero if zero is not None else CycloNumber.zero()

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], order: int, granularity: int = 1, zero=None) -> "QSeries":
        zero = zero if zero is not None else CycloNumber.zero()
        coeffs = [zero] * (order + 1)
        for index, value in terms.items():
            if 0 <= index <= order:
                coeffs[index] = coeffs[index] + value
        return cls(coeffs, granularity, zero)

    @classmethod
    def constant(cls, value, order: int, granularity: int = 1, zero=None) -> "QSeries":
        return cls.from_terms({0: value}, order, granularity, zero)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, exponent: Union[int, Fraction]):
        """Coeficiente de q^{exponent}."""
        index = Fraction(exponent) * self.granularity
        if index.denominator != 1 or not 0 <= index <= self.order:
            raise IndexError(f"q^{exponent} fora da série")
        return self.coefficients[int(index)]

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coefficients)

    def items(self) -> Iterable[Tuple[Fraction, object]]:
        """Pares (expoente de q, coeficiente) não nulos."""
        for s, c in enumerate(self.coefficients):
            if not _is_zero(c):
                yield Fraction(s, self.granularity), c

    def _check(self, other: "QSeries") -> int:
        if self.granularity != other.granularity:
            raise ValueError("granularidades diferentes; use regranulate")
        return min(self.order, other.order)

    def __add__(self, other: "QSeries") -> "QSeries":
        order = self._check(other)
        return QSeries(
            [self.coefficients[s] + other.coefficients[s] for s in range(order + 1)],
            self.granularity,
            self.zero,
        )

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coefficients], self.granularity, self.zero)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        order = self._check(other)
        result = [self.zero] * (order + 1)
        for i in range(order + 1):
            left = self.coefficients[i]
            if _is_zero(left):
                continue
            for j in range(order + 1 - i):
                right = other.coefficients[j]
                if not _is_zero(right):
                    result[i + j] = result[i + j] + left * right
        zero = _wider_zero(self.zero, other.zero)
        return QSeries([zero if _is_zero(c) else c for c in result], self.granularity, zero)

    def __pow__(self, exponent: int) -> "QSeries":
        result = identity_series(self.order, self.granularity, self.zero)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor) -> "QSeries":
        """Multiplica cada coeficiente por um elemento do anel."""
        zero = self.zero
        if isinstance(factor, (LaurentPoly, RatFunc)):
            zero = _wider_zero(self.zero, factor * 0)
        coeffs = [zero if _is_zero(c) else c * factor for c in self.coefficients]
        return QSeries(coeffs, self.granularity, zero)

    def shift(self, k: int) -> "QSeries":
        """Multiplica por q^{k/r̂} (k ≥ 0), mantendo a ordem de truncamento."""
        if k < 0:
            raise ValueError("deslocamentos negativos saem da janela")
        coeffs = [self.zero] * min(k, self.order + 1) + self.coefficients[: max(self.order + 1 - k, 0)]
        return QSeries(coeffs, self.granularity, self.zero)

    def map(self, function: Callable, zero=None) -> "QSeries":
        return QSeries([function(c) for c in self.coefficients], self.granularity, zero if zero is not None else function(self.zero))

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coefficients[: order + 1], self.granularity, self.zero)

    def regranulate(self, granularity: int) -> "QSeries":
        """Reescreve a série com granularidade múltipla da atual."""
        if granularity % self.granularity:
            raise ValueError("nova granularidade precisa ser múltipla da atual")
        factor = granularity // self.granularity
        order = (self.order + 1) * factor - 1
        coeffs = [self.zero] * (order + 1)
        for s, c in enumerate(self.coefficients):
            coeffs[s * factor] = c
        return QSeries(coeffs, granularity, self.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.granularity != other.granularity or self.order != other.order:
            return False
        return all(a == b for a, b in zip(self.coefficients, other.coefficients))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = [f"[{c}]q^{e}" for e, c in self.items()]
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{Fraction(self.order + 1, self.granularity)}))"


def identity_series(order: int, granularity: int, zero) -> QSeries:
    one = zero + 1 if not isinstance(zero, CycloNumber) else CycloNumber.one()
    return QSeries.constant(one, order, granularity, zero)


# ---------------------------------------------------------------------------
# Núcleos de expansão
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpArg:
    """
    Argumento e^{2πiz′} = ω · t^m · q^f de φ.

    Attributes
    ----------
    m : int
        Expoente de t.
    omega : Angle
        Fator raiz da unidade.
    f : Fraction
        Deslocamento fracionário em q, 0 ≤ f < 1.
    """

    m: int
    omega: Angle = Angle(0)
    f: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", Fraction(self.f))
        if not 0 <= self.f < 1:
            raise ValueError(f"deslocamento f={self.f} fora de [0, 1)")


def default_conductor(sigma: Angle, *angles: Angle) -> int:
    return lcm(2 * sigma.denominator, *(a.denominator for a in angles))


def _half(sigma: Angle, sign: int = 1) -> Angle:
    # ζ^{±1/2} usa o representante reduzido de σ em [0, 1)
    return Angle.of(sign * sigma.value / 2)


def _index(exponent: Fraction, granularity: int) -> int:
    index = Fraction(exponent) * granularity
    if index.denominator != 1:
        raise ValueError(f"q^{exponent} não cabe na granularidade {granularity}")
    return int(index)


def big_phi_series(sigma: Angle, order: int, granularity: int = 1, conductor: Optional[int] = None) -> QSeries:
    """
    Expansão truncada de Φ(σ, τ).

    Φ = (ζ^{1/2} − ζ^{−1/2}) · ∏_{k≥1} (1 − ζq^k)(1 − ζ^{−1}q^k) / (1 − q^k)².

    Parameters
    ----------
    sigma : Angle
        σ com ζ = e^{2πiσ}.
    order : int
        D, último índice guardado (em unidades de q^{1/r̂}).
    granularity : int, optional
        r̂.
    conductor : Optional[int], optional
        Condutor dos coeficientes; por padrão 2·den(σ).

    Raises
    ------
    ZetaIsOne
        Se σ ≡ 0.
    """

    if sigma.is_zero():
        raise ZetaIsOne("Φ(0, τ) = 0")
    conductor = conductor or default_conductor(sigma)
    zeta = root_of_unity(sigma, conductor)
    zeta_inv = root_of_unity(-sigma, conductor)
    lead = root_of_unity(_half(sigma), conductor) - root_of_unity(_half(sigma, -1), conductor)

    series = QSeries.constant(lead, order, granularity)
    k = 1
    while k * granularity <= order:
        step = k * granularity
        numerator = QSeries.from_terms(
            {0: CycloNumber.one(), step: -(zeta + zeta_inv), 2 * step: CycloNumber.one()},
            order,
            granularity,
        )
        inverse_square = QSeries.from_terms(
            {j * step: CycloNumber.rational(j + 1) for j in range(order // step + 1)},
            order,
            granularity,
        )
        series = series * numerator * inverse_square
        k += 1
    return series


def geometric_q(m: int, sigma: Angle, order: int, granularity: int = 1, conductor: Optional[int] = None) -> QSeries:
    """
    Expansão de 1/(1 − ζq^m) com a regra de ramos usual.

    m > 0 → Σ_{s≥0} ζ^s q^{sm}; m < 0 → −Σ_{s≥1} ζ^{−s} q^{−sm};
    m = 0 → a constante 1/(1 − ζ).
    """

    return shifted_geometric_q(m, Fraction(0), sigma, order, granularity, conductor)


def shifted_geometric_q(
    m: int,
    f: Fraction,
    sigma: Angle,
    order: int,
    granularity: int = 1,
    conductor: Optional[int] = None,
) -> QSeries:
    """
    Expansão de (ζq^m)^f / (1 − ζq^m) para 0 ≤ f < 1.

    Com f = 0 coincide com ``geometric_q``. Para m < 0 usa-se
    (ζq^m)^f/(1 − ζq^m) = −ζ^{f−1} q^{m(f−1)} / (1 − ζ^{−1}q^{−m}).

    Raises
    ------
    ZetaIsOne
        Se m = 0 e σ ≡ 0.
    """

    f = Fraction(f)
    conductor = conductor or lcm(sigma.denominator, (sigma * f).denominator)
    terms: Dict[int, CycloNumber] = {}
    if m == 0:
        if sigma.is_zero():
            raise ZetaIsOne("1/(1 − ζ) com ζ = 1")
        value = root_of_unity(sigma * f, conductor) / (1 - root_of_unity(sigma, conductor))
        return QSeries.constant(value, order, granularity)
    if m > 0:
        start = _index(m * f, granularity)
        s = 0
        while start + s * m * granularity <= order:
            terms[start + s * m * granularity] = root_of_unity(sigma * (f + s), conductor)
            s += 1
    else:
        start = _index(m * (f - 1), granularity)
        s = 0
        while start + s * (-m) * granularity <= order:
            terms[start + s * (-m) * granularity] = -root_of_unity(sigma * (f - 1 - s), conductor)
            s += 1
    return QSeries.from_terms(terms, order, granularity)


@dataclass
class PhiExpansion:
    """
    φ fatorado como ``prefactor · body``.

    ``prefactor`` é a fração racional independente de q (o fator k = 0
    quando f = 0, vezes ζ^{−1/2}); ``body`` é uma série cujos coeficientes
    são polinômios de Laurent.
    """

    prefactor: RatFunc
    body: QSeries

    def series(self) -> QSeries:
        return self.body.scale(self.prefactor)


def _geometric_factor(m: int, omega: CycloNumber, coeff: CycloNumber, step: int, order: int, granularity: int) -> QSeries:
    # 1 + coeff · Σ_{j≥1} (ω t^m)^j q^{j·step}
    terms: Dict[int, LaurentPoly] = {0: LaurentPoly.constant(1)}
    power = CycloNumber.one()
    j = 1
    while j * step <= order:
        power = power * omega
        terms[j * step] = LaurentPoly.monomial(j * m, coeff * power)
        j += 1
    return QSeries.from_terms(terms, order, granularity, LaurentPoly())


def phi_expansion(
    arg: ExpArg,
    sigma: Angle,
    order: int,
    granularity: int = 1,
    conductor: Optional[int] = None,
) -> PhiExpansion:
    """
    Expande φ(z′, τ, σ) com e^{2πiz′} = ω t^m q^f.

    φ = ζ^{−1/2} (1 − ζx)/(1 − x) ∏_{k≥1} (1 − ζxq^k)(1 − ζ^{−1}x^{−1}q^k) /
    ((1 − xq^k)(1 − x^{−1}q^k)), com x = ω t^m q^f. Quando f > 0 o fator
    k = 0 também é expandido geometricamente em q^f e não sobra polo em t.

    Raises
    ------
    PoleAtLatticePoint
        Para m = 0, ω = 0 e f = 0.
    """

    if arg.m == 0 and arg.f == 0 and arg.omega.is_zero():
        raise PoleAtLatticePoint("φ tem polo em z′ ∈ ℤ", context=arg)
    if sigma.is_zero():
        raise ZetaIsOne("φ com ζ = 1")
    conductor = conductor or default_conductor(sigma, arg.omega)
    zeta = root_of_unity(sigma, conductor)
    zeta_inv = root_of_unity(-sigma, conductor)
    omega = root_of_unity(arg.omega, conductor)
    omega_inv = root_of_unity(-arg.omega, conductor)
    half_inv = root_of_unity(_half(sigma, -1), conductor)

    x_monomial = LaurentPoly.monomial(arg.m, omega)
    if arg.f == 0:
        prefactor = RatFunc(x_monomial * (-zeta) + 1, 1 - x_monomial) * half_inv
        forward = [k * granularity for k in range(1, order // granularity + 1)]
        backward = list(forward)
    else:
        prefactor = RatFunc(LaurentPoly.constant(half_inv), reduced=True)
        forward = []
        k = 0
        while _index(k + arg.f, granularity) <= order:
            forward.append(_index(k + arg.f, granularity))
            k += 1
        backward = []
        k = 1
        while _index(k - arg.f, granularity) <= order:
            backward.append(_index(k - arg.f, granularity))
            k += 1

    body = identity_series(order, granularity, LaurentPoly())
    for step in forward:
        body = body * _geometric_factor(arg.m, omega, 1 - zeta, step, order, granularity)
    for step in backward:
        body = body * _geometric_factor(-arg.m, omega_inv, 1 - zeta_inv, step, order, granularity)
    return PhiExpansion(prefactor=prefactor, body=body)


def phi_series(
    arg: ExpArg,
    sigma: Angle,
    order: int,
    granularity: int = 1,
    conductor: Optional[int] = None,
) -> QSeries:
    """Série de φ com coeficientes em frações racionais de t."""
    return phi_expansion(arg, sigma, order, granularity, conductor).series()


@dataclass
class ShiftResult:
    """
    Resultado de t ↦ tq.

    Attributes
    ----------
    series : QSeries
        Parte para a frente: imagens dos termos t^a com a ≥ 0 (índices acima
        de D descartados).
    backward : QSeries
        Imagens dos termos t^a com a < 0, separadas porque recuam para
        índices cuja soma completa dependeria de ordens acima de D.
    max_abs_exponent : int
        Maior |a| entre os monômios t^a vistos.
    max_negative_exponent : int
        Maior |a| entre expoentes negativos; índices acima de
        D − max_negative_exponent·r̂ podem estar incompletos.
    """

    series: QSeries
    backward: QSeries
    max_abs_exponent: int
    max_negative_exponent: int

    @property
    def reliable_order(self) -> int:
        return self.series.order - self.max_negative_exponent * self.series.granularity

    def combined(self) -> QSeries:
        """Soma das duas partes; exata só até ``reliable_order``."""
        return self.series + self.backward


def shift_t_by_q(series: QSeries) -> ShiftResult:
    """
    Aplica t^a q^{s/r̂} ↦ t^a q^{s/r̂ + a} a uma série de polinômios de Laurent.

    Termos com a < 0 vão para ``backward`` e não para ``series``: assim
    (t + t⁻¹)q com D = 2 vira t q² e o termo t⁻¹ q⁰ fica sinalizado à parte.
    """

    order, granularity = series.order, series.granularity
    forward: Dict[int, Dict[int, CycloNumber]] = {}
    backward: Dict[int, Dict[int, CycloNumber]] = {}
    max_abs = 0
    max_negative = 0
    for s, poly in enumerate(series.coefficients):
        for a, coeff in poly.terms.items():
            max_abs = max(max_abs, abs(a))
            if a < 0:
                max_negative = max(max_negative, -a)
            target = s + a * granularity
            if 0 <= target <= order:
                bucket = (backward if a < 0 else forward).setdefault(target, {})
                bucket[a] = bucket[a] + coeff if a in bucket else coeff

    def _collect(buckets: Dict[int, Dict[int, CycloNumber]]) -> QSeries:
        coeffs = [LaurentPoly(buckets.get(s, {})) for s in range(order + 1)]
        return QSeries(coeffs, granularity, LaurentPoly())

    return ShiftResult(_collect(forward), _collect(backward), max_abs, max_negative)


def _dense_lcm(left: List[CycloNumber], right: List[CycloNumber]) -> List[CycloNumber]:
    common = _dense_gcd(left, right)
    return _trim(_dense_product(_exact_quotient(left, common), right))


def _dense_product(left: List[CycloNumber], right: List[CycloNumber]) -> List[CycloNumber]:
    if not left or not right:
        return []
    out = [CycloNumber.zero() for _ in range(len(left) + len(right) - 1)]
    for i, a in enumerate(left):
        if a.is_zero():
            continue
        for j, b in enumerate(right):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return out


def sum_to_laurent(terms: Sequence[Tuple[RatFunc, QSeries]]) -> QSeries:
    """
    Soma Σ prefator_T · corpo_T exigindo coeficientes polinomiais.

    Todas as parcelas são levadas ao mmc dos denominadores de uma só vez;
    cada coeficiente de q é então dividido exatamente por esse mmc.

    Parameters
    ----------
    terms : Sequence[Tuple[RatFunc, QSeries]]
        Pares (fração independente de q, série de polinômios de Laurent) com
        mesma granularidade e ordem.

    Returns
    -------
    QSeries
        Série cujos coeficientes são ``LaurentPoly``.

    Raises
    ------
    ResidualPole
        Se algum coeficiente não for divisível pelo denominador comum.
    """

    if not terms:
        raise ValueError("nenhuma parcela para somar")
    order = min(body.order for _, body in terms)
    granularity = terms[0][1].granularity

    common = [CycloNumber.one()]
    for prefactor, _ in terms:
        if not prefactor.is_polynomial():
            common = _dense_lcm(common, prefactor.den.to_dense())
    logger.debug("denominador comum de grau %d para %d parcelas", len(common) - 1, len(terms))

    cofactors = []
    for prefactor, _ in terms:
        scale = LaurentPoly.from_dense(_exact_quotient(common, prefactor.den.to_dense()))
        cofactors.append(prefactor.num * scale)

    denominator = LaurentPoly.from_dense(common)
    coefficients = []
    for s in range(order + 1):
        numerator = LaurentPoly()
        for cofactor, (_, body) in zip(cofactors, terms):
            value = body.coefficients[s]
            if not value.is_zero():
                numerator = numerator + cofactor * value
        if len(common) == 1 or numerator.is_zero():
            coefficients.append(numerator)
            continue
        offset = numerator.min_exponent
        quotient, remainder = _dense_divmod(numerator.shift(-offset).to_dense(), common)
        if remainder:
            raise ResidualPole(
                f"coeficiente de q^{Fraction(s, granularity)} com polo residual",
                context=denominator,
            )
        coefficients.append(LaurentPoly.from_dense(quotient, offset))
    return QSeries(coefficients, granularity, LaurentPoly())
