"""
Multipolitopos e a função de Duistermaat-Heckman.

Dado x = Σ c_i x_i em H_T²(Δ_K), o multipolitopo 𝒫_K é formado pelos
hiperplanos F_i = {u : ⟨u, v_i⟩ = c_i} dentro do espaço afim
A* = {u : ⟨u, v_i⟩ = c_i para i ∈ K}. A soma da função DH de 𝒫_{K+} sobre os
pontos de L* coincide com uma soma de pontos fixos de frações racionais;
este módulo calcula os dois lados de forma independente.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from src.algebra.cyclotomic import root_of_unity
from src.algebra.lattice import Covector, Vector, chi_angle, contains, pairing
from src.algebra.series import LaurentPoly, QSeries, RatFunc, sum_to_laurent
from src.fans.multifan import (
    EquivCohClass,
    Key,
    MultiFan,
    check_generic,
    generic_vectors,
    is_generic,
    is_injective_on,
    lattice_L_V,
    window_points,
)
from src.utils.errors import (
    InvalidFan,
    KeyNotInSigma,
    NonIntegralOffsets,
    NotGeneric,
    OutsideAffineSpace,
    PointOnWall,
    PropertyViolation,
    WindowNotInjective,
    WindowTooSmall,
)

logger = logging.getLogger(__name__)

# Deslocamento ε de 𝒫_{K+}; qualquer 0 < ε < 1 produz a mesma função nos pontos inteiros
DH_EPSILON = Fraction(1, 2)


@dataclass(frozen=True)
class MultiPolytope:
    """
    Multipolitopo 𝒫_K = (Δ_K, ℱ_K).

    Attributes
    ----------
    fan : MultiFan
        O multi-leque Δ (a projeção Δ_K fica implícita na chave).
    key : Key
        A face K.
    offsets : Dict[int, Fraction]
        c_i para i ∈ K ∪ Σ′_K^{(1)}, exatamente esses índices.
    """

    fan: MultiFan
    key: Key
    offsets: Dict[int, Fraction]

    def __post_init__(self) -> None:
        key = tuple(sorted(self.key))
        if not self.fan.has_cone(key):
            raise KeyNotInSigma(f"{key} não pertence a Σ", context=key)
        expected = set(key) | set(self.fan.link_rays(key))
        offsets = {int(i): Fraction(c) for i, c in self.offsets.items()}
        if set(offsets) != expected:
            raise InvalidFan(
                f"deslocamentos esperados para {sorted(expected)}, recebidos {sorted(offsets)}",
                context=key,
            )
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "offsets", dict(sorted(offsets.items())))

    @classmethod
    def from_class(cls, fan: MultiFan, x: EquivCohClass, key: Sequence[int] = ()) -> "MultiPolytope":
        """Multipolitopo associado à imagem de x em H_T²(Δ_K)."""
        key = tuple(sorted(key))
        indices = set(key) | set(fan.link_rays(key))
        return cls(fan, key, {i: x.coefficients[i] for i in indices})

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.offsets.values())

    def shifted(self, epsilon: Fraction = DH_EPSILON) -> "MultiPolytope":
        """𝒫_{K+}: soma ε aos deslocamentos dos raios do link."""
        return MultiPolytope(
            self.fan,
            self.key,
            {i: c + (0 if i in self.key else epsilon) for i, c in self.offsets.items()},
        )

    def vertex(self, simplex: Key) -> Covector:
        """u_I = Σ_{i ∈ I} c_i u_i^I, o vértice de C_K*(I)⁺."""
        if not set(self.key).issubset(simplex):
            raise KeyNotInSigma(f"{simplex} não contém {self.key}", context=simplex)
        total = [Fraction(0)] * self.fan.rank
        for i, u in self.fan.dual(simplex).items():
            total = [t + self.offsets[i] * x for t, x in zip(total, u)]
        return tuple(total)

    def in_affine_space(self, point: Sequence) -> bool:
        return all(pairing(point, self.fan.rays[i]) == self.offsets[i] for i in self.key)


def dh_value(polytope: MultiPolytope, point: Sequence, vector: Sequence) -> int:
    """
    DHF_{𝒫_K}(u) = Σ_{I ⊇ K} (−1)^I w(I) φ_I(u).

    (−1)^I conta os i ∈ I∖K com ⟨u_i^I, v⟩ > 0 e φ_I é a função
    característica do cone de ápice u_I gerado pelos (u_i^I)⁺. Nas
    coordenadas duais a pertinência é sinal_i · (⟨u, v_i⟩ − c_i) > 0.

    Parameters
    ----------
    polytope : MultiPolytope
    point : Sequence
        Ponto u de A* fora de todos os F_i.
    vector : Sequence
        Vetor genérico para Δ_K.

    Raises
    ------
    OutsideAffineSpace
    PointOnWall
    NotGeneric
    """

    fan, key = polytope.fan, polytope.key
    if not polytope.in_affine_space(point):
        raise OutsideAffineSpace(f"{tuple(point)} fora de A*", context=tuple(point))
    check_generic(fan, vector, key)

    heights = {}
    for i in fan.link_rays(key):
        height = Fraction(pairing(point, fan.rays[i])) - polytope.offsets[i]
        if height == 0:
            raise PointOnWall(f"{tuple(point)} está sobre F_{i}", context=i)
        heights[i] = height

    total = 0
    for simplex in fan.star(key):
        pairs = fan.pairings(simplex, vector)
        positive = 0
        inside = True
        for i in simplex:
            if i in key:
                continue
            sign = 1 if pairs[i] > 0 else -1
            positive += sign > 0
            inside = inside and sign * heights[i] > 0
        if inside:
            total += (-1) ** positive * fan.weight(simplex)
    return total


def polytope_window(polytope: MultiPolytope, bound: int) -> List[Vector]:
    """Pontos de A* ∩ L* na caixa [−B, B]^n."""
    return [p for p in window_points(bound, polytope.fan.rank) if polytope.in_affine_space(p)]


def dh_character(
    polytope: MultiPolytope,
    window: Sequence[Sequence[int]],
    vector: Optional[Sequence] = None,
) -> Dict[Vector, int]:
    """
    Caractere Σ_u DHF_{𝒫_{K+}}(u) t^u restrito à janela (entradas não nulas).

    ``polytope`` é o multipolitopo original; o deslocamento ε é aplicado aqui.
    """

    if not polytope.is_integral:
        raise NonIntegralOffsets("os c_i precisam ser inteiros", context=polytope.offsets)
    shifted = polytope.shifted()
    if vector is None:
        vector = generic_vectors(polytope.fan, 1, key=polytope.key)[0]
    character = {}
    for point in window:
        point = tuple(point)
        if not polytope.in_affine_space(point):
            continue
        value = dh_value(shifted, point, vector)
        if value:
            character[point] = value
    return character


def _independent(first: Sequence, second: Sequence) -> bool:
    return any(
        first[i] * second[j] != first[j] * second[i]
        for i in range(len(first))
        for j in range(i + 1, len(first))
    )


def kronecker_pair(fan: MultiFan, key: Key = ()) -> Tuple[Vector, Vector]:
    """
    Dois vetores genéricos linearmente independentes para I ⊇ K.

    Raises
    ------
    NotGeneric
        Se nenhum par independente aparecer entre os primeiros candidatos.
    """

    if fan.rank < 2:
        raise NotGeneric("par de Kronecker exige posto ao menos 2", context=fan.rank)
    first = generic_vectors(fan, 1, key=key)[0]
    for count in range(2, 2 ** fan.rank + 3):
        second = generic_vectors(fan, count, key=key)[-1]
        if _independent(first, second):
            return first, second
    raise NotGeneric(f"nenhum vetor independente de {first}", context=first)


def kronecker_vector(
    fan: MultiFan, window: Sequence[Sequence[int]], key: Key = ()
) -> Vector:
    """
    v = v₁ + K·v₂ com K maior que o dobro da amplitude de ⟨·, v₁⟩ na janela.

    v₁ e v₂ são independentes, então a substituição t₂ = t₁^K separa os
    monômios da janela sempre que ⟨·, v₂⟩ os distingue. Cada funcional de
    I ⊇ K anula v para no máximo um K; esgotadas essas tentativas (ou em
    posto 1, ou quando v₂ não distingue dois pontos) a busca recai em
    ``generic_vectors`` restrita à janela.
    """

    if fan.rank < 2:
        return generic_vectors(fan, 1, window=window, key=key)[0]
    first, second = kronecker_pair(fan, key)
    values = [pairing(p, first) for p in window] or [0]
    factor = 2 * (max(values) - min(values)) + 1
    attempts = sum(len(simplex) for simplex in fan.star(key)) + 1
    for K in range(factor, factor + attempts):
        candidate = tuple(a + K * b for a, b in zip(first, second))
        if is_generic(fan, candidate, key) and is_injective_on(candidate, window):
            logger.debug("vetor de Kronecker %s (K=%d)", candidate, K)
            return candidate
    logger.debug("Kronecker falhou para %s e %s; busca direta na janela", first, second)
    return generic_vectors(fan, 1, window=window, key=key)[0]


def fixed_point_character(
    polytope: MultiPolytope,
    window: Sequence[Sequence[int]],
    vector: Optional[Sequence[int]] = None,
) -> Dict[Vector, int]:
    """
    Lado de pontos fixos especializado ao longo de v e lido na janela.

    Σ_{I ⊇ K} w(I)/|H_I| Σ_h χ(u_I, h) t^{⟨u_I, v⟩} /
    ∏_{i ∈ I∖K} (1 − χ(u_i^I, h)^{−1} t^{−⟨u_i^I, v⟩})

    é somado como fração racional exata em t; o resultado precisa ser um
    polinômio de Laurent com coeficientes inteiros, e cada expoente é
    devolvido ao único ponto da janela com ⟨u, v⟩ igual a ele.

    Raises
    ------
    NonIntegralOffsets
    NotGeneric
        Se o vetor informado não for genérico ou não estiver em L_𝒱.
    WindowNotInjective
        Se o vetor informado não separar os pontos da janela.
    WindowTooSmall
        Se algum expoente não vier de ponto da janela.
    """

    if not polytope.is_integral:
        raise NonIntegralOffsets("os c_i precisam ser inteiros", context=polytope.offsets)
    fan, key = polytope.fan, polytope.key
    points = [tuple(p) for p in window if polytope.in_affine_space(p)]
    if vector is None:
        vector = kronecker_vector(fan, points, key)
    else:
        vector = tuple(int(x) for x in vector)
        check_generic(fan, vector, key)
        if not contains(lattice_L_V(fan), vector):
            raise NotGeneric(f"vetor {vector} fora de L_V", context=vector)
        if not is_injective_on(vector, points):
            raise WindowNotInjective(f"{vector} não separa a janela", context=vector)

    conductor = fan.isotropy_lcm
    unit = QSeries.constant(LaurentPoly.constant(1), 0, zero=LaurentPoly())
    terms: List[Tuple[RatFunc, QSeries]] = []
    for simplex in fan.star(key):
        group = fan.group(simplex)
        weight = Fraction(fan.weight(simplex), group.order)
        if weight == 0:
            continue
        duals = fan.dual(simplex)
        apex = polytope.vertex(simplex)
        exponent = Fraction(pairing(apex, vector))
        if exponent.denominator != 1:
            raise PropertyViolation(f"⟨u_I, v⟩ não inteiro para I={simplex}", context=simplex)
        for element in group.elements():
            rep = group.representative(element)
            numerator = LaurentPoly.monomial(
                int(exponent), root_of_unity(chi_angle(apex, rep), conductor).scale(weight)
            )
            denominator = LaurentPoly.constant(1)
            for i in simplex:
                if i in key:
                    continue
                m = -int(pairing(duals[i], vector))
                omega = root_of_unity(-chi_angle(duals[i], rep), conductor)
                denominator = denominator * (1 - LaurentPoly.monomial(m, omega))
            terms.append((RatFunc(numerator, denominator), unit))
    logger.debug("%d parcelas de pontos fixos para K=%s", len(terms), key)
    if not terms:
        return {}
    total = sum_to_laurent(terms).coefficients[0]

    by_exponent = {pairing(p, vector): p for p in points}
    character = {}
    for e, coeff in total.terms.items():
        if not coeff.is_rational() or coeff.rational_value().denominator != 1:
            raise PropertyViolation(f"coeficiente não inteiro em t^{e}: {coeff}", context=e)
        if e not in by_exponent:
            raise WindowTooSmall(f"expoente t^{e} fora da janela", context=e)
        character[by_exponent[e]] = int(coeff.rational_value())
    return character
