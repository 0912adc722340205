"""
Gêneros de multi-leques completos.

Reúne o gênero T_y (pelas duas fórmulas combinatórias), Todd e assinatura,
e os gêneros elípticos equivariantes φ^v e φ̂^v especializados ao longo de
um vetor genérico v ∈ L_𝒱. As séries são somadas como frações racionais
exatas em t e cada coeficiente de q é certificado como polinômio de
Laurent; um polo residual indica erro de implementação.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import Angle, CycloNumber, lcm, root_of_unity
from src.algebra.lattice import Vector, chi_angle, columns_matrix, solve_rational
from src.algebra.series import (
    ExpArg,
    LaurentPoly,
    QSeries,
    RatFunc,
    identity_series,
    phi_expansion,
    sum_to_laurent,
)
from src.fans.chern import check_lattice_vector
from src.fans.multifan import Key, MultiFan, e_vector, generic_vectors, h_vector, is_complete
from src.utils.errors import NotComplete, PropertyViolation

logger = logging.getLogger(__name__)

# Ordem padrão de truncamento em q (ordens inteiras)
DEFAULT_QORDER = 3


# ---------------------------------------------------------------------------
# Gênero T_y
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TyPolynomial:
    """
    T_y[Δ] = Σ_k c_k (−y)^k.

    Attributes
    ----------
    coefficients : Tuple[int, ...]
        c_0 … c_n, coeficientes em potências de (−y).
    """

    coefficients: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def in_y(self) -> Tuple[int, ...]:
        """Coeficientes em potências de y."""
        return tuple(c * (-1) ** k for k, c in enumerate(self.coefficients))

    def evaluate(self, y: Fraction) -> Fraction:
        return sum((Fraction(c) * (-Fraction(y)) ** k for k, c in enumerate(self.coefficients)), Fraction(0))

    def is_palindromic(self) -> bool:
        return self.coefficients == tuple(reversed(self.coefficients))

    def __str__(self) -> str:
        parts: List[str] = []
        for k, c in enumerate(self.in_y()):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = str(magnitude)
            else:
                power = "y" if k == 1 else f"y^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            parts.append(f"{sign} {body}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _require_complete(fan: MultiFan) -> None:
    if not is_complete(fan):
        raise NotComplete(f"{fan.name or 'Δ'} não é completo", context=fan.name)


def ty_genus(fan: MultiFan, method: str = "h") -> TyPolynomial:
    """
    Gênero T_y de um multi-leque completo.

    Parameters
    ----------
    fan : MultiFan
    method : str, optional
        ``"h"`` usa Σ h_k (−y)^k; ``"e"`` usa Σ e_k (−1 − y)^{n−k}.

    Raises
    ------
    NotComplete
    ValueError
        Para um método desconhecido.
    """

    _require_complete(fan)
    n = fan.rank
    if method == "h":
        return TyPolynomial(tuple(h_vector(fan)))
    if method != "e":
        raise ValueError(f"método desconhecido: {method!r}")

    # Com x = −y: (−1 − y)^{n−k} = (x − 1)^{n−k}
    e = e_vector(fan)
    coefficients = [0] * (n + 1)
    for k, ek in enumerate(e):
        power = n - k
        for j in range(power + 1):
            coefficients[j] += ek * comb(power, j) * (-1) ** (power - j)
    return TyPolynomial(tuple(coefficients))


def todd(fan: MultiFan) -> int:
    """T_0[Δ], que coincide com deg(Δ)."""
    return ty_genus(fan).coefficients[0]


def signature(fan: MultiFan) -> int:
    """T_1[Δ] = Σ h_k (−1)^k."""
    return sum(c * (-1) ** k for k, c in enumerate(ty_genus(fan).coefficients))


def ty_at_root(ty: TyPolynomial, angle: Angle, conductor: Optional[int] = None) -> CycloNumber:
    """Avalia T_y em −y = e^{2πi·angle} no corpo ciclotômico."""
    conductor = conductor or angle.denominator
    x = root_of_unity(angle, conductor)
    total = CycloNumber.zero(conductor)
    power = CycloNumber.one(conductor)
    for c in ty.coefficients:
        total = total + power.scale(Fraction(c))
        power = power * x
    return total


# ---------------------------------------------------------------------------
# Gêneros elípticos ao longo de v
# ---------------------------------------------------------------------------


def genus_conductor(fan: MultiFan, sigma: Angle) -> int:
    """M = 2·den(σ)·r com r = mmc |H_I|."""
    return 2 * sigma.denominator * fan.isotropy_lcm


@dataclass(frozen=True)
class GenusConfig:
    """
    Parâmetros de uma série de gênero.

    Attributes
    ----------
    sigma : Angle
        σ com ζ = e^{2πiσ}; σ ≢ 0.
    qorder : int
        Última potência inteira de q mantida.
    normalized : bool
        Multiplica por ζ^{n/2}.
    vector : Optional[Vector]
        Vetor genérico explícito; ``None`` escolhe o primeiro da busca.
    """

    sigma: Angle
    qorder: int = DEFAULT_QORDER
    normalized: bool = True
    vector: Optional[Vector] = None

    def __post_init__(self) -> None:
        if self.qorder < 0:
            raise ValueError("a ordem em q precisa ser não negativa")
        if self.vector is not None:
            object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))


@dataclass(frozen=True)
class GenusSeries:
    """
    Série Σ_s φ_s(t) q^{s/r̂} de um gênero elíptico especializado.

    Attributes
    ----------
    series : QSeries
        Coeficientes ``LaurentPoly`` em t, já certificados.
    kind : str
        ``"elliptic"`` ou ``"orbifold"``.
    sigma : Angle
    vector : Vector
    qorder : int
    granularity : int
        r̂; 1 para φ^v.
    conductor : int
        M dos coeficientes.
    normalized : bool
    """

    series: QSeries
    kind: str
    sigma: Angle
    vector: Vector
    qorder: int
    granularity: int
    conductor: int
    normalized: bool

    def coefficient(self, exponent) -> LaurentPoly:
        return self.series.coefficient(exponent)

    def is_zero(self) -> bool:
        return self.series.is_zero()

    def is_constant(self) -> bool:
        return all(poly.is_constant() for poly in self.series.coefficients)

    def constant_part(self) -> QSeries:
        """Coeficientes de t⁰, como série sobre ℚ(ζ_M)."""
        zero = CycloNumber.zero(self.conductor)
        return self.series.map(lambda poly: poly.coefficient(0), zero=zero)


def _prepare(fan: MultiFan, vector: Optional[Sequence[int]]) -> Vector:
    _require_complete(fan)
    if vector is None:
        return generic_vectors(fan, 1)[0]
    return check_lattice_vector(fan, vector)


def _normalize(series: QSeries, fan: MultiFan, sigma: Angle, conductor: int) -> QSeries:
    factor = root_of_unity(Angle.of(fan.rank * sigma.value / 2), conductor)
    return series.map(lambda poly: poly * factor, zero=LaurentPoly())


def elliptic_genus_v(
    fan: MultiFan,
    vector: Optional[Sequence[int]],
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    normalized: bool = True,
) -> GenusSeries:
    """
    Gênero elíptico φ^v ao longo de um vetor genérico.

    Σ_I w(I)/|H_I| Σ_{h ∈ H_I} ∏_{i ∈ I} φ(⟨u_i^I, −zv − v(h)⟩, τ, σ), com
    cada φ de argumento t^{−⟨u_i^I, v⟩}·χ(u_i^I, h)^{−1}.

    Parameters
    ----------
    fan : MultiFan
    vector : Optional[Sequence[int]]
        v ∈ L_𝒱 genérico; ``None`` escolhe o primeiro da busca determinística.
    sigma : Angle
    qorder : int, optional
    normalized : bool, optional
        Multiplica por ζ^{n/2}.

    Returns
    -------
    GenusSeries

    Raises
    ------
    NotComplete
    NotGeneric
    ZetaIsOne
    ResidualPole
    """

    vector = _prepare(fan, vector)
    conductor = genus_conductor(fan, sigma)
    terms: List[Tuple[RatFunc, QSeries]] = []
    for key in fan.maximal_keys:
        w = fan.weight(key)
        if w == 0:
            continue
        group = fan.group(key)
        duals = fan.dual(key)
        pairs = fan.pairings(key, vector)
        for element in group.elements():
            rep = group.representative(element)
            prefactor = RatFunc.one()
            body = identity_series(qorder, 1, LaurentPoly())
            for i in key:
                arg = ExpArg(m=-int(pairs[i]), omega=-chi_angle(duals[i], rep))
                expansion = phi_expansion(arg, sigma, qorder, 1, conductor)
                prefactor = prefactor * expansion.prefactor
                body = body * expansion.body
            terms.append((prefactor * Fraction(w, group.order), body))
    logger.debug("φ^v de %s: %d parcelas, v=%s, M=%d", fan.name, len(terms), vector, conductor)

    series = sum_to_laurent(terms) if terms else QSeries.constant(LaurentPoly(), qorder, zero=LaurentPoly())
    if normalized:
        series = _normalize(series, fan, sigma, conductor)
    return GenusSeries(
        series=series,
        kind="elliptic",
        sigma=sigma,
        vector=vector,
        qorder=qorder,
        granularity=1,
        conductor=conductor,
        normalized=normalized,
    )


def _sector_fractions(fan: MultiFan, key: Key, rep: Sequence[int]) -> Dict[int, Fraction]:
    """f_{I,h,i} = ⟨u_i^I, v(h)⟩ mod 1 para I maximal."""
    return {i: chi_angle(u, rep).value for i, u in fan.dual(key).items()}


def orbifold_granularity(fan: MultiFan) -> int:
    """r̂ = mmc dos denominadores de f_{I,h,i}."""
    denominators = [1]
    for key in fan.maximal_keys:
        group = fan.group(key)
        for element in group.elements():
            fractions = _sector_fractions(fan, key, group.representative(element))
            denominators.extend(f.denominator for f in fractions.values())
    return lcm(*denominators)


def orbifold_elliptic_genus_v(
    fan: MultiFan,
    vector: Optional[Sequence[int]],
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    normalized: bool = True,
    twisted: bool = True,
) -> GenusSeries:
    """
    Gênero elíptico de orbifold φ̂^v.

    Soma dupla sobre (h₁, h₂) ∈ H_I × H_I com o representante v(h₁) em forma
    normal 0 ≤ f_{I,h₁,i} < 1: o fator de i é φ com argumento
    χ(u_i^I, h₂)^{−1} t^{−⟨u_i^I, v⟩} q^{f_{I,h₁,i}} e o prefator é
    ζ^{Σ_i f_{I,h₁,i}}. Com ``twisted=False`` só h₁ = 0 entra e o resultado
    coincide com φ^v.

    Raises
    ------
    NotComplete
    NotGeneric
    ZetaIsOne
    ResidualPole
    """

    vector = _prepare(fan, vector)
    conductor = genus_conductor(fan, sigma)
    granularity = orbifold_granularity(fan) if twisted else 1
    order = qorder * granularity
    terms: List[Tuple[RatFunc, QSeries]] = []
    for key in fan.maximal_keys:
        w = fan.weight(key)
        if w == 0:
            continue
        group = fan.group(key)
        duals = fan.dual(key)
        pairs = fan.pairings(key, vector)
        weight = Fraction(w, group.order)
        twists = group.elements() if twisted else [group.identity]
        for first in twists:
            fractions = _sector_fractions(fan, key, group.representative(first))
            lead = root_of_unity(sigma * sum(fractions.values()), conductor)
            for second in group.elements():
                rep = group.representative(second)
                prefactor = RatFunc.one()
                body = identity_series(order, granularity, LaurentPoly())
                for i in key:
                    arg = ExpArg(m=-int(pairs[i]), omega=-chi_angle(duals[i], rep), f=fractions[i])
                    expansion = phi_expansion(arg, sigma, order, granularity, conductor)
                    prefactor = prefactor * expansion.prefactor
                    body = body * expansion.body
                terms.append((prefactor * (lead.scale(weight)), body))
    logger.debug(
        "φ̂^v de %s: %d parcelas, r̂=%d, v=%s, M=%d", fan.name, len(terms), granularity, vector, conductor
    )

    if terms:
        series = sum_to_laurent(terms)
    else:
        series = QSeries.constant(LaurentPoly(), order, granularity, zero=LaurentPoly())
    if normalized:
        series = _normalize(series, fan, sigma, conductor)
    return GenusSeries(
        series=series,
        kind="orbifold",
        sigma=sigma,
        vector=vector,
        qorder=qorder,
        granularity=granularity,
        conductor=conductor,
        normalized=normalized,
    )


# ---------------------------------------------------------------------------
# Setores Ĥ_K
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorElement:
    """
    Elemento h de H_K com seus dados em forma normal.

    Attributes
    ----------
    key : Key
    element : Tuple[int, ...]
        h nas coordenadas canônicas de H_K.
    fractions : Dict[int, Fraction]
        f_{K,h,i} para i ∈ K.
    offset : Vector
        v_{K,h} = Σ_i f_{K,h,i} v_i, sempre inteiro.
    """

    key: Key
    element: Tuple[int, ...]
    fractions: Dict[int, Fraction]
    offset: Vector

    @property
    def total(self) -> Fraction:
        """f_{K,h}."""
        return sum(self.fractions.values(), Fraction(0))

    @property
    def is_sector(self) -> bool:
        """h ∈ Ĥ_K, isto é, nenhum f_{K,h,i} nulo."""
        return all(f != 0 for f in self.fractions.values())


@dataclass(frozen=True)
class HatH:
    """
    Dados de H_K e Ĥ_K para todo K ∈ Σ.

    Attributes
    ----------
    elements : Dict[Key, Tuple[SectorElement, ...]]
        Todos os elementos de H_K.
    """

    elements: Dict[Key, Tuple[SectorElement, ...]] = field(default_factory=dict)

    def sector(self, key: Key) -> Tuple[SectorElement, ...]:
        """Ĥ_K."""
        return tuple(e for e in self.elements[tuple(sorted(key))] if e.is_sector)

    def group_order(self, key: Key) -> int:
        return len(self.elements[tuple(sorted(key))])


def _face_element(fan: MultiFan, key: Key, element: Tuple[int, ...], rep: Vector) -> SectorElement:
    if not key:
        return SectorElement(key=(), element=element, fractions={}, offset=(0,) * fan.rank)
    vectors = [fan.rays[i] for i in key]
    coords = solve_rational(columns_matrix(vectors, fan.rank), rep)
    fractions = {i: a - (a.numerator // a.denominator) for i, a in zip(key, coords)}
    offset = []
    for c in range(fan.rank):
        value = sum((f * fan.rays[i][c] for i, f in fractions.items()), Fraction(0))
        if value.denominator != 1:
            raise PropertyViolation(f"v_(K,h) não inteiro para K={key}", context=key)
        offset.append(int(value))
    return SectorElement(key=key, element=element, fractions=fractions, offset=tuple(offset))


def hat_h_data(fan: MultiFan) -> HatH:
    """
    Calcula f_{K,h,i}, f_{K,h} e v_{K,h} para todo K ∈ Σ e h ∈ H_K.

    Confere que H_J é a união disjunta dos Ĥ_K com K ⊆ J: o suporte de
    f_{J,h} é a face K do setor de h, e as frações coincidem com as de
    algum elemento de Ĥ_K.

    Raises
    ------
    PropertyViolation
        Se a partição ou a integralidade falharem.
    """

    elements: Dict[Key, Tuple[SectorElement, ...]] = {}
    for key in fan.cones:
        isotropy = fan.face_isotropy(key)
        elements[key] = tuple(
            _face_element(fan, key, element, isotropy.representative(element))
            for element in isotropy.elements()
        )
    data = HatH(elements=elements)

    sector_fractions = {
        key: {tuple(sorted(e.fractions.items())) for e in data.sector(key)} for key in fan.cones
    }
    for key in fan.cones:
        count = sum(len(data.sector(K)) for K in fan.cones if set(K).issubset(key))
        if count != data.group_order(key):
            raise PropertyViolation(
                f"|H_J| = {data.group_order(key)} difere de Σ|Ĥ_K| = {count} em J={key}", context=key
            )
        for e in elements[key]:
            support = tuple(i for i in key if e.fractions[i] != 0)
            pattern = tuple(sorted((i, e.fractions[i]) for i in support))
            if pattern not in sector_fractions[support]:
                raise PropertyViolation(f"elemento {e.element} de H_{key} sem setor", context=key)
    logger.debug("Ĥ calculado para %d faces", len(elements))
    return data
