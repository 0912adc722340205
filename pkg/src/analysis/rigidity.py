"""
Verificações de rigidez e de anulamento do gênero elíptico de nível N.

Sob a condição (P) e com c₁ divisível por N, φ^v é constante em t para
todo v genérico; a constante se anula porque a translação t ↦ tq
multiplica φ^v por ζ^{h(v)}. As funções abaixo conferem essas afirmações
numa truncagem exata, junto com os corolários combinatórios sobre T_y.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import Angle, CycloNumber, root_of_unity
from src.algebra.lattice import Vector, determinant, columns_matrix
from src.algebra.series import QSeries, shift_t_by_q
from src.analysis.genera import (
    DEFAULT_QORDER,
    elliptic_genus_v,
    todd,
    ty_at_root,
    ty_genus,
)
from src.fans.builders import covering_fan
from src.fans.chern import (
    c1_divisibility,
    check_lattice_vector,
    condition_P,
    is_divisible,
    require_condition_P,
    v_type,
)
from src.fans.multifan import (
    DEFAULT_VECTOR_COUNT,
    MultiFan,
    e_vector,
    generic_vectors,
    h_vector,
    is_complete,
    lattice_L_V,
    mu,
)
from src.utils.errors import NotDivisible, PreconditionViolated, ZetaIsOne

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OffendingTerm:
    """Coeficiente não nulo de t^a (a ≠ 0) em q^s ao longo de v."""

    vector: Vector
    q_exponent: int
    t_exponent: int
    coefficient: CycloNumber


@dataclass(frozen=True)
class RigidityVerdict:
    """
    Resultado de ``rigidity_check``.

    Attributes
    ----------
    is_constant : bool
        Nenhum termo t^a com a ≠ 0 até a ordem pedida e constantes iguais
        para todos os vetores.
    constant : Optional[QSeries]
        A parte constante comum (sobre ℚ(ζ_M)) quando ``is_constant``.
    vectors : Tuple[Vector, ...]
    v_types : Dict[Vector, int]
        h(v) de cada vetor; vazio quando c₁ não é divisível.
    offending : Tuple[OffendingTerm, ...]
    constants_agree : bool
    level : int
    sigma : Angle
    """

    is_constant: bool
    constant: Optional[QSeries]
    vectors: Tuple[Vector, ...]
    v_types: Dict[Vector, int] = field(default_factory=dict)
    offending: Tuple[OffendingTerm, ...] = ()
    constants_agree: bool = True
    level: int = 0
    sigma: Angle = Angle(0)

    @property
    def vanishes(self) -> bool:
        return self.is_constant and self.constant is not None and self.constant.is_zero()


def _level_angle(level: int, k: int) -> Angle:
    if level < 2:
        raise ValueError("o nível precisa ser maior que 1")
    sigma = Angle(k, level)
    if sigma.is_zero():
        raise ZetaIsOne(f"ζ = 1 para k={k}, N={level}", context=(k, level))
    return sigma


def _type_vectors(fan: MultiFan, level: int, k: int, divisible: bool) -> List[Vector]:
    """Vetores padrão, estendidos até aparecer um v com ζ^{h(v)} ≠ 1."""
    vectors = generic_vectors(fan, DEFAULT_VECTOR_COUNT)
    if not divisible:
        return vectors
    if any(k * v_type(fan, v, level) % level for v in vectors):
        return vectors
    count = DEFAULT_VECTOR_COUNT
    limit = DEFAULT_VECTOR_COUNT + 4 * level
    while count < limit:
        count += 1
        candidate = generic_vectors(fan, count)[-1]
        if k * v_type(fan, candidate, level) % level:
            logger.debug("vetor de tipo não trivial encontrado: %s", candidate)
            return vectors + [candidate]
    logger.warning("nenhum vetor com ζ^h(v) ≠ 1 entre os %d primeiros", limit)
    return vectors


def rigidity_check(
    fan: MultiFan,
    level: int,
    k: int = 1,
    qorder: int = DEFAULT_QORDER,
    vectors: Optional[Sequence[Sequence[int]]] = None,
    force: bool = False,
) -> RigidityVerdict:
    """
    Confere que φ^v de nível N é constante em t para vários v genéricos.

    Parameters
    ----------
    fan : MultiFan
    level : int
        N > 1.
    k : int, optional
        σ = k/N; k/N ≢ 0.
    qorder : int, optional
    vectors : Optional[Sequence[Sequence[int]]], optional
        Vetores de L_𝒱; por padrão a busca determinística, estendida até
        cobrir um tipo h(v) com ζ^{h(v)} ≠ 1.
    force : bool, optional
        Dispensa a condição (P) e a divisibilidade de c₁.

    Returns
    -------
    RigidityVerdict

    Raises
    ------
    ConditionPViolated
    NotDivisible
    ZetaIsOne
    """

    sigma = _level_angle(level, k)
    if force:
        divisible = condition_P(fan) and is_divisible(fan, level)
    else:
        require_condition_P(fan)
        if not is_divisible(fan, level):
            raise NotDivisible(f"c1 de {fan.name or 'Δ'} não é divisível por {level}", context=level)
        divisible = True

    if vectors is None:
        chosen = _type_vectors(fan, level, k, divisible)
    else:
        chosen = [check_lattice_vector(fan, v) for v in vectors]
    types = {v: v_type(fan, v, level) for v in chosen} if divisible else {}

    offending: List[OffendingTerm] = []
    constants: List[QSeries] = []
    for v in chosen:
        genus = elliptic_genus_v(fan, v, sigma, qorder)
        for s, poly in enumerate(genus.series.coefficients):
            for a, c in poly.nonconstant_terms().items():
                offending.append(OffendingTerm(vector=v, q_exponent=s, t_exponent=a, coefficient=c))
        constants.append(genus.constant_part())
    agree = all(c == constants[0] for c in constants[1:])
    is_constant = not offending and agree
    logger.info(
        "rigidez de %s no nível %d: %s (%d vetores, %d termos fora de t^0)",
        fan.name,
        level,
        "constante" if is_constant else "não constante",
        len(chosen),
        len(offending),
    )
    return RigidityVerdict(
        is_constant=is_constant,
        constant=constants[0] if is_constant else None,
        vectors=tuple(chosen),
        v_types=types,
        offending=tuple(offending),
        constants_agree=agree,
        level=level,
        sigma=sigma,
    )


def vanishing_check(fan: MultiFan, level: int, qorder: int = DEFAULT_QORDER) -> bool:
    """φ de nível N é constante e igual a zero."""
    return rigidity_check(fan, level, 1, qorder).vanishes


def translation_check(
    fan: MultiFan,
    vector: Optional[Sequence[int]],
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    level: Optional[int] = None,
) -> bool:
    """
    φ^v(tq) = ζ^{h(v)} φ^v(t) nos índices confiáveis.

    Os termos t^a com a < 0 vindos de ordens acima de D também cairiam na
    janela; por isso a soma das partes deslocadas só é comparada nos
    índices s ≤ D − max|a|.

    Raises
    ------
    ConditionPViolated
    NotDivisible
    NotGeneric
    """

    level = level or sigma.denominator
    if vector is None:
        vector = generic_vectors(fan, 1)[0]
    h = v_type(fan, vector, level)
    genus = elliptic_genus_v(fan, vector, sigma, qorder)
    shifted = shift_t_by_q(genus.series)
    factor = root_of_unity(sigma * h, genus.conductor)
    reliable = shifted.reliable_order
    if reliable < 0:
        logger.warning("nenhum índice confiável para a translação com D=%d", qorder)
        return True
    logger.debug("translação ao longo de %s: h(v)=%d, índices 0..%d", vector, h, reliable)
    combined = shifted.combined()
    return all(
        combined.coefficients[s] == genus.series.coefficients[s] * factor
        for s in range(reliable + 1)
    )


# ---------------------------------------------------------------------------
# Corolários sobre T_y
# ---------------------------------------------------------------------------


def ty_root_vanishing(fan: MultiFan, level: int) -> bool:
    """
    T_y se anula em −y = ζ para toda raiz N-ésima ζ ≠ 1.

    Raises
    ------
    ConditionPViolated
    NotDivisible
    """

    require_condition_P(fan)
    if not is_divisible(fan, level):
        raise NotDivisible(f"c1 de {fan.name or 'Δ'} não é divisível por {level}", context=level)
    ty = ty_genus(fan)
    return all(ty_at_root(ty, Angle(j, level)).is_zero() for j in range(1, level))


def _require_nonsingular_complete(fan: MultiFan) -> None:
    if not fan.is_nonsingular:
        raise PreconditionViolated(f"{fan.name or 'Δ'} é singular", context=fan.name)
    if not is_complete(fan):
        raise PreconditionViolated(f"{fan.name or 'Δ'} não é completo", context=fan.name)


def spin_signature_check(fan: MultiFan) -> bool:
    """Se c₁ é par então a assinatura é zero (verdadeiro quando c₁ é ímpar)."""
    _require_nonsingular_complete(fan)
    if not is_divisible(fan, 2):
        return True
    ty = ty_genus(fan)
    return sum(c * (-1) ** k for k, c in enumerate(ty.coefficients)) == 0


def divisibility_form_check(fan: MultiFan) -> bool:
    """
    N_max ≤ n + 1, com as formas de T_y forçadas para N = n + 1 e N = n.

    N = n + 1 exige T_y = T₀ Σ_{k≤n} (−y)^k; N = n exige
    T_y = T₀ (1 − y) Σ_{k<n} (−y)^k.

    Raises
    ------
    PreconditionViolated
        Se o multi-leque não for não singular e completo com Todd ≠ 0.
    """

    _require_nonsingular_complete(fan)
    t0 = todd(fan)
    if t0 == 0:
        raise PreconditionViolated("gênero de Todd nulo", context=fan.name)
    n = fan.rank
    n_max = c1_divisibility(fan).n_max
    if n_max is None or n_max > n + 1:
        logger.info("N_max=%s excede n+1=%d", n_max, n + 1)
        return False
    coefficients = ty_genus(fan).coefficients
    if n_max % (n + 1) == 0 and coefficients != (t0,) * (n + 1):
        return False
    if n_max % n == 0:
        expected = tuple(t0 if k in (0, n) else 2 * t0 for k in range(n + 1))
        if coefficients != expected:
            return False
    return True


def counting_identities(fan: MultiFan) -> bool:
    """
    Com T₀ = 1 e w(I) = 1: h_k = #{I : μ(I) = k} e e_k = #Σ^{(k)}.

    Raises
    ------
    PreconditionViolated
    """

    if any(fan.weight(I) != 1 for I in fan.maximal_keys):
        raise PreconditionViolated("existem pesos w(I) ≠ 1", context=fan.name)
    if not is_complete(fan) or todd(fan) != 1:
        raise PreconditionViolated("é preciso T₀ = 1 num multi-leque completo", context=fan.name)
    vector = generic_vectors(fan, 1)[0]
    counts = [0] * (fan.rank + 1)
    for I in fan.maximal_keys:
        counts[mu(fan, I, vector)] += 1
    faces = tuple(len(fan.faces(k)) for k in range(fan.rank + 1))
    return tuple(counts) == h_vector(fan, vector) and faces == e_vector(fan, vector)


def covering_divisibility_transfer(fan: MultiFan, level: int) -> bool:
    """
    Compara a divisibilidade de c₁ em (Δ, 𝒱) e no recobrimento.

    (Δ, 𝒱) divisível por N implica o recobrimento divisível; a recíproca
    vale quando mdc(|L/L_𝒱|, N) = 1.

    Raises
    ------
    ConditionPViolated
    """

    covering = covering_fan(fan)
    base = is_divisible(fan, level)
    lifted = is_divisible(covering.fan, level)
    if base and not lifted:
        return False
    index = abs(determinant(columns_matrix(lattice_L_V(fan), fan.rank)))
    if gcd(int(index), level) == 1 and lifted and not base:
        return False
    return True
