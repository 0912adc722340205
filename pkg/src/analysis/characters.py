"""
Tabelas de caracteres dos gêneros elípticos e a verificação cruzada.

Para cada u ∈ L* numa caixa [−B, B]^n calcula-se o coeficiente de t^{−u}
na expansão de φ(Δ, 𝒱) (ou de φ̂) como soma alternada sobre Σ ponderada
pelos graus dos multi-leques projetados. Especializando ao longo de v, a
tabela precisa reproduzir a série φ^v calculada pela soma de pontos fixos.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import Angle, CycloNumber, lcm, root_of_unity
from src.algebra.lattice import Vector, pairing
from src.algebra.series import QSeries, big_phi_series, geometric_q, identity_series, shifted_geometric_q
from src.analysis.genera import (
    DEFAULT_QORDER,
    elliptic_genus_v,
    genus_conductor,
    hat_h_data,
    orbifold_elliptic_genus_v,
)
from src.fans.chern import check_lattice_vector
from src.fans.multifan import (
    Key,
    MultiFan,
    generic_vectors,
    is_injective_on,
    projected_degree,
    window_points,
)
from src.utils.errors import WindowNotInjective, WindowTooSmall

logger = logging.getLogger(__name__)

# Meia-largura padrão da caixa de expoentes
DEFAULT_WINDOW = 4


@dataclass(frozen=True)
class CharacterTable:
    """
    Coeficientes de t^{−u} para u numa caixa [−B, B]^n.

    Attributes
    ----------
    entries : Dict[Vector, QSeries]
        Série em q (sobre ℚ(ζ_M)) de cada ponto da caixa.
    sigma : Angle
    qorder : int
    bound : int
        B.
    granularity : int
        r̂ das séries; 1 na tabela não torcida.
    conductor : int
    orbifold : bool
    """

    entries: Dict[Vector, QSeries]
    sigma: Angle
    qorder: int
    bound: int
    granularity: int
    conductor: int
    orbifold: bool = False

    def __getitem__(self, point: Sequence[int]) -> QSeries:
        return self.entries[tuple(point)]

    def support(self) -> List[Vector]:
        """Pontos com série não nula."""
        return [u for u, series in self.entries.items() if not series.is_zero()]

    def boundary(self) -> List[Vector]:
        """Pontos da borda da caixa (alguma coordenada com |u_j| = B)."""
        return [u for u in self.entries if any(abs(c) == self.bound for c in u)]


def _face_degrees(fan: MultiFan) -> Dict[Key, int]:
    """deg(Δ_J) para todo J ∈ Σ, omitindo os nulos."""
    vector = generic_vectors(fan, 1)[0]
    degrees = {}
    for J in fan.cones:
        value = projected_degree(fan, J, vector)
        if value:
            degrees[J] = value
    return degrees


def character_table(
    fan: MultiFan,
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    bound: int = DEFAULT_WINDOW,
) -> CharacterTable:
    """
    Σ_k Σ_{J ∈ Σ^{(k)}} (−1)^k deg(Δ_J) ∏_{j ∈ J} 1/(1 − ζq^{⟨u, v_j⟩}) · Φ^n.

    Parameters
    ----------
    fan : MultiFan
        Multi-leque completo.
    sigma : Angle
    qorder : int, optional
    bound : int, optional
        Meia-largura B da caixa.

    Returns
    -------
    CharacterTable
    """

    conductor = genus_conductor(fan, sigma)
    degrees = _face_degrees(fan)
    phi_power = big_phi_series(sigma, qorder, 1, conductor) ** fan.rank
    cache: Dict[int, QSeries] = {}

    def factor(m: int) -> QSeries:
        if m not in cache:
            cache[m] = geometric_q(m, sigma, qorder, 1, conductor)
        return cache[m]

    entries: Dict[Vector, QSeries] = {}
    for u in window_points(bound, fan.rank):
        total = QSeries.constant(CycloNumber.zero(), qorder)
        for J, d in degrees.items():
            term = identity_series(qorder, 1, CycloNumber.zero())
            for j in J:
                term = term * factor(pairing(u, fan.rays[j]))
            total = total + term.scale(Fraction((-1) ** len(J) * d))
        entries[u] = total * phi_power
    logger.debug("tabela de caracteres de %s: %d pontos, M=%d", fan.name, len(entries), conductor)
    return CharacterTable(
        entries=entries,
        sigma=sigma,
        qorder=qorder,
        bound=bound,
        granularity=1,
        conductor=conductor,
    )


def orbifold_character_table(
    fan: MultiFan,
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    bound: int = DEFAULT_WINDOW,
) -> CharacterTable:
    """
    Versão de orbifold: soma também sobre h ∈ H_J.

    Cada J contribui (−1)^k deg(Δ_J) Σ_h ∏_{i ∈ J} (ζq^{⟨u, v_i⟩})^{f_{J,h,i}} /
    (1 − ζq^{⟨u, v_i⟩}), o que reúne ζ^{f_{J,h}} q^{⟨u, v_{J,h}⟩} fator a fator.
    Os expoentes intermediários vivem em (1/r̂)ℤ.
    """

    conductor = genus_conductor(fan, sigma)
    degrees = _face_degrees(fan)
    sectors = hat_h_data(fan)
    granularity = lcm(
        1,
        *(
            f.denominator
            for J in degrees
            for element in sectors.elements[J]
            for f in element.fractions.values()
        ),
    )
    order = qorder * granularity
    phi_power = big_phi_series(sigma, order, granularity, conductor) ** fan.rank
    cache: Dict[Tuple[int, Fraction], QSeries] = {}

    def factor(m: int, f: Fraction) -> QSeries:
        if (m, f) not in cache:
            cache[(m, f)] = shifted_geometric_q(m, f, sigma, order, granularity, conductor)
        return cache[(m, f)]

    entries: Dict[Vector, QSeries] = {}
    for u in window_points(bound, fan.rank):
        total = QSeries.constant(CycloNumber.zero(), order, granularity)
        for J, d in degrees.items():
            sign = (-1) ** len(J) * d
            for element in sectors.elements[J]:
                term = identity_series(order, granularity, CycloNumber.zero())
                for j in J:
                    term = term * factor(pairing(u, fan.rays[j]), element.fractions[j])
                total = total + term.scale(Fraction(sign))
        entries[u] = total * phi_power
    logger.debug(
        "tabela de orbifold de %s: %d pontos, r̂=%d, M=%d", fan.name, len(entries), granularity, conductor
    )
    return CharacterTable(
        entries=entries,
        sigma=sigma,
        qorder=qorder,
        bound=bound,
        granularity=granularity,
        conductor=conductor,
        orbifold=True,
    )


def crosscheck_character_vs_fixedpoint(
    fan: MultiFan,
    vector: Optional[Sequence[int]],
    sigma: Angle,
    qorder: int = DEFAULT_QORDER,
    bound: int = DEFAULT_WINDOW,
    orbifold: bool = False,
) -> bool:
    """
    Compara a série ao longo de v com Σ_u t^{−⟨u, v⟩} ζ^{n/2} tabela[u].

    Parameters
    ----------
    fan : MultiFan
    vector : Optional[Sequence[int]]
        v ∈ L_𝒱 genérico e injetivo na caixa; ``None`` busca um.
    sigma : Angle
    qorder : int, optional
    bound : int, optional
    orbifold : bool, optional
        Usa φ̂^v e a tabela de orbifold.

    Returns
    -------
    bool
        Verdadeiro quando todos os coeficientes coincidem até a ordem pedida.

    Raises
    ------
    WindowNotInjective
        Se o vetor informado não separar os pontos da caixa.
    WindowTooSmall
        Se a série tiver expoente fora da imagem da caixa ou se alguma entrada
        da borda for não nula.
    """

    points = window_points(bound, fan.rank)
    if vector is None:
        vector = generic_vectors(fan, 1, window=points)[0]
    else:
        vector = check_lattice_vector(fan, vector)
        if not is_injective_on(vector, points):
            raise WindowNotInjective(f"{vector} não separa a caixa [−{bound}, {bound}]", context=vector)

    if orbifold:
        genus = orbifold_elliptic_genus_v(fan, vector, sigma, qorder)
        table = orbifold_character_table(fan, sigma, qorder, bound)
    else:
        genus = elliptic_genus_v(fan, vector, sigma, qorder)
        table = character_table(fan, sigma, qorder, bound)

    granularity = lcm(genus.granularity, table.granularity)
    limit = qorder * granularity
    series = genus.series.regranulate(granularity)
    entries = {u: s.regranulate(granularity) for u, s in table.entries.items()}
    normalization = root_of_unity(Angle.of(fan.rank * sigma.value / 2), genus.conductor)

    for u in table.boundary():
        if not all(entries[u].coefficients[s].is_zero() for s in range(limit + 1)):
            raise WindowTooSmall(f"entrada não nula na borda em u={u}", context=u)

    by_exponent = {-pairing(u, vector): u for u in points}
    agree = True
    for s in range(limit + 1):
        poly = series.coefficients[s]
        for exponent in poly.terms:
            if exponent not in by_exponent:
                raise WindowTooSmall(
                    f"t^{exponent} em q^{Fraction(s, granularity)} fora da imagem da caixa",
                    context=exponent,
                )
        for exponent, u in by_exponent.items():
            expected = entries[u].coefficients[s] * normalization
            if not poly.coefficient(exponent) == expected:
                logger.info("divergência em u=%s, q^%s", u, Fraction(s, granularity))
                agree = False
    logger.debug("verificação cruzada de %s ao longo de %s: %s", fan.name, vector, agree)
    return agree
