"""
Construtores dos multi-leques nomeados usados como fixtures.

Rotulagens (base 0, estáveis):

* ``projective_space_fan(n)``: raios e_1, …, e_n, −Σe_i; todos os n-subconjuntos.
* ``weighted_p2_quotient(b)``: (1, 0), (0, b), (−1, −b).
* ``hirzebruch_fan(k)``: (1, 0), (−1, 0), (0, 1), (k, −1).
* ``projective_bundle_fan(spec)``: v_0, v_1, …, v_{n+1} com v_i = e_i,
  v_0 = −(e_1 + … + e_r) − Σ_{i>r} k_i e_i e v_{n+1} = −(e_{r+1} + … + e_n).
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.lattice import (
    Vector,
    columns_matrix,
    columns_matrix_rational,
    mat_vec,
    rational_inverse,
    solve_rational,
    transpose,
)
from src.fans.chern import require_condition_P
from src.fans.multifan import MaximalSimplex, MultiFan, lattice_L_V
from src.utils.errors import InfiniteIndex, InvalidFan, SingularInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BundleSpec:
    """
    Fibrado projetivo P(η) → ℙ^r com η = ⊕_{i>r} ξ^{k_i} ⊕ 1.

    Attributes
    ----------
    n : int
        Dimensão total.
    r : int
        Dimensão da base, 1 ≤ r < n.
    twists : Tuple[int, ...]
        k_{r+1}, …, k_n.
    """

    n: int
    r: int
    twists: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "twists", tuple(int(k) for k in self.twists))
        if not 1 <= self.r < self.n:
            raise InvalidFan(f"BundleSpec exige 1 ≤ r < n (r={self.r}, n={self.n})")
        if len(self.twists) != self.n - self.r:
            raise InvalidFan(f"esperados {self.n - self.r} twists, recebidos {len(self.twists)}")

    @property
    def label(self) -> str:
        return f"bundle:n={self.n},r={self.r},k=[{','.join(str(k) for k in self.twists)}]"


def _unit(index: int, n: int) -> Vector:
    return tuple(int(i == index) for i in range(n))


def projective_space_fan(n: int) -> MultiFan:
    """Leque de ℙⁿ."""
    if n < 1:
        raise InvalidFan("ℙⁿ exige n ≥ 1")
    rays = [_unit(i, n) for i in range(n)] + [tuple(-1 for _ in range(n))]
    simplices = [MaximalSimplex(key) for key in combinations(range(n + 1), n)]
    return MultiFan(n, rays, simplices, name=f"P{n}")


def weighted_p2_quotient(b: int) -> MultiFan:
    """ℙ²/ℤ_b com 𝒱 = {e_1, b e_2, −(e_1 + b e_2)}."""
    if b < 1:
        raise InvalidFan("ℙ²/ℤ_b exige b ≥ 1")
    rays = [(1, 0), (0, b), (-1, -b)]
    simplices = [MaximalSimplex(key) for key in ((0, 1), (0, 2), (1, 2))]
    return MultiFan(2, rays, simplices, name=f"P2modB:{b}")


def hirzebruch_fan(k: int) -> MultiFan:
    """Superfície de Hirzebruch; k = 0 é ℙ¹ × ℙ¹."""
    rays = [(1, 0), (-1, 0), (0, 1), (k, -1)]
    simplices = [MaximalSimplex(key) for key in ((0, 2), (1, 2), (0, 3), (1, 3))]
    return MultiFan(2, rays, simplices, name=f"hirzebruch:{k}")


def projective_bundle_fan(spec: BundleSpec) -> MultiFan:
    """
    Leque do fibrado projetivo descrito por ``spec``.

    Os simplexos maximais são ({0..r}∖{i}) ∪ ({r+1..n+1}∖{j}), em número
    (r+1)(n−r+1).
    """

    n, r = spec.n, spec.r
    twist = dict(zip(range(r + 1, n + 1), spec.twists))
    v0 = tuple(-1 if i <= r else -twist[i] for i in range(1, n + 1))
    v_last = tuple(0 if i <= r else -1 for i in range(1, n + 1))
    rays = [v0] + [_unit(i, n) for i in range(n)] + [v_last]

    base = list(range(r + 1))
    fiber = list(range(r + 1, n + 2))
    simplices = [
        MaximalSimplex(tuple(x for x in base if x != i) + tuple(y for y in fiber if y != j))
        for i in base
        for j in fiber
    ]
    return MultiFan(n, rays, simplices, name=spec.label)


def bundle_c1_divisible(spec: BundleSpec, level: int) -> bool:
    """c₁ = (n−r+1)ω + (Σk_i + r + 1)ω′ é divisível por N."""
    return (spec.n - spec.r + 1) % level == 0 and (sum(spec.twists) + spec.r + 1) % level == 0


# ---------------------------------------------------------------------------
# Recobrimento e quociente
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Covering:
    """
    Recobrimento (ramificado) de (Δ, 𝒱) sob a condição (P).

    Attributes
    ----------
    fan : MultiFan
        Δ̃ em L̃ = cópia de L_𝒱; sempre não singular.
    basis : Tuple[Vector, ...]
        Base b de L_𝒱 ⊂ L usada para identificar L̃ ≅ ℤⁿ.
    """

    fan: MultiFan
    basis: Tuple[Vector, ...]

    def overlattice(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Base de L nas coordenadas de L̃ (colunas de B⁻¹)."""
        inverse = rational_inverse(columns_matrix(self.basis, self.fan.rank))
        return tuple(transpose(inverse))


def covering_fan(fan: MultiFan) -> Covering:
    """
    Δ̃: mesmo Σ e mesmos pesos, raios reescritos na base de L_𝒱.

    Raises
    ------
    ConditionPViolated
    """

    require_condition_P(fan)
    basis = lattice_L_V(fan)
    matrix = columns_matrix(basis, fan.rank)
    rays = []
    for ray in fan.rays:
        coords = solve_rational(matrix, ray)
        rays.append(tuple(int(c) for c in coords))
    covering = MultiFan(fan.rank, rays, fan.simplices, name=f"cover({fan.name or 'Δ'})")
    return Covering(fan=covering, basis=basis)


def quotient_fan(fan: MultiFan, overlattice: Sequence[Sequence]) -> MultiFan:
    """
    Multi-leque em L ⊇ L̃ a partir de Δ̃ e de uma base A de L.

    Os novos geradores são A⁻¹ṽ_i, as coordenadas de ṽ_i na base de L.

    Raises
    ------
    InfiniteIndex
        Se a base informada for singular.
    InvalidFan
        Se L não contiver L̃.
    """

    try:
        inverse = rational_inverse(columns_matrix_rational(overlattice))
    except SingularInput as exc:
        raise InfiniteIndex("sobre-reticulado sem índice finito", context=overlattice) from exc
    if any(Fraction(x).denominator != 1 for row in inverse for x in row):
        raise InvalidFan("o reticulado informado não contém L̃", context=overlattice)
    rays = [tuple(int(x) for x in mat_vec(inverse, ray)) for ray in fan.rays]
    return MultiFan(fan.rank, rays, fan.simplices, name=f"quotient({fan.name or 'Δ'})")


# ---------------------------------------------------------------------------
# Multi-leques aleatórios
# ---------------------------------------------------------------------------


def _default_bases() -> List[MultiFan]:
    reflected = MultiFan(
        2,
        [(-1, 0), (0, -1), (1, 1)],
        [MaximalSimplex(key) for key in ((0, 1), (0, 2), (1, 2))],
        name="P2-",
    )
    return [projective_space_fan(2), reflected, hirzebruch_fan(0), hirzebruch_fan(1), hirzebruch_fan(2)]


def random_complete_multifan(
    seed: int,
    bases: Optional[Sequence[MultiFan]] = None,
    weight_bound: int = 2,
    signed: bool = False,
) -> MultiFan:
    """
    Combinação inteira de multi-leques completos sobre raios fundidos.

    Cada base recebe um coeficiente c em [0, weight_bound] (em
    [−weight_bound, weight_bound] com ``signed``), com pelo menos um positivo.
    Raios iguais são fundidos e pesos de simplexos com os mesmos vértices
    são somados; a completude é linear nos pesos e portanto se preserva.
    """

    rng = random.Random(seed)
    bases = list(bases) if bases is not None else _default_bases()
    low = -weight_bound if signed else 0
    coefficients = [rng.randint(low, weight_bound) for _ in bases]
    if not any(c > 0 for c in coefficients):
        coefficients[rng.randrange(len(bases))] = rng.randint(1, max(weight_bound, 1))

    rank = bases[0].rank
    ray_index: Dict[Vector, int] = {}
    weights: Dict[Tuple[int, ...], List[int]] = {}
    for base, c in zip(bases, coefficients):
        if c == 0:
            continue
        if base.rank != rank:
            raise InvalidFan("bases com dimensões diferentes")
        mapping = [ray_index.setdefault(ray, len(ray_index)) for ray in base.rays]
        for simplex in base.simplices:
            key = tuple(sorted(mapping[i] for i in simplex.rays))
            plus, minus = (simplex.wplus, simplex.wminus) if c > 0 else (simplex.wminus, simplex.wplus)
            slot = weights.setdefault(key, [0, 0])
            slot[0] += abs(c) * plus
            slot[1] += abs(c) * minus

    rays = sorted(ray_index, key=ray_index.get)
    simplices = [MaximalSimplex(key, wp, wm) for key, (wp, wm) in sorted(weights.items())]
    logger.debug("random:%d com coeficientes %s", seed, coefficients)
    return MultiFan(rank, rays, simplices, name=f"random:{seed}")


# ---------------------------------------------------------------------------
# Nomes de fixtures
# ---------------------------------------------------------------------------

_BUNDLE = re.compile(r"bundle:n=(\d+),r=(\d+),k=\[([-\d,\s]*)\]$")


def fixture(name: str) -> MultiFan:
    """
    Resolve um nome de fixture.

    Aceita ``P{n}``, ``P2modB:{b}``, ``bundle:n={n},r={r},k=[...]``,
    ``random:{seed}``, ``hirzebruch:{k}`` e ``P1xP1``.

    Raises
    ------
    InvalidFan
        Se o nome não for reconhecido.
    """

    text = name.strip()
    if text == "P1xP1":
        return hirzebruch_fan(0)
    match = re.fullmatch(r"P(\d+)", text)
    if match:
        return projective_space_fan(int(match.group(1)))
    match = re.fullmatch(r"P2modB:(\d+)", text)
    if match:
        return weighted_p2_quotient(int(match.group(1)))
    match = re.fullmatch(r"hirzebruch:(-?\d+)", text)
    if match:
        return hirzebruch_fan(int(match.group(1)))
    match = re.fullmatch(r"random:(\d+)", text)
    if match:
        return random_complete_multifan(int(match.group(1)))
    match = _BUNDLE.match(text)
    if match:
        twists = tuple(int(k) for k in match.group(3).split(",") if k.strip())
        spec = BundleSpec(int(match.group(1)), int(match.group(2)), twists)
        return projective_bundle_fan(spec)
    raise InvalidFan(f"fixture desconhecida: {name!r}", context=name)
