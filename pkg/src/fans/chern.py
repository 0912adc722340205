"""
Primeira classe de Chern equivariante, condição (P) e tipos mod N.

c₁^T(Δ, 𝒱) = Σ x_i é divisível por N quando existe u ∈ L* com
⟨u, v_i⟩ ≡ 1 (mod N) para todos os raios. As funções deste módulo decidem
essa divisibilidade exatamente pela forma normal de Smith e calculam os
dados combinatórios (faces mod m, núcleos, v-tipos) usados pelas
verificações de rigidez.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import lcm
from src.algebra.lattice import (
    Covector,
    Vector,
    contains,
    mat_vec,
    pairing,
    same_lattice,
    smith_normal_form,
)
from src.fans.multifan import (
    EquivCohClass,
    Key,
    MultiFan,
    check_generic,
    lattice_L_V,
    restriction,
)
from src.utils.errors import ConditionPViolated, NotDivisible, NotGeneric, PropertyViolation

logger = logging.getLogger(__name__)


def condition_P(fan: MultiFan) -> bool:
    """Verdadeiro quando todos os L_{I,𝒱} coincidem."""
    keys = fan.maximal_keys
    first = [fan.rays[i] for i in keys[0]]
    return all(same_lattice(first, [fan.rays[i] for i in key]) for key in keys[1:])


def require_condition_P(fan: MultiFan) -> None:
    if not condition_P(fan):
        raise ConditionPViolated(
            f"os reticulados L_(I,V) de {fan.name or 'Δ'} não coincidem", context=fan.name
        )


def first_chern_class(fan: MultiFan) -> EquivCohClass:
    """c₁^T(Δ, 𝒱) = Σ_i x_i."""
    return EquivCohClass((1,) * len(fan.rays))


def c1_restrictions(fan: MultiFan) -> Dict[Key, Covector]:
    """u^I = ι_I^*(c₁^T) = Σ_{i ∈ I} u_i^I para cada simplexo maximal."""
    c1 = first_chern_class(fan)
    return {key: restriction(fan, c1, key) for key in fan.maximal_keys}


# ---------------------------------------------------------------------------
# Congruências lineares
# ---------------------------------------------------------------------------


def _solve_congruence(
    rows: Sequence[Sequence[int]], rhs: Sequence[int], modulus: int
) -> Optional[Vector]:
    """
    Resolve rows · u ≡ rhs (mod N) em ℤⁿ.

    Com U·A·V = D o sistema vira d_j y_j ≡ (U·rhs)_j, resolvido coordenada
    a coordenada; u = V·y.

    Returns
    -------
    Optional[Vector]
        Uma solução com coordenadas em [0, N), ou ``None``.
    """

    if not rows:
        return ()
    columns = len(rows[0])
    snf = smith_normal_form(rows)
    target = mat_vec(snf.U, rhs)
    diagonal = snf.diagonal
    y = [0] * columns
    for j, c in enumerate(target):
        d = diagonal[j] if j < len(diagonal) else 0
        g = gcd(d, modulus)
        if c % g:
            return None
        if d == 0:
            continue
        reduced = modulus // g
        y[j] = (c // g) * pow(d // g, -1, reduced) % reduced if reduced > 1 else 0
    solution = tuple(int(x) % modulus for x in mat_vec(snf.V, y))
    assert all(
        (pairing(row, solution) - b) % modulus == 0 for row, b in zip(rows, rhs)
    ), "solução de congruência inválida"
    return solution


@dataclass(frozen=True)
class C1Divisibility:
    """
    Resultado de ``c1_divisibility``.

    Attributes
    ----------
    n_max : Optional[int]
        Maior N que divide c₁; ``None`` quando todo N serve.
    witness : Optional[Vector]
        u ∈ L* com ⟨u, v_i⟩ ≡ 1 (mod N_max), coordenadas em [0, N_max).
    divisors : Tuple[int, ...]
        Todos os N admissíveis (os divisores de N_max).
    """

    n_max: Optional[int]
    witness: Optional[Vector]
    divisors: Tuple[int, ...]

    def divides(self, level: int) -> bool:
        return self.n_max is None or self.n_max % level == 0


def _divisors(value: int) -> List[int]:
    return [d for d in range(1, value + 1) if value % d == 0]


def c1_divisibility(fan: MultiFan) -> C1Divisibility:
    """
    Maior N tal que existe u ∈ L* com ⟨u, v_i⟩ ≡ 1 (mod N) para todo i.

    Com A a matriz cujas linhas são os v_i e U·A·V = D, o sistema A·u ≡ 1
    vira d_j y_j ≡ c_j com c = U·1. N é admissível se e só se
    mdc(d_j, N) | c_j nas primeiras ``rank`` linhas e N | c_j nas demais;
    o conjunto admissível é fechado por divisores e por mmc.

    Parameters
    ----------
    fan : MultiFan

    Returns
    -------
    C1Divisibility
    """

    rows = fan.rays
    snf = smith_normal_form(rows)
    target = mat_vec(snf.U, (1,) * len(rows))
    rank = snf.rank
    diagonal = snf.diagonal

    extra = 0
    for c in target[rank:]:
        extra = gcd(extra, c)
    if extra == 0:
        logger.debug("c1 divisível por qualquer N em %s", fan.name)
        return C1Divisibility(n_max=None, witness=None, divisors=())

    admissible = [
        N
        for N in _divisors(abs(extra))
        if all(target[j] % gcd(diagonal[j], N) == 0 for j in range(rank))
    ]
    n_max = lcm(*admissible)
    witness = _solve_congruence(rows, (1,) * len(rows), n_max)
    if witness is None:
        raise PropertyViolation(f"N_max={n_max} sem testemunha", context=fan.name)
    logger.debug("N_max=%d, testemunha %s", n_max, witness)
    return C1Divisibility(n_max=n_max, witness=witness, divisors=tuple(_divisors(n_max)))


def is_divisible(fan: MultiFan, level: int) -> bool:
    """c₁(Δ, 𝒱) divisível por N (existência de u com ⟨u, v_i⟩ ≡ 1)."""
    if level < 1:
        raise ValueError("o nível precisa ser positivo")
    return _solve_congruence(fan.rays, (1,) * len(fan.rays), level) is not None


def divisibility_by_restrictions(fan: MultiFan, level: int) -> bool:
    """
    Divisibilidade pelo critério das restrições.

    u^I mod N, visto em L_𝒱*/N L_𝒱*, precisa ser o mesmo para todo I e estar
    na imagem de L*. As coordenadas usadas são ⟨u^I, b_j⟩ sobre uma base
    b de L_𝒱.
    """

    basis = lattice_L_V(fan)
    restrictions = c1_restrictions(fan)
    residues = set()
    for key, u in restrictions.items():
        values = []
        for b in basis:
            value = Fraction(pairing(u, b))
            if value.denominator != 1:
                raise PropertyViolation(f"⟨u^I, b⟩ não inteiro para I={key}", context=key)
            values.append(int(value) % level)
        residues.add(tuple(values))
    if len(residues) != 1:
        return False
    (target,) = residues
    return _solve_congruence(basis, target, level) is not None


# ---------------------------------------------------------------------------
# Faces mod m e tipos
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivBlock:
    """
    Classe de (v, m)-equivalência.

    Attributes
    ----------
    core : Key
        Face mod m comum a todos os membros.
    members : Tuple[Key, ...]
    residues : Dict[int, int]
        ⟨u_i^I, v⟩ mod m para i no núcleo (iguais em toda a classe).
    """

    core: Key
    members: Tuple[Key, ...]
    residues: Dict[int, int]


@dataclass(frozen=True)
class EquivClassPartition:
    vector: Vector
    modulus: int
    blocks: Tuple[EquivBlock, ...]

    def block_of(self, key: Key) -> EquivBlock:
        for block in self.blocks:
            if key in block.members:
                return block
        raise KeyError(key)


def _integral_pairings(fan: MultiFan, key: Key, vector: Sequence[int]) -> Dict[int, int]:
    out = {}
    for i, value in fan.pairings(key, vector).items():
        if value.denominator != 1:
            raise NotGeneric(f"vetor {tuple(vector)} fora de L_V", context=tuple(vector))
        out[i] = int(value)
    return out


def check_lattice_vector(fan: MultiFan, vector: Sequence[int]) -> Vector:
    vector = tuple(int(x) for x in vector)
    check_generic(fan, vector)
    if not contains(lattice_L_V(fan), vector):
        raise NotGeneric(f"vetor {vector} fora de L_V", context=vector)
    return vector


def mod_m_face(fan: MultiFan, key: Key, vector: Sequence[int], modulus: int) -> Key:
    """I_(m) = {i ∈ I : m ∤ ⟨u_i^I, v⟩}."""
    pairs = _integral_pairings(fan, key, vector)
    return tuple(i for i in key if pairs[i] % modulus)


def mod_m_partition(fan: MultiFan, vector: Sequence[int], modulus: int) -> EquivClassPartition:
    """
    Particiona Σ^{(n)} pela face mod m.

    Sob (P) a classe de núcleo K é exatamente o conjunto dos I ⊇ K e os
    resíduos ⟨u_i^I, v⟩ mod m em K não dependem de I; ambos os fatos são
    conferidos aqui.

    Raises
    ------
    ConditionPViolated
    NotGeneric
        Se v não for genérico ou não pertencer a L_𝒱.
    """

    if modulus < 1:
        raise ValueError("m precisa ser positivo")
    require_condition_P(fan)
    vector = check_lattice_vector(fan, vector)

    groups: Dict[Key, List[Key]] = {}
    for key in fan.maximal_keys:
        groups.setdefault(mod_m_face(fan, key, vector, modulus), []).append(key)

    blocks = []
    for core, members in sorted(groups.items()):
        if set(members) != set(fan.star(core)):
            raise PropertyViolation(f"classe de núcleo {core} incompleta", context=core)
        reference = _integral_pairings(fan, members[0], vector)
        residues = {i: reference[i] % modulus for i in core}
        for key in members[1:]:
            pairs = _integral_pairings(fan, key, vector)
            if any(pairs[i] % modulus != residues[i] for i in core):
                raise PropertyViolation(f"resíduos divergentes em {key}", context=key)
        blocks.append(EquivBlock(core=core, members=tuple(members), residues=residues))
    logger.debug("partição mod %d de %s: %d classes", modulus, vector, len(blocks))
    return EquivClassPartition(vector=vector, modulus=modulus, blocks=tuple(blocks))


def _require_divisible(fan: MultiFan, level: int) -> None:
    require_condition_P(fan)
    if not is_divisible(fan, level):
        raise NotDivisible(f"c1 de {fan.name or 'Δ'} não é divisível por {level}", context=level)


def v_type(fan: MultiFan, vector: Sequence[int], level: int) -> int:
    """
    h(v) = ⟨u^I, v⟩ mod N, independente de I.

    Raises
    ------
    ConditionPViolated
    NotDivisible
    NotGeneric
    """

    _require_divisible(fan, level)
    vector = check_lattice_vector(fan, vector)
    values = {sum(_integral_pairings(fan, key, vector).values()) % level for key in fan.maximal_keys}
    if len(values) != 1:
        raise PropertyViolation(f"v-tipo depende de I: {sorted(values)}", context=vector)
    return values.pop()


def vm_type(
    fan: MultiFan, vector: Sequence[int], modulus: int, level: int, block: EquivBlock
) -> int:
    """
    h(v, m, X) = Σ_{i ∈ I} h_i mod N, com ⟨u_i^I, v⟩ = m·h_i + r_i e 0 ≤ r_i < m.

    O valor é conferido em todos os membros da classe X.
    """

    _require_divisible(fan, level)
    vector = check_lattice_vector(fan, vector)
    values = set()
    for key in block.members:
        pairs = _integral_pairings(fan, key, vector)
        values.add(sum(divmod(p, modulus)[0] for p in pairs.values()) % level)
    if len(values) != 1:
        raise PropertyViolation(f"(v,m)-tipo varia na classe {block.core}", context=block.core)
    return values.pop()
