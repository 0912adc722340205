"""
Modelo de dados de multi-leques simpliciais (Δ, 𝒱).

Um multi-leque é descrito pelos vetores geradores v_i de cada raio e pela
lista de simplexos maximais com pesos w⁺ e w⁻. O conjunto Σ é o fecho
descendente dos simplexos maximais (incluindo o simplexo vazio).

Convenção de índices: internamente os raios são numerados a partir de 0;
o JSON externo usa numeração a partir de 1 e é convertido em
``src.data.preprocessing``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import lcm
from src.algebra.lattice import (
    Covector,
    FiniteAbelianGroup,
    Vector,
    dual_basis,
    identity_matrix,
    is_primitive,
    lattice_intersection,
    mat_vec,
    pairing,
    quotient_group,
    saturate,
)
from src.utils.errors import (
    DependentRays,
    EmptyTopDimension,
    InvalidFan,
    KeyNotInSigma,
    NotGeneric,
    SingularInput,
)

logger = logging.getLogger(__name__)

# Quantidade padrão de vetores genéricos usados em verificações de consistência
DEFAULT_VECTOR_COUNT = 3

Key = Tuple[int, ...]


@dataclass(frozen=True)
class MaximalSimplex:
    """
    Simplexo de dimensão máxima com seus pesos.

    Attributes
    ----------
    rays : Key
        Índices (base 0) dos raios, em ordem crescente.
    wplus : int
        Peso w⁺(I) ≥ 0.
    wminus : int
        Peso w⁻(I) ≥ 0.
    """

    rays: Key
    wplus: int = 1
    wminus: int = 0

    def __post_init__(self) -> None:
        rays = tuple(sorted(int(i) for i in self.rays))
        if len(set(rays)) != len(rays):
            raise InvalidFan(f"simplexo com raio repetido: {self.rays}", context=self.rays)
        if self.wplus < 0 or self.wminus < 0:
            raise InvalidFan(f"pesos negativos em {rays}", context=rays)
        object.__setattr__(self, "rays", rays)

    @property
    def weight(self) -> int:
        """w(I) = w⁺(I) − w⁻(I)."""
        return self.wplus - self.wminus


@dataclass(frozen=True)
class FaceIsotropy:
    """
    Grupo H_K = L_K / L_{K,𝒱} de uma face K ∈ Σ.

    Attributes
    ----------
    key : Key
        A face K.
    basis : Tuple[Vector, ...]
        Base de L_K = L ∩ span{v_i : i ∈ K}.
    group : FiniteAbelianGroup
        O quociente escrito nas coordenadas da base acima.
    """

    key: Key
    basis: Tuple[Vector, ...]
    group: FiniteAbelianGroup
    dimension: int = 0

    @property
    def order(self) -> int:
        return self.group.order

    def elements(self) -> List[Tuple[int, ...]]:
        return self.group.elements()

    def representative(self, element: Sequence[int]) -> Vector:
        """Representante v(h) ∈ L_K ⊂ L."""
        coords = self.group.representative(element)
        return tuple(
            sum(c * vec[i] for c, vec in zip(coords, self.basis)) for i in range(self.dimension)
        )


class MultiFan:
    """
    Multi-leque simplicial n-dimensional com vetores geradores.

    A construção valida a estrutura e calcula, para cada simplexo maximal I,
    a base dual {u_i^I} e o grupo H_I = L / L_{I,𝒱}.

    Parameters
    ----------
    rank : int
        Dimensão n do reticulado L.
    rays : Sequence[Sequence[int]]
        Vetores geradores v_i.
    simplices : Iterable[MaximalSimplex]
        Simplexos maximais com pesos.
    name : Optional[str], optional
        Nome descritivo (fixture ou arquivo de origem).

    Raises
    ------
    InvalidFan
        Dimensões erradas, índices fora do intervalo ou simplexos repetidos.
    EmptyTopDimension
        Se não houver simplexo maximal.
    DependentRays
        Se algum simplexo maximal tiver geradores dependentes.
    """

    def __init__(
        self,
        rank: int,
        rays: Sequence[Sequence[int]],
        simplices: Iterable[MaximalSimplex],
        name: Optional[str] = None,
    ) -> None:
        self.rank = int(rank)
        self.rays: Tuple[Vector, ...] = tuple(tuple(int(c) for c in ray) for ray in rays)
        self.name = name

        for index, ray in enumerate(self.rays):
            if len(ray) != self.rank:
                raise InvalidFan(
                    f"raio {index} tem dimensão {len(ray)}, esperado {self.rank}", context=index
                )

        maximal: Dict[Key, MaximalSimplex] = {}
        for simplex in simplices:
            if len(simplex.rays) != self.rank:
                raise InvalidFan(
                    f"simplexo {simplex.rays} deveria ter {self.rank} raios", context=simplex.rays
                )
            if any(i < 0 or i >= len(self.rays) for i in simplex.rays):
                raise InvalidFan(f"índice fora do intervalo em {simplex.rays}", context=simplex.rays)
            if simplex.rays in maximal:
                raise InvalidFan(
                    f"conjunto de vértices repetido: {simplex.rays}", context=simplex.rays
                )
            maximal[simplex.rays] = simplex
        if not maximal:
            raise EmptyTopDimension("o multi-leque não possui simplexos maximais")

        self._maximal = dict(sorted(maximal.items()))
        self._duals: Dict[Key, Dict[int, Covector]] = {}
        self._groups: Dict[Key, FiniteAbelianGroup] = {}
        for key in self._maximal:
            vectors = [self.rays[i] for i in key]
            try:
                duals = dual_basis(vectors)
                self._groups[key] = quotient_group(vectors, self.rank)
            except SingularInput as exc:
                raise DependentRays(f"geradores dependentes no simplexo {key}", context=key) from exc
            self._duals[key] = dict(zip(key, duals))

        closure = set()
        for key in self._maximal:
            for size in range(len(key) + 1):
                closure.update(combinations(key, size))
        self._cones: Tuple[Key, ...] = tuple(sorted(closure, key=lambda c: (len(c), c)))
        self._cone_set = frozenset(self._cones)
        self._face_groups: Dict[Key, FaceIsotropy] = {}

    # -- estrutura -----------------------------------------------------------

    @property
    def simplices(self) -> Tuple[MaximalSimplex, ...]:
        return tuple(self._maximal.values())

    @property
    def maximal_keys(self) -> Tuple[Key, ...]:
        return tuple(self._maximal)

    @property
    def cones(self) -> Tuple[Key, ...]:
        """Σ inteiro, incluindo o simplexo vazio."""
        return self._cones

    def faces(self, k: int) -> Tuple[Key, ...]:
        """Σ^{(k)}."""
        return tuple(c for c in self._cones if len(c) == k)

    def has_cone(self, key: Sequence[int]) -> bool:
        return tuple(sorted(key)) in self._cone_set

    def weight(self, key: Key) -> int:
        return self._maximal[key].weight

    def star(self, key: Sequence[int]) -> Tuple[Key, ...]:
        """Simplexos maximais que contêm K (isto é, Σ_K^{(n−k)})."""
        wanted = set(key)
        return tuple(I for I in self._maximal if wanted.issubset(I))

    def link_rays(self, key: Sequence[int]) -> Key:
        """Raios de Σ′_K^{(1)}: vértices de simplexos I ⊇ K fora de K."""
        wanted = set(key)
        return tuple(sorted({i for I in self.star(key) for i in I if i not in wanted}))

    def _require_maximal(self, key: Sequence[int]) -> Key:
        key = tuple(sorted(key))
        if key not in self._maximal:
            raise KeyNotInSigma(f"{key} não é simplexo maximal", context=key)
        return key

    # -- dados por simplexo --------------------------------------------------

    def dual(self, key: Sequence[int]) -> Dict[int, Covector]:
        """Base dual {u_i^I} indexada pelo raio i."""
        return self._duals[self._require_maximal(key)]

    def group(self, key: Sequence[int]) -> FiniteAbelianGroup:
        """H_I = L / L_{I,𝒱} para I maximal."""
        return self._groups[self._require_maximal(key)]

    def pairings(self, key: Sequence[int], vector: Sequence) -> Dict[int, Fraction]:
        """⟨u_i^I, v⟩ para i ∈ I."""
        return {i: Fraction(pairing(u, vector)) for i, u in self.dual(key).items()}

    def face_isotropy(self, key: Sequence[int]) -> FaceIsotropy:
        """
        H_K = L_K / L_{K,𝒱} para qualquer K ∈ Σ.

        Raises
        ------
        KeyNotInSigma
            Se K não pertence a Σ.
        """

        key = tuple(sorted(key))
        if key not in self._cone_set:
            raise KeyNotInSigma(f"{key} não pertence a Σ", context=key)
        if key not in self._face_groups:
            vectors = [self.rays[i] for i in key]
            if len(key) == self.rank:
                basis = identity_matrix(self.rank)
                group = self._groups[key]
            else:
                sat = saturate(vectors, self.rank)
                basis = sat.basis
                coords = [tuple(int(x) for x in mat_vec(sat.coordinates, v)) for v in vectors]
                group = quotient_group(coords, len(key))
            self._face_groups[key] = FaceIsotropy(
                key=key, basis=tuple(basis), group=group, dimension=self.rank
            )
        return self._face_groups[key]

    @property
    def isotropy_lcm(self) -> int:
        """r = mmc |H_I| sobre os simplexos maximais."""
        return lcm(*(g.order for g in self._groups.values()))

    @property
    def is_nonsingular(self) -> bool:
        return all(g.order == 1 for g in self._groups.values())

    def __repr__(self) -> str:
        label = self.name or "sem nome"
        return f"MultiFan({label}, n={self.rank}, raios={len(self.rays)}, maximais={len(self._maximal)})"


@dataclass(frozen=True)
class FanDiagnostics:
    """
    Resultado de ``validate``.

    Attributes
    ----------
    rank : int
    ray_count : int
    maximal_count : int
    primitive : bool
        Todos os geradores são primitivos.
    non_primitive_rays : Tuple[int, ...]
    nonsingular : bool
        Todos os |H_I| são 1.
    isotropy_orders : Dict[Key, int]
    warnings : Tuple[str, ...]
    """

    rank: int
    ray_count: int
    maximal_count: int
    primitive: bool
    non_primitive_rays: Tuple[int, ...]
    nonsingular: bool
    isotropy_orders: Dict[Key, int] = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()


def validate(fan: MultiFan) -> FanDiagnostics:
    """
    Diagnóstico estrutural de um multi-leque já construído.

    A independência dos geradores e a existência de simplexos maximais são
    verificadas na construção (``DependentRays``, ``EmptyTopDimension``);
    aqui são reportadas as propriedades que não invalidam o objeto.
    """

    non_primitive = tuple(i for i, ray in enumerate(fan.rays) if not is_primitive(ray))
    used = {i for key in fan.maximal_keys for i in key}
    warnings = []
    unused = [i for i in range(len(fan.rays)) if i not in used]
    if unused:
        warnings.append(f"raios fora de qualquer simplexo maximal: {unused}")
    null_weights = [key for key in fan.maximal_keys if fan.weight(key) == 0]
    if null_weights:
        warnings.append(f"simplexos com w(I) = 0: {null_weights}")
    for message in warnings:
        logger.warning(message)

    return FanDiagnostics(
        rank=fan.rank,
        ray_count=len(fan.rays),
        maximal_count=len(fan.maximal_keys),
        primitive=not non_primitive,
        non_primitive_rays=non_primitive,
        nonsingular=fan.is_nonsingular,
        isotropy_orders={key: fan.group(key).order for key in fan.maximal_keys},
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Vetores genéricos e grau
# ---------------------------------------------------------------------------


def lattice_L_V(fan: MultiFan) -> Tuple[Vector, ...]:
    """Base de L_𝒱 = ∩_I L_{I,𝒱}."""
    if fan.rank == 0:
        return ()
    return lattice_intersection([[fan.rays[i] for i in key] for key in fan.maximal_keys])


def _functionals(fan: MultiFan, key: Key = ()) -> List[Covector]:
    wanted = set(key)
    return [
        u
        for I in fan.star(key)
        for i, u in fan.dual(I).items()
        if i not in wanted
    ]


def is_generic(fan: MultiFan, vector: Sequence, key: Key = ()) -> bool:
    """⟨u_i^I, v⟩ ≠ 0 para todo I ⊇ K e i ∈ I∖K."""
    return all(pairing(u, vector) != 0 for u in _functionals(fan, key))


def check_generic(fan: MultiFan, vector: Sequence, key: Key = ()) -> None:
    """Levanta ``NotGeneric`` se o vetor estiver em alguma parede."""
    if len(vector) != fan.rank:
        raise NotGeneric(f"vetor {tuple(vector)} com dimensão errada", context=tuple(vector))
    if not is_generic(fan, vector, key):
        raise NotGeneric(f"vetor {tuple(vector)} não é genérico", context=tuple(vector))


def is_injective_on(vector: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """⟨u − u′, v⟩ ≠ 0 para pontos distintos da janela."""
    values = {pairing(p, vector) for p in points}
    return len(values) == len({tuple(p) for p in points})


def generic_vectors(
    fan: MultiFan,
    count: int = 1,
    window: Optional[Sequence[Sequence[int]]] = None,
    key: Key = (),
) -> List[Vector]:
    """
    Busca determinística de vetores genéricos em L_𝒱.

    Os candidatos são Σ_i s_i M^i b_i sobre uma base b de L_𝒱, para
    M = 1, 2, 3, … e todos os sinais s_i (primeiro todos positivos). Em
    posto 1 o único candidato seria ±b_0, então a escala M multiplica
    também a primeira coordenada.

    Parameters
    ----------
    fan : MultiFan
    count : int, optional
        Quantidade de vetores distintos desejada.
    window : Optional[Sequence[Sequence[int]]], optional
        Pontos de L*; quando informada, só aceita vetores injetivos nela.
    key : Key, optional
        Exige genericidade apenas para simplexos I ⊇ K.

    Returns
    -------
    List[Vector]

    Raises
    ------
    NotGeneric
        Se a busca esgotar o limite (não deveria ocorrer).
    """

    if fan.rank == 0:
        return [()] * count
    basis = lattice_L_V(fan)
    functionals = _functionals(fan, key)
    limit = (len(functionals) + (len(window) ** 2 if window else 0)) * fan.rank + count + 2

    found: List[Vector] = []
    for M in range(1, limit + 1):
        scale = M if fan.rank == 1 else 1
        for signs in product((1, -1), repeat=fan.rank):
            candidate = tuple(
                sum(s * scale * M ** j * b[c] for j, (s, b) in enumerate(zip(signs, basis)))
                for c in range(fan.rank)
            )
            if candidate in found:
                continue
            if any(pairing(u, candidate) == 0 for u in functionals):
                continue
            if window is not None and not is_injective_on(candidate, window):
                continue
            found.append(candidate)
            if len(found) == count:
                logger.debug("vetores genéricos escolhidos: %s", found)
                return found
    raise NotGeneric("busca de vetores genéricos esgotada", context=fan.name)


def degree(fan: MultiFan, vector: Sequence) -> int:
    """
    d_v = Σ w(I) sobre os cones C(I) que contêm v.

    Raises
    ------
    NotGeneric
        Se v estiver em alguma parede.
    """

    check_generic(fan, vector)
    return sum(
        fan.weight(I)
        for I in fan.maximal_keys
        if all(p > 0 for p in fan.pairings(I, vector).values())
    )


def deg(fan: MultiFan) -> int:
    """Grau de um multi-leque pré-completo (primeiro vetor genérico)."""
    return degree(fan, generic_vectors(fan, 1)[0])


def projected_degree(fan: MultiFan, key: Sequence[int], vector: Sequence) -> int:
    """
    deg(Δ_J) ao longo da imagem de v em L^J.

    Σ_{I ⊇ J} w(I) · [⟨u_i^I, v⟩ > 0 para todo i ∈ I∖J].
    """

    key = tuple(sorted(key))
    if not fan.has_cone(key):
        raise KeyNotInSigma(f"{key} não pertence a Σ", context=key)
    check_generic(fan, vector, key)
    total = 0
    for I in fan.star(key):
        pairs = fan.pairings(I, vector)
        if all(pairs[i] > 0 for i in I if i not in key):
            total += fan.weight(I)
    return total


def is_complete(fan: MultiFan) -> bool:
    """
    Critério de completude por projeções unidimensionais.

    Para cada J ∈ Σ^{(n−1)} os pesos dos simplexos I ⊇ J precisam se
    equilibrar dos dois lados da reta L^J ⊗ ℝ. Em seguida o grau é comparado
    ao longo de alguns vetores genéricos.
    """

    if fan.rank == 0:
        return True
    for J in fan.faces(fan.rank - 1):
        projection = saturate([fan.rays[j] for j in J], fan.rank).projection
        balance = 0
        for I in fan.star(J):
            (extra,) = [i for i in I if i not in J]
            side = mat_vec(projection, fan.rays[extra])[0]
            balance += fan.weight(I) if side > 0 else -fan.weight(I)
        if balance != 0:
            logger.debug("Δ_J não é pré-completo para J=%s (saldo %d)", J, balance)
            return False
    degrees = {degree(fan, v) for v in generic_vectors(fan, DEFAULT_VECTOR_COUNT)}
    if len(degrees) != 1:
        logger.debug("graus divergentes entre vetores genéricos: %s", degrees)
        return False
    return True


# ---------------------------------------------------------------------------
# Projeções
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectedFan:
    """
    Multi-leque projetado Δ_K em L^K.

    Attributes
    ----------
    base : MultiFan
    key : Key
        A face K.
    fan : MultiFan
        Δ_K, com raios numerados na ordem de ``link_rays``.
    link_rays : Key
        Índices originais dos raios de Σ′_K^{(1)}.
    projection : Tuple[Tuple[int, ...], ...]
        Matriz L → L^K ≅ ℤ^{n−k}.
    """

    base: MultiFan
    key: Key
    fan: MultiFan
    link_rays: Key
    projection: Tuple[Tuple[int, ...], ...]


def project(fan: MultiFan, key: Sequence[int]) -> ProjectedFan:
    """
    Constrói Δ_K; a estrutura inteira de L^K vem da saturação por Smith.

    Raises
    ------
    KeyNotInSigma
        Se K não pertence a Σ.
    """

    key = tuple(sorted(key))
    if not fan.has_cone(key):
        raise KeyNotInSigma(f"{key} não pertence a Σ", context=key)
    if not key:
        return ProjectedFan(
            base=fan,
            key=(),
            fan=fan,
            link_rays=tuple(range(len(fan.rays))),
            projection=identity_matrix(fan.rank),
        )

    projection = saturate([fan.rays[i] for i in key], fan.rank).projection
    link = fan.link_rays(key)
    position = {old: new for new, old in enumerate(link)}
    rays = [mat_vec(projection, fan.rays[old]) for old in link]
    simplices = []
    for I in fan.star(key):
        source = fan._maximal[I]
        simplices.append(
            MaximalSimplex(
                tuple(position[i] for i in I if i not in key), source.wplus, source.wminus
            )
        )
    label = f"{fan.name or 'Δ'}_{list(key)}"
    projected = MultiFan(fan.rank - len(key), rays, simplices, name=label)
    return ProjectedFan(base=fan, key=key, fan=projected, link_rays=link, projection=tuple(projection))


# ---------------------------------------------------------------------------
# Vetores h e e
# ---------------------------------------------------------------------------


def mu(fan: MultiFan, key: Key, vector: Sequence) -> int:
    """μ(I) = #{i ∈ I : ⟨u_i^I, v⟩ > 0}."""
    return sum(1 for p in fan.pairings(key, vector).values() if p > 0)


def h_vector(fan: MultiFan, vector: Optional[Sequence] = None) -> Tuple[int, ...]:
    """
    h_k = Σ_{μ(I) = k} w(I).

    Raises
    ------
    NotGeneric
        Se o vetor informado não for genérico.
    """

    if vector is None:
        vector = generic_vectors(fan, 1)[0]
    check_generic(fan, vector)
    h = [0] * (fan.rank + 1)
    for I in fan.maximal_keys:
        h[mu(fan, I, vector)] += fan.weight(I)
    return tuple(h)


def e_vector(fan: MultiFan, vector: Optional[Sequence] = None) -> Tuple[int, ...]:
    """e_k = Σ_{J ∈ Σ^{(k)}} deg(Δ_J)."""
    if vector is None:
        vector = generic_vectors(fan, 1)[0]
    return tuple(
        sum(projected_degree(fan, J, vector) for J in fan.faces(k)) for k in range(fan.rank + 1)
    )


# ---------------------------------------------------------------------------
# Anel de faces em grau 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivCohClass:
    """
    Classe Σ c_i x_i de H_T²(Δ).

    Attributes
    ----------
    coefficients : Tuple[Fraction, ...]
        Um coeficiente por raio.
    """

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @classmethod
    def zero(cls, size: int) -> "EquivCohClass":
        return cls((0,) * size)

    @classmethod
    def pullback(cls, fan: MultiFan, u: Sequence) -> "EquivCohClass":
        """Imagem de u ∈ H²(BT): Σ ⟨u, v_i⟩ x_i."""
        return cls(tuple(pairing(u, ray) for ray in fan.rays))


def restriction(fan: MultiFan, x: EquivCohClass, key: Sequence[int]) -> Covector:
    """
    ι_I^*(x) = Σ_{i ∈ I} c_i u_i^I.

    Raises
    ------
    KeyNotInSigma
        Se I não for simplexo maximal.
    """

    duals = fan.dual(key)
    if len(x.coefficients) != len(fan.rays):
        raise InvalidFan("classe com número de coeficientes diferente do de raios")
    total = [Fraction(0)] * fan.rank
    for i, u in duals.items():
        c = x.coefficients[i]
        if c:
            total = [t + c * ui for t, ui in zip(total, u)]
    return tuple(total)


def window_points(bound: int, rank: int) -> List[Vector]:
    """Pontos de L* na caixa [−B, B]^n."""
    return [tuple(p) for p in product(range(-bound, bound + 1), repeat=rank)]
