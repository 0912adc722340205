"""
Classificação dos multi-leques extremais para a divisibilidade de c₁.

Um multi-leque completo não singular com T₀ = 1 e pesos unitários cujo T_y
tem a forma de N = n + 1 tem n + 1 raios e n + 1 simplexos maximais (ℙⁿ);
na forma de N = n tem n + 2 raios e 2n simplexos maximais e é o leque de
um fibrado projetivo sobre ℙ¹ ou de um ℙ¹-fibrado sobre ℙ^{n−1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from src.algebra.lattice import Vector, columns_matrix, solve_rational
from src.analysis.genera import todd, ty_genus
from src.fans.builders import BundleSpec
from src.fans.chern import is_divisible
from src.fans.multifan import MultiFan, is_complete
from src.utils.errors import NotDivisible, PreconditionViolated, SingularInput

logger = logging.getLogger(__name__)

PROJECTIVE_SPACE = "projective_space"
BUNDLE = "bundle"
NONE = "none"


@dataclass(frozen=True)
class BundleDescriptor:
    """
    Fibrado reconhecido e a numeração que realiza suas relações.

    Attributes
    ----------
    spec : BundleSpec
        r = 1 (ℙ^{n−1}-fibrado sobre ℙ¹) ou r = n − 1 (ℙ¹-fibrado).
    labeling : Tuple[int, ...]
        Índice do raio que faz o papel de v_0, v_1, …, v_{n+1}.
    """

    spec: BundleSpec
    labeling: Tuple[int, ...]

    @property
    def twists(self) -> Tuple[int, ...]:
        return self.spec.twists


@dataclass(frozen=True)
class ExtremalClass:
    """
    Resultado de ``classify_extremal``.

    Attributes
    ----------
    kind : str
        ``"projective_space"``, ``"bundle"`` ou ``"none"``.
    n : int
    bundle : Optional[BundleDescriptor]
    ty_form : Optional[str]
        ``"n+1"`` ou ``"n"`` quando T_y tem uma das formas extremais.
    c1_divisible_by_n : bool
    """

    kind: str
    n: int
    bundle: Optional[BundleDescriptor] = None
    ty_form: Optional[str] = None
    c1_divisible_by_n: bool = False


def _check_preconditions(fan: MultiFan) -> None:
    if not fan.is_nonsingular:
        raise PreconditionViolated(f"{fan.name or 'Δ'} é singular", context=fan.name)
    if not is_complete(fan):
        raise PreconditionViolated(f"{fan.name or 'Δ'} não é completo", context=fan.name)
    bad = [I for I in fan.maximal_keys if fan.weight(I) != 1]
    if bad:
        raise PreconditionViolated(f"pesos w(I) ≠ 1 em {bad}", context=bad)
    if todd(fan) != 1:
        raise PreconditionViolated("o grau precisa ser 1", context=fan.name)


def _ty_form(fan: MultiFan) -> Optional[str]:
    n = fan.rank
    coefficients = ty_genus(fan).coefficients
    if coefficients == (1,) * (n + 1):
        return "n+1"
    if coefficients == tuple(1 if k in (0, n) else 2 for k in range(n + 1)):
        return "n"
    return None


def _add(*vectors: Sequence[int]) -> Vector:
    return tuple(sum(parts) for parts in zip(*vectors))


def _scaled(vector: Sequence[int], factor: int) -> Vector:
    return tuple(factor * x for x in vector)


def _bundle_shape(fan: MultiFan, pair: Tuple[int, int], rest: Sequence[int]) -> bool:
    """Σ^{(n)} = {{x} ∪ (R∖{y}) : x no par, y ∈ R}."""
    expected = {
        tuple(sorted((x,) + tuple(i for i in rest if i != y))) for x in pair for y in rest
    }
    return expected == set(fan.maximal_keys)


def _integer_solution(fan: MultiFan, columns: Sequence[int], target: Sequence[int]) -> Optional[Tuple[int, ...]]:
    if not columns:
        return () if not any(target) else None
    try:
        solution = solve_rational(columns_matrix([fan.rays[i] for i in columns], fan.rank), target)
    except SingularInput:
        return None
    if any(x.denominator != 1 for x in solution):
        return None
    return tuple(int(x) for x in solution)


def _search_bundle(fan: MultiFan) -> Optional[BundleDescriptor]:
    n = fan.rank
    rays = [r for (r,) in fan.faces(1)]
    zero = (0,) * n

    # ℙ^{n−1}-fibrado sobre ℙ¹: o restante soma zero e v_a + v_b = −Σ k_i v_i
    for a, b in combinations(rays, 2):
        rest = [i for i in rays if i not in (a, b)]
        if _add(*(fan.rays[i] for i in rest)) != zero or not _bundle_shape(fan, (a, b), rest):
            continue
        excluded = rest[-1]
        others = rest[:-1]
        target = _scaled(_add(fan.rays[a], fan.rays[b]), -1)
        twists = _integer_solution(fan, others, target)
        if twists is None:
            continue
        labeling = (a, b) + tuple(others) + (excluded,)
        logger.debug("fibrado sobre ℙ¹ com par (%d, %d) e twists %s", a, b, twists)
        return BundleDescriptor(spec=BundleSpec(n, 1, twists), labeling=labeling)

    # ℙ¹-fibrado sobre ℙ^{n−1}: v_a + v_b = 0 e Σ R = −k v_a
    for a, b in combinations(rays, 2):
        if _add(fan.rays[a], fan.rays[b]) != zero:
            continue
        rest = [i for i in rays if i not in (a, b)]
        if not _bundle_shape(fan, (a, b), rest):
            continue
        total = _add(*(fan.rays[i] for i in rest))
        solution = _integer_solution(fan, [a], _scaled(total, -1))
        if solution is None:
            continue
        labeling = tuple(rest) + (a, b)
        logger.debug("ℙ¹-fibrado com par (%d, %d) e k=%d", a, b, solution[0])
        return BundleDescriptor(spec=BundleSpec(n, n - 1, solution), labeling=labeling)
    return None


def classify_extremal(fan: MultiFan) -> ExtremalClass:
    """
    Reconhece ℙⁿ e os fibrados projetivos extremais.

    Parameters
    ----------
    fan : MultiFan
        Não singular, completo, com grau 1 e w(I) = 1 para todo I.

    Returns
    -------
    ExtremalClass

    Raises
    ------
    PreconditionViolated
    """

    _check_preconditions(fan)
    n = fan.rank
    rays = len(fan.faces(1))
    tops = len(fan.maximal_keys)
    form = _ty_form(fan)
    divisible = is_divisible(fan, n) if n > 1 else True
    zero = (0,) * n

    if (rays, tops) == (n + 1, n + 1):
        if _add(*(fan.rays[r] for (r,) in fan.faces(1))) == zero:
            return ExtremalClass(PROJECTIVE_SPACE, n, ty_form=form, c1_divisible_by_n=divisible)
    elif (rays, tops) == (n + 2, 2 * n):
        if n < 3 or len(fan.faces(2)) == n * (n + 3) // 2:
            descriptor = _search_bundle(fan)
            if descriptor is not None:
                return ExtremalClass(BUNDLE, n, descriptor, ty_form=form, c1_divisible_by_n=divisible)
    logger.info("%s não é extremal (raios=%d, maximais=%d)", fan.name, rays, tops)
    return ExtremalClass(NONE, n, ty_form=form, c1_divisible_by_n=divisible)


def balanced_twists(descriptor: BundleDescriptor) -> Tuple[int, ...]:
    """
    Reescreve (k_2, …, k_n) com Σk + 2 = −kn como k̄ = (k, k_2 + k, …, k_n + k).

    Então Σk̄ = −2.

    Raises
    ------
    NotDivisible
        Se n não dividir Σk + 2 ou o fibrado não for sobre ℙ¹.
    """

    spec = descriptor.spec
    if spec.r != 1:
        raise NotDivisible("só fibrados sobre ℙ¹ admitem a forma balanceada", context=spec.label)
    total = sum(spec.twists) + 2
    if total % spec.n:
        raise NotDivisible(f"{spec.n} não divide Σk + 2 = {total}", context=spec.label)
    k = -total // spec.n
    return (k,) + tuple(ki + k for ki in spec.twists)


def extremal_labels(result: ExtremalClass) -> List[str]:
    """Linhas curtas para relatórios."""
    lines = [f"classe: {result.kind}", f"forma de T_y: {result.ty_form or '-'}"]
    if result.bundle is not None:
        lines.append(f"fibrado: {result.bundle.spec.label}")
    lines.append(f"c1 divisível por n: {'sim' if result.c1_divisible_by_n else 'não'}")
    return lines
