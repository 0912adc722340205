"""
Álgebra linear exata sobre o reticulado L ≅ ℤⁿ.

Reúne a forma normal de Smith, bases duais, interseção de sub-reticulados e
os grupos abelianos finitos L/L' que aparecem como grupos de isotropia H_I.
Todos os valores são inteiros de precisão arbitrária ou ``Fraction``; não há
ponto flutuante neste módulo.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import List, Optional, Sequence, Tuple

from src.algebra.cyclotomic import Angle
from src.utils.errors import SingularInput

# Vetores de L são tuplas de inteiros; covetores de L*_ℚ são tuplas de frações
Vector = Tuple[int, ...]
Covector = Tuple[Fraction, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Operações elementares
# ---------------------------------------------------------------------------


def identity_matrix(size: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def transpose(matrix: Sequence[Sequence]) -> tuple:
    return tuple(zip(*matrix)) if matrix else ()


def mat_mul(left: Sequence[Sequence], right: Sequence[Sequence]) -> tuple:
    cols = transpose(right)
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in left
    )


def mat_vec(matrix: Sequence[Sequence], vector: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, vector)) for row in matrix)


def pairing(u: Sequence, v: Sequence):
    """Emparelhamento ⟨u, v⟩ entre L* e L (exato para int e Fraction)."""
    return sum(a * b for a, b in zip(u, v))


def is_primitive(vector: Sequence[int]) -> bool:
    divisor = 0
    for coord in vector:
        divisor = gcd(divisor, int(coord))
    return divisor == 1


def columns_matrix(vectors: Sequence[Sequence[int]], dimension: int) -> IntMatrix:
    """Matriz dimension × len(vectors) cujas colunas são os vetores."""
    return tuple(tuple(int(vec[i]) for vec in vectors) for i in range(dimension))


def _as_integral(values: Sequence[Fraction]) -> Vector:
    # Converte frações inteiras em int; qualquer denominador é erro interno
    out = []
    for value in values:
        value = Fraction(value)
        assert value.denominator == 1, f"valor não inteiro {value}"
        out.append(int(value))
    return tuple(out)


# ---------------------------------------------------------------------------
# Sistemas lineares racionais
# ---------------------------------------------------------------------------


def solve_rational(matrix: Sequence[Sequence], rhs: Sequence) -> Covector:
    """
    Resolve ``matrix · x = rhs`` exatamente por Gauss-Jordan.

    A matriz pode ser retangular (m × k, m ≥ k), mas precisa ter posto k para
    que a solução seja única.

    Parameters
    ----------
    matrix : Sequence[Sequence]
        Coeficientes inteiros ou racionais.
    rhs : Sequence
        Lado direito com m entradas.

    Returns
    -------
    Covector
        Solução única como tupla de ``Fraction``.

    Raises
    ------
    SingularInput
        Se o posto for menor que k ou o sistema for inconsistente.
    """

    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    n_rows = len(rows)
    n_cols = len(matrix[0]) if n_rows else 0

    pivot_row = 0
    for col in range(n_cols):
        chosen = next((r for r in range(pivot_row, n_rows) if rows[r][col] != 0), None)
        if chosen is None:
            raise SingularInput("sistema com posto deficiente", context=matrix)
        rows[pivot_row], rows[chosen] = rows[chosen], rows[pivot_row]
        pivot = rows[pivot_row][col]
        rows[pivot_row] = [x / pivot for x in rows[pivot_row]]
        for r in range(n_rows):
            factor = rows[r][col]
            if r != pivot_row and factor != 0:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1

    # Linhas excedentes precisam ser 0 = 0
    for r in range(pivot_row, n_rows):
        if rows[r][n_cols] != 0:
            raise SingularInput("sistema inconsistente", context=matrix)
    return tuple(rows[i][n_cols] for i in range(n_cols))


def rational_inverse(matrix: Sequence[Sequence]) -> Tuple[Covector, ...]:
    """Inversa exata de uma matriz quadrada; ``SingularInput`` se singular."""

    size = len(matrix)
    rows = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)]
        for i, row in enumerate(matrix)
    ]
    for col in range(size):
        chosen = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if chosen is None:
            raise SingularInput("matriz singular", context=matrix)
        rows[col], rows[chosen] = rows[chosen], rows[col]
        pivot = rows[col][col]
        rows[col] = [x / pivot for x in rows[col]]
        for r in range(size):
            factor = rows[r][col]
            if r != col and factor != 0:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return tuple(tuple(row[size:]) for row in rows)


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Determinante exato por eliminação; 1 para a matriz vazia."""

    rows = [[Fraction(x) for x in row] for row in matrix]
    size = len(rows)
    det = Fraction(1)
    for col in range(size):
        chosen = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if chosen is None:
            return Fraction(0)
        if chosen != col:
            rows[col], rows[chosen] = rows[chosen], rows[col]
            det = -det
        pivot = rows[col][col]
        det *= pivot
        for r in range(col + 1, size):
            factor = rows[r][col] / pivot
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


# ---------------------------------------------------------------------------
# Forma normal de Smith
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """
    Decomposição U·A·V = D com U, V unimodulares.

    Attributes
    ----------
    U : IntMatrix
        Matriz m × m das operações de linha.
    D : IntMatrix
        Matriz m × k diagonal com d_1 | d_2 | … (zeros no final).
    V : IntMatrix
        Matriz k × k das operações de coluna.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.V))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _swap_rows(a: List[List[int]], u: List[List[int]], i: int, j: int) -> None:
    if i != j:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]


def _swap_cols(a: List[List[int]], v: List[List[int]], i: int, j: int) -> None:
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]


def _add_row(a, u, target: int, source: int, factor: int) -> None:
    # linha[target] += factor · linha[source], espelhado em U
    a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
    u[target] = [x + factor * y for x, y in zip(u[target], u[source])]


def _add_col(a, v, target: int, source: int, factor: int) -> None:
    for row in a:
        row[target] += factor * row[source]
    for row in v:
        row[target] += factor * row[source]


def _smallest_entry(a: List[List[int]], start: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(start, len(a)):
        for j in range(start, len(a[0])):
            if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithDecomposition:
    """
    Calcula a forma normal de Smith de uma matriz inteira.

    Redução padrão por linhas e colunas escolhendo sempre o pivô de menor
    módulo; quando algum elemento restante não é divisível pelo pivô a linha
    correspondente é somada à linha do pivô e o passo recomeça.

    Parameters
    ----------
    matrix : Sequence[Sequence[int]]
        Matriz m × k de inteiros (pode ser nula ou vazia).

    Returns
    -------
    SmithDecomposition
        U, D, V com U·A·V = D, já verificados.
    """

    a = [[int(x) for x in row] for row in matrix]
    n_rows = len(a)
    n_cols = len(a[0]) if n_rows else 0
    u = [list(row) for row in identity_matrix(n_rows)]
    v = [list(row) for row in identity_matrix(n_cols)]

    for t in range(min(n_rows, n_cols)):
        pivot = _smallest_entry(a, t)
        if pivot is None:
            # Submatriz restante é nula
            break
        while True:
            _swap_rows(a, u, t, pivot[0])
            _swap_cols(a, v, t, pivot[1])
            clean = True
            for i in range(t + 1, n_rows):
                q = a[i][t] // a[t][t]
                if q:
                    _add_row(a, u, i, t, -q)
                clean = clean and a[i][t] == 0
            for j in range(t + 1, n_cols):
                q = a[t][j] // a[t][t]
                if q:
                    _add_col(a, v, j, t, -q)
                clean = clean and a[t][j] == 0
            if clean:
                bad = next(
                    (
                        i
                        for i in range(t + 1, n_rows)
                        for j in range(t + 1, n_cols)
                        if a[i][j] % a[t][t]
                    ),
                    None,
                )
                if bad is None:
                    break
                _add_row(a, u, t, bad, 1)
            pivot = _smallest_entry(a, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    result = SmithDecomposition(
        U=tuple(tuple(r) for r in u),
        D=tuple(tuple(r) for r in a),
        V=tuple(tuple(r) for r in v),
    )

    # Certificado: U·A·V = D e cadeia de divisibilidade
    assert not matrix or mat_mul(mat_mul(result.U, matrix), result.V) == result.D
    diag = result.diagonal
    assert all(
        (diag[i + 1] % diag[i] == 0) if diag[i] else diag[i + 1] == 0
        for i in range(len(diag) - 1)
    )
    return result


def integer_inverse(matrix: Sequence[Sequence[int]]) -> IntMatrix:
    """Inversa de uma matriz unimodular, devolvida com entradas inteiras."""
    return tuple(_as_integral(row) for row in rational_inverse(matrix))


# ---------------------------------------------------------------------------
# Bases duais e grupos quociente
# ---------------------------------------------------------------------------


def dual_basis(vectors: Sequence[Sequence[int]]) -> Tuple[Covector, ...]:
    """
    Base dual {u_i} com ⟨u_i, v_j⟩ = δ_ij.

    Os u_i são as linhas da inversa da matriz cujas colunas são os v_j.

    Raises
    ------
    SingularInput
        Se os vetores forem dependentes ou em número diferente da dimensão.
    """

    dimension = len(vectors)
    if any(len(vec) != dimension for vec in vectors):
        raise SingularInput("número de vetores difere da dimensão", context=vectors)
    return rational_inverse(columns_matrix(vectors, dimension))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    Grupo abeliano finito ℤⁿ / span(geradores) em coordenadas de Smith.

    Os elementos são tuplas canônicas (a_1, …, a_n) com 0 ≤ a_j < d_j.

    Attributes
    ----------
    invariants : Tuple[int, ...]
        Fatores invariantes d_1 | d_2 | … (todos ≥ 1).
    to_snf : IntMatrix
        Matriz U que leva um vetor de L às coordenadas de Smith.
    from_snf : IntMatrix
        U⁻¹, que devolve representantes em L.
    """

    invariants: Tuple[int, ...]
    to_snf: IntMatrix
    from_snf: IntMatrix

    @property
    def order(self) -> int:
        total = 1
        for d in self.invariants:
            total *= d
        return total

    @property
    def identity(self) -> Tuple[int, ...]:
        return tuple(0 for _ in self.invariants)

    def elements(self) -> List[Tuple[int, ...]]:
        return list(product(*(range(d) for d in self.invariants)))

    def representative(self, element: Sequence[int]) -> Vector:
        return tuple(int(x) for x in mat_vec(self.from_snf, element))

    def reduce(self, vector: Sequence[int]) -> Tuple[int, ...]:
        coords = mat_vec(self.to_snf, vector)
        return tuple(int(c) % d for c, d in zip(coords, self.invariants))

    def add(self, left: Sequence[int], right: Sequence[int]) -> Tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(left, right, self.invariants))

    def __len__(self) -> int:
        return self.order


def quotient_group(
    generators: Sequence[Sequence[int]], dimension: Optional[int] = None
) -> FiniteAbelianGroup:
    """
    Constrói ℤⁿ / span(generators) para n geradores independentes.

    Parameters
    ----------
    generators : Sequence[Sequence[int]]
        Geradores do sub-reticulado (colunas da matriz de Smith).
    dimension : Optional[int], optional
        Dimensão ambiente; inferida dos geradores quando omitida.

    Raises
    ------
    SingularInput
        Se o índice for infinito.
    """

    if dimension is None:
        dimension = len(generators[0]) if generators else 0
    if len(generators) != dimension:
        raise SingularInput("índice infinito: posto menor que a dimensão", context=generators)
    if dimension == 0:
        return FiniteAbelianGroup((), (), ())

    snf = smith_normal_form(columns_matrix(generators, dimension))
    invariants = snf.diagonal
    if any(d == 0 for d in invariants):
        raise SingularInput("índice infinito: geradores dependentes", context=generators)
    return FiniteAbelianGroup(
        invariants=tuple(invariants),
        to_snf=snf.U,
        from_snf=integer_inverse(snf.U),
    )


def chi_angle(u: Sequence, representative: Sequence[int]) -> Angle:
    """χ(u, h) como ângulo: ⟨u, v(h)⟩ mod 1."""
    return Angle.of(pairing(u, representative))


# ---------------------------------------------------------------------------
# Sub-reticulados
# ---------------------------------------------------------------------------


def lattice_span_basis(
    vectors: Sequence[Sequence[int]], dimension: int
) -> Tuple[Vector, ...]:
    """Base do ℤ-span de uma lista qualquer de vetores inteiros."""

    if not vectors:
        return ()
    snf = smith_normal_form(columns_matrix(vectors, dimension))
    back = integer_inverse(snf.U)
    basis = []
    for j, d in enumerate(snf.diagonal):
        if d:
            basis.append(tuple(d * back[i][j] for i in range(dimension)))
    return tuple(basis)


def contains(basis: Sequence[Sequence[int]], vector: Sequence) -> bool:
    """Pertinência de ``vector`` ao reticulado gerado pela base."""

    if not basis:
        return all(x == 0 for x in vector)
    try:
        coords = solve_rational(columns_matrix(basis, len(vector)), vector)
    except SingularInput:
        return False
    return all(c.denominator == 1 for c in coords)


def same_lattice(first: Sequence[Sequence[int]], second: Sequence[Sequence[int]]) -> bool:
    return all(contains(first, v) for v in second) and all(contains(second, v) for v in first)


def lattice_intersection(sublattices: Sequence[Sequence[Sequence[int]]]) -> Tuple[Vector, ...]:
    """
    Base da interseção de sub-reticulados de índice finito.

    Usa a dualidade (∩ L_i)* = Σ L_i*: soma os duais, obtém uma base do
    resultado e dualiza de volta.

    Parameters
    ----------
    sublattices : Sequence[Sequence[Sequence[int]]]
        Conjuntos de geradores, cada um de posto pleno.

    Returns
    -------
    Tuple[Vector, ...]
        Base inteira da interseção.
    """

    dimension = len(sublattices[0][0])
    dual_generators: List[Covector] = []
    for generators in sublattices:
        basis = lattice_span_basis(generators, dimension)
        dual_generators.extend(dual_basis(basis))

    # Denominador comum para trabalhar com inteiros
    common = 1
    for cov in dual_generators:
        for x in cov:
            common = common * x.denominator // gcd(common, x.denominator)
    scaled = [tuple(int(x * common) for x in cov) for cov in dual_generators]
    dual_sum = [
        tuple(Fraction(x, common) for x in vec)
        for vec in lattice_span_basis(scaled, dimension)
    ]
    return tuple(_as_integral(row) for row in rational_inverse(columns_matrix_rational(dual_sum)))


def columns_matrix_rational(vectors: Sequence[Sequence[Fraction]]) -> tuple:
    dimension = len(vectors)
    return tuple(tuple(vec[i] for vec in vectors) for i in range(dimension))


@dataclass(frozen=True)
class Saturation:
    """
    Dados de saturação de k vetores independentes em ℤⁿ.

    Attributes
    ----------
    projection : IntMatrix
        (n−k) × n; leva L sobre L / (L ∩ span), identificado com ℤ^{n−k}.
    basis : Tuple[Vector, ...]
        Base de L ∩ span (k vetores de L).
    coordinates : IntMatrix
        k × n; coordenadas de um vetor do span na base acima.
    """

    projection: IntMatrix
    basis: Tuple[Vector, ...]
    coordinates: IntMatrix


def saturate(vectors: Sequence[Sequence[int]], dimension: int) -> Saturation:
    """Satura o span de ``vectors`` em ℤⁿ via forma normal de Smith."""

    k = len(vectors)
    if k == 0:
        return Saturation(identity_matrix(dimension), (), ())
    snf = smith_normal_form(columns_matrix(vectors, dimension))
    if snf.rank != k:
        raise SingularInput("vetores dependentes na saturação", context=vectors)
    back = integer_inverse(snf.U)
    basis = tuple(tuple(back[i][j] for i in range(dimension)) for j in range(k))
    return Saturation(
        projection=snf.U[k:],
        basis=basis,
        coordinates=snf.U[:k],
    )
