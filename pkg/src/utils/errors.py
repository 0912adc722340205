"""
Hierarquia de exceções compartilhada por todas as camadas do projeto.

Cada erro sabe se representa uma entrada inválida (código de saída 2 na CLI)
ou a violação de uma propriedade verificada (código de saída 1). O restante
do código levanta sempre subclasses de ``MultiFanError``, o que permite ao
``main.py`` traduzir qualquer falha em um código de saída sem conhecer os
detalhes de cada módulo.
"""

from __future__ import annotations

from typing import Any, Optional


# Códigos de saída usados pela CLI
EXIT_OK = 0
EXIT_PROPERTY_VIOLATED = 1
EXIT_INPUT_ERROR = 2


class MultiFanError(Exception):
    """
    Exceção base do projeto.

    Attributes
    ----------
    context : Optional[Any]
        Objeto que ajuda a localizar o problema (simplexo, vetor, denominador).
    exit_code : int
        Código de saída que a CLI deve usar quando esta exceção escapa.
    """

    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message: str = "", context: Optional[Any] = None) -> None:
        super().__init__(message or self.__class__.__name__)
        self.context = context


class PropertyViolation(MultiFanError):
    """Uma identidade ou certificado exato falhou; não é erro de entrada."""

    exit_code = EXIT_PROPERTY_VIOLATED


# --- álgebra exata ---------------------------------------------------------


class SingularInput(MultiFanError):
    """Vetores linearmente dependentes ou sistema linear sem solução única."""


class ConductorMismatch(MultiFanError):
    """O valor não vive no corpo ciclotômico pedido."""


class CycloDivisionByZero(MultiFanError, ZeroDivisionError):
    """Inversão do zero de um corpo ciclotômico (ou de uma série/fração)."""


class ZetaIsOne(MultiFanError):
    """σ ≡ 0 mod 1: Φ(0, τ) = 0 e os quocientes ficam indefinidos."""


class PoleAtLatticePoint(MultiFanError):
    """Argumento de φ com m = 0, ω = 0 e f = 0, isto é, z′ inteiro."""


class ResidualPole(PropertyViolation):
    """
    Uma fração racional que deveria ser polinômio de Laurent ainda tem
    denominador. Sinaliza bug de implementação ou de truncamento.
    """


# --- multi-leques ------------------------------------------------------------


class InvalidFan(MultiFanError):
    """Dados estruturais inconsistentes (índices, tamanhos, pesos)."""


class DependentRays(InvalidFan):
    """Um simplexo maximal possui vetores geradores dependentes."""


class EmptyTopDimension(InvalidFan):
    """O multi-leque não tem nenhum simplexo maximal."""


class NotGeneric(MultiFanError):
    """O vetor pertence a algum hiperplano ⟨u_i^I, v⟩ = 0."""


class KeyNotInSigma(MultiFanError):
    """O conjunto de índices informado não é um simplexo de Σ."""


class ConditionPViolated(MultiFanError):
    """Os reticulados L_{I,V} não coincidem (condição (P) falha)."""


class NotDivisible(MultiFanError):
    """A primeira classe de Chern não é divisível pelo nível pedido."""


class PointOnWall(MultiFanError):
    """O ponto consultado na função DH está sobre algum hiperplano F_i."""


class NonIntegralOffsets(MultiFanError):
    """Os deslocamentos c_i do multipolitopo precisam ser inteiros aqui."""


class OutsideAffineSpace(MultiFanError):
    """O ponto não satisfaz ⟨u, v_i⟩ = c_i para os raios da chave K."""


class InfiniteIndex(MultiFanError):
    """O sobre-reticulado informado não tem índice finito."""


class NotComplete(MultiFanError):
    """A operação exige um multi-leque completo."""


class PreconditionViolated(MultiFanError):
    """Hipóteses de uma classificação ou verificação não são satisfeitas."""


# --- verificações cruzadas -------------------------------------------------


class WindowNotInjective(MultiFanError):
    """O vetor genérico não separa os pontos da janela."""


class WindowTooSmall(PropertyViolation):
    """Coeficiente não nulo em expoente inalcançável a partir da janela."""


# --- dados -----------------------------------------------------------------


class FanIngestionError(MultiFanError):
    """
    Problemas ao ler a descrição JSON de um multi-leque.

    Levantada quando o arquivo não existe, não é JSON válido, ou quando os
    campos obrigatórios estão ausentes ou com tipos errados.
    """
