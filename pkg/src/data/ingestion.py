"""
Camada de ingestão das descrições de multi-leques.

Um multi-leque chega à CLI de duas formas: como arquivo JSON (campos
``rank``, ``rays``, ``maximal_simplices`` e ``name`` opcional, índices em
base 1) ou como nome de fixture (``P2``, ``P2modB:3``, ``bundle:...``).
Os arquivos de exemplo ficam em ``dados/fans``, mas o diretório pode ser
informado, o que facilita testes automatizados.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.fans.builders import fixture
from src.fans.multifan import MultiFan
from src.utils.errors import FanIngestionError

logger = logging.getLogger(__name__)

# Diretório padrão dos arquivos JSON de multi-leques
# Usa caminho relativo ao arquivo atual para garantir portabilidade
DEFAULT_FAN_DIR = Path(__file__).resolve().parents[2] / "dados" / "fans"


@dataclass(frozen=True)
class FanSchema:
    """
    Nomes de campos e valores padrão do JSON de multi-leques.

    Attributes
    ----------
    rank : str
        Campo com a dimensão n.
    rays : str
        Campo com a lista de vetores geradores.
    simplices : str
        Campo com a lista de simplexos maximais.
    name : str
        Campo opcional com o nome descritivo.
    index_base : int
        Base dos índices de raios no arquivo (1 no formato publicado).
    default_wplus : int
        w⁺ quando o simplexo não informa o peso.
    default_wminus : int
        w⁻ quando o simplexo não informa o peso.
    """

    rank: str = "rank"
    rays: str = "rays"
    simplices: str = "maximal_simplices"
    name: str = "name"
    index_base: int = 1
    default_wplus: int = 1
    default_wminus: int = 0


# Esquema usado pela CLI e pela persistência
DEFAULT_SCHEMA = FanSchema()


def _resolve_path(filename: Union[str, Path], base_dir: Optional[Path]) -> Path:
    """
    Resolve o caminho absoluto do arquivo a partir do diretório base.

    Parameters
    ----------
    filename : Union[str, Path]
        Nome do arquivo ou caminho relativo.
    base_dir : Optional[Path]
        Diretório base opcional. Se None, usa o diretório padrão.

    Returns
    -------
    Path
    """

    base = base_dir or DEFAULT_FAN_DIR
    candidate = filename if isinstance(filename, Path) else Path(filename)
    if not candidate.is_absolute() and not candidate.exists():
        candidate = base / candidate
    return candidate


def load_fan_payload(
    filename: Union[str, Path], *, base_dir: Optional[Path] = None
) -> Dict[str, Any]:
    """
    Lê o JSON de um multi-leque com validações básicas.

    Parameters
    ----------
    filename : Union[str, Path]
    base_dir : Optional[Path], optional

    Returns
    -------
    Dict[str, Any]
        O objeto JSON de topo.

    Raises
    ------
    FanIngestionError
        Se o arquivo não existir, não for JSON válido ou não for um objeto.
    """

    path = _resolve_path(filename, base_dir)
    if not path.exists():
        raise FanIngestionError(f"Arquivo {path} não encontrado.", context=str(path))

    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FanIngestionError(f"Falha ao ler {path}: {exc}", context=str(path)) from exc

    if not isinstance(payload, dict):
        raise FanIngestionError(f"O arquivo {path} não contém um objeto JSON.", context=str(path))
    payload.setdefault(DEFAULT_SCHEMA.name, path.stem)
    logger.debug("multi-leque lido de %s", path)
    return payload


def _looks_like_file(source: str) -> bool:
    return source.endswith(".json") or "/" in source or Path(source).exists()


def load_fan(source: Union[str, Path], *, base_dir: Optional[Path] = None) -> MultiFan:
    """
    Carrega um multi-leque a partir de um arquivo JSON ou nome de fixture.

    Parameters
    ----------
    source : Union[str, Path]
        Caminho do JSON (absoluto, relativo ao diretório atual ou a
        ``base_dir``) ou nome de fixture.
    base_dir : Optional[Path], optional

    Returns
    -------
    MultiFan

    Raises
    ------
    FanIngestionError
        Problemas de arquivo ou de esquema.
    InvalidFan
        Nome de fixture desconhecido ou estrutura inconsistente.
    """

    # Importação local: preprocessing depende do esquema definido aqui
    from src.data.preprocessing import build_multifan

    if isinstance(source, Path) or _looks_like_file(source):
        return build_multifan(load_fan_payload(source, base_dir=base_dir))
    if base_dir is not None and (base_dir / source).exists():
        return build_multifan(load_fan_payload(source, base_dir=base_dir))
    return fixture(source)
