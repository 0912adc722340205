"""
Normalização do JSON de multi-leques e persistência.

Mantemos esta etapa separada da ingestão para que as regras do esquema
(índices em base 1, pesos padrão, tipos inteiros) possam ser testadas sem
tocar no sistema de arquivos.

Este módulo é responsável por:
- Conversão do JSON para ``MultiFan`` (e de volta)
- Escrita dos arquivos gerados pelo subcomando ``build``
- Identificação estável de um multi-leque por hash
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.data.ingestion import DEFAULT_FAN_DIR, DEFAULT_SCHEMA, FanSchema
from src.fans.multifan import MaximalSimplex, MultiFan
from src.utils.errors import FanIngestionError

logger = logging.getLogger(__name__)


def _as_int(value: Any, where: str) -> int:
    """Aceita apenas inteiros JSON (bool excluído)."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise FanIngestionError(f"{where}: esperado inteiro, recebido {value!r}", context=where)
    return value


def _int_list(value: Any, where: str) -> List[int]:
    if not isinstance(value, list):
        raise FanIngestionError(f"{where}: esperada lista, recebido {value!r}", context=where)
    return [_as_int(x, f"{where}[{k}]") for k, x in enumerate(value)]


def build_multifan(payload: Dict[str, Any], schema: FanSchema = DEFAULT_SCHEMA) -> MultiFan:
    """
    Converte o objeto JSON em ``MultiFan``.

    Parameters
    ----------
    payload : Dict[str, Any]
        Objeto com ``rank``, ``rays``, ``maximal_simplices`` e ``name``.
    schema : FanSchema, optional

    Returns
    -------
    MultiFan

    Raises
    ------
    FanIngestionError
        Campos ausentes ou com tipo errado.
    InvalidFan
        Índices fora do intervalo, pesos negativos, simplexos repetidos
        (levantados pela construção do ``MultiFan``).
    DependentRays
    EmptyTopDimension
    """

    missing = [f for f in (schema.rank, schema.rays, schema.simplices) if f not in payload]
    if missing:
        raise FanIngestionError(f"campos obrigatórios ausentes: {missing}", context=missing)

    rank = _as_int(payload[schema.rank], schema.rank)
    raw_rays = payload[schema.rays]
    if not isinstance(raw_rays, list):
        raise FanIngestionError(f"{schema.rays} precisa ser uma lista", context=schema.rays)
    rays = [_int_list(ray, f"{schema.rays}[{k}]") for k, ray in enumerate(raw_rays)]

    raw_simplices = payload[schema.simplices]
    if not isinstance(raw_simplices, list):
        raise FanIngestionError(f"{schema.simplices} precisa ser uma lista", context=schema.simplices)
    simplices = []
    for k, entry in enumerate(raw_simplices):
        where = f"{schema.simplices}[{k}]"
        if not isinstance(entry, dict) or "rays" not in entry:
            raise FanIngestionError(f"{where}: esperado objeto com 'rays'", context=where)
        indices = [i - schema.index_base for i in _int_list(entry["rays"], f"{where}.rays")]
        wplus = _as_int(entry.get("wplus", schema.default_wplus), f"{where}.wplus")
        wminus = _as_int(entry.get("wminus", schema.default_wminus), f"{where}.wminus")
        simplices.append(MaximalSimplex(tuple(indices), wplus, wminus))

    name = payload.get(schema.name)
    fan = MultiFan(rank, rays, simplices, name=str(name) if name is not None else None)
    logger.debug("%r construído a partir do JSON", fan)
    return fan


def fan_to_payload(fan: MultiFan, schema: FanSchema = DEFAULT_SCHEMA) -> Dict[str, Any]:
    """Objeto JSON canônico de ``fan`` (inverso de ``build_multifan``)."""
    payload: Dict[str, Any] = {
        schema.rank: fan.rank,
        schema.rays: [list(ray) for ray in fan.rays],
        schema.simplices: [
            {
                "rays": [i + schema.index_base for i in simplex.rays],
                "wplus": simplex.wplus,
                "wminus": simplex.wminus,
            }
            for simplex in fan.simplices
        ],
    }
    if fan.name is not None:
        payload[schema.name] = fan.name
    return payload


def fan_digest(fan: MultiFan) -> str:
    """
    SHA-256 do conteúdo estrutural (sem o nome).

    Duas descrições com os mesmos raios, simplexos e pesos têm o mesmo hash.
    """

    payload = fan_to_payload(fan)
    payload.pop(DEFAULT_SCHEMA.name, None)
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def persist_fan(fan: MultiFan, filename: Optional[str] = None, directory: Optional[Path] = None) -> Path:
    """
    Salva o JSON de ``fan`` para reuso em execuções futuras.

    Parameters
    ----------
    fan : MultiFan
    filename : Optional[str], optional
        Caminho de destino; relativo a ``directory`` quando este é dado, senão
        ao diretório atual. Sem ``filename`` usa o nome do multi-leque.
    directory : Optional[Path], optional
        Diretório base; sem ``filename`` o padrão é ``dados/fans``.

    Returns
    -------
    Path
        Caminho absoluto do arquivo criado.
    """

    if filename:
        target = Path(filename)
        if not target.is_absolute() and directory is not None:
            target = directory / target
    else:
        target = (directory or DEFAULT_FAN_DIR) / (_safe_name(fan.name or "fan") + ".json")
    target.parent.mkdir(parents=True, exist_ok=True)
    content = json.dumps(fan_to_payload(fan), indent=2, ensure_ascii=False)
    target.write_text(content + "\n", encoding="utf-8")
    return target.resolve()


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
