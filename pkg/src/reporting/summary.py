"""
Geração de relatórios a partir dos resultados dos subcomandos.

Cada execução da CLI produz um ``GenusReport``: um registro de valores JSON
nativos (chaves em texto, listas, racionais como texto) que pode ser
serializado e relido sem perdas. A partir dele este módulo formata o
relatório em Markdown e o persiste na pasta ``relatorios``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional

import pandas as pd

from src.algebra.cyclotomic import CycloNumber
from src.algebra.series import LaurentPoly
from src.analysis.characters import CharacterTable
from src.analysis.genera import GenusSeries

# Diretório onde os relatórios serão salvos
RELATORIOS_DIR = Path(__file__).resolve().parents[2] / "relatorios"


# ---------------------------------------------------------------------------
# Conversão para valores JSON nativos
# ---------------------------------------------------------------------------


def cyclo_to_json(value: CycloNumber) -> Dict[str, Any]:
    """Coeficientes na base ζ_M^j como texto, junto com o condutor."""
    return {"conductor": value.conductor, "coefficients": [str(c) for c in value.coefficients]}


def cyclo_from_json(data: Mapping[str, Any]) -> CycloNumber:
    return CycloNumber(int(data["conductor"]), [Fraction(c) for c in data["coefficients"]])


def _poly_to_json(poly: LaurentPoly) -> Dict[str, Any]:
    return {str(a): cyclo_to_json(c) for a, c in poly.terms.items()}


def series_to_json(genus: GenusSeries) -> Dict[str, Any]:
    """
    Série {expoente de q → {expoente de t → coeficiente}}.

    Todos os expoentes de q até a ordem pedida aparecem, mesmo os nulos.
    """

    g = genus.series.granularity
    return {
        "kind": genus.kind,
        "sigma": str(genus.sigma),
        "vector": list(genus.vector),
        "qorder": genus.qorder,
        "granularity": g,
        "conductor": genus.conductor,
        "normalized": genus.normalized,
        "coefficients": {
            str(Fraction(s, g)): _poly_to_json(poly) for s, poly in enumerate(genus.series.coefficients)
        },
    }


def series_from_json(data: Mapping[str, Any]) -> Dict[Fraction, LaurentPoly]:
    """Inverso de ``series_to_json`` para os coeficientes."""
    return {
        Fraction(q): LaurentPoly({int(a): cyclo_from_json(c) for a, c in terms.items()})
        for q, terms in data["coefficients"].items()
    }


def _point_label(point: Iterable[int]) -> str:
    return ",".join(str(x) for x in point)


def table_to_json(table: CharacterTable) -> Dict[str, Any]:
    """Entradas não nulas da tabela, indexadas por ``"u1,u2,..."``."""
    g = table.granularity
    entries = {}
    for u in table.support():
        series = table[u]
        entries[_point_label(u)] = {
            str(Fraction(s, g)): cyclo_to_json(c)
            for s, c in enumerate(series.coefficients)
            if not c.is_zero()
        }
    return {
        "sigma": str(table.sigma),
        "qorder": table.qorder,
        "bound": table.bound,
        "granularity": g,
        "conductor": table.conductor,
        "orbifold": table.orbifold,
        "entries": entries,
    }


def _jsonable(value: Any) -> Any:
    """Tuplas viram listas, chaves viram texto e racionais viram texto."""
    if isinstance(value, CycloNumber):
        return cyclo_to_json(value)
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, float, str)):
        return value
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


# ---------------------------------------------------------------------------
# Registro do relatório
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenusReport:
    """
    Resultado de um subcomando, pronto para JSON e Markdown.

    Attributes
    ----------
    command : str
        Subcomando que gerou o relatório.
    fan : Dict[str, Any]
        Identidade: ``name``, ``hash``, ``rank``, ``rays``, ``maximal``.
    structure : Dict[str, Any]
        ``complete``, ``nonsingular``, ``condition_P``, ``primitive``, ``deg``.
    invariants : Dict[str, Any]
        ``h_vector``, ``e_vector``, ``ty``, ``todd``, ``signature``, ``c1``.
    series : Optional[Dict[str, Any]]
        Série pedida no formato de ``series_to_json``.
    table : Optional[Dict[str, Any]]
        Tabela de caracteres no formato de ``table_to_json``.
    verdicts : Dict[str, bool]
        Resultado de cada verificação executada.
    details : Dict[str, Any]
        Informações específicas do subcomando.
    warnings : List[str]
    """

    command: str
    fan: Dict[str, Any] = field(default_factory=dict)
    structure: Dict[str, Any] = field(default_factory=dict)
    invariants: Dict[str, Any] = field(default_factory=dict)
    series: Optional[Dict[str, Any]] = None
    table: Optional[Dict[str, Any]] = None
    verdicts: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        for item in fields(self):
            object.__setattr__(self, item.name, _jsonable(getattr(self, item.name)))

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GenusReport":
        known = {item.name for item in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def to_json(self) -> str:
        """JSON determinístico (chaves ordenadas, indentação fixa)."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "GenusReport":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Markdown
# ---------------------------------------------------------------------------


def dataframe_to_markdown(df: pd.DataFrame, headers: Iterable[str]) -> str:
    """
    Converte um DataFrame pequeno em uma tabela Markdown.

    Parameters
    ----------
    df : pd.DataFrame
    headers : Iterable[str]
        Colunas, na ordem em que devem aparecer.

    Returns
    -------
    str
    """

    headers = list(headers)
    header_row = "| " + " | ".join(headers) + " |"
    separator = "| " + " | ".join("---" for _ in headers) + " |"
    content_rows = [
        "| " + " | ".join(str(row[h]) for h in headers) + " |" for _, row in df.iterrows()
    ]
    return "\n".join([header_row, separator, *content_rows])


def _bullets(values: Mapping[str, Any]) -> str:
    return "\n".join(f"- **{k.replace('_', ' ')}**: {_display(v)}" for k, v in values.items())


def _display(value: Any) -> str:
    if isinstance(value, bool):
        return "sim" if value else "não"
    if value is None:
        return "-"
    if isinstance(value, list):
        return "(" + ", ".join(_display(v) for v in value) + ")"
    if isinstance(value, dict) and set(value) == {"conductor", "coefficients"}:
        return f"{cyclo_from_json(value)} (M={value['conductor']})"
    return str(value)


def invariants_frame(invariants: Mapping[str, Any]) -> pd.DataFrame:
    """Uma linha por k com h_k, e_k e o coeficiente de (−y)^k em T_y."""
    columns = {key: invariants.get(key) or [] for key in ("h_vector", "e_vector", "ty")}
    size = max((len(v) for v in columns.values()), default=0)
    rows = [
        {
            "k": k,
            "h_k": columns["h_vector"][k] if k < len(columns["h_vector"]) else "-",
            "e_k": columns["e_vector"][k] if k < len(columns["e_vector"]) else "-",
            "T_y": columns["ty"][k] if k < len(columns["ty"]) else "-",
        }
        for k in range(size)
    ]
    return pd.DataFrame(rows, columns=["k", "h_k", "e_k", "T_y"])


def series_frame(series: Mapping[str, Any]) -> pd.DataFrame:
    """Termos não nulos da série, uma linha por monômio t^a q^s."""
    rows = []
    for q, terms in series["coefficients"].items():
        for a, coeff in terms.items():
            rows.append({"q": q, "t": a, "coeficiente": str(cyclo_from_json(coeff))})
    return pd.DataFrame(rows, columns=["q", "t", "coeficiente"])


def table_frame(table: Mapping[str, Any]) -> pd.DataFrame:
    """Entradas não nulas da tabela de caracteres."""
    rows = [
        {"u": f"({u})", "q": q, "coeficiente": str(cyclo_from_json(coeff))}
        for u, entry in table["entries"].items()
        for q, coeff in entry.items()
    ]
    return pd.DataFrame(rows, columns=["u", "q", "coeficiente"])


def verdicts_frame(verdicts: Mapping[str, bool]) -> pd.DataFrame:
    rows = [{"Verificação": k.replace("_", " "), "Resultado": "ok" if v else "FALHOU"} for k, v in verdicts.items()]
    return pd.DataFrame(rows, columns=["Verificação", "Resultado"])


def build_markdown_report(report: GenusReport) -> str:
    """
    Monta o relatório em Markdown, uma seção por grupo de resultados.

    Seções sem conteúdo são omitidas, então a saída de ``validate`` não
    mostra tabelas de série e a de ``elliptic`` não repete invariantes que
    não foram calculados.
    """

    name = report.fan.get("name") or "Δ"
    blocos = [f"# Relatório `{report.command}`: {name}"]
    if report.fan:
        blocos += ["## Multi-leque", _bullets(report.fan)]
    if report.structure:
        blocos += ["## Estrutura", _bullets(report.structure)]
    if report.invariants:
        scalars = {k: v for k, v in report.invariants.items() if k not in ("h_vector", "e_vector", "ty")}
        blocos += [
            "## Invariantes",
            dataframe_to_markdown(invariants_frame(report.invariants), headers=["k", "h_k", "e_k", "T_y"]),
        ]
        if scalars:
            blocos.append(_bullets(scalars))
    if report.series is not None:
        header = {k: v for k, v in report.series.items() if k != "coefficients"}
        frame = series_frame(report.series)
        blocos += ["## Série", _bullets(header)]
        blocos.append(
            dataframe_to_markdown(frame, headers=["q", "t", "coeficiente"]) if not frame.empty else "Série nula."
        )
    if report.table is not None:
        header = {k: v for k, v in report.table.items() if k != "entries"}
        blocos += [
            "## Tabela de caracteres",
            _bullets(header),
            dataframe_to_markdown(table_frame(report.table), headers=["u", "q", "coeficiente"]),
        ]
    if report.details:
        blocos += ["## Detalhes", _bullets(report.details)]
    if report.verdicts:
        blocos += [
            "## Verificações",
            dataframe_to_markdown(verdicts_frame(report.verdicts), headers=["Verificação", "Resultado"]),
        ]
    if report.warnings:
        blocos += ["## Avisos", "\n".join(f"- {w}" for w in report.warnings)]
    return "\n\n".join(blocos) + "\n"


def persist_report(
    content: str, filename: str = "relatorio.md", directory: Optional[Path] = None
) -> Path:
    """
    Salva o relatório na pasta ``relatorios`` (ou em ``directory``).

    Returns
    -------
    Path
        Caminho absoluto do arquivo criado.
    """

    destino_dir = directory or RELATORIOS_DIR
    destino_dir.mkdir(parents=True, exist_ok=True)
    destino = destino_dir / filename
    destino.write_text(content, encoding="utf-8")
    return destino
