"""Testes do registro de relatório e da saída em Markdown."""

from __future__ import annotations

from fractions import Fraction

import pandas as pd

from src.algebra.cyclotomic import Angle, CycloNumber
from src.analysis.characters import character_table
from src.analysis.genera import elliptic_genus_v
from src.reporting.summary import (
    GenusReport,
    build_markdown_report,
    cyclo_from_json,
    cyclo_to_json,
    dataframe_to_markdown,
    persist_report,
    series_from_json,
    series_to_json,
    table_to_json,
)


def _sample_report(p2) -> GenusReport:
    genus = elliptic_genus_v(p2, None, Angle(1, 3), qorder=1)
    return GenusReport(
        command="elliptic",
        fan={"name": "P2", "rank": 2},
        invariants={"h_vector": (1, 1, 1), "e_vector": (1, 3, 3), "ty": (1, 1, 1), "todd": 1},
        series=series_to_json(genus),
        verdicts={"constant_in_t": genus.is_constant()},
        details={"razao": Fraction(1, 3), "raiz": CycloNumber.one(3)},
        warnings=["aviso de teste"],
    )


def test_report_json_round_trip(p2):
    report = _sample_report(p2)
    assert GenusReport.from_json(report.to_json()) == report
    assert report.details["razao"] == "1/3"
    assert report.invariants["h_vector"] == [1, 1, 1]
    assert report.passed


def test_series_json_keeps_every_q_power(p2):
    genus = elliptic_genus_v(p2, None, Angle(1, 3), qorder=2)
    data = series_to_json(genus)
    assert list(data["coefficients"]) == ["0", "1", "2"]
    decoded = series_from_json(data)
    for s, poly in enumerate(genus.series.coefficients):
        assert decoded[Fraction(s)] == poly


def test_cyclo_json():
    value = CycloNumber.rational(Fraction(-2, 7), 5)
    assert cyclo_from_json(cyclo_to_json(value)) == value


def test_table_json_lists_support(p1):
    table = character_table(p1, Angle(1, 3), qorder=1, bound=3)
    data = table_to_json(table)
    assert set(data["entries"]) == {",".join(str(x) for x in u) for u in table.support()}
    assert data["orbifold"] is False


def test_markdown_sections(p2):
    content = build_markdown_report(_sample_report(p2))
    assert content.startswith("# Relatório `elliptic`: P2")
    for section in ("## Multi-leque", "## Invariantes", "## Série", "## Detalhes", "## Verificações", "## Avisos"):
        assert section in content
    assert "## Tabela de caracteres" not in content


def test_failed_verdict_is_reported():
    report = GenusReport(command="crosscheck", verdicts={"character_matches_fixed_point": False})
    assert not report.passed
    assert "FALHOU" in build_markdown_report(report)


def test_dataframe_to_markdown():
    df = pd.DataFrame([{"k": 0, "h_k": 1}, {"k": 1, "h_k": 3}])
    table = dataframe_to_markdown(df, headers=["k", "h_k"])
    assert table.splitlines() == ["| k | h_k |", "| --- | --- |", "| 0 | 1 |", "| 1 | 3 |"]


def test_persist_report(tmp_path):
    path = persist_report("# teste\n", "saida.md", tmp_path)
    assert path == tmp_path / "saida.md"
    assert path.read_text(encoding="utf-8") == "# teste\n"
