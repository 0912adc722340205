"""Testes dos subcomandos e dos códigos de saída da CLI."""

from __future__ import annotations

from main import run
from src.data.ingestion import DEFAULT_FAN_DIR, load_fan
from src.fans.builders import hirzebruch_fan
from src.reporting.summary import GenusReport


def test_invariants_of_projective_line(capsys):
    assert run(["invariants", "P1"]) == 0
    assert "# Relatório `invariants`: P1" in capsys.readouterr().out


def test_invariants_of_projective_plane(capsys):
    assert run(["invariants", "P2"]) == 0
    out = capsys.readouterr().out
    assert "# Relatório `invariants`: P2" in out
    assert "## Invariantes" in out


def test_rigidity_writes_json(tmp_path):
    target = tmp_path / "rigidez.json"
    assert run(["rigidity", "P2", "--level", "3", "--qorder", "2", "--json", str(target)]) == 0
    report = GenusReport.from_json(target.read_text(encoding="utf-8"))
    assert report.command == "rigidity"
    assert report.details["vanishes"] is True
    assert report.verdicts["translation"] is True


def test_rigidity_requires_level():
    assert run(["rigidity", "P2"]) == 2


def test_validate_dependent_rays():
    assert run(["validate", str(DEFAULT_FAN_DIR / "raios_dependentes.json")]) == 2


def test_validate_weighted_quotient(capsys):
    assert run(["validate", "P2modB:2"]) == 0
    assert "isotropy orders" in capsys.readouterr().out


def test_build_fixture(tmp_path):
    target = tmp_path / "f2.json"
    assert run(["build", "hirzebruch:2", "-o", str(target)]) == 0
    assert target.exists()
    assert load_fan(target).rays == hirzebruch_fan(2).rays


def test_unknown_fixture():
    assert run(["invariants", "toro"]) == 2


def test_invalid_sigma():
    assert run(["elliptic", "P2", "--sigma", "abc"]) == 2


def test_missing_subcommand():
    assert run([]) == 2


def test_crosscheck_and_dh():
    assert run(["crosscheck", "P1", "--sigma", "1/3", "--qorder", "2", "--window", "4"]) == 0
    assert run(["dh", "P2", "--class", "1,0,0", "--window", "2"]) == 0


def test_dh_class_length_mismatch():
    assert run(["dh", "P2", "--class", "1,0"]) == 2


def test_classify_bundle(capsys):
    assert run(["classify", "bundle:n=3,r=1,k=[2,2]"]) == 0
    out = capsys.readouterr().out
    assert "bundle:n=3,r=1,k=[2,2]" in out
    assert "balanced twists" in out


def test_negative_qorder_is_rejected():
    assert run(["elliptic", "P2", "--sigma", "1/3", "--qorder", "-1"]) == 2
