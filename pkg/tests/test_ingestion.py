"""Testes da leitura e da persistência dos multi-leques em JSON."""

from __future__ import annotations

import json

import pytest

from src.data.ingestion import DEFAULT_FAN_DIR, load_fan, load_fan_payload
from src.data.preprocessing import (
    build_multifan,
    fan_digest,
    fan_to_payload,
    persist_fan,
)
from src.fans.builders import BundleSpec, projective_bundle_fan, projective_space_fan
from src.fans.multifan import deg, is_complete
from src.utils.errors import DependentRays, FanIngestionError, InvalidFan


def _sample_payload() -> dict:
    return {
        "rank": 2,
        "rays": [[1, 0], [0, 1], [-1, -1]],
        "maximal_simplices": [{"rays": [1, 2]}, {"rays": [1, 3]}, {"rays": [2, 3]}],
    }


def test_file_and_fixture_agree():
    from_file = load_fan(DEFAULT_FAN_DIR / "p2.json")
    from_fixture = load_fan("P2")
    assert from_file.rays == from_fixture.rays
    assert from_file.maximal_keys == from_fixture.maximal_keys
    assert fan_digest(from_file) == fan_digest(from_fixture)


def test_relative_name_uses_default_directory():
    fan = load_fan("p2.json")
    assert fan.name == "P2"
    assert len(fan.maximal_keys) == 3


def test_payload_defaults():
    fan = build_multifan(_sample_payload())
    assert fan.name is None
    assert all(s.wplus == 1 and s.wminus == 0 for s in fan.simplices)
    assert fan.maximal_keys == ((0, 1), (0, 2), (1, 2))


def test_name_defaults_to_file_stem(tmp_path):
    path = tmp_path / "meu_leque.json"
    path.write_text(json.dumps(_sample_payload()), encoding="utf-8")
    assert load_fan_payload(path)["name"] == "meu_leque"
    assert load_fan(path).name == "meu_leque"


def test_persist_round_trip(tmp_path):
    fan = projective_bundle_fan(BundleSpec(3, 1, (1, -1)))
    path = persist_fan(fan, "bundle.json", tmp_path)
    assert path == (tmp_path / "bundle.json").resolve()
    loaded = load_fan(path)
    assert loaded.name == fan.name
    assert loaded.rays == fan.rays
    assert fan_digest(loaded) == fan_digest(fan)


def test_persist_without_filename_uses_safe_name(tmp_path):
    path = persist_fan(projective_bundle_fan(BundleSpec(2, 1, (1,))), directory=tmp_path)
    assert path.parent == tmp_path.resolve()
    assert path.suffix == ".json"
    assert ":" not in path.name


def test_payload_is_one_based():
    payload = fan_to_payload(projective_space_fan(1))
    assert payload["maximal_simplices"][0]["rays"] == [1]
    assert build_multifan(payload).maximal_keys == projective_space_fan(1).maximal_keys


def test_digest_ignores_name():
    fan = projective_space_fan(2)
    renamed = build_multifan({**fan_to_payload(fan), "name": "outro"})
    assert fan_digest(renamed) == fan_digest(fan)
    assert fan_digest(fan) != fan_digest(projective_space_fan(3))


def test_signed_fan_file():
    fan = load_fan(DEFAULT_FAN_DIR / "multileque_com_sinal.json")
    assert is_complete(fan)
    assert deg(fan) == 1
    assert sorted(fan.weight(key) for key in fan.maximal_keys) == [-1, -1, -1, 2, 2, 2]


def test_dependent_rays_file():
    with pytest.raises(DependentRays):
        load_fan(DEFAULT_FAN_DIR / "raios_dependentes.json")


def test_missing_file(tmp_path):
    with pytest.raises(FanIngestionError):
        load_fan(tmp_path / "inexistente.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "quebrado.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(FanIngestionError):
        load_fan(path)


def test_top_level_must_be_object(tmp_path):
    path = tmp_path / "lista.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(FanIngestionError):
        load_fan(path)


@pytest.mark.parametrize(
    "change",
    [
        {"rank": None},
        {"rank": True},
        {"rays": [[1, 0], [0, "a"], [-1, -1]]},
        {"rays": "nada"},
        {"maximal_simplices": [[1, 2]]},
        {"maximal_simplices": [{"rays": [1, 2], "wplus": 1.5}]},
    ],
)
def test_schema_errors(change):
    payload = {**_sample_payload(), **change}
    if change.get("rank", 0) is None:
        del payload["rank"]
    with pytest.raises(FanIngestionError):
        build_multifan(payload)


def test_out_of_range_index():
    payload = {**_sample_payload(), "maximal_simplices": [{"rays": [1, 4]}]}
    with pytest.raises(InvalidFan):
        build_multifan(payload)
