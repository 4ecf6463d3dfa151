import json

import pytest

from conftest import ALL_KEYS
from gerst.errors import InputError, ManifestError, UnresolvableError
from gerst.examples import get_manifest, list_examples, load_spec
from gerst.manifest import lower_central_length, parse_manifest
from gerst.scalar import Character


def nil(brackets, names=("X", "Y", "Z")):
    return {"name": "t", "kind": "nilmanifold", "fiber": [{"name": nm} for nm in names],
            "brackets": brackets}


def codes(err: ManifestError):
    return [v.code for v in err.violations]


@pytest.mark.parametrize("key", ALL_KEYS)
def test_builtins_validate(key):
    spec = load_spec(key)
    assert spec.name.startswith(key.split("-")[0])


def test_jacobi_violation_reported():
    bad = nil([{"pair": ["X", "Y"], "value": {"Z": "1"}},
               {"pair": ["X", "Z"], "value": {"X": "1"}}])
    with pytest.raises(ManifestError) as exc:
        parse_manifest(bad)
    assert "jacobi" in codes(exc.value)
    msg = next(v.message for v in exc.value.violations if v.code == "jacobi")
    assert "X" in msg and "Y" in msg and "Z" in msg


def test_all_violations_collected():
    bad = {"name": "t", "kind": "splitting", "n": 1,
           "fiber": [{"name": "lower"}, {"name": "A", "alpha": {"holo": ["1"], "anti": ["0"]}}],
           "brackets": [{"pair": ["A", "Q"], "value": {}}],
           "oracle": {"mode": "bogus"}}
    with pytest.raises(ManifestError) as exc:
        parse_manifest(bad)
    found = set(codes(exc.value))
    assert {"bad-name", "unknown-generator", "bad-oracle"} <= found
    assert len(exc.value.violations) >= 3


def test_bad_kind_and_duplicate_names():
    with pytest.raises(ManifestError) as exc:
        parse_manifest({"kind": "torus", "fiber": [{"name": "X"}, {"name": "X"}]})
    assert {"bad-kind", "duplicate-name"} <= set(codes(exc.value))


def test_non_unimodular_rejected():
    bad = {"name": "t", "kind": "splitting", "n": 1,
           "fiber": [{"name": "A", "alpha": {"holo": ["1"], "anti": ["0"]}}]}
    with pytest.raises(ManifestError) as exc:
        parse_manifest(bad)
    assert "not-unimodular" in codes(exc.value)


def test_character_must_match_brackets():
    bad = {"name": "t", "kind": "splitting", "n": 1,
           "fiber": [{"name": "A", "alpha": {"holo": ["1"], "anti": ["0"]}},
                     {"name": "B", "alpha": {"holo": ["-1"], "anti": ["0"]}},
                     {"name": "C", "alpha": {"holo": ["1"], "anti": ["0"]}},
                     {"name": "D", "alpha": {"holo": ["-1"], "anti": ["0"]}}],
           "brackets": [{"pair": ["A", "C"], "value": {"B": "1"}}]}
    with pytest.raises(ManifestError) as exc:
        parse_manifest(bad)
    assert "character-mismatch" in codes(exc.value)


def test_nakamura_generic_spec():
    spec = load_spec("nakamura-generic")
    assert spec.kind == "parallelizable" and spec.n == 1 and spec.m == 2
    assert [nm for nm, _ in spec.fiber] == ["Z2", "Z3"]
    z = Character([-1], [1])
    assert not spec.oracle.is_trivial(z)
    assert load_spec("nakamura-pi").oracle.is_trivial(z)
    with pytest.raises(UnresolvableError):
        spec.oracle.is_trivial(Character([1], [0]))


def test_abelian_and_nilpotency():
    spec = parse_manifest(nil([]))
    T = spec.algebra()
    assert not spec.hh and not spec.ah
    assert lower_central_length(T) == 1
    assert lower_central_length(load_spec("iwasawa").algebra()) == 2
    assert lower_central_length(load_spec("filiform-4").algebra()) == 3


def test_non_nilpotent_rejected():
    with pytest.raises(ManifestError) as exc:
        parse_manifest(nil([{"pair": ["X", "Y"], "value": {"Y": "1"}}], names=("X", "Y")))
    assert "not-nilpotent" in codes(exc.value)


def test_rule_table_inconsistency():
    bad = {"name": "t", "kind": "parallelizable", "n": 1,
           "fiber": [{"name": "A", "alpha": {"holo": ["1"], "anti": ["0"]}},
                     {"name": "B", "alpha": {"holo": ["-1"], "anti": ["0"]}}],
           "oracle": {"mode": "rule-table", "rules": [
               {"character": {"holo": ["1"], "anti": ["0"]}, "trivial": True},
               {"character": {"holo": ["-1"], "anti": ["0"]}, "trivial": False}]}}
    with pytest.raises(ManifestError) as exc:
        parse_manifest(bad)
    assert "inconsistent-rules" in codes(exc.value)


def test_toml_and_json_agree(tmp_path):
    obj = get_manifest("iwasawa")
    (tmp_path / "a.json").write_text(json.dumps(obj))
    (tmp_path / "a.toml").write_text(
        'name = "iwasawa"\nkind = "nilmanifold"\n'
        'fiber = [{name = "X"}, {name = "Y"}, {name = "Z"}]\n'
        'brackets = [{pair = ["X", "Y"], value = {Z = "1"}}]\n')
    a = parse_manifest(tmp_path / "a.json")
    b = parse_manifest(tmp_path / "a.toml")
    assert a.hh == b.hh and a.names == b.names and a.kind == b.kind


def test_bad_files(tmp_path):
    (tmp_path / "x.json").write_text("{not json")
    with pytest.raises(InputError) as exc:
        parse_manifest(tmp_path / "x.json")
    assert exc.value.code == "bad-json"
    with pytest.raises(InputError):
        parse_manifest(tmp_path / "missing.json")


def test_user_example_pack(examples_dir):
    obj = get_manifest("iwasawa")
    obj["name"] = "mine"
    (examples_dir / "mine.json").write_text(json.dumps(obj))
    keys = {k: src for k, src, _ in list_examples()}
    assert keys["iwasawa"] == "builtin"
    assert keys["mine"].endswith("mine.json")
    assert load_spec("mine").name == "mine"
    with pytest.raises(InputError):
        get_manifest("nope")


def test_family_parameters():
    assert load_spec("tyy-family", {"n": 2}).n == 2
    assert load_spec("cxn1n2-k1-k2", {"k1": 1, "k2": 3}).params == {"k1": 1, "k2": 3}
    with pytest.raises(InputError):
        get_manifest("cxn1n2-k1-k2", {"k1": 2, "k2": 2})
