import json
from pathlib import Path

import pytest

from gerst.cli import RunConfig, main, render_text, run
from gerst.errors import InputError
from gerst.examples import get_manifest

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_CASES = ["cohomology-iwasawa", "kuranishi-nakamura-generic", "poisson-nakamura-pi",
                "mirror-nak-family", "validate-cxn1n2-k1-k2"]


def call(argv, capsys):
    status = main(argv)
    out = capsys.readouterr().out
    return status, out


@pytest.mark.parametrize("case", GOLDEN_CASES)
def test_golden_outputs(case, capsys):
    command, key = case.split("-", 1)
    status, out = call([command, key], capsys)
    assert status == 0
    assert out == (GOLDEN / f"{case}.json").read_text()


def test_output_is_deterministic(capsys):
    first = call(["kuranishi", "cxn1n2-k1-k2"], capsys)
    second = call(["kuranishi", "cxn1n2-k1-k2"], capsys)
    assert first == second


def test_out_file_and_text_format(tmp_path, capsys):
    target = tmp_path / "o.txt"
    assert main(["cohomology", "torus-1", "--format", "text", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    text = target.read_text()
    assert "euler_characteristic: 0" in text
    assert "total:" in text


def test_params_are_parsed_as_json(capsys):
    status, out = call(["validate", "tyy-family", "--param", "n=2"], capsys)
    assert status == 0
    assert json.loads(out)["n"] == 2
    status, out = call(["show-example", "cxn1n2-k1-k2", "--param", "k1=1", "--param", "k2=3"], capsys)
    assert json.loads(out)["params"] == {"k1": 1, "k2": 3}


def test_list_examples(capsys, examples_dir):
    (examples_dir / "mine.json").write_text(json.dumps(get_manifest("iwasawa")))
    status, out = call(["list-examples"], capsys)
    keys = [e["key"] for e in json.loads(out)["examples"]]
    assert status == 0 and "nakamura-pi" in keys and "mine" in keys


def test_manifest_input(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(get_manifest("iwasawa")))
    status, out = call(["cohomology", "--manifest", str(path)], capsys)
    assert status == 0
    assert json.loads(out)["de_rham_betti"] == [1, 4, 8, 10, 8, 4, 1]


def test_invalid_manifest_exits_2_with_all_violations(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "torus", "fiber": [{"name": "x"}]}))
    status, out = call(["validate", "--manifest", str(path)], capsys)
    assert status == 2
    codes = [v["code"] for v in json.loads(out)["violations"]]
    assert "bad-kind" in codes and "bad-name" in codes


def test_usage_errors_exit_2(capsys):
    assert main(["nonsense"]) == 2
    assert main(["cohomology"]) == 2
    assert main(["cohomology", "iwasawa", "--max-order", "0"]) == 2
    assert main(["cohomology", "iwasawa", "--param", "novalue"]) == 2
    assert main(["cohomology", "no-such-example"]) == 2
    capsys.readouterr()


def test_non_poisson_bivector_exits_1_with_residual(tmp_path, capsys):
    obj = get_manifest("heisenberg-c")
    obj["mu"] = [{"coef": "1", "word": "X^Y"}]
    path = tmp_path / "h.json"
    path.write_text(json.dumps(obj))
    status, out = call(["poisson", "--manifest", str(path)], capsys)
    assert status == 1
    data = json.loads(out)
    assert data["error"] == "RejectionError" and "Z" in data["residual"]


def test_missing_bivector_is_input_error(capsys):
    status, _ = call(["poisson", "iwasawa"], capsys)
    assert status == 2
    status, out = call(["poisson", "iwasawa", "--mu", "zero"], capsys)
    assert status == 0 and json.loads(out)["dims"]["0"] == 1


def test_unmatched_mirror_exits_1_with_witness(tmp_path, capsys):
    obj = get_manifest("nak-family", {"extra_factor": False})
    obj["oracle"]["trivial"] = [[0, 2]]
    path = tmp_path / "rigged.json"
    path.write_text(json.dumps(obj))
    status, out = call(["mirror", "--manifest", str(path)], capsys)
    assert status == 1
    assert json.loads(out)["witness"]["reason"] == "hypothesis"


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("cohomology", key="iwasawa", manifest="x.json")
    with pytest.raises(InputError):
        RunConfig("cohomology", key="iwasawa", fmt="yaml")
    status, text = run(RunConfig("validate", key="torus-1"))
    assert status == 0 and json.loads(text)["valid"]


def test_render_text_aligns_scalars():
    assert render_text({"a": 1, "bbb": 2}) == "a    1\nbbb  2\n"
    assert render_text({"x": [1, {"y": 2}]}) == "x:\n  - 1\n  -\n    y  2\n"
