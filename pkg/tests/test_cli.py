import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfspectra import cli
from cfspectra.exact import QuadIrr
from cfspectra.words import TailSpec, parse_cf

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--output", "json", *argv)
    return code, json.loads(text)


def validate(name, payload):
    schema = json.loads((SCHEMAS / f"{name}.json").read_text())
    jsonschema.validate(payload, schema)


@pytest.fixture(autouse=True)
def no_config_file(monkeypatch):
    monkeypatch.delenv(cli.CONFIG_ENV, raising=False)


def test_value_examples():
    code, text = run("value", "[0;(1 4)~]")
    assert code == 0 and text.startswith("-2 + 2*sqrt(2)") and "0.82842712474619" in text
    assert run("value", "[0;1 2]")[1].startswith("2/3")
    _, payload = run_json("value", "[0;(1)~]")
    assert QuadIrr.parse(payload["exact"]) == QuadIrr(-1, 1, 2, 5)
    validate("value", payload)


def test_value_digits():
    _, payload = run_json("value", "[0;(1)~]", "--digits", "10")
    assert payload["decimal"] == "0.6180339887"


@settings(max_examples=200)
@given(
    st.integers(0, 9),
    st.lists(st.integers(1, 9), max_size=4).map(tuple),
    st.lists(st.integers(1, 9), min_size=1, max_size=3).map(tuple),
)
def test_value_round_trip(a0, pre, per):
    text = f"[{a0}; {TailSpec(pre, per)}]"
    out = io.StringIO()
    assert cli.main(["--output", "json", "value", text], out=out) == 0
    payload = json.loads(out.getvalue())
    assert QuadIrr.parse(payload["exact"]) == parse_cf(text).value()
    assert parse_cf(payload["canonical"]).tail == parse_cf(text).tail


def test_parse_error_exit_code(capsys):
    code, _ = run("value", "[0; 1 x]")
    assert code == 2
    assert "position 6" in capsys.readouterr().err


def test_thickness():
    code, payload = run_json("thickness", "--variant", "k4", "--prefix", "1 4", "--depth", "4")
    assert code == 0 and payload["tau_lower_float"] > 1.03
    validate("thickness", payload)
    _, payload = run_json("thickness", "--variant", "c", "--k", "5", "--prefix", "1 2", "--depth", "3")
    assert payload["tau_lower_float"] > 1
    validate("thickness", payload)


def test_thickness_needs_k_for_cstyle():
    assert run("thickness", "--variant", "c", "--prefix", "1")[0] == 2
    assert run("thickness", "--variant", "nope")[0] == 2


def test_tree():
    code, payload = run_json("tree", "--variant", "k4", "--prefix", "1 3", "--depth", "1")
    assert code == 0
    assert [n["word"] for n in payload["nodes"]] == [[1, 3], [1, 3, 1], [1, 3, 2], [1, 3, 3], [1, 3, 4]]
    validate("tree", payload)
    code, text = run("--output", "csv", "tree", "--prefix", "1 3", "--depth", "1")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 5 and rows[0]["type"] == "first"


def test_sum_claim_alias():
    code, payload = run_json("sum", "--claim", "k13-plus-tilde-k14")
    assert code == 0
    assert abs(payload["lo_float"] - 1.57041) < 1e-5 and abs(payload["hi_float"] - 1.61695) < 1e-5
    validate("sum", payload)


def test_sum_custom_sides():
    code, payload = run_json("sum", "--left", "k4:1 4 1 1", "--right", "k4:1 3 2")
    assert code == 0
    validate("sum", payload)


def test_sum_failures():
    code, payload = run_json("sum", "--left", "k4:1 3", "--right", "tilde-k4:1 4")
    assert code == 1 and "thickness" in payload["error"]
    validate("sum", payload)
    assert run("sum", "--claim", "nope")[0] == 2
    assert run("sum")[0] == 2


def test_spectrum():
    code, text = run("spectrum", "--k", "2", "--period-max", "1")
    lines = text.strip().splitlines()
    assert code == 0 and len(lines) == 2
    assert "sqrt(5)" in lines[0] and "2*sqrt(2)" in lines[1]
    _, payload = run_json("spectrum", "--k", "4", "--period-max", "3", "--below", "[4; (1 4)~]")
    validate("spectrum", payload)
    assert all(float(p["decimal"]) <= 32 ** 0.5 for p in payload["points"])
    _, payload = run_json("spectrum", "--k", "4", "--period-max", "2", "--below", "2*sqrt(2)")
    assert [p["value"] for p in payload["points"]] == ["sqrt(5)", "2*sqrt(2)"]


def test_spectrum_csv():
    code, text = run("--output", "csv", "spectrum", "--k", "3", "--period-max", "2")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and rows[-1]["value"] == "sqrt(21)" and json.loads(rows[-1]["period"]) in ([1, 3], [3, 1])


def test_spectrum_cap():
    assert run("spectrum", "--k", "2", "--period-max", "9")[0] == 2


def test_certify_gluing():
    code, payload = run_json("certify", "--filter", "gluing", "--s-max", "3")
    assert code == 0 and payload and all(r["verdict"] == "PASS" for r in payload)
    validate("certify", payload)


def test_certify_exit_code_on_failure():
    code, text = run("certify", "--filter", "beta.stated-range")
    assert code == 1 and "FAIL" in text
    assert run("certify", "--filter", "no-such-claim")[0] == 1


def test_certify_csv():
    code, text = run("--output", "csv", "certify", "--filter", "endpoints.identities")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and rows and all(r["verdict"] == "PASS" for r in rows)


def test_dynamics_check():
    code, payload = run_json("--seed", "5", "dynamics-check", "--samples", "200", "--points", "50")
    assert code == 0
    validate("dynamics-check", payload)
    assert payload["conjugation"]["samples"] == 200
    assert len(payload["orbit_coding"]) == 10
    again = run_json("--seed", "5", "dynamics-check", "--samples", "200", "--points", "50")[1]
    assert again == payload


def test_config_file(tmp_path, monkeypatch):
    path = tmp_path / "cfspectra.conf"
    path.write_text("# settings\noutput = json\nprecision_bits=96  # enough\n")
    monkeypatch.setenv(cli.CONFIG_ENV, str(path))
    cfg = cli.load_config()
    assert cfg.output == "json" and cfg.precision_bits == 96 and cfg.depth == 10
    code, text = run("value", "[0;1 2]")
    assert json.loads(text)["exact"] == "2/3"
    assert cli.load_config({"output": "text"}).output == "text"


@pytest.mark.parametrize(
    "content",
    ["precision_bits = 32\n", "depth = 17\n", "colour = red\n", "depth\n", "depth = deep\n", "output = xml\n", "s_max = 0\n"],
)
def test_config_validation(tmp_path, content):
    path = tmp_path / "bad.conf"
    path.write_text(content)
    with pytest.raises(cli.ConfigError):
        cli.load_config(environ={cli.CONFIG_ENV: str(path)})


def test_bad_flags_exit_with_two():
    assert run("--precision-bits", "16", "value", "[0;1]")[0] == 2
    assert run("--depth", "20", "value", "[0;1]")[0] == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "cfspectra", "value", "[0;(1 4)~]"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and res.stdout.startswith("-2 + 2*sqrt(2)")
