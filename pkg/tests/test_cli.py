from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from emvkit.cli import run

DATA = Path(__file__).parent / "data"


def call(*argv, tmp=None):
    argv = [str(DATA / a) if a.endswith(".json") and not Path(a).is_absolute() else a for a in argv]
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, (json.loads(buf.getvalue()) if buf.getvalue() else None)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_verify_chain2():
    code, rep = call("verify", "chain2.json")
    assert code == 0 and rep["result"]["violations"] == []
    assert rep["algebra"] == {"kind": "chain", "size": 3, "idempotents": 2, "top": "2"}
    assert rep["command"]["spec"] == "chain2.json"


def test_morphisms_product():
    code, rep = call("morphisms", "prod_c2_c1.json")
    values = [m["values"] for m in rep["result"]["morphisms"]]
    assert code == 0 and len(values) == 2
    assert any(v["(1,0)"] == "1/2" for v in values)
    assert any(v["(0,1)"] == "1" for v in values)


def test_extend_chain2():
    code, rep = call("extend", "chain2.json", "--sub", "sub02.json", "--state", "s0.json")
    assert code == 0 and rep["result"]["extension"] == {"0": "0", "1": "1/2", "2": "1"}


def test_states_and_decompose():
    code, rep = call("states", "prod_c2_c1.json", "--check", "state_c2_c1.json")
    assert code == 0 and rep["result"]["is_state"] and not rep["result"]["is_morphism"]
    code, rep = call("decompose", "prod_c2_c1.json", "--state", "state_c2_c1.json")
    assert rep["result"]["weights"] == {"s0": "1/2", "s1": "1/2"}


def test_violated_input_exit_2(tmp_path):
    bad = write(tmp_path, "bad.json", {"values": {"0": "0", "1": "1", "2": "1"}})
    code, rep = call("decompose", "chain2.json", "--state", bad)
    assert code == 2
    assert rep["error"]["code"] == "NotAState" and rep["error"]["witness"] is not None


def test_malformed_spec_exit_2(tmp_path):
    spec = write(tmp_path, "t.json", {"kind": "table", "oplus": [[0, 1], [1]]})
    code, rep = call("verify", spec)
    assert code == 2 and rep["error"]["code"] == "MalformedTable"


def test_usage_error_exit_1(capsys):
    assert run(["frobnicate", "x.json"], out=io.StringIO()) == 1
    assert run(["extend", str(DATA / "chain2.json")], out=io.StringIO()) == 1
    assert "usage error" in capsys.readouterr().err


def test_missing_file_exit_1():
    assert run(["verify", "/nonexistent/spec.json"], out=io.StringIO()) == 1


def test_symbolic_commands(tmp_path):
    t = write(tmp_path, "t.json", {"kind": "finsubsets"})
    n = write(tmp_path, "n.json", {"kind": "representing", "inner": {"kind": "finsubsets"}})
    geo = write(tmp_path, "geo.json", {"tail": {"n0": 1, "c": "1/2", "q": "1/2"}})
    code, rep = call("classify", t, "--prestate", geo)
    assert code == 0 and rep["result"]["class"] == "PreStateNotStrong"
    ns = write(tmp_path, "ns.json", {"base": [[1, "1/2"]], "inf": "1/2"})
    assert call("classify", n, "--prestate", ns)[1]["result"]["class"] == "State"
    code, rep = call("represent", t, "--budget", "4")
    assert code == 0 and rep["result"]["violations"] == [] and rep["result"]["direct_image_ideal"]
    assert rep["result"]["top"] == {"complement": []}
    code, rep = call("radical", write(tmp_path, "cl.json", {"kind": "changlex"}), "--bound", "2")
    assert rep["result"]["radical"] == [{"b": 0, "m": 0}, {"b": 0, "m": 1}, {"b": 0, "m": 2}]
    a = write(tmp_path, "a.json", {"base": [[1, "2"]]})
    b = write(tmp_path, "b.json", {"base": [[2, "3"]]})
    code, rep = call("jordan", t, "--m1", a, "--m2", b)
    assert rep["result"]["measure"]["base"] == [[1, "2"], [2, "3"]]


def test_jordan_finite(tmp_path):
    b2 = write(tmp_path, "b2.json", {"kind": "boolean", "m": 2})
    m1 = write(tmp_path, "m1.json", {"values": ["0", "2", "0", "2"]})
    m2 = write(tmp_path, "m2.json", {"values": ["0", "0", "3", "3"]})
    code, rep = call("jordan", b2, "--m1", m1, "--m2", m2, "--op", "join")
    assert code == 0 and rep["result"]["measure"]["{0,1}"] == "5"
    neg = write(tmp_path, "neg.json", {"values": ["0", "-1", "0", "-1"]})
    code, rep = call("jordan", b2, "--m1", neg, "--m2", m2, "--op", "pos")
    assert rep["result"]["measure"]["{0}"] == "0" and rep["result"]["negative_part"]["{0}"] == "1"


def test_output_is_deterministic():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run(["morphisms", str(DATA / "prod_c2_c1.json")], out=buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "emvkit.cli", "verify", str(DATA / "chain2.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["violations"] == []


@pytest.mark.parametrize("cmd", ["morphisms", "decompose", "extend"])
def test_finite_only_commands_reject_symbolic(tmp_path, cmd):
    t = write(tmp_path, "t.json", {"kind": "finsubsets"})
    extra = {"morphisms": [], "decompose": ["--state", t], "extend": ["--sub", t, "--state", t]}[cmd]
    code, rep = call(cmd, t, *extra)
    assert code == 2 and rep["error"]["code"] == "UnsupportedCarrier"
