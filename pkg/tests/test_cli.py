from __future__ import annotations

import json
import subprocess
import sys

import pytest

from quadfun.abgroup import cyclic
from quadfun.cli import main
from quadfun.qmodule import i1_embed, module_to_json, qm2_violator
from quadfun.theory import gamma

GAMMA = '{"kind": "gamma"}'
F2 = '{"kind": "freemod", "modulus": 2}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def violator_file(tmp_path):
    p = tmp_path / "violator.json"
    p.write_text(json.dumps(module_to_json(qm2_violator()), indent=2))
    return p


def test_theory_info_gamma(capsys):
    code, out, _ = run(capsys, "theory-info", "--theory", GAMMA)
    assert code == 0
    data = json.loads(out)["data"]
    assert data["hom_counts"]["1->2"] == 3 and data["hom_counts"]["2->2"] == 9
    assert data["T2U(E∨E)"] == [0, 0]


def test_theory_info_freemod2(capsys):
    code, out, _ = run(capsys, "theory-info", "--theory", F2)
    assert code == 0
    data = json.loads(out)["data"]
    assert data["hom_counts"]["1->2"] == 4 and data["hom_counts"]["2->2"] == 16
    assert data["T2U(E∨E)"] == [2, 4, 4]


def test_theory_info_freegroup_is_not_enumerated(capsys):
    code, out, _ = run(capsys, "theory-info", "--theory", '{"kind": "freegroup"}')
    assert code == 0
    assert json.loads(out)["data"]["enumerable"] is False


@pytest.mark.parametrize("theory", [GAMMA, F2])
def test_ringoid_check(capsys, theory):
    code, out, _ = run(capsys, "ringoid-check", "--theory", theory)
    assert code == 0
    assert all(c["status"] == "pass" for c in json.loads(out)["checks"])


def test_ringoid_check_rejects_infinite_theory(capsys):
    code, _, err = run(capsys, "ringoid-check", "--theory", '{"kind": "freegroup"}')
    assert code == 2
    assert "error" in json.loads(err)


def test_qmod_check_passes_i1(capsys, tmp_path):
    p = tmp_path / "i1.json"
    p.write_text(json.dumps(module_to_json(i1_embed(gamma(), cyclic(2)))))
    code, _, _ = run(capsys, "qmod-check", "--module", str(p))
    assert code == 0


def test_qmod_check_fails_violator(capsys, violator_file):
    code, out, _ = run(capsys, "qmod-check", "--module", str(violator_file), "--theory", F2)
    assert code == 1
    failed = [c for c in json.loads(out)["checks"] if c["status"] == "fail"]
    assert [c["id"] for c in failed] == ["QM2"]
    assert "witness" in failed[0]


def test_module_theory_mismatch(capsys, violator_file):
    code, _, err = run(capsys, "qmod-check", "--module", str(violator_file), "--theory", GAMMA)
    assert code == 2
    assert json.loads(err)["field"] == "/theory"


def test_tensor_eval(capsys, violator_file):
    code, out, _ = run(capsys, "tensor-eval", "--module", str(violator_file), "--rank", "2")
    payload = json.loads(out)
    assert code == 1
    failed = {c["id"] for c in payload["checks"] if c["status"] == "fail"}
    assert failed == {"decomposition", "gamma.iso"}


@pytest.mark.parametrize("theory, suite", [(GAMMA, "u_tensor_u"), (F2, "t2u")])
def test_roundtrip_suite(capsys, theory, suite):
    code, out, _ = run(capsys, "roundtrip", "--theory", theory, "--suite", suite)
    assert code == 0
    assert all(c["status"] == "pass" for c in json.loads(out)["checks"])


def test_roundtrip_unknown_suite(capsys):
    code, _, err = run(capsys, "roundtrip", "--theory", GAMMA, "--suite", "nope")
    assert code == 2
    assert json.loads(err)["field"] == "--suite"


def test_squaregroup(capsys):
    sg = '{"me": [0], "mee": [0], "H": [[1]], "P": [[2]]}'
    code, out, _ = run(capsys, "squaregroup", "--module", sg, "--samples", "20")
    assert code == 0
    code, out, _ = run(capsys, "squaregroup", "--module", sg, "--words", "[[1, 2], [-1, 3, 3]]")
    assert code == 0


def test_squaregroup_failing_axiom(capsys):
    code, _, _ = run(capsys, "squaregroup", "--module", '{"me": [0], "mee": [0], "H": [[1]], "P": [[1]]}', "--samples", "5")
    assert code == 1


def test_squaregroup_rejects_unreduced_word(capsys):
    sg = '{"me": [0], "mee": [0], "H": [[1]], "P": [[2]]}'
    code, _, err = run(capsys, "squaregroup", "--module", sg, "--words", "[[1, -1]]")
    assert code == 2
    assert json.loads(err)["field"] == "--words"


def test_schema_error_reports_field_and_line(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "name": "x",\n  "me": [0],\n  "mee": [0],\n  "H": [[1]],\n  "P": "oops"\n}\n')
    code, _, err = run(capsys, "squaregroup", "--module", str(p))
    assert code == 2
    e = json.loads(err)
    assert e["field"] == "/P"
    assert e["line"] == 6
    assert e["source"] == str(p)


def test_invalid_json_reports_line(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "kind": "gamma",\n  oops\n}\n')
    code, _, err = run(capsys, "theory-info", "--theory", str(p))
    assert code == 2
    assert json.loads(err)["line"] == 3


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "theory-info", "--theory", str(tmp_path / "absent.json"))
    assert code == 2
    assert "cannot read" in json.loads(err)["error"]


@pytest.mark.parametrize("value", ["0", "-1", "many"])
def test_threads_env_is_validated(capsys, monkeypatch, value):
    monkeypatch.setenv("QUADFUN_THREADS", value)
    code, _, err = run(capsys, "squaregroup", "--module", '{"me": [0], "mee": [0], "H": [[1]], "P": [[2]]}', "--samples", "3")
    assert code == 2
    assert "QUADFUN_THREADS" in json.loads(err)["error"]


def test_threads_do_not_change_output(capsys, monkeypatch):
    args = ["squaregroup", "--module", '{"me": [0], "mee": [0], "H": [[1]], "P": [[2]]}', "--samples", "30"]
    _, one, _ = run(capsys, *args)
    monkeypatch.setenv("QUADFUN_THREADS", "4")
    _, four, _ = run(capsys, *args)
    assert one == four


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["theory-info", "--theory", F2, "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timing_flag_adds_wall_time(capsys):
    _, out, _ = run(capsys, "theory-info", "--theory", GAMMA, "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quadfun", "theory-info", "--theory", GAMMA], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["data"]["theory"] == {"kind": "gamma"}
