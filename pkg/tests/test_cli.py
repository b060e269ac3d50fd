from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from biaskit import cli
from biaskit.freebias import decide_equal
from biaskit.groups import cyclic_group
from biaskit.typestructure import bias_index
from biaskit.variety import matrix_bias_embeds

from support import sym


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


@pytest.fixture
def i3_file(tmp_path):
    path = tmp_path / "i3.json"
    path.write_text(json.dumps(sym(3)[0].to_json()))
    return str(path)


class TestExamples:
    def test_decide(self, capsys):
        assert run_json(capsys, "decide", "x + x", "x", "--alphabet", "x")[:2] == (0, {"equal": True})

    def test_index_from_file(self, capsys, i3_file):
        assert run_json(capsys, "index", i3_file)[:2] == (0, {"index": 3})

    def test_embeds(self, capsys):
        code, out, _ = run_json(capsys, "embeds", "--m", "1", "--g", "Z3", "--n", "2", "--h", "Z2")
        assert code == 0
        assert out == {"embeds": False, "reason": "no monomorphism into H wr S_2"}

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "decide", "x * x' * x", "x")
        assert code == 0 and out == "equal: True\n"


class TestCommands:
    def test_falsify(self, capsys):
        code, out, _ = run_json(capsys, "falsify", "x * y", "y * x", "--max-n", "2")
        assert code == 0 and out["separated"] and out["separator"]["N"] == 2

    def test_check_identity(self, capsys):
        code, out, _ = run_json(capsys, "check-identity", "I2", "d(x)", "r(x)")
        assert not out["holds"] and set(out["counterexample"]) == {"x"}
        code, out, _ = run_json(capsys, "check-identity", "I2", "d(x^2)", "r(x^2)")
        assert out == {"holds": True, "counterexample": None}

    def test_decompose_and_typemonoid(self, capsys):
        out = run_json(capsys, "decompose", "I3")[1]
        assert [f["n"] for f in out["factors"]] == [3] and out["iso_checked"]
        tm = run_json(capsys, "typemonoid", "I2")[1]
        assert tm["k"] == 1 and tm["unit"] == [2] and len(tm["types"]) == 4

    def test_congruences(self, capsys):
        assert run_json(capsys, "congruences", "I2")[1]["count"] == 2

    def test_units(self, capsys):
        assert run_json(capsys, "units", "--n", "2", "--group", "Z2")[1] == {"order": 8, "wreath_order": 8,
                                                                             "iso_checked": True}

    def test_variety_commands(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        path.write_text(json.dumps({"generators": [{"n": 3, "group": "triv"}]}))
        rad = run_json(capsys, "radical", "--n", "4", "--variety", str(path))[1]
        assert rad == {"n": 4, "empty": True, "generators": []}
        chain = run_json(capsys, "check-chain", "--variety", str(path))[1]
        assert chain["passed"] and not chain["failed"] and not chain["inconclusive"]

    def test_symmetric(self, capsys):
        out = run_json(capsys, "symmetric", "--n", "2")[1]
        assert len(out["mul"]) == 7


class TestExitCodes:
    def test_strict_false_verdict(self, capsys):
        assert run(capsys, "decide", "x * y", "y * x", "--strict")[0] == 1
        assert run(capsys, "decide", "x * y", "y * x")[0] == 0
        assert run(capsys, "falsify", "x * y", "y * x", "--max-n", "2", "--strict")[0] == 1

    def test_input_error(self, capsys, tmp_path):
        code, out, err = run_json(capsys, "index", str(tmp_path / "missing.json"))
        assert code == 2 and out["error"]["type"] == "input" and "error" in err
        code, out, _ = run_json(capsys, "decide", "x +", "x")
        assert code == 2

    def test_cap_error(self, capsys):
        code, out, _ = run_json(capsys, "falsify", "x", "y", "--max-n", "5")
        assert code == 3
        assert out["error"]["type"] == "resource_cap" and out["error"]["limit"] == 4

    def test_inconclusive_chain(self, capsys, tmp_path):
        path = tmp_path / "v.json"
        path.write_text(json.dumps({"generators": [{"n": 1, "group": "S3"}, {"n": 2, "group": "Z3"}]}))
        code, out, _ = run_json(capsys, "check-chain", "--variety", str(path))
        assert code == 3 and out["error"]["type"] == "inconclusive"


class TestRoundTrip:
    @pytest.mark.parametrize("t1, t2", [("x + y", "y + x"), ("x ~ x", "0"), ("(x * y)'", "y' * x'")])
    def test_decide_matches_library(self, capsys, t1, t2):
        assert run_json(capsys, "decide", t1, t2)[1]["equal"] == decide_equal(t1, t2)

    @pytest.mark.parametrize("name", ["I1", "I2", "I3", "I4"])
    def test_index_matches_library(self, capsys, name):
        n = int(name[1])
        assert run_json(capsys, "index", name)[1]["index"] == bias_index(sym(n)[0])

    @pytest.mark.parametrize("m, n", [(1, 1), (1, 2), (2, 2), (2, 3)])
    def test_embeds_matches_library(self, capsys, m, n):
        out = run_json(capsys, "embeds", "--m", str(m), "--g", "Z2", "--n", str(n), "--h", "Z2")[1]
        assert out == matrix_bias_embeds(m, cyclic_group(2), n, cyclic_group(2)).to_json()


def test_console_script_is_deterministic():
    exe = shutil.which("biaskit")
    cmd = [exe] if exe else [sys.executable, "-m", "biaskit.cli"]
    args = cmd + ["falsify", "x + y", "y + x", "--format", "json"]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["separated"]
