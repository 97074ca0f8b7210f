import json
import subprocess
import sys
from pathlib import Path

import pytest

from bgeom import cli

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(*args, stdin=None):
    code, report = cli.run(list(args), stdin)
    return code, json.loads(cli.dumps(report))


def test_volume_example():
    code, rep = run("volume", str(CORPUS / "blp_p2.json"), "-D", "piL + E")
    assert code == 0 and rep["result"] == "1/1" and rep["exact"] is True
    assert rep["command"] == "volume" and rep["input_hash"].startswith("sha256:")


def test_discrepancies_example():
    code, rep = run("discrepancies", str(CORPUS / "cone_n3.json"))
    assert code == 0 and rep["result"] == {"C0": "-1/1"}


def test_intersect_example():
    code, rep = run("intersect", str(CORPUS / "p2.json"), "-D1", "L", "-D2", "L")
    assert (code, rep["result"]) == (0, "1/1")


def test_expressions_may_start_with_minus():
    code, rep = run("intersect", str(CORPUS / "blp_p2.json"), "-D1", "-E", "-D2", "E")
    assert (code, rep["result"]) == (0, "1/1")


def test_target_flag_on_cone():
    code, rep = run("intersect", str(CORPUS / "cone_n2.json"), "-D1", "f", "-D2", "f", "--target")
    assert (code, rep["result"]) == (0, "1/2")


def test_exit_codes():
    code, rep = run("zariski", str(CORPUS / "blp_p2.json"), "-D", "piL - 2*E")
    assert code == 1 and rep["error"]["code"] == "NotPseudoeffective"
    code, rep = run("check", str(CORPUS / "invalid" / "exceptional_mult2.json"))
    assert code == 2 and rep["error"]["code"] == "InvalidMultiplicity"
    code, rep = run("check", str(CORPUS / "invalid" / "unknown_field.json"))
    assert code == 2 and rep["error"]["code"] == "ParseError"
    code, rep = run("frobnicate", "x")
    assert code == 2 and rep["error"]["code"] == "UsageError"
    code, rep = run("check", str(CORPUS / "missing.json"))
    assert code == 2


def test_classify_strict():
    bad = json.dumps({"version": 1, "base": {"preset": "P2"},
                      "pair": {"boundary": {"L": 2}, "nef_part": {}, "cartier_index": 1}}).encode()
    code, rep = run("classify", "-", stdin=bad)
    assert code == 0 and rep["result"] == "not_glc"
    code, rep = run("classify", "-", "--strict", stdin=bad)
    assert code == 1 and rep["error"]["code"] == "NotGlc"
    code, rep = run("classify", str(CORPUS / "cone_n1.json"))
    assert rep["result"] == "glc"


def test_pair_volume_and_descend():
    code, rep = run("pair-volume", str(CORPUS / "blp_p2.json"))
    assert (code, rep["result"]) == (0, "1/1")
    code, rep = run("descend", str(CORPUS / "blp2_chain.json"), "-M", "2*piL - E1 - E2")
    assert code == 0
    assert rep["result"]["blowup_count"] <= int(rep["result"]["bound"].split("/")[0])


def test_bounds_command():
    code, rep = run("bounds", "HB", str(CORPUS / "toric_p2_raw.json"), "-H", "3*piL - E", "--delta", "1/2",
                    "--birational")
    assert code == 0 and rep["result"]["holds"] is True and rep["result"]["which"] == "HB"
    code, rep = run("bounds", "HG", str(CORPUS / "toric_p2_raw.json"), "-H", "3*piL - E", "-F", "E")
    assert code == 0 and rep["result"]["holds"] is True


def test_rank_cap(monkeypatch):
    monkeypatch.setenv("BGEOM_MAX_RANK", "1")
    code, rep = run("check", str(CORPUS / "blp_p2.json"))
    assert code == 2 and rep["error"]["code"] == "RankLimitExceeded"


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.name)
def test_byte_determinism(path):
    for cmd in (["check"], ["pair-volume"], ["classify"]):
        first = cli.dumps(cli.run(cmd + [str(path)])[1])
        assert first == cli.dumps(cli.run(cmd + [str(path)])[1])


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "bgeom.cli", "intersect", str(CORPUS / "p2.json"),
                          "-D1", "L", "-D2", "L"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"] == "1/1"
