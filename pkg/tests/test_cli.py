import json
import subprocess
import sys

import pytest

from alth.cli import COMMANDS, run


def report(*argv):
    rep, code, out = run(list(argv))
    return json.loads(out) if rep is not None else None, code, out


def test_json_schema_and_key_order():
    r, code, _ = report("roundtrip", "--theory", "Z2")
    assert list(r) == ["command", "inputs", "verdict", "witnesses", "wall_ms"]
    assert r["verdict"] == "pass" and code == 0
    assert all(set(w) == {"kind", "data"} for w in r["witnesses"])


def test_free_semilattice_table():
    r, code, _ = report("free", "--theory", "SemiLat", "--size", "3")
    table = next(w["data"] for w in r["witnesses"] if w["kind"] == "table")
    assert table["size"] == 7 and len(set(table["elements"])) == 7
    assert table["elements"][-1] == "meet(meet(x0,x1),x2)"
    assert code == 0


def test_em_vs_alg_z2():
    r, code, _ = report("em-vs-alg", "--theory", "Z2", "--max-carrier", "2")
    assert code == 0
    bij = next(w["data"] for w in r["witnesses"] if w["kind"] == "bijection")
    assert len(bij["2"]) == 2
    r2, _, _ = report("em-vs-alg", "--theory", "Z2", "--min-carrier", "2", "--max-carrier", "2")
    assert next(w["data"] for w in r2["witnesses"] if w["kind"] == "sizes") == {"algebras": 2, "em_algebras": 2}


@pytest.mark.parametrize("argv", [
    ["validate"],
    ["monad-laws", "--monad", "W"],
    ["kleisli", "--theory", "PZ2"],
    ["roundtrip", "--theory", "PZ2", "--via", "profunctor"],
    ["roundtrip-monad", "--monad", "Id01"],
    ["enumerate-algebras", "--theory", "Z2"],
    ["homs", "--algebra", "Swap", "--algebra2", "Fixed"],
    ["eleutheric", "--arities", "A1"],
    ["prof-compose", "--theory", "PZ2"],
    ["zeta", "--arities", "A01"],
    ["coequalize", "--theory", "Z2", "--samples", "5"],
], ids=lambda a: a[0])
def test_passing_commands(argv):
    r, code, _ = report(*argv)
    assert (r["verdict"], code) == ("pass", 0), r["witnesses"]


def test_every_command_covered():
    assert len(COMMANDS) == 13


def test_fail_carries_witness_and_replays():
    argv = ["coequalize", "--algebra", "SL1", "--algebra2", "SL2", "--f", "0", "--g", "1"]
    r1, code, _ = report(*argv)
    assert code == 1 and r1["verdict"] == "fail"
    assert r1["witnesses"][0]["kind"] == "counterexample"
    # replay from the recorded inputs
    inputs = r1["inputs"]
    again = ["coequalize"] + [x for k in ("algebra", "algebra2", "f", "g") for x in (f"--{k}", str(inputs[k]))]
    r2, _, _ = report(*again)
    r1.pop("wall_ms"), r2.pop("wall_ms")
    assert r1 == r2


def test_inconclusive_on_cap():
    r, code, _ = report("free", "--theory", "SemiLat", "--cap", "3")
    assert code == 2 and r["verdict"] == "inconclusive"
    assert r["witnesses"] and r["witnesses"][0]["kind"] == "truncation"


def test_input_errors_exit_3(tmp_path):
    assert report("validate", "--theory", "Nope")[1] == 3
    assert report("homs", "--algebra", "Swap")[1] == 3
    bad = tmp_path / "bad.alth"
    bad.write_text("arities A = {1,2}\n")
    _, code, out = report("validate", "--file", str(bad))
    assert code == 3 and "1:9:" in out and "4" in out


def test_user_file(tmp_path):
    src = tmp_path / "mine.alth"
    src.write_text("arities A = {1}\ntheory Z on A = presentation { op a/1; eq a(a(x0)) = x0; bound = 3; }\n")
    r, code, _ = report("roundtrip", "--file", str(src), "--theory", "Z")
    assert code == 0


def test_table_format():
    _, code, out = run(["enumerate-algebras", "--theory", "SemiLat", "--table"])
    assert code == 0 and out.startswith("enumerate-algebras: PASS")
    assert "3: 9" in out


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "alth.cli", "zeta", "--theory", "Z2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"] == "pass"
    proc = subprocess.run([sys.executable, "-m", "alth.cli", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 3
