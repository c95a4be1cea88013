import json
import os
import subprocess
import sys

import jsonschema
import pytest

from bornrule.cli import main
from bornrule.schemas import SCHEMA_VERSION, document_schema


@pytest.fixture(autouse=True)
def fixed_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc_of(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, document_schema(argv[0]))
    assert doc["schemaVersion"] == SCHEMA_VERSION
    return doc


def write_config(tmp_path, **fields):
    cfg = {"alphabet": ["pi/3", "2pi/3"], "particles_per_symbol": 500,
           "message_length": 20, "semantics": "copenhagen", "seed": 5}
    cfg.update(fields)
    path = tmp_path / "channel.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_weights_examples(capsys):
    p = doc_of(capsys, "weights", "--ratio", "3/4", "--neutrality")["payload"]
    assert p["weights"] == ["3/4", "1/4"] and p["exact"] and p["ancilla"] == [3, 1]
    assert all(c["passed"] for c in p["checks"])
    p = doc_of(capsys, "weights", "--theta", "pi/2", "--branch-count")["payload"]
    assert p["weights"] == ["1/2", "1/2"]
    p = doc_of(capsys, "weights", "--theta", "1.0", "--neutrality")["payload"]
    assert not p["exact"]


def test_weights_axiom_conflict(capsys):
    code, out, err = run(capsys, "weights", "--ratio", "3/4", "--branch-count", "--neutrality")
    assert code == 3 and out == "" and "axiom conflict" in err
    code, _, err = run(capsys, "weights", "--ratio", "3/4")
    assert code == 3
    code, _, err = run(capsys, "weights", "--ratio", "3/4", "--neutrality",
                       "--drop-axiom", "permutation_symmetry")
    assert code == 3 and "permutation_symmetry" in err


@pytest.mark.parametrize("theta,sem,n,seed,target,tol", [
    ("pi/3", "copenhagen", 100000, 7, 0.75, 0.01),
    ("pi/3", "everett-count", 100000, 7, 0.5, 0.01),
    ("0", "everett-count", 10, 1, 1.0, 0.0),
])
def test_simulate_examples(capsys, theta, sem, n, seed, target, tol):
    p = doc_of(capsys, "simulate", "--theta", theta, "--semantics", sem,
               "--n", str(n), "--seed", str(seed))["payload"]
    assert abs(p["fractionPlus"] - target) <= tol
    assert p["oracle"]["within5Sigma"]


def test_simulate_usage_errors(capsys):
    assert run(capsys, "simulate", "--theta", "pi/3", "--semantics", "nope",
               "--n", "10", "--seed", "1")[0] == 2
    # the seed is mandatory
    assert run(capsys, "simulate", "--theta", "pi/3", "--semantics", "copenhagen",
               "--n", "10")[0] == 2
    assert run(capsys, "simulate", "--theta", "pi/3", "--semantics", "copenhagen",
               "--n", "0", "--seed", "1")[0] == 2
    assert run(capsys)[0] == 2
    code, _, err = run(capsys, "simulate", "--theta", "bogus", "--semantics", "copenhagen",
                       "--n", "10", "--seed", "1")
    assert code == 3


def test_ledger_examples(capsys):
    p = doc_of(capsys, "ledger", "--n", "100", "--c2", "3/4")["payload"]
    assert p["summary"]["bornMode"] == 75
    assert p["totals"]["weightSum"] == "1"
    assert p["totals"]["countSum"] == str(2 ** 100)
    assert p["summary"]["typicalityWindow"] == [63, 87]
    p = doc_of(capsys, "ledger", "--n", "4", "--theta", "pi/2")["payload"]
    assert sum(int(c["count"]) for c in p["classes"]) == 16
    p = doc_of(capsys, "ledger", "--n", "50", "--c2", "0.3", "--summary-only")["payload"]
    assert p["classes"] == []


def test_ledger_size_error(capsys):
    code, _, err = run(capsys, "ledger", "--n", "10001", "--c2", "1/2")
    assert code == 4 and "size error" in err


def test_ledger_csv(capsys):
    code, out, _ = run(capsys, "ledger", "--n", "2", "--c2", "3/4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["m,count,perBranchWeight,classWeight",
                                "0,1,1/16,1/16", "1,2,3/16,3/8", "2,1,9/16,9/16"]
    code, _, _ = run(capsys, "weights", "--ratio", "1/2", "--neutrality", "--format", "csv")
    assert code == 2


def test_channel(capsys, tmp_path):
    cfg = write_config(tmp_path, message_length=100)
    p = doc_of(capsys, "channel", "--config", cfg)["payload"]
    assert p["symbolErrorRate"] < 0.01
    assert len(p["symbols"]) == 100
    code, out, _ = run(capsys, "channel", "--config", cfg, "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 101


def test_channel_explicit_message(capsys, tmp_path):
    cfg = write_config(tmp_path, message=[0, 1, 1], message_length=None)
    p = doc_of(capsys, "channel", "--config", cfg)["payload"]
    assert [s["sent"] for s in p["symbols"]] == [0, 1, 1]


@pytest.mark.parametrize("text,needle", [
    ('{"alphabet": ["pi/3"],\n "particles_per_symbol": 5,,}', "line 2, column"),
    ('[1, 2]', "top level"),
])
def test_channel_parse_errors(capsys, tmp_path, text, needle):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, _, err = run(capsys, "channel", "--config", str(path))
    assert code == 3 and needle in err


@pytest.mark.parametrize("fields,needle", [
    ({"particles_per_symbol": 0}, "particles_per_symbol"),
    ({"alphabet": []}, "alphabet"),
    ({"alphabet": ["pi/3", "xyz"]}, "alphabet[1]"),
    ({"semantics": "many-worlds"}, "semantics.kind"),
    ({"semantics": {"kind": "everett-count", "multiplicities": [0, 1]}},
     "semantics.multiplicities"),
    ({"message": [0, 5]}, "message[1]"),
    ({"bogus": 1}, "bogus"),
    ({"seed": -4}, "seed"),
])
def test_channel_field_errors(capsys, tmp_path, fields, needle):
    code, _, err = run(capsys, "channel", "--config", write_config(tmp_path, **fields))
    assert code == 3 and needle in err


def test_channel_requires_seed(capsys, tmp_path):
    code, _, _ = run(capsys, "channel", "--config", write_config(tmp_path, seed=None))
    assert code == 2
    code, _, _ = run(capsys, "channel", "--config", str(tmp_path / "missing.json"))
    assert code == 3


def test_classical(capsys):
    p = doc_of(capsys, "classical", "--game", "e-ball", "--with-box")["payload"]
    assert p["distribution"] == ["3/4", "1/4"]
    p = doc_of(capsys, "classical", "--game", "e-rabbit", "--rewards", "1,0")["payload"]
    assert p["value"] == "1/2"
    p = doc_of(capsys, "classical", "--game", "c-ball", "--n", "2000", "--seed", "3")["payload"]
    assert sum(p["monteCarlo"]["counts"].values()) == 2000
    assert run(capsys, "classical", "--game", "c-ball", "--n", "10")[0] == 2


@pytest.mark.parametrize("argv,holds,gap", [
    (["--process", "e-ball"], False, "1/4"),
    (["--process", "c-ball"], True, "0"),
    (["--process", "c-rabbit"], True, "0"),
    (["--process", "e-rabbit"], False, "1/4"),
    (["--process", "quantum", "--ancilla", "3,1"], False, "1/4"),
    (["--process", "quantum", "--ancilla", "3,1", "--semantics", "copenhagen"], True, "0"),
    (["--process", "custom", "--stage1", "1/2,1/2", "--refinement", "1,3"], False, "1/4"),
])
def test_neutrality(capsys, argv, holds, gap):
    p = doc_of(capsys, "neutrality", *argv)["payload"]
    assert p["holds"] is holds and p["gap"] == gap


def test_neutrality_custom_errors(capsys):
    assert run(capsys, "neutrality", "--process", "custom")[0] == 3
    assert run(capsys, "neutrality", "--process", "custom", "--stage1", "1/2,1/2",
               "--refinement", "1")[0] == 3


def test_manifest_contents(capsys):
    doc = doc_of(capsys, "simulate", "--theta", "pi/3", "--semantics", "copenhagen",
                 "--n", "10", "--seed", "99")
    m = doc["manifest"]
    assert m["command"] == "simulate" and m["seed"] == 99
    assert m["parameters"]["theta"] == "pi/3"
    assert m["timestamp"] == "2023-11-14T22:13:20+00:00"


@pytest.mark.parametrize("argv", [
    ["simulate", "--theta", "pi/3", "--semantics", "everett-count", "--n", "5000",
     "--seed", "1234", "--ancilla", "3,1"],
    ["ledger", "--n", "30", "--c2", "2/3"],
    ["classical", "--game", "e-ball", "--n", "500", "--seed", "8"],
    ["weights", "--ratio", "2/5", "--neutrality"],
])
def test_rerun_is_byte_identical(tmp_path, argv):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(first)]) == 0
    assert main(["rerun", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_rerun_bad_document(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{}")
    assert run(capsys, "rerun", str(bad))[0] == 3


def test_module_entry_point_and_backends(tmp_path):
    argv = [sys.executable, "-m", "bornrule", "simulate", "--theta", "pi/3",
            "--semantics", "copenhagen", "--n", "20000", "--seed", "5"]
    env = dict(os.environ, SOURCE_DATE_EPOCH="0")
    fast = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    env["BORNRULE_PURE_PYTHON"] = "1"
    slow = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    assert fast == slow
