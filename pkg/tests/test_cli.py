import json
import random

import pytest

from coopkit.cli import main
from coopkit.cooperad import cooperad_to_json
from coopkit.graphco import graph_cooperad, dirgraph_cooperad


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trees_enum_sixteen(capsys):
    code, out, _ = run(capsys, "trees", "enum", "--n", "4")
    assert code == 0
    lines = [l for l in out.splitlines() if l.strip()]
    assert len(lines) == 16
    assert lines == sorted(lines)


def test_chains_fiber_matches_spec_example(capsys):
    code, out, _ = run(capsys, "chains", "fiber", "--set", "1,2",
                       "--n", "2", "--bounds", "2")
    assert code == 0
    assert len([l for l in out.splitlines() if l.strip()]) == 3


def test_verify_graph_passes(capsys):
    code, out, _ = run(capsys, "verify", "graph", "--max-set", "3")
    assert code == 0
    assert "failures=0" in out


def test_verify_custom_corrupted_sign_fails(tmp_path, capsys):
    data = cooperad_to_json(dirgraph_cooperad(3))
    rng = random.Random(11)
    keys = [k for k, m in sorted(data["cocomp"].items()) if m["entries"]]
    key = rng.choice(keys)
    entry = rng.choice(data["cocomp"][key]["entries"])
    entry[2] = -entry[2]
    bad = tmp_path / "bad_cooperad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "custom", str(bad), "--max-set", "3")
    assert code == 1
    assert "witness=" in out


def test_verify_custom_parse_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{ not json")
    code, out, err = run(capsys, "verify", "custom", str(bad))
    assert code == 2
    assert "broken.json:1:" in err


def test_verify_custom_schema_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "schema.json"
    bad.write_text(json.dumps({"symseq": {"max_arity": 0, "arity": {}}}))
    code, _, err = run(capsys, "verify", "custom", str(bad))
    assert code == 2


def test_report_determinism_byte_identical(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out in (out1, out2):
        code, _, _ = run(capsys, "verify", "graph", "--max-set", "2",
                         "--format", "json", "--out", str(out),
                         "--seed", "5")
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_compose_corpus_deterministic(tmp_path, capsys):
    args = ["compose", "eval", "--corpus", "2", "--seed", "9",
            "--max-arity", "2", "--format", "json"]
    code1, out_a, _ = run(capsys, *args)
    code2, out_b, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out_a == out_b


def test_cosimplicial_graph(capsys):
    code, out, _ = run(capsys, "cosimplicial", "--which", "graph",
                       "--max-n", "2", "--max-set", "2")
    assert code == 0
    assert "failures=0" in out


def test_verify_cdc(capsys):
    code, out, _ = run(capsys, "verify", "cdc", "--max-set", "3",
                       "--max-triangles", "1")
    assert code == 0


def test_coalgebra_verify_cli(tmp_path, capsys):
    coalg = {"cooperad": "graph", "max_arity": 3, "carrier": ["x", "y"],
             "coaction": {
                 "1": {"shape": [2, 2], "entries": [[0, 0, 1], [1, 1, 1]]},
                 "2": {"shape": [4, 2], "entries": [[0, 1, 1]]}}}
    path = tmp_path / "coalg.json"
    path.write_text(json.dumps(coalg))
    code, out, _ = run(capsys, "coalgebra", "verify", str(path),
                       "--max-set", "3", "--delta-n", "3")
    assert code == 0
    assert "path-independent" in out


def test_threads_env_rejected_when_invalid(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("COOPKIT_THREADS", "zero")
    code, _, err = run(capsys, "trees", "enum", "--n", "2")
    assert code == 2
    assert "COOPKIT_THREADS" in err


def test_threads_env_accepted(monkeypatch, capsys):
    monkeypatch.setenv("COOPKIT_THREADS", "4")
    code, _, _ = run(capsys, "trees", "enum", "--n", "2")
    assert code == 0