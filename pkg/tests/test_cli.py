import hashlib
import json

import numpy as np
import pytest

from bracekit import __version__
from bracekit.cli import main
from bracekit.io import dumps

SPEC72 = {"kind": "cycle", "primes": [{"p": 3}, {"p": 2}]}


def write(path, obj):
    path.write_text(dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def b72(tmp_path, capsys):
    out = tmp_path / "b72.json"
    code, _ = run(capsys, "build", write(tmp_path / "c72.json", SPEC72), "-o", out)
    assert code == 0
    return out


def test_build_trivial(tmp_path, capsys):
    out = tmp_path / "t.json"
    code, rep = run(capsys, "build", write(tmp_path / "s.json", {"kind": "trivial", "shape": [5]}),
                    "-o", out)
    assert code == 0 and rep["result"]["order"] == 5
    table = json.loads(out.read_text())
    assert table["lambda"] == np.tile(np.arange(5), (5, 1)).tolist()


def test_build_cycle_and_hegedus(tmp_path, capsys, b72):
    assert len(json.loads(b72.read_text())["lambda"]) == 72
    spec = {"kind": "hegedus", "p": 2, "n": 2, "Q": "sum_pairs", "f": "identity"}
    out = tmp_path / "h.json"
    code, rep = run(capsys, "build", write(tmp_path / "h_spec.json", spec), "-o", out)
    assert code == 0 and rep["result"]["axioms"]["ok"]
    assert len(json.loads(out.read_text())["lambda"]) == 8


def test_report_envelope(tmp_path, capsys):
    spec = write(tmp_path / "s.json", {"kind": "trivial", "shape": [3]})
    code, rep = run(capsys, "build", spec, "-o", tmp_path / "t.json", "--seed", "5", "--cap", "100")
    assert code == 0
    digest = hashlib.sha256((tmp_path / "s.json").read_bytes()).hexdigest()
    assert rep["inputs"] == {"spec": digest}
    assert (rep["version"], rep["cap"], rep["seed"], rep["command"]) == (__version__, 100, 5, "build")
    assert rep["format"] == "bracekit/1"


def test_check_simple_and_socle(tmp_path, capsys, b72):
    code, rep = run(capsys, "check", b72, "--simple", "--socle")
    assert code == 0 and rep["result"]["simple"] and rep["result"]["socle"] == [0]
    z4 = tmp_path / "z4.json"
    run(capsys, "build", write(tmp_path / "z4s.json", {"kind": "trivial", "shape": [4]}), "-o", z4)
    code, rep = run(capsys, "check", z4, "--simple", "--socle")
    assert code == 1
    assert rep["result"]["ideal"] == [0, 2] and rep["result"]["socle"] == [0, 1, 2, 3]


def test_check_writes_output_file(tmp_path, capsys, b72):
    out = tmp_path / "report.json"
    code, rep = run(capsys, "check", b72, "--decompose", "--graph", "-o", out)
    assert code == 2 and rep is None
    result = json.loads(out.read_text())["result"]
    assert result["graph"]["verdict"] == "inapplicable"
    assert sorted(c["order"] for c in result["decompose"]["components"]) == [8, 9]
    assert "seconds" not in result


def test_timing_is_opt_in(capsys, b72):
    _, rep = run(capsys, "check", b72, "--axioms", "--timing")
    assert "axioms" in rep["result"]["seconds"]


def test_solution_and_verify(tmp_path, capsys):
    z3 = tmp_path / "z3.json"
    run(capsys, "build", write(tmp_path / "s.json", {"kind": "trivial", "shape": [3]}), "-o", z3)
    sol = tmp_path / "r.json"
    code, _ = run(capsys, "solution", z3, "-o", sol)
    assert code == 0
    data = json.loads(sol.read_text())
    # flip: f_x(y) = y and g_y(x) = x
    assert data["f"] == [[0, 1, 2]] * 3 and data["g"] == [[0, 1, 2]] * 3
    code, rep = run(capsys, "verify", sol)
    assert code == 0 and rep["result"]["permutation_group"]["order"] == 1


def test_verify_rejects_broken_solution(tmp_path, capsys):
    bad = {"kind": "solution", "n": 2, "f": [[0, 1], [0, 1]], "g": [[1, 0], [0, 1]]}
    code, rep = run(capsys, "verify", write(tmp_path / "bad.json", bad))
    assert code == 1 and not rep["result"]["involutive"]["ok"]


def test_verify_budget(tmp_path, capsys, b72):
    sol = tmp_path / "r72.json"
    run(capsys, "solution", b72, "-o", sol)
    code, _ = run(capsys, "verify", sol, "--budget", "100")
    assert code == 2
    code, rep = run(capsys, "verify", sol, "--budget", "100", "--sample", "--samples", "2000")
    assert code == 0 and rep["result"]["ybe"]["mode"] == "sampled"


def test_filter(capsys):
    code, rep = run(capsys, "filter", "56")
    assert code == 1 and "normal Sylow" in rep["result"]["reason"]
    code, rep = run(capsys, "filter", "72")
    assert code == 0 and rep["inputs"] == {}


def test_input_errors(tmp_path, capsys):
    spec = write(tmp_path / "s.json", {"kind": "trivial", "shape": [3], "colour": "red"})
    assert run(capsys, "build", spec, "-o", tmp_path / "o.json")[0] == 3
    assert run(capsys, "check", tmp_path / "missing.json")[0] == 3
    (tmp_path / "junk.json").write_text("{not json")
    assert run(capsys, "check", tmp_path / "junk.json")[0] == 3
    assert run(capsys, "build", write(tmp_path / "k.json", {"kind": "nope"}), "-o",
               tmp_path / "o.json")[0] == 3


def test_large_build_needs_formula(tmp_path, capsys):
    spec = write(tmp_path / "s3.json", {"kind": "cycle", "primes": [{"p": 3}, {"p": 5}, {"p": 2}]})
    out = tmp_path / "bs3.json"
    assert run(capsys, "build", spec, "-o", out)[0] == 2
    assert not out.exists()
    code, rep = run(capsys, "build", spec, "-o", out, "--formula", "--samples", "2000")
    assert code == 0 and rep["result"]["certificate"]["simplicity_criterion"]
    code, rep = run(capsys, "check", out, "--simple")
    assert code == 0 and rep["result"]["certificate"] == "cycle criterion"
    assert run(capsys, "check", out, "--socle")[0] == 2


def test_matched_spec_with_rule_action_and_file_refs(tmp_path, capsys):
    write(tmp_path / "g.json", {"kind": "trivial", "shape": [7]})
    write(tmp_path / "h.json", {"kind": "trivial", "shape": [3]})
    spec = {"kind": "matched", "G": {"file": "g.json"}, "H": {"file": "h.json"},
            "alpha": {"map": "rule", "matrix": [[2]], "driver": 0}, "beta": "identity"}
    out = tmp_path / "gh.json"
    code, rep = run(capsys, "build", write(tmp_path / "gh_spec.json", spec), "-o", out)
    assert code == 0 and rep["result"]["order"] == 21
    code, rep = run(capsys, "check", out, "--simple")
    assert code == 1 and len(rep["result"]["ideal"]) == 7


def test_iterated_spec_matches_matched_spec(tmp_path, capsys):
    G, H = {"kind": "trivial", "shape": [7]}, {"kind": "trivial", "shape": [3]}
    act = {"map": "rule", "matrix": [[2]], "driver": 0}
    pair = {"kind": "matched", "G": G, "H": H, "alpha": act}
    it = {"kind": "iterated", "factors": [G, H], "actions": [dict(act, **{"from": 1, "to": 0})]}
    run(capsys, "build", write(tmp_path / "p.json", pair), "-o", tmp_path / "pt.json")
    run(capsys, "build", write(tmp_path / "i.json", it), "-o", tmp_path / "it.json")
    a = json.loads((tmp_path / "pt.json").read_text())["lambda"]
    b = json.loads((tmp_path / "it.json").read_text())["lambda"]
    assert a == b
    bad = dict(it, actions=[dict(act, **{"from": 0, "to": 0})])
    assert run(capsys, "build", write(tmp_path / "b.json", bad), "-o", tmp_path / "x.json")[0] == 3
