import json
import random
import subprocess
import sys

import pytest

from ninfty import serialize as S
from ninfty.cli import main
from ninfty.coefficients import family_to_coefficients
from ninfty.group import GraphSubgroup, enumerate_perm_homs, preset
from ninfty.gsets import coset_action
from ninfty.indexing import enumerate_all
from ninfty.symseq import realize_family
from support import random_family


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# documents

@pytest.mark.parametrize("name", ["C2", "C4", "S3", "V4"])
def test_family_round_trip(name):
    g = preset(name)
    rng = random.Random(name)
    for _ in range(6):
        f = random_family(g, 3, rng)
        doc = json.loads(S.dumps(S.family_doc(f)))
        assert S.parse_family(doc) == f


@pytest.mark.parametrize("name", ["C2", "C4", "S3", "D4"])
def test_indexing_round_trip(name):
    for s in enumerate_all(preset(name)):
        assert S.parse_indexing(json.loads(S.dumps(S.indexing_doc(s)))) == s


def test_explicit_group_document():
    g = preset("S3")
    doc = {"order": g.order, "mul": [list(r) for r in g.mul], "name": "mine"}
    h = S.load_group_doc(doc)
    assert h.order == 6 and len(h.subgroups) == 6


def test_close_flag_takes_generators():
    g = preset("C4")
    doc = {"group": "C4", "orbits": [{"H": S.subgroup_doc(g.whole), "K_class_rep": S.subgroup_doc(g.trivial)}]}
    with pytest.raises(S.DocumentError, match="not an indexing system"):
        S.parse_indexing(doc)
    closed = S.parse_indexing({**doc, "close": True})
    # restriction forces C2/e; nothing forces C4/C2
    assert len(closed.nontrivial()) == 2


def test_schema_errors_name_the_field():
    with pytest.raises(S.DocumentError, match="field cap"):
        S.parse_family({"group": "C2", "cap": -1, "levels": []})
    with pytest.raises(S.DocumentError, match="field <root>"):
        S.parse_family({"group": "C2", "levels": []})
    with pytest.raises(S.DocumentError, match="field orbits/0"):
        S.parse_indexing({"group": "C2", "orbits": [{"H": ["0", "1"]}]})
    with pytest.raises(S.DocumentError, match="orbits/0/H"):
        S.parse_indexing({"group": "C2", "orbits": [{"H": ["0", "7"], "K_class_rep": ["0"]}]})
    with pytest.raises(S.DocumentError, match="group: unknown"):
        S.parse_family({"group": "nonsense", "cap": 1, "levels": []})


def test_invalid_family_rejected():
    g = preset("C2")
    swap = GraphSubgroup(next(a for a in enumerate_perm_homs(g.whole, 2) if not a.is_trivial()))
    # the swap graph alone lacks the levels every family must contain
    doc = {"group": "C2", "cap": 2, "levels": [[], [], [S.graph_doc(swap)]]}
    with pytest.raises(S.DocumentError, match="invalid family"):
        S.parse_family(doc)
    fam = S.parse_family({**doc, "close": True})
    assert swap in fam.levels[2]


def test_dumps_is_stable():
    g = preset("S3")
    f = random_family(g, 3, random.Random(2))
    a = S.dumps(S.sequence_doc(realize_family(f)))
    b = S.dumps(S.sequence_doc(realize_family(f)))
    assert a == b and a.endswith("\n")
    assert S.dumps({"x": [1, 2, 3]}) == '{\n  "x": [1, 2, 3]\n}\n'
    json.loads(S.dumps(S.coefficients_doc(family_to_coefficients(f))))
    json.loads(S.dumps(S.gset_doc(coset_action(g.whole, g.trivial))))


def test_poset_dot():
    dot = S.poset_dot(enumerate_all(preset("C2")), name="c2")
    assert dot.startswith("digraph c2 {") and "s0 -> s1;" in dot


# ---------------------------------------------------------------------------
# command line

def test_indexing_enumerate_c2(capsys):
    code, out, _ = run(capsys, "indexing", "enumerate", "--group", "C2")
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 2 and len(doc["systems"]) == 2 and doc["hasse"] == [[0, 1]]
    code, out, _ = run(capsys, "indexing", "enumerate", "--group", "C4", "--format", "table")
    assert out.startswith("5 indexing systems of C4")


def test_verify_comb_c2(capsys):
    code, out, _ = run(capsys, "verify-comb", "--group", "C2", "--arity-cap", "4", "--height-cap", "3")
    assert code == 0
    assert out.splitlines()[-1] == "result: PASS"
    code, out, _ = run(capsys, "verify-comb", "--group", "C2", "--format", "json")
    doc = json.loads(out)
    assert doc["passed"] and doc["equal"] and doc["mismatches"] == 0


def test_verify_comb_reports_failure(capsys):
    # at height cap 0 nothing beyond trivial orbits is realised
    code, out, _ = run(capsys, "verify-comb", "--group", "C2", "--height-cap", "0")
    assert code == 1 and "result: FAIL" in out


def test_groups_list_is_deterministic(capsys):
    outs = [run(capsys, "groups", "list")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    names = [d["name"] for d in json.loads(outs[0])]
    assert names[:4] == ["C1", "C2", "C3", "C4"] and "S3" in names
    code, out, _ = run(capsys, "groups", "show", "--group", "S3")
    assert code == 0 and len(json.loads(out)["subgroups"]) == 6


def test_repeat_runs_byte_identical(capsys, tmp_path):
    argv = ["witness", "--group", "C4", "--regular", "2", "--orbit", "2/0"]
    first = run(capsys, *argv)
    assert first[0] == 0 and first == run(capsys, *argv)
    path = tmp_path / "out.json"
    assert main(["--out", str(path), "indexing", "enumerate", "--group", "S3"]) == 0
    again = run(capsys, "indexing", "enumerate", "--group", "S3")[1]
    assert path.read_text() == again


def test_closure_and_realize_commands(capsys, tmp_path):
    g = preset("C2")
    swap = GraphSubgroup(next(a for a in enumerate_perm_homs(g.whole, 2) if not a.is_trivial()))
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"group": "C2", "cap": 2, "levels": [[], [], [S.graph_doc(swap)]], "close": True}))
    code, out, _ = run(capsys, "closure", "--in", str(fam))
    assert code == 0
    ind = tmp_path / "ind.json"
    ind.write_text(out)
    assert len(S.parse_indexing(json.loads(out)).nontrivial()) == 1
    code, out, _ = run(capsys, "realize", "--in", str(ind), "--minimal")
    assert code == 0 and "sequence" in json.loads(out)
    code, out, _ = run(capsys, "verify-comb", "--in", str(fam))
    assert code == 0
    code, out, _ = run(capsys, "verify-comb", "--group", "C2", "--indexing", str(ind))
    assert code == 0


def test_witness_dot(capsys):
    code, out, _ = run(capsys, "witness", "--group", "C2", "--orbit", "<0,1>/<0>", "--format", "dot")
    assert code == 0 and out.startswith("digraph witness {")


def test_bad_input_exits_2(capsys, tmp_path, monkeypatch):
    assert run(capsys, "indexing", "enumerate", "--group", "C9x")[0] == 2
    code, _, err = run(capsys, "witness", "--group", "C2", "--orbit", "9/0")
    assert code == 2 and "subgroups 0..1" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "closure", "--in", str(bad))
    assert code == 2 and "not JSON" in err
    bad.write_text(json.dumps({"group": "C2", "cap": "x", "levels": []}))
    code, _, err = run(capsys, "closure", "--in", str(bad))
    assert code == 2 and "field cap" in err
    assert run(capsys, "closure", "--in", str(tmp_path / "missing.json"))[0] == 2
    monkeypatch.setenv("NINFTY_THREADS", "zero")
    code, _, err = run(capsys, "verify-comb", "--group", "C2")
    assert code == 2 and "NINFTY_THREADS" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify-comb", "--arity-cap", "-1"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ninfty.cli", "indexing", "enumerate", "--group", "C3",
                          "--format", "table"], capture_output=True, text=True, check=True)
    assert out.stdout.startswith("2 indexing systems of C3")
