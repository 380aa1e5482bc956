import json

import pytest

from gkmhyper.cli import NO_WITNESS, NOT_TORIC, run
from gkmhyper.toric import charpair_presets


def call(*argv):
    chunks = []
    code = run(list(argv), chunks.append)
    return code, "".join(chunks)


def test_family_json_bf1():
    code, out = call("family", "bf", "1", "--format", "json")
    d = json.loads(out)
    assert code == 0 and len(d["vertices"]) == 2
    assert sorted(p["weight"] for p in d["directed_pairs"]) == [[-1], [1]]


def test_family_dot():
    code, out = call("family", "br", "3", "2", "--format", "dot")
    assert code == 0 and out.startswith("graph ")


def test_obstruct_verdicts():
    code, out = call("obstruct", "br", "3", "2")
    assert code == 0 and out.rstrip().endswith(NOT_TORIC)
    assert "monodromy moves external edge" in out
    code, out = call("obstruct", "br", "2", "3")
    assert code == 1 and out.rstrip().endswith(NO_WITNESS)


def test_obstruct_json_twin():
    code, out = call("obstruct", "r", "3", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == NOT_TORIC and d["witness"]["kind"] == "face-exclusion"
    code, out = call("obstruct", "r", "2", "2", "--format", "json")
    assert code == 1 and json.loads(out)["witness"] is None


def test_never_says_toric_alone():
    for argv in (("obstruct", "br", "2", "2"), ("obstruct", "r", "1", "3"), ("obstruct", "br", "4", "2")):
        _, out = call(*argv)
        for line in out.splitlines():
            low = line.lower()
            if "toric" in low:
                assert NOT_TORIC in line or NO_WITNESS in line


def test_betti():
    assert call("betti", "r", "2", "2") == (0, "1 4 4 1\n")
    assert call("betti", "br", "3", "2") == (0, "1 4 7 4 1\n")
    assert call("betti", "bf", "3") == (0, "1 3 3 1\n")


def test_cohomology_relations():
    code, out = call("cohomology", "r", "2", "2", "--relations")
    assert code == 0
    assert "graded ranks: 1 4 4 1" in out
    assert "relation: x2^2 - x2*x1" in out
    assert sum(l.startswith("annihilator:") for l in out.splitlines()) >= 2
    code, out = call("cohomology", "br", "3", "2", "--format", "json")
    assert code == 0 and json.loads(out)["graded_ranks"] == [1, 4, 7, 4, 1]


def test_toric_check(tmp_path):
    f = tmp_path / "cp.json"
    f.write_text(json.dumps(charpair_presets()["r22"].to_dict()))
    code, out = call("toric", "check", str(f))
    assert code == 0 and "identity" in out
    d = charpair_presets()["r22"].to_dict()
    d["lambda"][0][0] = 3
    f.write_text(json.dumps(d))
    code, out = call("toric", "check", str(f), "--format", "json")
    assert code == 1 and json.loads(out)["unimodular"] is False
    f.write_text("{not json")
    assert call("toric", "check", str(f))[0] == 2
    assert call("toric", "check", "--preset", "br21")[0] == 0
    assert call("toric", "check", "--preset", "nope")[0] == 2


def test_reproduce():
    code, out = call("reproduce", "thm1.2", "3", "2")
    assert code == 0 and "forced steps replayed: yes" in out and out.rstrip().endswith(NOT_TORIC)
    code, out = call("reproduce", "thm1.3", "3", "2", "--format", "json")
    assert code == 0 and json.loads(out)["witness"]["excluded_vertex"] == "000,11"


@pytest.mark.parametrize("argv", [
    ("family", "br", "3"), ("family", "zz", "1"), ("betti", "br", "0", "1"), ("betti", "h", "1", "2"),
    ("cohomology", "bf", "2"), ("reproduce", "thm1.2", "2", "2"), ("obstruct", "br", "-1", "2"),
    ("obstruct", "br", "3", "2", "--max-cycle-len", "2"), ("family",), ("nonsense",),
])
def test_invalid_parameters_exit_2(argv):
    assert call(*argv)[0] == 2


def test_export_and_determinism():
    a = call("export", "r", "3", "2", "--format", "json")
    b = call("export", "r", "3", "2", "--format", "json")
    assert a == b and a[0] == 0
    assert call("obstruct", "br", "4", "3", "--format", "json") == \
        call("obstruct", "br", "4", "3", "--format", "json")


def test_module_entry_point_with_threads():
    import os
    import subprocess
    import sys

    env = dict(os.environ, GKM_THREADS="2")
    out = subprocess.run([sys.executable, "-m", "gkmhyper", "obstruct", "r", "4", "2"],
                         capture_output=True, text=True, env=env)
    assert out.returncode == 0 and out.stdout.rstrip().endswith(NOT_TORIC)
    single = subprocess.run([sys.executable, "-m", "gkmhyper", "obstruct", "r", "4", "2"],
                            capture_output=True, text=True, env=dict(os.environ, GKM_THREADS="1"))
    assert single.stdout == out.stdout
