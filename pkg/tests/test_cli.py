import io
import subprocess
import sys


from grassembed import acceptance, formats
from grassembed.cli import run
from grassembed.gf import field_for_order
from grassembed.grassmann import GrassmannGraph, GrassmannMap, dual_isomorphism, identity_map
from grassembed.linalg import Matrix
from grassembed.semilinear import SemilinearMap, induced_map

F2 = field_for_order(2)


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def inclusion(n, m):
    return SemilinearMap.linear(F2, [tuple(1 if i == j else 0 for j in range(m)) for i in range(n)], m)


def test_stats():
    code, text = call("stats", "--q", "2", "--n", "4", "--k", "2")
    d = kv(text)
    assert code == 0
    assert (d["vertices"], d["edges"], d["diameter"]) == ("35", "315", "2")
    assert d["star_size"] == d["top_size"] == "7"


def test_gen_to_stdout_and_file(tmp_path):
    code, text = call("gen", "--q", "2", "--n", "2", "--k", "1")
    assert code == 0 and text.splitlines()[1:] == ["0 1", "0 2", "1 2"]
    path = str(tmp_path / "g.dot")
    code, text = call("gen", "--q", "2", "--n", "4", "--k", "2", "--format", "dot", "--out", path)
    assert code == 0 and kv(text)["edges"] == "315"
    assert "graph G {" in open(path).read()


def test_verify_identity_and_swapped(tmp_path):
    G = GrassmannGraph(2, 4, 2)
    path = write(tmp_path, "id.emb", formats.write_emb(identity_map(G)))
    code, text = call("embed", "verify", path)
    d = kv(text)
    assert code == 0 and d["isometric"] == "true" and d["type"] == "A"
    table = list(range(35))
    j = next(j for j in range(1, 35) if G.distance_idx(0, j) == 2)
    table[1], table[j] = table[j], table[1]
    path = write(tmp_path, "bad.emb", formats.write_emb(GrassmannMap(G, G, table)))
    code, text = call("embed", "verify", path)
    assert code == 1
    assert kv(text)["isometric"] == "false"
    assert "witness=" in text


def test_verify_alias_and_type_B(tmp_path):
    path = write(tmp_path, "d.emb", formats.write_emb(dual_isomorphism(2, 4, 2)))
    code, text = call("embed-verify", path)
    assert code == 0 and kv(text)["type"] == "B"


def test_construct_decompose_rigidity_pipeline(tmp_path):
    mp = write(tmp_path, "l.sl", formats.write_semilinear(inclusion(4, 5)))
    sp = write(tmp_path, "S.mat", formats.write_matrix(Matrix(F2, [(0, 0, 0, 0, 0, 1)])))
    emb = str(tmp_path / "f.emb")
    code, text = call("embed", "construct", "--type", "A", "--map", mp, "--subspace", sp,
                      "--k", "2", "--out", emb)
    assert code == 0 and kv(text)["codomain"] == "2,6,3"
    code, text = call("embed", "verify", emb)
    assert code == 0 and kv(text)["type"] == "A"
    lp = str(tmp_path / "rec.sl")
    code, text = call("embed", "decompose", emb, "--out-map", lp)
    d = kv(text)
    assert code == 0 and d["type"] == "A" and d["S_dim"] == "1"
    rec = formats.read_semilinear(open(lp).read())
    assert induced_map(rec, 2) == induced_map(inclusion(4, 5), 2)
    code, text = call("embed", "rigidity", emb)
    assert code == 0 and kv(text)["rigid"] == "true"


def test_construct_type_B_and_balanced_stdout(tmp_path):
    mp = write(tmp_path, "l.sl", formats.write_semilinear(inclusion(4, 5)))
    up = write(tmp_path, "U.mat", formats.write_matrix(
        Matrix(F2, [tuple(1 if i == j else 0 for j in range(6)) for i in range(5)])))
    code, text = call("embed", "construct", "--type", "B", "--map", mp, "--subspace", up, "--k", "2")
    assert code == 0
    f = formats.read_emb(text)
    assert f.codomain.k == 3
    wp = write(tmp_path, "w.sl", formats.write_semilinear(inclusion(4, 4)))
    sp = write(tmp_path, "S.mat", formats.write_matrix(Matrix(F2, [(1, 0, 0, 0, 0, 0)])))
    code, text = call("embed", "construct", "--type", "balanced", "--map", wp, "--subspace", sp,
                      "--outer", up, "--flavor", "dual-quotient", "--k", "2")
    assert code == 0 and formats.read_emb(text).codomain.params == (2, 6, 3)
    code, _ = call("embed", "construct", "--type", "balanced", "--map", wp, "--subspace", sp, "--k", "2")
    assert code == 2


def test_non_rigid_exit_code(tmp_path):
    f = induced_map(acceptance.special_maps()["gf2^5->gf32^4"], 2)
    path = write(tmp_path, "f32.emb", formats.write_emb(f))
    code, text = call("embed", "rigidity", path)
    assert code == 1 and kv(text)["rigid"] == "false"
    assert "failing_generator=" in text


def test_decompose_not_embedding(tmp_path):
    G = GrassmannGraph(2, 4, 2)
    path = write(tmp_path, "c.emb", formats.write_emb(GrassmannMap(G, G, [0] * 35)))
    code, text = call("embed", "decompose", path)
    assert code == 1 and kv(text)["decomposable"] == "false"


def test_feasibility():
    code, text = call("embed", "feasibility", "--q", "2", "--n", "5", "--k", "2",
                      "--q2", "2", "--n2", "5", "--k2", "3")
    d = kv(text)
    assert code == 0 and d["rigid_A"] == "false" and d["rigid_B"] == "true"


def test_usage_errors(tmp_path, capsys):
    assert call("stats", "--q", "6", "--n", "4", "--k", "2")[0] == 2
    assert call("stats", "--q", "2")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("embed", "verify", str(tmp_path / "missing.emb"))[0] == 2
    bad = write(tmp_path, "bad.emb", "2 4 2 2 4 2\nGF(2^1;1,0)\nGF(2^1;1,0)\n0 x\n")
    assert call("embed", "verify", bad)[0] == 2
    assert "line 4" in capsys.readouterr().err


def test_budget_exit_code(tmp_path):
    path = write(tmp_path, "id.emb", formats.write_emb(identity_map(GrassmannGraph(2, 4, 2))))
    code, text = call("embed", "rigidity", path, "--budget", "0")
    assert code == 3 and kv(text)["error"] == "budget exceeded"


def test_common_flags_accepted_anywhere(tmp_path):
    code, _ = call("--seed", "5", "--threads", "2", "stats", "--q", "2", "--n", "3", "--k", "1")
    assert code == 0
    code, _ = call("stats", "--q", "2", "--n", "3", "--k", "1", "-v", "--threads", "4")
    assert code == 0


def test_selftest_list():
    code, text = call("selftest", "--list")
    assert code == 0
    assert len([l for l in text.splitlines() if l.startswith("criterion ")]) == 11


def test_selftest_only_passes():
    code, text = call("selftest", "--only", "1", "3")
    assert code == 0
    assert kv(text)["passed"] == "2"


def test_selftest_detects_broken_distance(monkeypatch):
    from grassembed.grassmann import GrassmannGraph as G
    real = G.distance
    monkeypatch.setattr(G, "distance", lambda self, X, Y: min(real(self, X, Y), 1))
    code, text = call("selftest", "--only", "1")
    assert code == 1
    assert "criterion 1: FAIL" in text


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "grassembed", "stats", "--q", "2", "--n", "4", "--k", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "vertices=35" in r.stdout
