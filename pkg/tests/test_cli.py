import itertools
import json
import subprocess
import sys
from fractions import Fraction


from nucifera.cli import data_path, main, table2_printed_inverse
from nucifera.graphio import load_graph, format_adjacency

from oracles import first_nonassociative_triple
from test_groups import quaternion_table


def intercalate_swap(t):
    """Swap a 2x2 Latin subsquare away from row/column 0: still a loop, no longer a group."""
    n = len(t)
    for i, j, k, l in itertools.product(range(1, n), repeat=4):
        if i < j and k < l and t[i][k] == t[j][l] and t[i][l] == t[j][k]:
            bad = [r[:] for r in t]
            bad[i][k], bad[i][l] = t[i][l], t[i][k]
            bad[j][k], bad[j][l] = t[j][l], t[j][k]
            if first_nonassociative_triple(bad):
                return bad
    raise AssertionError("no intercalate found")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_default_fixture(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "verdict: Nuciferous" in out
    assert "21*A^-1 matches printed matrix: yes" in out


def test_verify_inverse_printout(capsys, data_dir):
    code, out, _ = run(capsys, "verify", str(data_dir / "table2.adj"), "--inverse")
    assert code == 0
    lines = out.splitlines()
    rows = lines[lines.index("A^-1:") + 1:]
    printed = table2_printed_inverse()
    assert len(rows) == 24
    for i, row in enumerate(rows):
        assert [Fraction(t) * 21 for t in row.split()] == printed[i]


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "Nuciferous" and d["matches_printed_inverse"]
    assert len(d["adj"]) == 24


def test_verify_k2_and_c4(capsys, tmp_path):
    k2 = tmp_path / "k2.g6"
    k2.write_text("A_\n")
    code, out, _ = run(capsys, "verify", str(k2), "--inverse")
    assert code == 0 and "verdict: Nuciferous" in out
    assert out.splitlines()[-2:] == ["0 1", "1 0"]
    c4 = tmp_path / "c4.adj"
    c4.write_text("0 1 0 1\n1 0 1 0\n0 1 0 1\n1 0 1 0\n")
    code, out, _ = run(capsys, "verify", str(c4))
    assert code == 1 and "Singular" in out


def test_verify_parse_error(capsys, tmp_path):
    bad = tmp_path / "loop.adj"
    bad.write_text("1 1\n1 0\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "loop" in err


def test_search_and_report(capsys, tmp_path):
    out = tmp_path / "res"
    code, csv, _ = run(capsys, "search", "--group", "S(4)", "--group", "C(12)", "--out", str(out))
    assert code == 0
    assert csv.splitlines()[:3] == ["order,group,degree,count", "24,S(4),7,2", "24,S(4),15,1"]
    assert csv.splitlines()[-1] == "24:3 total:3"
    code, rep, _ = run(capsys, "report", str(out))
    assert code == 0 and rep == csv
    # resume reuses every finished block
    code, csv2, _ = run(capsys, "search", "--group", "S(4)", "--group", "C(12)", "--out", str(out),
                        "--resume")
    assert code == 0 and csv2 == csv


def test_search_c12_empty(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--group", "C(12)", "--out", str(tmp_path))
    assert code == 0 and out == "order,group,degree,count\ntotal:0\n"


def test_search_bad_group(capsys, tmp_path):
    code, _, err = run(capsys, "search", "--group", "D(7)", "--out", str(tmp_path))
    assert code == 2 and "even" in err


def test_search_check_table1_mismatch(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--group", "S(4)", "--out", str(tmp_path), "--check-table1")
    assert code == 1 and "MISMATCH" in out and "missing  30,D(30),15,10" in out


def test_report_empty_and_corrupt(capsys, tmp_path):
    code, out, _ = run(capsys, "report", str(tmp_path))
    assert code == 0 and out.endswith("total:0\n")
    run(capsys, "search", "--group", "A(4) x C(2)", "--out", str(tmp_path))
    victim = sorted(tmp_path.glob("24/*/hits/*.g6"))[0]
    victim.write_text("W?????????????????????????????????????????????????????????????????????????????\n")
    code, _, err = run(capsys, "report", str(tmp_path))
    assert code == 2 and victim.name in err


def test_iso(capsys, tmp_path, data_dir):
    g = load_graph(data_dir / "table2.adj")
    perm = list(reversed(range(24)))
    other = tmp_path / "relabeled.adj"
    other.write_text(format_adjacency(g.relabel(perm)))
    code, out, _ = run(capsys, "iso", str(data_dir / "table2.adj"), str(other), "--witness")
    assert code == 0 and out.splitlines()[0] == "isomorphic"
    pairs = dict(tuple(map(int, t.split("->"))) for t in out.splitlines()[1].split())
    assert g.relabel([pairs[v] for v in range(24)]) == g.relabel(perm)
    c6 = tmp_path / "c6.adj"
    c6.write_text("\n".join(" ".join("1" if (j - i) % 6 in (1, 5) else "0" for j in range(6))
                            for i in range(6)))
    tri = tmp_path / "2k3.adj"
    tri.write_text("\n".join(" ".join("1" if i != j and i // 3 == j // 3 else "0" for j in range(6))
                             for i in range(6)))
    code, out, _ = run(capsys, "iso", str(c6), str(tri))
    assert code == 1 and out.strip() == "non-isomorphic"


def test_groups_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "groups", "list")
    assert code == 0 and all(t in out for t in ("C(n)", "D(n)", "S(k)", "A(k)", "x H"))
    q8 = tmp_path / "q8.txt"
    q8.write_text("8\n" + "\n".join(" ".join(map(str, r)) for r in quaternion_table()) + "\n")
    dest = tmp_path / "q8_norm.txt"
    code, out, _ = run(capsys, "groups", "import", str(q8), "--out", str(dest))
    assert code == 0 and "valid: order 8" in out and dest.exists()
    bad = intercalate_swap(quaternion_table())
    bad_file = tmp_path / "bad.txt"
    bad_file.write_text("8\n" + "\n".join(" ".join(map(str, r)) for r in bad) + "\n")
    code, out, _ = run(capsys, "groups", "validate", str(bad_file))
    assert code == 1 and "associativity" in out and "witness:" in out
    code, out, _ = run(capsys, "groups", "show", "S(3)")
    assert code == 0 and out.splitlines()[0] == "6"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nucifera", "verify"], capture_output=True, text=True)
    assert res.returncode == 0 and "Nuciferous" in res.stdout


def test_verify_graph6_format(capsys):
    code, out, _ = run(capsys, "verify", "--format", "graph6")
    assert code == 0
    g6 = next(l.split(": ", 1)[1] for l in out.splitlines() if l.startswith("graph6: "))
    from nucifera.graphio import from_graph6
    assert from_graph6(g6) == load_graph(data_path("table2.adj"))


def test_search_seed_does_not_change_results(capsys, tmp_path):
    base = run(capsys, "search", "--group", "A(4) x C(2)", "--out", str(tmp_path / "a"))
    shuffled = run(capsys, "search", "--group", "A(4) x C(2)", "--out", str(tmp_path / "b"),
                   "--seed", "5")
    assert base == shuffled and base[0] == 0
    for name in ("report.json",):
        a = (tmp_path / "a" / "24" / "A4xC2" / name).read_text()
        b = (tmp_path / "b" / "24" / "A4xC2" / name).read_text()
        assert a == b
