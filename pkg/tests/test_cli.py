import json
import subprocess
import sys

import pytest

from zassenhaus.cli import main, parse_q
from zassenhaus.closed_form import ClassSizeTable, sz_table
from zassenhaus.divgraph import DivisibilityGraph, build_divgraph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classes_sz_json(capsys):
    code, out, _ = run(capsys, "classes", "sz", "--q", "8", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 29120 and len(data["entries"]) == 6
    assert ClassSizeTable.from_dict(data) == sz_table(8)


def test_classes_psl2_q3_is_usage_error(capsys):
    code, out, err = run(capsys, "classes", "psl2", "--q", "3")
    assert code == 2
    assert "q must exceed 3" in err


def test_classes_psl2_table(capsys):
    code, out, _ = run(capsys, "classes", "psl2", "--q", "7")
    assert code == 0
    rows = [line for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert len(rows) == 5
    total = sum(int(r.split("|")[0]) * int(r.split("|")[1]) for r in rows)
    assert total == 168
    sizes = [int(r.split("|")[0]) for r in rows]
    assert sizes == sorted(sizes)


def test_q_power_syntax(capsys):
    _, a, _ = run(capsys, "classes", "psl2", "--q", "3^2", "--format", "json")
    _, b, _ = run(capsys, "classes", "psl2", "--q", "9", "--format", "json")
    assert a == b
    assert parse_q("2^13") == 8192


def test_divgraph_sz_shape(capsys):
    code, out, _ = run(capsys, "divgraph", "--family", "sz", "--q", "8", "--format", "shape")
    assert (code, out.strip()) == (0, "K2+3K1")


def test_divgraph_sizes_shape(capsys):
    code, out, _ = run(capsys, "divgraph", "--sizes", "2,4,8", "--format", "shape")
    assert (code, out.strip()) == (0, "K3")


def test_divgraph_psl9_dot(capsys):
    code, out, _ = run(capsys, "divgraph", "--family", "psl2", "--q", "9", "--format", "dot")
    assert code == 0
    assert "  45 -- 90;" in out.splitlines()


def test_divgraph_json_round_trip(capsys):
    code, out, _ = run(capsys, "divgraph", "--family", "psl2", "--q", "7", "--format", "json")
    assert out.strip() == '{"vertices":[21,24,42,56],"edges":[[21,42]]}'
    g = DivisibilityGraph.from_dict(json.loads(out))
    assert g == build_divgraph([21, 24, 42, 56])


def test_divgraph_bad_source(capsys):
    assert run(capsys, "divgraph", "--format", "shape")[0] == 2
    assert run(capsys, "divgraph", "--sizes", "2,x")[0] == 2
    assert run(capsys, "divgraph", "--sizes", "2", "--family", "sz", "--q", "8")[0] == 2


def test_verify_psl7_brute_force(capsys):
    code, out, _ = run(capsys, "verify", "--family", "psl2", "--q", "7", "--checks", "brute-force")
    assert code == 0
    assert out.startswith("PASS brute-force")
    assert out.count("[1, 21, 24, 24, 42, 56]") == 2


def test_verify_sz8_ti_lemma(capsys):
    code, out, _ = run(capsys, "verify", "--family", "sz", "--q", "8", "--checks", "ti-lemma")
    assert code == 0
    for name in ("A0", "A1", "A2", "K"):
        assert f"PASS ti-lemma {name}:" in out


def test_verify_unsupported_brute_force(capsys):
    code, _, err = run(capsys, "verify", "--family", "sz", "--q", "8192", "--checks", "brute-force")
    assert code == 2
    assert "brute force unsupported for q=8192" in err


def test_verify_class_equation_large_q(capsys):
    code, out, _ = run(capsys, "verify", "--family", "sz", "--q", "8192",
                       "--checks", "class-equation")
    assert code == 0 and out.startswith("PASS class-equation")


def test_verify_all_checks_psl2(capsys):
    code, out, err = run(capsys, "verify", "--family", "psl2", "--q", "9")
    assert code == 0
    assert "FAIL" not in out
    assert "time brute-force" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from zassenhaus import cli
    from zassenhaus.closed_form import ClassEntry, ClassSizeTable, psl2_table

    def broken(family, q):
        t = psl2_table(q)
        return ClassSizeTable(t.spec, t.entries + (ClassEntry(7, 1, "H"),))
    monkeypatch.setattr(cli, "class_table", broken)
    code, out, _ = run(capsys, "verify", "--family", "psl2", "--q", "7",
                       "--checks", "class-equation,brute-force")
    assert code == 1
    assert "FAIL class-equation" in out and "FAIL brute-force" in out


def test_verify_unknown_check(capsys):
    assert run(capsys, "verify", "--family", "sz", "--q", "8", "--checks", "bogus")[0] == 2


def test_sweep_psl2(capsys):
    code, out, _ = run(capsys, "sweep", "psl2", "4", "13")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 7 + 1
    assert lines[-1] == "shapes: 3K1 (q=4,5,8); K2+2K1 (q=7,9,11,13)"
    assert lines[3] == "7 | 3 | 168 | 21,24,42,56 | K2+2K1"


def test_sweep_sz(capsys):
    code, out, _ = run(capsys, "sweep", "sz", "8", "8192")
    rows = out.strip().splitlines()[1:-1]
    assert len(rows) == 6
    assert all(r.endswith("| K2+3K1") for r in rows)


def test_sweep_empty(capsys):
    code, out, _ = run(capsys, "sweep", "psl2", "5", "4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "no valid q"


def test_output_is_deterministic(capsys):
    outs = {run(capsys, "classes", "sz", "--q", "32", "--format", "json")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zassenhaus", "divgraph", "--sizes",
                           "455,1820,2240,4160,5824"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "K2+3K1"


@pytest.mark.parametrize("argv", [[], ["classes"], ["sweep", "psl2", "4"]])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2
