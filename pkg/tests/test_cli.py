import json
import subprocess
import sys

import pytest

from netclique import cli
from netclique.gf import field_of_order
from netclique.netgraph import build_paley, ingest_graph
from netclique.verify import SuiteReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_default_format(capsys):
    code, out, _ = run(capsys, "table", "paley", "11")
    assert code == 0 and out.strip() == "11: 7^3, 11^1"
    code, out, _ = run(capsys, "table", "paley", "--q", "25", "--r", "7")
    assert out.splitlines() == ["7: 5^1, 7^1", "5: 3^1, 5^1"]


def test_table_json_and_tsv(capsys):
    code, out, _ = run(capsys, "table", "peisert", "7", "--format", "json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["entries"] == [[4, 1], [7, 1]] and rows[0]["schema"] == 1
    code, out, _ = run(capsys, "table", "taylor-paley", "3", "--format", "tsv")
    assert out.splitlines()[1] == "taylor-paley\t3\t4\t1\t1"


def test_table_net_warns(capsys):
    code, out, err = run(capsys, "table", "net", "5", "--m", "3")
    assert code == 0 and out.startswith("5: ")
    assert "warning" in err
    code, _, err = run(capsys, "table", "net", "5")
    assert code == 2 and "--directions" in err
    code, out, _ = run(capsys, "table", "net", "5", "--directions", "0,2,4")
    assert out.strip() == "5: 3^1?, 5^1?"  # net groups are not certified full


def test_subgroup_and_usage_errors(capsys):
    assert run(capsys, "table", "peisert", "9", "--group", "closed-form")[0] == 2
    code, out, _ = run(capsys, "table", "peisert", "9", "--group", "closed-form", "--allow-subgroup")
    assert code == 0 and "?" in out
    assert run(capsys, "table", "paley")[0] == 2
    assert run(capsys, "table", "paley", "--q", "24")[0] == 2
    assert run(capsys, "table", "paley", "4")[0] == 2
    assert run(capsys, "table", "nosuch", "3")[0] == 2
    assert run(capsys, "table", "paley", "3", "--bogus")[0] == 2
    assert run(capsys, "table", "graph")[0] == 2
    assert run(capsys, "table", "paley", "5", "--group", "file")[0] == 2


def test_caps_exit_3(capsys):
    code, _, err = run(capsys, "table", "paley", "9", "--max-cliques", "5")
    assert code == 3 and "cap" in err


def test_wall_clock_cap(capsys):
    code, _, err = run(capsys, "table", "paley", "23", "--max-seconds", "0.05")
    assert code == 3


def test_smallest(capsys):
    code, out, _ = run(capsys, "smallest", "paley", "9", "13")
    assert code == 0 and out.splitlines() == ["9: 5^3", "13: 5^10"]
    code, out, _ = run(capsys, "smallest", "peisert", "7")
    assert out.strip() == "7: 4^1"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "netcliq", "--r", "5", "--m", "3")
    assert code == 0 and "cases pass" in out
    code, out, _ = run(capsys, "verify", "goryainov", "--r-max", "13", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["n_failures"] == 0
    assert run(capsys, "verify", "nope")[0] == 2


def test_verify_failure_writes_witnesses(capsys, monkeypatch, tmp_path):
    def fake(name, **params):
        rep = SuiteReport(name)
        rep.add({"r": 5}, True)
        rep.add({"r": 7, "m": 3}, False, assertion="unique maximal clique", x=3, A=[0, 1])
        return rep

    monkeypatch.setattr(cli, "run_suite", fake)
    code, out, err = run(capsys, "verify", "netcliq", "--r", "7", "--witness-dir", str(tmp_path))
    assert code == 1 and "1/2 cases pass" in out and "FAIL" in out
    dumped = json.loads((tmp_path / "witnesses-netcliq.json").read_text())
    assert dumped == [{"params": {"r": 7, "m": 3}, "assertion": "unique maximal clique", "x": 3, "A": [0, 1]}]


def test_export_ingest_round_trip(capsys, tmp_path):
    path = tmp_path / "p25.txt"
    assert run(capsys, "export", "paley", "5", "-o", str(path))[0] == 0
    g, _ = build_paley(field_of_order(25))
    assert ingest_graph(path).same_edges(g)
    code, out, _ = run(capsys, "ingest", str(path))
    assert code == 0 and json.loads(out)["srg"] == [25, 12, 5, 6]
    code, out, _ = run(capsys, "table", "graph", "--graph", str(path))
    assert out.strip() == "graph: 3^1, 5^1"
    t = tmp_path / "t9.txt"
    run(capsys, "export", "taylor-paley", "3", "-o", str(t))
    info = json.loads(run(capsys, "ingest", str(t), "--drg")[1])
    assert info["intersection_array"] == [[9, 4, 1], [1, 4, 9]] and info["srg"] is None
    assert run(capsys, "ingest", str(tmp_path / "missing.txt"))[0] == 2


def test_export_to_stdout(capsys):
    code, out, _ = run(capsys, "export", "net", "3", "--m", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "9" and len(lines) == 1 + 18


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "netclique", "table", "paley", "7"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout.strip() == "7: 5^1, 7^1"
    res = subprocess.run([sys.executable, "-m", "netclique"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 2
