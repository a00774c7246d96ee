import json

import networkx as nx
import pytest

from ddgraph.cli import main
from ddgraph.formats import graph6_encode
from ddgraph.construct import sporadic28


@pytest.fixture()
def fano_desc(tmp_path):
    p = tmp_path / "fano.json"
    p.write_text(json.dumps({"kind": "construction1", "symmetric_design": {"type": "fano"},
                             "designs": {"type": "ag", "q": 2, "d": 2}}))
    return p


def test_gen_verify_discover(tmp_path, fano_desc, capsys):
    g6, part = tmp_path / "g.g6", tmp_path / "g.part"
    assert main(["gen", str(fano_desc), "-o", str(g6), "--partition-out", str(part)]) == 0
    assert main(["verify", str(g6), "--partition", str(part)]) == 0
    assert "PASS (28,6,2,1;7,4)" in capsys.readouterr().out
    assert main(["discover", str(g6), "--show-partition"]) == 0
    assert "(28,6,2,1;7,4)" in capsys.readouterr().out


def test_gen_seed_changes_graph(tmp_path, fano_desc, capsys):
    main(["gen", str(fano_desc), "--seed", "3"])
    a = capsys.readouterr().out
    main(["gen", str(fano_desc), "--seed", "3"])
    assert capsys.readouterr().out == a


def test_verify_failure_exit_code(tmp_path):
    g6 = tmp_path / "p.g6"
    g6.write_text("Bg\n")  # path on three vertices
    part = tmp_path / "p.part"
    part.write_text("0 1 2\n")
    assert main(["verify", str(g6), "--partition", str(part)]) == 1


def test_iso(tmp_path, capsys):
    g6 = tmp_path / "s.g6"
    g6.write_text(graph6_encode(sporadic28().adjacency) + "\n")
    assert main(["iso", str(g6), str(g6)]) == 0
    c6, k33 = tmp_path / "c6.g6", tmp_path / "k.g6"
    c6.write_bytes(nx.to_graph6_bytes(nx.cycle_graph(6), header=False))
    k33.write_bytes(nx.to_graph6_bytes(nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3)), header=False))
    assert main(["iso", str(c6), str(k33)]) == 1


@pytest.mark.parametrize("argv,code,needle", [
    (["params", "theorem1", "2", "2", "7", "1"], 0, "(28,6,2,1;7,4)"),
    (["params", "theorem2", "2", "3", "15", "7", "3"], 1, "FAIL"),
    (["params", "theorem2", "2", "3", "15", "7", "3", "--variant", "corrected"], 0, "(120,92,76,70;15,8)"),
    (["params", "bg", "Y", "2", "2"], 1, "798"),
    (["params", "theorem1", "2", "2", "7"], 2, ""),
    (["params", "theorem1", "2", "2", "7", "2"], 2, ""),
])
def test_params(argv, code, needle, capsys):
    assert main(argv) == code
    assert needle in capsys.readouterr().out


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert main(["verify", str(tmp_path / "missing.g6")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "sporadic28", "extra": 1}')
    assert main(["gen", str(bad)]) == 2


def test_catalog_cli(tmp_path, fano_desc, capsys):
    out = tmp_path / "cat"
    assert main(["catalog", str(fano_desc), "-o", str(out), "--seed", "2"]) == 0
    assert (out / "0000.g6").exists() and (out / "index").exists()
