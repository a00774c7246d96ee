import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from ddgraph.catalog import run_catalog, verify_entry
from ddgraph.formats import (
    DescriptorError,
    build,
    descriptor_emit,
    descriptor_parse,
    graph6_decode,
    graph6_encode,
    read_graph6,
    write_graph6,
)

FANO_DESC = {"kind": "construction1", "symmetric_design": {"type": "fano"}, "designs": {"type": "ag", "q": 2, "d": 2}}


def nx_graph6(A: np.ndarray) -> str:
    return nx.to_graph6_bytes(nx.from_numpy_array(A.astype(int)), header=False).decode().strip()


def test_graph6_small_cases():
    assert graph6_encode(np.ones((3, 3), dtype=bool) & ~np.eye(3, dtype=bool)) == "Bw"
    assert graph6_encode(np.zeros((1, 1), dtype=bool)) == "@"
    assert graph6_encode(np.zeros((0, 0), dtype=bool)) == "?"


def test_graph6_two_hundred_random_graphs():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        v = int(rng.integers(1, 140))
        A = random_graph(rng, v, float(rng.random()))
        line = graph6_encode(A)
        assert line == nx_graph6(A)
        assert np.array_equal(graph6_decode(line), A)


@given(st.integers(0, 2**32 - 1), st.sampled_from([62, 63, 64, 258]))
@settings(max_examples=10, deadline=None)
def test_graph6_size_boundaries(seed, v):
    A = random_graph(np.random.default_rng(seed), v, 0.5)
    assert graph6_decode(graph6_encode(A)).tolist() == A.tolist()
    assert graph6_encode(A) == nx_graph6(A)


@pytest.mark.parametrize("bad", ["", "B", "Bw\x7f", "B~~", "~??"])
def test_graph6_malformed(bad):
    with pytest.raises(ValueError):
        graph6_decode(bad)


def test_graph6_file_round_trip(tmp_path, symp):
    graphs = [symp["Y", "z_p2"].adjacency, symp["X", "fq_x2"].adjacency]
    write_graph6(tmp_path / "g.g6", graphs)
    back = read_graph6(tmp_path / "g.g6")
    assert all(np.array_equal(a, b) for a, b in zip(graphs, back))


def test_minimal_descriptor_gives_sporadic_parameters():
    d = descriptor_parse(json.dumps(FANO_DESC))
    assert d.data["labeling"] == {"strategy": "canonical", "seed": 0}
    assert d.data["sigma"] == {"strategy": "identity", "seed": 0}
    G = build(d)
    assert G.declared.as_tuple() == (28, 6, 2, 1, 7, 4)
    emitted = descriptor_emit(d)
    assert '"seed": 0' in emitted
    assert descriptor_emit(descriptor_parse(emitted)) == emitted


def test_key_order_does_not_matter():
    a = descriptor_emit(descriptor_parse(json.dumps(FANO_DESC)))
    b = descriptor_emit(descriptor_parse(json.dumps(dict(reversed(list(FANO_DESC.items()))))))
    assert a == b


def test_duplicate_key_named():
    text = '{"kind": "sporadic28", "kind": "sporadic28"}'
    with pytest.raises(DescriptorError, match="'kind'"):
        descriptor_parse(text)


@pytest.mark.parametrize("patch,where", [
    ({"colour": 1}, "descriptor.colour"),
    ({"designs": {"type": "ag", "q": 2}}, "descriptor.designs.d"),
    ({"designs": {"type": "ag", "q": 2, "d": 2, "r": 1}}, "descriptor.designs.r"),
    ({"labeling": {"strategy": "seeded", "seed": "x"}}, "descriptor.labeling.seed"),
    ({"sigma": {"strategy": "sometimes"}}, "descriptor.sigma.strategy"),
])
def test_schema_errors_have_paths(patch, where):
    with pytest.raises(DescriptorError) as err:
        descriptor_parse(json.dumps({**FANO_DESC, **patch}))
    assert err.value.path == where


def test_invalid_json():
    with pytest.raises(DescriptorError, match="line 1"):
        descriptor_parse("{")


@pytest.mark.parametrize("desc", [
    {**FANO_DESC, "labeling": {"strategy": "seeded", "seed": 9}, "sigma": {"strategy": "seeded", "seed": 4}},
    {"kind": "partial_complement", "symmetric_design": {"type": "null_polarity", "e": 2, "q": 2},
     "designs": {"type": "ag", "q": 2, "d": 3}, "labeling": {"strategy": "seeded", "seed": 1}, "sigma": {"strategy": "seeded", "seed": 1}},
    {"kind": "symplectic", "ring": {"kind": "fq_x2", "q": 2, "e": 2}, "variant": "Y"},
    {"kind": "sporadic28"},
])
def test_descriptors_are_deterministic(desc):
    text = json.dumps(desc)
    a, b = build(descriptor_parse(text)), build(descriptor_parse(text))
    assert graph6_encode(a.adjacency) == graph6_encode(b.adjacency)
    assert np.array_equal(a.labels, b.labels)


def test_file_sources(tmp_path):
    from ddgraph.designs import affine_from_ag, dump_design
    from ddgraph.symdesigns import FANO

    (tmp_path / "a.txt").write_text("\n".join(FANO) + "\n")
    (tmp_path / "d.json").write_text(dump_design(affine_from_ag(2, 2)))
    d = descriptor_parse(json.dumps({"kind": "construction1", "symmetric_design": {"type": "file", "path": "a.txt"},
                                     "designs": [{"type": "file", "path": "d.json"}] * 7}))
    assert build(d, tmp_path).declared.as_tuple() == (28, 6, 2, 1, 7, 4)


def fano_stream(n):
    for seed in range(n):
        yield json.dumps({**FANO_DESC, "labeling": {"strategy": "seeded", "seed": seed}, "sigma": {"strategy": "seeded", "seed": seed}})


def test_catalog_fano_seeds(tmp_path):
    index = run_catalog(list(fano_stream(20)), tmp_path)
    assert index["entries"] and not index["failures"]
    assert set(index["by_params"]) == {"(28,6,2,1;7,4)"}
    assert len(index["entries"]) + len(index["duplicates"]) == 20
    for e in index["entries"]:
        assert verify_entry(tmp_path, e["id"])


def test_catalog_byte_identical_runs(tmp_path):
    stream = list(fano_stream(6)) + ['{"kind": "sporadic28"}']
    run_catalog(stream, tmp_path / "a")
    run_catalog(stream, tmp_path / "b")
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_catalog_records_failures(tmp_path):
    stream = ['{"kind": "nope"}', json.dumps({**FANO_DESC, "designs": {"type": "ag", "q": 3, "d": 2}}), '{"kind": "sporadic28"}']
    index = run_catalog(stream, tmp_path)
    assert [f["descriptor"] for f in index["failures"]] == [0, 1]
    assert len(index["entries"]) == 1


def test_catalog_empty(tmp_path):
    index = run_catalog([], tmp_path)
    assert index == {"entries": [], "by_params": {}, "duplicates": [], "failures": []}
    assert json.loads((tmp_path / "index").read_text()) == index


def test_catalog_symplectic_pair(tmp_path):
    """Y over Z/4 and over F_2[x]/(x^2) share every invariant yet stay two classes."""
    stream = [json.dumps({"kind": "symplectic", "ring": {"kind": k, "q": 2, "e": 2}, "variant": "Y"}) for k in ("z_p2", "fq_x2")]
    index = run_catalog(stream, tmp_path)
    a, b = index["entries"]
    assert a["fingerprint"] == b["fingerprint"]
    assert index["by_params"] == {"(120,28,12,6;15,8)": ["0000", "0001"]}
    assert index["duplicates"] == []


def test_catalog_parallel_matches_serial(tmp_path):
    stream = list(fano_stream(4))
    a = run_catalog(stream, tmp_path / "a")
    b = run_catalog(stream, tmp_path / "b", jobs=2)
    assert a == b
