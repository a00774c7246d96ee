import numpy as np
import pytest

from ddgraph.algebra import ring_make
from ddgraph.construct import sporadic28
from ddgraph.designs import affine_from_ag
from ddgraph.symdesigns import symdesign_fano
from ddgraph.symplectic import form_values, params_bg, pc_relation_check, sigma_search, symplectic_graph
from ddgraph.verify import ddg_verify, identity_check, iso_check, partitions_discover


def naive_form(R, x, y):
    """<x, y> = sum x_i y_{i+e} - x_{i+e} y_i over the ring tables."""
    e = len(x) // 2
    acc = 0
    for i in range(e):
        acc = R.add_table[acc, R.mul_table[x[i], y[i + e]]]
        acc = R.add_table[acc, R.neg_table[R.mul_table[x[i + e], y[i]]]]
    return acc


@pytest.mark.parametrize("kind", ["z_p2", "fq_x2"])
def test_form_matches_naive(kind, symp):
    G = symp["Y", kind]
    R = G.ring
    vals = form_values(R, G.vertices.reps)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, G.v, (200, 2)):
        assert vals[a, b] == naive_form(R, G.vertices.reps[a], G.vertices.reps[b])


@pytest.mark.parametrize("kind", ["z_p2", "fq_x2"])
def test_degrees_and_subgraph(kind, symp):
    X, Y = symp["X", kind], symp["Y", kind]
    assert X.v == Y.v == 120
    assert set(Y.adjacency.sum(1).tolist()) == {28}
    assert set(X.adjacency.sum(1).tolist()) == {92}
    assert not (Y.adjacency & ~X.adjacency).any()


@pytest.mark.parametrize("kind", ["z_p2", "fq_x2"])
def test_well_defined_under_unit_scaling(kind, symp):
    """Adjacency is unchanged when both endpoints are rescaled by any units."""
    Y = symp["Y", kind]
    R = Y.ring
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, Y.v, (60, 2)):
        for u in R.units:
            for w in R.units:
                val = naive_form(R, R.mul_table[u, Y.vertices.reps[a]], R.mul_table[w, Y.vertices.reps[b]])
                assert (val != 0 and R.in_ideal[val]) == bool(Y.adjacency[a, b]) or a == b


@pytest.mark.parametrize("kind", ["z_p2", "fq_x2"])
def test_y_discovered_partition(kind, symp):
    disc = partitions_discover(symp["Y", kind].adjacency)
    assert len(disc.proper) == 1
    labels, p = disc.proper[0]
    assert p.as_tuple() == (120, 28, 12, 6, 15, 8)
    X = symp["X", kind]
    check = ddg_verify(X.adjacency, labels)
    assert check.ok and check.params.as_tuple() == (120, 92, 76, 70, 15, 8)
    assert pc_relation_check(X, symp["Y", kind], labels).ok


def test_pc_false_on_random_partition(symp):
    X, Y = symp["X", "z_p2"], symp["Y", "z_p2"]
    labels = np.random.default_rng(4).permutation(np.repeat(np.arange(15), 8))
    rep = pc_relation_check(X, Y, labels)
    assert not rep.ok and rep.block is not None


def test_pc_degenerate_when_x_is_y(symp):
    X = symp["X", "z_p2"]
    rep = pc_relation_check(X, X, np.repeat(np.arange(15), 8))
    assert not rep.ok and "degenerate" in rep.reason


def test_pc_partition_mismatch(symp):
    with pytest.raises(ValueError):
        pc_relation_check(symp["X", "z_p2"], symp["Y", "z_p2"], np.arange(7))


def test_params_bg_as_printed():
    y, x = params_bg("Y", 2, 2), params_bg("X", 2, 2)
    assert y.as_tuple() == (120, 28, 12, 6, 8, 15)
    assert x.as_tuple() == (120, 92, 76, 70, 8, 15)
    r = identity_check(y)
    assert (r.lhs, r.rhs, r.ok) == (798, 756, False)


def test_bound_exceeded():
    with pytest.raises(ValueError):
        symplectic_graph("Y", 2, ring_make("z_p2", 3), bound=100)


def test_sigma_search_budget_zero(ag32, np15, symp):
    rep = sigma_search(symp["Y", "z_p2"].to_instance(), np15, [ag32] * 15, attempts=0)
    assert not rep.found and rep.attempts == 0


def test_sigma_search_parameter_mismatch(ag32, np15):
    with pytest.raises(ValueError):
        sigma_search(sporadic28(), np15, [ag32] * 15)


def test_sigma_search_sporadic():
    rep = sigma_search(sporadic28(), symdesign_fano(), [affine_from_ag(2, 2)] * 7, attempts=10)
    assert rep.found
    from ddgraph.construct import construct1

    G = construct1(rep.labeling, [affine_from_ag(2, 2)] * 7, rep.sigma)
    assert iso_check(G.adjacency, sporadic28().adjacency).status == "isomorphic"


def test_sigma_search_seeded_stream_only():
    rep = sigma_search(sporadic28(), symdesign_fano(), [affine_from_ag(2, 2)] * 7, attempts=5, structured=False)
    assert rep.attempts <= 5
    if rep.found:
        assert rep.method.startswith("seeded")
    else:
        assert rep.notes
