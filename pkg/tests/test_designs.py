import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddgraph.designs import (
    ResolvableDesign,
    affine_from_ag,
    affine_from_hadamard,
    affine_verify,
    design_isomorphism,
    dump_design,
    hadamard_matrix,
    load_design,
    parallel_block_of,
)

AG_CASES = [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2), (3, 3), (5, 2)]


@pytest.mark.parametrize("q,d,pts,blocks,kappa,r", [
    (2, 2, 4, 6, 3, 1), (2, 3, 8, 14, 7, 2), (3, 2, 9, 12, 4, 1),
])
def test_ag_shapes(q, d, pts, blocks, kappa, r):
    D = affine_from_ag(q, d)
    assert (D.n_points, len(D.blocks), D.kappa, D.r, D.q) == (pts, blocks, kappa, r, q)


@pytest.mark.parametrize("q,d", AG_CASES)
def test_ag_verifies_with_pair_count(q, d):
    rep = affine_verify(affine_from_ag(q, d))
    assert rep.ok, rep.violation
    assert (rep.q, rep.r, rep.kappa) == (q, q ** (d - 2), (q**d - 1) // (q - 1))
    assert rep.pair_count == (q ** (d - 1) - 1) // (q - 1)


def test_ag_pair_count_by_enumeration():
    D = affine_from_ag(3, 2)
    inc = D.incidence()
    through = inc.T.astype(int) @ inc.astype(int)  # points x points
    off = through[~np.eye(D.n_points, dtype=bool)]
    assert set(off.tolist()) == {1}


def test_ag_errors():
    with pytest.raises(ValueError):
        affine_from_ag(2, 1)
    with pytest.raises(ValueError):
        affine_from_ag(2, 13)
    with pytest.raises(ValueError):
        affine_from_ag(6, 2)


@pytest.mark.parametrize("order,method", [(4, "sylvester"), (8, "sylvester"), (16, "sylvester"), (8, "paley"), (12, "paley"), (20, "paley")])
def test_hadamard_gram(order, method):
    H = hadamard_matrix(order, method).matrix
    assert set(np.unique(H).tolist()) <= {-1, 1}
    assert np.array_equal(H @ H.T, order * np.eye(order, dtype=H.dtype))


@pytest.mark.parametrize("order,method", [(12, "sylvester"), (16, "paley"), (6, "sylvester"), (12, "nope")])
def test_hadamard_unsupported(order, method):
    with pytest.raises(ValueError):
        hadamard_matrix(order, method)


@pytest.mark.parametrize("order,r,pairs", [(8, 2, 3), (12, 3, 5), (16, 4, 7)])
def test_hadamard_design(order, r, pairs):
    method = "paley" if order == 12 else "sylvester"
    rep = affine_verify(affine_from_hadamard(hadamard_matrix(order, method)))
    assert rep.ok, rep.violation
    assert (rep.q, rep.r, rep.kappa, rep.pair_count) == (2, r, order - 1, pairs)


def test_hadamard_order_4_rejected():
    with pytest.raises(ValueError):
        affine_from_hadamard(hadamard_matrix(4))


def test_hadamard_8_is_ag32(ag32):
    D = affine_from_hadamard(hadamard_matrix(8))
    mapping = design_isomorphism(D, ag32)
    assert mapping is not None
    image = {frozenset(int(mapping[x]) for x in b) for b in D.blocks}
    assert image == {frozenset(b) for b in ag32.blocks}


def test_block_deletion_names_parallel_class():
    D = affine_from_ag(2, 2)
    classes = [list(c) for c in D.classes]
    del classes[1][0]
    broken = ResolvableDesign(D.n_points, tuple(tuple(c) for c in classes), D.q, D.r)
    rep = affine_verify(broken)
    assert not rep.ok
    assert rep.witness.get("parallel_class") == 2


def test_declared_parameters_must_match():
    D = affine_from_ag(2, 3)
    wrong = ResolvableDesign(D.n_points, D.classes, D.q, 1)
    assert not affine_verify(wrong).ok


def test_parallel_block_of_examples():
    D = affine_from_ag(2, 2)
    b = parallel_block_of(D, 1, 0)
    assert 0 in D.blocks[b]
    for j in (0, 4):
        with pytest.raises(IndexError):
            parallel_block_of(D, j, 0)
    with pytest.raises(IndexError):
        parallel_block_of(D, 1, 4)


@pytest.mark.parametrize("q,d", [(2, 3), (3, 2), (4, 2)])
def test_parallel_block_of_total_and_unique(q, d):
    D = affine_from_ag(q, d)
    for j in range(1, D.kappa + 1):
        seen = set()
        for x in range(D.n_points):
            b = parallel_block_of(D, j, x)
            assert x in D.blocks[b]
            for y in D.blocks[b]:
                assert parallel_block_of(D, j, y) == b
            seen.add(b)
        assert len(seen) == q


@given(st.sampled_from(AG_CASES[:5]), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_relabelled_design_still_affine(case, seed):
    """Affinity is invariant under any permutation of points."""
    D = affine_from_ag(*case)
    perm = np.random.default_rng(seed).permutation(D.n_points)
    classes = [[tuple(sorted(int(perm[x]) for x in b)) for b in c] for c in D.classes]
    E = ResolvableDesign.from_classes(D.n_points, classes, D.q, D.r)
    assert affine_verify(E).ok


def test_design_file_round_trip(tmp_path):
    D = affine_from_ag(3, 2)
    path = tmp_path / "ag.json"
    path.write_text(dump_design(D))
    E = load_design(path)
    assert E.classes == D.classes and (E.q, E.r) == (D.q, D.r)


def test_blocks_meet_in_r_or_zero():
    D = affine_from_ag(2, 4)
    for B, C in itertools.combinations(D.blocks, 2):
        assert len(set(B) & set(C)) in (0, D.r)
