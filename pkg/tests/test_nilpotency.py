from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import group
from nilpotent_graph.nilpotency import (
    conjugacy_classes,
    hypercenter,
    is_nilpotent_lcs,
    is_nilpotent_set,
    nil_group,
    nilpotency_data,
    nilpotency_matrix,
    nilpotentizer,
    pair_nilpotent,
    pair_nilpotent_slow,
    zeta_chain,
)

SMALL = ["S:3", "S:4", "D:5", "D:6", "D:12", "PSL2:3", "S:3 x C:2", "D:9", "C:6", "D:8"]


@pytest.mark.parametrize("spec", SMALL)
def test_criterion_matches_lower_central_series_on_all_two_generated(spec):
    G = group(spec)
    seen = set()
    for x in range(G.order):
        for y in range(x, G.order):
            H = G.generate([x, y])
            if H in seen:
                continue
            seen.add(H)
            assert is_nilpotent_set(G, H) == is_nilpotent_lcs(G, H)


@pytest.mark.parametrize("spec", ["S:4", "D:12", "PSL2:5", "S:3 x C:3", "D:15"])
def test_strategies_and_workers_agree(spec):
    G = group(spec)
    ref = nilpotency_matrix(G, workers=1, strategy="pairs")
    assert (nilpotency_matrix(G, workers=1, strategy="classes") == ref).all()
    assert (nilpotency_matrix(G, workers=2, strategy="classes") == ref).all()
    assert (nilpotency_matrix(G, workers=2, strategy="pairs") == ref).all()
    assert (ref == ref.T).all() and ref.diagonal().all()


@given(st.sampled_from(["S:4", "PSL2:7", "S:5", "D:10 x C:3"]), st.data())
def test_pair_matches_full_closure(spec, data):
    G = group(spec)
    x = data.draw(st.integers(0, G.order - 1))
    y = data.draw(st.integers(0, G.order - 1))
    assert pair_nilpotent(G, x, y) == pair_nilpotent_slow(G, x, y)


@pytest.mark.parametrize("spec,size", [("S:3", 1), ("S:4", 1), ("D:12", 4), ("D:6", 2), ("S:3 x C:2", 2),
                                       ("PSL2:7", 1), ("D:10 x C:3", 6)])
def test_hypercenter_orders(spec, size):
    G = group(spec)
    assert len(hypercenter(G)) == size
    assert nil_group(G) == hypercenter(G)


def test_zeta_chain_ascends():
    G = group("D:12")
    chain = zeta_chain(G)
    assert chain[0] == (0,)
    assert [len(z) for z in chain] == [1, 2, 4]


def test_nil_is_intersection_of_nilpotentizers():
    for spec in ["S:4", "D:12", "S:3 x C:2"]:
        G = group(spec)
        common = set(range(G.order))
        for x in range(G.order):
            common &= set(nilpotentizer(G, x))
        assert tuple(sorted(common)) == nil_group(G)


def test_nilpotent_group_has_nil_everything():
    for spec in ["C:6", "D:8", "C:2 x C:3"]:
        G = group(spec)
        assert nilpotency_data(G).is_nilpotent
        assert len(nil_group(G)) == G.order


def test_conjugacy_classes_partition():
    G = group("S:5")
    classes = conjugacy_classes(G)
    assert len(classes) == 7
    assert sorted(len(m) for _, m, _ in classes) == [1, 10, 15, 20, 20, 24, 30]
    for rep, members, conj in classes:
        for z, g in zip(members, conj):
            assert G.mul[G.mul[g, rep], G.inv[g]] == z
    covered = np.concatenate([m for _, m, _ in classes])
    assert sorted(covered.tolist()) == list(range(G.order))
