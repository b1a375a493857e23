from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilpotent_graph.families import cyclic, symmetric
from nilpotent_graph.permcore import (
    GroupError,
    PermGroup,
    Permutation,
    centralizer,
    center,
    closure,
    compose,
    coset_action,
    cycle_notation,
    cycle_structure,
    direct_product,
    element_order,
    inverse,
    is_normal,
    normalizer,
    regular_representation,
)


def perms(degree: int):
    return st.permutations(list(range(degree))).map(lambda xs: Permutation(tuple(xs)))


degrees = st.integers(min_value=1, max_value=9)


@given(degrees.flatmap(lambda d: st.tuples(perms(d), perms(d), perms(d))))
def test_compose_associative(triple):
    p, q, r = triple
    assert compose(compose(p, q), r) == compose(p, compose(q, r))


@given(degrees.flatmap(perms))
def test_inverse_and_identity(p):
    e = Permutation.identity(p.degree)
    assert compose(p, inverse(p)) == e
    assert compose(inverse(p), p) == e
    assert compose(e, p) == p


@given(degrees.flatmap(lambda d: st.tuples(perms(d), perms(d), st.integers(0, d - 1))))
def test_compose_applies_right_factor_first(args):
    p, q, x = args
    assert compose(p, q)(x) == p(q(x))


@given(degrees.flatmap(perms))
def test_order_is_lcm_of_cycle_lengths(p):
    cs = cycle_structure(p)
    assert element_order(p) == math.lcm(*cs["cycle_type"]) if cs["cycle_type"] else element_order(p) == 1
    assert sum(cs["cycle_type"]) + len(cs["fix"]) == p.degree
    q = p
    for _ in range(element_order(p) - 1):
        q = compose(q, p)
    assert q.is_identity()


@given(degrees.flatmap(perms))
def test_cycle_notation_roundtrip(p):
    assert Permutation.parse(cycle_notation(p), p.degree) == p


def test_cycle_notation_examples():
    assert cycle_notation(Permutation.identity(4)) == "()"
    assert cycle_notation(Permutation.parse("(12)(34)", 4)) == "(12)(34)"
    assert cycle_notation(Permutation.parse("(1,10)", 10)) == "(1,10)"
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_symmetric_closure_order(n):
    assert symmetric(n).order == math.factorial(n)


def test_closure_visitor_abort():
    gens = [Permutation((1, 2, 3, 4, 0)), Permutation((1, 0, 2, 3, 4))]
    seen, aborted = closure(5, gens)
    assert len(seen) == 120 and not aborted
    count = []

    def visitor(_):
        count.append(1)
        return "abort" if len(count) >= 10 else None

    seen, aborted = closure(5, gens, visitor)
    assert aborted and len(seen) < 120


@pytest.mark.parametrize("n", [3, 4, 5])
def test_multiplication_table_matches_composition(n):
    G = symmetric(n)
    rng = np.random.default_rng(1)
    for i, j in rng.integers(0, G.order, size=(200, 2)):
        assert G.elements[G.mul[i, j]] == compose(G.elements[i], G.elements[j])
    assert G.elements[0].is_identity()
    assert all(G.mul[i, G.inv[i]] == 0 for i in range(G.order))


def test_large_degree_tables():
    # degree 24 + 3 forces the hashed key path
    G = direct_product(regular_representation(list(range(24)), symmetric(4)), symmetric(3))
    assert G.order == 144 and G.degree == 27
    for i in range(0, G.order, 7):
        for j in range(0, G.order, 11):
            assert G.elements[G.mul[i, j]] == compose(G.elements[i], G.elements[j])


def test_subgroup_helpers():
    G = symmetric(4)
    assert len(center(G)) == 1
    x = G.idx(Permutation.parse("(12)", 4))
    assert len(centralizer(G, x)) == 4
    V = G.generate([G.idx(Permutation.parse("(12)(34)", 4)), G.idx(Permutation.parse("(13)(24)", 4))])
    assert len(V) == 4 and is_normal(G, V)
    assert len(normalizer(G, V)) == 24
    Q = coset_action(G, V)
    assert Q.order == 6 and Q.degree == 6
    with pytest.raises(GroupError):
        coset_action(G, centralizer(G, x))


def test_direct_product_and_regular():
    P = direct_product(symmetric(3), cyclic(2))
    assert P.order == 12 and P.degree == 5
    R = regular_representation(list(symmetric(3).generate([1, 2])), symmetric(3))
    assert isinstance(R, PermGroup)
