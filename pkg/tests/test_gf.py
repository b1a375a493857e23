from __future__ import annotations

import itertools

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nilpotent_graph.gf import (
    field_of_order,
    is_irreducible,
    is_prime,
    make_field,
    prime_power,
    primitive_element,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49]


def test_prime_helpers_against_sympy():
    for n in range(0, 300):
        assert is_prime(n) == sympy.isprime(n)
        fac = sympy.factorint(n) if n > 1 else {}
        expected = next(iter(fac.items())) if len(fac) == 1 else None
        assert prime_power(n) == expected


@pytest.mark.parametrize("p,f", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_modulus_is_least_irreducible(p, f):
    F = make_field(p, f)
    x = sympy.Symbol("x")

    def irreducible(coeffs):
        return sympy.Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible

    assert irreducible(list(F.modulus))
    # every monic polynomial preceding it (low degree coefficient compared first) is reducible
    for low in itertools.product(range(p), repeat=f):
        cand = list(low) + [1]
        if tuple(cand) == tuple(F.modulus):
            break
        assert not irreducible(cand)
        assert not is_irreducible(cand, p)


def field_and_elements(draw_count: int):
    return st.sampled_from(ORDERS).flatmap(
        lambda q: st.tuples(st.just(q), *[st.integers(0, q - 1)] * draw_count))


@given(field_and_elements(3))
def test_field_axioms(args):
    q, a, b, c = args
    F = field_of_order(q)
    a, b, c = F.element(a), F.element(b), F.element(c)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero and a + F.zero == a and a * F.one == a
    if not a.is_zero():
        assert a * a.inverse() == F.one
        assert (b / a) * a == b
        assert a ** (q - 1) == F.one


@pytest.mark.parametrize("q", ORDERS)
def test_primitive_element_generates(q):
    F = field_of_order(q)
    g = primitive_element(F)
    assert g.multiplicative_order() == q - 1
    powers = {(g ** k).code for k in range(q - 1)}
    assert powers == set(range(1, q))


@pytest.mark.parametrize("q", ORDERS)
def test_codes_enumerate_field(q):
    F = field_of_order(q)
    assert [e.code for e in F.elements] == list(range(q))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        field_of_order(9).zero.inverse()
    with pytest.raises(ValueError):
        field_of_order(6)
