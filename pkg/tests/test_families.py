from __future__ import annotations

import math

import pytest

from nilpotent_graph.families import (
    GroupSpecError,
    PslParameters,
    cyclic,
    dihedral,
    normalize_spec,
    parse_group_spec,
    psl2,
    symmetric,
)
from nilpotent_graph.permcore import BudgetExceeded, Permutation


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_psl2_order(q):
    k = math.gcd(q - 1, 2)
    assert psl2(q).order == q * (q * q - 1) // k == PslParameters.of(q).order


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_psl2_matches_mobius_maps(p):
    """Independent oracle: all maps (az+b)/(cz+d) with ad-bc=1 over the prime field."""
    inf = p
    maps = set()
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p != 1:
                        continue
                    img = []
                    for z in range(p + 1):
                        if z == inf:
                            num, den = a, c
                        else:
                            num, den = (a * z + b) % p, (c * z + d) % p
                        img.append(inf if den == 0 else num * pow(den, -1, p) % p)
                    maps.add(Permutation(tuple(img)))
    assert set(psl2(p).elements) == maps


def test_small_family_orders():
    assert symmetric(4).order == 24
    assert dihedral(12).order == 24
    assert cyclic(7).order == 7 and cyclic(1).order == 1
    with pytest.raises(ValueError):
        dihedral(2)


def test_parse_and_normalize():
    G = parse_group_spec(" S:3  x C : 2 ")
    assert G.order == 12 and G.name == "S:3 x C:2"
    assert normalize_spec("PSL2:7") == "PSL2:7"
    assert parse_group_spec("S:3 x S:3").order == 36


@pytest.mark.parametrize("text,pos", [("Q:3", 0), ("S:3 y C:2", 4), ("S:", 0), ("S:3 x ", 6), ("PSL2:6", 0),
                                      ("S:3 x D:2", 6)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(GroupSpecError) as err:
        parse_group_spec(text)
    assert err.value.position == pos


def test_budget():
    with pytest.raises(BudgetExceeded):
        symmetric(8)
    with pytest.raises(BudgetExceeded):
        parse_group_spec("S:5 x S:5")
