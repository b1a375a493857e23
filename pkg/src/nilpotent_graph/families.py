"""Constructors for symmetric, dihedral, cyclic and PSL(2, q) groups, plus the
group-spec mini-language used on the command line::

    spec := atom ("x" atom)*
    atom := "S:" n | "D:" n | "C:" n | "PSL2:" q
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .gf import field_of_order, prime_power, primitive_element
from .permcore import BudgetExceeded, PermGroup, Permutation, direct_product

DEFAULT_MAX_ORDER = 5040


class GroupSpecError(ValueError):
    """Syntax or parameter error in a group spec string."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class PslParameters:
    q: int
    p: int
    f: int
    k: int
    r: int
    t: int

    @classmethod
    def of(cls, q: int) -> "PslParameters":
        pf = prime_power(q)
        if pf is None:
            raise ValueError(f"{q} is not a prime power")
        k = math.gcd(q - 1, 2)
        return cls(q, pf[0], pf[1], k, (q - 1) // k, (q + 1) // k)

    @property
    def order(self) -> int:
        return self.q * (self.q**2 - 1) // self.k


def _check_budget(order: int, max_order: int | None, label: str) -> None:
    if max_order is not None and order > max_order:
        raise BudgetExceeded(f"{label} has order {order} > budget {max_order}")


def symmetric(n: int, max_order: int | None = DEFAULT_MAX_ORDER) -> PermGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_budget(math.factorial(n), max_order, f"S{n}")
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles(n, [(0, 1)], one_indexed=False))
        gens.append(Permutation(tuple(range(1, n)) + (0,)))
    return PermGroup(n, gens, name=f"S:{n}")


def dihedral(n: int, max_order: int | None = DEFAULT_MAX_ORDER) -> PermGroup:
    """Symmetries of the n-gon: rotation i -> i+1 and reflection i -> -i (mod n)."""
    if n < 3:
        raise ValueError("dihedral group needs n >= 3")
    _check_budget(2 * n, max_order, f"D{n}")
    rot = Permutation(tuple((i + 1) % n for i in range(n)))
    ref = Permutation(tuple(-i % n for i in range(n)))
    return PermGroup(n, [rot, ref], name=f"D:{n}")


def cyclic(n: int, max_order: int | None = DEFAULT_MAX_ORDER) -> PermGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_budget(n, max_order, f"C{n}")
    gens = [Permutation(tuple((i + 1) % n for i in range(n)))] if n > 1 else []
    return PermGroup(n, gens, name=f"C:{n}")


def psl2(q: int, max_order: int | None = DEFAULT_MAX_ORDER) -> PermGroup:
    """PSL(2, q) acting on the projective line.

    Points ``0..q-1`` are the field elements in canonical order and point
    ``q`` is infinity.  Generators: x -> x+1, x -> a^2 x (a primitive),
    x -> -1/x.
    """
    params = PslParameters.of(q)
    _check_budget(params.order, max_order, f"PSL(2,{q})")
    F = field_of_order(q)
    inf = q
    a2 = primitive_element(F) ** 2

    def mobius(fn) -> Permutation:
        img = []
        for z in F.elements:
            w = fn(z)
            img.append(inf if w is None else w.code)
        w = fn(None)
        img.append(inf if w is None else w.code)
        return Permutation(tuple(img))

    translate = mobius(lambda z: None if z is None else z + F.one)
    scale = mobius(lambda z: None if z is None else a2 * z)
    flip = mobius(lambda z: F.zero if z is None else (None if z.is_zero() else -(z.inverse())))
    G = PermGroup(q + 1, [translate, scale, flip], name=f"PSL2:{q}")
    if G.order != params.order:
        raise RuntimeError(f"PSL(2,{q}) construction produced order {G.order}, expected {params.order}")
    return G


_ATOM = re.compile(r"\s*(PSL2|S|D|C)\s*:\s*(\d+)\s*")
_SEP = re.compile(r"\s*x\s*")

_BUILDERS = {"S": symmetric, "D": dihedral, "C": cyclic, "PSL2": psl2}


def parse_atoms(text: str) -> list:
    """Tokenize a group spec into ``[(kind, param), ...]``."""
    atoms = []
    pos = 0
    while True:
        m = _ATOM.match(text, pos)
        if not m:
            raise GroupSpecError(f"expected S:n, D:n, C:n or PSL2:q in {text!r}", pos)
        atoms.append((m.group(1), int(m.group(2)), m.start(1)))
        pos = m.end()
        if pos == len(text):
            return atoms
        m = _SEP.match(text, pos)
        if not m or m.end() == pos:
            raise GroupSpecError(f"expected 'x' separator in {text!r}", pos)
        pos = m.end()


def parse_group_spec(text: str, max_order: int | None = DEFAULT_MAX_ORDER) -> PermGroup:
    atoms = parse_atoms(text)
    order = 1
    groups = []
    for kind, n, pos in atoms:
        if kind == "D" and n < 3:
            raise GroupSpecError("D:n requires n >= 3", pos)
        if kind in ("S", "C") and n < 1:
            raise GroupSpecError(f"{kind}:n requires n >= 1", pos)
        if kind == "PSL2" and prime_power(n) is None:
            raise GroupSpecError(f"PSL2:q requires a prime power, got {n}", pos)
        groups.append(_BUILDERS[kind](n, max_order=max_order))
        order *= groups[-1].order
        _check_budget(order, max_order, text)
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H, max_order=max_order)
    G.name = normalize_spec(text)
    return G


def normalize_spec(text: str) -> str:
    return " x ".join(f"{k}:{n}" for k, n, _ in parse_atoms(text))
