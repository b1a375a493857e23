"""Permutations and fully enumerated permutation groups.

Points are 0-indexed internally.  Composition follows the "right factor acts
first" convention: ``(p * q)(x) == p(q(x))``.  Cycle notation is rendered
1-indexed.

A :class:`PermGroup` is enumerated completely at construction; elements are
sorted lexicographically by image sequence and every subgroup-level routine
works on canonical element indices.  Index 0 is always the identity.
"""

from __future__ import annotations

import math
import re
from array import array
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

ABORT = "abort"

ElementSet = tuple  # sorted tuple of canonical element indices


class GroupError(ValueError):
    """Raised on invalid group-theoretic input (membership, normality...)."""


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images!r}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]], one_indexed: bool = True) -> "Permutation":
        img = list(range(degree))
        shift = 1 if one_indexed else 0
        for cyc in cycles:
            pts = [c - shift for c in cyc]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 1-indexed cycle notation such as ``"(123)(45)"`` or ``"(1,10,3)"``."""
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            body = body.strip()
            if not body:
                continue
            if "," in body or " " in body:
                cyc = [int(tok) for tok in re.split(r"[,\s]+", body) if tok]
            else:
                cyc = [int(ch) for ch in body]
            cycles.append(cyc)
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        return element_order(self)

    def cycles(self) -> list:
        return cycle_structure(self)["cycles"]

    def __str__(self) -> str:
        return cycle_notation(self)

    def __repr__(self) -> str:
        return f"Permutation({cycle_notation(self)}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p * q`` with ``q`` applied first."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    pi = p.images
    return Permutation(tuple(pi[x] for x in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, x in enumerate(p.images):
        inv[x] = i
    return Permutation(tuple(inv))


def cycle_structure(p: Permutation) -> dict:
    """Disjoint cycle decomposition, support, fixed points and cycle type.

    Cycles of length one are omitted from ``cycles``; each cycle starts at its
    smallest point and cycles are listed by that point.
    """
    seen = [False] * p.degree
    cycles = []
    for start in range(p.degree):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p.images[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = p.images[x]
        if len(cyc) > 1:
            cycles.append(tuple(cyc))
    support = frozenset(x for x in range(p.degree) if p.images[x] != x)
    return {
        "cycles": cycles,
        "support": support,
        "fix": frozenset(range(p.degree)) - support,
        "cycle_type": sorted((len(c) for c in cycles), reverse=True),
    }


def element_order(p: Permutation) -> int:
    order = 1
    for c in cycle_structure(p)["cycles"]:
        order = math.lcm(order, len(c))
    return order


def cycle_notation(p: Permutation) -> str:
    cycles = cycle_structure(p)["cycles"]
    if not cycles:
        return "()"
    sep = "" if p.degree <= 9 else ","
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cycles)


def closure(degree: int, gens: Sequence[Permutation], visitor: Callable | None = None):
    """Breadth-first closure of ``gens`` under composition.

    Returns ``(elements, aborted)``.  ``visitor`` is called on every newly
    added element; if it returns :data:`ABORT` the search stops and the
    partial element set is returned with ``aborted=True``.
    """
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator of degree {g.degree} in closure of degree {degree}")
    ident = Permutation.identity(degree)
    seen = {ident}
    queue = deque([ident])
    gen_images = [g.images for g in gens]
    while queue:
        a = queue.popleft()
        ai = a.images
        for gi in gen_images:
            b = Permutation(tuple(ai[x] for x in gi))
            if b not in seen:
                seen.add(b)
                if visitor is not None and visitor(b) == ABORT:
                    return seen, True
                queue.append(b)
    return seen, False


class PermGroup:
    """A finite permutation group with every element enumerated.

    ``elements`` is sorted lexicographically by image sequence, so the
    identity has index 0 and rebuilding the same group reproduces the same
    list.  Multiplication, inverse and order tables are built lazily as numpy
    arrays indexed by canonical element number.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], max_order: int | None = None,
                 name: str | None = None):
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name
        visitor = None
        if max_order is not None:
            count = [1]

            def visitor(_):
                count[0] += 1
                return ABORT if count[0] > max_order else None

        elems, aborted = closure(degree, self.generators, visitor)
        if aborted:
            raise BudgetExceeded(f"group order exceeds budget {max_order}")
        self.elements = tuple(sorted(elems))
        self.index = {p: i for i, p in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"PermGroup({label}, order={self.order})"

    def __contains__(self, p) -> bool:
        return p in self.index

    def idx(self, x) -> int:
        """Canonical index of ``x`` (a Permutation or an index)."""
        if isinstance(x, Permutation):
            try:
                return self.index[x]
            except KeyError:
                raise GroupError(f"{x} is not an element of {self!r}") from None
        x = int(x)
        if not 0 <= x < self.order:
            raise GroupError(f"index {x} out of range for {self!r}")
        return x

    def idx_set(self, xs: Iterable) -> ElementSet:
        return tuple(sorted({self.idx(x) for x in xs}))

    def perms(self, xs: Iterable[int]) -> list:
        return [self.elements[i] for i in xs]

    # tables

    @cached_property
    def image_array(self) -> np.ndarray:
        return np.array([p.images for p in self.elements], dtype=np.int64).reshape(self.order, self.degree)

    @cached_property
    def _weights(self) -> np.ndarray:
        d = self.degree
        if d ** d < 2**62:
            return d ** np.arange(d - 1, -1, -1, dtype=np.int64)
        # mixed radix would overflow: fall back to a wrapping hash, checked for collisions below
        return np.random.default_rng(0x5EED).integers(1, 2**62, size=d, dtype=np.int64) | 1

    @cached_property
    def _keys(self) -> tuple:
        """Sorted element keys and the element index of each sorted position."""
        with np.errstate(over="ignore"):
            keys = self.image_array @ self._weights
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        if (np.diff(sorted_keys) == 0).any():
            raise RuntimeError("element key collision")
        return sorted_keys, order

    @cached_property
    def mul(self) -> np.ndarray:
        """``mul[i, j]`` is the index of ``elements[i] * elements[j]``."""
        n, d = self.order, self.degree
        dtype = np.uint16 if n < 2**16 else np.uint32
        E = self.image_array
        keys, order = self._keys
        weights = self._weights
        table = np.empty((n, n), dtype=dtype)
        block = max(1, 2_000_000 // max(1, n * d))
        for start in range(0, n, block):
            # prod[i, j, x] = E[start + i][E[j][x]]
            prod = E[start:start + block][:, E]
            with np.errstate(over="ignore"):
                table[start:start + block] = order[np.searchsorted(keys, prod @ weights)]
        return table

    @cached_property
    def rows(self) -> list:
        """Per-element rows of the multiplication table as ``array`` objects (fast scalar access)."""
        code = "H" if self.mul.dtype == np.uint16 else "I"
        out = []
        for r in self.mul:
            a = array(code)
            a.frombytes(r.tobytes())
            out.append(a)
        return out

    @cached_property
    def inv(self) -> np.ndarray:
        i, j = np.nonzero(self.mul == 0)
        inv = np.empty(self.order, dtype=np.int64)
        inv[i] = j
        return inv

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        ords = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        k = 0
        mul = self.mul
        ar = np.arange(n)
        while (ords == 0).any():
            k += 1
            pending = ords == 0
            ords[pending & (cur == 0)] = k
            cur = mul[cur, ar].astype(np.int64)
        return ords

    @cached_property
    def commute(self) -> np.ndarray:
        """Boolean matrix: ``commute[i, j]`` iff elements i and j commute."""
        return self.mul == self.mul.T

    def conjugation_map(self, g: int) -> np.ndarray:
        """Array ``c`` with ``c[x]`` the index of ``g x g^-1``."""
        g = self.idx(g)
        return self.mul[self.mul[g].astype(np.int64), self.inv[g]].astype(np.int64)

    # subgroup machinery

    def generate(self, gens: Iterable[int]) -> ElementSet:
        """Subgroup generated by element indices ``gens`` (vectorized closure)."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        if gens.size:
            mul = self.mul
            while frontier.size:
                prod = mul[np.ix_(frontier, gens)].ravel().astype(np.int64)
                prod = np.unique(prod)
                new = prod[~mask[prod]]
                mask[new] = True
                frontier = new
        return tuple(np.flatnonzero(mask).tolist())

    def closure_indices(self, gens: Sequence[int], visitor: Callable | None = None):
        """Index-level BFS closure with optional early-exit visitor.

        Returns ``(elements_in_discovery_order, aborted)``.
        """
        rows = self.rows
        elems = [0]
        seen = {0}
        gens = list(gens)
        pos = 0
        while pos < len(elems):
            ra = rows[elems[pos]]
            pos += 1
            for g in gens:
                b = ra[g]
                if b not in seen:
                    seen.add(b)
                    if visitor is not None and visitor(b) == ABORT:
                        return elems + [b], True
                    elems.append(b)
        return elems, False

    def is_subgroup(self, S: Iterable[int]) -> bool:
        S = set(S)
        if 0 not in S:
            return False
        arr = np.fromiter(S, dtype=np.int64)
        prods = self.mul[np.ix_(arr, arr)].ravel()
        return bool(np.isin(prods, arr).all())


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration or search budget is exceeded."""


def _mask(G: PermGroup, S: Iterable[int]) -> np.ndarray:
    m = np.zeros(G.order, dtype=bool)
    m[list(S)] = True
    return m


def _check_subset(G: PermGroup, S) -> list:
    return [G.idx(s) for s in S]


def centralizer(G: PermGroup, x) -> ElementSet:
    x = G.idx(x)
    return tuple(np.flatnonzero(G.commute[x]).tolist())


def center(G: PermGroup) -> ElementSet:
    return tuple(np.flatnonzero(G.commute.all(axis=0)).tolist())


def normalizer(G: PermGroup, S) -> ElementSet:
    """``{g in G : g S g^-1 = S}``."""
    S = np.array(sorted(set(_check_subset(G, S))), dtype=np.int64)
    mask = _mask(G, S)
    mul, inv = G.mul, G.inv
    # conj[g, s] = g s g^-1
    gs = mul[:, S].astype(np.int64)
    conj = mul[gs, inv[:, None]]
    keep = mask[conj].all(axis=1)
    return tuple(np.flatnonzero(keep).tolist())


def conjugate_set(G: PermGroup, S, g) -> ElementSet:
    """``{g s g^-1 : s in S}``."""
    S = _check_subset(G, S)
    c = G.conjugation_map(g)
    return tuple(sorted(set(c[S].tolist())))


def is_normal(G: PermGroup, N) -> bool:
    N = _check_subset(G, N)
    mask = _mask(G, N)
    conj = G.mul[G.mul[:, N].astype(np.int64), G.inv[:, None]]
    return bool(mask[conj].all())


def coset_action(G: PermGroup, N) -> PermGroup:
    """Image of ``G`` acting by left multiplication on the left cosets of ``N``.

    Point 0 is the coset containing the identity; the remaining cosets are
    numbered by their least element.  ``N`` must be a normal subgroup.
    """
    N = sorted(set(_check_subset(G, N)))
    if not G.is_subgroup(N):
        raise GroupError("not a subgroup")
    if not is_normal(G, N):
        raise GroupError("subgroup is not normal")
    labels = coset_labels(G, N)
    m = len(N) and G.order // len(N)
    mul = G.mul
    reps = coset_representatives(G, N)

    def action(g: int) -> Permutation:
        return Permutation(tuple(int(labels[mul[g, r]]) for r in reps))

    gens = [action(G.idx(g)) for g in G.generators]
    Q = PermGroup(m, gens, name=f"{G.name or 'G'}/N")
    return Q


def coset_labels(G: PermGroup, N) -> np.ndarray:
    """Coset number of each element for left cosets ``gN`` (ordered by least element)."""
    N = np.array(sorted(set(N)), dtype=np.int64)
    labels = np.full(G.order, -1, dtype=np.int64)
    k = 0
    mul = G.mul
    for g in range(G.order):
        if labels[g] < 0:
            labels[mul[g, N].astype(np.int64)] = k
            k += 1
    return labels


def coset_representatives(G: PermGroup, N) -> list:
    """Least element of each left coset, in coset-number order."""
    labels = coset_labels(G, N)
    reps = {}
    for g, lab in enumerate(labels.tolist()):
        reps.setdefault(lab, g)
    return [reps[k] for k in range(len(reps))]


def direct_product(G: PermGroup, H: PermGroup, max_order: int | None = None) -> PermGroup:
    """``G x H`` acting on ``degree(G) + degree(H)`` points (H shifted)."""
    d1, d2 = G.degree, H.degree
    id1, id2 = tuple(range(d1)), tuple(range(d1, d1 + d2))
    gens = [Permutation(g.images + id2) for g in G.generators]
    gens += [Permutation(id1 + tuple(d1 + x for x in h.images)) for h in H.generators]
    name = f"{G.name} x {H.name}" if G.name and H.name else None
    return PermGroup(d1 + d2, gens, max_order=max_order, name=name)


def regular_representation(elements: Sequence[int], G: PermGroup) -> PermGroup:
    """Left regular representation of the subgroup ``elements`` of ``G``.

    Point ``i`` is ``elements[i]`` in the given order.
    """
    elements = list(elements)
    pos = {e: i for i, e in enumerate(elements)}
    mul = G.mul
    gens = [Permutation(tuple(pos[int(mul[z, e])] for e in elements)) for z in elements]
    return PermGroup(len(elements), gens)
