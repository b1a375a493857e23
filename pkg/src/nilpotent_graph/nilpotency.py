"""Nilpotency decisions on subgroups of an enumerated group.

The working criterion is the coprime-order one: a finite group is nilpotent
iff any two of its elements with coprime orders commute.  The lower central
series routine :func:`is_nilpotent_lcs` is kept only as an independent
oracle for differential tests.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import weakref
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property

import numpy as np

from .permcore import ABORT, ElementSet, PermGroup

STRATEGIES = ("classes", "pairs")


class NilpotentGroupError(ValueError):
    """The group is nilpotent, so its nilpotent graph is undefined."""


def _coprime_table(G: PermGroup) -> np.ndarray:
    top = int(G.orders.max())
    o = np.arange(top + 1)
    return np.gcd(o[:, None], o[None, :]) == 1


def is_nilpotent_set(G: PermGroup, elements) -> bool:
    """True iff every coprime-order pair in ``elements`` commutes.

    ``elements`` must be a subgroup of ``G`` (not checked).
    """
    H = np.asarray(sorted(set(int(e) for e in elements)), dtype=np.int64)
    ords = G.orders[H]
    cop = _coprime_table(G)
    mul = G.mul
    block = max(1, 4_000_000 // max(1, len(H)))
    for start in range(0, len(H), block):
        A = H[start:start + block]
        ab = mul[np.ix_(A, H)]
        ba = mul[np.ix_(H, A)].T
        bad = cop[ords[start:start + block][:, None], ords[None, :]] & (ab != ba)
        if bad.any():
            return False
    return True


def is_nilpotent_lcs(G: PermGroup, elements) -> bool:
    """Lower central series test: gamma_1 = H, gamma_{i+1} = [gamma_i, H].

    Nilpotent iff the series reaches the trivial group.
    """
    H = np.asarray(sorted(set(int(e) for e in elements)), dtype=np.int64)
    mul, inv = G.mul, G.inv
    gamma = H
    while True:
        comms = set()
        block = max(1, 2_000_000 // max(1, len(H)))
        for start in range(0, len(gamma), block):
            A = gamma[start:start + block]
            # [a, b] = a^-1 b^-1 a b
            left = mul[inv[A][:, None], inv[H][None, :]].astype(np.int64)
            right = mul[A[:, None], H[None, :]].astype(np.int64)
            comms.update(np.unique(mul[left, right]).tolist())
        nxt = np.asarray(G.generate(comms), dtype=np.int64)
        if len(nxt) == 1:
            return True
        if len(nxt) == len(gamma):
            return False
        gamma = nxt


class _EarlyExit:
    """Closure visitor that aborts once two coprime-order elements fail to commute."""

    __slots__ = ("rows", "orders", "buckets")

    def __init__(self, rows, orders):
        self.rows = rows
        self.orders = orders
        self.buckets = {}

    def __call__(self, b):
        ob = self.orders[b]
        rb = self.rows[b]
        rows = self.rows
        for o, bucket in self.buckets.items():
            if math.gcd(o, ob) == 1:
                for c in bucket:
                    if rb[c] != rows[c][b]:
                        return ABORT
        self.buckets.setdefault(ob, []).append(b)
        return None


def closure_is_nilpotent(G: PermGroup, x: int, y: int, orders: list | None = None) -> bool:
    """Enumerate <x, y> with the early-exit visitor; True iff it completes."""
    if orders is None:
        orders = G.orders.tolist()
    visitor = _EarlyExit(G.rows, orders)
    _, aborted = G.closure_indices([x, y], visitor)
    return not aborted


def fast_row(G: PermGroup, x: int, ys: np.ndarray):
    """Vectorized fast paths for the pairs (x, y), y in ``ys``.

    Returns ``(decided, value)`` boolean arrays.  Commuting pairs are
    nilpotent.  A non-commuting pair is non-nilpotent if x, y have coprime
    orders, or if xy has order coprime to that of x or y (xy commutes with x
    or y only when x and y commute).
    """
    ords = G.orders
    cop = _coprime_table(G)
    mul = G.mul
    comm = mul[x, ys] == mul[ys, x]
    ox = ords[x]
    oy = ords[ys]
    oxy = ords[mul[x, ys].astype(np.int64)]
    bad = cop[ox, oy] | cop[oxy, ox] | cop[oxy, oy]
    decided = comm | bad
    value = comm.copy()
    return decided, value


def compute_row(G: PermGroup, x: int, ys: np.ndarray, orders: list | None = None) -> np.ndarray:
    decided, value = fast_row(G, x, ys)
    if orders is None:
        orders = G.orders.tolist()
    for k in np.flatnonzero(~decided).tolist():
        value[k] = closure_is_nilpotent(G, x, int(ys[k]), orders)
    return value


def conjugacy_classes(G: PermGroup):
    """Classes with, for each member z, some g with z = g rep g^-1.

    Returns a list of ``(rep, members, conjugators)`` sorted by rep.
    """
    mul, inv = G.mul, G.inv
    gens = sorted({G.idx(s) for s in G.generators})
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for rep in range(G.order):
        if seen[rep]:
            continue
        conjugator = {rep: 0}
        queue = [rep]
        seen[rep] = True
        pos = 0
        while pos < len(queue):
            z = queue[pos]
            pos += 1
            g = conjugator[z]
            for s in gens:
                w = int(mul[mul[s, z], inv[s]])
                if w not in conjugator:
                    conjugator[w] = int(mul[s, g])
                    seen[w] = True
                    queue.append(w)
        members = sorted(conjugator)
        out.append((rep, members, [conjugator[z] for z in members]))
    return out


# parallel plumbing: workers are forked after the group tables are built and
# read the group from this module-level slot.
_SHARED: dict = {}


def _pairs_chunk(bounds):
    G = _SHARED["group"]
    orders = G.orders.tolist()
    lo, hi = bounds
    out = []
    for i in range(lo, hi):
        ys = np.arange(i + 1, G.order)
        out.append((i, np.packbits(compute_row(G, i, ys, orders))))
    return out


def _class_rows(reps):
    G = _SHARED["group"]
    orders = G.orders.tolist()
    ys = np.arange(G.order)
    return [(x, np.packbits(compute_row(G, x, ys, orders))) for x in reps]


def _balanced_ranges(n: int, parts: int) -> list:
    """Split rows 0..n-1 of the upper triangle into ranges of similar pair counts."""
    total = n * (n - 1) // 2
    target = max(1, total // max(1, parts * 4))
    ranges, start, acc = [], 0, 0
    for i in range(n):
        acc += n - 1 - i
        if acc >= target:
            ranges.append((start, i + 1))
            start, acc = i + 1, 0
    if start < n:
        ranges.append((start, n))
    return ranges


def _run(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(fn, tasks))


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def nilpotency_matrix(G: PermGroup, workers: int = 1, strategy: str = "classes") -> np.ndarray:
    """Boolean matrix ``M[x, y]`` iff <x, y> is nilpotent.

    ``strategy="pairs"`` decides every unordered pair directly, scheduled as
    upper-triangle row ranges.  ``strategy="classes"`` decides one row per
    conjugacy class and transports it: <gxg^-1, y> is nilpotent iff
    <x, g^-1 y g> is.  Both give identical matrices for any worker count.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    n = G.order
    # build tables before any fork
    G.rows, G.orders, G.inv, G.commute
    _SHARED["group"] = G
    M = np.zeros((n, n), dtype=bool)
    try:
        if strategy == "pairs":
            tasks = _balanced_ranges(n, workers)
            for chunk in _run(_pairs_chunk, tasks, workers):
                for i, packed in chunk:
                    M[i, i + 1:] = np.unpackbits(packed, count=n - 1 - i).astype(bool)
            M |= M.T
            M[np.arange(n), np.arange(n)] = True
        else:
            classes = conjugacy_classes(G)
            reps = [c[0] for c in classes]
            tasks = [reps[i::max(1, workers)] for i in range(max(1, workers))]
            tasks = [t for t in tasks if t]
            rep_rows = {}
            for chunk in _run(_class_rows, tasks, workers):
                for x, packed in chunk:
                    rep_rows[x] = np.unpackbits(packed, count=n).astype(bool)
            mul, inv = G.mul, G.inv
            for rep, members, conjugators in classes:
                row = rep_rows[rep]
                for z, g in zip(members, conjugators):
                    # row_z[w] = row_rep[g^-1 w g]
                    back = mul[inv[g], mul[:, g].astype(np.int64)].astype(np.int64)
                    M[z] = row[back]
    finally:
        _SHARED.pop("group", None)
    return M


class NilpotencyData:
    """Nilpotency information for one group: pair decisions, nil(G), Z*(G)."""

    def __init__(self, G: PermGroup, workers: int = 1, strategy: str = "classes"):
        self.group = G
        self.workers = workers
        self.strategy = strategy
        self.pair_cache: dict = {}

    def pair_nilpotent(self, x, y) -> bool:
        G = self.group
        x, y = G.idx(x), G.idx(y)
        key = (x, y) if x <= y else (y, x)
        hit = self.pair_cache.get(key)
        if hit is not None:
            return hit
        if "matrix" in self.__dict__:
            value = bool(self.matrix[x, y])
        elif G.commute[x, y]:
            value = True
        else:
            decided, val = fast_row(G, x, np.array([y]))
            value = bool(val[0]) if decided[0] else closure_is_nilpotent(G, x, y)
        self.pair_cache[key] = value
        return value

    @cached_property
    def matrix(self) -> np.ndarray:
        return nilpotency_matrix(self.group, self.workers, self.strategy)

    def nilpotentizer(self, x) -> ElementSet:
        x = self.group.idx(x)
        return tuple(np.flatnonzero(self.matrix[x]).tolist())

    @cached_property
    def zeta_chain(self) -> list:
        """Upper central series zeta_0 = 1 < zeta_1 < ... up to Z*(G)."""
        G = self.group
        mul, inv = G.mul, G.inv
        n = G.order
        level = np.zeros(n, dtype=bool)
        level[0] = True
        chain = [level]
        while True:
            nxt = level.copy()
            for x in np.flatnonzero(~level).tolist():
                # [x, g] = x^-1 g^-1 x g for every g
                left = mul[inv[x], inv].astype(np.int64)
                right = mul[x].astype(np.int64)
                if level[mul[left, right]].all():
                    nxt[x] = True
            if nxt.sum() == level.sum():
                break
            chain.append(nxt)
            level = nxt
        return [tuple(np.flatnonzero(z).tolist()) for z in chain]

    @property
    def hypercenter(self) -> ElementSet:
        return self.zeta_chain[-1]

    @cached_property
    def nil_of_group(self) -> ElementSet:
        nil = tuple(np.flatnonzero(self.matrix.all(axis=1)).tolist())
        if nil != self.hypercenter:
            raise RuntimeError(f"nil(G) {nil} differs from the hypercenter {self.hypercenter}")
        return nil

    @property
    def is_nilpotent(self) -> bool:
        return len(self.hypercenter) == self.group.order


_DATA: "weakref.WeakKeyDictionary[PermGroup, NilpotencyData]" = weakref.WeakKeyDictionary()


def nilpotency_data(G: PermGroup, workers: int = 1, strategy: str = "classes") -> NilpotencyData:
    """Shared per-group :class:`NilpotencyData` (created on first use)."""
    data = _DATA.get(G)
    if data is None:
        data = _DATA[G] = NilpotencyData(G, workers, strategy)
    return data


def pair_nilpotent(G: PermGroup, x, y) -> bool:
    return nilpotency_data(G).pair_nilpotent(x, y)


def pair_nilpotent_slow(G: PermGroup, x, y) -> bool:
    """Full closure of <x, y> followed by the coprime-order criterion (no fast paths)."""
    return is_nilpotent_set(G, G.generate([G.idx(x), G.idx(y)]))


def nilpotentizer(G: PermGroup, x) -> ElementSet:
    return nilpotency_data(G).nilpotentizer(x)


def nil_group(G: PermGroup) -> ElementSet:
    return nilpotency_data(G).nil_of_group


def hypercenter(G: PermGroup) -> ElementSet:
    return nilpotency_data(G).hypercenter


def zeta_chain(G: PermGroup) -> list:
    return nilpotency_data(G).zeta_chain
