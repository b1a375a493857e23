"""Sylow subgroups, p-cores, the Fitting subgroup, strongly self-centralizing
subgroups and the conjugation action of G on graph components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import is_prime
from .nilgraph import NilGraph
from .nilpotency import is_nilpotent_set, nilpotency_data
from .permcore import ElementSet, GroupError, PermGroup, normalizer


def prime_divisors(n: int) -> list:
    return [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def _is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


def sylow(G: PermGroup, p: int, start: int | None = None) -> ElementSet:
    """A Sylow p-subgroup built by normalizer ascent.

    Starts from <x> with x the least element of order p (or ``start``, which
    must have order p) and repeatedly adjoins the least p-element of
    N_G(P) - P until the p-part of |G| is reached.
    """
    if not is_prime(p) or G.order % p:
        raise GroupError(f"{p} is not a prime divisor of |G| = {G.order}")
    target = p_part(G.order, p)
    ords = G.orders
    if start is None:
        start = int(np.flatnonzero(ords == p)[0])
    elif ords[start] != p:
        raise GroupError("start element must have order p")
    p_elements = np.array([_is_p_power(int(o), p) for o in ords])
    gens = [start]
    P = G.generate(gens)
    while len(P) < target:
        in_P = np.zeros(G.order, dtype=bool)
        in_P[list(P)] = True
        for y in normalizer(G, P):
            if in_P[y] or not p_elements[y]:
                continue
            bigger = G.generate(gens + [y])
            if _is_p_power(len(bigger), p):
                gens.append(y)
                P = bigger
                break
        else:
            raise RuntimeError("normalizer ascent stalled")  # impossible by Sylow theory
    return P


def conjugates_of_subgroup(G: PermGroup, S) -> list:
    """Distinct conjugates g S g^-1, sorted."""
    S = np.asarray(sorted(S), dtype=np.int64)
    conj = G.mul[G.mul[:, S].astype(np.int64), G.inv[:, None]].astype(np.int64)
    conj.sort(axis=1)
    uniq = np.unique(conj, axis=0)
    return [tuple(r.tolist()) for r in uniq]


def p_core(G: PermGroup, p: int) -> ElementSet:
    """Intersection of all conjugates of a Sylow p-subgroup."""
    P = sylow(G, p)
    common = set(P)
    for Q in conjugates_of_subgroup(G, P):
        common &= set(Q)
    return tuple(sorted(common))


def fitting(G: PermGroup) -> ElementSet:
    cores = [p_core(G, p) for p in prime_divisors(G.order)]
    F = G.generate(set().union(*cores)) if cores else (0,)
    expected = 1
    for c in cores:
        expected *= len(c)
    if len(F) != expected or not is_nilpotent_set(G, F):
        raise RuntimeError("Fitting subgroup is not the direct product of the p-cores")
    return F


def strongly_self_centralizing(G: PermGroup) -> list:
    """All U with C_G(x) = U for every non-identity x in U (empty for nilpotent G)."""
    if nilpotency_data(G).is_nilpotent:
        return []
    C = G.commute
    found = set()
    for x in range(1, G.order):
        row = C[x]
        members = np.flatnonzero(row)
        if all((C[y] == row).all() for y in members[1:].tolist()):
            found.add(tuple(members.tolist()))
    return sorted(found)


def component_action(G: PermGroup, graph: NilGraph) -> np.ndarray:
    """``act[g, i]`` = index of the component g C_i g^-1."""
    labels = np.full(G.order, -1, dtype=np.int64)
    for v, e in enumerate(graph.vertices):
        labels[e] = graph.labels[v]
    reps = np.array([graph.vertices[c[0]] for c in graph.components], dtype=np.int64)
    conj = G.mul[G.mul[:, reps].astype(np.int64), G.inv[:, None]].astype(np.int64)
    return labels[conj]


def component_orbits(G: PermGroup, graph: NilGraph) -> dict:
    """Orbits of components under conjugation and the stabilizer orders."""
    act = component_action(G, graph)
    k = graph.kappa
    orbit_of = [-1] * k
    orbits = []
    gen_idx = [G.idx(s) for s in G.generators]
    for i in range(k):
        if orbit_of[i] >= 0:
            continue
        orbit = [i]
        orbit_of[i] = len(orbits)
        pos = 0
        while pos < len(orbit):
            c = orbit[pos]
            pos += 1
            for s in gen_idx:
                d = int(act[s, c])
                if orbit_of[d] < 0:
                    orbit_of[d] = len(orbits)
                    orbit.append(d)
        orbits.append(sorted(orbit))
    stabilizer_orders = [int((act[:, i] == i).sum()) for i in range(k)]
    return {
        "orbits": orbits,
        "orbit_sizes": [len(o) for o in orbits],
        "orbit_of": orbit_of,
        "stabilizer_orders": stabilizer_orders,
    }


def component_normalizer(G: PermGroup, graph: NilGraph, i: int) -> ElementSet:
    act = component_action(G, graph)
    return tuple(np.flatnonzero(act[:, i] == i).tolist())


def sylow_component_check(G: PermGroup, graph: NilGraph) -> list:
    """Check both Sylow/component statements for every prime and component.

    Returns a list of failure descriptions (empty when everything holds).
    """
    failures = []
    z_star = graph.nil_set
    z_size = len(z_star)
    labels = np.full(G.order, -1, dtype=np.int64)
    for v, e in enumerate(graph.vertices):
        labels[e] = graph.labels[v]
    stab = component_orbits(G, graph)["stabilizer_orders"]
    sizes = graph.component_sizes
    for p in prime_divisors(G.order):
        sylows = conjugates_of_subgroup(G, sylow(G, p))
        # components whose union with Z*(G) contains some Sylow p-subgroup
        containing = set()
        for P in sylows:
            labs = set(labels[list(P)].tolist()) - {-1}
            if not labs:
                containing.update(range(graph.kappa))
            elif len(labs) == 1:
                containing.update(labs)
        for i in sorted(containing):
            if (sizes[i] + z_size) % p:
                failures.append(f"p={p}: component {i} holds a Sylow subgroup but |C u Z*| = {sizes[i] + z_size}")
        if z_size != 1:
            continue
        for i in range(graph.kappa):
            if (sizes[i] + 1) % p or stab[i] % p:
                continue
            comp = graph.component_elements(i)
            order_p = [e for e in comp if G.orders[e] == p]
            if not order_p:
                failures.append(f"p={p}: component {i} has no element of order p")
                continue
            P = sylow(G, p, start=order_p[0])
            if not set(P) <= set(comp) | {0}:
                failures.append(f"p={p}: Sylow subgroup from component {i} leaves C u 1")
    return failures


@dataclass
class StructureReport:
    fitting: ElementSet
    p_cores: dict
    ssc_subgroups: list
    component_orbits: dict


def structure_report(G: PermGroup, graph: NilGraph | None = None) -> StructureReport:
    cores = {p: p_core(G, p) for p in prime_divisors(G.order)}
    return StructureReport(
        fitting=fitting(G),
        p_cores=cores,
        ssc_subgroups=strongly_self_centralizing(G),
        component_orbits=component_orbits(G, graph) if graph is not None else {},
    )
