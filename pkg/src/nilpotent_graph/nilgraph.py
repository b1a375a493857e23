"""The nilpotent graph of a finite non-nilpotent group and its invariants.

Vertices are the elements outside nil(G), kept in canonical order; vertex
``v`` of the graph is element ``vertices[v]`` of the group.  Adjacency is a
list of Python ints used as bit rows over vertex positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .nilpotency import NilpotencyData, NilpotentGroupError, nilpotency_data
from .permcore import PermGroup, cycle_notation

DEFAULT_MAX_CLIQUE_VERTICES = 2000
SELF_COMPLEMENT_EXACT_LIMIT = 16


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class NilGraph:
    group: PermGroup
    nil_set: tuple
    vertices: tuple  # element indices of G, canonical order
    adjacency: list  # bit rows over vertex positions
    nilpotency: NilpotencyData = field(repr=False)
    max_clique_vertices: int = DEFAULT_MAX_CLIQUE_VERTICES

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @cached_property
    def position(self) -> dict:
        return {e: v for v, e in enumerate(self.vertices)}

    def edges(self) -> list:
        """Edges as sorted pairs of vertex positions."""
        out = []
        for u, row in enumerate(self.adjacency):
            out.extend((u, w) for w in _bits(row >> (u + 1) << (u + 1)))
        return out

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adjacency) // 2

    def adjacent(self, u: int, w: int) -> bool:
        return bool(self.adjacency[u] >> w & 1)

    @cached_property
    def _components(self):
        n = self.vertex_count
        uf = UnionFind(n)
        for u, w in self.edges():
            uf.union(u, w)
        groups: dict = {}
        for v in range(n):
            groups.setdefault(uf.find(v), []).append(v)
        comps = sorted(groups.values(), key=lambda c: (-len(c), c[0]))
        labels = [0] * n
        for i, comp in enumerate(comps):
            for v in comp:
                labels[v] = i
        return comps, labels

    @property
    def components(self) -> list:
        """Components as sorted lists of vertex positions, largest first (ties by least vertex)."""
        return self._components[0]

    @property
    def labels(self) -> list:
        return self._components[1]

    @property
    def kappa(self) -> int:
        return len(self.components)

    @property
    def component_sizes(self) -> list:
        return [len(c) for c in self.components]

    def component_elements(self, i: int) -> tuple:
        """Component ``i`` as group element indices."""
        return tuple(self.vertices[v] for v in self.components[i])

    def degrees(self) -> list:
        return [r.bit_count() for r in self.adjacency]

    @cached_property
    def clique(self) -> dict:
        return clique_number(self)

    @cached_property
    def classes(self) -> dict:
        return classify(self)


def build_graph(G: PermGroup, workers: int = 1, strategy: str = "classes",
                max_clique_vertices: int = DEFAULT_MAX_CLIQUE_VERTICES,
                data: NilpotencyData | None = None) -> NilGraph:
    """Construct the nilpotent graph of ``G``.

    Raises :class:`NilpotentGroupError` when nil(G) = G.
    """
    if data is None:
        data = nilpotency_data(G, workers, strategy)
        data.workers, data.strategy = workers, strategy
    if data.is_nilpotent:
        raise NilpotentGroupError(f"{G!r} is nilpotent; its nilpotent graph is undefined")
    nil = data.nil_of_group
    if len(nil) == G.order:
        raise NilpotentGroupError(f"{G!r} is nilpotent; its nilpotent graph is undefined")
    in_nil = np.zeros(G.order, dtype=bool)
    in_nil[list(nil)] = True
    verts = np.flatnonzero(~in_nil)
    sub = data.matrix[np.ix_(verts, verts)].copy()
    np.fill_diagonal(sub, False)
    adjacency = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in sub]
    return NilGraph(G, nil, tuple(verts.tolist()), adjacency, data, max_clique_vertices)


def components(graph: NilGraph):
    return graph.kappa, graph.component_sizes, graph.labels


def degrees(graph: NilGraph) -> list:
    return graph.degrees()


def check_degree_formula(graph: NilGraph) -> bool:
    """deg(x) == |nil_G(x)| - |nil(G)| - 1 for every vertex."""
    M = graph.nilpotency.matrix
    nil_size = len(graph.nil_set)
    for v, e in enumerate(graph.vertices):
        if graph.adjacency[v].bit_count() != int(M[e].sum()) - nil_size - 1:
            return False
    return True


# cliques

def _max_clique(adj: list, vertices: list) -> int:
    """Branch and bound over bit rows with greedy-colouring bounds and pivoting."""
    best = [0]
    cand0 = 0
    for v in vertices:
        cand0 |= 1 << v

    def colour_bound(P: int) -> int:
        colours = 0
        rest = P
        while rest:
            colours += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                rest &= ~low
                avail &= ~low & ~adj[v]
        return colours

    def expand(size: int, P: int) -> None:
        if not P:
            if size > best[0]:
                best[0] = size
            return
        if size + P.bit_count() <= best[0] or size + colour_bound(P) <= best[0]:
            return
        # pivot: vertex of P with most neighbours in P
        pivot = max(_bits(P), key=lambda u: (adj[u] & P).bit_count())
        for v in list(_bits(P & ~adj[pivot])):
            expand(size + 1, P & adj[v])
            P &= ~(1 << v)
            if size + P.bit_count() <= best[0]:
                return

    expand(0, cand0)
    return best[0]


def _greedy_clique(adj: list, n: int) -> int:
    best = 1 if n else 0
    order = sorted(range(n), key=lambda v: -adj[v].bit_count())
    for start in order[: min(n, 64)]:
        clique = 1
        P = adj[start]
        while P:
            v = max(_bits(P), key=lambda u: (adj[u] & P).bit_count())
            clique += 1
            P &= adj[v]
        best = max(best, clique)
    return best


def _colour_upper_bound(adj: list, n: int) -> int:
    """Colours used by greedy colouring in decreasing-degree order."""
    colour = {}
    for v in sorted(range(n), key=lambda v: (-adj[v].bit_count(), v)):
        used = {colour[u] for u in _bits(adj[v]) if u in colour}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return max(colour.values()) + 1 if colour else 0


def clique_number(graph: NilGraph) -> dict:
    """Exact clique number when within budget, otherwise explicit bounds.

    Returns ``{"omega": int | None, "bounds": (lo, hi) | None, "exact": bool}``.
    """
    n = graph.vertex_count
    adj = graph.adjacency
    if n <= graph.max_clique_vertices:
        omega = max((_max_clique(adj, comp) for comp in graph.components), default=0)
        return {"omega": omega, "bounds": None, "exact": True}
    return {"omega": None, "bounds": (_greedy_clique(adj, n), _colour_upper_bound(adj, n)), "exact": False}


# shape classification

def is_bipartite(graph: NilGraph) -> bool:
    colour = [-1] * graph.vertex_count
    for comp in graph.components:
        colour[comp[0]] = 0
        stack = [comp[0]]
        while stack:
            u = stack.pop()
            for w in _bits(graph.adjacency[u]):
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return False
    return True


def is_star(graph: NilGraph) -> bool:
    n = graph.vertex_count
    if n < 2:
        return False
    degs = graph.degrees()
    centres = [v for v in range(n) if degs[v] == n - 1]
    return len(centres) >= 1 and graph.edge_count == n - 1


def eulerian(graph: NilGraph) -> tuple:
    """``(is_eulerian, route)``; route names the first failing condition."""
    if graph.kappa != 1:
        return False, "disconnected"
    if any(d % 2 for d in graph.degrees()):
        return False, "odd_degree"
    return True, "connected_even_degrees"


def _complement_isomorphism(adj: list, n: int) -> bool:
    """Exact search for f with u~w iff f(u), f(w) non-adjacent (u != w)."""
    full = (1 << n) - 1
    cadj = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    deg = [a.bit_count() for a in adj]
    cdeg = [a.bit_count() for a in cadj]
    order = sorted(range(n), key=lambda v: -deg[v])
    image = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        u = order[k]
        for t in range(n):
            if used[t] or cdeg[t] != deg[u]:
                continue
            ok = True
            for j in range(k):
                w = order[j]
                if (adj[u] >> w & 1) != (cadj[t] >> image[w] & 1):
                    ok = False
                    break
            if ok:
                image[u] = t
                used[t] = True
                if extend(k + 1):
                    return True
                used[t] = False
                image[u] = -1
        return False

    return extend(0)


def self_complementary(graph: NilGraph) -> tuple:
    """``("no" | "yes" | "undetermined", route)``."""
    n = graph.vertex_count
    if 4 * graph.edge_count != n * (n - 1):
        return "no", "edge_count"
    if n <= SELF_COMPLEMENT_EXACT_LIMIT:
        found = _complement_isomorphism(graph.adjacency, n)
        return ("yes" if found else "no"), "exact_search"
    return "undetermined", "too_large"


def classify(graph: NilGraph) -> dict:
    eul, eul_route = eulerian(graph)
    sc, sc_route = self_complementary(graph)
    return {
        "bipartite": is_bipartite(graph),
        "star": is_star(graph),
        "eulerian": eul,
        "eulerian_route": eul_route,
        "self_complementary": sc,
        "self_complementary_route": sc_route,
    }


# export

def to_dict(graph: NilGraph, spec: str | None = None) -> dict:
    G = graph.group
    ords = G.orders
    cl = graph.clique
    classes = graph.classes
    vid = graph.vertices
    return {
        "group": {"spec": spec if spec is not None else (G.name or ""), "order": G.order, "degree": G.degree},
        "nil_order": len(graph.nil_set),
        "vertex_count": graph.vertex_count,
        "vertices": [{"id": e, "perm": cycle_notation(G.elements[e]), "order": int(ords[e])} for e in vid],
        "edges": [[vid[u], vid[w]] for u, w in graph.edges()],
        "kappa": graph.kappa,
        "component_sizes": graph.component_sizes,
        "components": [[vid[v] for v in comp] for comp in graph.components],
        "clique_number": cl["omega"],
        "clique_bounds": list(cl["bounds"]) if cl["bounds"] is not None else None,
        "classes": {
            "bipartite": classes["bipartite"],
            "star": classes["star"],
            "eulerian": classes["eulerian"],
            "self_complementary": classes["self_complementary"],
        },
    }


def export_json(graph: NilGraph, spec: str | None = None) -> str:
    return json.dumps(to_dict(graph, spec), separators=(",", ":")) + "\n"


def export_dot(graph: NilGraph) -> str:
    G = graph.group
    vid = graph.vertices
    name = (G.name or "G").replace('"', "")
    lines = [f'graph "{name}" {{']
    for e in vid:
        lines.append(f'  v{e} [label="{cycle_notation(G.elements[e])}"];')
    for u, w in graph.edges():
        lines.append(f"  v{vid[u]} -- v{vid[w]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
