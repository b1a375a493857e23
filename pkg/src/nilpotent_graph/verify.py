"""Closed-form predictors and theorem checks against brute-force computation."""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import structure
from .families import DEFAULT_MAX_ORDER, PslParameters, dihedral, psl2, symmetric
from .gf import is_prime, prime_power
from .nilgraph import NilGraph, build_graph, check_degree_formula
from .nilpotency import (
    fast_row,
    is_nilpotent_lcs,
    is_nilpotent_set,
    nilpotency_data,
    pair_nilpotent_slow,
)
from .permcore import (
    PermGroup,
    coset_action,
    coset_representatives,
    direct_product,
    regular_representation,
)

STRETCH_ORDER = 2000

PSL_TABLE = {2: 4, 3: 5, 5: 21}


class PredictorDomainError(ValueError):
    """Parameter lies outside the hypotheses of a closed-form formula."""


# predictors

def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def predict_kappa_dihedral(n: int) -> int:
    if n < 3:
        raise PredictorDomainError("dihedral formula needs n >= 3")
    if is_power_of_two(n):
        raise PredictorDomainError(f"D{n} is a 2-group, hence nilpotent")
    if n % 2:
        return n + 1
    m = n
    while m % 2 == 0:
        m //= 2
    return m + 1


def predict_kappa_psl2(q: int) -> int:
    if prime_power(q) is None:
        raise PredictorDomainError(f"{q} is not a prime power")
    if q in PSL_TABLE:
        return PSL_TABLE[q]
    if q % 4 == 0:
        return q * q + q + 1
    if q % 4 == 1:
        return q + (q - 1) * q // 2 + 2
    return q + (q + 1) * q // 2 + 2


def predict_sn_disconnected(n: int) -> bool:
    """True iff n or n-1 is prime.  Only claimed as an equivalence for n >= 5."""
    if n < 3:
        raise PredictorDomainError("S1 and S2 are nilpotent")
    return is_prime(n) or is_prime(n - 1)


# reports

@dataclass
class Check:
    name: str
    paper_ref: str
    status: str
    expected: Any = None
    actual: Any = None

    def to_dict(self) -> dict:
        return {"name": self.name, "paper_ref": self.paper_ref, "status": self.status,
                "expected": self.expected, "actual": self.actual}


@dataclass
class VerificationReport:
    subject: str
    checks: list = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, name: str, paper_ref: str, ok, expected=None, actual=None) -> Check:
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        check = Check(name, paper_ref, status, _jsonable(expected), _jsonable(actual))
        self.checks.append(check)
        return check

    def skip(self, name: str, paper_ref: str, reason: str) -> Check:
        return self.add(name, paper_ref, None, None, reason)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def status_of(self, name: str) -> str:
        return next(c.status for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {"subject": self.subject, "checks": [c.to_dict() for c in self.checks],
                "elapsed_ms": self.elapsed_ms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (tuple, list, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(i) for i in items]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def merge_reports(subject: str, reports: list) -> VerificationReport:
    out = VerificationReport(subject)
    for r in reports:
        for c in r.checks:
            out.checks.append(Check(f"[{r.subject}] {c.name}", c.paper_ref, c.status, c.expected, c.actual))
        out.elapsed_ms += r.elapsed_ms
    return out


class _Timer:
    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self.start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed_ms = int((time.perf_counter() - self.start) * 1000)
        return False


# references

REF_DEGREE = "deg(x) = |nil_G(x)| - |nil(G)| - 1"
REF_STAR = "the nilpotent graph is never a star"
REF_BIPARTITE = "bipartite iff G is isomorphic to S3"
REF_SELF_COMP = "no finite non-nilpotent group has a self-complementary nilpotent graph"
REF_EULER = "nil(G) of even order implies non-Eulerian"
REF_NIL_Z = "nil(G) = Z*(G) for finite G"
REF_FITTING = "|F(G) - (F(G) n nil(G))| <= omega"
REF_SSC = "strongly self-centralizing U: nil(G)=1, nil_G(x)=U, graph disconnected, |F(G)|-1 <= omega"
REF_SSC_COMP = "U - 1 is a connected component; kappa >= |U-set| (+1 when the union is proper)"
REF_SUM = "sum k_i + |Z*(G)| = |G|"
REF_GCD = "|Z*(G)| = gcd(k_1, ..., k_n, |G|)"
REF_CONJ = "each component is invariant under conjugation by its elements"
REF_SYLOW = "Sylow p-subgroup inside C u Z* forces p | |C u Z*|; converse when Z*=1 and p | gcd(|C|+1, |N_G(C)|)"
REF_CRITERION = "nilpotent iff elements of coprime order commute (vs lower central series)"
REF_EDGE = "edge iff <x, y> nilpotent"


def _omega_check(report: VerificationReport, name: str, ref: str, bound: int, graph: NilGraph) -> None:
    cl = graph.clique
    if cl["exact"]:
        report.add(name, ref, bound <= cl["omega"], f"<= {cl['omega']}", bound)
        return
    lo, hi = cl["bounds"]
    if bound <= lo:
        report.add(name, ref, True, f"<= {lo} (lower bound on omega)", bound)
    elif bound > hi:
        report.add(name, ref, False, f"<= {hi} (upper bound on omega)", bound)
    else:
        report.skip(name, ref, f"omega only bracketed in [{lo}, {hi}]")


def two_generated_subgroups(G: PermGroup, samples: int = 10_000, exhaustive_limit: int = 200,
                            seed: int = 0) -> set:
    """Distinct subgroups <x, y>: every pair when |G| <= exhaustive_limit, else a seeded sample."""
    found = set()
    if G.order <= exhaustive_limit:
        for x in range(G.order):
            for y in range(x, G.order):
                found.add(G.generate([x, y]))
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            found.add(G.generate([rng.randrange(G.order), rng.randrange(G.order)]))
    return found


def check_oracle_agreement(G: PermGroup, samples: int = 10_000, seed: int = 0) -> tuple:
    """Compare both nilpotency criteria on two-generated subgroups; returns (count, mismatches)."""
    subs = two_generated_subgroups(G, samples=samples, seed=seed)
    bad = [H for H in subs if is_nilpotent_set(G, H) != is_nilpotent_lcs(G, H)]
    return len(subs), bad


def verify_group(G: PermGroup, graph: NilGraph | None = None, subject: str | None = None,
                 oracle_samples: int = 10_000, edge_samples: int = 1000, seed: int = 0) -> VerificationReport:
    report = VerificationReport(subject or G.name or repr(G))
    with _Timer(report):
        if graph is None:
            graph = build_graph(G)
        data = graph.nilpotency
        nil = graph.nil_set
        z_star = data.hypercenter
        rng = random.Random(seed)

        report.add("nil_equals_hypercenter", REF_NIL_Z, nil == z_star, len(z_star), len(nil))
        n_conj = len(structure.conjugates_of_subgroup(G, z_star))
        report.add("hypercenter_normal", REF_NIL_Z, n_conj == 1, 1, n_conj)
        report.add("degree_formula", REF_DEGREE, check_degree_formula(graph), True, check_degree_formula(graph))

        sizes = graph.component_sizes
        report.add("component_sum", REF_SUM, sum(sizes) + len(z_star) == G.order, G.order, sum(sizes) + len(z_star))
        g = math.gcd(G.order, *sizes)
        report.add("hypercenter_gcd", REF_GCD, g == len(z_star), len(z_star), g)
        report.add("hypercenter_divides_components", REF_GCD, all(k % len(z_star) == 0 for k in sizes),
                   True, [k % len(z_star) for k in sizes])

        classes = graph.classes
        report.add("not_star", REF_STAR, not classes["star"], False, classes["star"])
        nonabelian_6 = G.order == 6 and not bool(G.commute.all())
        report.add("bipartite_iff_s3", REF_BIPARTITE, classes["bipartite"] == nonabelian_6,
                   nonabelian_6, classes["bipartite"])
        sc = classes["self_complementary"]
        if sc == "undetermined":
            report.skip("not_self_complementary", REF_SELF_COMP, "graph too large for exact search")
        else:
            report.add("not_self_complementary", REF_SELF_COMP, sc == "no", "no",
                       f"{sc} ({classes['self_complementary_route']})")
        if len(nil) % 2 == 0:
            report.add("non_eulerian_even_nil", REF_EULER, not classes["eulerian"], False,
                       f"{classes['eulerian']} ({classes['eulerian_route']})")
        else:
            report.skip("non_eulerian_even_nil", REF_EULER, f"|nil(G)| = {len(nil)} is odd")

        F = structure.fitting(G)
        f_out = len(set(F) - set(nil))
        _omega_check(report, "fitting_clique_bound", REF_FITTING, f_out, graph)

        ssc = structure.strongly_self_centralizing(G)
        if ssc:
            report.add("ssc_nil_trivial", REF_SSC, len(nil) == 1, 1, len(nil))
            report.add("ssc_disconnected", REF_SSC, graph.kappa > 1, "> 1", graph.kappa)
            _omega_check(report, "ssc_fitting_bound", REF_SSC, len(F) - 1, graph)
            nilz_ok = all(data.nilpotentizer(x) == U for U in ssc for x in U[1:])
            report.add("ssc_nilpotentizer", REF_SSC, nilz_ok, True, nilz_ok)
            comp_sets = {frozenset(graph.component_elements(i)) for i in range(graph.kappa)}
            is_comp = all(frozenset(U[1:]) in comp_sets for U in ssc)
            report.add("ssc_components", REF_SSC_COMP, is_comp, True, is_comp)
            covered = set().union(*map(set, ssc))
            bound = len(ssc) + (0 if len(covered) == G.order else 1)
            report.add("ssc_kappa_bound", REF_SSC_COMP, graph.kappa >= bound, f">= {bound}", graph.kappa)
        else:
            report.skip("ssc_components", REF_SSC_COMP, "no strongly self-centralizing subgroups")

        act = structure.component_action(G, graph)
        conj_bad = [i for i in range(graph.kappa)
                    if not (act[list(graph.component_elements(i)), i] == i).all()]
        report.add("component_conjugation", REF_CONJ, not conj_bad, [], conj_bad)

        failures = structure.sylow_component_check(G, graph)
        report.add("sylow_components", REF_SYLOW, not failures, [], failures)

        n_subs, bad = check_oracle_agreement(G, samples=oracle_samples, seed=seed)
        report.add("criterion_oracle_agreement", REF_CRITERION, not bad, f"0 mismatches over {n_subs} subgroups",
                   f"{len(bad)} mismatches")

        _edge_soundness(report, G, graph, rng, edge_samples)
        _fast_path_soundness(report, G, rng, edge_samples)
    return report


def _edge_soundness(report, G, graph, rng, samples):
    edges = graph.edges()
    n = graph.vertex_count
    chosen = rng.sample(edges, min(samples, len(edges)))
    non_edges = []
    total_non = n * (n - 1) // 2 - len(edges)
    attempts = 0
    while len(non_edges) < min(samples, total_non) and attempts < 50 * samples:
        attempts += 1
        u, w = rng.randrange(n), rng.randrange(n)
        if u != w and not graph.adjacent(u, w):
            non_edges.append((u, w))
    cache: dict = {}

    def lcs(u, w):
        H = G.generate([graph.vertices[u], graph.vertices[w]])
        if H not in cache:
            cache[H] = is_nilpotent_lcs(G, H)
        return cache[H]

    bad = [(u, w) for u, w in chosen if not lcs(u, w)] + [(u, w) for u, w in non_edges if lcs(u, w)]
    report.add("edge_soundness", REF_EDGE, not bad, f"{len(chosen)} edges and {len(non_edges)} non-edges confirmed",
               f"{len(bad)} disagreements")


def _fast_path_soundness(report, G, rng, samples):
    bad = 0
    fired = 0
    for _ in range(samples):
        x, y = rng.randrange(G.order), rng.randrange(G.order)
        decided, value = fast_row(G, x, np.array([y]))
        if decided[0]:
            fired += 1
            if bool(value[0]) != pair_nilpotent_slow(G, x, y):
                bad += 1
    report.add("fast_path_soundness", REF_CRITERION, bad == 0, f"0 of {fired} fast decisions wrong", bad)


def _split(P: PermGroup, G: PermGroup, H: PermGroup) -> tuple:
    """Component indices (g, h) of every element of G x H."""
    d = G.degree
    gi, hi = [], []
    for p in P.elements:
        gi.append(G.index[type(p)(p.images[:d])])
        hi.append(H.index[type(p)(tuple(x - d for x in p.images[d:]))])
    return np.array(gi), np.array(hi)


def verify_product(G: PermGroup, H: PermGroup, subject: str | None = None, samples: int = 10_000,
                   seed: int = 0) -> VerificationReport:
    dG = nilpotency_data(G)
    if dG.is_nilpotent:
        raise ValueError("first factor must be non-nilpotent")
    P = direct_product(G, H)
    report = VerificationReport(subject or f"{G.name} x {H.name}")
    with _Timer(report):
        dH = nilpotency_data(H)
        dP = nilpotency_data(P)
        gi, hi = _split(P, G, H)
        MG, MH, MP = dG.matrix, dH.matrix, dP.matrix

        # <(g1,h1),(g2,h2)> is nilpotent iff both coordinate pairs are
        rng = random.Random(seed)
        n = P.order
        if n * n <= samples:
            a, b = np.meshgrid(np.arange(n), np.arange(n))
            a, b = a.ravel(), b.ravel()
        else:
            a = np.array([rng.randrange(n) for _ in range(samples)])
            b = np.array([rng.randrange(n) for _ in range(samples)])
        factor = MG[gi[a], gi[b]] & MH[hi[a], hi[b]]
        mism = int((MP[a, b] != factor).sum())
        report.add("adjacency_factorization", "<(g1,h1),(g2,h2)> nilpotent iff <g1,g2> and <h1,h2> nilpotent",
                   mism == 0, 0, mism)

        nil_set = set(dG.nil_of_group)
        nil_h = set(dH.nil_of_group)
        expected = sorted(i for i in range(n) if gi[i] in nil_set and hi[i] in nil_h)
        actual = list(dP.nil_of_group)
        report.add("nil_product", "nil(G x H) = nil(G) x nil(H)", expected == actual, len(expected), len(actual))

        gP = build_graph(P)
        if dH.is_nilpotent:
            gG = build_graph(G)
            report.add("kappa_preserved", "kappa(G x H) = kappa(G) for nilpotent H", gP.kappa == gG.kappa,
                       gG.kappa, gP.kappa)
            report.add("order_divides_components", "|H| divides every k_i(G x H) for nilpotent H",
                       all(k % H.order == 0 for k in gP.component_sizes), H.order, gP.component_sizes)
        else:
            report.add("connected", "nilpotent graph of G x H is connected for non-nilpotent G, H",
                       gP.kappa == 1, 1, gP.kappa)
    return report


def quotient_model(G: PermGroup) -> dict:
    """G/Z* x Z* as a permutation group together with the transversal map into G."""
    data = nilpotency_data(G)
    Z = list(data.hypercenter)
    Q = coset_action(G, Z)
    R = regular_representation(Z, G)
    P = direct_product(Q, R)
    T = coset_representatives(G, Z)
    m = Q.degree
    f = np.empty(P.order, dtype=np.int64)
    for i, p in enumerate(P.elements):
        coset = p.images[0]           # image of the identity coset
        z = Z[p.images[m] - m]        # image of the identity point of Z*
        f[i] = G.mul[T[coset], z]
    return {"quotient": Q, "hypercenter_group": R, "product": P, "map": f}


def verify_quotient_iso(G: PermGroup, subject: str | None = None) -> VerificationReport:
    data = nilpotency_data(G)
    if data.is_nilpotent:
        raise ValueError("group must be non-nilpotent")
    report = VerificationReport(subject or G.name or repr(G))
    ref = "nilpotent graph of G is isomorphic to that of G/Z*(G) x Z*(G)"
    with _Timer(report):
        model = quotient_model(G)
        Q, P, f = model["quotient"], model["product"], model["map"]
        report.add("quotient_order", ref, Q.order * len(data.hypercenter) == G.order, G.order,
                   Q.order * len(data.hypercenter))
        bij = sorted(f.tolist()) == list(range(G.order))
        report.add("transversal_map_bijective", ref, bij, True, bij)
        dP = nilpotency_data(P)
        maps_nil = sorted(f[list(dP.nil_of_group)].tolist()) == list(data.nil_of_group)
        report.add("transversal_map_nil", ref, maps_nil, True, maps_nil)
        gG, gP = build_graph(G), build_graph(P)
        vp = np.array(gP.vertices, dtype=np.int64)
        AP = dP.matrix[np.ix_(vp, vp)]
        AG = data.matrix[np.ix_(f[vp], f[vp])]
        off = ~np.eye(len(vp), dtype=bool)
        mism = int(((AP != AG) & off).sum()) // 2
        report.add("edge_by_edge_isomorphism", ref, bij and maps_nil and mism == 0, 0, mism)
        gQ = build_graph(Q)
        report.add("kappa_quotient", "kappa(G) = kappa(G/Z*(G))", gG.kappa == gQ.kappa, gG.kappa, gQ.kappa)
        report.add("kappa_model", ref, gG.kappa == gP.kappa, gG.kappa, gP.kappa)
    return report


# families

def _budget_skip(report, name, ref, order, max_order, unlock_stretch):
    if order > max_order:
        report.skip(name, ref, f"order {order} exceeds budget {max_order}")
        return True
    if order > STRETCH_ORDER and not unlock_stretch:
        report.skip(name, ref, f"order {order} is a stretch workload (enable unlock_stretch)")
        return True
    return False


def psl_orbit_checks(report: VerificationReport, q: int, G: PermGroup, graph: NilGraph) -> None:
    params = PslParameters.of(q)
    orb = structure.component_orbits(G, graph)
    labels = graph.labels
    pos = graph.position
    ords = G.orders

    def orbit_size_of(order: int) -> int:
        e = int(np.flatnonzero(ords == order)[0])
        return orb["orbit_sizes"][orb["orbit_of"][labels[pos[e]]]]

    tag = f"PSL2:{q}"
    report.add(f"orbit_count[{tag}]", "q > 3: exactly 3 orbits of components", len(orb["orbits"]) == 3, 3,
               len(orb["orbits"]))
    o_p = orbit_size_of(params.p)
    report.add(f"orbit_CP[{tag}]", "|Orb(C_P)| = q + 1", o_p == q + 1, q + 1, o_p)
    o_u, o_s = orbit_size_of(params.r), orbit_size_of(params.t)
    if q >= 13:
        report.add(f"orbit_CU[{tag}]", "q >= 13: |Orb(C_U)| = 1 iff q = 1 mod 4", (o_u == 1) == (q % 4 == 1),
                   q % 4 == 1, o_u == 1)
    else:
        report.skip(f"orbit_CU[{tag}]", "q >= 13: |Orb(C_U)| = 1 iff q = 1 mod 4", "q < 13")
    if q not in (7, 9):
        report.add(f"orbit_CS[{tag}]", "q > 3, q != 7, 9: |Orb(C_S)| = 1 iff q = 3 mod 4",
                   (o_s == 1) == (q % 4 == 3), q % 4 == 3, o_s == 1)
    else:
        report.skip(f"orbit_CS[{tag}]", "q > 3, q != 7, 9: |Orb(C_S)| = 1 iff q = 3 mod 4", "q in {7, 9}")
    report.add(f"orbit_decomposition[{tag}]", "kappa = (q+1) + |Orb(C_U)| + |Orb(C_S)|",
               graph.kappa == q + 1 + o_u + o_s, q + 1 + o_u + o_s, graph.kappa)
    # components in the orbit of C_P are exactly the sets P^g - 1
    sylows = {frozenset(P) - {0} for P in structure.conjugates_of_subgroup(G, structure.sylow(G, params.p))}
    e = int(np.flatnonzero(ords == params.p)[0])
    orbit = orb["orbits"][orb["orbit_of"][labels[pos[e]]]]
    comps = {frozenset(graph.component_elements(i)) for i in orbit}
    report.add(f"CP_is_sylow_minus_1[{tag}]", "C_P = P - 1", comps == sylows, len(sylows), len(comps))


def verify_family(family: str, params, max_order: int = DEFAULT_MAX_ORDER, unlock_stretch: bool = False,
                  workers: int = 1) -> VerificationReport:
    report = VerificationReport(f"{family} {min(params)}..{max(params)}" if params else family)
    with _Timer(report):
        for n in params:
            if family == "dihedral":
                ref = "kappa(D_n) = n+1 (n odd), m+1 (n = 2^k m, m >= 3 odd)"
                name = f"kappa[D:{n}]"
                if n < 3 or is_power_of_two(n):
                    report.skip(name, ref, "nilpotent (power of 2)" if n >= 3 else "n < 3")
                    continue
                if _budget_skip(report, name, ref, 2 * n, max_order, unlock_stretch):
                    continue
                g = build_graph(dihedral(n, max_order=None), workers=workers)
                report.add(name, ref, g.kappa == predict_kappa_dihedral(n), predict_kappa_dihedral(n), g.kappa)
            elif family == "psl2":
                ref = "kappa(PSL(2,q)): table for q <= 11, residue-class formula otherwise"
                name = f"kappa[PSL2:{n}]"
                if prime_power(n) is None:
                    report.skip(name, ref, "not a prime power")
                    continue
                if _budget_skip(report, name, ref, PslParameters.of(n).order, max_order, unlock_stretch):
                    continue
                G = psl2(n, max_order=None)
                g = build_graph(G, workers=workers)
                report.add(name, ref, g.kappa == predict_kappa_psl2(n), predict_kappa_psl2(n), g.kappa)
                if n > 3:
                    psl_orbit_checks(report, n, G, g)
            elif family == "symmetric":
                ref = "S_n graph disconnected iff n or n-1 prime (n >= 5)"
                name = f"disconnected[S:{n}]"
                if n < 3:
                    report.skip(name, ref, "nilpotent")
                    continue
                if _budget_skip(report, name, ref, math.factorial(n), max_order, unlock_stretch):
                    continue
                g = build_graph(symmetric(n, max_order=None), workers=workers, max_clique_vertices=0)
                report.add(name, ref, (g.kappa > 1) == predict_sn_disconnected(n), predict_sn_disconnected(n),
                           g.kappa > 1)
            else:
                raise ValueError(f"unknown family {family!r}")
    return report


PRODUCT_CASES = [("S:3", "C:2"), ("S:3", "C:3"), ("S:3", "S:3"), ("D:5", "C:2"), ("D:5", "C:3")]
QUOTIENT_CASES = ["D:12", "S:3 x C:2", "S:4", "D:6", "D:10"]
