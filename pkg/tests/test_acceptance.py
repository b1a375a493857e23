"""Acceptance gate: one test per criterion, each printing a pass/fail line."""

from __future__ import annotations


from conftest import graph, group
from nilpotent_graph.cli import PROPERTY_CORPUS, main
from nilpotent_graph.families import dihedral, psl2
from nilpotent_graph.nilgraph import build_graph
from nilpotent_graph.nilpotency import default_workers
from nilpotent_graph.permcore import Permutation
from nilpotent_graph.structure import fitting, strongly_self_centralizing
from nilpotent_graph.verify import (
    predict_kappa_dihedral,
    predict_kappa_psl2,
    verify_family,
    verify_group,
    verify_product,
    verify_quotient_iso,
)


def expect(problems: list, label: str, actual, expected) -> None:
    if actual != expected:
        problems.append(f"{label}: got {actual}, expected {expected}")


def test_psl2_table(record_criterion):
    table = {2: 4, 3: 5, 4: 21, 5: 21, 7: 37, 8: 73, 9: 47, 11: 79}
    problems = []
    for q, kappa in table.items():
        expect(problems, f"kappa(PSL2:{q})", build_graph(psl2(q)).kappa, kappa)
    record_criterion(1, "PSL(2,q) component counts for q = 2..11", problems)


def test_dihedral_formula(record_criterion):
    problems = []
    for n in range(3, 26):
        if n & (n - 1) == 0:
            continue
        expect(problems, f"kappa(D:{n})", build_graph(dihedral(n)).kappa, predict_kappa_dihedral(n))
    record_criterion(2, "dihedral component formula for n = 3..25", problems)


def test_figure_level_examples(record_criterion):
    problems = []
    s3 = graph("S:3")
    expect(problems, "kappa(S:3)", s3.kappa, 4)
    expect(problems, "edges(S:3)", s3.edge_count, 1)
    expect(problems, "kappa(S:4)", graph("S:4").kappa, 5)
    expect(problems, "sizes(S:4)", sorted(graph("S:4").component_sizes), [2, 2, 2, 2, 15])
    expect(problems, "kappa(D:5)", graph("D:5").kappa, 6)
    expect(problems, "kappa(D:12)", graph("D:12").kappa, 4)
    expect(problems, "sizes(D:12)", sorted(graph("D:12").component_sizes), [4, 4, 4, 8])
    expect(problems, "kappa(PSL2:3)", graph("PSL2:3").kappa, 5)
    record_criterion(3, "small worked examples", problems)


def test_clique_and_structure_numbers(record_criterion):
    problems = []
    S4, D5 = group("S:4"), group("D:5")
    expect(problems, "omega(S:4)", graph("S:4").clique["omega"], 5)
    expect(problems, "omega(D:5)", graph("D:5").clique["omega"], 4)
    expect(problems, "|F(S:4)|", len(fitting(S4)), 4)
    expect(problems, "|F(D:5)|", len(fitting(D5)), 5)

    def subgroups(G, gens):
        return {G.generate([G.idx(Permutation.parse(g, G.degree))]) for g in gens}

    ssc_s4 = strongly_self_centralizing(S4)
    ssc_d5 = strongly_self_centralizing(D5)
    expect(problems, "SSC count (S:4)", len(ssc_s4), 4)
    expect(problems, "SSC count (D:5)", len(ssc_d5), 6)
    expect(problems, "SSC sets (S:4)", set(ssc_s4) == subgroups(S4, ["(132)", "(142)", "(143)", "(243)"]), True)
    expect(problems, "SSC sets (D:5)",
           set(ssc_d5) == subgroups(D5, ["(25)(34)", "(12)(35)", "(13)(45)", "(14)(23)", "(15)(24)", "(12345)"]),
           True)
    record_criterion(4, "clique numbers, Fitting orders, strongly self-centralizing subgroups", problems)


def test_symmetric_connectivity(record_criterion):
    problems = []
    for n in (3, 4, 5, 6):
        expect(problems, f"disconnected(S:{n})", graph(f"S:{n}").kappa > 1, True)
    r = verify_family("symmetric", [7], unlock_stretch=True)
    expect(problems, "S:7 with stretch", r.status_of("disconnected[S:7]"), "pass")
    r = verify_family("symmetric", [9], unlock_stretch=True)
    expect(problems, "S:9 reported skipped", r.status_of("disconnected[S:9]"), "skipped")
    record_criterion(5, "symmetric group connectivity (S:3..S:6, S:7 stretch, S:9 skipped)", problems)


def test_product_theorems(record_criterion):
    problems = []
    g = graph("S:3 x C:2")
    expect(problems, "kappa(S:3 x C:2)", g.kappa, 4)
    expect(problems, "kappa(S:3)", graph("S:3").kappa, 4)
    expect(problems, "even k_i", all(k % 2 == 0 for k in g.component_sizes), True)
    expect(problems, "kappa(S:3 x S:3)", graph("S:3 x S:3").kappa, 1)
    expect(problems, "|nil(S:3 x C:2)|", len(g.nil_set), 2)
    for a, b in [("S:3", "C:2"), ("S:3", "S:3")]:
        r = verify_product(group(a), group(b))
        expect(problems, f"product checks {a} x {b}", [c.name for c in r.failures], [])
    record_criterion(6, "direct product statements", problems)


def test_quotient_theorem(record_criterion):
    problems = []
    for spec in ("D:12", "S:3 x C:2"):
        r = verify_quotient_iso(group(spec))
        for name in ("transversal_map_bijective", "edge_by_edge_isomorphism", "kappa_quotient"):
            expect(problems, f"{name} ({spec})", r.status_of(name), "pass")
    record_criterion(7, "quotient by the hypercenter: edge-by-edge isomorphism and kappa", problems)


def test_psl2_13_extrapolation(record_criterion):
    problems = []
    expect(problems, "predictor", predict_kappa_psl2(13), 93)
    expect(problems, "kappa(PSL2:13)", build_graph(psl2(13)).kappa, 93)
    record_criterion(8, "brute-force kappa(PSL(2,13)) equals the predicted 93", problems)


def test_property_suites(record_criterion):
    problems = []
    for spec in PROPERTY_CORPUS:
        r = verify_group(group(spec), graph(spec), subject=spec)
        problems.extend(f"{spec}: {c.name}" for c in r.failures)
    record_criterion(9, f"property suites over {len(PROPERTY_CORPUS)} corpus groups", problems)


def test_determinism_across_workers(record_criterion, tmp_path, capsys):
    problems = []
    counts = sorted({1, 2, default_workers()})
    for spec in ("S:4", "PSL2:7", "D:12"):
        blobs = set()
        for w in counts:
            js, dot = tmp_path / f"{w}.json", tmp_path / f"{w}.dot"
            main(["build", "--group", spec, "--workers", str(w), "--json", str(js), "--dot", str(dot)])
            blobs.add((js.read_bytes(), dot.read_bytes()))
        expect(problems, f"JSON/DOT variants ({spec})", len(blobs), 1)
    csvs = set()
    for w in counts:
        path = tmp_path / f"{w}.csv"
        main(["scan", "psl2", "2..9", "--workers", str(w), "--csv", str(path)])
        csvs.add(path.read_bytes())
    expect(problems, "CSV variants", len(csvs), 1)
    capsys.readouterr()
    record_criterion(10, f"byte-identical JSON/DOT/CSV for workers {counts}", problems)
