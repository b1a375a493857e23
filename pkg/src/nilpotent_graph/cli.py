"""Command-line front end: ``build``, ``invariants``, ``verify`` and ``scan``."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, structure, verify
from .families import DEFAULT_MAX_ORDER, GroupSpecError, PslParameters, normalize_spec, parse_group_spec
from .gf import prime_power
from .nilgraph import DEFAULT_MAX_CLIQUE_VERTICES, build_graph, export_dot, export_json
from .nilpotency import STRATEGIES, NilpotentGroupError, default_workers
from .permcore import BudgetExceeded

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_NILPOTENT = 3
EXIT_BUDGET = 4

SUITES = ("group", "dihedral", "psl2", "symmetric", "products", "quotient", "all")
FAMILIES = ("dihedral", "psl2", "symmetric")
CSV_COLUMNS = ["param", "order", "nil_order", "kappa", "sizes", "omega", "elapsed_ms", "note"]

# corpus used by the "all" suite for per-group property checks
PROPERTY_CORPUS = (
    ["S:3", "S:4", "S:5", "S:6"]
    + [f"D:{n}" for n in range(3, 26) if n & (n - 1)]
    + [f"PSL2:{q}" for q in (2, 3, 4, 5, 7, 8, 9, 11)]
    + ["S:3 x C:2", "S:3 x C:3", "S:3 x S:3", "D:5 x C:2"]
)


@dataclass
class RunConfig:
    command: str
    group_spec: str | None = None
    json_path: str | None = None
    dot_path: str | None = None
    csv_path: str | None = None
    workers: int = 1
    max_group_order: int = DEFAULT_MAX_ORDER
    max_clique_vertices: int = DEFAULT_MAX_CLIQUE_VERTICES
    cache_dir: str | None = None
    strategy: str = "classes"
    unlock_stretch: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_group_order < 1 or self.max_clique_vertices < 0:
            raise ValueError("budgets must be positive")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# cache

def cache_key(spec: str) -> str:
    return hashlib.sha256(f"{normalize_spec(spec)}\n{__version__}".encode()).hexdigest()


def _cache_path(cache_dir: str | None, spec: str) -> Path | None:
    return Path(cache_dir) / f"{cache_key(spec)}.json" if cache_dir else None


def compute_export(cfg: RunConfig, spec: str) -> tuple:
    """Return (graph or None, JSON text), consulting the cache when configured."""
    path = _cache_path(cfg.cache_dir, spec)
    if path is not None and path.exists():
        return None, path.read_text()
    G = _load_group(spec, cfg)
    graph = _build(G, cfg)
    text = export_json(graph, normalize_spec(spec))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(text)
        tmp.replace(path)
    return graph, text


def _load_group(spec: str, cfg: RunConfig):
    try:
        G = parse_group_spec(spec, max_order=cfg.max_group_order)
    except GroupSpecError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from exc
    except BudgetExceeded as exc:
        raise CliError(f"budget exceeded: {exc}", EXIT_BUDGET) from exc
    if G.order > verify.STRETCH_ORDER and not cfg.unlock_stretch:
        raise CliError(f"budget exceeded: order {G.order} is a stretch workload (use --unlock-stretch)", EXIT_BUDGET)
    return G


def _build(G, cfg: RunConfig):
    try:
        return build_graph(G, workers=cfg.workers, strategy=cfg.strategy,
                           max_clique_vertices=cfg.max_clique_vertices)
    except NilpotentGroupError as exc:
        raise CliError(str(exc), EXIT_NILPOTENT) from exc


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def summary_line(data: dict) -> str:
    sizes = ",".join(str(k) for k in data["component_sizes"])
    return f"kappa={data['kappa']} sizes=[{sizes}] nil={data['nil_order']}"


# commands

def cmd_build(cfg: RunConfig) -> int:
    graph, text = compute_export(cfg, cfg.group_spec)
    if cfg.json_path:
        _write(cfg.json_path, text)
    if cfg.dot_path:
        if graph is None:
            graph = _build(_load_group(cfg.group_spec, cfg), cfg)
        _write(cfg.dot_path, export_dot(graph))
    print(summary_line(json.loads(text)))
    return EXIT_OK


def invariants(G, graph) -> dict:
    cl = graph.clique
    classes = graph.classes
    hist = Counter(graph.degrees())
    F = structure.fitting(G)
    return {
        "group": G.name,
        "order": G.order,
        "kappa": graph.kappa,
        "component_sizes": graph.component_sizes,
        "omega": cl["omega"],
        "omega_bounds": list(cl["bounds"]) if cl["bounds"] is not None else None,
        "degree_histogram": {str(d): hist[d] for d in sorted(hist)},
        "fitting_order": len(F),
        "hypercenter_order": len(graph.nil_set),
        "ssc_count": len(structure.strongly_self_centralizing(G)),
        "bipartite": classes["bipartite"],
        "star": classes["star"],
        "eulerian": classes["eulerian"],
        "self_complementary": classes["self_complementary"],
    }


def cmd_invariants(cfg: RunConfig) -> int:
    G = _load_group(cfg.group_spec, cfg)
    graph = _build(G, cfg)
    inv = invariants(G, graph)
    inv["group"] = normalize_spec(cfg.group_spec)
    for key, value in inv.items():
        if isinstance(value, (list, dict)):
            value = json.dumps(value, separators=(",", ":"))
        print(f"{key}={value}")
    if cfg.json_path:
        _write(cfg.json_path, json.dumps(inv, indent=2) + "\n")
    return EXIT_OK


def run_suite(cfg: RunConfig, suite: str) -> verify.VerificationReport:
    n_max = cfg.extra.get("n_max")
    q_max = cfg.extra.get("q_max") or 11
    kw = {"max_order": cfg.max_group_order, "unlock_stretch": cfg.unlock_stretch, "workers": cfg.workers}
    if suite == "group":
        if not cfg.group_spec:
            raise CliError("--suite group needs --group", EXIT_PARSE)
        G = _load_group(cfg.group_spec, cfg)
        graph = _build(G, cfg)
        return verify.verify_group(G, graph, subject=normalize_spec(cfg.group_spec))
    if suite == "dihedral":
        return verify.verify_family("dihedral", range(3, (n_max or 25) + 1), **kw)
    if suite == "psl2":
        return verify.verify_family("psl2", range(2, q_max + 1), **kw)
    if suite == "symmetric":
        return verify.verify_family("symmetric", range(3, (n_max or 6) + 1), **kw)
    if suite == "products":
        reports = [verify.verify_product(_load_group(a, cfg), _load_group(b, cfg), subject=f"{a} x {b}")
                   for a, b in verify.PRODUCT_CASES]
        return verify.merge_reports("products", reports)
    if suite == "quotient":
        reports = [verify.verify_quotient_iso(_load_group(s, cfg), subject=s) for s in verify.QUOTIENT_CASES]
        return verify.merge_reports("quotient", reports)
    if suite == "all":
        reports = [run_suite(cfg, s) for s in ("dihedral", "psl2", "symmetric", "products", "quotient")]
        for spec in PROPERTY_CORPUS:
            G = _load_group(spec, cfg)
            reports.append(verify.verify_group(G, _build(G, cfg), subject=spec))
        return verify.merge_reports("all", reports)
    raise CliError(f"unknown suite {suite!r}", EXIT_PARSE)


def cmd_verify(cfg: RunConfig) -> int:
    report = run_suite(cfg, cfg.extra["suite"])
    if cfg.json_path:
        _write(cfg.json_path, report.to_json())
    counts = Counter(c.status for c in report.checks)
    print(f"{report.subject}: pass={counts['pass']} fail={counts['fail']} skipped={counts['skipped']}")
    for c in report.failures:
        print(f"FAIL {c.name}: expected {c.expected}, got {c.actual}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def parse_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split("..")) if ".." in text else (int(text), int(text))
    except ValueError as exc:
        raise CliError(f"parse error: bad range {text!r} (expected a..b)", EXIT_PARSE) from exc
    if lo > hi:
        raise CliError(f"parse error: empty range {text!r}", EXIT_PARSE)
    return range(lo, hi + 1)


def family_spec(family: str, n: int) -> tuple:
    """(group spec, order) for a family member, or (None, skip reason)."""
    if family == "dihedral":
        if n < 3:
            return None, "n < 3"
        if n & (n - 1) == 0:
            return None, "power of 2 (nilpotent)"
        return f"D:{n}", 2 * n
    if family == "psl2":
        if prime_power(n) is None:
            return None, "not a prime power"
        return f"PSL2:{n}", PslParameters.of(n).order
    if family == "symmetric":
        if n < 3:
            return None, "nilpotent"
        return f"S:{n}", math.factorial(n)
    raise CliError(f"unknown family {family!r}", EXIT_PARSE)


def scan_rows(cfg: RunConfig, family: str, params, timings: bool = False) -> tuple:
    """Computed CSV rows and (param, reason) pairs for skipped parameters."""
    rows, skipped = [], []
    for n in params:
        spec, order = family_spec(family, n)
        if spec is None:
            skipped.append((n, order))
            continue
        if order > cfg.max_group_order:
            skipped.append((n, f"order {order} exceeds budget {cfg.max_group_order}"))
            continue
        if order > verify.STRETCH_ORDER and not cfg.unlock_stretch:
            skipped.append((n, f"order {order} is a stretch workload"))
            continue
        start = time.perf_counter()
        _, text = compute_export(cfg, spec)
        elapsed = int((time.perf_counter() - start) * 1000)
        data = json.loads(text)
        bounds = data["clique_bounds"]
        exact = data["clique_number"] is not None
        omega = data["clique_number"] if exact else f"{bounds[0]}..{bounds[1]}"
        rows.append([n, data["group"]["order"], data["nil_order"], data["kappa"],
                     " ".join(str(k) for k in data["component_sizes"]), omega,
                     elapsed if timings else "", "" if exact else "omega bounded"])
    return rows, skipped


def render_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_scan(cfg: RunConfig) -> int:
    family = cfg.extra["family"]
    params = cfg.extra["range"]
    rows, skipped = scan_rows(cfg, family, params, timings=cfg.extra.get("timings", False))
    text = render_csv(rows)
    if cfg.csv_path:
        _write(cfg.csv_path, text)
    else:
        sys.stdout.write(text)
    for n, reason in skipped:
        print(f"skipped {family} {n}: {reason}", file=sys.stderr)
    return EXIT_OK


# argument parsing

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="largest group order to build")
    p.add_argument("--max-clique-vertices", type=int, default=DEFAULT_MAX_CLIQUE_VERTICES,
                   help="above this vertex count omega is reported as bounds")
    p.add_argument("--cache-dir", default=None, help="directory of cached JSON exports")
    p.add_argument("--strategy", choices=STRATEGIES, default="classes")
    p.add_argument("--unlock-stretch", action="store_true", help=f"allow groups above order {verify.STRETCH_ORDER}")
    p.add_argument("--json", dest="json_path", default=None)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilgraph", description="Nilpotent graphs of finite permutation groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the graph, print a summary and export it")
    p.add_argument("--group", required=True)
    p.add_argument("--dot", dest="dot_path", default=None)
    _add_common(p)

    p = sub.add_parser("invariants", help="print graph and structure invariants")
    p.add_argument("--group", required=True)
    _add_common(p)

    p = sub.add_parser("verify", help="check closed forms and theorems against brute force")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--group", default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--q-max", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("scan", help="tabulate a family over a parameter range as CSV")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("range", nargs="?", default=None, help="a..b")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--q-max", type=int, default=None)
    p.add_argument("--csv", dest="csv_path", default=None)
    p.add_argument("--timings", action="store_true", help="fill elapsed_ms (output is then not reproducible)")
    _add_common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    extra = {}
    if args.command == "verify":
        extra = {"suite": args.suite, "n_max": args.n_max, "q_max": args.q_max}
    elif args.command == "scan":
        if args.range is not None:
            rng = parse_range(args.range)
        else:
            hi = args.q_max if args.family == "psl2" else args.n_max
            if hi is None:
                raise CliError("scan needs a range (a..b) or --n-max/--q-max", EXIT_PARSE)
            rng = range(2 if args.family == "psl2" else 3, hi + 1)
        extra = {"family": args.family, "range": rng, "timings": args.timings}
    try:
        return RunConfig(
            command=args.command,
            group_spec=getattr(args, "group", None),
            json_path=args.json_path,
            dot_path=getattr(args, "dot_path", None),
            csv_path=getattr(args, "csv_path", None),
            workers=args.workers if args.workers is not None else default_workers(),
            max_group_order=args.max_order,
            max_clique_vertices=args.max_clique_vertices,
            cache_dir=args.cache_dir,
            strategy=args.strategy,
            unlock_stretch=args.unlock_stretch,
            extra=extra,
        )
    except ValueError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from exc


COMMANDS = {"build": cmd_build, "invariants": cmd_invariants, "verify": cmd_verify, "scan": cmd_scan}


def main(argv: list | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
