"""Command-line entry point.

Exit codes: 0 success or decision yes, 1 decision no, 2 usage or input
error, 3 search budget exceeded (best-so-far still printed).
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .graph import Graph, GraphError, sorted_vertices
from .io import (
    DocumentError,
    GraphDocument,
    emit_dimacs_cnf,
    emit_graph,
    emit_model,
    emit_tree_decomposition,
    load_graph,
    load_model,
    load_tree_decomposition,
    parse_assignment,
    parse_dimacs_cnf,
)
from .matching import SD1, STM_HALF
from .models import MODES, ModelError, verify_model
from .reductions import (
    FormulaError,
    Positive1in3Formula,
    assignment_to_model,
    build_parity_reduction,
    eliminate_negations,
    ensure_min_frequency,
)
from .solvers import (
    SearchBudgetExceeded,
    SolveLimits,
    brute_force_densest,
    dense_bipartite_subdivision,
    densest_depth1_exact,
    densest_subgraph,
    min_degree_filter,
)
from .treedecomp import TreeDecompositionError, verify_tree_decomposition
from .twreduction import build_tw_reduction, cop_tree_decomposition, pad_formula, tw_assignment_to_model

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from None


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _limits(args) -> SolveLimits:
    return SolveLimits(args.max_vertices, args.max_subsets, args.time_budget)


def _add_limits(p):
    p.add_argument("--max-vertices", type=int, default=SolveLimits.max_vertices)
    p.add_argument("--max-subsets", type=int, default=SolveLimits.max_subsets)
    p.add_argument("--time-budget", type=float, default=SolveLimits.time_budget, help="seconds")


# ---- reduce ---------------------------------------------------------------


def positive_1in3(f) -> Positive1in3Formula:
    """Read a width-3 CNF as a 1-in-3 instance, removing negations if present."""
    if f.clauses and all(len(c) == 3 and len(set(c)) == 3 and min(c) > 0 for c in f.clauses):
        return ensure_min_frequency(Positive1in3Formula(f.num_vars, f.clauses))
    return ensure_min_frequency(eliminate_negations(f)[0])


def parity_document(phi: Positive1in3Formula, r: int) -> GraphDocument:
    red = build_parity_reduction(phi, r)
    prov = {}
    for i, whites in red.cycles.items():
        for w in whites:
            prov[w] = f"x{i}"
    for c, gadget in red.gadgets.items():
        for u in gadget:
            prov[u] = f"C{c}"
    for (u, v), inner in red.chains.items():
        for x in inner:
            prov[x] = f"{u}-{v}"
    prov[red.apex] = "apex"
    meta = {"kind": "parity", "r": r, "mode": red.mode, "target": red.target_density}
    return GraphDocument(red.graph, meta, phi, prov)


def treewidth_document(f) -> GraphDocument:
    f = pad_formula(f)
    red = build_tw_reduction(f)
    prov = {}
    for (row, col), v in red.grid.items():
        prov[v] = f"col{col}"
    for (v, c), d in red.var_gadgets.items():
        for x in d:
            prov[x] = f"x{v}@col{c}"
    for i, gs in red.clause_gadgets.items():
        for d in gs:
            for x in d:
                prov[x] = f"C{i}"
        for side in red.cliques[i]:
            for x in side:
                prov[x] = f"C{i}"
    for (i, v), (pa, pb) in red.connectors.items():
        for x in pa + pb:
            prov[x] = f"x{v}->C{i}"
    for (i, v), links in red.links.items():
        for _, hop in links:
            prov[hop] = f"x{v}->C{i}"
    meta = {"kind": "treewidth", "r": 2, "mode": "shallow", "target": red.rho, "m": red.m}
    return GraphDocument(red.graph, meta, f, prov)


def cmd_reduce(args) -> int:
    f = parse_dimacs_cnf(_read(args.input))
    if args.treewidth:
        doc = treewidth_document(f)
    else:
        if args.parity_r < 1:
            raise UsageError("--parity-r must be at least 1")
        doc = parity_document(positive_1in3(f), args.parity_r)
    _write(emit_graph(doc), args.output)
    print(f"target {doc.meta['target']}", file=sys.stderr)
    return EXIT_YES


# ---- solve / oracle -------------------------------------------------------


def _parse_filter(spec: str | None, g: Graph):
    if spec is None:
        return None
    key, _, val = spec.partition("=")
    if key != "mindeg" or not val.isdigit():
        raise UsageError(f"--nail-filter expects mindeg=K, got {spec!r}")
    return min_degree_filter(g, int(val))


def _decide(value: Fraction, threshold: Fraction | None) -> int:
    return EXIT_YES if threshold is None or value >= threshold else EXIT_NO


def cmd_solve(args) -> int:
    g = load_graph(_read(args.graph)).graph
    if args.mode == "subgraph":
        if args.nail_filter:
            raise UsageError("--nail-filter does not apply to --mode subgraph")
        sub, d = densest_subgraph(g)
        if sub.num_edges != d * len(sub):
            raise AssertionError("densest subgraph witness does not match its density")
        print(f"density {d}")
        _write(emit_graph(GraphDocument(sub)), args.output)
        return _decide(d, args.threshold)
    flt = _parse_filter(args.nail_filter, g)
    code = None
    try:
        found = densest_depth1_exact(g, args.mode, flt, _limits(args))
    except SearchBudgetExceeded as exc:
        found, code = exc.best, EXIT_BUDGET
        print(f"budget exceeded: {exc}", file=sys.stderr)
    if found is None:
        print("density none")
        return code or EXIT_NO
    summary, model = found
    summary = verify_model(g, model)
    print(("best " if code else "density ") + str(summary.density))
    _write(emit_model(model), args.output)
    return code if code is not None else _decide(summary.density, args.threshold)


def cmd_oracle(args) -> int:
    g = load_graph(_read(args.graph)).graph
    try:
        s = brute_force_densest(g, args.depth, args.mode, _limits(args))
    except SearchBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"density {s.density}")
    return _decide(s.density, args.threshold)


# ---- certify --------------------------------------------------------------


def _rebuild(doc: GraphDocument):
    kind = doc.meta.get("kind")
    if doc.formula is None:
        raise UsageError("graph document carries no formula to certify against")
    if kind == "parity":
        red = build_parity_reduction(doc.formula, int(doc.meta["r"]))
    elif kind == "treewidth":
        red = build_tw_reduction(doc.formula)
    else:
        raise UsageError(f"unknown reduction kind {kind!r}")
    if red.graph != doc.graph:
        raise UsageError("graph does not match the reduction of its embedded formula")
    return kind, red


def _parse_choice(s: str | None) -> dict:
    out = {}
    for item in filter(None, (s or "").split(",")):
        c, _, v = item.partition("=")
        if not (c.isdigit() and v.isdigit()):
            raise UsageError(f"--choice expects clause=var pairs, got {item!r}")
        out[int(c)] = int(v)
    return out


def cmd_certify(args) -> int:
    doc = load_graph(_read(args.graph))
    target = Fraction(doc.meta["target"]) if "target" in doc.meta else None
    if args.model:
        model = load_model(_read(args.model))
    else:
        if not args.assignment:
            raise UsageError("certify needs --assignment or --model")
        a = parse_assignment(_read(args.assignment))
        kind, red = _rebuild(doc)
        if kind == "parity":
            model = assignment_to_model(red, a)
        else:
            model = tw_assignment_to_model(red, a, _parse_choice(args.choice))
    s = verify_model(doc.graph, model)
    if args.output:
        _write(emit_model(model), args.output)
    if target is None:
        print(f"density {s.density}")
        return EXIT_YES
    ok = s.density >= target
    print(f"{s.density} {'=' if s.density == target else ('>' if ok else '<')} {target} {'OK' if ok else 'FAIL'}")
    return EXIT_YES if ok else EXIT_NO


# ---- treedecomp / bipartite-sd / generate ---------------------------------


def cmd_treedecomp(args) -> int:
    doc = load_graph(_read(args.graph))
    if args.td:
        td = load_tree_decomposition(_read(args.td))
    else:
        kind, red = _rebuild(doc)
        if kind != "treewidth":
            raise UsageError("decompositions are built for treewidth reductions only; pass --td to check one")
        td = cop_tree_decomposition(red)
    width = verify_tree_decomposition(doc.graph, td)
    if not args.td:
        _write(emit_tree_decomposition(td), args.output)
    print(f"width {width}", file=sys.stderr if not args.td and args.output in (None, "-") else sys.stdout)
    return EXIT_YES


def cmd_bipartite_sd(args) -> int:
    g = load_graph(_read(args.graph)).graph
    tags = set(args.x_tags.split(","))
    xs = {v for v in g.vertices if g.label(v) in tags}
    ys = g.vertices - xs
    code = None
    try:
        res = dense_bipartite_subdivision(xs, ys, g.edges, args.density, _limits(args))
    except SearchBudgetExceeded as exc:
        res, code = exc.best, EXIT_BUDGET
        print(f"budget exceeded: {exc}", file=sys.stderr)
    if res is None:
        return code or EXIT_NO
    print(f"{'yes' if res.decision else 'no'} {res.ratio}")
    print("X' " + " ".join(map(str, sorted_vertices(res.x_prime))))
    print("Y' " + " ".join(map(str, sorted_vertices(res.y_prime))))
    if code is not None:
        return code
    return EXIT_YES if res.decision else EXIT_NO


def cmd_generate(args) -> int:
    from .generators import planted_1in3, random_cnf

    rng = random.Random(args.seed)
    if args.kind == "1in3":
        phi, a = planted_1in3(rng, args.vars, args.clauses)
        from .reductions import CnfFormula

        _write(emit_dimacs_cnf(CnfFormula(phi.num_vars, phi.clauses)), args.output)
        if args.assignment_out:
            lits = [v if a[v] else -v for v in sorted(a)]
            _write("v " + " ".join(map(str, lits)) + " 0\n", args.assignment_out)
    else:
        _write(emit_dimacs_cnf(random_cnf(rng, args.vars, args.clauses)), args.output)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shallowminor", description="Dense shallow topological minors: solvers, reductions, certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", help="DIMACS CNF to a reduction graph document")
    r.add_argument("input", nargs="?", help="DIMACS file (default stdin)")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--parity-r", type=int, metavar="R")
    g.add_argument("--treewidth", action="store_true")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="exact densest depth-one minor or densest subgraph")
    s.add_argument("graph")
    s.add_argument("--mode", choices=(SD1, STM_HALF, "subgraph"), required=True)
    s.add_argument("--nail-filter", metavar="mindeg=K")
    s.add_argument("--threshold", type=_fraction, help="decide density >= threshold")
    s.add_argument("-o", "--output", help="witness document (default stdout)")
    _add_limits(s)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("certify", help="check a witness against the document's target density")
    c.add_argument("graph")
    c.add_argument("--assignment")
    c.add_argument("--choice", help="treewidth only: clause=var,... satisfying literal choices")
    c.add_argument("--model")
    c.add_argument("-o", "--output", help="write the built model")
    c.set_defaults(func=cmd_certify)

    o = sub.add_parser("oracle", help="brute-force densest minor (tiny graphs)")
    o.add_argument("graph")
    o.add_argument("--depth", type=int, default=1)
    o.add_argument("--mode", choices=(*MODES, SD1, STM_HALF), default="shallow")
    o.add_argument("--threshold", type=_fraction)
    _add_limits(o)
    o.set_defaults(func=cmd_oracle, max_vertices=9)

    t = sub.add_parser("treedecomp", help="build and verify, or verify a given, tree decomposition")
    t.add_argument("graph")
    t.add_argument("--td", help="decomposition document to verify instead of building one")
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_treedecomp)

    b = sub.add_parser("bipartite-sd", help="Dense Bipartite Subdivision decision")
    b.add_argument("graph")
    b.add_argument("--x-tags", default="black,gray", help="labels of the X side")
    b.add_argument("--density", type=_fraction, required=True)
    _add_limits(b)
    b.set_defaults(func=cmd_bipartite_sd)

    gen = sub.add_parser("generate", help="seeded random DIMACS instance")
    gen.add_argument("--kind", choices=("1in3", "cnf"), default="1in3")
    gen.add_argument("--vars", type=int, default=6)
    gen.add_argument("--clauses", type=int, default=4)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("-o", "--output")
    gen.add_argument("--assignment-out")
    gen.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (UsageError, DocumentError, FormulaError, GraphError, ModelError, TreeDecompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
