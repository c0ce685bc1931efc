"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

import pytest

from shallowminor.cli import main as cli_main
from shallowminor.generators import planted_1in3, random_graph
from shallowminor.graph import density, is_bipartite, max_degree, petersen_graph, smooth_vertex, subdivide_edge
from shallowminor.io import emit_dimacs_cnf
from shallowminor.matching import SD1, STM_HALF, densest_fixed_nails
from shallowminor.models import verify_model
from shallowminor.reductions import (
    CnfFormula,
    Positive1in3Formula,
    apex_star,
    brute_force_1in3,
    build_parity_reduction,
    eliminate_negations,
    ensure_min_frequency,
    solve_1in3,
)
from shallowminor.solvers import brute_force_densest, densest_depth1_exact, densest_subgraph, min_degree_filter
from shallowminor.treedecomp import verify_tree_decomposition
from shallowminor.twreduction import (
    TD_WIDTH_CONSTANT,
    build_tw_reduction,
    cop_tree_decomposition,
    pad_formula,
    structured_tw_optimum,
    tw_assignment_to_model,
)

RESULTS: dict[int, str] = {}


def record(k: int, ok: bool, detail: str):
    RESULTS[k] = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(RESULTS[k])
    assert ok, RESULTS[k]


def one_in_three_sat(f: CnfFormula) -> bool:
    for bits in product((False, True), repeat=f.num_vars):
        if all(sum(bits[abs(l) - 1] == (l > 0) for l in c) == 1 for c in f.clauses):
            return True
    return False


def cnf_sat(f: CnfFormula) -> dict | None:
    for bits in product((False, True), repeat=f.num_vars):
        a = dict(enumerate(bits, 1))
        if f.satisfied_by(a):
            return a
    return None


# 1 ---------------------------------------------------------------------------


def test_criterion_1_forward_density_r1(tmp_path, capsys):
    rng = random.Random(2024)
    t0 = time.perf_counter()
    checked, bad = 0, []
    while checked < 100:
        phi, a = planted_1in3(rng, rng.randint(3, 8), rng.randint(1, 8))
        if not 3 <= phi.m <= 30:
            continue
        cnf = tmp_path / "phi.cnf"
        cnf.write_text(emit_dimacs_cnf(CnfFormula(phi.num_vars, phi.clauses)))
        (tmp_path / "a.txt").write_text("v " + " ".join(str(v if a[v] else -v) for v in sorted(a)) + " 0\n")
        g = tmp_path / "g.txt"
        assert cli_main(["reduce", "--parity-r", "1", str(cnf), "-o", str(g)]) == 0
        capsys.readouterr()
        code = cli_main(["certify", str(g), "--assignment", str(tmp_path / "a.txt")])
        out = capsys.readouterr().out.strip()
        want = Fraction(5 * phi.m, 2 * phi.m + 1)
        if code != 0 or out != f"{want} = {want} OK":
            bad.append((phi.m, out))
        checked += 1
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 10, f"{checked} certified instances, {len(bad)} mismatches, {dt:.1f}s (limit 10s)")


# 2 ---------------------------------------------------------------------------


def positive_formulas(max_vars: int, max_clauses: int):
    """Every multiset of positive triples using exactly the variables 1..p, p <= max_vars."""
    for p in range(3, max_vars + 1):
        triples = list(combinations(range(1, p + 1), 3))
        for k in range(1, max_clauses + 1):
            for clauses in combinations_with_replacement(triples, k):
                if {v for c in clauses for v in c} == set(range(1, p + 1)):
                    yield Positive1in3Formula(p, clauses)


def hardness_check(phi: Positive1in3Formula) -> tuple[bool, Fraction, bool]:
    red = build_parity_reduction(phi, 1)
    g = red.graph
    summary, model = densest_depth1_exact(g, STM_HALF, min_degree_filter(g, 3))
    verify_model(g, model)
    sat = brute_force_1in3(phi) is not None
    return (summary.density >= red.target_density) == sat, summary.density, sat


def test_criterion_2_hardness_equivalence():
    t0 = time.perf_counter()
    seen, results = set(), []
    for phi in positive_formulas(4, 3):
        padded = ensure_min_frequency(phi)
        if padded.m != 3 or padded.clauses in seen:
            continue
        seen.add(padded.clauses)
        results.append(hardness_check(padded))
    # Wider net: every padded formula with m <= 5 over <= 4 variables, which
    # includes unsatisfiable ones (m = 3 only arises from a single triple).
    extra = []
    for phi in positive_formulas(4, 5):
        padded = ensure_min_frequency(phi)
        if padded.m > 5 or padded.clauses in seen:
            continue
        seen.add(padded.clauses)
        extra.append(hardness_check(padded))
    dt = time.perf_counter() - t0
    ok = all(r[0] for r in results) and all(r[0] for r in extra) and results
    n_unsat = sum(not r[2] for r in results + extra)
    record(
        2,
        bool(ok) and dt < 300,
        f"{len(results)} formulas with m=3 ({sum(r[2] for r in results)} satisfiable), "
        f"plus {len(extra)} with m<=5 ({n_unsat} unsatisfiable overall), all agree; {dt:.1f}s (limit 300s)",
    )


# 3 ---------------------------------------------------------------------------


def test_criterion_3_oracle_equivalence():
    rng = random.Random(3)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(500):
        g = random_graph(rng, rng.randint(1, 7), rng.random())
        for mode in (SD1, STM_HALF):
            s, m = densest_depth1_exact(g, mode)
            if s.density != brute_force_densest(g, 1, mode).density or verify_model(g, m) != s:
                bad += 1
    dt = time.perf_counter() - t0
    record(3, bad == 0 and dt < 300, f"500 graphs x 2 modes, {bad} disagreements, {dt:.1f}s (limit 300s)")


# 4 ---------------------------------------------------------------------------


def test_criterion_4_densest_subgraph():
    rng = random.Random(4)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 10), rng.random())
        sub, d = densest_subgraph(g)
        vs = sorted(g.vertices)
        best = max(density(g.induced(c)) for k in range(1, len(vs) + 1) for c in combinations(vs, k))
        if d != best or density(sub) != d:
            bad += 1
    sub, d = densest_subgraph(petersen_graph())
    dt = time.perf_counter() - t0
    ok = bad == 0 and d == Fraction(3, 2) and dt < 120
    record(4, ok, f"200 graphs, {bad} disagreements, Petersen {d}, {dt:.1f}s (limit 120s)")


# 5 ---------------------------------------------------------------------------

CRIT5_FORMULAS = [
    CnfFormula(4, [(1, 2, 3), (-1, 4, 2)]),
    CnfFormula(4, [(1, -2), (3, 4)]),
    CnfFormula(4, [(-1, -2, -3), (2, -4)]),
    CnfFormula(4, [(1,), (2, 3, 4)]),
]


def test_criterion_5_tw_forward_counts():
    t0 = time.perf_counter()
    lines, literal_ok, padded_ok = [], True, True
    for f in CRIT5_FORMULAS:
        a = cnf_sat(f)
        red = build_tw_reduction(f)
        s = verify_model(red.graph, tw_assignment_to_model(red, a))
        literal_ok &= (s.nail_count, s.edge_count, s.density) == (12, 32, Fraction(8, 3))
        padded_ok &= (s.nail_count, s.edge_count) == (3 * red.m * red.s, 4 * red.m * red.n) and s.density == red.rho
        lines.append(f"{s.nail_count}/{s.edge_count}@m={red.m}")
        # The same formula without clause padding: two columns cannot hold the
        # variable cycles, so the forward model falls short of 32 edges.
        raw = build_tw_reduction(f, pad_clauses_to_admissible=False)
        rs = verify_model(raw.graph, tw_assignment_to_model(raw, a))
        lines.append(f"unpadded {rs.nail_count}/{rs.edge_count}={rs.density}")
    dt = time.perf_counter() - t0
    seen = sorted(set(lines), key=lines.index)
    detail = (
        f"{len(CRIT5_FORMULAS)} formulas, nails/edges {', '.join(seen)}; wanted 12/32 at density 8/3; "
        f"padded counts 3ms/4mn {'hold' if padded_ok else 'fail'} with density 8/3; {dt:.2f}s"
    )
    record(5, literal_ok and padded_ok and dt < 1, detail)


# 6 ---------------------------------------------------------------------------


def all_small_cnfs(num_vars: int = 4, max_clauses: int = 3):
    """Every set of 1..max_clauses distinct clauses; a clause is 1-3 literals on distinct variables."""
    clauses = []
    for w in (1, 2, 3):
        for vs in combinations(range(1, num_vars + 1), w):
            for signs in product((1, -1), repeat=w):
                clauses.append(tuple(v * s for v, s in zip(vs, signs)))
    for k in range(1, max_clauses + 1):
        for cs in combinations(clauses, k):
            yield CnfFormula(num_vars, cs)


def test_criterion_6_structured_soundness():
    t0 = time.perf_counter()
    total = sat_count = bad = 0
    for f in all_small_cnfs():
        red = build_tw_reduction(f)
        value = structured_tw_optimum(red, verify=False).density
        sat = cnf_sat(f) is not None
        sat_count += sat
        if (value == red.rho) != sat or value > red.rho:
            bad += 1
        total += 1
    dt = time.perf_counter() - t0
    record(6, bad == 0 and dt < 120, f"{total} formulas ({sat_count} satisfiable), {bad} mismatches, {dt:.1f}s (limit 120s)")


# 7 ---------------------------------------------------------------------------


def test_criterion_7_tree_decomposition():
    rng = random.Random(7)
    t0 = time.perf_counter()
    worst, bad = Fraction(0), 0
    for _ in range(50):
        n = rng.choice([4, 16])
        m = rng.randint(1, 4)
        clauses = [
            tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), rng.randint(1, 3))) for _ in range(m)
        ]
        red = build_tw_reduction(pad_formula(CnfFormula(n, clauses)))
        w = verify_tree_decomposition(red.graph, cop_tree_decomposition(red))
        worst = max(worst, Fraction(w, red.s))
        bad += w > TD_WIDTH_CONSTANT * red.s
    dt = time.perf_counter() - t0
    record(
        7,
        bad == 0 and dt < 60,
        f"50 decompositions valid, max width/sqrt(n) = {float(worst):.2f} <= c = {TD_WIDTH_CONSTANT}, {dt:.1f}s (limit 60s)",
    )


# 8 ---------------------------------------------------------------------------


def test_criterion_8_property_suites():
    rng = random.Random(8)
    fails: list[str] = []

    # Graph core: subdivide then smooth is the identity.
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 8), 0.5)
        if not g.num_edges:
            continue
        u, v = rng.choice(g.sorted_edges())
        k = rng.randint(1, 3)
        h = subdivide_edge(g, (u, v), k)
        for x in sorted(h.vertices - g.vertices):
            h = smooth_vertex(h, x)
        if h != g:
            fails.append("subdivide/smooth roundtrip")
            break

    # Every solver witness re-verifies.
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 8), rng.random())
        for mode in (SD1, STM_HALF):
            s, m = densest_depth1_exact(g, mode)
            if verify_model(g, m) != s:
                fails.append("exact witness")
            nails = rng.sample(sorted(g.vertices), rng.randint(1, len(g)))
            s, m = densest_fixed_nails(g, nails, mode)
            if verify_model(g, m) != s:
                fails.append("fixed-nail witness")

    # r=1 reductions: bipartite, subcubic after deleting the apex.
    apex_alone = apex_with_chains = True
    for _ in range(30):
        phi, _ = planted_1in3(rng, rng.randint(3, 7), rng.randint(1, 6))
        red = build_parity_reduction(phi, 1)
        if not is_bipartite(red.graph)[0]:
            fails.append("bipartite")
        apex_alone &= max_degree(red.graph.remove_vertices({red.apex})) <= 3
        apex_with_chains &= max_degree(red.graph.remove_vertices(apex_star(red))) <= 3
    if not apex_alone:
        fails.append("subcubic after deleting the apex alone (white vertices keep degree 4)")

    # Eulerian tours: each biclique edge exactly once as a consecutive pair.
    for n in (4, 16, 36):
        red = build_tw_reduction(CnfFormula(n, [(1, -2), (2,)]))
        for i, tour in red.tours.items():
            a, b = red.cliques[i]
            pairs = [frozenset(p) for p in zip(tour, tour[1:])]
            if sorted(map(sorted, pairs)) != sorted(sorted((x, y)) for x in a for y in b):
                fails.append("eulerian")

    # eliminate_negations keeps 1-in-3 satisfiability, n <= 6 (the 5n-variable
    # side is solved by backtracking, itself checked against exhaustion in
    # test_reductions).
    for _ in range(60):
        n = rng.randint(3, 6)
        f = CnfFormula(
            n,
            [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), 3)) for _ in range(rng.randint(1, 3))],
        )
        phi, _ = eliminate_negations(f)
        if (solve_1in3(phi) is not None) != one_in_three_sat(f):
            fails.append("eliminate_negations")

    note = "apex plus its subdivision vertices removed: subcubic" if apex_with_chains else "even the apex star leaves degree > 3"
    record(8, not fails, ("failed: " + "; ".join(sorted(set(fails))) if fails else "all suites pass") + f"; {note}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
