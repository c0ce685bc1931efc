"""CNF-SAT to dense 1-shallow topological minor, with treewidth O(sqrt n).

Layout, with s = sqrt(n) even:

* a grid R of s rows (0-based) by m columns (1-based); variable l walks one
  vertex per column, ``X_l[j] = R[(l-1 + j*((l-1)//s)) mod s, j]``;
* a decision gadget (path dL-dC-dR) on every cyclic triple
  ``X_l[j-1], X_l[j], X_l[j+1]``; smoothing dL,dC gives the left edge,
  dC,dR the right one, so a uniform choice closes X_l into a cycle;
* per clause i a biclique side pair A_i, B_i of size s, an Eulerian tour of
  K_{s,s} starting at A_i[s], and decision gadgets on its consecutive
  triples (no wrap), which can realise every biclique edge but one;
* every variable owns one (A_i[j], B_i[k]) pair per clause, joined to
  X_l[i] by 3-edge paths; a literal of l in clause i links dL (positive) or
  dR (negative) of l's gadget at column i to B_i[k] directly and to A_i[j]
  through one hop vertex, which supplies the missing biclique edge when the
  literal is true.

With every grid, A and B vertex as a nail, a satisfying assignment gives
4mn edges on 3ms nails, density 4s/3.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .graph import Graph
from .models import SHALLOW, TopoMinorModel, verify_model
from .reductions import Assignment, CnfFormula, FormulaError
from .solvers import SearchBudgetExceeded
from .treedecomp import TreeDecomposition

TAUTOLOGY = (1, -1)

# Width bound of cop_tree_decomposition: width <= TD_WIDTH_CONSTANT * sqrt(n) - 1.
TD_WIDTH_CONSTANT = 7


def side_length(n: int) -> int:
    """Smallest even s >= 2 with s*s >= n."""
    s = max(2, math.isqrt(max(n, 1) - 1) + 1)
    return s + (s % 2)


def pad_formula(f: CnfFormula) -> CnfFormula:
    """Append clause-free dummy variables until sqrt(num_vars) is an even integer."""
    s = side_length(f.num_vars)
    return CnfFormula(s * s, f.clauses)


def admissible_clause_count(m: int, s: int) -> bool:
    """Do m columns give distinct wrap-around grid edges for every variable?"""
    return m >= 3 and math.gcd(m - 1, s) == 1


def pad_clauses(f: CnfFormula) -> CnfFormula:
    """Append tautologies (x1 or not x1) until the column count is admissible."""
    s = math.isqrt(f.num_vars)
    clauses = list(f.clauses)
    while not admissible_clause_count(len(clauses), s):
        clauses.append(TAUTOLOGY)
    return CnfFormula(f.num_vars, clauses)


def eulerian_biclique_tour(a: tuple, b: tuple) -> tuple:
    """Closed Eulerian tour of the biclique on sides ``a``, ``b`` (equal, even size).

    Hierholzer's algorithm from ``a[-1]`` with neighbours in index order,
    oriented so that the tour continues with ``b[0]``.
    """
    adj = {v: deque(b) for v in a}
    adj.update({v: deque(a) for v in b})
    used = set()
    stack, circuit = [a[-1]], []
    while stack:
        v = stack[-1]
        while adj[v] and frozenset((v, adj[v][0])) in used:
            adj[v].popleft()
        if adj[v]:
            w = adj[v].popleft()
            used.add(frozenset((v, w)))
            stack.append(w)
        else:
            circuit.append(stack.pop())
    if circuit[1] != b[0]:
        circuit.reverse()
    return tuple(circuit)


@dataclass(frozen=True)
class TwReduction:
    graph: Graph
    n: int
    m: int
    s: int
    rho: Fraction
    grid: dict
    sequences: dict
    var_gadgets: dict
    var_gadget_columns: dict
    clause_gadgets: dict
    cliques: dict
    tours: dict
    pair_assignment: dict
    connectors: dict
    links: dict
    source_cnf: CnfFormula
    cnf: CnfFormula = field(repr=False)

    def column(self, j: int) -> list:
        return [self.grid[(row, j)] for row in range(self.s)]

    def pair_vertices(self, i: int, var: int) -> tuple:
        j, k = self.pair_assignment[i][var]
        a, b = self.cliques[i]
        return a[j - 1], b[k - 1]

    @property
    def nail_candidates(self) -> set:
        out = set(self.grid.values())
        for a, b in self.cliques.values():
            out.update(a)
            out.update(b)
        return out


def sequence_row(var: int, col: int, s: int) -> int:
    i = var - 1
    return (i + col * (i // s)) % s


def build_tw_reduction(f: CnfFormula, pad_clauses_to_admissible: bool = True) -> TwReduction:
    s = math.isqrt(f.num_vars)
    if s * s != f.num_vars or s % 2 or s == 0:
        raise FormulaError(f"sqrt(n) must be an even integer, got n = {f.num_vars} (run pad_formula)")
    source = f
    if pad_clauses_to_admissible:
        f = pad_clauses(f)
    n, m = f.num_vars, len(f.clauses)
    verts, edges, labels = [], [], {}

    def add(v, tag):
        verts.append(v)
        labels[v] = tag

    def path(seq):
        edges.extend(zip(seq, seq[1:]))

    grid = {}
    for col in range(1, m + 1):
        for row in range(s):
            grid[(row, col)] = f"R{row}.{col}"
            add(grid[(row, col)], "grid")
    seqs = {(v, c): grid[(sequence_row(v, c, s), c)] for v in range(1, n + 1) for c in range(1, m + 1)}

    def prev(c):
        return m if c == 1 else c - 1

    def nxt(c):
        return 1 if c == m else c + 1

    var_gadgets, var_cols = {}, {}
    for v in range(1, n + 1):
        for c in range(1, m + 1):
            d = (f"D{v}.{c}.L", f"D{v}.{c}.C", f"D{v}.{c}.R")
            for x in d:
                add(x, "var-gadget")
            cols = (prev(c), c, nxt(c))
            path(d)
            for x, cc in zip(d, cols):
                edges.append((x, seqs[(v, cc)]))
            var_gadgets[(v, c)] = d
            var_cols[(v, c)] = cols

    cliques, tours, clause_gadgets, pairs, connectors, links = {}, {}, {}, {}, {}, {}
    for i, clause in enumerate(f.clauses, 1):
        a = tuple(f"A{i}.{j}" for j in range(1, s + 1))
        b = tuple(f"B{i}.{k}" for k in range(1, s + 1))
        for x in a:
            add(x, "clique-a")
        for x in b:
            add(x, "clique-b")
        cliques[i] = (a, b)
        tour = eulerian_biclique_tour(a, b)
        tours[i] = tour
        gs = []
        for t in range(len(tour) - 2):
            d = (f"Q{i}.{t}.L", f"Q{i}.{t}.C", f"Q{i}.{t}.R")
            for x in d:
                add(x, "clause-gadget")
            path(d)
            for x, y in zip(d, tour[t : t + 3]):
                edges.append((x, y))
            gs.append(d)
        clause_gadgets[i] = tuple(gs)
        pairs[i] = {}
        for v in range(1, n + 1):
            blk, q = divmod(v - 1, s)
            j, k = blk + 1, (q + (i + 1) * blk) % s + 1
            pairs[i][v] = (j, k)
            x = seqs[(v, i)]
            pa = (f"P{i}.{v}.a1", f"P{i}.{v}.a2")
            pb = (f"P{i}.{v}.b1", f"P{i}.{v}.b2")
            for y in pa + pb:
                add(y, "connector")
            path((x, *pa, a[j - 1]))
            path((x, *pb, b[k - 1]))
            connectors[(i, v)] = (pa, pb)
        for lit in dict.fromkeys(clause):
            v = abs(lit)
            side = "L" if lit > 0 else "R"
            j, k = pairs[i][v]
            dl, _, dr = var_gadgets[(v, i)]
            d = dl if lit > 0 else dr
            hop = f"H{i}.{v}.{side}"
            add(hop, "link")
            edges.append((d, b[k - 1]))
            path((d, hop, a[j - 1]))
            links.setdefault((i, v), []).append((side, hop))

    g = Graph(verts, edges, labels)
    return TwReduction(
        graph=g,
        n=n,
        m=m,
        s=s,
        rho=Fraction(4 * s, 3),
        grid=grid,
        sequences=seqs,
        var_gadgets=var_gadgets,
        var_gadget_columns=var_cols,
        clause_gadgets=clause_gadgets,
        cliques=cliques,
        tours=tours,
        pair_assignment=pairs,
        connectors=connectors,
        links={k: tuple(v) for k, v in links.items()},
        source_cnf=source,
        cnf=f,
    )


def _tour_position(red: TwReduction, i: int, var: int) -> int:
    a, b = red.pair_vertices(i, var)
    tour = red.tours[i]
    for p in range(len(tour) - 1):
        if {tour[p], tour[p + 1]} == {a, b}:
            return p
    raise AssertionError(f"pair of variable {var} missing from tour of clause {i}")


def structured_model(red: TwReduction, config: Assignment, placements: dict) -> TopoMinorModel:
    """Model for uniform variable configurations (True = right) and, per
    clause, ``(p, link)``: the tour edge p left to the link, or ``None`` to
    leave edge p unrealised."""
    paths, seen = [], set()
    for (v, c), (dl, dc, dr) in red.var_gadgets.items():
        pc, cc, nc = red.var_gadget_columns[(v, c)]
        x = red.sequences
        if config.get(v, False):
            p = (x[(v, cc)], dc, dr, x[(v, nc)])
        else:
            p = (x[(v, pc)], dl, dc, x[(v, cc)])
        # Colliding gadgets (too few columns) would repeat a grid pair.
        if frozenset((p[0], p[-1])) not in seen:
            seen.add(frozenset((p[0], p[-1])))
            paths.append(p)
    for i, tour in red.tours.items():
        p, link = placements[i]
        for t, (dl, dc, dr) in enumerate(red.clause_gadgets[i]):
            if t < p:
                paths.append((tour[t], dl, dc, tour[t + 1]))
            else:
                paths.append((tour[t + 1], dc, dr, tour[t + 2]))
        if link is not None:
            v, side, hop = link
            dl, _, dr = red.var_gadgets[(v, i)]
            a, b = red.pair_vertices(i, v)
            paths.append((a, hop, dl if side == "L" else dr, b))
        for v in range(1, red.n + 1):
            a, b = red.pair_vertices(i, v)
            (a1, a2), (b1, b2) = red.connectors[(i, v)]
            x = red.sequences[(v, i)]
            paths.append((x, a1, a2, a))
            paths.append((x, b1, b2, b))
    return TopoMinorModel(red.nail_candidates, paths, SHALLOW, 2)


def _free_links(red: TwReduction, i: int, config: Assignment) -> list:
    """Links of clause i whose gadget end is not smoothed under ``config``."""
    out = []
    for v in sorted({v for (ci, v) in red.links if ci == i}):
        for side, hop in red.links[(i, v)]:
            # Right configuration smooths dC, dR and leaves dL free.
            if (side == "L") == bool(config.get(v, False)):
                out.append((v, side, hop))
    return out


def tw_assignment_to_model(red: TwReduction, a: Assignment, clause_choice: dict | None = None) -> TopoMinorModel:
    """Forward-direction witness for a satisfying assignment.

    ``clause_choice`` maps source clause index (1-based) to a variable whose
    literal in that clause ``a`` makes true; missing entries (and the padding
    tautologies) take the first such literal.
    """
    clause_choice = dict(clause_choice or {})
    full = {v: bool(a.get(v, False)) for v in range(1, red.n + 1)}
    placements = {}
    for i, clause in enumerate(red.cnf.clauses, 1):
        true_vars = [abs(l) for l in clause if full[abs(l)] == (l > 0)]
        if not true_vars:
            raise FormulaError(f"assignment does not satisfy clause {i}")
        v = clause_choice.get(i, true_vars[0])
        if v not in true_vars:
            raise FormulaError(f"variable {v} does not satisfy clause {i}")
        side = "L" if full[v] else "R"
        hop = next(h for sd, h in red.links[(i, v)] if sd == side)
        placements[i] = (_tour_position(red, i, v), (v, side, hop))
    return structured_model(red, full, placements)


@dataclass(frozen=True)
class StructuredOptimum:
    density: Fraction
    edges: int
    nails: int
    config: dict
    placements: dict
    model: TopoMinorModel


def structured_tw_optimum(red: TwReduction, max_configs: int = 1 << 20, verify: bool = True) -> StructuredOptimum:
    """Best 1-STM over uniform variable configurations and missing-edge placements.

    Configurations run in binary counting order (variable 1 most significant,
    False first); the first best one wins. The winner is rebuilt as an
    explicit model and re-verified.
    """
    if 1 << red.n > max_configs:
        raise SearchBudgetExceeded(f"2^{red.n} configurations exceed the budget of {max_configs}")
    x = red.sequences
    left_edges, right_edges = {}, {}
    for (v, c), cols in red.var_gadget_columns.items():
        pc, cc, nc = cols
        left_edges.setdefault(v, []).append(frozenset((x[(v, pc)], x[(v, cc)])))
        right_edges.setdefault(v, []).append(frozenset((x[(v, cc)], x[(v, nc)])))
    connector_pairs = set()
    for i in red.tours:
        for v in range(1, red.n + 1):
            a, b = red.pair_vertices(i, v)
            connector_pairs.add(frozenset((x[(v, i)], a)))
            connector_pairs.add(frozenset((x[(v, i)], b)))
    nails = len(red.nail_candidates)
    positions = {(i, v): _tour_position(red, i, v) for (i, v) in red.links}
    best = None
    for bits in product((False, True), repeat=red.n):
        config = dict(enumerate(bits, 1))
        grid_edges = set()
        for v in range(1, red.n + 1):
            grid_edges.update(right_edges[v] if config[v] else left_edges[v])
        edges = len(grid_edges) + len(connector_pairs)
        placements = {}
        for i, tour in red.tours.items():
            free = _free_links(red, i, config)
            if free:
                link = free[0]
                placements[i] = (positions[(i, link[0])], link)
                edges += len(tour) - 1
            else:
                placements[i] = (0, None)
                edges += len(tour) - 2
        if best is None or edges > best[0]:
            best = (edges, config, placements)
    edges, config, placements = best
    model = structured_model(red, config, placements)
    if verify:
        summary = verify_model(red.graph, model)
        if summary.edge_count != edges:
            raise AssertionError(f"counted {edges} edges, model has {summary.edge_count}")
    return StructuredOptimum(Fraction(edges, nails), edges, nails, config, placements, model)


def structured_tw_search(red: TwReduction, max_configs: int = 1 << 20) -> Fraction:
    return structured_tw_optimum(red, max_configs).density


def cop_tree_decomposition(red: TwReduction) -> TreeDecomposition:
    """Path of column bags with clause bags and gadget leaves hanging off.

    Columns 1 and 2 stay in every main bag; main bag j (2..m) adds columns
    j-1, j, j+1 (m stops at m-1, m). Both wrap-around gadgets live under the
    last main bag. Clause i's bag extends the main bag of column i (the last
    one for i = 1) with A_i and B_i.
    """
    m = red.m
    col = {j: set(red.column(j)) for j in range(1, m + 1)}
    base = col[1] | col.get(2, set())
    mains = list(range(2, m + 1)) or [1]
    bags, tedges = [], []
    main_index = {}
    for j in mains:
        bag = set(base)
        for k in (j - 1, j, j + 1):
            if 1 <= k <= m:
                bag |= col[k]
        if bags:
            tedges.append((len(bags) - 1, len(bags)))
        main_index[j] = len(bags)
        bags.append(bag)
    clause_index = {}
    for i in range(1, m + 1):
        home = main_index[i] if i in main_index else main_index[mains[-1]]
        a, b = red.cliques[i]
        clause_index[i] = len(bags)
        tedges.append((home, len(bags)))
        bags.append(bags[home] | set(a) | set(b))

    def leaf(parent, bag):
        tedges.append((parent, len(bags)))
        bags.append(set(bag))

    for (v, c), d in red.var_gadgets.items():
        bag = set(d) | {red.sequences[(v, k)] for k in red.var_gadget_columns[(v, c)]}
        for side, hop in red.links.get((c, v), ()):
            bag |= {hop, *red.pair_vertices(c, v)}
        leaf(clause_index[c], bag)
    for i, tour in red.tours.items():
        for t, d in enumerate(red.clause_gadgets[i]):
            leaf(clause_index[i], set(d) | set(tour[t : t + 3]))
        for v in range(1, red.n + 1):
            a, b = red.pair_vertices(i, v)
            (a1, a2), (b1, b2) = red.connectors[(i, v)]
            xv = red.sequences[(v, i)]
            leaf(clause_index[i], {xv, a1, a2, a})
            leaf(clause_index[i], {xv, b1, b2, b})
    return TreeDecomposition(bags, tedges)
