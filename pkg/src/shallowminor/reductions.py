"""Positive 1-in-3SAT formulas and the parity-dependent reductions to dense minors.

Odd depth r: every variable becomes a cycle of white vertices (one per
occurrence), an apex sees every white vertex, and each clause is a gray
vertex wired to one white vertex of each of its variables. Cycle and apex
edges are subdivided r times (black vertices), clause edges (r - 1) / 2 times.

Even depth r: as above, but each clause is a gray triangle whose corners
attach to the clause's variables; triangle edges are subdivided r/2 - 1 times.

A 1-in-3 satisfying assignment yields a minor on the apex plus the white
vertices of false variables with exactly 5m edges on 2m + 1 nails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .graph import Graph, sorted_vertices
from .models import SHALLOW, SUBDIVISION, TopoMinorModel

Assignment = Mapping[int, bool]


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..num_vars; literals are signed ints as in DIMACS."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise FormulaError("negative variable count")
        for i, c in enumerate(self.clauses, 1):
            if not c:
                raise FormulaError(f"clause {i} is empty")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError(f"clause {i}: literal {lit} out of range")

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def satisfied_by(self, a: Assignment) -> bool:
        return all(any(a[abs(l)] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class Positive1in3Formula:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for i, c in enumerate(self.clauses, 1):
            if len(c) != 3 or len(set(c)) != 3:
                raise FormulaError(f"clause {i} must hold 3 distinct variables: {c}")
            for v in c:
                if not 1 <= v <= self.num_vars:
                    raise FormulaError(f"clause {i}: variable {v} out of range")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def frequency(self) -> dict[int, int]:
        freq = {v: 0 for v in range(1, self.num_vars + 1)}
        for c in self.clauses:
            for v in c:
                freq[v] += 1
        return freq


def _check_total(num_vars: int, a: Assignment):
    missing = [v for v in range(1, num_vars + 1) if v not in a]
    if missing:
        raise FormulaError(f"assignment misses variables {missing[:5]}")


def check_1in3(phi: Positive1in3Formula, a: Assignment) -> bool:
    _check_total(phi.num_vars, a)
    return all(sum(bool(a[v]) for v in c) == 1 for c in phi.clauses)


def brute_force_1in3(phi: Positive1in3Formula) -> dict | None:
    """First 1-in-3 satisfying assignment in binary counting order, by exhaustion."""
    for bits in product((False, True), repeat=phi.num_vars):
        a = dict(enumerate(bits, 1))
        if check_1in3(phi, a):
            return a
    return None


def solve_1in3(phi: Positive1in3Formula) -> dict | None:
    """Complete backtracking search with unit propagation for 1-in-3SAT."""
    occurs: dict[int, list] = {v: [] for v in range(1, phi.num_vars + 1)}
    for c in phi.clauses:
        for v in c:
            occurs[v].append(c)

    def propagate(a: dict, queue: list) -> bool:
        while queue:
            v = queue.pop()
            for c in occurs[v]:
                vals = [a.get(x) for x in c]
                trues = vals.count(True)
                if trues > 1:
                    return False
                free = [x for x, val in zip(c, vals) if val is None]
                if trues == 1:
                    for x in free:
                        a[x] = False
                        queue.append(x)
                elif not free:
                    return False
                elif len(free) == 1:
                    a[free[0]] = True
                    queue.append(free[0])
        return True

    def search(a: dict) -> dict | None:
        free = [v for v in range(1, phi.num_vars + 1) if v not in a]
        if not free:
            return a
        v = free[0]
        for val in (True, False):
            b = dict(a)
            b[v] = val
            if propagate(b, [v]):
                got = search(b)
                if got is not None:
                    return got
        return None

    return search({})


def eliminate_negations(f: CnfFormula) -> tuple[Positive1in3Formula, dict]:
    """Rewrite a width-3 formula (1-in-3 semantics) with positive literals only.

    Variable x becomes x+, x-, a_x, b_x, c_x, numbered 5(x-1)+1 .. 5x. The
    clauses {x+, x-, a_x}, {x+, x-, b_x}, {a_x, b_x, c_x} force exactly one
    of x+, x- to be true. Returns the formula and ``x -> (x+, x-, a, b, c)``.
    """
    varmap = {x: tuple(5 * (x - 1) + k for k in range(1, 6)) for x in range(1, f.num_vars + 1)}
    clauses = []
    for i, c in enumerate(f.clauses, 1):
        if len(c) != 3:
            raise FormulaError(f"clause {i} has width {len(c)}, expected 3")
        clauses.append(tuple(varmap[abs(l)][0 if l > 0 else 1] for l in c))
    for x in range(1, f.num_vars + 1):
        xp, xn, a, b, c = varmap[x]
        clauses += [(xp, xn, a), (xp, xn, b), (a, b, c)]
    try:
        return Positive1in3Formula(5 * f.num_vars, clauses), varmap
    except FormulaError as exc:
        raise FormulaError(f"repeated variable inside a clause: {exc}") from None


def ensure_min_frequency(phi: Positive1in3Formula, k: int = 3) -> Positive1in3Formula:
    """Duplicate clauses until every variable occurs at least ``k`` times."""
    clauses = list(phi.clauses)
    freq = phi.frequency()
    for v in range(1, phi.num_vars + 1):
        if freq[v] == 0:
            raise FormulaError(f"unused variable {v}")
        first = next(c for c in clauses if v in c)
        while freq[v] < k:
            clauses.append(first)
            for x in first:
                freq[x] += 1
    return Positive1in3Formula(phi.num_vars, clauses)


@dataclass(frozen=True)
class ReductionOutput:
    """A parity reduction graph with the bookkeeping needed to certify it.

    ``cycles[i]`` lists the white vertices of variable i in cycle order;
    ``gadgets[c]`` the gray vertex (odd r) or triangle (even r) of clause c
    (1-based), ``attachments[c]`` the white vertex each clause variable uses,
    and ``chains[(u, v)]`` the subdivision vertices replacing edge uv.
    """

    graph: Graph
    target_density: Fraction
    r: int
    mode: str
    formula: Positive1in3Formula
    apex: str
    cycles: dict
    gadgets: dict
    attachments: dict
    chains: dict = field(repr=False)

    def route(self, u, v) -> tuple:
        if (u, v) in self.chains:
            return self.chains[(u, v)]
        if (v, u) in self.chains:
            return tuple(reversed(self.chains[(v, u)]))
        raise KeyError(f"no chain between {u} and {v}")

    def colour_counts(self) -> dict:
        out: dict = {}
        for tag in self.graph.labels.values():
            out[tag] = out.get(tag, 0) + 1
        return out


class _Builder:
    def __init__(self):
        self.vertices: list = []
        self.edges: list = []
        self.labels: dict = {}
        self.chains: dict = {}

    def add(self, v, tag):
        self.vertices.append(v)
        self.labels[v] = tag

    def chain(self, u, v, k, tag="black"):
        inner = tuple(f"b:{u}-{v}:{t}" for t in range(1, k + 1))
        for x in inner:
            self.add(x, tag)
        seq = (u, *inner, v)
        self.edges.extend(zip(seq, seq[1:]))
        self.chains[(u, v)] = inner

    def graph(self) -> Graph:
        return Graph(self.vertices, self.edges, self.labels)


def build_parity_reduction(phi: Positive1in3Formula, r: int) -> ReductionOutput:
    if r < 1:
        raise FormulaError("depth r must be at least 1")
    low = [v for v, f in phi.frequency().items() if f < 3]
    if low:
        raise FormulaError(f"variables with frequency below 3: {low[:5]} (run ensure_min_frequency)")
    b = _Builder()
    apex = "a"
    b.add(apex, "apex")
    cycles = {}
    for i, f in phi.frequency().items():
        whites = tuple(f"w{i}.{k}" for k in range(f))
        for w in whites:
            b.add(w, "white")
        cycles[i] = whites
    for i, whites in cycles.items():
        for k, w in enumerate(whites):
            b.chain(w, whites[(k + 1) % len(whites)], r)
    for i, whites in cycles.items():
        for w in whites:
            b.chain(apex, w, r)
    claimed = {i: 0 for i in cycles}
    gadgets, attachments = {}, {}
    for c, clause in enumerate(phi.clauses, 1):
        ws = []
        for i in clause:
            ws.append(cycles[i][claimed[i]])
            claimed[i] += 1
        attachments[c] = tuple(ws)
        if r % 2:
            u = f"u{c}"
            b.add(u, "gray")
            for w in ws:
                b.chain(w, u, (r - 1) // 2)
            gadgets[c] = (u,)
        else:
            tri = tuple(f"u{c}.{i}" for i in clause)
            for u, w in zip(tri, ws):
                b.add(u, "gray")
                b.edges.append((u, w))
            for x in range(3):
                b.chain(tri[x], tri[(x + 1) % 3], r // 2 - 1)
            gadgets[c] = tri
    m = phi.m
    return ReductionOutput(
        graph=b.graph(),
        target_density=Fraction(5 * m, 2 * m + 1),
        r=r,
        mode=SUBDIVISION if r % 2 else SHALLOW,
        formula=phi,
        apex=apex,
        cycles=cycles,
        gadgets=gadgets,
        attachments=attachments,
        chains=b.chains,
    )


def assignment_to_model(red: ReductionOutput, a: Assignment) -> TopoMinorModel:
    """Forward-direction witness: drop the cycles of true variables and
    smooth everything else onto the apex and the remaining white vertices."""
    if not check_1in3(red.formula, a):
        raise FormulaError("assignment not 1-in-3 satisfying")
    nails = {red.apex}
    paths = []
    for i, whites in red.cycles.items():
        if a[i]:
            continue
        nails.update(whites)
        for k, w in enumerate(whites):
            nxt = whites[(k + 1) % len(whites)]
            paths.append((w, *red.route(w, nxt), nxt))
            paths.append((red.apex, *red.route(red.apex, w), w))
    for c, clause in enumerate(red.formula.clauses, 1):
        ends = [(i, u, w) for i, u, w in zip(clause, _corners(red, c), red.attachments[c]) if not a[i]]
        (_, u1, w1), (_, u2, w2) = ends
        if red.r % 2:
            u = u1
            paths.append((w1, *red.route(w1, u), u, *red.route(u, w2), w2))
        else:
            paths.append((w1, u1, *red.route(u1, u2), u2, w2))
    return TopoMinorModel(nails, paths, SHALLOW, red.r)


def _corners(red: ReductionOutput, c: int) -> tuple:
    g = red.gadgets[c]
    return g * 3 if len(g) == 1 else g


def apex_star(red: ReductionOutput) -> set:
    """The apex together with the subdivision vertices on its edges."""
    out = {red.apex}
    for (u, v), inner in red.chains.items():
        if red.apex in (u, v):
            out.update(inner)
    return out


def all_assignments(n: int) -> Iterable[dict]:
    for bits in product((False, True), repeat=n):
        yield dict(enumerate(bits, 1))


def white_vertices(red: ReductionOutput) -> list:
    return sorted_vertices(v for v, t in red.graph.labels.items() if t == "white")
