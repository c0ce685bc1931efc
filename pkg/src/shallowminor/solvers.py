"""Exact solvers for dense depth-one minors, plus the baselines they are checked against."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

import networkx as nx
import numpy as np

from . import _kernels
from .graph import Graph, GraphError, Vertex, sorted_vertices
from .matching import SD1, STM_HALF, densest_fixed_nails, model_mode
from .models import SHALLOW, SUBDIVISION, MinorSummary, TopoMinorModel, minor_graph

log = logging.getLogger(__name__)

CHUNK = 1 << 14


@dataclass(frozen=True)
class SolveLimits:
    max_vertices: int = 40
    max_subsets: int = 1 << 26
    time_budget: float = 600.0

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_subsets <= 0 or self.time_budget <= 0:
            raise ValueError("solve limits must be positive")


class SearchBudgetExceeded(RuntimeError):
    """Raised when a search hits its limits; ``best`` holds the best witness so far."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


def min_degree_filter(g: Graph, k: int) -> Callable[[Vertex], bool]:
    """Nail filter keeping vertices of degree at least ``k`` in ``g``."""
    return lambda v: g.degree(v) >= k


def _ratio_better(e1: int, n1: int, m1: int, e2: int, n2: int, m2: int) -> bool:
    """Is (e1 edges on n1 nails, mask m1) preferred over (e2, n2, m2)?"""
    if e2 < 0:
        return e1 >= 0
    lhs, rhs = e1 * n2, e2 * n1
    return lhs > rhs or (lhs == rhs and bool(_kernels._lex_less(m1, m2)))


@dataclass
class _Frame:
    """Kernel-facing view of a graph: sorted ids, bitmask adjacency."""

    ids: list
    index: dict
    adj: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, g: Graph, keep: Iterable[Vertex]) -> "_Frame":
        ids = sorted_vertices(keep)
        if len(ids) > _kernels.MAX_KERNEL_VERTICES:
            raise GraphError(f"{len(ids)} vertices exceed the kernel limit of {_kernels.MAX_KERNEL_VERTICES}")
        index = {v: i for i, v in enumerate(ids)}
        adj = np.zeros(len(ids), np.int64)
        for v, i in index.items():
            m = 0
            for w in g.neighbors(v):
                j = index.get(w)
                if j is not None:
                    m |= 1 << j
            adj[i] = m
        return cls(ids, index, adj)

    def mask(self, vs: Iterable[Vertex]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index[v]
        return m

    def unmask(self, m: int) -> list:
        return [v for i, v in enumerate(self.ids) if (int(m) >> i) & 1]


def _scan(frame: _Frame, cand: list, left_allowed: int, stm: bool, limits: SolveLimits):
    """Chunked subset scan. Returns (mask, edges, size, complete)."""
    cidx = np.array([frame.index[v] for v in cand], np.int64)
    total = 1 << len(cand)
    stop = min(total, limits.max_subsets + 1)
    deadline = time.monotonic() + limits.time_budget
    best = (0, -1, 1)
    lo = 1
    while lo < stop:
        hi = min(stop, lo + CHUNK)
        m, e, sz = _kernels.subset_scan(frame.adj, cidx, np.int64(left_allowed), stm, np.int64(lo), np.int64(hi))
        m, e, sz = int(m), int(e), int(sz)
        if e >= 0 and _ratio_better(e, sz, m, best[1], best[2], best[0]):
            best = (m, e, sz)
        lo = hi
        if time.monotonic() > deadline and lo < total:
            log.info("time budget exhausted after %d of %d subsets", lo, total)
            return (*best, False)
    return (*best, stop == total)


def densest_depth1_exact(
    g: Graph,
    mode: str,
    nail_filter: Callable[[Vertex], bool] | None = None,
    limits: SolveLimits = SolveLimits(),
) -> tuple[MinorSummary, TopoMinorModel]:
    """Densest 1-subdivision (``sd1``) or half-shallow minor (``stm-half``).

    Tries every nonempty subset of the candidate nails (all vertices, or those
    passing ``nail_filter``) and solves each by matching. Ties go to the
    lexicographically smallest nail set. The winner is re-solved through the
    independent fixed-nail path and verified before it is returned.
    """
    model_mode(mode)
    cand = sorted_vertices(v for v in g.vertices if nail_filter is None or nail_filter(v))
    if not cand:
        raise GraphError("no candidate nails")
    if nail_filter is None and len(g) > limits.max_vertices:
        raise GraphError(f"graph has {len(g)} vertices, limit is {limits.max_vertices}")
    cset = set(cand)
    # Only candidates and vertices that can subdivide between two of them matter.
    keep = cset | {v for v in g.vertices if len(g.neighbors(v) & cset) >= 2}
    frame = _Frame.build(g, keep)
    everyone = (1 << len(frame.ids)) - 1
    m, e, sz, complete = _scan(frame, cand, everyone, mode == STM_HALF, limits)
    best = None
    if e >= 0:
        summary, model = densest_fixed_nails(g, frame.unmask(m), mode)
        if summary.edge_count != e:
            raise AssertionError(f"kernel found {e} edges, fixed-nail solver {summary.edge_count}")
        best = (summary, model)
    if not complete:
        raise SearchBudgetExceeded("search budget exceeded", best)
    return best


def _simple_paths(g: Graph, x, y, nails: frozenset, lo: int, hi: int) -> list[tuple]:
    """Simple x-y paths with between lo and hi interior non-nail vertices."""
    out = []

    def extend(path):
        u = path[-1]
        inner = len(path) - 1
        for w in sorted_vertices(g.neighbors(u)):
            if w == y:
                if lo <= inner <= hi:
                    out.append((*path, y))
            elif w not in nails and w not in path and inner < hi:
                extend((*path, w))

    extend((x,))
    return out


def _max_path_system(pairs_paths: list[tuple[tuple, list]]) -> list[tuple]:
    """Largest set of paths, one per pair at most, with disjoint interiors."""
    best: list = []
    k = len(pairs_paths)
    avail = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        avail[i] = avail[i + 1] + (1 if pairs_paths[i][1] else 0)

    def rec(i, used: frozenset, chosen: list):
        nonlocal best
        if len(chosen) + avail[i] <= len(best):
            return
        if i == k:
            best = list(chosen)
            return
        for p in pairs_paths[i][1]:
            inner = p[1:-1]
            if used.isdisjoint(inner):
                chosen.append(p)
                rec(i + 1, used.union(inner), chosen)
                chosen.pop()
        rec(i + 1, used, chosen)

    rec(0, frozenset(), [])
    return best


def brute_force_densest(g: Graph, r: int, mode: str, limits: SolveLimits = SolveLimits(max_vertices=9)) -> MinorSummary:
    """Ground-truth densest r-subdivision / (r/2)-shallow minor by exhaustion.

    ``mode`` is ``"subdivision"`` or ``"shallow"`` (or the depth-one aliases
    ``sd1``/``stm-half`` with r = 1). Every nail set and every internally
    disjoint path system is considered; no matching argument is used.
    """
    if mode == SD1:
        mode = SUBDIVISION
    elif mode == STM_HALF:
        mode = SHALLOW
    if mode not in (SUBDIVISION, SHALLOW):
        raise ValueError(f"unknown mode {mode!r}")
    if len(g) == 0:
        raise GraphError("density undefined")
    if len(g) > limits.max_vertices:
        raise SearchBudgetExceeded(f"graph has {len(g)} vertices, oracle limit is {limits.max_vertices}")
    lo = r if mode == SUBDIVISION else 0
    verts = sorted_vertices(g.vertices)
    deadline = time.monotonic() + limits.time_budget
    best_e, best_n, best_paths, best_nails = -1, 1, [], ()
    seen = 0
    for size in range(1, len(verts) + 1):
        for nails in combinations(verts, size):
            seen += 1
            if seen > limits.max_subsets or time.monotonic() > deadline:
                raise SearchBudgetExceeded("search budget exceeded")
            ns = frozenset(nails)
            pp = [(pair, _simple_paths(g, pair[0], pair[1], ns, lo, r)) for pair in combinations(nails, 2)]
            upper = sum(1 for _, ps in pp if ps)
            if best_e >= 0 and upper * best_n <= best_e * size:
                continue
            paths = _max_path_system([x for x in pp if x[1]])
            if best_e < 0 or len(paths) * best_n > best_e * size:
                best_e, best_n, best_paths, best_nails = len(paths), size, paths, nails
    h = minor_graph(TopoMinorModel(best_nails, best_paths, mode, r))
    return MinorSummary(h, Fraction(best_e, best_n), best_n, best_e)


def _candidate_densities(n: int, m: int) -> list[Fraction]:
    cands = {Fraction(0)}
    for q in range(1, n + 1):
        for p in range(1, min(m, q * (q - 1) // 2) + 1):
            cands.add(Fraction(p, q))
    return sorted(cands)


def _denser_than(g: Graph, order: list, guess: Fraction):
    """Min-cut test: is there a subgraph of density strictly above ``guess``?

    Goldberg's network scaled by the denominator so capacities are integers.
    Returns the source side of a minimum cut when the answer is yes.
    """
    n, m = len(g), g.num_edges
    p, q = guess.numerator, guess.denominator
    net = nx.DiGraph()
    net.add_node("s")
    net.add_node("t")
    for v in order:
        net.add_edge("s", ("v", v), capacity=q * m)
        net.add_edge(("v", v), "t", capacity=q * m + 2 * p - q * g.degree(v))
    for u, v in g.sorted_edges():
        net.add_edge(("v", u), ("v", v), capacity=q)
        net.add_edge(("v", v), ("v", u), capacity=q)
    cut, (src, _) = nx.minimum_cut(net, "s", "t")
    if cut < q * m * n:
        return {x[1] for x in src if x != "s"}
    return None


def densest_subgraph(g: Graph) -> tuple[Graph, Fraction]:
    """Densest subgraph by binary search over candidate fractions.

    The optimum is a fraction with denominator at most |g|, so it is the
    smallest candidate for which the strict min-cut test fails; the witness
    is the min-cut side found at the candidate just below it.
    """
    if len(g) == 0:
        raise GraphError("density undefined")
    order = sorted_vertices(g.vertices)
    cands = _candidate_densities(len(g), g.num_edges)
    lo, hi = 0, len(cands) - 1
    # Invariant: the test fails at cands[hi]; it succeeds at every index below the answer.
    while lo < hi:
        mid = (lo + hi) // 2
        if _denser_than(g, order, cands[mid]) is None:
            hi = mid
        else:
            lo = mid + 1
    best = cands[lo]
    if lo == 0:
        return g.induced([order[0]]), Fraction(0)
    side = _denser_than(g, order, cands[lo - 1])
    sub = g.induced(side)
    got = Fraction(sub.num_edges, len(sub))
    if got != best:
        raise AssertionError(f"min-cut witness has density {got}, expected {best}")
    return sub, best


@dataclass(frozen=True)
class BipartiteSDResult:
    decision: bool
    ratio: Fraction | None
    x_prime: frozenset
    y_prime: frozenset
    assignment: dict


def dense_bipartite_subdivision(
    x_side: Iterable[Vertex],
    y_side: Iterable[Vertex],
    edges: Iterable[tuple],
    d: Fraction,
    limits: SolveLimits = SolveLimits(),
) -> BipartiteSDResult:
    """Decide whether some X' can be smoothed into distinct edges on some Y'
    with |X'| / |Y'| >= d.

    Enumerates Y' and matches X-vertices to pairs of their neighbours inside
    it. The reported witness is the best ratio found, even when it misses d.
    """
    xs, ys = frozenset(x_side), frozenset(y_side)
    if xs & ys:
        raise GraphError("sides overlap")
    g = Graph(xs | ys, edges)
    for u, v in g.edges:
        if (u in xs) == (v in xs):
            raise GraphError(f"edge {sorted_vertices((u, v))} is not between the sides")
    d = Fraction(d)
    cand = sorted_vertices(ys)
    if not cand:
        return BipartiteSDResult(False, None, frozenset(), frozenset(), {})
    if len(cand) > _kernels.MAX_KERNEL_VERTICES:
        raise SearchBudgetExceeded(f"|Y| = {len(cand)} is too large to enumerate")
    keep = ys | {v for v in xs if len(g.neighbors(v)) >= 2}
    frame = _Frame.build(g, keep)
    m, e, sz, complete = _scan(frame, cand, frame.mask(keep - ys), False, limits)
    summary, model = densest_fixed_nails(g.induced(keep), frame.unmask(m), SD1)
    if summary.edge_count != e:
        raise AssertionError(f"kernel found {e}, fixed-nail solver {summary.edge_count}")
    assignment = {p[1]: (p[0], p[2]) for p in model.paths}
    result = BipartiteSDResult(
        Fraction(e, sz) >= d,
        Fraction(e, sz),
        frozenset(assignment),
        frozenset(model.nails),
        assignment,
    )
    if not complete:
        raise SearchBudgetExceeded("search budget exceeded", result)
    return result
