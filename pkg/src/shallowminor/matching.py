"""Fixed-nail densest depth-one minors via bipartite matching.

With the nail set fixed, every minor edge of a 1-subdivision is a non-nail
vertex adjacent to both of its nails, and distinct edges need distinct
subdividers. The densest minor on those nails is therefore a maximum
matching between non-nails and nail pairs. For half-shallow minors, nail
pairs already adjacent in the graph are taken as direct edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .graph import Graph, GraphError, Vertex, sorted_vertices, vkey
from .models import SHALLOW, SUBDIVISION, MinorSummary, TopoMinorModel, verify_model

SD1 = "sd1"
STM_HALF = "stm-half"
DEPTH1_MODES = (SD1, STM_HALF)


def model_mode(mode: str) -> tuple[str, int]:
    """(model mode, depth) for a depth-one solver mode."""
    if mode == SD1:
        return SUBDIVISION, 1
    if mode == STM_HALF:
        return SHALLOW, 1
    raise ValueError(f"unknown depth-one mode {mode!r}")


def _pair(x, y) -> tuple:
    return (x, y) if vkey(x) <= vkey(y) else (y, x)


def _pair_key(p: tuple) -> tuple:
    return (vkey(p[0]), vkey(p[1]))


@dataclass(frozen=True)
class AuxBipartite:
    """Non-nails on the left, nail pairs on the right.

    ``edges[v]`` lists the pairs ``v`` can be smoothed into, sorted.
    ``forced_pairs`` are adjacent nail pairs (half-shallow mode only); they are
    realised directly and left out of the matchable right side.
    """

    left: tuple
    right: tuple
    edges: dict
    forced_pairs: tuple

    def degree(self, v) -> int:
        return len(self.edges.get(v, ()))


def build_aux_graph(g: Graph, nails: Iterable[Vertex], mode: str) -> AuxBipartite:
    nails = frozenset(nails)
    model_mode(mode)
    missing = nails - g.vertices
    if missing:
        raise GraphError(f"nails not in graph: {sorted_vertices(missing)}")
    ordered = sorted_vertices(nails)
    forced = []
    right = []
    for x, y in combinations(ordered, 2):
        if mode == STM_HALF and g.has_edge(x, y):
            forced.append((x, y))
        else:
            right.append((x, y))
    forced_set = set(forced)
    left = tuple(sorted_vertices(g.vertices - nails))
    edges = {}
    for v in left:
        nb = sorted_vertices(g.neighbors(v) & nails)
        cand = [p for p in combinations(nb, 2) if p not in forced_set]
        if cand:
            edges[v] = tuple(cand)
    return AuxBipartite(left, tuple(right), edges, tuple(forced))


def max_bipartite_matching(b: AuxBipartite) -> set:
    """Maximum-cardinality matching as a set of ``(left, pair)`` tuples.

    Kuhn's algorithm over left vertices in sorted order. An augmenting path
    never unmatches a left vertex, so the matched left set is the greedy
    (lexicographically smallest) basis of the transversal matroid.
    """
    owner: dict = {}
    assigned: dict = {}
    for u in b.left:
        if not b.edges.get(u):
            continue
        seen = set()
        stack = [(u, iter(b.edges[u]))]
        chosen = []
        found = False
        while stack:
            w, it = stack[-1]
            p = next(it, None)
            if p is None:
                stack.pop()
                if chosen and len(chosen) > len(stack):
                    chosen.pop()
                continue
            if p in seen:
                continue
            seen.add(p)
            if len(chosen) == len(stack):
                chosen[-1] = p
            else:
                chosen.append(p)
            if p not in owner:
                found = True
                break
            stack.append((owner[p], iter(b.edges[owner[p]])))
        if found:
            for (w, _), p in zip(stack, chosen):
                owner[p] = w
                assigned[w] = p
    return {(w, p) for w, p in assigned.items()}


def densest_fixed_nails(g: Graph, nails: Iterable[Vertex], mode: str) -> tuple[MinorSummary, TopoMinorModel]:
    """Densest depth-one minor whose nail set is exactly ``nails``."""
    nails = frozenset(nails)
    if not nails:
        raise GraphError("empty nail set")
    aux = build_aux_graph(g, nails, mode)
    matching = max_bipartite_matching(aux)
    paths = [tuple(p) for p in aux.forced_pairs]
    paths += [(p[0], v, p[1]) for v, p in matching]
    mm, depth = model_mode(mode)
    model = TopoMinorModel(nails, paths, mm, depth)
    summary = verify_model(g, model)
    assert summary.edge_count == len(matching) + len(aux.forced_pairs)
    return summary, model


def fixed_nails_density(g: Graph, nails: Iterable[Vertex], mode: str) -> Fraction:
    return densest_fixed_nails(g, nails, mode)[0].density
