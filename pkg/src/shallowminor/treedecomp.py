"""Tree decompositions and their validity check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, sorted_vertices


class TreeDecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple
    tree_edges: tuple

    def __init__(self, bags: Iterable[Iterable], tree_edges: Iterable[tuple] = ()):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in bags))
        object.__setattr__(self, "tree_edges", tuple(tuple(sorted(e)) for e in tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def _components(nodes: set, adj: dict) -> int:
    seen, comps = set(), 0
    for s in nodes:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in nodes and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def verify_tree_decomposition(g: Graph, t: TreeDecomposition) -> int:
    """Check the decomposition axioms and return the width."""
    k = len(t.bags)
    adj = {i: set() for i in range(k)}
    for i, j in t.tree_edges:
        if not (0 <= i < k and 0 <= j < k) or i == j:
            raise TreeDecompositionError(f"not a tree: bad tree edge ({i}, {j})")
        if j in adj[i]:
            raise TreeDecompositionError(f"not a tree: repeated tree edge ({i}, {j})")
        adj[i].add(j)
        adj[j].add(i)
    if k and (len(t.tree_edges) != k - 1 or _components(set(range(k)), adj) != 1):
        raise TreeDecompositionError("not a tree: bags are not connected acyclically")
    where: dict = {}
    for i, bag in enumerate(t.bags):
        for v in bag:
            if v not in g:
                raise TreeDecompositionError(f"bag {i} holds unknown vertex {v!r}")
            where.setdefault(v, set()).add(i)
    for v in sorted_vertices(g.vertices):
        if v not in where:
            raise TreeDecompositionError(f"vertex not covered: {v!r}")
    for u, v in g.sorted_edges():
        if where[u].isdisjoint(where[v]):
            raise TreeDecompositionError(f"edge not covered: {u!r}-{v!r}")
    for v in sorted_vertices(g.vertices):
        if _components(where[v], adj) != 1:
            raise TreeDecompositionError(f"bags containing {v!r} are disconnected")
    return t.width
