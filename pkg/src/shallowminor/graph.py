"""Immutable simple graphs with subdivision, smoothing and exact density."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

Vertex = Hashable
Edge = frozenset

# Role tags a vertex label may carry. The first block colours the parity
# reductions, the second names the parts of the treewidth construction.
ROLE_TAGS = frozenset(
    {
        "white",
        "gray",
        "black",
        "apex",
        "nail-candidate",
        "grid",
        "clique-a",
        "clique-b",
        "var-gadget",
        "clause-gadget",
        "link",
        "connector",
    }
)


class GraphError(ValueError):
    """Raised when a graph edit or query violates its precondition."""


def vkey(v: Vertex) -> tuple:
    """Sort key giving a total order over int and str vertex ids."""
    if isinstance(v, bool):
        return (2, str(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    return (2, repr(v))


def sorted_vertices(vs: Iterable[Vertex]) -> list:
    return sorted(vs, key=vkey)


def edge_key(e: Iterable[Vertex]) -> tuple:
    u, v = sorted_vertices(e)
    return (vkey(u), vkey(v))


def ordered_edge(e: Iterable[Vertex]) -> tuple:
    u, v = sorted_vertices(e)
    return (u, v)


class Graph:
    """An undirected simple graph. Edits return new graphs.

    ``labels`` optionally maps vertices to one of :data:`ROLE_TAGS`.
    """

    __slots__ = ("_vertices", "_edges", "_adj", "_labels", "_hash")

    def __init__(
        self,
        vertices: Iterable[Vertex] = (),
        edges: Iterable[Iterable[Vertex]] = (),
        labels: Mapping[Vertex, str] | None = None,
    ):
        vs = frozenset(vertices)
        adj: dict = {v: set() for v in vs}
        es = set()
        for e in edges:
            e = frozenset(e)
            if len(e) != 2:
                raise GraphError(f"self-loop or malformed edge {sorted_vertices(e)}")
            u, v = e
            if u not in adj or v not in adj:
                raise GraphError(f"edge endpoint not a vertex: {ordered_edge(e)}")
            es.add(e)
            adj[u].add(v)
            adj[v].add(u)
        lab = dict(labels or {})
        for v, tag in lab.items():
            if v not in adj:
                raise GraphError(f"label on unknown vertex {v!r}")
            if tag not in ROLE_TAGS:
                raise GraphError(f"undeclared role tag {tag!r}")
        self._vertices = vs
        self._edges = frozenset(es)
        self._adj = {v: frozenset(n) for v, n in adj.items()}
        self._labels = lab
        self._hash = None

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[Vertex]], vertices=(), labels=None) -> "Graph":
        edges = [tuple(e) for e in edges]
        vs = set(vertices)
        for e in edges:
            vs.update(e)
        return cls(vs, edges, labels)

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def labels(self) -> Mapping[Vertex, str]:
        return dict(self._labels)

    def label(self, v: Vertex) -> str | None:
        return self._labels.get(v)

    def neighbors(self, v: Vertex) -> frozenset:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return u in self._adj and v in self._adj[u]

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v) -> bool:
        return v in self._adj

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._edges == other._edges
            and self._labels == other._labels
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vertices, self._edges, frozenset(self._labels.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self)}, |E|={self.num_edges})"

    def sorted_edges(self) -> list[tuple]:
        return sorted((ordered_edge(e) for e in self._edges), key=lambda e: (vkey(e[0]), vkey(e[1])))

    def induced(self, keep: Iterable[Vertex]) -> "Graph":
        keep = frozenset(keep) & self._vertices
        return Graph(
            keep,
            (e for e in self._edges if e <= keep),
            {v: t for v, t in self._labels.items() if v in keep},
        )

    def remove_vertices(self, drop: Iterable[Vertex]) -> "Graph":
        return self.induced(self._vertices - frozenset(drop))

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "Graph":
        f = lambda v: mapping.get(v, v)  # noqa: E731
        return Graph(
            (f(v) for v in self._vertices),
            ((f(u), f(v)) for u, v in self._edges),
            {f(v): t for v, t in self._labels.items()},
        )

    def with_labels(self, labels: Mapping[Vertex, str]) -> "Graph":
        return Graph(self._vertices, self._edges, labels)


def _fresh_ids(g: Graph, u: Vertex, v: Vertex, k: int) -> list:
    if all(isinstance(x, int) and not isinstance(x, bool) for x in g.vertices):
        start = max(g.vertices, default=-1) + 1
        return list(range(start, start + k))
    a, b = ordered_edge((u, v))
    out = []
    for t in range(1, k + 1):
        cand = f"{a}~{b}#{t}"
        while cand in g or cand in out:
            cand += "'"
        out.append(cand)
    return out


def subdivide_edge(g: Graph, e: Iterable[Vertex], k: int) -> Graph:
    """Replace edge ``e`` by a path with ``k`` fresh interior vertices.

    Fresh ids are consecutive integers after the current maximum when all ids
    are integers, otherwise strings ``"u~v#t"`` for the sorted endpoints.
    """
    e = frozenset(e)
    if k < 0:
        raise GraphError("subdivision count must be non-negative")
    if e not in g.edges:
        raise GraphError("no such edge")
    if k == 0:
        return g
    u, v = ordered_edge(e)
    fresh = _fresh_ids(g, u, v, k)
    chain = [u, *fresh, v]
    edges = set(g.edges)
    edges.discard(e)
    edges.update(frozenset(p) for p in zip(chain, chain[1:]))
    return Graph(g.vertices | frozenset(fresh), edges, g.labels)


def smooth_vertex(g: Graph, v: Vertex) -> Graph:
    if v not in g:
        raise GraphError(f"no such vertex {v!r}")
    nb = g.neighbors(v)
    if len(nb) != 2:
        raise GraphError("not a degree-2 vertex")
    x, y = nb
    if g.has_edge(x, y):
        raise GraphError("smoothing would create a parallel edge")
    edges = {e for e in g.edges if v not in e}
    edges.add(frozenset((x, y)))
    labels = g.labels
    labels.pop(v, None)
    return Graph(g.vertices - {v}, edges, labels)


def density(g: Graph) -> Fraction:
    if len(g) == 0:
        raise GraphError("density undefined")
    return Fraction(g.num_edges, len(g))


def is_bipartite(g: Graph) -> tuple[bool, dict]:
    """2-colour ``g`` by BFS. Returns (ok, colouring)."""
    colour: dict = {}
    for s in sorted_vertices(g.vertices):
        if s in colour:
            continue
        colour[s] = 0
        queue = [s]
        while queue:
            u = queue.pop()
            for w in g.neighbors(u):
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return False, colour
    return True, colour


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


def complete_graph(n: int) -> Graph:
    return Graph(range(n), ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(range(n), ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(range(n), ((i, i + 1) for i in range(n - 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(range(10), outer + spokes + inner)
