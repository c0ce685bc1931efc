"""Topological-minor witnesses: nails plus internally disjoint paths."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import Graph, Vertex, edge_key, sorted_vertices, vkey

SUBDIVISION = "subdivision"
SHALLOW = "shallow"
MODES = (SUBDIVISION, SHALLOW)


class ModelError(ValueError):
    """A model violates one of its structural conditions."""


def _orient(path: tuple) -> tuple:
    if vkey(path[-1]) < vkey(path[0]):
        return tuple(reversed(path))
    return tuple(path)


def _path_order(path: tuple) -> tuple:
    return (vkey(path[0]), vkey(path[-1]), tuple(vkey(v) for v in path))


@dataclass(frozen=True, init=False)
class TopoMinorModel:
    """Nails and the vertex sequences realising each minor edge.

    ``mode`` is ``"subdivision"`` (every path has exactly ``depth`` interior
    vertices) or ``"shallow"`` (between 0 and ``depth``). Paths are stored
    oriented from the smaller endpoint and sorted, so two models listing the
    same paths in any order compare equal.
    """

    nails: frozenset
    paths: tuple
    mode: str = SHALLOW
    depth: int = 1

    def __init__(self, nails: Iterable[Vertex], paths: Iterable[Iterable[Vertex]], mode: str = SHALLOW, depth: int = 1):
        if mode not in MODES:
            raise ModelError(f"unknown mode {mode!r}")
        if depth < 0:
            raise ModelError("depth must be non-negative")
        ps = []
        for p in paths:
            p = tuple(p)
            if len(p) < 2:
                raise ModelError(f"path too short: {p!r}")
            ps.append(_orient(p))
        object.__setattr__(self, "nails", frozenset(nails))
        object.__setattr__(self, "paths", tuple(sorted(ps, key=_path_order)))
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "depth", depth)

    def interiors(self) -> set:
        out = set()
        for p in self.paths:
            out.update(p[1:-1])
        return out


@dataclass(frozen=True)
class MinorSummary:
    minor: Graph
    density: Fraction
    nail_count: int
    edge_count: int


def minor_graph(m: TopoMinorModel) -> Graph:
    """The minor H: one vertex per nail, one edge per path."""
    seen = set()
    for p in m.paths:
        pair = frozenset((p[0], p[-1]))
        if pair in seen:
            raise ModelError(f"duplicate nail pair {sorted_vertices(pair)}")
        seen.add(pair)
    return Graph(m.nails, seen)


def verify_model(g: Graph, m: TopoMinorModel) -> MinorSummary:
    """Check ``m`` against ``g`` and return the minor with its exact density.

    Paths are scanned in canonical order (sorted by endpoints) and the first
    violated condition is reported.
    """
    if not m.nails:
        raise ModelError("model has no nails")
    for x in sorted_vertices(m.nails):
        if x not in g:
            raise ModelError(f"nail {x!r} not in graph")
    used: dict = {}
    pairs: dict = {}
    for p in m.paths:
        a, b = p[0], p[-1]
        inner = p[1:-1]
        if a == b:
            raise ModelError(f"path {p!r}: endpoints not distinct")
        for end in (a, b):
            if end not in m.nails:
                raise ModelError(f"path {p!r}: endpoint {end!r} is not a nail")
        if len(set(p)) != len(p):
            raise ModelError(f"path {p!r}: repeated vertex")
        for v in inner:
            if v in m.nails:
                raise ModelError(f"path {p!r}: interior vertex {v!r} is a nail")
        if m.mode == SUBDIVISION and len(inner) != m.depth:
            raise ModelError(f"path {p!r}: has {len(inner)} interior vertices, subdivision({m.depth}) needs exactly {m.depth}")
        if m.mode == SHALLOW and len(inner) > m.depth:
            raise ModelError(f"path {p!r}: has {len(inner)} interior vertices, shallow({m.depth}) allows at most {m.depth}")
        for u, v in zip(p, p[1:]):
            if v not in g or u not in g or not g.has_edge(u, v):
                raise ModelError(f"path {p!r}: missing edge {u!r}-{v!r}")
        pair = frozenset((a, b))
        if pair in pairs:
            raise ModelError(f"path {p!r}: duplicate nail pair {sorted_vertices(pair)}")
        pairs[pair] = p
        for v in inner:
            if v in used:
                raise ModelError(f"interiors not disjoint: {v!r} on {used[v]!r} and {p!r}")
            used[v] = p
    h = minor_graph(m)
    return MinorSummary(h, Fraction(h.num_edges, len(h)), len(h), h.num_edges)


def model_from_edges(nails, routes: dict, mode: str = SHALLOW, depth: int = 1) -> TopoMinorModel:
    """Build a model from ``{(x, y): interior_sequence}``."""
    paths = [(x, *inner, y) for (x, y), inner in sorted(routes.items(), key=lambda kv: edge_key(kv[0]))]
    return TopoMinorModel(nails, paths, mode, depth)
