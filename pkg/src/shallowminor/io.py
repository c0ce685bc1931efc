"""DIMACS input and the line-oriented graph, model and decomposition documents.

Every document opens with ``format <name> <version>`` and ``ids int|str``;
the remaining lines are ``keyword token...`` with ``key=value`` options.
Vertex ids may not contain whitespace.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, sorted_vertices
from .models import SHALLOW, SUBDIVISION, TopoMinorModel
from .reductions import CnfFormula, Positive1in3Formula
from .treedecomp import TreeDecomposition

GRAPH_FORMAT = "shallowminor-graph"
MODEL_FORMAT = "shallowminor-model"
TD_FORMAT = "shallowminor-td"
VERSION = 1


class DocumentError(ValueError):
    pass


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF. Comments may appear anywhere; clauses may span lines."""
    header = None
    clauses, current = [], []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DocumentError(f"line {no}: second problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DocumentError(f"line {no}: expected 'p cnf <vars> <clauses>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DocumentError(f"line {no}: non-integer counts in problem line") from None
            if min(header) < 0:
                raise DocumentError(f"line {no}: negative counts in problem line")
            continue
        if header is None:
            raise DocumentError(f"line {no}: clause before the problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DocumentError(f"line {no}: bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise DocumentError(f"line {no}: empty clause")
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise DocumentError(f"line {no}: literal {lit} exceeds declared {header[0]} variables")
            else:
                current.append(lit)
    if header is None:
        raise DocumentError("missing problem line")
    if current:
        raise DocumentError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise DocumentError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], clauses)


def emit_dimacs_cnf(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> dict:
    """Signed literals, optionally on ``v`` lines, ``0`` terminated; ``c`` and ``s`` lines skipped."""
    a = {}
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] in ("c", "s"):
            continue
        if toks[0] == "v":
            toks = toks[1:]
        for tok in toks:
            try:
                lit = int(tok)
            except ValueError:
                raise DocumentError(f"line {no}: bad literal {tok!r}") from None
            if lit == 0:
                return a
            if abs(lit) in a and a[abs(lit)] != (lit > 0):
                raise DocumentError(f"line {no}: variable {abs(lit)} assigned twice")
            a[abs(lit)] = lit > 0
    return a


# ---- shared helpers --------------------------------------------------------


def _id_kind(ids) -> str:
    ids = list(ids)
    if all(isinstance(v, int) and not isinstance(v, bool) for v in ids):
        return "int"
    if all(isinstance(v, str) for v in ids):
        for v in ids:
            if not v or any(ch.isspace() for ch in v) or "=" in v:
                raise DocumentError(f"vertex id {v!r} is empty or holds whitespace or '='")
        return "str"
    raise DocumentError("documents need ids that are all ints or all strings")


def _tok(v) -> str:
    return str(v)


class _Reader:
    def __init__(self, text: str, fmt: str):
        self.lines = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if line and not line.startswith("#"):
                self.lines.append((no, line.split()))
        if not self.lines:
            raise DocumentError("empty document")
        no, head = self.lines[0]
        if len(head) != 3 or head[0] != "format" or head[1] != fmt:
            raise DocumentError(f"line {no}: expected 'format {fmt} {VERSION}'")
        if head[2] != str(VERSION):
            raise DocumentError(f"line {no}: unsupported version {head[2]}")
        if len(self.lines) < 2 or self.lines[1][1][0] != "ids" or len(self.lines[1][1]) != 2:
            raise DocumentError("second line must be 'ids int' or 'ids str'")
        self.kind = self.lines[1][1][1]
        if self.kind not in ("int", "str"):
            raise DocumentError(f"line {self.lines[1][0]}: unknown id kind {self.kind!r}")

    def body(self):
        return self.lines[2:]

    def vid(self, tok: str, no: int):
        if self.kind == "str":
            return tok
        try:
            return int(tok)
        except ValueError:
            raise DocumentError(f"line {no}: id {tok!r} is not an int") from None


def _options(tokens: list, no: int) -> dict:
    out = {}
    for t in tokens:
        if "=" not in t:
            raise DocumentError(f"line {no}: expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        out[k] = v
    return out


def _fraction(s: str, no: int) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"line {no}: bad rational {s!r}") from None


# ---- graphs ---------------------------------------------------------------


@dataclass
class GraphDocument:
    graph: Graph
    meta: dict = field(default_factory=dict)
    formula: object = None
    provenance: dict = field(default_factory=dict)


def graph_hash(g: Graph) -> str:
    h = hashlib.sha256()
    for v in sorted_vertices(g.vertices):
        h.update(f"v {v} {g.label(v) or ''}\n".encode())
    for u, v in g.sorted_edges():
        h.update(f"e {u} {v}\n".encode())
    return h.hexdigest()[:16]


def emit_graph(doc: GraphDocument) -> str:
    g = doc.graph
    kind = _id_kind(g.vertices)
    lines = [f"format {GRAPH_FORMAT} {VERSION}", f"ids {kind}"]
    meta = dict(doc.meta)
    meta["hash"] = graph_hash(g)
    for k, v in meta.items():
        if any(ch.isspace() for ch in str(v)):
            raise DocumentError(f"meta value for {k} holds whitespace")
    lines.append("meta " + " ".join(f"{k}={v}" for k, v in meta.items()))
    f = doc.formula
    if f is not None:
        fk = "1in3" if isinstance(f, Positive1in3Formula) else "cnf"
        lines.append(f"formula kind={fk} vars={f.num_vars}")
        lines += ["clause " + " ".join(map(str, c)) for c in f.clauses]
    for v in sorted_vertices(g.vertices):
        opts = []
        if g.label(v):
            opts.append(f"color={g.label(v)}")
        if v in doc.provenance:
            opts.append(f"prov={doc.provenance[v]}")
        lines.append(" ".join(["v", _tok(v), *opts]))
    lines += [f"e {_tok(u)} {_tok(v)}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> GraphDocument:
    r = _Reader(text, GRAPH_FORMAT)
    meta, verts, labels, prov, edges = {}, [], {}, {}, []
    formula_head, clauses = None, []
    for no, toks in r.body():
        kw, rest = toks[0], toks[1:]
        if kw == "meta":
            meta.update(_options(rest, no))
        elif kw == "formula":
            formula_head = (no, _options(rest, no))
        elif kw == "clause":
            if formula_head is None:
                raise DocumentError(f"line {no}: clause before formula line")
            try:
                clauses.append(tuple(int(t) for t in rest))
            except ValueError:
                raise DocumentError(f"line {no}: bad literal") from None
        elif kw == "v":
            if not rest:
                raise DocumentError(f"line {no}: vertex line without id")
            v = r.vid(rest[0], no)
            opts = _options(rest[1:], no)
            verts.append(v)
            if "color" in opts:
                labels[v] = opts["color"]
            if "prov" in opts:
                prov[v] = opts["prov"]
        elif kw == "e":
            if len(rest) != 2:
                raise DocumentError(f"line {no}: edge line needs two ids")
            edges.append((r.vid(rest[0], no), r.vid(rest[1], no)))
        else:
            raise DocumentError(f"line {no}: unknown keyword {kw!r}")
    if len(set(verts)) != len(verts):
        raise DocumentError("repeated vertex line")
    try:
        g = Graph(verts, edges, labels)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    if len(set(map(frozenset, edges))) != len(edges):
        raise DocumentError("repeated edge line")
    if "hash" in meta and meta["hash"] != graph_hash(g):
        raise DocumentError("graph hash mismatch")
    formula = None
    if formula_head is not None:
        no, opts = formula_head
        try:
            nv = int(opts.get("vars", ""))
        except ValueError:
            raise DocumentError(f"line {no}: formula needs vars=<int>") from None
        try:
            if opts.get("kind") == "1in3":
                formula = Positive1in3Formula(nv, clauses)
            elif opts.get("kind") == "cnf":
                formula = CnfFormula(nv, clauses)
            else:
                raise DocumentError(f"line {no}: formula kind must be 1in3 or cnf")
        except DocumentError:
            raise
        except ValueError as exc:
            raise DocumentError(f"formula: {exc}") from None
    return GraphDocument(g, meta, formula, prov)


# ---- models ---------------------------------------------------------------


def emit_model(m: TopoMinorModel) -> str:
    kind = _id_kind(set(m.nails) | m.interiors())
    lines = [f"format {MODEL_FORMAT} {VERSION}", f"ids {kind}", f"mode {m.mode}", f"depth {m.depth}"]
    lines += [f"nail {_tok(v)}" for v in sorted_vertices(m.nails)]
    lines += ["path " + " ".join(map(_tok, p)) for p in m.paths]
    return "\n".join(lines) + "\n"


def load_model(text: str) -> TopoMinorModel:
    r = _Reader(text, MODEL_FORMAT)
    mode, depth, nails, paths = None, None, [], []
    for no, toks in r.body():
        kw, rest = toks[0], toks[1:]
        if kw == "mode":
            if rest not in ([SHALLOW], [SUBDIVISION]):
                raise DocumentError(f"line {no}: mode must be {SHALLOW} or {SUBDIVISION}")
            mode = rest[0]
        elif kw == "depth":
            try:
                depth = int(rest[0])
            except (ValueError, IndexError):
                raise DocumentError(f"line {no}: depth needs an int") from None
        elif kw == "nail":
            if len(rest) != 1:
                raise DocumentError(f"line {no}: nail line needs one id")
            nails.append(r.vid(rest[0], no))
        elif kw == "path":
            if len(rest) < 2:
                raise DocumentError(f"line {no}: path needs at least two ids")
            paths.append(tuple(r.vid(t, no) for t in rest))
        else:
            raise DocumentError(f"line {no}: unknown keyword {kw!r}")
    if mode is None or depth is None:
        raise DocumentError("model needs mode and depth lines")
    return TopoMinorModel(nails, paths, mode, depth)


# ---- tree decompositions --------------------------------------------------


def emit_tree_decomposition(t: TreeDecomposition) -> str:
    kind = _id_kind(set().union(*t.bags)) if t.bags else "int"
    lines = [f"format {TD_FORMAT} {VERSION}", f"ids {kind}"]
    for i, bag in enumerate(t.bags):
        lines.append(" ".join(["bag", str(i), *map(_tok, sorted_vertices(bag))]))
    lines += [f"tedge {i} {j}" for i, j in t.tree_edges]
    return "\n".join(lines) + "\n"


def load_tree_decomposition(text: str) -> TreeDecomposition:
    r = _Reader(text, TD_FORMAT)
    bags, tedges = {}, []
    for no, toks in r.body():
        kw, rest = toks[0], toks[1:]
        try:
            if kw == "bag":
                idx = int(rest[0])
                if idx in bags:
                    raise DocumentError(f"line {no}: bag {idx} defined twice")
                bags[idx] = [r.vid(t, no) for t in rest[1:]]
            elif kw == "tedge":
                if len(rest) != 2:
                    raise DocumentError(f"line {no}: tedge needs two bag indices")
                tedges.append((int(rest[0]), int(rest[1])))
            else:
                raise DocumentError(f"line {no}: unknown keyword {kw!r}")
        except (ValueError, IndexError):
            raise DocumentError(f"line {no}: malformed {kw} line") from None
    if sorted(bags) != list(range(len(bags))):
        raise DocumentError("bag indices must be 0..k-1")
    return TreeDecomposition([bags[i] for i in range(len(bags))], tedges)
