"""Finite directed multigraphs, paths, and the reachability machinery.

Edges point from source to range.  A *source* is a vertex receiving no
edges.  Paths are stored in traversal order: the first edge leaves the
start vertex, each later edge leaves the range of the one before it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import networkx as nx

__all__ = [
    "INFINITE",
    "Edge",
    "Graph",
    "GraphError",
    "ParseError",
    "PreconditionError",
    "Path",
    "SccDecomposition",
    "count_paths_from",
    "parse_graph",
    "reachable_from",
    "reaches",
    "reaching",
    "reaches_every_cycle",
    "reaches_some_cycle",
    "scc",
    "serialize_graph",
    "sources",
]

INFINITE = math.inf

NAME_RE = re.compile(r"[A-Za-z0-9_]+")


class GraphError(ValueError):
    """Invalid graph data or an unknown vertex/edge."""


class PreconditionError(GraphError):
    """An operation was called outside its domain (e.g. a cyclic graph)."""


class ParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        self.message = message
        super().__init__(f"line {lineno}: {message}")


class Edge(NamedTuple):
    name: str
    source: str
    range: str


@dataclass(frozen=True)
class Graph:
    """Immutable directed multigraph with named vertices and edges.

    Vertices and edges are kept sorted by name, so two graphs with the same
    declarations compare equal regardless of input order.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            dup = next(v for i, v in enumerate(verts) if i and verts[i - 1] == v)
            raise GraphError(f"duplicate vertex {dup!r}")
        edges = tuple(sorted((Edge(*e) for e in self.edges), key=lambda e: e.name))
        vset = set(verts)
        index = {}
        for e in edges:
            if e.name in index:
                raise GraphError(f"duplicate edge {e.name!r}")
            for end in (e.source, e.range):
                if end not in vset:
                    raise GraphError(f"edge {e.name!r} uses undeclared vertex {end!r}")
            index[e.name] = e
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]] = ()) -> Graph:
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self._vset

    @cached_property
    def _vset(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Edge, ...]]:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.range].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def check_vertex(self, v: str) -> str:
        if v not in self._vset:
            raise GraphError(f"unknown vertex {v!r}")
        return v

    def check_vertices(self, vs: Iterable[str]) -> frozenset[str]:
        vs = frozenset(vs)
        missing = sorted(vs - self._vset)
        if missing:
            raise GraphError(f"unknown vertices {missing}")
        return vs

    def edge(self, name: str) -> Edge:
        try:
            return self._index[name]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._index

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[self.check_vertex(v)]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[self.check_vertex(v)]

    @property
    def edge_names(self) -> frozenset[str]:
        return frozenset(self._index)

    def induced(self, vertices: Iterable[str], edge_names: Iterable[str]) -> Graph:
        """Graph on `vertices` keeping the named edges (endpoints must be kept)."""
        return Graph(tuple(vertices), tuple(self.edge(n) for n in edge_names))

    def relabel(self, vmap: dict[str, str], emap: dict[str, str] | None = None) -> Graph:
        emap = emap or {}
        return Graph(
            tuple(vmap.get(v, v) for v in self.vertices),
            tuple(
                Edge(emap.get(e.name, e.name), vmap.get(e.source, e.source), vmap.get(e.range, e.range))
                for e in self.edges
            ),
        )

    @cached_property
    def scc(self) -> SccDecomposition:
        return _scc(self)

    def has_cycle(self) -> bool:
        return any(self.scc.nontrivial)

    def serialize(self) -> str:
        return serialize_graph(self)

    def __str__(self):
        return serialize_graph(self)


@dataclass(frozen=True)
class Path:
    """Edge walk in traversal order.  A length-0 path sits at `start`."""

    start: str
    edges: tuple[str, ...]
    end: str

    @classmethod
    def trivial(cls, v: str) -> Path:
        return cls(v, (), v)

    @classmethod
    def from_edges(cls, g: Graph, edges: Iterable[str], start: str | None = None) -> Path:
        edges = tuple(edges)
        if not edges:
            if start is None:
                raise GraphError("a length-0 path needs a start vertex")
            return cls.trivial(g.check_vertex(start))
        first = g.edge(edges[0])
        if start is not None and start != first.source:
            raise GraphError(f"edge {first.name!r} does not leave {start!r}")
        here = first.range
        for name in edges[1:]:
            e = g.edge(name)
            if e.source != here:
                raise GraphError(f"edge {name!r} does not leave {here!r}")
            here = e.range
        return cls(first.source, edges, here)

    def __len__(self):
        return len(self.edges)

    @property
    def source(self) -> str:
        return self.start

    @property
    def range(self) -> str:
        return self.end

    def vertex_sequence(self, g: Graph) -> list[str]:
        """Vertices visited, from start to end (length + 1 entries)."""
        return [self.start] + [g.edge(n).range for n in self.edges]

    def composition_order(self) -> tuple[str, ...]:
        """Edge names in composition order (last traversed edge first)."""
        return self.edges[::-1]

    def sort_key(self):
        return (len(self.edges), self.edges)

    def to_list(self) -> list[str]:
        return list(self.edges)


# ---------------------------------------------------------------------------
# parsing and serialization


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    ``vertex <name>`` and ``edge <name> <source> <range>`` lines in any order;
    blank lines and lines starting with ``#`` are ignored.
    """
    vertices: dict[str, int] = {}
    edges: dict[str, tuple[int, Edge]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind, names = parts[0], parts[1:]
        for n in names:
            if not NAME_RE.fullmatch(n):
                raise ParseError(lineno, f"invalid name {n!r}")
        if kind == "vertex":
            if len(names) != 1:
                raise ParseError(lineno, "expected 'vertex <name>'")
            if names[0] in vertices:
                raise ParseError(lineno, f"duplicate vertex {names[0]!r} (first declared on line {vertices[names[0]]})")
            vertices[names[0]] = lineno
        elif kind == "edge":
            if len(names) != 3:
                raise ParseError(lineno, "expected 'edge <name> <source> <range>'")
            if names[0] in edges:
                raise ParseError(lineno, f"duplicate edge {names[0]!r} (first declared on line {edges[names[0]][0]})")
            edges[names[0]] = (lineno, Edge(*names))
        else:
            raise ParseError(lineno, f"unknown declaration {kind!r}")
    for lineno, e in edges.values():
        for end in (e.source, e.range):
            if end not in vertices:
                raise ParseError(lineno, f"edge {e.name!r} uses undeclared endpoint {end!r}")
    return Graph(tuple(vertices), tuple(e for _, e in edges.values()))


def serialize_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.name} {e.source} {e.range}" for e in g.edges]
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# strongly connected components and reachability


@dataclass(frozen=True)
class SccDecomposition:
    """SCC partition with the condensation's reachability relation.

    Components are ordered by their smallest vertex name.  ``reach[i]`` holds
    the indices of components reachable from component ``i``, including ``i``.
    """

    components: tuple[frozenset[str], ...]
    nontrivial: tuple[bool, ...]
    reach: tuple[frozenset[int], ...]
    component_of: dict[str, int]

    def is_on_cycle(self, v: str) -> bool:
        return self.nontrivial[self.component_of[v]]

    @property
    def nontrivial_indices(self) -> frozenset[int]:
        return frozenset(i for i, nt in enumerate(self.nontrivial) if nt)

    def cycle_vertices(self) -> frozenset[str]:
        return frozenset(v for i in self.nontrivial_indices for v in self.components[i])


def _scc(g: Graph) -> SccDecomposition:
    G = nx.MultiDiGraph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from((e.source, e.range) for e in g.edges)
    comps = sorted((frozenset(c) for c in nx.strongly_connected_components(G)), key=min)
    component_of = {v: i for i, c in enumerate(comps) for v in c}
    nontrivial = [False] * len(comps)
    for e in g.edges:
        if component_of[e.source] == component_of[e.range]:
            nontrivial[component_of[e.source]] = True
    C = nx.condensation(G, scc=comps)
    reach = tuple(frozenset(nx.descendants(C, i)) | {i} for i in range(len(comps)))
    return SccDecomposition(tuple(comps), tuple(nontrivial), reach, component_of)


def sources(g: Graph) -> frozenset[str]:
    """Vertices that receive no edges."""
    return frozenset(v for v in g.vertices if not g._in[v])


def scc(g: Graph) -> SccDecomposition:
    return g.scc


def reachable_from(g: Graph, v: str) -> frozenset[str]:
    """Vertices reachable from `v` by a path of length >= 0."""
    seen = {g.check_vertex(v)}
    stack = [v]
    while stack:
        x = stack.pop()
        for e in g._out[x]:
            if e.range not in seen:
                seen.add(e.range)
                stack.append(e.range)
    return frozenset(seen)


def reaching(g: Graph, targets: Iterable[str]) -> frozenset[str]:
    """Vertices with a path (length >= 0) into `targets`."""
    seen = set(g.check_vertices(targets))
    stack = list(seen)
    while stack:
        x = stack.pop()
        for e in g._in[x]:
            if e.source not in seen:
                seen.add(e.source)
                stack.append(e.source)
    return frozenset(seen)


def reaches(g: Graph, src: str, dst: str) -> bool:
    g.check_vertex(dst)
    return dst in reachable_from(g, src)


def reaches_some_cycle(g: Graph, v: str) -> bool:
    d = g.scc
    return not d.reach[d.component_of[g.check_vertex(v)]].isdisjoint(d.nontrivial_indices)


def reaches_every_cycle(g: Graph, v: str) -> bool:
    """True iff `v` connects to every cycle (vacuously true without cycles)."""
    d = g.scc
    return d.nontrivial_indices <= d.reach[d.component_of[g.check_vertex(v)]]


def count_paths_from(g: Graph, v: str) -> int | float:
    """Number of paths with source `v` (length 0 included), or INFINITE."""
    if reaches_some_cycle(g, v):
        return INFINITE
    # the reachable region is acyclic: count in reverse topological order
    counts: dict[str, int] = {}
    stack = [(v, False)]
    while stack:
        x, expanded = stack.pop()
        if x in counts:
            continue
        if expanded:
            counts[x] = 1 + sum(counts[e.range] for e in g._out[x])
            continue
        stack.append((x, True))
        for e in g._out[x]:
            if e.range not in counts:
                stack.append((e.range, False))
    return counts[v]
