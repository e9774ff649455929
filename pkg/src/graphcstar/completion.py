"""Finite subgraphs with Condition (K) that embed in the host's algebra.

Three constructions, all relative to a finite host graph:

* :func:`add_return_pairs` adds two distinct host return paths at every
  subgraph vertex lying on a host cycle;
* :func:`entrance_completion` then adds every host edge entering a vertex
  that already receives a subgraph edge, so receivers see all their host
  edges (:func:`receiver_equality`);
* :func:`limit_sequence` exhausts the host by an increasing chain of such
  completions.

:func:`derive_case_witnesses` builds the two return paths at an interior
vertex of a return pair, which is why the union of return pairs keeps
Condition (K).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .condition_k import check_condition_k, is_return_path, return_path_status, smallest_return_paths
from .graph import Graph, GraphError, Path, PreconditionError

__all__ = [
    "Subgraph",
    "add_return_pairs",
    "derive_case_witnesses",
    "entrance_completion",
    "entrance_completion_step",
    "limit_sequence",
    "receiver_equality",
    "witness_case",
]


@dataclass(frozen=True)
class Subgraph:
    """A graph whose vertices and edges all occur, identically, in `host`."""

    graph: Graph
    host: Graph

    def __post_init__(self):
        for v in self.graph.vertices:
            if v not in self.host:
                raise GraphError(f"vertex {v!r} is not in the host graph")
        for e in self.graph.edges:
            if not self.host.has_edge(e.name) or self.host.edge(e.name) != e:
                raise GraphError(f"edge {e.name!r} does not occur in the host graph with the same endpoints")

    @classmethod
    def of(cls, host: Graph, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> Subgraph:
        """Subgraph with the given edges, their endpoints, and extra `vertices`."""
        edges = set(edges)
        verts = set(vertices)
        for name in edges:
            e = host.edge(name)
            verts |= {e.source, e.range}
        return cls(host.induced(verts, edges), host)

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self.graph.vertices)

    @property
    def edge_names(self) -> frozenset[str]:
        return self.graph.edge_names

    def union(self, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> Subgraph:
        return Subgraph.of(self.host, self.vertices | set(vertices), self.edge_names | set(edges))

    def __le__(self, other: Subgraph) -> bool:
        return self.vertices <= other.vertices and self.edge_names <= other.edge_names

    def is_host(self) -> bool:
        return self.graph == self.host


def _as_subgraph(host: Graph, f) -> Subgraph:
    if isinstance(f, Subgraph):
        if f.host != host:
            raise GraphError("subgraph belongs to a different host")
        return f
    return Subgraph(f, host)


def _require_k(host: Graph) -> None:
    report = check_condition_k(host)
    if not report.holds:
        v, witness = report.violations[0]
        raise PreconditionError(f"host fails Condition (K) at {v!r}: unique return path {witness.to_list()}")


# ---------------------------------------------------------------------------
# two return paths at interior vertices


def _interior_hits(g: Graph, p: Path, u: str) -> list[int]:
    """Traversal indices k (excluding the last edge) with range(p[k]) == u."""
    return [k for k, name in enumerate(p.edges[:-1]) if g.edge(name).range == u]


def _rotate(p: Path, k: int, u: str) -> Path:
    """The cyclic rotation of return path `p` starting right after edge k."""
    return Path(u, p.edges[k + 1 :] + p.edges[: k + 1], u)


def _check_pair(g: Graph, mu_w: Path, nu_w: Path, u: str) -> str:
    w = mu_w.start
    if not (is_return_path(g, w, mu_w.edges) and is_return_path(g, w, nu_w.edges)):
        raise GraphError("inputs must be return paths at a common vertex")
    if mu_w == nu_w:
        raise GraphError("inputs must be distinct return paths")
    if u == w or not (_interior_hits(g, mu_w, u) or _interior_hits(g, nu_w, u)):
        raise GraphError(f"{u!r} is not an interior vertex of either return path at {w!r}")
    return w


def witness_case(g: Graph, mu_w: Path, nu_w: Path, u: str) -> str:
    """Which of the three constructions applies: 'i', 'ii' or 'iii'."""
    _check_pair(g, mu_w, nu_w, u)
    hits_mu, hits_nu = _interior_hits(g, mu_w, u), _interior_hits(g, nu_w, u)
    if len(hits_mu) > 1 or len(hits_nu) > 1:
        return "ii"
    if hits_mu and hits_nu:
        return "iii"
    return "i"


def derive_case_witnesses(g: Graph, mu_w: Path, nu_w: Path, u: str) -> tuple[Path, Path]:
    """Two distinct return paths at `u` from distinct return paths at some `w`.

    Case i: `u` entered once, on one path only.  Rotate that path to start at
    `u`; the second witness detours through the other path when it passes `w`.
    Case ii: `u` entered several times on one path.  Take the stretch between
    the last two entries, and the wrap-around stretch from the last entry
    through `w` back to the first entry.
    Case iii: `u` entered once on each path.  Rotate both.
    """
    case = witness_case(g, mu_w, nu_w, u)
    hits_mu, hits_nu = _interior_hits(g, mu_w, u), _interior_hits(g, nu_w, u)
    if case == "i":
        base, other, (k,) = (mu_w, nu_w, hits_mu) if hits_mu else (nu_w, mu_w, hits_nu)
        first = _rotate(base, k, u)
        second = Path(u, base.edges[k + 1 :] + other.edges + base.edges[: k + 1], u)
    elif case == "ii":
        p, hits = (mu_w, hits_mu) if len(hits_mu) > 1 else (nu_w, hits_nu)
        first = Path(u, p.edges[hits[-2] + 1 : hits[-1] + 1], u)
        second = Path(u, p.edges[hits[-1] + 1 :] + p.edges[: hits[0] + 1], u)
    else:
        first = _rotate(mu_w, hits_mu[0], u)
        second = _rotate(nu_w, hits_nu[0], u)
    for p in (first, second):
        if not is_return_path(g, u, p.edges):
            raise AssertionError(f"case {case} produced {p.to_list()}, not a return path at {u!r}")
    if first == second:
        raise AssertionError(f"case {case} produced two equal return paths at {u!r}")
    return first, second


# ---------------------------------------------------------------------------
# the constructions


def add_return_pairs(host: Graph, f) -> Subgraph:
    """Add two host return paths at every vertex of `f` on a host cycle.

    The pair at each vertex is the two smallest witnesses (shortest, then by
    edge names).  The result is checked: it has Condition (K), and every one
    of its vertices on a host cycle has two return paths inside it.
    """
    f = _as_subgraph(host, f)
    _require_k(host)
    pairs: dict[str, tuple[Path, Path]] = {}
    for v in sorted(f.vertices):
        if host.scc.is_on_cycle(v):
            pairs[v] = return_path_status(host, v).witnesses
    added = {name for pair in pairs.values() for p in pair for name in p.edges}
    out = f.union(pairs, added)

    for w, (mu_w, nu_w) in pairs.items():
        interior = set(mu_w.vertex_sequence(host)[1:-1]) | set(nu_w.vertex_sequence(host)[1:-1])
        for u in sorted(interior - {w}):
            for p in derive_case_witnesses(host, mu_w, nu_w, u):
                assert set(p.edges) <= out.edge_names
    if not check_condition_k(out.graph).holds:
        raise AssertionError("return-pair augmentation lost Condition (K)")
    for v in out.vertices:
        if host.scc.is_on_cycle(v) and len(smallest_return_paths(out.graph, v, k=2)) < 2:
            raise AssertionError(f"{v!r} has fewer than two return paths after augmentation")
    return out


def receiver_equality(host: Graph, f) -> bool:
    """True iff every vertex receiving an edge of `f` receives all its host edges in `f`."""
    f = _as_subgraph(host, f)
    for v in f.graph.vertices:
        inside = {e.name for e in f.graph.in_edges(v)}
        if inside and inside != {e.name for e in host.in_edges(v)}:
            return False
    return True


def entrance_completion_step(host: Graph, f) -> Subgraph:
    """One pass: return pairs, then every host edge into an existing receiver."""
    f_prime = add_return_pairs(host, f)
    receivers = {host.edge(n).range for n in f_prime.edge_names}
    entering = [e for e in host.edges if e.range in receivers]
    out = f_prime.union((e.source for e in entering), (e.name for e in entering))
    if not check_condition_k(out.graph).holds:
        raise AssertionError("entrance completion lost Condition (K)")
    if not receiver_equality(host, out):
        raise AssertionError("entrance completion left a receiver short of host edges")
    return out


def entrance_completion(host: Graph, f) -> Subgraph:
    """Repeat :func:`entrance_completion_step` until nothing changes.

    A single pass can bring in a new source that lies on a host cycle; the
    next pass gives it its return pair.  The fixed point is a completion of
    itself, so completing it again returns it unchanged.
    """
    current = entrance_completion_step(host, f)
    while True:
        nxt = entrance_completion_step(host, current)
        if nxt == current:
            return current
        current = nxt


def limit_sequence(host: Graph) -> list[Subgraph]:
    """Increasing completions exhausting `host`.

    Stage i adds the i-th edge and i-th vertex (in name order) to the
    previous stage and completes the result; the sequence stops at the
    first stage equal to the host.
    """
    _require_k(host)
    edges = [e.name for e in host.edges]
    verts = list(host.vertices)
    stages: list[Subgraph] = []
    current = Subgraph.of(host)
    for i in range(max(len(edges), len(verts))):
        current = current.union(verts[i : i + 1], edges[i : i + 1])
        current = entrance_completion(host, current)
        stages.append(current)
        if current.is_host():
            break
    return stages
