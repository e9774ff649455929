"""Saturated hereditary vertex sets and the lattice they form.

*Hereditary* means closed under predecessors: if a path runs from ``w``
into ``H`` then ``w`` is in ``H``.  *Saturated* means every vertex that
receives at least one edge, and receives edges only from ``H``, is in ``H``.
For graphs with Condition (K) these sets index the ideals of the graph
algebra, with ``restrict_graph`` and ``quotient_graph`` giving the graphs
of the ideal and of the quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .graph import (
    INFINITE,
    Graph,
    PreconditionError,
    count_paths_from,
    reachable_from,
    reaching,
    sources,
)

__all__ = [
    "IdealDescriptor",
    "IdealLattice",
    "Summand",
    "enumerate_lattice",
    "hereditary_closure",
    "ideal_descriptor",
    "is_hereditary",
    "is_saturated",
    "maximal_chain",
    "oracle_lattice",
    "quotient_graph",
    "restrict_graph",
    "sat_her_closure",
    "saturate",
    "set_key",
]

ORACLE_MAX_VERTICES = 20


def set_key(s: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(s))


def is_hereditary(g: Graph, H: Iterable[str]) -> bool:
    H = frozenset(H)
    return all(e.source in H for e in g.edges if e.range in H)


def is_saturated(g: Graph, H: Iterable[str]) -> bool:
    H = frozenset(H)
    for v in g.vertices:
        if v in H:
            continue
        ins = g.in_edges(v)
        if ins and all(e.source in H for e in ins):
            return False
    return True


def hereditary_closure(g: Graph, T: Iterable[str]) -> frozenset[str]:
    return reaching(g, T)


def saturate(g: Graph, T: Iterable[str]) -> frozenset[str]:
    S = set(g.check_vertices(T))
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v in S:
                continue
            ins = g.in_edges(v)
            if ins and all(e.source in S for e in ins):
                S.add(v)
                changed = True
    return frozenset(S)


def sat_her_closure(g: Graph, T: Iterable[str]) -> frozenset[str]:
    """Smallest saturated hereditary set containing `T`."""
    H = saturate(g, hereditary_closure(g, T))
    assert is_hereditary(g, H) and is_saturated(g, H), "saturation broke heredity"
    return H


def _require_sat_her(g: Graph, H: Iterable[str]) -> frozenset[str]:
    H = g.check_vertices(H)
    if not (is_hereditary(g, H) and is_saturated(g, H)):
        raise PreconditionError(f"{list(set_key(H))} is not saturated and hereditary")
    return H


@dataclass(frozen=True)
class IdealLattice:
    """All saturated hereditary sets of a graph, ordered by (size, names).

    ``hasse`` lists covering pairs ``(i, j)``: ``elements[i]`` is a maximal
    proper subset of ``elements[j]`` within the lattice.
    """

    elements: tuple[frozenset[str], ...]
    hasse: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.elements)

    def __contains__(self, H):
        return frozenset(H) in self._positions

    @property
    def _positions(self) -> dict[frozenset[str], int]:
        return {H: i for i, H in enumerate(self.elements)}

    def index(self, H) -> int:
        return self._positions[frozenset(H)]

    @property
    def bottom(self) -> frozenset[str]:
        return self.elements[0]

    @property
    def top(self) -> frozenset[str]:
        return self.elements[-1]

    def covers(self, H) -> list[frozenset[str]]:
        i = self.index(H)
        return [self.elements[j] for a, j in self.hasse if a == i]

    def join(self, g: Graph, A, B) -> frozenset[str]:
        return sat_her_closure(g, frozenset(A) | frozenset(B))

    @staticmethod
    def meet(A, B) -> frozenset[str]:
        return frozenset(A) & frozenset(B)

    def to_dict(self) -> dict:
        return {
            "elements": [list(set_key(H)) for H in self.elements],
            "hasse": [list(p) for p in self.hasse],
        }


def _make_lattice(family: Iterable[frozenset[str]]) -> IdealLattice:
    elements = tuple(sorted(set(family), key=lambda H: (len(H), set_key(H))))
    hasse = []
    for j, big in enumerate(elements):
        below = [i for i, small in enumerate(elements) if small < big]
        for i in below:
            if not any(elements[i] < elements[k] for k in below):
                hasse.append((i, j))
    return IdealLattice(elements, tuple(sorted(hasse)))


def enumerate_lattice(g: Graph) -> IdealLattice:
    """Close the singleton closures under joins; add the empty set."""
    generators = {sat_her_closure(g, [v]) for v in g.vertices}
    family = {frozenset()} | generators
    frontier = set(generators)
    while frontier:
        new = set()
        for A in frontier:
            for B in generators:
                J = sat_her_closure(g, A | B)
                if J not in family:
                    new.add(J)
        family |= new
        frontier = new
    return _make_lattice(family)


def oracle_lattice(g: Graph) -> set[frozenset[str]]:
    """Every subset of the vertices that passes both predicates."""
    n = len(g)
    if n > ORACLE_MAX_VERTICES:
        raise PreconditionError(f"oracle_lattice is limited to {ORACLE_MAX_VERTICES} vertices, got {n}")
    found = set()
    for r in range(n + 1):
        for combo in itertools.combinations(g.vertices, r):
            H = frozenset(combo)
            if is_hereditary(g, H) and is_saturated(g, H):
                found.add(H)
    return found


def maximal_chain(lattice: IdealLattice) -> list[frozenset[str]]:
    """Maximal chain from bottom to top, taking the smallest cover each step."""
    chain = [lattice.bottom]
    while chain[-1] != lattice.top:
        chain.append(min(lattice.covers(chain[-1]), key=set_key))
    return chain


def restrict_graph(g: Graph, H: Iterable[str]) -> Graph:
    """Graph on `H` with the edges whose range lies in `H`."""
    H = _require_sat_her(g, H)
    return g.induced(H, [e.name for e in g.edges if e.range in H])


def quotient_graph(g: Graph, H: Iterable[str]) -> Graph:
    """Graph on the complement of `H` with the edges whose source lies outside."""
    H = _require_sat_her(g, H)
    return g.induced(
        [v for v in g.vertices if v not in H],
        [e.name for e in g.edges if e.source not in H],
    )


# ---------------------------------------------------------------------------
# structure of the ideal of a saturated hereditary set


@dataclass(frozen=True)
class Summand:
    """One direct summand of the ideal, attached to a source.

    ``size`` is the number of paths leaving the source: a finite size means
    a full matrix algebra of that size, ``INFINITE`` means compact operators.
    """

    source: str
    size: int | float

    @property
    def is_matrix(self) -> bool:
        return self.size != INFINITE

    def to_dict(self) -> dict:
        if self.is_matrix:
            return {"source": self.source, "kind": "matrix", "size": self.size}
        return {"source": self.source, "kind": "compacts"}

    def __str__(self):
        return f"M_{self.size}" if self.is_matrix else "K"


@dataclass(frozen=True)
class IdealDescriptor:
    applicable: bool
    summands: tuple[Summand, ...] = ()

    @property
    def m(self) -> int:
        return len(self.summands)

    @property
    def stable(self) -> bool:
        return self.applicable and not any(s.is_matrix for s in self.summands)

    @property
    def finite_dimensional(self) -> bool:
        return self.applicable and all(s.is_matrix for s in self.summands)

    @property
    def dimension(self) -> int | float:
        if not self.finite_dimensional:
            return INFINITE
        return sum(s.size**2 for s in self.summands)

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "summands": [s.to_dict() for s in self.summands],
            "stable": self.stable,
        }

    def __str__(self):
        if not self.applicable:
            return "not applicable (a cycle reaches the set)"
        if not self.summands:
            return "0"
        return " + ".join(str(s) for s in self.summands)


def ideal_descriptor(g: Graph, H: Iterable[str]) -> IdealDescriptor:
    """Summands of the ideal of `H` when no cycle reaches `H`.

    In that case every vertex of `H` is fed only by sources, and the ideal
    splits into one summand per source lying in `H`.  When a cycle does
    reach `H` nothing is guessed: the descriptor is marked not applicable.
    """
    H = _require_sat_her(g, H)
    cyc = g.scc.cycle_vertices()
    downstream = set()
    for c in cyc:
        downstream |= reachable_from(g, c)
    if downstream & H:
        return IdealDescriptor(False)
    summands = tuple(Summand(u, count_paths_from(g, u)) for u in sorted(sources(g) & H))
    return IdealDescriptor(True, summands)
