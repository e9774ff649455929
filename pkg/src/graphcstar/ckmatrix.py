"""Exact matrix model of the Cuntz-Krieger relations for acyclic graphs.

The basis is the set of all paths leaving a source (length 0 included).
``P[v]`` projects onto the paths ending at ``v``; ``S[e]`` extends a path
ending at ``s(e)`` by ``e``.  Entries are 0/1 integers and every check is
exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import Graph, Path, PreconditionError, sources

__all__ = [
    "CKMatrixFamily",
    "RelationReport",
    "algebra_dimension",
    "build_family",
    "exact_rank",
    "path_operator",
    "span_dimension",
    "vertex_decomposition_holds",
    "verify_relations",
]


@dataclass(frozen=True)
class CKMatrixFamily:
    graph: Graph
    basis: tuple[Path, ...]
    P: dict[str, np.ndarray]
    S: dict[str, np.ndarray]

    @property
    def size(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict:
        return {
            "basis": [{"start": p.start, "edges": p.to_list()} for p in self.basis],
            "P": {v: m.tolist() for v, m in sorted(self.P.items())},
            "S": {e: m.tolist() for e, m in sorted(self.S.items())},
        }


def _paths_from(g: Graph, u: str) -> list[Path]:
    out = []
    stack = [Path.trivial(u)]
    while stack:
        p = stack.pop()
        out.append(p)
        for e in g.out_edges(p.end):
            stack.append(Path(p.start, p.edges + (e.name,), e.range))
    return out


def build_family(g: Graph) -> CKMatrixFamily:
    if g.has_cycle():
        raise PreconditionError("graph has a cycle; its path space is infinite")
    basis = sorted(
        (p for u in sorted(sources(g)) for p in _paths_from(g, u)),
        key=lambda p: (p.start, p.edges),
    )
    index = {(p.start, p.edges): i for i, p in enumerate(basis)}
    n = len(basis)
    P = {v: np.zeros((n, n), dtype=np.int64) for v in g.vertices}
    S = {e.name: np.zeros((n, n), dtype=np.int64) for e in g.edges}
    for i, p in enumerate(basis):
        P[p.end][i, i] = 1
        for e in g.out_edges(p.end):
            S[e.name][index[(p.start, p.edges + (e.name,))], i] = 1
    return CKMatrixFamily(g, tuple(basis), P, S)


@dataclass(frozen=True)
class RelationReport:
    failures: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"ok": self.ok, "failures": [{"relation": r, "generator": g} for r, g in self.failures]}


def verify_relations(fam: CKMatrixFamily) -> RelationReport:
    """Check the family relations generator by generator.

    * vertex matrices are mutually orthogonal projections;
    * edge matrices are partial isometries with pairwise orthogonal ranges;
    * (i) ``S_e^T S_e = P_s(e)``;
    * (ii) ``P_r(e) S_e = S_e``;
    * (iii) ``P_v = sum of S_e S_e^T over edges into v`` whenever v receives edges.
    """
    g = fam.graph
    failures: list[tuple[str, str]] = []
    zero = np.zeros((fam.size, fam.size), dtype=np.int64)
    for v, p in fam.P.items():
        if not (np.array_equal(p @ p, p) and np.array_equal(p.T, p)):
            failures.append(("projection", v))
    verts = list(fam.P)
    for i, v in enumerate(verts):
        for w in verts[i + 1 :]:
            if not np.array_equal(fam.P[v] @ fam.P[w], zero):
                failures.append(("orthogonal projections", f"{v},{w}"))
    edges = list(fam.S)
    for i, e in enumerate(edges):
        for f in edges[i + 1 :]:
            if not np.array_equal(fam.S[e].T @ fam.S[f], zero):
                failures.append(("orthogonal ranges", f"{e},{f}"))
    for e in g.edges:
        s = fam.S[e.name]
        if not np.array_equal(s.T @ s, fam.P[e.source]):
            failures.append(("(i) s_e* s_e = p_s(e)", e.name))
        if not np.array_equal(fam.P[e.range] @ s, s):
            failures.append(("(ii) p_r(e) s_e = s_e", e.name))
    for v in g.vertices:
        ins = g.in_edges(v)
        if ins:
            total = sum((fam.S[e.name] @ fam.S[e.name].T for e in ins), zero)
            if not np.array_equal(total, fam.P[v]):
                failures.append(("(iii) p_v = sum s_e s_e*", v))
    return RelationReport(tuple(failures))


def path_operator(fam: CKMatrixFamily, p: Path) -> np.ndarray:
    """The product of edge matrices along `p`, starting from ``P[p.start]``."""
    m = fam.P[p.start]
    for name in p.edges:
        m = fam.S[name] @ m
    return m


def algebra_dimension(fam: CKMatrixFamily) -> int:
    """Number of nonzero matrix units ``S_mu S_nu^T`` with a common source start."""
    by_source: dict[str, list[np.ndarray]] = {}
    for p in fam.basis:
        by_source.setdefault(p.start, []).append(path_operator(fam, p))
    count = 0
    for ops in by_source.values():
        for a in ops:
            for b in ops:
                if (a @ b.T).any():
                    count += 1
    return count


def vertex_decomposition_holds(fam: CKMatrixFamily, v: str) -> bool:
    """``P_v`` equals the sum of ``S_mu S_mu^T`` over paths from a source to `v`."""
    total = np.zeros((fam.size, fam.size), dtype=np.int64)
    for p in fam.basis:
        if p.end == v:
            op = path_operator(fam, p)
            total = total + op @ op.T
    return np.array_equal(total, fam.P[v])


def exact_rank(vectors: Iterable[Iterable[int]]) -> int:
    """Rank over the rationals, by Gaussian elimination on Fractions."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / pr[col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank


def span_dimension(fam: CKMatrixFamily) -> int:
    """Dimension of the linear span of all nonzero words in the generators."""
    gens = list(fam.P.values()) + list(fam.S.values()) + [s.T for s in fam.S.values()]
    gens = [m for m in gens if m.any()]
    seen = {m.tobytes(): m for m in gens}
    frontier = list(seen.values())
    while frontier:
        new = []
        for a in frontier:
            for b in gens:
                for prod in (a @ b, b @ a):
                    if prod.any():
                        key = prod.tobytes()
                        if key not in seen:
                            seen[key] = prod
                            new.append(prod)
        frontier = new
    if not seen:
        return 0
    return exact_rank(m.ravel().tolist() for m in seen.values())
