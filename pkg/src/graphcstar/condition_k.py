"""Condition (K): per-vertex return-path trichotomy with witnesses.

A return path at ``v`` leaves ``v``, comes back to ``v`` and does not pass
through ``v`` in between.  The production decision splits ``v`` into an
out-copy and an in-copy, restricts to the vertices lying on some walk
between them and counts walks there (saturating at 2); a cycle in that
region means infinitely many return paths.  :func:`oracle_return_paths` is
the brute-force walk enumeration used to check it.

Soundness of the ``2 * |V|`` witness bound: two distinct simple return paths
have length at most ``|V|`` each.  If there is only one simple return path
``C`` but infinitely many return paths, every other return path is ``C``
with cycles avoiding ``v`` spliced in, and splicing one simple cycle (length
at most ``|V| - 1``) gives a second one of length below ``2 * |V|``.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

from .graph import Graph, GraphError, Path

__all__ = [
    "ConditionKReport",
    "ReturnPathStatus",
    "Status",
    "check_condition_k",
    "has_condition_k",
    "is_return_path",
    "oracle_return_paths",
    "oracle_status",
    "return_path_status",
    "smallest_return_paths",
]


class Status(enum.Enum):
    NOT_ON_CYCLE = "not-on-cycle"
    EXACTLY_ONE = "exactly-one"
    AT_LEAST_TWO = "at-least-two"


@dataclass(frozen=True)
class ReturnPathStatus:
    vertex: str
    status: Status
    witnesses: tuple[Path, ...] = ()

    def __post_init__(self):
        expected = {Status.NOT_ON_CYCLE: 0, Status.EXACTLY_ONE: 1, Status.AT_LEAST_TWO: 2}[self.status]
        if len(self.witnesses) != expected:
            raise ValueError(f"{self.status.value} carries {expected} witnesses, got {len(self.witnesses)}")
        if expected == 2 and self.witnesses[0] == self.witnesses[1]:
            raise ValueError("witnesses must be distinct")

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "status": self.status.value,
            "witnesses": [w.to_list() for w in self.witnesses],
        }


def is_return_path(g: Graph, v: str, edges) -> bool:
    """True iff `edges` (traversal order) is a return path at `v`."""
    edges = tuple(edges)
    if not edges:
        return False
    try:
        p = Path.from_edges(g, edges)
    except GraphError:
        return False
    if p.start != v or p.end != v:
        return False
    return v not in p.vertex_sequence(g)[1:-1]


def _return_region(g: Graph, v: str) -> frozenset[str]:
    """Vertices other than `v` lying on some return path at `v`."""
    fwd: set[str] = set()
    stack = [e.range for e in g.out_edges(v) if e.range != v]
    while stack:
        x = stack.pop()
        if x in fwd:
            continue
        fwd.add(x)
        stack.extend(e.range for e in g._out[x] if e.range != v and e.range not in fwd)
    bwd: set[str] = set()
    stack = [e.source for e in g.in_edges(v) if e.source != v]
    while stack:
        x = stack.pop()
        if x in bwd:
            continue
        bwd.add(x)
        stack.extend(e.source for e in g._in[x] if e.source != v and e.source not in bwd)
    return frozenset(fwd & bwd)


def _count_return_paths(g: Graph, v: str, region: frozenset[str]) -> int:
    """Return-path count capped at 2, or 2 when the region carries a cycle."""
    inner = g.induced(region, [e.name for e in g.edges if e.source in region and e.range in region])
    if inner.has_cycle():
        return 2
    # walks from x back to v, saturated; region is acyclic so recursion depth <= |region|
    memo: dict[str, int] = {}

    def walks_home(x: str) -> int:
        if x not in memo:
            total = 0
            for e in g._out[x]:
                if e.range == v:
                    total += 1
                elif e.range in region:
                    total += walks_home(e.range)
            memo[x] = min(total, 2)
        return memo[x]

    total = 0
    for e in g.out_edges(v):
        if e.range == v:
            total += 1
        elif e.range in region:
            total += walks_home(e.range)
    return min(total, 2)


def smallest_return_paths(g: Graph, v: str, k: int = 2, max_len: int | None = None) -> list[Path]:
    """Up to `k` return paths at `v`, shortest first, ties broken by edge names.

    Best-first search over walks confined to the return region, so every
    partial walk can still be completed.
    """
    g.check_vertex(v)
    if max_len is None:
        max_len = 2 * len(g)
    region = _return_region(g, v)
    allowed = region | {v}
    heap = [((e.name,), e.range) for e in g.out_edges(v) if e.range in allowed]
    heap = [(1, names, here) for names, here in heap]
    heapq.heapify(heap)
    found: list[Path] = []
    while heap and len(found) < k:
        length, names, here = heapq.heappop(heap)
        if here == v:
            found.append(Path(v, names, v))
            continue
        if length >= max_len:
            continue
        for e in g._out[here]:
            if e.range in allowed:
                heapq.heappush(heap, (length + 1, names + (e.name,), e.range))
    return found


def return_path_status(g: Graph, v: str) -> ReturnPathStatus:
    g.check_vertex(v)
    count = _count_return_paths(g, v, _return_region(g, v))
    if count == 0:
        return ReturnPathStatus(v, Status.NOT_ON_CYCLE)
    witnesses = smallest_return_paths(g, v, k=count)
    if len(witnesses) != count:
        raise AssertionError(f"witness search at {v!r} found {len(witnesses)} of {count} return paths")
    status = Status.EXACTLY_ONE if count == 1 else Status.AT_LEAST_TWO
    return ReturnPathStatus(v, status, tuple(witnesses))


@dataclass(frozen=True)
class ConditionKReport:
    holds: bool
    violations: tuple[tuple[str, Path], ...]

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "violations": [{"vertex": v, "witness": p.to_list()} for v, p in self.violations],
        }


def check_condition_k(g: Graph) -> ConditionKReport:
    violations = []
    for v in g.vertices:
        st = return_path_status(g, v)
        if st.status is Status.EXACTLY_ONE:
            violations.append((v, st.witnesses[0]))
    return ConditionKReport(not violations, tuple(violations))


def has_condition_k(g: Graph) -> bool:
    return check_condition_k(g).holds


# ---------------------------------------------------------------------------
# oracle


def oracle_return_paths(g: Graph, v: str, max_len: int) -> list[Path]:
    """All return paths at `v` of length <= `max_len`, sorted by edge names.

    Exhaustive depth-first walk enumeration; exponential, small graphs only.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    g.check_vertex(v)
    found = []

    def walk(here: str, names: tuple[str, ...]):
        for e in g._out[here]:
            step = names + (e.name,)
            if e.range == v:
                found.append(step)
            elif len(step) < max_len:
                walk(e.range, step)

    walk(v, ())
    return [Path(v, names, v) for names in sorted(set(found))]


def oracle_status(g: Graph, v: str) -> Status:
    n = len(oracle_return_paths(g, v, 2 * len(g)))
    if n == 0:
        return Status.NOT_ON_CYCLE
    return Status.EXACTLY_ONE if n == 1 else Status.AT_LEAST_TWO
