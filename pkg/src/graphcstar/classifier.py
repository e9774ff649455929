"""Structure flags and the nuclear-dimension verdict for finite graphs.

Nothing here is computed analytically.  Each verdict is derived from graph
facts by a fixed chain of rules, and every step records the result it rests
on, drawn from :data:`CITATIONS`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .condition_k import check_condition_k
from .graph import (
    INFINITE,
    Graph,
    PreconditionError,
    count_paths_from,
    reachable_from,
    reaches_every_cycle,
    reaches_some_cycle,
    reaching,
    sources,
)
from .lattice import (
    IdealDescriptor,
    enumerate_lattice,
    ideal_descriptor,
    is_hereditary,
    is_saturated,
    maximal_chain,
    quotient_graph,
    restrict_graph,
    set_key,
)

__all__ = [
    "CITATIONS",
    "CompositionSeries",
    "NdimVerdict",
    "Rule",
    "SeriesStep",
    "SourcePartition",
    "SplitSummand",
    "StabilityResult",
    "composition_series",
    "h_unreached_by_cycles",
    "is_full_extension",
    "is_stable_IH",
    "nuclear_dimension",
    "partition_sources",
    "split_summand",
]

CITATIONS = {
    "acyclic": "finite graphs without cycles have finite dimensional graph algebras",
    "ndim-display": "under the source dichotomy: ndim is 0 without cycles and 1 with a cycle",
    "condition-k": "Condition (K): every vertex on a cycle has at least two return paths",
    "k-hypothesis": "the ndim bounds for graph algebras assume Condition (K)",
    "no-sources": "finite graphs with Condition (K) and no sources give O_infinity-stable algebras",
    "o-infinity-ndim": "separable nuclear O_infinity-stable algebras have ndim 1",
    "ndim-at-most-2": "finite graphs with Condition (K) have ndim at most 2",
    "source-dichotomy": "Condition (K) and every source reaching all cycles or none give ndim at most 1",
    "no-cycle-ideal": "vertices reached by no cycle: saturated hereditary, acyclic restriction, source-free quotient",
    "stable-ideal": "the no-cycle ideal is stable iff every source reaches a cycle, and is then K^m for m sources",
    "full-extension": "with (K), a source and a cycle: the extension is full iff every source reaches every cycle",
    "full-extension-ndim": "a full extension of an O_infinity-stable algebra by a stable AF ideal has ndim at most 1",
    "split": "sources reaching no cycle split off a finite dimensional direct summand",
    "af-lower": "ndim 0 means AF, and a graph with a cycle has a non-AF algebra (external fact)",
}


class Kind(enum.Enum):
    EXACT = "exact"
    INTERVAL = "interval"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Rule:
    fact: str
    cite: str
    external_fact: bool = False

    def __post_init__(self):
        if self.cite not in CITATIONS:
            raise KeyError(f"unknown citation key {self.cite!r}")

    def to_dict(self) -> dict:
        d = {"fact": self.fact, "cite": CITATIONS[self.cite]}
        if self.external_fact:
            d["external_fact"] = True
        return d


# ---------------------------------------------------------------------------
# the ideal of vertices no cycle reaches


def h_unreached_by_cycles(g: Graph) -> frozenset[str]:
    """Vertices that receive no infinite backward path, i.e. no cycle reaches them.

    In a finite graph a backward walk that never stops must revisit a vertex,
    so an infinite path ends at `v` exactly when some cycle reaches `v`.
    """
    downstream = set()
    for c in g.scc.cycle_vertices():
        downstream |= reachable_from(g, c)
    H = frozenset(v for v in g.vertices if v not in downstream)
    assert is_hereditary(g, H) and is_saturated(g, H)
    assert not restrict_graph(g, H).has_cycle()
    assert not sources(quotient_graph(g, H))
    return H


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    descriptor: IdealDescriptor

    @property
    def m(self) -> int:
        return self.descriptor.m


def is_stable_IH(g: Graph) -> StabilityResult:
    """Stability of the ideal of :func:`h_unreached_by_cycles`.

    ``stable`` comes from reachability alone; ``descriptor`` is built from
    path counts, so the two can be checked against each other.
    """
    stable = all(reaches_some_cycle(g, u) for u in sources(g))
    return StabilityResult(stable, ideal_descriptor(g, h_unreached_by_cycles(g)))


def is_full_extension(g: Graph) -> bool | None:
    """Fullness of the extension by the ideal of vertices no cycle reaches.

    Returns None (not applicable) unless the graph has Condition (K), a
    source and a cycle.
    """
    srcs = sources(g)
    if not srcs or not g.has_cycle() or not check_condition_k(g).holds:
        return None
    return all(reaches_every_cycle(g, u) for u in srcs)


@dataclass(frozen=True)
class SourcePartition:
    none: frozenset[str]
    all: frozenset[str]
    partial: frozenset[str]

    @property
    def dichotomy_holds(self) -> bool:
        return not self.partial

    def to_dict(self) -> dict:
        return {k: list(set_key(getattr(self, k))) for k in ("none", "all", "partial")}


def partition_sources(g: Graph) -> SourcePartition:
    """Sources by how many cycles they reach.  Without cycles all go to `none`."""
    none, every, partial = set(), set(), set()
    for u in sources(g):
        if not reaches_some_cycle(g, u):
            none.add(u)
        elif reaches_every_cycle(g, u):
            every.add(u)
        else:
            partial.add(u)
    return SourcePartition(frozenset(none), frozenset(every), frozenset(partial))


@dataclass(frozen=True)
class SplitSummand:
    split_sources: frozenset[str]
    hprime: frozenset[str]
    summand: IdealDescriptor
    remainder: Graph


def split_summand(g: Graph) -> SplitSummand:
    """Split off the finite dimensional summand fed by sources reaching no cycle.

    The split set holds the vertices that no cycle reaches and that are
    reached only by such sources.  Vertices reached by no source at all are
    reached by a cycle, so they never qualify.
    """
    report = check_condition_k(g)
    if not report.holds:
        raise PreconditionError(f"graph fails Condition (K) at {report.violations[0][0]!r}")
    srcs = sources(g)
    S = frozenset(u for u in srcs if not reaches_some_cycle(g, u))
    no_cycle = h_unreached_by_cycles(g)
    hprime = frozenset(v for v in no_cycle if (reaching(g, [v]) & srcs) <= S)
    assert is_hereditary(g, hprime) and is_saturated(g, hprime)
    summand = ideal_descriptor(g, hprime)
    assert summand.finite_dimensional
    assert all(count_paths_from(g, v) != INFINITE for v in hprime)
    remainder = quotient_graph(g, hprime)
    assert sources(remainder) == srcs - S, "split created new sources"
    return SplitSummand(S, hprime, summand, remainder)


# ---------------------------------------------------------------------------
# composition series


@dataclass(frozen=True)
class SeriesStep:
    lower: frozenset[str]
    upper: frozenset[str]
    graph: Graph
    has_cycle: bool
    source_free: bool | None = None

    @property
    def classification(self) -> str:
        return "purely-infinite-simple" if self.has_cycle else "finite-dimensional"

    def to_dict(self) -> dict:
        d = {
            "lower": list(set_key(self.lower)),
            "upper": list(set_key(self.upper)),
            "vertices": list(self.graph.vertices),
            "edges": [e.name for e in self.graph.edges],
            "classification": self.classification,
        }
        if self.source_free is not None:
            d["sourceFree"] = self.source_free
        return d


@dataclass(frozen=True)
class CompositionSeries:
    chain: tuple[frozenset[str], ...]
    steps: tuple[SeriesStep, ...]
    o_infinity_stable: bool | None = None

    def to_dict(self) -> dict:
        return {
            "chain": [list(set_key(H)) for H in self.chain],
            "steps": [s.to_dict() for s in self.steps],
            "oInfinityStable": self.o_infinity_stable,
        }


def composition_series(g: Graph) -> CompositionSeries:
    """Subquotients along the canonical maximal chain of saturated hereditary sets.

    Every subquotient is checked to be simple (its only saturated hereditary
    sets are empty and everything).  Without sources, each subquotient is
    also checked source-free and the whole algebra is flagged O_infinity-stable.
    """
    report = check_condition_k(g)
    if not report.holds:
        raise PreconditionError(f"graph fails Condition (K) at {report.violations[0][0]!r}")
    chain = maximal_chain(enumerate_lattice(g))
    no_sources = not sources(g)
    steps = []
    for lower, upper in zip(chain, chain[1:]):
        restricted = restrict_graph(g, upper)
        sub = quotient_graph(restricted, lower)
        if len(enumerate_lattice(sub)) != 2:
            raise AssertionError(f"subquotient {list(set_key(upper - lower))} is not simple")
        source_free = None
        if no_sources:
            source_free = not sources(sub)
            assert source_free
        steps.append(SeriesStep(lower, upper, sub, sub.has_cycle(), source_free))
    return CompositionSeries(tuple(chain), tuple(steps), True if no_sources else None)


# ---------------------------------------------------------------------------
# the verdict


@dataclass(frozen=True)
class NdimVerdict:
    kind: Kind
    rules: tuple[Rule, ...]
    value: int | None = None
    lo: int | None = None
    hi: int | None = None
    flags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.rules:
            raise ValueError("a verdict needs a non-empty rule chain")

    def describe(self) -> str:
        if self.kind is Kind.EXACT:
            return f"ndim = {self.value}"
        if self.kind is Kind.INTERVAL:
            return f"{self.lo} <= ndim <= {self.hi}"
        return "inapplicable (Condition (K) fails)"

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.kind is Kind.EXACT:
            d["value"] = self.value
        elif self.kind is Kind.INTERVAL:
            d["lo"], d["hi"] = self.lo, self.hi
        d["rules"] = [r.to_dict() for r in self.rules]
        d["flags"] = dict(self.flags)
        return d


def _flags(g: Graph, k_holds: bool, has_cycle: bool) -> tuple[dict, list[Rule]]:
    """Supplementary facts attached to every verdict."""
    srcs = sources(g)
    stab = is_stable_IH(g)
    full = is_full_extension(g)
    part = partition_sources(g)
    o_inf = None
    if k_holds:
        quotient = quotient_graph(g, h_unreached_by_cycles(g))
        o_inf = check_condition_k(quotient).holds and not sources(quotient)
    flags = {
        "conditionK": k_holds,
        "hasCycle": has_cycle,
        "stableIdeal": stab.stable,
        "fullExtension": full,
        "thmB": k_holds and part.dichotomy_holds,
        "oInfinityQuotient": o_inf,
    }
    notes = [
        Rule(
            f"ideal of vertices reached by no cycle: {stab.descriptor}; "
            + ("stable" if stab.stable else "not stable")
            + f" ({len(srcs)} source(s))",
            "stable-ideal",
        )
    ]
    if full is not None:
        notes.append(Rule("extension is " + ("full" if full else "not full"), "full-extension"))
    return flags, notes


def _split_notes(g: Graph) -> list[Rule]:
    split = split_summand(g)
    notes = []
    if split.hprime:
        notes.append(
            Rule(
                f"sources {list(set_key(split.split_sources))} reach no cycle; "
                f"{list(set_key(split.hprime))} carries the summand {split.summand}",
                "split",
            )
        )
    rem = split.remainder
    if not sources(rem):
        return notes
    stable = is_stable_IH(rem)
    full = is_full_extension(rem)
    ok = stable.stable and full is True
    notes.append(
        Rule(
            "remainder: ideal "
            + ("stable" if stable.stable else "not stable")
            + ", extension "
            + ("full" if full else "not full")
            + ("; hypotheses hold, corroborating ndim 1" if ok else "; hypotheses fail"),
            "full-extension-ndim",
        )
    )
    return notes


def nuclear_dimension(g: Graph) -> NdimVerdict:
    """Rule engine, first match wins:

    1. no cycles: exact 0;
    2. Condition (K) fails: inapplicable;
    3. no sources: exact 1;
    4. every source reaches all cycles or none: exact 1;
    5. otherwise: between 1 and 2.
    """
    has_cycle = g.has_cycle()
    k_report = check_condition_k(g)
    flags, notes = _flags(g, k_report.holds, has_cycle)

    if not has_cycle:
        rules = (
            Rule("graph has no cycles", "acyclic"),
            Rule("no cycles gives ndim 0", "ndim-display"),
        )
        return NdimVerdict(Kind.EXACT, rules + tuple(notes), value=0, flags=flags)

    if not k_report.holds:
        v, witness = k_report.violations[0]
        rules = (
            Rule(f"vertex {v} has the unique return path {witness.to_list()}", "condition-k"),
            Rule("no rule applies without Condition (K)", "k-hypothesis"),
        )
        return NdimVerdict(Kind.INAPPLICABLE, rules + tuple(notes), flags=flags)

    base = [
        Rule("graph has a cycle", "ndim-display"),
        Rule("Condition (K) holds at every vertex", "condition-k"),
    ]
    srcs = sources(g)
    if not srcs:
        rules = base + [
            Rule("graph has no sources, so C*(E) is O_infinity-stable", "no-sources"),
            Rule("O_infinity-stable gives ndim 1", "o-infinity-ndim"),
        ]
        return NdimVerdict(Kind.EXACT, tuple(rules + notes), value=1, flags=flags)

    part = partition_sources(g)
    if part.dichotomy_holds:
        rules = base + [
            Rule(
                f"sources reaching every cycle {list(set_key(part.all))}, "
                f"reaching none {list(set_key(part.none))}, partial []",
                "source-dichotomy",
            ),
            Rule("a cycle is present, so ndim is exactly 1", "ndim-display"),
        ]
        notes = _split_notes(g) + notes
        return NdimVerdict(Kind.EXACT, tuple(rules + notes), value=1, flags=flags)

    rules = base + [
        Rule(f"sources reaching only some cycles: {list(set_key(part.partial))}", "source-dichotomy"),
        Rule("no-cycle ideal is AF and the quotient is source-free", "no-cycle-ideal"),
        Rule("upper bound 2", "ndim-at-most-2"),
        Rule("lower bound 1", "af-lower", external_fact=True),
    ]
    return NdimVerdict(Kind.INTERVAL, tuple(rules + notes), lo=1, hi=2, flags=flags)
