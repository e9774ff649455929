import pytest
from hypothesis import given, settings

from graphcstar.classifier import (
    CITATIONS,
    Kind,
    composition_series,
    h_unreached_by_cycles,
    is_full_extension,
    is_stable_IH,
    nuclear_dimension,
    partition_sources,
    split_summand,
)
from graphcstar.condition_k import check_condition_k
from graphcstar.graph import Graph, PreconditionError

from graphgen import graphs

F = frozenset


@pytest.mark.parametrize("name, expected", [("t2", {"u"}), ("o2", set()), ("twocycles", {"u"}), ("chain3", {"u", "v", "w"})])
def test_h_unreached_by_cycles(fx, name, expected):
    assert h_unreached_by_cycles(fx(name)) == expected


def test_is_stable_IH(fx):
    r = is_stable_IH(fx("t2"))
    assert r.stable and r.m == 1 and [str(s) for s in r.descriptor.summands] == ["K"]
    r = is_stable_IH(fx("mixed"))
    assert not r.stable
    assert [(s.source, s.size) for s in r.descriptor.summands] == [("u1", float("inf")), ("u2", 2)]
    r = is_stable_IH(fx("o2"))
    assert r.stable and r.m == 0


def test_is_full_extension(fx):
    assert is_full_extension(fx("t2")) is True
    assert is_full_extension(fx("twocycles")) is False
    assert is_full_extension(fx("o2")) is None
    assert is_full_extension(fx("chain3")) is None
    assert is_full_extension(fx("toeplitz")) is None


def test_partition_sources(fx):
    p = partition_sources(fx("mixed"))
    assert (p.all, p.none, p.partial) == ({"u1"}, {"u2"}, set())
    assert partition_sources(fx("twocycles")).partial == {"u"}
    p = partition_sources(fx("chain3"))
    assert (p.none, p.all, p.partial) == ({"u"}, set(), set())


def test_split_summand(fx):
    s = split_summand(fx("mixed"))
    assert s.hprime == {"u2", "x"}
    assert [(m.source, m.size) for m in s.summand.summands] == [("u2", 2)]
    assert s.remainder == fx("t2").relabel({"u": "u1"}, {"f": "f1"})
    s = split_summand(fx("chain3"))
    assert s.hprime == {"u", "v", "w"} and s.remainder == Graph.build([])
    assert [(m.source, m.size) for m in s.summand.summands] == [("u", 3)]
    s = split_summand(fx("o2"))
    assert s.hprime == set() and s.remainder == fx("o2")
    with pytest.raises(PreconditionError):
        split_summand(fx("toeplitz"))


def test_composition_series(fx):
    s = composition_series(fx("o2"))
    assert len(s.steps) == 1 and s.steps[0].graph == fx("o2")
    assert s.steps[0].classification == "purely-infinite-simple"
    assert s.o_infinity_stable is True and s.steps[0].source_free is True

    s = composition_series(fx("twocycles"))
    assert list(s.chain) == [F(), F({"b"}), F({"u", "b"}), F({"u", "a", "b"})]
    assert [st.classification for st in s.steps] == [
        "purely-infinite-simple",
        "finite-dimensional",
        "purely-infinite-simple",
    ]
    assert [st.graph.vertices for st in s.steps] == [("b",), ("u",), ("a",)]
    assert s.o_infinity_stable is None

    s = composition_series(fx("chain3"))
    assert len(s.steps) == 1 and s.steps[0].classification == "finite-dimensional"
    with pytest.raises(PreconditionError):
        composition_series(fx("loop1"))


@pytest.mark.parametrize(
    "name, kind, value",
    [
        ("chain3", Kind.EXACT, 0),
        ("mixed", Kind.EXACT, 1),
        ("t2", Kind.EXACT, 1),
        ("o2", Kind.EXACT, 1),
        ("fig8", Kind.EXACT, 1),
        ("twocycles", Kind.INTERVAL, None),
        ("toeplitz", Kind.INAPPLICABLE, None),
        ("loop1", Kind.INAPPLICABLE, None),
    ],
)
def test_verdicts(fx, name, kind, value):
    v = nuclear_dimension(fx(name))
    assert v.kind is kind
    assert v.value == value
    if kind is Kind.INTERVAL:
        assert (v.lo, v.hi) == (1, 2)
        assert any(r.external_fact for r in v.rules)


def test_o2_takes_the_no_sources_rule(fx):
    v = nuclear_dimension(fx("o2"))
    assert "no-sources" in [r.cite for r in v.rules]


def test_t2_flags(fx):
    flags = nuclear_dimension(fx("t2")).flags
    assert flags["stableIdeal"] is True and flags["fullExtension"] is True and flags["thmB"] is True


def test_empty_graph(fx):
    v = nuclear_dimension(Graph.build([]))
    assert v.kind is Kind.EXACT and v.value == 0


@settings(max_examples=300, deadline=None)
@given(graphs(max_vertices=5, max_edges=8))
def test_verdict_consistency(g):
    v = nuclear_dimension(g)
    assert v.rules and all(r.cite in CITATIONS for r in v.rules)
    assert (v.kind is Kind.EXACT and v.value == 0) == (not g.has_cycle())
    if v.kind is Kind.EXACT and v.value == 1:
        assert g.has_cycle() and check_condition_k(g).holds
    if v.kind is Kind.INAPPLICABLE:
        assert not check_condition_k(g).holds


@settings(max_examples=100, deadline=None)
@given(graphs(max_vertices=4, max_edges=7))
def test_verdict_invariant_under_renaming(g):
    h = g.relabel({v: v.upper() + "_" for v in g.vertices}, {e.name: "E" + e.name for e in g.edges})
    a, b = nuclear_dimension(g), nuclear_dimension(h)
    assert (a.kind, a.value, a.lo, a.hi) == (b.kind, b.value, b.lo, b.hi)
    assert a.flags == b.flags
