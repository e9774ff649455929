import random

import pytest
from hypothesis import given, settings

from graphcstar.graph import Graph, PreconditionError, sources
from graphcstar.lattice import (
    enumerate_lattice,
    hereditary_closure,
    ideal_descriptor,
    is_hereditary,
    is_saturated,
    maximal_chain,
    oracle_lattice,
    quotient_graph,
    restrict_graph,
    sat_her_closure,
    saturate,
)

from graphgen import graphs, random_graph

F = frozenset


@pytest.mark.parametrize(
    "name, T, expected",
    [("toeplitz", {"v"}, {"v", "w"}), ("twocycles", {"a"}, {"a", "u"}), ("o2", set(), set())],
)
def test_hereditary_closure(fx, name, T, expected):
    assert hereditary_closure(fx(name), T) == expected


@pytest.mark.parametrize(
    "name, T, expected",
    [("chain3", {"u"}, {"u", "v", "w"}), ("toeplitz", {"w"}, {"w"}), ("twocycles", {"u", "a", "b"}, {"u", "a", "b"})],
)
def test_saturate(fx, name, T, expected):
    assert saturate(fx(name), T) == expected


@pytest.mark.parametrize(
    "name, T, expected",
    [("chain3", {"v"}, {"u", "v", "w"}), ("o2", {"v"}, {"v"}), ("twocycles", {"b"}, {"b"})],
)
def test_sat_her_closure(fx, name, T, expected):
    assert sat_her_closure(fx(name), T) == expected


@pytest.mark.parametrize(
    "name, expected",
    [
        ("chain3", {F(), F("uvw")}),
        ("toeplitz", {F(), F({"w"}), F({"v", "w"})}),
        ("twocycles", {F(), F({"u"}), F({"b"}), F({"u", "b"}), F({"u", "a"}), F({"u", "a", "b"})}),
    ],
)
def test_enumerate_lattice(fx, name, expected):
    g = fx(name)
    assert set(enumerate_lattice(g).elements) == expected == oracle_lattice(g)


@pytest.mark.parametrize(
    "name, chain",
    [
        ("chain3", [F(), F("uvw")]),
        ("twocycles", [F(), F({"b"}), F({"u", "b"}), F({"u", "a", "b"})]),
        ("o2", [F(), F({"v"})]),
    ],
)
def test_maximal_chain(fx, name, chain):
    assert maximal_chain(enumerate_lattice(fx(name))) == chain


def test_hasse_edges_are_covers(fx):
    lat = enumerate_lattice(fx("twocycles"))
    assert len(lat.hasse) == 7
    for i, j in lat.hasse:
        assert lat.elements[i] < lat.elements[j]
        assert not any(lat.elements[i] < m < lat.elements[j] for m in lat.elements)


def test_oracle_size_guard():
    big = Graph.build([f"v{i}" for i in range(21)])
    with pytest.raises(PreconditionError):
        oracle_lattice(big)


def test_restrict_and_quotient(fx):
    g = fx("toeplitz")
    assert restrict_graph(g, {"w"}) == Graph.build(["w"])
    assert quotient_graph(g, {"w"}) == fx("loop1")
    g = fx("twocycles")
    assert restrict_graph(g, {"u"}) == Graph.build(["u"])
    assert quotient_graph(g, {"u"}) == Graph.build(
        ["a", "b"], [("a1", "a", "a"), ("a2", "a", "a"), ("b1", "b", "b"), ("b2", "b", "b")]
    )
    for name in ("chain3", "mixed", "fig8"):
        g = fx(name)
        assert restrict_graph(g, set()) == Graph.build([])
        assert quotient_graph(g, set()) == g


def test_restrict_requires_sat_her(fx):
    with pytest.raises(PreconditionError):
        restrict_graph(fx("chain3"), {"v"})


def test_ideal_descriptor(fx):
    d = ideal_descriptor(fx("t2"), {"u"})
    assert d.applicable and d.stable and [str(s) for s in d.summands] == ["K"]
    d = ideal_descriptor(fx("mixed"), {"u2", "x"})
    assert d.applicable and not d.stable and d.finite_dimensional
    assert [(s.source, s.size) for s in d.summands] == [("u2", 2)]
    d = ideal_descriptor(fx("chain3"), {"u", "v", "w"})
    assert [(s.source, s.size) for s in d.summands] == [("u", 3)] and d.dimension == 9
    # a cycle reaches v: refuse rather than guess
    d = ideal_descriptor(fx("t2"), {"u", "v"})
    assert not d.applicable and d.summands == ()


@settings(max_examples=200, deadline=None)
@given(graphs(max_vertices=6, max_edges=10))
def test_lattice_is_closed_and_matches_oracle(g):
    lat = enumerate_lattice(g)
    assert set(lat.elements) == oracle_lattice(g)
    assert F() in lat and F(g.vertices) in lat
    for A in lat.elements:
        assert is_hereditary(g, A) and is_saturated(g, A)
        for B in lat.elements:
            assert lat.join(g, A, B) in lat
            assert lat.meet(A, B) in lat


def test_random_graphs_match_oracle():
    rng = random.Random(20261016)
    for _ in range(200):
        g = random_graph(rng, max_vertices=8, max_edges=16)
        assert set(enumerate_lattice(g).elements) == oracle_lattice(g)


@settings(max_examples=150, deadline=None)
@given(graphs(max_vertices=5, max_edges=8))
def test_restrict_and_quotient_preserve_no_sources(g):
    if sources(g):
        return
    for H in enumerate_lattice(g).elements:
        assert not sources(restrict_graph(g, H))
        assert not sources(quotient_graph(g, H))
