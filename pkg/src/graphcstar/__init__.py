"""Combinatorial analysis of finite graphs and their graph C*-algebras."""

from .graph import (
    INFINITE,
    Edge,
    Graph,
    GraphError,
    ParseError,
    Path,
    PreconditionError,
    count_paths_from,
    parse_graph,
    reaches,
    reaches_every_cycle,
    reaches_some_cycle,
    scc,
    serialize_graph,
    sources,
)

__version__ = "0.1.0"
