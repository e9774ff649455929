"""Small graphs used throughout the docs and tests."""

from importlib import resources

from ..graph import Graph, parse_graph

NAMES = ("chain3", "fig8", "loop1", "mixed", "o2", "t2", "toeplitz", "twocycles")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"no fixture named {name!r}")
    return resources.files(__name__).joinpath(f"{name}.graph").read_text(encoding="utf-8")


def load(name: str) -> Graph:
    return parse_graph(fixture_text(name))
