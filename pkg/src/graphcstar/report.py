"""Report assembly and rendering for the command-line tool.

Every ``*_report`` function returns a plain dict that serializes to stable,
key-sorted JSON; ``render_*`` functions produce the text form.
"""

from __future__ import annotations

import json

from . import __version__
from .ckmatrix import algebra_dimension, build_family, span_dimension, vertex_decomposition_holds, verify_relations
from .classifier import (
    composition_series,
    h_unreached_by_cycles,
    is_stable_IH,
    nuclear_dimension,
    partition_sources,
    split_summand,
)
from .completion import Subgraph
from .condition_k import check_condition_k
from .graph import Graph, count_paths_from, sources
from .lattice import enumerate_lattice, maximal_chain, set_key

SCHEMA = 1


def dumps(obj: dict) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2) + "\n"


def _count(n) -> int | str:
    return "infinite" if n == float("inf") else n


def graph_summary(g: Graph) -> dict:
    d = g.scc
    return {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "sources": list(set_key(sources(g))),
        "nontrivialSccs": [list(set_key(d.components[i])) for i in sorted(d.nontrivial_indices)],
    }


def check_k_report(g: Graph) -> dict:
    return {"conditionK": check_condition_k(g).to_dict()}


def ideals_report(g: Graph) -> dict:
    lattice = enumerate_lattice(g)
    H = h_unreached_by_cycles(g)
    stab = is_stable_IH(g)
    return {
        "lattice": {
            **lattice.to_dict(),
            "maximalChain": [list(set_key(h)) for h in maximal_chain(lattice)],
        },
        "H": list(set_key(H)),
        "idealH": stab.descriptor.to_dict(),
        "pathCounts": {u: _count(count_paths_from(g, u)) for u in sorted(sources(g))},
    }


def series_report(g: Graph) -> dict:
    return {"series": composition_series(g).to_dict()}


def ndim_report(g: Graph) -> dict:
    return nuclear_dimension(g).to_dict()


def analysis_report(g: Graph) -> dict:
    k = check_condition_k(g)
    part = partition_sources(g)
    report = {
        "version": __version__,
        "graph": graph_summary(g),
        **check_k_report(g),
        **ideals_report(g),
        "sourcePartition": part.to_dict(),
        "S": list(set_key(part.none)),
        "Hprime": None,
        "splitSummand": None,
        "series": None,
        "verdict": ndim_report(g),
    }
    if k.holds:
        split = split_summand(g)
        report["Hprime"] = list(set_key(split.hprime))
        report["splitSummand"] = {
            "summand": split.summand.to_dict(),
            "remainder": {"vertices": list(split.remainder.vertices), "edges": [e.name for e in split.remainder.edges]},
        }
        report["series"] = composition_series(g).to_dict()
    return report


def subgraph_report(sub: Subgraph) -> dict:
    return {"vertices": list(sub.graph.vertices), "edges": sorted(sub.edge_names), "graph": sub.graph.serialize()}


def ck_report(g: Graph, dump: bool = False) -> dict:
    fam = build_family(g)
    rel = verify_relations(fam)
    report = {
        "basisSize": fam.size,
        "relations": rel.to_dict(),
        "algebraDimension": algebra_dimension(fam),
        "spanDimension": span_dimension(fam),
        "sumOfSquares": sum(count_paths_from(g, u) ** 2 for u in sources(g)),
        "vertexDecomposition": all(vertex_decomposition_holds(fam, v) for v in g.vertices),
    }
    if dump:
        report["matrices"] = fam.to_dict()
    return report


# ---------------------------------------------------------------------------
# text rendering


def _fmt(val) -> str:
    if val is None:
        return "n/a"
    return str(val).lower() if isinstance(val, bool) else str(val)


def _sets(sets) -> str:
    return ", ".join("{" + ",".join(s) + "}" for s in sets)


def render_check_k(rep: dict) -> str:
    k = rep["conditionK"]
    if k["holds"]:
        return "Condition (K) holds\n"
    lines = ["Condition (K) fails"]
    for viol in k["violations"]:
        lines.append(f"  vertex {viol['vertex']}: unique return path [{' '.join(viol['witness'])}]")
    return "\n".join(lines) + "\n"


def render_ideals(rep: dict) -> str:
    lat = rep["lattice"]
    lines = [f"saturated hereditary sets ({len(lat['elements'])}):"]
    for i, h in enumerate(lat["elements"]):
        lines.append(f"  [{i}] {{{','.join(h)}}}")
    lines.append("covers: " + ", ".join(f"{a}<{b}" for a, b in lat["hasse"]))
    lines.append("maximal chain: " + " < ".join("{" + ",".join(h) + "}" for h in lat["maximalChain"]))
    lines.append("H (reached by no cycle): {" + ",".join(rep["H"]) + "}")
    desc = rep["idealH"]
    parts = [f"M_{s['size']}" if s["kind"] == "matrix" else "K" for s in desc["summands"]]
    lines.append("I_H: " + (" + ".join(parts) or "0") + ("  (stable)" if desc["stable"] else "  (not stable)"))
    return "\n".join(lines) + "\n"


def render_series(rep: dict) -> str:
    s = rep["series"]
    lines = ["chain: " + " < ".join("{" + ",".join(h) + "}" for h in s["chain"])]
    for st in s["steps"]:
        lines.append(
            f"  {{{','.join(st['upper'])}}} / {{{','.join(st['lower'])}}}: "
            f"vertices {st['vertices']} edges {st['edges']} -> {st['classification']}"
        )
    if s["oInfinityStable"]:
        lines.append("no sources: every subquotient source-free; C*(E) is O_infinity-stable")
    return "\n".join(lines) + "\n"


def render_analysis(rep: dict) -> str:
    g = rep["graph"]
    out = [
        f"graph: {g['vertices']} vertices, {g['edges']} edges",
        f"sources: {{{','.join(g['sources'])}}}",
        f"nontrivial SCCs: {_sets(g['nontrivialSccs']) or 'none'}",
        "",
        render_check_k(rep).rstrip(),
        "",
        render_ideals(rep).rstrip(),
        "",
        "sources reaching every cycle: {" + ",".join(rep["sourcePartition"]["all"]) + "}, "
        "none: {" + ",".join(rep["sourcePartition"]["none"]) + "}, "
        "some: {" + ",".join(rep["sourcePartition"]["partial"]) + "}",
    ]
    if rep["Hprime"] is not None:
        out.append("H' (split summand): {" + ",".join(rep["Hprime"]) + "}")
    if rep["series"] is not None:
        out += ["", render_series({"series": rep["series"]}).rstrip()]
    out += ["", "nuclear dimension:", render_verdict(rep["verdict"]).rstrip()]
    return "\n".join(out) + "\n"


def render_verdict(d: dict) -> str:
    lines = []
    for i, r in enumerate(d["rules"], 1):
        mark = " [external fact]" if r.get("external_fact") else ""
        lines.append(f"{i:2d}. {r['fact']}{mark}\n      <- {r['cite']}")
    if d["kind"] == "exact":
        verdict = f"ndim = {d['value']}"
    elif d["kind"] == "interval":
        verdict = f"{d['lo']} <= ndim <= {d['hi']}"
    else:
        verdict = "inapplicable (Condition (K) fails)"
    lines.append(f"    => {verdict}")
    lines.append("    flags: " + ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(d["flags"].items())))
    return "\n".join(lines) + "\n"


def render_ck(rep: dict) -> str:
    rel = rep["relations"]
    lines = [f"basis size: {rep['basisSize']}"]
    if rel["ok"]:
        lines.append("all Cuntz-Krieger relations hold")
    for f in rel["failures"]:
        lines.append(f"FAILED {f['relation']} at {f['generator']}")
    lines.append(f"matrix units: {rep['algebraDimension']}  (span of generator words: {rep['spanDimension']})")
    lines.append(f"sum of squared path counts: {rep['sumOfSquares']}")
    return "\n".join(lines) + "\n"
