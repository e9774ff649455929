"""Acceptance criteria 1 to 8, each recorded as one pass/fail line."""

import pathlib
import random
import subprocess
import sys
import time

from graphcstar import fixtures, report
from graphcstar.ckmatrix import algebra_dimension, build_family, verify_relations
from graphcstar.classifier import (
    Kind,
    h_unreached_by_cycles,
    is_full_extension,
    is_stable_IH,
    nuclear_dimension,
    split_summand,
)
from graphcstar.completion import (
    Subgraph,
    add_return_pairs,
    entrance_completion,
    limit_sequence,
    receiver_equality,
)
from graphcstar.condition_k import Status, check_condition_k, oracle_return_paths, return_path_status
from graphcstar.graph import count_paths_from, sources
from graphcstar.lattice import (
    enumerate_lattice,
    is_hereditary,
    is_saturated,
    oracle_lattice,
    quotient_graph,
    restrict_graph,
)

from graphgen import (
    chain,
    corpus,
    oracle_cycle_vertices,
    oracle_path_count,
    oracle_reaches,
    oracle_sources,
    random_graph,
)

GOLDENS = pathlib.Path(__file__).parent / "goldens"


def k_corpus():
    return [g for g in corpus() if check_condition_k(g).holds]


def test_criterion_1_condition_k_oracle(record_criterion):
    start = time.perf_counter()
    graphs = corpus()
    mismatches = 0
    checked = 0
    for g in graphs:
        bound = 2 * len(g.vertices)
        for v in g.vertices:
            st = return_path_status(g, v)
            ranked = sorted(oracle_return_paths(g, v, bound), key=lambda p: p.sort_key())
            expected = [Status.NOT_ON_CYCLE, Status.EXACTLY_ONE, Status.AT_LEAST_TWO][min(len(ranked), 2)]
            if st.status is not expected or list(st.witnesses) != ranked[: len(st.witnesses)]:
                mismatches += 1
            checked += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    record_criterion(
        1, "Condition (K) agrees with oracle", ok,
        f"{len(graphs)} graphs, {checked} vertices, {mismatches} mismatches, {elapsed:.1f}s < 60s",
    )
    assert ok


def test_criterion_2_lattice_oracle(record_criterion):
    start = time.perf_counter()
    rng = random.Random(20261016)
    graphs = list(corpus()) + [random_graph(rng, max_vertices=8, max_edges=16) for _ in range(200)]
    mismatches = sum(set(enumerate_lattice(g).elements) != oracle_lattice(g) for g in graphs)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 120
    record_criterion(
        2, "lattice agrees with powerset oracle", ok,
        f"{len(graphs)} graphs, {mismatches} mismatches, {elapsed:.1f}s < 120s",
    )
    assert ok


def test_criterion_3_ck_relations(record_criterion):
    failures = []
    acyclic = [g for g in corpus() if not g.has_cycle()]
    for g in acyclic:
        fam = build_family(g)
        expected = sum(count_paths_from(g, u) ** 2 for u in sources(g))
        if not verify_relations(fam).ok or algebra_dimension(fam) != expected:
            failures.append(g)
    for n in range(1, 9):
        fam = build_family(chain(n))
        if not verify_relations(fam).ok or algebra_dimension(fam) != n * n:
            failures.append(chain(n))
    ok = not failures
    record_criterion(3, "Cuntz-Krieger relations and dimension", ok, f"{len(acyclic)} acyclic graphs, chains 1..8, {len(failures)} failures")
    assert ok


def _random_k_host(rng):
    while True:
        g = random_graph(rng, max_vertices=6, max_edges=10)
        if check_condition_k(g).holds:
            return g


def test_criterion_4_constructions(record_criterion):
    rng = random.Random(4)
    failures = []
    for i in range(100):
        host = _random_k_host(rng)
        f = Subgraph.of(
            host,
            [v for v in host.vertices if rng.random() < 0.3],
            [e.name for e in host.edges if rng.random() < 0.3],
        )
        fp = add_return_pairs(host, f)
        if not check_condition_k(fp.graph).holds:
            failures.append((i, "add_return_pairs"))
        done = entrance_completion(host, f)
        if not receiver_equality(host, done) or entrance_completion(host, done) != done:
            failures.append((i, "entrance_completion"))
        stages = limit_sequence(host)
        monotone = all(a <= b for a, b in zip(stages, stages[1:]))
        stagewise_k = all(check_condition_k(s.graph).holds for s in stages)
        ends = (not stages and not host.vertices) or (stages and stages[-1].graph == host)
        if not (monotone and stagewise_k and ends):
            failures.append((i, "limit_sequence"))
    ok = not failures
    record_criterion(4, "completion constructions", ok, f"100 hosts, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_5_restriction_quotient(record_criterion):
    failures = 0
    pairs = 0
    for g in k_corpus():
        source_free = not oracle_sources(g)
        for H in enumerate_lattice(g).elements:
            pairs += 1
            eh, q = restrict_graph(g, H), quotient_graph(g, H)
            if not (check_condition_k(eh).holds and check_condition_k(q).holds):
                failures += 1
            if source_free and (oracle_sources(eh) or oracle_sources(q)):
                failures += 1
        H = h_unreached_by_cycles(g)
        if not (is_hereditary(g, H) and is_saturated(g, H)):
            failures += 1
        elif restrict_graph(g, H).has_cycle() or oracle_sources(quotient_graph(g, H)):
            failures += 1
    ok = failures == 0
    record_criterion(5, "restriction, quotient and no-cycle ideal", ok, f"{pairs} (graph, H) pairs, {failures} failures")
    assert ok


def test_criterion_6_stability_and_fullness(record_criterion):
    failures = 0
    graphs = corpus()
    for g in graphs:
        srcs = oracle_sources(g)
        cyc = oracle_cycle_vertices(g)
        res = is_stable_IH(g)
        oracle_stable = all(any(oracle_reaches(g, u, c) for c in cyc) for u in srcs)
        no_finite = all(s.size == float("inf") for s in res.descriptor.summands)
        if not (res.stable == oracle_stable == no_finite == res.descriptor.stable):
            failures += 1
        full = is_full_extension(g)
        applicable = bool(srcs) and bool(cyc) and check_condition_k(g).holds
        if (full is None) == applicable:
            failures += 1
        elif applicable and full != all(oracle_reaches(g, u, c) for u in srcs for c in cyc):
            failures += 1
    ok = failures == 0
    record_criterion(6, "stability and fullness equivalences", ok, f"{len(graphs)} graphs, {failures} failures")
    assert ok


def test_criterion_7_split_summand(record_criterion):
    failures = 0
    graphs = k_corpus()
    for g in graphs:
        s = split_summand(g)
        cyc = oracle_cycle_vertices(g)
        good = is_hereditary(g, s.hprime) and is_saturated(g, s.hprime)
        good &= s.summand.applicable and all(oracle_path_count(g, m.source) != float("inf") for m in s.summand.summands)
        good &= not any(oracle_reaches(g, v, c) for v in s.hprime for c in cyc)
        good &= oracle_sources(s.remainder) <= oracle_sources(g)
        failures += not good
    ok = failures == 0
    record_criterion(7, "finite dimensional summand split", ok, f"{len(graphs)} graphs with (K), {failures} failures")
    assert ok


EXPECTED_VERDICTS = {
    "chain3": (Kind.EXACT, 0),
    "mixed": (Kind.EXACT, 1),
    "t2": (Kind.EXACT, 1),
    "o2": (Kind.EXACT, 1),
    "twocycles": (Kind.INTERVAL, None),
    "toeplitz": (Kind.INAPPLICABLE, None),
}


def test_criterion_8_verdict_goldens(record_criterion, tmp_path):
    problems = []
    for name, (kind, value) in EXPECTED_VERDICTS.items():
        g = fixtures.load(name)
        v = nuclear_dimension(g)
        if (v.kind, v.value) != (kind, value):
            problems.append(f"{name}: {v.kind.value} {v.value}")
        golden = (GOLDENS / f"ndim_{name}.json").read_text()
        if report.dumps(report.ndim_report(g)) != golden:
            problems.append(f"{name}: library JSON differs")
        path = tmp_path / f"{name}.graph"
        path.write_text(fixtures.fixture_text(name))
        out = subprocess.run(
            [sys.executable, "-m", "graphcstar", "ndim", "--format", "json", "--input", str(path)],
            capture_output=True, text=True,
        ).stdout
        if out != golden:
            problems.append(f"{name}: CLI JSON differs")
    t2 = nuclear_dimension(fixtures.load("t2")).flags
    if not (t2["stableIdeal"] is True and t2["fullExtension"] is True):
        problems.append("t2 flags")
    if "no-sources" not in [r.cite for r in nuclear_dimension(fixtures.load("o2")).rules]:
        problems.append("o2 rule")
    tc = nuclear_dimension(fixtures.load("twocycles"))
    if (tc.lo, tc.hi) != (1, 2) or tc.flags["fullExtension"] is not False:
        problems.append("twocycles interval")
    ok = not problems
    record_criterion(8, "verdict goldens", ok, "; ".join(problems) or f"{len(EXPECTED_VERDICTS)} goldens byte-identical")
    assert ok
