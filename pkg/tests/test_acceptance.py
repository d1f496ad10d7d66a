"""Acceptance criteria 1-10.

Each test prints one ``[criterion N] PASS|FAIL ...`` line. Run them alone
with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import math
import os
import sys
import time

import numpy as np
import pytest

from instances import FAMILIES, instance
from pargraph import generators as gen
from pargraph.algorithms import coloring, densest_subgraph, kcore, ldd, msf, set_cover, spanner, triangle_count
from pargraph.bench import checksum
from pargraph.frontier import VertexSubset, edge_map
from pargraph.graph import build_csr, directed_graph, symmetric_graph
from pargraph.histogram import histogram
from pargraph.oracles import reference as ref
from pargraph.oracles import verify
from pargraph.parallel import max_workers, workers
from pargraph.primitives import test_and_set_batch as _tas
from pargraph.problems import PROBLEMS, solve

SIZES = (40, 250, 900, 2000)


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str, gated: bool = True) -> None:
        tag = ("PASS" if ok else "FAIL") + ("" if gated else " (reported, not gated)")
        with capsys.disabled():
            print(f"\n[criterion {n}] {tag} {detail}")

    return emit


def er_graph(n: int, p: float, seed: int):
    return gen.er(n, p, seed=seed)


# ---------------------------------------------------------------------------


def test_criterion_01_oracle_equivalence(report):
    start = time.perf_counter()
    runs, failures = 0, []
    for problem in PROBLEMS:
        for i in range(50):
            family = FAMILIES[i % len(FAMILIES)]
            n = SIZES[(i // len(FAMILIES)) % len(SIZES)]
            seed = 1000 * i + 7
            threads = (1, 2)[(i // 2) % 2]
            G, params = instance(problem, family, n, seed)
            with workers(threads):
                out = solve(problem, G, params, seed)
            rep = verify(problem, G, params, seed, out)
            runs += 1
            if not rep.passed:
                failures.append(f"{problem}/{family}/n={G.n}/seed={seed}: {rep.detail}")
    secs = time.perf_counter() - start
    ok = not failures and secs < 300
    report(1, ok, f"{runs - len(failures)}/{runs} verified in {secs:.1f}s" + (f"; first: {failures[0]}" if failures else ""))
    assert not failures, failures[:5]
    assert secs < 300


def test_criterion_02_torus_structure(report):
    G = gen.torus3d(10)
    c = kcore(G)
    core_ok = bool(np.all(c.coreness == 6)) and c.rounds == 1
    F = msf(gen.torus3d(10).with_weights(np.ones(G.m, dtype=np.int64)), 0)
    msf_ok = len(F.u) == G.n - 1
    tc = triangle_count(G)
    ok = core_ok and msf_ok and tc == 0
    report(2, ok, f"coreness={set(c.coreness.tolist())} rounds={c.rounds} msf_edges={len(F.u)} tc={tc}")
    assert ok


def test_criterion_03_ldd_guarantee(report):
    n, beta = 1000, 0.2
    G = er_graph(n, 0.01, 3)
    und = G.undirected_edges()
    m = und.src.size
    radius = 4 * math.log(n) / beta
    cuts, bad = [], []
    for seed in range(100):
        lab = ldd(G, beta, seed)
        cuts.append(int(np.count_nonzero(lab[und.src] != lab[und.dst])))
        rep = verify("ldd", G, {"beta": beta}, seed, lab)
        if not rep.passed:
            bad.append(rep.detail)
    mean = float(np.mean(cuts))
    limit = 2 * beta * m * 1.25
    ok = mean <= limit and not bad
    report(3, ok, f"mean cut {mean:.1f} <= {limit:.1f} (m={m}); radius bound {radius:.1f}; violations {len(bad)}")
    assert not bad, bad[:3]
    assert mean <= limit


def test_criterion_04_densest_subgraph(report):
    eps = 0.001
    rng = np.random.default_rng(4)
    violations = 0
    for t in range(200):
        n = int(rng.integers(2, 17))
        p = rng.uniform(0.1, 0.9)
        iu = np.triu_indices(n, 1)
        keep = rng.random(iu[0].size) < p
        G = symmetric_graph(n, list(zip(iu[0][keep].tolist(), iu[1][keep].tolist())))
        best, _ = ref.densest_brute(G)
        got = densest_subgraph(G, eps).density
        if got < best / (2 * (1 + eps)) - 1e-12:
            violations += 1
    report(4, violations == 0, f"{violations} violations over 200 instances with n <= 16")
    assert violations == 0


def test_criterion_05_spanner(report):
    n, k = 2000, 4
    G = er_graph(n, 0.01, 5)
    comps = ref.canonical_labels(ref.components(G))
    limit = 4 * n ** (1 + 1 / k)
    disconnected, oversize, stretch_fail = 0, 0, []
    sizes = []
    for seed in range(100):
        H = spanner(G, k, seed)
        sizes.append(len(H))
        uf = ref.UnionFind(n)
        for u, v in H.tolist():
            uf.union(u, v)
        if not np.array_equal(ref.canonical_labels([uf.find(v) for v in range(n)]), comps):
            disconnected += 1
        if len(H) > limit:
            oversize += 1
        if seed < 10:
            rep = verify("spanner", G, {"k": k}, seed, H)
            if not rep.passed:
                stretch_fail.append(rep.detail)
    ok = not (disconnected or oversize or stretch_fail)
    report(5, ok, f"max |H|={max(sizes)} <= {limit:.0f}; disconnected={disconnected}; "
                  f"stretch<=8k failures={len(stretch_fail)}")
    assert ok, stretch_fail[:3]


def test_criterion_06_coloring_and_set_cover(report):
    color_bad = 0
    tested = 0
    for i in range(60):
        G, _ = instance("coloring", FAMILIES[i % len(FAMILIES)], SIZES[i % len(SIZES)], i)
        for h in ("LLF", "FIRST"):
            c = coloring(G, i, h)
            delta = int(G.degrees().max()) if G.n else 0
            tested += 1
            if np.unique(c).size > delta + 1 or any(c[u] == c[v] for u, v in ref.undirected_pairs(G)):
                color_bad += 1
    rng = np.random.default_rng(6)
    cover_bad, worst = 0, 0.0
    for seed in range(60):
        sets, elements = int(rng.integers(3, 13)), int(rng.integers(4, 16))
        pairs = [(s, sets + e) for s in range(sets) for e in range(elements) if rng.random() < 0.3]
        G = directed_graph(sets + elements, pairs)
        chosen = set_cover(G, 0.01, seed)
        universe = sum(ref.coverable(G))
        if universe == 0:
            continue
        opt = ref.set_cover_opt(G)
        bound = sum(1 / i for i in range(1, universe + 1)) * opt
        worst = max(worst, len(chosen) / opt)
        if len(chosen) > bound + 1e-9 or not verify("set-cover", G, {}, seed, chosen).passed:
            cover_bad += 1
    ok = color_bad == 0 and cover_bad == 0
    report(6, ok, f"coloring over Delta+1 in {color_bad}/{tested}; cover over H_n*OPT in {cover_bad} "
                  f"(worst ratio to OPT {worst:.2f})")
    assert ok


def test_criterion_07_determinism_across_threads(report):
    counts = sorted({1, 2, max_workers(), 4})
    mismatched = []
    for problem in PROBLEMS:
        # sizes large enough to span several parallel chunks
        n = 40000 if problem in ("pagerank", "kcore", "connectivity", "bfs", "mis") else 3000
        G, params = instance(problem, "rmat" if problem != "densest-subgraph" else "er", n, 11)
        sums = set()
        for k in counts:
            with workers(k):
                sums.add(checksum(solve(problem, G, params, 11)))
        if len(sums) != 1:
            mismatched.append(problem)
    ok = not mismatched
    report(7, ok, f"thread counts {counts}; mismatched problems: {mismatched or 'none'}")
    assert ok


def test_criterion_08_compressed_equivalence(report):
    mismatched = []
    for g in range(20):
        family = FAMILIES[g % len(FAMILIES)]
        for problem in PROBLEMS:
            G, params = instance(problem, family, 300, g)
            plain = checksum(solve(problem, G, params, g))
            packed = checksum(solve(problem, G.compress(16 if g % 2 else 128), params, g))
            if plain != packed:
                mismatched.append(f"{problem}/{family}/{g}")
    ok = not mismatched
    report(8, ok, f"{20 * len(PROBLEMS) - len(mismatched)}/{20 * len(PROBLEMS)} identical")
    assert ok, mismatched[:5]


def test_criterion_09_edge_map_modes_and_histogram(report):
    rng = np.random.default_rng(9)
    mode_bad = 0
    for t in range(1000):
        n = int(rng.integers(1, 200))
        m = int(rng.integers(0, 6 * n))
        G = build_csr(n, rng.integers(0, n, m), rng.integers(0, n, m), symmetrize=bool(t % 2))
        U = np.flatnonzero(rng.random(n) < rng.random())
        v0 = (rng.random(n) < 0.3).astype(np.int8)
        cond = rng.random(n) < 0.8
        sets = []
        for mode in ("sparse", "dense", "blocked"):
            visited = v0.copy()
            out = edge_map(G, VertexSubset(n, ids=U), lambda s, d, w: _tas(visited, d),
                           lambda ids: (visited[ids] == 0) & cond[ids], mode=mode,
                           block_size=int(rng.integers(1, 64)))
            sets.append(frozenset(out.ids.tolist()))
        if len(set(sets)) != 1:
            mode_bad += 1
    keys = rng.zipf(1.3, 10**6).astype(np.int64)
    vals = rng.integers(-1000, 1000, 10**6)
    hk, hv = histogram(keys, vals)
    acc: dict[int, int] = {}
    for k, v in zip(keys.tolist(), vals.tolist()):
        acc[k] = acc.get(k, 0) + v
    hist_ok = dict(zip(hk.tolist(), hv.tolist())) == acc
    ok = mode_bad == 0 and hist_ok
    report(9, ok, f"edge_map mode disagreements {mode_bad}/1000; histogram vs group-by on 1e6 Zipf pairs: "
                  f"{'equal' if hist_ok else 'DIFFERENT'} ({len(acc)} keys)")
    assert ok


def test_criterion_10_performance_smoke(report):
    """Reported only; self-relative speedup needs 4+ cores."""
    cores = os.cpu_count() or 1
    G = gen.er(1_000_000, 2e-5, seed=1)
    times = {}
    for k in sorted({1, max(4, cores)}):
        with workers(k):
            for name, run in (("bfs", lambda: solve("bfs", G, {"src": 0}, 0)),
                              ("connectivity", lambda: solve("connectivity", G, {}, 0))):
                t0 = time.perf_counter()
                run()
                times[(name, k)] = time.perf_counter() - t0
    hi = max(4, cores)
    speed = {name: times[(name, 1)] / times[(name, hi)] for name in ("bfs", "connectivity")}
    met = all(s >= 2 for s in speed.values())
    note = "" if cores >= 4 else f" (machine has {cores} core(s); target not attainable here)"
    report(10, met, f"m={G.m // 2} undirected edges; speedup at {hi} workers: "
                    f"bfs {speed['bfs']:.2f}x, connectivity {speed['connectivity']:.2f}x{note}", gated=False)
    # not a gate


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
