"""Benchmark runner: load a graph, time a problem, checksum and verify."""

from __future__ import annotations

import csv
import hashlib
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from . import generators, io
from .graph import Graph, build_csr
from .oracles import VerificationReport, verify
from .parallel import workers
from .primitives import RandomSource
from .problems import get_problem

CSV_COLUMNS = ("problem", "graph", "n", "m", "round", "millis", "verified")


@dataclass
class BenchmarkConfig:
    """Settings for one benchmark run.

    ``graph`` is a file path (text adjacency or binary) or a generator spec
    such as ``gen:torus3d:s=10``. ``params`` overrides the problem's default
    parameters; ``src`` is folded into them for source-based problems.
    """

    problem: str
    graph: str
    symmetric: bool = False
    compressed: bool = False
    rounds: int = 1
    src: int | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    verify: bool = False
    output: str | None = None
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        get_problem(self.problem)


@dataclass
class BenchmarkReport:
    problem: str
    graph: str
    n: int
    m: int
    millis: list[float]
    checksum: str
    output: np.ndarray
    verification: VerificationReport | None = None

    @property
    def median(self) -> float:
        return statistics.median(self.millis)

    @property
    def passed(self) -> bool:
        return self.verification is None or self.verification.passed

    def rows(self) -> list[dict]:
        verified = "" if self.verification is None else str(self.verification.passed).lower()
        return [
            {"problem": self.problem, "graph": self.graph, "n": self.n, "m": self.m,
             "round": i, "millis": f"{t:.3f}", "verified": verified}
            for i, t in enumerate(self.millis)
        ]

    def table(self) -> str:
        lines = [
            f"problem   {self.problem}",
            f"graph     {self.graph} (n={self.n}, m={self.m})",
        ]
        lines += [f"round {i:<3} {t:10.3f} ms" for i, t in enumerate(self.millis)]
        lines.append(f"median    {self.median:10.3f} ms")
        lines.append(f"checksum  {self.checksum}")
        if self.verification is not None:
            v = self.verification
            lines.append("verify    " + ("passed" if v.passed else f"FAILED: {v.detail}"))
        return "\n".join(lines)


def checksum(output) -> str:
    """SHA-256 over dtype, shape and little-endian bytes of a canonical output."""
    a = np.ascontiguousarray(output)
    a = a.astype(a.dtype.newbyteorder("<"), copy=False)
    h = hashlib.sha256()
    h.update(a.dtype.str.encode())
    h.update(repr(a.shape).encode())
    h.update(a.tobytes())
    return h.hexdigest()


def load_graph(spec: str, *, symmetric: bool = False, compressed: bool = False, seed: int = 0) -> Graph:
    """Graph from a generator spec or a file.

    ``symmetric`` adds the reverse of every edge; ``compressed`` converts
    to byte-coded neighbor lists.
    """
    if spec.startswith("gen:"):
        G = generators.from_spec(spec, seed)
    elif io.is_binary(spec):
        G = io.read_binary(spec)
    else:
        G = io.read_adjacency(spec)
    if symmetric and not G.symmetric:
        b = G.edge_arrays()
        G = build_csr(G.n, b.src, b.dst, b.w, symmetrize=True)
    if compressed and not G.compressed:
        G = G.compress()
    return G


def run_benchmark(config: BenchmarkConfig, G: Graph | None = None) -> BenchmarkReport:
    """Run ``config.rounds`` timed repetitions, checksum the output and optionally verify it."""
    prob = get_problem(config.problem)
    if G is None:
        G = load_graph(config.graph, symmetric=config.symmetric, compressed=config.compressed, seed=config.seed)
    overrides = dict(config.params)
    if config.src is not None:
        if not prob.uses_source:
            raise ValueError(f"{prob.name} takes no source vertex")
        overrides["src"] = config.src
    params = prob.params(overrides)
    prob.check_input(G, params)

    times: list[float] = []
    out = None
    with workers(config.threads):
        for _ in range(config.rounds):
            rng = RandomSource(config.seed)
            t0 = time.perf_counter()
            out = prob.run(G, params, rng)
            times.append((time.perf_counter() - t0) * 1e3)
    report = BenchmarkReport(prob.name, config.graph, G.n, G.m, times, checksum(out), out)
    if config.verify:
        report.verification = verify(prob.name, G, params, config.seed, out)
    if config.output:
        write_csv([report], config.output)
    return report


def write_csv(reports, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in reports:
            w.writerows(r.rows())
