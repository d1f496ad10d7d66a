"""Command line entry point.

    pargraph bench <problem> [-s] [-c] [-rounds N] [-src V] [-seed S]
                   [-verify] [-param k=v]... [-threads T] [-csv PATH]
                   [-out PATH] [-normalize] <graph|gen:spec>
    pargraph list
    pargraph convert <graph|gen:spec> <out.bin> [-s] [-c] [-seed S]
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .bench import BenchmarkConfig, load_graph, run_benchmark
from .problems import PROBLEMS


def _param(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, val = text.split("=", 1)
    return key, val


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pargraph", description="Parallel graph benchmark runner.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run and time one problem")
    b.add_argument("problem", choices=sorted(PROBLEMS))
    b.add_argument("graph", help="adjacency file, binary file or gen:KIND:key=val spec")
    b.add_argument("-s", action="store_true", dest="symmetric", help="symmetrize the input")
    b.add_argument("-c", action="store_true", dest="compressed", help="use compressed neighbor lists")
    b.add_argument("-rounds", type=int, default=1)
    b.add_argument("-src", type=int, default=None)
    b.add_argument("-seed", type=int, default=0)
    b.add_argument("-verify", action="store_true")
    b.add_argument("-param", type=_param, action="append", default=[], metavar="K=V")
    b.add_argument("-threads", type=int, default=None)
    b.add_argument("-csv", default=None, metavar="PATH", help="write per-round CSV report")
    b.add_argument("-out", default=None, metavar="PATH", help="save the output array (.npy)")
    b.add_argument("-normalize", action="store_true",
                   help="scale saved betweenness scores by 1/((n-1)(n-2))")

    sub.add_parser("list", help="list problems and their parameters")

    c = sub.add_parser("convert", help="write a graph in the binary format")
    c.add_argument("graph")
    c.add_argument("out")
    c.add_argument("-s", action="store_true", dest="symmetric")
    c.add_argument("-c", action="store_true", dest="compressed")
    c.add_argument("-seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for name, p in PROBLEMS.items():
            extras = dict(p.defaults)
            if p.uses_source:
                extras["src"] = 0
            flags = ", ".join(f for f, on in (("symmetric", p.symmetric), ("weighted", p.weighted)) if on)
            print(f"{name:18} {p.title:38} {flags:20} {extras}")
        return 0
    if args.command == "convert":
        G = load_graph(args.graph, symmetric=args.symmetric, compressed=args.compressed, seed=args.seed)
        io.write_binary(G, args.out)
        print(f"wrote {G!r} to {args.out}")
        return 0

    try:
        config = BenchmarkConfig(
            problem=args.problem,
            graph=args.graph,
            symmetric=args.symmetric,
            compressed=args.compressed,
            rounds=args.rounds,
            src=args.src,
            seed=args.seed,
            params=dict(args.param),
            verify=args.verify,
            output=args.csv,
            threads=args.threads,
        )
        report = run_benchmark(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.table())
    if args.out:
        out = report.output
        if args.normalize and args.problem == "bc" and report.n > 2:
            out = out / ((report.n - 1) * (report.n - 2))
        np.save(args.out, out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
