"""Reading and writing graphs.

Two formats are supported. The text adjacency format starts with a header
line (``AdjacencyGraph`` or ``WeightedAdjacencyGraph``) followed by ``n``,
``m``, the ``n`` offsets, the ``m`` targets and, for weighted graphs, the
``m`` weights, one integer per line. The binary format is little-endian
and versioned; compressed graphs are stored with their byte-coded blocks.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .compression import CompressedAdjacency, CompressionError
from .graph import Graph, GraphError, build_csr

TEXT_HEADER = "AdjacencyGraph"
WEIGHTED_HEADER = "WeightedAdjacencyGraph"

BINARY_MAGIC = b"PGRB"
BINARY_VERSION = 1
_FLAG_SYMMETRIC = 1
_FLAG_WEIGHTED = 2
_FLAG_COMPRESSED = 4
# magic, version, flags, n, m, block size
_HEADER = struct.Struct("<4sIIQQQ")


class ParseError(ValueError):
    """Malformed text adjacency input; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BinaryFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# text format


def _tokens(text: str) -> tuple[list[str], list[int]]:
    toks: list[str] = []
    lines: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for tok in line.split():
            toks.append(tok)
            lines.append(lineno)
    return toks, lines


def parse_adjacency(text: str, symmetric: bool = False) -> Graph:
    """Parse the text adjacency format.

    Neighbor lists are sorted and deduplicated and self loops dropped. With
    ``symmetric`` the missing reverse edges are added and the graph is
    marked symmetric.
    """
    toks, lines = _tokens(text)
    if not toks:
        raise ParseError("empty input", 1)
    header = toks[0]
    if header not in (TEXT_HEADER, WEIGHTED_HEADER):
        raise ParseError(f"unknown header {header!r}", lines[0])
    weighted = header == WEIGHTED_HEADER
    last = lines[-1]

    def integer(i: int, what: str) -> int:
        if i >= len(toks):
            raise ParseError(f"input ends before {what}", last)
        try:
            return int(toks[i])
        except ValueError:
            raise ParseError(f"{what} is not an integer: {toks[i]!r}", lines[i]) from None

    n = integer(1, "vertex count")
    m = integer(2, "edge count")
    if n < 0 or m < 0:
        raise ParseError("counts must be non-negative", lines[2] if n >= 0 else lines[1])
    need = 3 + n + m + (m if weighted else 0)
    if len(toks) < need:
        raise ParseError(f"expected {need - 3} values after the counts, found {len(toks) - 3}", last)
    if len(toks) > need:
        raise ParseError("unexpected values after the last section", lines[need])
    try:
        body = np.array(toks[3:need], dtype=np.int64)
    except ValueError:
        bad = next(i for i in range(3, need) if not toks[i].lstrip("-").isdigit())
        raise ParseError(f"not an integer: {toks[bad]!r}", lines[bad]) from None
    offsets = np.r_[body[:n], m]
    dst = body[n:n + m]
    w = body[n + m:] if weighted else None
    if n and offsets[0] != 0:
        raise ParseError("first offset must be 0", lines[3])
    bad = np.flatnonzero(np.diff(offsets) < 0)
    if bad.size:
        i = int(bad[0]) + 1
        # past the last offset the comparison is against m, so blame the offset itself
        raise ParseError("offsets must be non-decreasing and at most m", lines[3 + min(i, n - 1)])
    out = np.flatnonzero((dst < 0) | (dst >= n))
    if out.size:
        raise ParseError(f"edge target {dst[out[0]]} outside [0, {n})", lines[3 + n + int(out[0])])
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(offsets))
    G = build_csr(n, src, dst, w, symmetrize=symmetric)
    if not symmetric and G.m and _is_symmetric(G):
        return Graph(G.offsets, G.edges, G.weights, True, check=False)
    return G


def _is_symmetric(G: Graph) -> bool:
    try:
        Graph(G.offsets, G.edges, G.weights, True)
    except GraphError:
        return False
    return True


def write_adjacency(G: Graph) -> str:
    """Serialize to the text adjacency format (one value per line)."""
    header = WEIGHTED_HEADER if G.weighted else TEXT_HEADER
    parts = [header, str(G.n), str(G.m)]
    parts += map(str, G.offsets[:-1].tolist())
    parts += map(str, G.edges.tolist())
    if G.weighted:
        parts += map(str, G.weights.tolist())
    return "\n".join(parts) + "\n"


def read_adjacency(path: str | os.PathLike, symmetric: bool = False) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_adjacency(fh.read(), symmetric)


def save_adjacency(G: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_adjacency(G))


# ---------------------------------------------------------------------------
# binary format


def _pack(arr: np.ndarray, dtype: str) -> bytes:
    a = np.ascontiguousarray(arr, dtype=dtype)
    return struct.pack("<Q", a.size) + a.tobytes()


def to_bytes(G: Graph) -> bytes:
    flags = 0
    flags |= _FLAG_SYMMETRIC if G.symmetric else 0
    flags |= _FLAG_WEIGHTED if G.weighted else 0
    flags |= _FLAG_COMPRESSED if G.compressed else 0
    block = G.store.block_size if G.compressed else 0
    out = [_HEADER.pack(BINARY_MAGIC, BINARY_VERSION, flags, G.n, G.m, block), _pack(G.offsets, "<i8")]
    if G.compressed:
        s = G.store
        out += [_pack(s.block_offsets, "<i8"), _pack(s.vertex_blocks, "<i8"), _pack(s.data, "u1")]
    else:
        out.append(_pack(G.edges, "<i8"))
    if G.weighted:
        out.append(_pack(G.weights, "<i8"))
    return b"".join(out)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, nbytes: int, what: str) -> bytes:
        if self.pos + nbytes > len(self.buf):
            raise BinaryFormatError(f"file truncated while reading {what}")
        chunk = self.buf[self.pos:self.pos + nbytes]
        self.pos += nbytes
        return chunk

    def array(self, dtype: str, what: str, expect: int | None = None) -> np.ndarray:
        (count,) = struct.unpack("<Q", self.take(8, what))
        if expect is not None and count != expect:
            raise BinaryFormatError(f"{what} has {count} entries, expected {expect}")
        item = np.dtype(dtype).itemsize
        raw = self.take(count * item, what)
        return np.frombuffer(raw, dtype=dtype).astype(np.dtype(dtype).newbyteorder("="))


def from_bytes(buf: bytes) -> Graph:
    r = _Reader(buf)
    magic, version, flags, n, m, block = _HEADER.unpack(r.take(_HEADER.size, "header"))
    if magic != BINARY_MAGIC:
        raise BinaryFormatError(f"bad magic {magic!r}")
    if version != BINARY_VERSION:
        raise BinaryFormatError(f"unsupported version {version}")
    offsets = r.array("<i8", "offsets", n + 1)
    weighted = bool(flags & _FLAG_WEIGHTED)
    symmetric = bool(flags & _FLAG_SYMMETRIC)
    try:
        if flags & _FLAG_COMPRESSED:
            block_offsets = r.array("<i8", "block offsets")
            vertex_blocks = r.array("<i8", "vertex blocks", n + 1)
            data = r.array("u1", "block data")
            w = r.array("<i8", "weights", m) if weighted else None
            store = CompressedAdjacency(int(block), data, block_offsets, vertex_blocks)
            G = Graph(offsets, None, w, symmetric, store=store)
            # decode once so corrupt blocks fail here rather than mid-algorithm
            Graph(offsets, G.edges, w, symmetric)
        else:
            edges = r.array("<i8", "edges", m)
            w = r.array("<i8", "weights", m) if weighted else None
            G = Graph(offsets, edges, w, symmetric)
    except (GraphError, CompressionError) as exc:
        raise BinaryFormatError(f"invalid graph payload: {exc}") from None
    if r.pos != len(buf):
        raise BinaryFormatError("trailing bytes after graph payload")
    if G.m != m:
        raise BinaryFormatError("edge count does not match offsets")
    return G


def write_binary(G: Graph, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(to_bytes(G))


def read_binary(path: str | os.PathLike) -> Graph:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())


def is_binary(path: str | os.PathLike) -> bool:
    with open(path, "rb") as fh:
        return fh.read(len(BINARY_MAGIC)) == BINARY_MAGIC
