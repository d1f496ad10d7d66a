import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pargraph import io
from pargraph.graph import directed_graph, symmetric_graph
from strategies import graphs

P3_TEXT = "AdjacencyGraph\n3\n4\n0\n1\n3\n1\n0\n2\n1\n"


def test_parse_p3():
    G = io.parse_adjacency(P3_TEXT)
    assert G.n == 3 and G.m == 4 and G.symmetric
    assert G.neighbors(1).tolist() == [0, 2]


def test_weighted_and_symmetrize_flag():
    text = "WeightedAdjacencyGraph\n2\n1\n0\n1\n1\n9\n"
    G = io.parse_adjacency(text)
    assert G.weighted and not G.symmetric and G.edge_weights(0).tolist() == [9]
    S = io.parse_adjacency(text, symmetric=True)
    assert S.symmetric and S.edge_weights(1).tolist() == [9]


@pytest.mark.parametrize("text, line", [
    ("Adjacency\n1\n0\n0\n", 1),
    ("AdjacencyGraph\n3\n4\n0\n1\n3\n1\n0\n2\n", 9),
    ("AdjacencyGraph\n2\n1\n0\n5\n1\n", 5),
    ("AdjacencyGraph\n2\n1\n0\n1\n7\n", 6),
    ("AdjacencyGraph\n2\nx\n", 3),
    ("AdjacencyGraph\n2\n1\n1\n1\n0\n", 4),
    ("AdjacencyGraph\n1\n0\n0\n3\n", 5),
    ("", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(io.ParseError) as err:
        io.parse_adjacency(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


@given(graphs(max_n=30, max_m=100, symmetric=False, weighted=True))
def test_text_roundtrip(G):
    text = io.write_adjacency(G)
    H = io.parse_adjacency(text)
    assert H.same_as(G)
    assert io.write_adjacency(H) == text


def test_binary_roundtrip_p4(tmp_path):
    G = symmetric_graph(4, [(0, 1), (1, 2), (2, 3)])
    path = tmp_path / "p4.bin"
    io.write_binary(G, path)
    assert io.is_binary(path)
    H = io.read_binary(path)
    assert H.same_as(G) and H.symmetric


def test_binary_fuzz_roundtrip():
    rng = np.random.default_rng(0)
    for i in range(10000):
        n = int(rng.integers(1, 12))
        m = int(rng.integers(0, 25))
        pairs = rng.integers(0, n, (m, 2)).tolist()
        w = rng.integers(-5, 20, m).tolist() if i % 2 else None
        G = symmetric_graph(n, pairs, w) if i % 3 == 0 else directed_graph(n, pairs, w)
        if i % 5 == 0:
            G = G.compress(int(rng.integers(1, 5)))
        H = io.from_bytes(io.to_bytes(G))
        assert H.same_as(G) and H.compressed == G.compressed and H.symmetric == G.symmetric
        if G.compressed:
            assert H.store.block_size == G.store.block_size


def test_binary_errors(tmp_path):
    G = symmetric_graph(3, [(0, 1)]).compress()
    buf = io.to_bytes(G)
    for cut in (0, 5, len(buf) - 1):
        with pytest.raises(io.BinaryFormatError, match="truncated"):
            io.from_bytes(buf[:cut])
    with pytest.raises(io.BinaryFormatError, match="magic"):
        io.from_bytes(b"XXXX" + buf[4:])
    bad = bytearray(buf)
    bad[4] = 99
    with pytest.raises(io.BinaryFormatError, match="version"):
        io.from_bytes(bytes(bad))
    with pytest.raises(io.BinaryFormatError):
        io.from_bytes(buf + b"\0")
    path = tmp_path / "t.bin"
    path.write_bytes(buf[:10])
    with pytest.raises(io.BinaryFormatError):
        io.read_binary(path)


@given(st.binary(max_size=200))
def test_binary_garbage_raises_cleanly(data):
    try:
        io.from_bytes(io.BINARY_MAGIC + data)
    except io.BinaryFormatError:
        pass
