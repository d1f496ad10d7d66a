import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pargraph import compression as C
from pargraph.parallel import workers


@st.composite
def sorted_lists(draw, max_len: int = 200):
    src = draw(st.integers(0, 5000))
    vals = draw(st.sets(st.integers(0, 5000), max_size=max_len))
    vals.discard(src)
    k = draw(st.integers(1, 16))
    return src, np.array(sorted(vals), dtype=np.int64), k


def test_encode_example_codes():
    L = C.encode(3, [5, 7, 100])
    # zigzag(5 - 3) = 4, then plain gaps 2 and 93, one byte each
    assert L.data.tolist() == [4, 2, 93]
    assert C.decode(L).tolist() == [5, 7, 100]


def test_first_difference_may_be_negative():
    L = C.encode(50, [1, 49, 51, 300], block_size=2)
    assert L.num_blocks == 2
    assert C.decode(L).tolist() == [1, 49, 51, 300]
    assert L.block_starts().tolist() == [1, 51]


def test_empty_list():
    L = C.encode(0, [])
    assert L.nbytes == 0 and L.num_blocks == 0
    assert C.decode(L).tolist() == []
    assert C.c_intersect(L, C.encode(1, [2, 3])) == 0


def test_encode_rejects_bad_input():
    with pytest.raises(C.CompressionError):
        C.encode(0, [3, 1])
    with pytest.raises(C.CompressionError):
        C.encode(0, [1, 1])
    with pytest.raises(C.CompressionError):
        C.encode(2, [1, 2])


def test_intersect_example():
    assert C.c_intersect(C.encode(0, [1, 3, 5]), C.encode(9, [3, 5, 7])) == 2


def test_large_gaps_use_multibyte_codes():
    nbrs = np.array([1, 200, 70000, 2**40], dtype=np.int64)
    L = C.encode(0, nbrs)
    assert L.nbytes > 4
    assert C.decode(L).tolist() == nbrs.tolist()


def test_fuzz_roundtrip_many_lists():
    rng = np.random.default_rng(0)
    for _ in range(10000):
        d = int(rng.integers(0, 40))
        src = int(rng.integers(0, 1000))
        vals = np.unique(rng.integers(0, 1000, d))
        vals = vals[vals != src]
        L = C.encode(src, vals, block_size=int(rng.integers(1, 9)))
        assert np.array_equal(C.decode(L), vals)


@given(sorted_lists())
def test_primitives_match_uncompressed(case):
    src, vals, k = case
    L = C.encode(src, vals, block_size=k)
    assert np.array_equal(C.decode(L), vals)
    assert np.array_equal(C.c_map(L, lambda x: x * 2), vals * 2) or vals.size == 0
    assert C.c_map_reduce(L, lambda x: x) == int(vals.sum())
    assert C.c_map_reduce(L, lambda x: x, max, -1) == (int(vals.max()) if vals.size else -1)
    pred = lambda x: x % 3 == 0  # noqa: E731
    scratch = np.empty(2 * max(vals.size, 1), dtype=np.int64)
    assert C.c_filter(L, pred, scratch).tolist() == vals[vals % 3 == 0].tolist()
    packed = C.c_pack(L, pred, scratch)
    assert C.decode(packed).tolist() == vals[vals % 3 == 0].tolist()
    assert packed.src == src and packed.length == int((vals % 3 == 0).sum())
    # identity pack
    assert np.array_equal(C.decode(C.c_pack(L, lambda x: np.ones(x.size, bool), scratch)), vals)


@given(sorted_lists(400), sorted_lists(400))
def test_intersect_matches_set_intersection(a, b):
    La = C.encode(a[0], a[1], block_size=a[2])
    Lb = C.encode(b[0], b[1], block_size=b[2])
    want = len(set(a[1].tolist()) & set(b[1].tolist()))
    assert C.c_intersect(La, Lb) == want
    assert C.c_intersect(Lb, La) == want


def test_multi_block_filter_needs_scratch():
    L = C.encode(0, np.arange(1, 50), block_size=4)
    with pytest.raises(ValueError):
        C.c_filter(L, lambda x: x > 3)
    with pytest.raises(ValueError):
        C.c_pack(L, lambda x: x > 3, np.empty(49, dtype=np.int64))


def test_primitives_are_worker_independent():
    vals = np.unique(np.random.default_rng(5).integers(1, 10**6, 3000))
    L = C.encode(0, vals, block_size=16)
    other = C.encode(7, np.unique(np.random.default_rng(6).integers(1, 10**6, 3000)), block_size=16)
    scratch = np.empty(2 * vals.size, dtype=np.int64)
    results = []
    for k in (1, 4):
        with workers(k):
            results.append((
                C.c_map_reduce(L, lambda x: x % 7),
                C.c_filter(L, lambda x: x % 5 == 0, scratch).tolist(),
                C.decode(C.c_pack(L, lambda x: x % 2 == 0, scratch)).tolist(),
                C.c_intersect(L, other),
            ))
    assert results[0] == results[1]
