import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pimtc.graph_io import MAX_NODE_ID, ParseError, parse_coo, preprocess, read_coo, split_chunks, write_coo

edge_lists = st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), max_size=80)


def as_set(edges):
    return set(map(tuple, np.asarray(edges).tolist()))


def test_parse_basic():
    assert parse_coo("0 1\n1 2\n").tolist() == [[0, 1], [1, 2]]


def test_parse_empty():
    assert parse_coo("").shape == (0, 2)


def test_parse_comments_tabs_blank_lines():
    text = "# header\n% matrix market style\n\n3\t4\n  5 6  \n"
    assert parse_coo(io.StringIO(text)).tolist() == [[3, 4], [5, 6]]


@pytest.mark.parametrize("text, lineno", [("3 x\n", 1), ("0 1\n1 2 3\n", 2), ("0 1\n\n7\n", 3),
                                          ("0 -1\n", 1), (f"0 {MAX_NODE_ID + 1}\n", 1)])
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(ParseError) as info:
        parse_coo(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_roundtrip_file(tmp_path):
    path = tmp_path / "g.txt"
    write_coo(path, [(1, 2), (3, 0)])
    assert read_coo(path).tolist() == [[1, 2], [3, 0]]


def test_preprocess_drops_self_loops():
    g = preprocess([(3, 3), (1, 2)], 0)
    assert g.edges.tolist() == [[1, 2]]
    assert g.max_node_id == 2


def test_preprocess_collapses_reversed_duplicates():
    assert preprocess([(2, 1), (1, 2)], 5).edges.tolist() == [[1, 2]]


def test_preprocess_is_a_permutation():
    for seed in range(5):
        g = preprocess([(5, 4), (0, 9)], seed)
        assert as_set(g.edges) == {(4, 5), (0, 9)}
        assert g.max_node_id == 9


def test_preprocess_empty():
    g = preprocess([], 0)
    assert len(g) == 0 and g.max_node_id == 0


@settings(max_examples=100, deadline=None)
@given(edge_lists, st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_preprocess_properties(edges, s1, s2):
    g = preprocess(edges, s1)
    e = g.edges
    if len(e):
        assert (e[:, 0] < e[:, 1]).all()
        assert g.max_node_id == e.max()
    assert len(as_set(e)) == len(e)
    # idempotent and seed independent as a set
    assert as_set(preprocess(e, s2).edges) == as_set(e)
    assert as_set(preprocess(edges, s2).edges) == as_set(e)
    assert as_set(e) == {(min(u, v), max(u, v)) for u, v in edges if u != v}


def test_split_ten_edges_ten_ways():
    chunks = split_chunks(np.arange(20).reshape(10, 2), 10)
    assert [len(c) for c in chunks] == [1] * 10


def test_split_identity():
    e = np.arange(14).reshape(7, 2)
    (only,) = split_chunks(e, 1)
    assert np.array_equal(only, e)


def test_split_balanced():
    assert sorted(len(c) for c in split_chunks(np.arange(14).reshape(7, 2), 3)) == [2, 2, 3]


def test_split_zero_rejected():
    with pytest.raises(ValueError):
        split_chunks(np.zeros((3, 2)), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.integers(1, 12))
def test_split_concatenation_restores_input(m, k):
    e = np.arange(2 * m).reshape(m, 2)
    chunks = split_chunks(e, k)
    assert len(chunks) == k
    sizes = [len(c) for c in chunks]
    assert max(sizes) - min(sizes) <= 1
    assert np.array_equal(np.concatenate(chunks).reshape(-1, 2), e)
