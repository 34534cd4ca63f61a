import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from pimtc.oracle import adjacency, exact_count
from pimtc.partitioner import RemapTable
from pimtc.pim_core import (DEFAULT_CAPACITY, PimCore, ReservoirSample, apply_remap, build_region_index,
                            count_triangles, reservoir_offer, run_core, sort_sample)

from conftest import random_graph


def rows(a):
    return [tuple(r) for r in np.asarray(a).tolist()]


def counted(edges, threads=16, scratch=128, backend=None):
    s = sort_sample(edges)
    return count_triangles(s, build_region_index(s), threads, scratch, backend=backend)


# -- reservoir ----------------------------------------------------------------

def test_default_capacity_from_bank():
    assert DEFAULT_CAPACITY == (64 * 2**20 - 2**20) // 8


def test_reservoir_fills_deterministically():
    s = ReservoirSample(3, 0)
    for e in [(0, 1), (1, 2), (0, 2)]:
        reservoir_offer(s, e)
    assert rows(s.edges) == [(0, 1), (1, 2), (0, 2)] and s.t == 3


def test_reservoir_rejects_small_capacity():
    with pytest.raises(ValueError):
        ReservoirSample(2)


def test_fourth_offer_kept_three_quarters():
    trials = 10_000
    kept = 0
    for seed in range(trials):
        s = ReservoirSample(3, seed)
        s.offer_many([(0, 1), (0, 2), (0, 3)])
        s.offer((0, 4))
        kept += (0, 4) in rows(s.edges)
    sigma = np.sqrt(trials * 0.75 * 0.25)
    assert abs(kept - 0.75 * trials) < 3 * sigma


def test_each_edge_equally_likely():
    t, M, trials = 1000, 100, 2000
    stream = np.column_stack([np.arange(t), np.arange(t) + t])
    hits = np.zeros(t)
    rng = np.random.default_rng(0)
    for _ in range(trials):
        s = ReservoirSample(M, rng)
        # mix bulk and single offers; both follow the same rule
        s.offer_many(stream[:600])
        for e in stream[600:700]:
            s.offer(e)
        s.offer_many(stream[700:])
        hits[s.edges[:, 0]] += 1
    assert hits.sum() == M * trials
    assert abs(hits.mean() / trials - 0.1) < 1e-12
    assert chisquare(hits).pvalue > 0.001


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 20), st.lists(st.integers(0, 15), max_size=12), st.integers(0, 1000))
def test_reservoir_size_invariant(M, batch_sizes, seed):
    s = ReservoirSample(M, seed)
    offered = set()
    nxt = 0
    for n in batch_sizes:
        batch = [(i, i + 10_000) for i in range(nxt, nxt + n)]
        nxt += n
        offered.update(batch)
        s.offer_many(batch)
        assert len(s) == min(s.t, M) and s.t == nxt
        assert set(rows(s.edges)) <= offered
        assert len(set(rows(s.edges))) == len(s)


# -- remap, sort, index -------------------------------------------------------

def test_remap_empty_is_identity():
    e = np.array([(1, 2), (3, 4)])
    assert np.array_equal(apply_remap(e, RemapTable()), e)
    assert np.array_equal(apply_remap(e, None), e)


def test_remap_renormalizes():
    assert rows(apply_remap([(5, 7)], RemapTable((5,), (11,), 10))) == [(7, 11)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 12))
def test_remap_preserves_count(seed, top):
    g = random_graph(25, 0.35, seed)
    rng = np.random.default_rng(seed)
    nodes = rng.permutation(25)[:top].tolist()
    new = (25 + rng.permutation(100)[:top]).tolist()
    table = RemapTable(tuple(nodes), tuple(new), 24)
    remapped = apply_remap(g.edges, table)
    assert (remapped[:, 0] < remapped[:, 1]).all()
    assert counted(remapped) == counted(g.edges) == exact_count(g.edges)


def test_sort_examples():
    assert rows(sort_sample([(1, 3), (1, 2)])) == [(1, 2), (1, 3)]
    assert rows(sort_sample([(2, 3), (1, 5)])) == [(1, 5), (2, 3)]


def test_sort_ignores_input_order():
    g = random_graph(30, 0.3, 1)
    rng = np.random.default_rng(1)
    ref = sort_sample(g.edges)
    assert (np.diff(ref[:, 0]) >= 0).all()
    for _ in range(5):
        assert np.array_equal(sort_sample(g.edges[rng.permutation(len(g))]), ref)


def test_region_index():
    idx = build_region_index(sort_sample([(1, 2), (1, 3), (4, 5)]))
    assert idx.entries() == [(1, 0), (4, 2)]
    assert idx.lookup(1) == (0, 2) and idx.lookup(4) == (2, 3)
    assert idx.lookup(2) is None and idx.lookup(5) is None
    assert build_region_index(np.empty((0, 2))).entries() == []


# -- counting kernel ------------------------------------------------------------

def test_k3(backend):
    assert counted([(0, 1), (0, 2), (1, 2)], backend=backend) == 1


def test_k4(k4, backend):
    assert counted(k4, backend=backend) == 4


def test_empty(backend):
    assert counted(np.empty((0, 2)), backend=backend) == 0


def test_random_200(backend):
    g = random_graph(200, 0.08, 3)
    assert counted(g.edges, backend=backend) == exact_count(g.edges)


@pytest.mark.parametrize("threads", [1, 2, 4, 16])
@pytest.mark.parametrize("scratch", [2, 8, 64, None])
def test_thread_and_scratch_invariance(backend, threads, scratch):
    g = random_graph(60, 0.3, 5)
    assert counted(g.edges, threads, scratch, backend) == exact_count(g.edges)


def test_scratch_lower_bound():
    with pytest.raises(ValueError):
        counted([(0, 1)], scratch=1)


def test_each_triangle_found_once_at_its_lowest_edge(backend):
    g = random_graph(40, 0.3, 8)
    s = sort_sample(g.edges)
    per_edge = np.zeros(len(s), dtype=np.int64)
    total = count_triangles(s, build_region_index(s), 4, 3, backend=backend, per_edge=per_edge)
    adj = adjacency(g.edges)
    expected = [sum(1 for w in adj[u] & adj[v] if w > v) for u, v in s.tolist()]
    assert per_edge.tolist() == expected
    assert total == sum(expected)


def test_backends_agree_on_skewed_sample():
    from pimtc import kernels
    if "compiled" not in kernels.available_backends():
        pytest.skip("extension not built")
    rng = np.random.default_rng(2)
    hub = np.column_stack([np.zeros(300, int), np.arange(1, 301)])
    extra = np.sort(rng.integers(1, 301, (800, 2)), axis=1)
    edges = np.unique(np.concatenate([hub, extra[extra[:, 0] != extra[:, 1]]]), axis=0)
    assert counted(edges, backend="python") == counted(edges, backend="compiled") == exact_count(edges)


# -- run_core / isolation ----------------------------------------------------------

def test_run_core_small_batch_exact(k4):
    rep = run_core(k4, capacity=10)
    assert (rep.raw_count, rep.t, rep.sample_size) == (4, 6, 6)


def test_run_core_empty():
    rep = run_core(np.empty((0, 2)), capacity=3)
    assert rep.raw_count == 0 and rep.t == 0


def test_run_core_one_triangle_exact_fit():
    assert run_core([(0, 1), (0, 2), (1, 2)], capacity=3).raw_count == 1


def test_run_core_flags_monochromatic():
    assert run_core([], 3, triplet=(2, 2, 2)).is_monochromatic
    assert not run_core([], 3, triplet=(0, 2, 2)).is_monochromatic


def test_core_receives_a_copy(k4):
    core = PimCore(0, (0, 0, 0), 10)
    batch = k4.copy()
    core.receive(batch)
    batch[:] = 0
    assert core.run().raw_count == 4


def test_core_holds_no_reference_to_peers():
    a, b = PimCore(0, (0, 0, 0), 5), PimCore(1, (0, 0, 1), 5)
    assert not any(isinstance(v, PimCore) for v in vars(a).values())
    a.receive([(0, 1)])
    assert len(b.sample) == 0


def test_cores_draw_independent_streams():
    stream = np.column_stack([np.arange(200), np.arange(200) + 500])
    a, b = PimCore(0, (0, 0, 0), 10, seed=1), PimCore(1, (0, 0, 0), 10, seed=1)
    a.receive(stream)
    b.receive(stream)
    assert rows(a.sample.edges) != rows(b.sample.edges)
    c = PimCore(0, (0, 0, 0), 10, seed=1)
    c.receive(stream)
    assert rows(a.sample.edges) == rows(c.sample.edges)
