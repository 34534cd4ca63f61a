"""A simulated processing-in-memory core.

Each :class:`PimCore` owns a bounded edge reservoir in its private "bank".
The host hands it batches by value and reads back a :class:`CoreReport`;
cores never see each other's data.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .partitioner import RemapTable

BANK_BYTES = 64 * 2**20
METADATA_RESERVE_BYTES = 2**20
EDGE_BYTES = 8  # two 32-bit node IDs
DEFAULT_CAPACITY = (BANK_BYTES - METADATA_RESERVE_BYTES) // EDGE_BYTES
# scratchpad window, in edges, per buffer per thread
DEFAULT_SCRATCH = 128


def core_rng(seed, core_id) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, core_id]))


class ReservoirSample:
    """Uniform sample of at most ``capacity`` edges from the stream offered so far.

    An offer number ``t > M`` draws ``j`` uniformly from ``[0, t)`` and, when
    ``j < M``, overwrites slot ``j``. That is a coin with heads probability
    ``M/t`` followed by a uniform victim.
    """

    def __init__(self, capacity: int, rng=None):
        if capacity < 3:
            raise ValueError(f"reservoir capacity must be >= 3, got {capacity}")
        self.capacity = int(capacity)
        self.t = 0
        self.size = 0
        self.rng = np.random.default_rng(rng)
        self._buf = np.empty((0, 2), dtype=np.int64)

    @property
    def edges(self) -> np.ndarray:
        return self._buf[:self.size]

    def __len__(self):
        return self.size

    def _reserve(self, n):
        if n <= len(self._buf):
            return
        grown = np.empty((min(self.capacity, max(n, 2 * len(self._buf))), 2), dtype=np.int64)
        grown[:self.size] = self._buf[:self.size]
        self._buf = grown

    def offer(self, edge):
        return self.offer_many(np.asarray(edge, dtype=np.int64).reshape(1, 2))

    def offer_many(self, batch):
        batch = np.asarray(batch, dtype=np.int64).reshape(-1, 2)
        n = len(batch)
        if n == 0:
            return self
        M = self.capacity
        fill = min(max(M - self.t, 0), n)
        if fill:
            self._reserve(self.size + fill)
            self._buf[self.size:self.size + fill] = batch[:fill]
            self.size += fill
        rest = batch[fill:]
        if len(rest):
            ts = np.arange(self.t + fill + 1, self.t + n + 1, dtype=np.int64)
            j = self.rng.integers(0, ts)
            hit = j < M
            slots = j[hit]
            src = rest[hit]
            if len(slots):
                # offers are sequential, so the last write to a slot wins
                rev_slots, first_in_rev = np.unique(slots[::-1], return_index=True)
                self._buf[rev_slots] = src[len(slots) - 1 - first_in_rev]
        self.t += n
        return self


def reservoir_offer(sample: ReservoirSample, edge) -> ReservoirSample:
    return sample.offer(edge)


def apply_remap(edges, remap: RemapTable | None) -> np.ndarray:
    """Relabel remapped endpoints and re-normalize each edge to ``u < v``."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if remap is None or len(remap) == 0 or len(edges) == 0:
        return edges
    keys, vals = remap.arrays()
    flat = edges.ravel()
    pos = np.searchsorted(keys, flat)
    pos[pos == len(keys)] = 0
    hit = keys[pos] == flat
    if not hit.any():
        return edges
    flat = flat.copy()
    flat[hit] = vals[pos[hit]]
    out = flat.reshape(-1, 2)
    lo = np.minimum(out[:, 0], out[:, 1])
    hi = np.maximum(out[:, 0], out[:, 1])
    assert (lo != hi).all(), "remap produced a self-loop"
    return np.column_stack([lo, hi])


def sort_sample(edges) -> np.ndarray:
    """Order by first node, then second node."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return np.ascontiguousarray(edges[order])


@dataclass
class RegionIndex:
    nodes: np.ndarray
    offsets: np.ndarray
    total: int

    def __len__(self):
        return len(self.nodes)

    def entries(self):
        return list(zip(self.nodes.tolist(), self.offsets.tolist()))

    def lookup(self, node):
        """``(start, stop)`` of ``node``'s region, or ``None``."""
        i = int(np.searchsorted(self.nodes, node))
        if i == len(self.nodes) or self.nodes[i] != node:
            return None
        stop = int(self.offsets[i + 1]) if i + 1 < len(self.nodes) else self.total
        return int(self.offsets[i]), stop


def build_region_index(sorted_edges) -> RegionIndex:
    sorted_edges = np.asarray(sorted_edges, dtype=np.int64).reshape(-1, 2)
    firsts = sorted_edges[:, 0]
    if len(firsts) == 0:
        empty = np.empty(0, dtype=np.int64)
        return RegionIndex(empty, empty.copy(), 0)
    starts = np.flatnonzero(np.concatenate([[True], firsts[1:] != firsts[:-1]])).astype(np.int64)
    return RegionIndex(np.ascontiguousarray(firsts[starts]), starts, len(firsts))


def count_triangles(sorted_edges, index: RegionIndex, thread_count=16, scratch_capacity=DEFAULT_SCRATCH,
                    *, backend=None, per_edge=None) -> int:
    """Merge-based count over a sorted sample.

    For each edge (u, v) the remaining neighbors of u are merged against v's
    region. ``scratch_capacity=None`` means windows as large as the sample.
    ``per_edge`` (an int64 array of the sample's length) receives the number
    of triangles closed at each edge.
    """
    if thread_count < 1:
        raise ValueError(f"thread_count must be >= 1, got {thread_count}")
    sorted_edges = np.ascontiguousarray(sorted_edges, dtype=np.int64).reshape(-1, 2)
    if scratch_capacity is None:
        cap = max(len(sorted_edges), 1)
    else:
        cap = int(scratch_capacity)
        if cap < 2:
            raise ValueError("scratch capacity must be >= 2 edges")
    fn = kernels.count_sorted if backend is None else kernels.available_backends()[backend]
    total, _ = fn(sorted_edges, index.nodes, index.offsets, int(thread_count), cap, per_edge)
    return int(total)


@dataclass
class CoreReport:
    core_id: int
    triplet: tuple
    raw_count: int
    t: int
    capacity: int
    sample_size: int
    is_monochromatic: bool
    sort_time: float = 0.0
    count_time: float = 0.0

    def stats(self):
        return {"core": self.core_id, "triplet": list(self.triplet), "t": self.t,
                "sample_size": self.sample_size, "raw_count": self.raw_count}


def count_sample(edges, remap=None, thread_count=16, scratch_capacity=DEFAULT_SCRATCH):
    """Remap, sort, index and count one sample. Returns ``(count, sort_s, count_s)``."""
    t0 = time.perf_counter()
    work = sort_sample(apply_remap(edges, remap))
    index = build_region_index(work)
    t1 = time.perf_counter()
    raw = count_triangles(work, index, thread_count, scratch_capacity)
    t2 = time.perf_counter()
    return raw, t1 - t0, t2 - t1


@dataclass
class PimCore:
    """One simulated core: a triplet, a private reservoir, nothing shared."""

    core_id: int
    triplet: tuple
    capacity: int
    seed: int = 0
    sample: ReservoirSample = field(init=False)

    def __post_init__(self):
        self.sample = ReservoirSample(self.capacity, core_rng(self.seed, self.core_id))

    @property
    def is_monochromatic(self):
        return len(set(self.triplet)) == 1

    def receive(self, batch):
        # host-to-core transfer copies; the host keeps no alias into the bank
        self.sample.offer_many(np.array(batch, dtype=np.int64, copy=True))

    def run(self, remap=None, thread_count=16, scratch_capacity=DEFAULT_SCRATCH) -> CoreReport:
        raw, sort_s, count_s = count_sample(self.sample.edges, remap, thread_count, scratch_capacity)
        return CoreReport(self.core_id, tuple(self.triplet), raw, self.sample.t, self.capacity,
                          self.sample.size, self.is_monochromatic, sort_s, count_s)


def run_core(batch, capacity, remap=None, thread_count=16, *, core_id=0, triplet=(0, 0, 0), seed=0,
             scratch_capacity=DEFAULT_SCRATCH) -> CoreReport:
    core = PimCore(core_id, tuple(triplet), capacity, seed)
    core.receive(batch)
    return core.run(remap, thread_count, scratch_capacity)
