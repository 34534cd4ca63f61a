"""Host-side partitioning: node coloring, triplet cores, edge routing, heavy hitters."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

MERSENNE_31 = 2**31 - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class ColoringParams:
    C: int
    a: int
    b: int
    p: int = MERSENNE_31

    def __post_init__(self):
        if self.C < 1:
            raise ValueError(f"color count must be >= 1, got {self.C}")
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if not 1 <= self.a < self.p:
            raise ValueError(f"a={self.a} outside [1, p-1]")
        if not 0 <= self.b < self.p:
            raise ValueError(f"b={self.b} outside [0, p-1]")

    @classmethod
    def random(cls, C, rng, p=MERSENNE_31):
        rng = np.random.default_rng(rng)
        a = int(rng.integers(1, p))
        b = int(rng.integers(0, p))
        return cls(C, a, b, p)

    def check_nodes(self, max_node_id):
        if max_node_id >= self.p:
            raise ValueError(f"modulus {self.p} must exceed max node id {max_node_id}")


def color_of(u, params: ColoringParams):
    """Hash coloring ``((a*u + b) mod p) mod C``; vectorizes over numpy arrays.

    With p < 2**31 and u < 2**31 the product stays inside int64.
    """
    if isinstance(u, np.ndarray):
        return ((params.a * u.astype(np.int64) + params.b) % params.p) % params.C
    return ((params.a * int(u) + params.b) % params.p) % params.C


def num_cores(C: int) -> int:
    return _tetra(C)


def enumerate_triplets(C: int) -> list[tuple[int, int, int]]:
    if C < 1:
        raise ValueError(f"color count must be >= 1, got {C}")
    return list(combinations_with_replacement(range(C), 3))


def triplet_rank(c1, c2, c3, C):
    """Lexicographic rank of a sorted triplet among all size-3 multisets over C colors.

    Works elementwise on integer arrays.
    """
    # triplets with first color < c1: sum_{i<c1} (C-i)(C-i+1)/2
    before_first = _tetra(C) - _tetra(C - c1)
    # with first == c1 and second < c2: sum_{j=c1}^{c2-1} (C-j)
    before_second = (c2 - c1) * C - (c2 * (c2 - 1) - c1 * (c1 - 1)) // 2
    return before_first + before_second + (c3 - c2)


def _tetra(n):
    return (n + 2) * (n + 1) * n // 6


def compatible_cores(cu: int, cv: int, C: int) -> list[int]:
    """Cores whose triplet contains the color multiset {cu, cv}; always C of them."""
    lo, hi = min(cu, cv), max(cu, cv)
    out = []
    for x in range(C):
        c1, c2, c3 = sorted((lo, hi, x))
        out.append(int(triplet_rank(c1, c2, c3, C)))
    return out


def route_matrix(colors_u: np.ndarray, colors_v: np.ndarray, C: int) -> np.ndarray:
    """``(m, C)`` matrix of destination core IDs, one column per third color."""
    lo = np.minimum(colors_u, colors_v)[:, None]
    hi = np.maximum(colors_u, colors_v)[:, None]
    x = np.arange(C, dtype=np.int64)[None, :]
    c1 = np.minimum(lo, x)
    c3 = np.maximum(hi, x)
    c2 = lo + hi + x - c1 - c3
    return triplet_rank(c1, c2, c3, C)


def expected_core_load(edge_count, C) -> float:
    if C < 1:
        raise ValueError(f"color count must be >= 1, got {C}")
    return 6.0 * edge_count / (C * C)


def core_loads(edges: np.ndarray, params: ColoringParams) -> np.ndarray:
    """Number of edges each core would receive without sampling."""
    n = num_cores(params.C)
    if len(edges) == 0:
        return np.zeros(n, dtype=np.int64)
    routes = route_matrix(color_of(edges[:, 0], params), color_of(edges[:, 1], params), params.C)
    return np.bincount(routes.ravel(), minlength=n)


# ---------------------------------------------------------------------------
# Misra-Gries


@dataclass
class MisraGriesSummary:
    K: int
    entries: dict = field(default_factory=dict)
    n: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")

    def update(self, u):
        entries = self.entries
        self.n += 1
        if u in entries:
            entries[u] += 1
        elif len(entries) < self.K:
            entries[u] = 1
        else:
            for key in list(entries):
                if entries[key] == 1:
                    del entries[key]
                else:
                    entries[key] -= 1
        return self

    def update_many(self, items):
        for u in items:
            self.update(u)
        return self

    def __contains__(self, u):
        return u in self.entries

    def __len__(self):
        return len(self.entries)


def mg_update(summary: MisraGriesSummary, u) -> MisraGriesSummary:
    return summary.update(u)


def mg_merge(summaries) -> MisraGriesSummary:
    """Sum entries, then shave counts until at most K entries survive.

    Shaving by the (K+1)-th largest count is the same as repeating the global
    decrement that many times.
    """
    summaries = list(summaries)
    if not summaries:
        raise ValueError("nothing to merge")
    K = summaries[0].K
    if any(s.K != K for s in summaries):
        raise ValueError("summaries have different K")
    total = {}
    for s in summaries:
        for key, c in s.entries.items():
            total[key] = total.get(key, 0) + c
    if len(total) > K:
        cut = sorted(total.values(), reverse=True)[K]
        total = {key: c - cut for key, c in total.items() if c > cut}
    return MisraGriesSummary(K, total, sum(s.n for s in summaries))


@dataclass(frozen=True)
class RemapTable:
    originals: tuple = ()
    new_ids: tuple = ()
    base: int = 0

    def __len__(self):
        return len(self.originals)

    def as_dict(self):
        return dict(zip(self.originals, self.new_ids))

    def arrays(self):
        order = np.argsort(np.asarray(self.originals, dtype=np.int64), kind="stable")
        keys = np.asarray(self.originals, dtype=np.int64)[order]
        vals = np.asarray(self.new_ids, dtype=np.int64)[order]
        return keys, vals


def select_top(summary: MisraGriesSummary, top_t: int, max_node_id: int) -> RemapTable:
    """Pick the ``top_t`` most frequent nodes and give them IDs above ``max_node_id``.

    The most frequent node receives the largest new ID. Ties go to the smaller
    original ID first.
    """
    if top_t < 0:
        raise ValueError(f"top_t must be >= 0, got {top_t}")
    ranked = sorted(summary.entries.items(), key=lambda kv: (-kv[1], kv[0]))[:top_t]
    k = len(ranked)
    originals = tuple(node for node, _ in ranked)
    new_ids = tuple(max_node_id + k - i for i in range(k))
    return RemapTable(originals, new_ids, max_node_id)


# ---------------------------------------------------------------------------
# batching


@dataclass
class CoreBatchSet:
    batches: list
    t: np.ndarray
    summary: MisraGriesSummary | None = None

    @property
    def total(self):
        return int(self.t.sum())


def _worker_pass(edges, params, uniform_p, seed, mg_k):
    if uniform_p < 1.0:
        keep = np.random.default_rng(seed).random(len(edges)) < uniform_p
        edges = edges[keep]
    routes = route_matrix(color_of(edges[:, 0], params), color_of(edges[:, 1], params), params.C)
    summary = None
    if mg_k:
        summary = MisraGriesSummary(mg_k)
        summary.update_many(edges.ravel().tolist())
    return edges, routes, summary


def build_batches(edges, params: ColoringParams, uniform_p=1.0, seed=0, *, workers=1, mg_k=0) -> CoreBatchSet:
    """Sample edges at ingest and append each kept edge to its C compatible cores.

    The stream is cut into ``workers`` contiguous ranges; each range gets its
    own sampling RNG (``SeedSequence([seed, worker])``) and private
    Misra-Gries summary. Per-core batches keep stream order, which equals
    concatenating the workers' sub-batches in worker order.
    """
    if not 0.0 < uniform_p <= 1.0:
        raise ValueError(f"uniform_p must be in (0, 1], got {uniform_p}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    ncores = num_cores(params.C)
    ranges = np.array_split(np.arange(len(edges)), workers) if len(edges) else [np.arange(0)]
    seeds = [np.random.SeedSequence([seed, w]) for w in range(len(ranges))]
    jobs = [(edges[r[0]:r[-1] + 1] if len(r) else edges[:0], params, uniform_p, s, mg_k) for r, s in zip(ranges, seeds)]

    if len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(lambda j: _worker_pass(*j), jobs))
    else:
        parts = [_worker_pass(*jobs[0])]

    kept = np.concatenate([p[0] for p in parts]) if parts else edges[:0]
    routes = np.concatenate([p[1] for p in parts]) if parts else np.empty((0, params.C), np.int64)
    flat = routes.ravel()
    order = np.argsort(flat, kind="stable")
    counts = np.bincount(flat, minlength=ncores)
    bounds = np.concatenate([[0], np.cumsum(counts)])
    edge_idx = order // params.C
    batches = [kept[edge_idx[bounds[c]:bounds[c + 1]]] for c in range(ncores)]

    summary = None
    if mg_k:
        summary = mg_merge([p[2] for p in parts])
    return CoreBatchSet(batches, counts.astype(np.int64), summary)
