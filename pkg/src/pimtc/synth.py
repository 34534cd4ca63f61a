"""Desk-scale synthetic graphs written as COO text files."""
from __future__ import annotations

import numpy as np

from .graph_io import as_edge_array, write_coo

KINDS = ("erdos_renyi", "gnm", "hubs", "rmat", "star_plus_clique")

# pair enumeration above this size switches to rejection sampling
_DENSE_PAIR_LIMIT = 4_000_000


def erdos_renyi(n, p, seed=0) -> np.ndarray:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    pairs = n * (n - 1) // 2
    if pairs == 0 or p == 0.0:
        return np.empty((0, 2), dtype=np.int64)
    if pairs <= _DENSE_PAIR_LIMIT:
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(len(iu)) < p
        return np.column_stack([iu[keep], ju[keep]]).astype(np.int64)
    # G(n, p) edge count is binomial; draw that many distinct pairs
    m = int(rng.binomial(pairs, p))
    return _distinct_pairs(rng, 0, n, m)


def _distinct_pairs(rng, lo, n, m):
    """``m`` distinct normalized pairs drawn uniformly over ``[lo, n)``."""
    found = np.empty((0, 2), dtype=np.int64)
    while len(found) < m:
        need = m - len(found)
        u = rng.integers(lo, n, size=2 * need + 16)
        v = rng.integers(lo, n, size=2 * need + 16)
        cand = np.sort(np.column_stack([u, v]), axis=1)
        cand = cand[cand[:, 0] != cand[:, 1]]
        found = np.unique(np.concatenate([found, cand]), axis=0)
    # np.unique sorts; a random subset keeps the draw uniform
    return found[rng.permutation(len(found))[:m]]


def gnm(n, m, seed=0) -> np.ndarray:
    """Uniform random graph with exactly ``m`` edges on ``n`` nodes."""
    if n < 0 or m < 0 or m > n * (n - 1) // 2:
        raise ValueError(f"cannot place {m} edges on {n} nodes")
    return _distinct_pairs(np.random.default_rng(seed), 0, n, m)


def hubs(n, m, hub_count=8, hub_degree=4000, seed=0) -> np.ndarray:
    """``hub_count`` low-ID stars of ``hub_degree`` leaves over a uniform background; exactly ``m`` edges."""
    star_edges = hub_count * hub_degree
    if hub_count < 0 or hub_degree < 0 or hub_degree > n - hub_count:
        raise ValueError("hub_degree must fit in the non-hub nodes")
    if star_edges > m:
        raise ValueError(f"stars need {star_edges} edges but m={m}")
    rng = np.random.default_rng(seed)
    parts = [np.empty((0, 2), dtype=np.int64)]
    for h in range(hub_count):
        leaves = rng.choice(np.arange(hub_count, n), hub_degree, replace=False)
        parts.append(np.column_stack([np.full(hub_degree, h), leaves]))
    stars = np.concatenate(parts)
    background = _distinct_pairs(rng, hub_count, n, m - star_edges)
    out = np.concatenate([stars, background])
    return out[rng.permutation(len(out))]


def rmat(scale, edge_factor=16, a=0.57, b=0.19, c=0.19, seed=0) -> np.ndarray:
    """Recursive-matrix generator; defaults are the Graph500 quadrant weights.

    Output is raw: duplicates and self-loops are left for preprocessing.
    """
    if scale < 0 or edge_factor < 0:
        raise ValueError("scale and edge_factor must be >= 0")
    if min(a, b, c) < 0 or a + b + c > 1.0:
        raise ValueError(f"invalid quadrant weights a={a} b={b} c={c}")
    rng = np.random.default_rng(seed)
    m = (1 << scale) * edge_factor
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for bit in range(scale):
        r = rng.random(m)
        # quadrants: a -> (0,0), b -> (0,1), c -> (1,0), d -> (1,1)
        src_bit = r >= a + b
        dst_bit = ((r >= a) & (r < a + b)) | (r >= a + b + c)
        src |= src_bit.astype(np.int64) << bit
        dst |= dst_bit.astype(np.int64) << bit
    return np.column_stack([src, dst])


def star_plus_clique(leaves, clique) -> np.ndarray:
    """A star (center 0) joined by one edge to a clique; binom(clique, 3) triangles."""
    if leaves < 0 or clique < 0:
        raise ValueError("leaves and clique must be >= 0")
    star = [(0, i) for i in range(1, leaves + 1)]
    base = leaves + 1
    members = range(base, base + clique)
    kq = [(u, v) for u in members for v in members if u < v]
    bridge = [(0, base)] if clique else []
    return as_edge_array(star + kq + bridge)


def synth_graph(kind, path=None, seed=0, **params) -> np.ndarray:
    if kind == "erdos_renyi":
        edges = erdos_renyi(params.get("n", 100), params.get("p", 0.1), seed)
    elif kind == "gnm":
        edges = gnm(params.get("n", 100), params.get("m", 300), seed)
    elif kind == "hubs":
        edges = hubs(params.get("n", 100), params.get("m", 300), params.get("hub_count", 2),
                     params.get("hub_degree", 20), seed)
    elif kind == "rmat":
        edges = rmat(params.get("scale", 10), params.get("edge_factor", 16),
                     params.get("a", 0.57), params.get("b", 0.19), params.get("c", 0.19), seed)
    elif kind == "star_plus_clique":
        edges = star_plus_clique(params.get("leaves", 100), params.get("clique", 5))
    else:
        raise ValueError(f"unknown graph kind {kind!r}; expected one of {KINDS}")
    if path is not None:
        write_coo(path, edges)
    return edges
