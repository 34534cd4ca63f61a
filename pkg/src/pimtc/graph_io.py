"""Edge-list ingest: COO parsing, preprocessing and chunking.

Edges are carried as ``(m, 2)`` int64 numpy arrays. After :func:`preprocess`
every row satisfies ``u < v`` and rows are unique.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

# IDs above the maximum are handed out to remapped heavy nodes, so inputs are
# kept to 31 bits.
MAX_NODE_ID = 2**31 - 1


class ParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class EdgeList:
    edges: np.ndarray
    max_node_id: int

    def __len__(self):
        return len(self.edges)


def as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (m, 2) edge array, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def parse_coo(stream) -> np.ndarray:
    """Parse a whitespace separated edge list into a raw ``(m, 2)`` array.

    ``stream`` is any iterable of text lines (an open file, ``io.StringIO``) or
    a plain string. Blank lines and lines starting with ``#`` or ``%`` are
    skipped. Raises :class:`ParseError` naming the offending line.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out = []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected 2 tokens, got {len(tokens)}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer token in {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, "negative node id")
        if u > MAX_NODE_ID or v > MAX_NODE_ID:
            raise ParseError(lineno, f"node id exceeds {MAX_NODE_ID}")
        out.append((u, v))
    return as_edge_array(out)


def read_coo(path) -> np.ndarray:
    with open(os.fspath(path)) as fh:
        return parse_coo(fh)


def write_coo(path, edges):
    edges = as_edge_array(edges)
    with open(os.fspath(path), "w") as fh:
        for u, v in edges.tolist():
            fh.write(f"{u} {v}\n")


def preprocess(raw, shuffle_seed) -> EdgeList:
    """Drop self-loops, normalize to ``u < v``, dedup, then shuffle with a seed."""
    raw = as_edge_array(raw)
    raw = raw[raw[:, 0] != raw[:, 1]]
    norm = np.sort(raw, axis=1)
    norm = np.unique(norm, axis=0) if len(norm) else norm
    rng = np.random.default_rng(shuffle_seed)
    norm = norm[rng.permutation(len(norm))]
    max_id = int(norm.max()) if len(norm) else 0
    return EdgeList(np.ascontiguousarray(norm), max_id)


def split_chunks(edges, k: int) -> list[np.ndarray]:
    """Split into ``k`` contiguous chunks whose sizes differ by at most one."""
    if k < 1:
        raise ValueError(f"chunk count must be >= 1, got {k}")
    if isinstance(edges, EdgeList):
        edges = edges.edges
    edges = as_edge_array(edges)
    return np.array_split(edges, k)
