"""Brute-force references. Shares no code with the core kernel on purpose."""
from __future__ import annotations

from collections import Counter, defaultdict
from itertools import combinations


def adjacency(edges) -> dict:
    """Symmetric neighbor sets; self-loops dropped."""
    adj = defaultdict(set)
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            continue
        adj[u].add(v)
        adj[v].add(u)
    return adj


def sorted_adjacency(edges) -> dict:
    return {u: sorted(nbrs) for u, nbrs in adjacency(edges).items()}


def exact_count(edges) -> int:
    """Edge iterator: for each u < v, count common neighbors w > v."""
    adj = adjacency(edges)
    total = 0
    for u, nbrs in adj.items():
        for v in nbrs:
            if v <= u:
                continue
            for w in nbrs & adj[v]:
                if w > v:
                    total += 1
    return total


def exact_count_triples(edges) -> int:
    # every node triple, checked pairwise
    adj = adjacency(edges)
    return sum(1 for a, b, c in combinations(sorted(adj), 3)
               if b in adj[a] and c in adj[a] and c in adj[b])


def exact_frequencies(stream) -> dict:
    return dict(Counter(stream))
