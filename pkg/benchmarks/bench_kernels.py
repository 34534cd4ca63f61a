"""Compare the compiled and pure-Python counting kernels on the same samples.

    python benchmarks/bench_kernels.py [--sizes 2000,20000] [--repeats 3]
"""
import argparse
import time

from pimtc import kernels
from pimtc.graph_io import preprocess
from pimtc.pim_core import build_region_index, count_triangles, sort_sample
from pimtc.synth import gnm, hubs


def _samples(sizes, seed):
    for m in sizes:
        n = max(50, m // 5)
        yield f"uniform m={m}", preprocess(gnm(n, m, seed), seed).edges
        hub_degree = min(m // 8, n - 2)
        yield f"hubs m={m}", preprocess(hubs(n, m, 2, hub_degree, seed), seed).edges


def _best(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return out, best


def run(sizes, repeats=3, threads=16, scratch=128, seed=0):
    backends = kernels.available_backends()
    rows = []
    for label, edges in _samples(sizes, seed):
        work = sort_sample(edges)
        index = build_region_index(work)
        timings = {}
        counts = set()
        for name in backends:
            count, secs = _best(lambda: count_triangles(work, index, threads, scratch, backend=name), repeats)
            counts.add(count)
            timings[name] = secs
        if len(counts) != 1:
            raise RuntimeError(f"backends disagree on {label}: {counts}")
        rows.append((label, len(work), counts.pop(), timings))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2000,20000", help="comma-separated edge counts")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--threads", type=int, default=16)
    ap.add_argument("--scratch", type=int, default=128)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    rows = run(sizes, args.repeats, args.threads, args.scratch)
    names = sorted(rows[0][3]) if rows else []
    header = f"{'sample':<18}{'edges':>8}{'triangles':>11}" + "".join(f"{n + ' ms':>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, m, tri, t in rows:
        line = f"{label:<18}{m:>8}{tri:>11}" + "".join(f"{t[n] * 1e3:>14.2f}" for n in names)
        if len(names) == 2:
            line += f"{t['python'] / t['compiled']:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
