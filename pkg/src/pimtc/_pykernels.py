"""Pure-Python twin of the compiled kernel in ``_kernels.pyx``."""
from bisect import bisect_left


def _find(nodes, key):
    i = bisect_left(nodes, key)
    if i < len(nodes) and nodes[i] == key:
        return i
    return -1


def _merge(seconds, us, ue, vs, ve, cap):
    # both neighbor lists are read through windows of at most `cap` entries
    ubuf = seconds[us:min(us + cap, ue)]
    us += len(ubuf)
    vbuf = seconds[vs:min(vs + cap, ve)]
    vs += len(vbuf)
    ui = vi = 0
    found = 0
    while True:
        if ui == len(ubuf):
            if us >= ue:
                break
            ubuf = seconds[us:min(us + cap, ue)]
            us += len(ubuf)
            ui = 0
        if vi == len(vbuf):
            if vs >= ve:
                break
            vbuf = seconds[vs:min(vs + cap, ve)]
            vs += len(vbuf)
            vi = 0
        w = ubuf[ui]
        z = vbuf[vi]
        if w == z:
            found += 1
            ui += 1
            vi += 1
        elif w < z:
            ui += 1
        else:
            vi += 1
    return found


def count_sorted(edges, nodes, offsets, threads, cap, per_edge=None):
    if threads < 1 or cap < 1:
        raise ValueError("threads and cap must be >= 1")
    m = len(edges)
    counts = [0] * threads
    if m == 0 or len(nodes) == 0:
        return 0, counts
    firsts = edges[:, 0].tolist()
    seconds = edges[:, 1].tolist()
    nodes = nodes.tolist()
    offsets = offsets.tolist()
    nreg = len(nodes)
    if per_edge is not None and len(per_edge) != m:
        raise ValueError("per_edge length mismatch")

    pos = chunk = 0
    prev_u = -1
    ue = 0
    while pos < m:
        tid = chunk % threads
        stop = min(pos + cap, m)
        buf_u = firsts[pos:stop]
        buf_v = seconds[pos:stop]
        for k in range(stop - pos):
            i = pos + k
            u = buf_u[k]
            v = buf_v[k]
            if u != prev_u:
                ureg = _find(nodes, u)
                ue = offsets[ureg + 1] if ureg + 1 < nreg else m
                prev_u = u
            if i + 1 >= ue:
                continue
            r = _find(nodes, v)
            if r < 0:
                continue
            vs = offsets[r]
            ve = offsets[r + 1] if r + 1 < nreg else m
            c = _merge(seconds, i + 1, ue, vs, ve, cap)
            counts[tid] += c
            if per_edge is not None:
                per_edge[i] = c
        pos = stop
        chunk += 1
    return sum(counts), counts
