# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled merge-counting kernel. Mirrors ``_pykernels`` line for line."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline Py_ssize_t _find(const i64* nodes, Py_ssize_t n, i64 key) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if nodes[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < n and nodes[lo] == key:
        return lo
    return -1


cdef inline Py_ssize_t _fill(const i64* edges, Py_ssize_t start, Py_ssize_t stop,
                             i64* buf, Py_ssize_t cap) noexcept nogil:
    # copy second endpoints of rows [start, min(start+cap, stop)) into a scratch window
    cdef Py_ssize_t n = stop - start, k
    if n > cap:
        n = cap
    for k in range(n):
        buf[k] = edges[2 * (start + k) + 1]
    return n


cdef i64 _merge(const i64* edges, Py_ssize_t us, Py_ssize_t ue, Py_ssize_t vs, Py_ssize_t ve,
                i64* ubuf, i64* vbuf, Py_ssize_t cap) noexcept nogil:
    cdef Py_ssize_t ulen, vlen, ui = 0, vi = 0
    cdef i64 w, z, found = 0
    ulen = _fill(edges, us, ue, ubuf, cap)
    us += ulen
    vlen = _fill(edges, vs, ve, vbuf, cap)
    vs += vlen
    while True:
        if ui == ulen:
            if us >= ue:
                break
            ulen = _fill(edges, us, ue, ubuf, cap)
            us += ulen
            ui = 0
        if vi == vlen:
            if vs >= ve:
                break
            vlen = _fill(edges, vs, ve, vbuf, cap)
            vs += vlen
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


def count_sorted(const i64[:, ::1] edges, const i64[::1] nodes, const i64[::1] offsets,
                 Py_ssize_t threads, Py_ssize_t cap, i64[::1] per_edge=None):
    """Count triangles in a sorted, strictly increasing edge sample.

    Returns ``(total, per_thread_counts)``.
    """
    cdef Py_ssize_t m = edges.shape[0], nreg = nodes.shape[0]
    if threads < 1 or cap < 1:
        raise ValueError("threads and cap must be >= 1")
    counts = [0] * threads
    if m == 0 or nreg == 0:
        return 0, counts

    cdef const i64* e = &edges[0, 0]
    cdef const i64* nd = &nodes[0]
    cdef const i64* off = &offsets[0]
    cdef bint record = per_edge is not None
    cdef i64* pe = NULL
    if record:
        if per_edge.shape[0] != m:
            raise ValueError("per_edge length mismatch")
        pe = &per_edge[0]

    cdef i64* ebuf = <i64*> malloc(2 * cap * sizeof(i64))
    cdef i64* ubuf = <i64*> malloc(cap * sizeof(i64))
    cdef i64* vbuf = <i64*> malloc(cap * sizeof(i64))
    cdef i64* tcount = <i64*> malloc(threads * sizeof(i64))
    if ebuf == NULL or ubuf == NULL or vbuf == NULL or tcount == NULL:
        free(ebuf); free(ubuf); free(vbuf); free(tcount)
        raise MemoryError()

    cdef Py_ssize_t pos = 0, stop, n, k, i, r, chunk = 0, tid
    cdef Py_ssize_t ue = 0, vs, ve, ureg
    cdef i64 u, v, prev_u = -1, c
    try:
        with nogil:
            for k in range(threads):
                tcount[k] = 0
            while pos < m:
                # threads claim fixed-size chunks from a shared cursor in turn
                tid = chunk % threads
                stop = pos + cap
                if stop > m:
                    stop = m
                n = stop - pos
                for k in range(2 * n):
                    ebuf[k] = e[2 * pos + k]
                for k in range(n):
                    i = pos + k
                    u = ebuf[2 * k]
                    v = ebuf[2 * k + 1]
                    if u != prev_u:
                        ureg = _find(nd, nreg, u)
                        ue = off[ureg + 1] if ureg + 1 < nreg else m
                        prev_u = u
                    if i + 1 >= ue:
                        continue
                    r = _find(nd, nreg, v)
                    if r < 0:
                        continue
                    vs = off[r]
                    ve = off[r + 1] if r + 1 < nreg else m
                    c = _merge(e, i + 1, ue, vs, ve, ubuf, vbuf, cap)
                    tcount[tid] += c
                    if record:
                        pe[i] = c
                pos = stop
                chunk += 1
        for k in range(threads):
            counts[k] = tcount[k]
    finally:
        free(ebuf)
        free(ubuf)
        free(vbuf)
        free(tcount)
    return sum(counts), counts
