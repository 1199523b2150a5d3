# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sweep kernels. Mirrors ``_pycore`` operation for operation."""
from cython.operator cimport dereference as deref
from libc.math cimport floor
from libc.stdint cimport uint64_t, int64_t
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef uint64_t TAG_ETA = 0x45544131ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t splitmix64(uint64_t x) noexcept nogil:
    cdef uint64_t z = x + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef struct Clock:
    int kind
    double offset
    double C
    const double *renewals
    Py_ssize_t n_renewals
    double lo
    double hi
    int uniform
    double p
    uint64_t seed_h
    int d


cdef int64_t regime(Clock *clk, double t) except? -1:
    cdef Py_ssize_t lo, hi, mid
    if clk.kind == 0:
        return <int64_t>floor((t + clk.offset) / clk.C)
    if clk.n_renewals == 0 or t >= clk.renewals[clk.n_renewals - 1]:
        raise ValueError(f"time {t} beyond the materialised renewal horizon")
    lo = 0
    hi = clk.n_renewals
    while lo < hi:
        mid = (lo + hi) >> 1
        if t < clk.renewals[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef double boundary(Clock *clk, int64_t k) except? -1.0:
    if clk.kind == 0:
        return k * clk.C - clk.offset
    if k > clk.n_renewals:
        raise ValueError(f"regime {k} beyond the materialised renewal horizon")
    return clk.renewals[k - 1]


cdef inline double eta(Clock *clk, const int64_t *base, int axis, int64_t k) noexcept nogil:
    cdef uint64_t h = clk.seed_h
    cdef int i
    cdef double u
    for i in range(clk.d):
        h = splitmix64(h ^ <uint64_t>base[i])
    h = splitmix64(h ^ <uint64_t>axis)
    h = splitmix64(h ^ <uint64_t>k)
    u = (h >> 11) * INV_2_53
    if clk.uniform:
        return clk.lo + u * (clk.hi - clk.lo)
    return clk.lo if u < clk.p else clk.hi


cdef double traversal(Clock *clk, bint integral, const int64_t *base, int axis, double t) except? -1.0:
    cdef int64_t k
    cdef double cur, rem, v, b, dur, best, wait, cand
    if clk.hi == 1.0:
        return 1.0  # field support is {1}
    k = regime(clk, t)
    if integral:
        cur = t
        rem = 1.0
        while True:
            v = eta(clk, base, axis, k)
            b = boundary(clk, k + 1)
            dur = b - cur
            if dur > 0.0:
                if v * dur >= rem:
                    return (cur - t) + rem / v
                rem -= v * dur
                cur = b
            k += 1
    best = 1.0 / eta(clk, base, axis, k)
    while True:
        k += 1
        wait = boundary(clk, k) - t
        if wait > clk.hi:
            return best
        if wait > 0.0:
            cand = wait + 1.0 / eta(clk, base, axis, k)
            if cand < best:
                best = cand
        else:
            best = 1.0 / eta(clk, base, axis, k)


cdef void init_clock(Clock *clk, params, const double[::1] ren, int d):
    clk.kind = params.kind
    clk.offset = params.offset
    clk.C = params.C
    clk.n_renewals = ren.shape[0]
    clk.renewals = &ren[0] if ren.shape[0] > 0 else NULL
    clk.lo = 1.0 / params.L
    clk.hi = params.L
    clk.uniform = params.dist == 0
    clk.p = params.p
    clk.seed_h = splitmix64((<uint64_t>params.seed) ^ TAG_ETA)
    clk.d = d


def traversal_time(params, model, base, int axis, double t):
    cdef Clock clk
    cdef const double[::1] ren = np.ascontiguousarray(params.renewals, dtype=np.float64)
    cdef int64_t[::1] b = np.ascontiguousarray(base, dtype=np.int64)
    init_clock(&clk, params, ren, b.shape[0])
    return traversal(&clk, model == "integral", &b[0], axis, t)


ctypedef pair[double, int64_t] Entry


def sweep(params, model, source, double t0, int64_t radius, targets=None, budget=None,
          bint reverse_ties=False):
    """Earliest-arrival search; labels are elapsed times since ``t0``."""
    cdef int64_t[::1] src = np.ascontiguousarray(source, dtype=np.int64)
    cdef int d = src.shape[0]
    cdef int64_t width = 2 * radius + 1
    cdef Clock clk
    cdef const double[::1] ren = np.ascontiguousarray(params.renewals, dtype=np.float64)
    cdef bint integral = model == "integral"
    cdef bint has_cutoff = budget is not None
    cdef double cut = budget if has_cutoff else 0.0
    cdef int64_t tie = -1 if not reverse_ties else 1
    cdef int i, axis, step
    cdef int64_t key, nkey, stride, dist_u, rel
    cdef double lab, arr
    cdef Entry top
    cdef priority_queue[Entry] heap
    cdef unordered_map[int64_t, double] best
    cdef unordered_map[int64_t, double].iterator it
    cdef unordered_set[int64_t] done
    cdef unordered_set[int64_t] remaining
    cdef vector[int64_t] out_k
    cdef vector[double] out_t
    cdef vector[int64_t] strides = vector[int64_t](d)
    cdef vector[int64_t] rel_u = vector[int64_t](d)
    cdef vector[int64_t] base = vector[int64_t](d)
    cdef bint has_targets = False

    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if float(width) ** d >= 2.0 ** 62:
        raise OverflowError("search region too large to index")
    init_clock(&clk, params, ren, d)
    stride = 1
    for i in range(d - 1, -1, -1):
        strides[i] = stride
        stride *= width

    if targets is not None and len(targets):
        has_targets = True
        for tv in targets:
            nkey = 0
            inside = True
            for i in range(d):
                rel = int(tv[i]) - src[i]
                if rel < -radius or rel > radius:
                    inside = False
                nkey += (rel + radius) * strides[i]
            if inside:
                remaining.insert(nkey)
            else:
                remaining.insert(-1)  # unreachable sentinel keeps the sweep running to exhaustion

    key = 0
    for i in range(d):
        key += radius * strides[i]
    best[key] = 0.0
    # max-heap on (-label, tie * key): smallest label first, then lexicographic key
    heap.push(Entry(0.0, tie * key))
    while not heap.empty():
        top = heap.top()
        heap.pop()
        lab = -top.first
        key = top.second * tie
        if done.count(key):
            continue
        if has_cutoff and lab > cut:
            break
        done.insert(key)
        out_k.push_back(key)
        out_t.push_back(lab)
        if has_targets:
            remaining.erase(key)
            if remaining.empty():
                break
        dist_u = 0
        nkey = key
        for i in range(d):
            rel_u[i] = nkey // strides[i] - radius
            nkey = nkey % strides[i]
            dist_u += rel_u[i] if rel_u[i] >= 0 else -rel_u[i]
        for axis in range(d):
            for step in range(-1, 2, 2):
                nkey = key + step * strides[axis]
                if done.count(nkey):
                    continue
                if rel_u[axis] * step >= 0:
                    if dist_u + 1 > radius:
                        continue
                for i in range(d):
                    base[i] = src[i] + rel_u[i]
                if step < 0:
                    base[axis] -= 1
                arr = lab + traversal(&clk, integral, base.data(), axis, t0 + lab)
                it = best.find(nkey)
                if it == best.end() or arr < deref(it).second:
                    best[nkey] = arr
                    heap.push(Entry(-arr, tie * nkey))

    cdef Py_ssize_t n = out_k.size()
    coords = np.empty((n, d), dtype=np.int64)
    labels = np.empty(n, dtype=np.float64)
    cdef int64_t[:, ::1] cv = coords
    cdef double[::1] lv = labels
    cdef Py_ssize_t j
    for j in range(n):
        nkey = out_k[j]
        for i in range(d):
            cv[j, i] = nkey // strides[i] - radius + src[i]
            nkey = nkey % strides[i]
        lv[j] = out_t[j]
    return coords, labels
