"""Pure-Python sweep kernels; the fallback when ``_core`` is not compiled.

Keep the arithmetic here in lockstep with ``_core.pyx``: both backends must
produce bit-identical labels for the same ``KernelParams``.
"""
import bisect
import heapq
import math

import numpy as np

from ._prf import TAG_ETA, MASK64, splitmix64

_INV_2_53 = 1.0 / (1 << 53)


class _Clock:
    __slots__ = ("kind", "offset", "C", "renewals", "lo", "hi", "uniform", "p", "seed_h")

    def __init__(self, params):
        self.kind = params.kind
        self.offset = params.offset
        self.C = params.C
        self.renewals = params.renewals.tolist()
        self.lo = 1.0 / params.L
        self.hi = float(params.L)
        self.uniform = params.dist == 0
        self.p = params.p
        self.seed_h = splitmix64((params.seed & MASK64) ^ TAG_ETA)

    def regime(self, t):
        if self.kind == 0:
            return int(math.floor((t + self.offset) / self.C))
        r = self.renewals
        if not r or t >= r[-1]:
            raise ValueError(f"time {t} beyond the materialised renewal horizon")
        return bisect.bisect_right(r, t)

    def boundary(self, k):
        if self.kind == 0:
            return k * self.C - self.offset
        if k > len(self.renewals):
            raise ValueError(f"regime {k} beyond the materialised renewal horizon")
        return self.renewals[k - 1]

    def eta(self, base, axis, k):
        h = self.seed_h
        for c in base:
            h = splitmix64(h ^ (c & MASK64))
        h = splitmix64(h ^ axis)
        h = splitmix64(h ^ (k & MASK64))
        u = (h >> 11) * _INV_2_53
        if self.uniform:
            return self.lo + u * (self.hi - self.lo)
        return self.lo if u < self.p else self.hi


def _traversal(clk, integral, base, axis, t):
    if clk.hi == 1.0:
        return 1.0  # field support is {1}
    k = clk.regime(t)
    if integral:
        cur = t
        rem = 1.0
        while True:
            v = clk.eta(base, axis, k)
            b = clk.boundary(k + 1)
            dur = b - cur
            if dur > 0.0:
                if v * dur >= rem:
                    return (cur - t) + rem / v
                rem -= v * dur
                cur = b
            k += 1
    best = 1.0 / clk.eta(base, axis, k)
    L = clk.hi
    while True:
        k += 1
        wait = clk.boundary(k) - t
        if wait > L:
            return best
        if wait > 0.0:
            cand = wait + 1.0 / clk.eta(base, axis, k)
            if cand < best:
                best = cand
        else:
            # boundary rounded onto t: the later regime governs departure at t
            best = 1.0 / clk.eta(base, axis, k)


def traversal_time(params, model, base, axis, t):
    return _traversal(_Clock(params), model == "integral", tuple(base), axis, t)


def sweep(params, model, source, t0, radius, targets=None, budget=None, reverse_ties=False):
    """Earliest-arrival search; labels are elapsed times since ``t0``."""
    clk = _Clock(params)
    integral = model == "integral"
    d = len(source)
    source = tuple(source)
    remaining = {tuple(t) for t in targets} if targets is not None and len(targets) else None
    sign = -1 if reverse_ties else 1

    def key(v):
        return tuple(sign * c for c in v)

    best = {source: 0.0}
    heap = [(0.0, key(source), source)]
    done = set()
    out_v = []
    out_t = []
    while heap:
        lab, _, u = heapq.heappop(heap)
        if u in done:
            continue
        if budget is not None and lab > budget:
            break
        done.add(u)
        out_v.append(u)
        out_t.append(lab)
        if remaining is not None:
            remaining.discard(u)
            if not remaining:
                break
        dist_u = sum(abs(a - b) for a, b in zip(u, source))
        for axis in range(d):
            for step in (-1, 1):
                v = list(u)
                v[axis] += step
                v = tuple(v)
                if v in done:
                    continue
                # moving one step changes |v - source|_1 by exactly 1
                if dist_u + (1 if (u[axis] - source[axis]) * step >= 0 else -1) > radius:
                    continue
                base = v if step < 0 else u
                arr = lab + _traversal(clk, integral, base, axis, t0 + lab)
                if arr < best.get(v, math.inf):
                    best[v] = arr
                    heapq.heappush(heap, (arr, key(v), v))
    coords = np.array(out_v, dtype=np.int64).reshape(len(out_v), d)
    return coords, np.array(out_t, dtype=np.float64)
