"""Exact first passage times by time-dependent earliest-arrival search.

Both travel laws are FIFO (arriving later at an edge never lets you leave
it earlier), so a label-setting Dijkstra search keyed on arrival time is
exact: once a vertex is extracted no later path can reach it sooner.

The infimum over all lattice paths is a minimum over a finite region.
Every edge takes at least ``1/L`` and the straight L1 path from ``A`` to
``B`` costs at most ``L * |A - B|_1``, so an optimal path has at most
``L^2 * |A - B|_1`` edges and never leaves the L1 ball of that radius
around ``A``. ``region_radius`` returns this bound and the search is
confined to it.
"""
import math

import numpy as np
from dataclasses import dataclass, field

from . import kernels
from .errors import ConfigurationError, OracleInfeasible
from .geometry import as_vertex, l1_distance, l1_norm, neighbors, scale
from .travel import arrival, check_model


def region_radius(L, A, B):
    if L < 1:
        raise ConfigurationError(f"L must be >= 1, got {L}")
    return max(1, math.ceil(L * L * l1_distance(A, B)))


def _horizon(env, t0, radius):
    # labels inside the ball are at most t0 + L*radius; one traversal adds <= L
    return t0 + env.L * (radius + 2) + 1.0


@dataclass
class ArrivalLabels:
    """Earliest arrival times from ``source`` at ``start_time``.

    ``order``/``elapsed`` hold the finalised vertices in extraction order
    and their travel times since ``start_time``. Elapsed times are kept as
    the primary record so passage times carry no ``start_time`` rounding.
    """

    source: tuple
    start_time: float
    radius: int
    order: object  # (n, d) int64 array
    elapsed: object  # (n,) float64 array
    _index: dict = field(default=None, repr=False)

    @property
    def times(self):
        return self.start_time + self.elapsed

    @property
    def labels(self):
        """Vertex -> absolute arrival time."""
        if self._index is None:
            self._index = {tuple(v): t for v, t in zip(self.order.tolist(), self.times.tolist())}
        return self._index

    def _find(self, v):
        # single lookups skip building the full map
        hit = np.flatnonzero((self.order == np.asarray(v, dtype=np.int64)).all(axis=1))
        if not len(hit):
            raise KeyError(tuple(v))
        return hit[0]

    def elapsed_at(self, v):
        return float(self.elapsed[self._find(v)])

    def __getitem__(self, v):
        if self._index is not None:
            return self._index[tuple(v)]
        return self.start_time + float(self.elapsed[self._find(v)])

    def get(self, v, default=math.inf):
        return self.labels.get(tuple(v), default)

    def __contains__(self, v):
        return tuple(v) in self.labels

    def __len__(self):
        return len(self.elapsed)


def earliest_arrival(env, model, source, t0, radius, targets=None, budget=None,
                     reverse_ties=False, backend=None):
    """Label-setting search from ``source`` inside the L1 ball of ``radius``.

    With ``targets`` the search stops once all of them are final; with
    ``budget`` it stops before finalising any vertex whose elapsed time
    exceeds it. Neither changes the labels that are returned.
    """
    check_model(model)
    source = as_vertex(source)
    if len(source) != env.spec.d:
        raise ConfigurationError(f"source has dimension {len(source)}, environment has {env.spec.d}")
    if t0 < 0:
        raise ValueError(f"start time must be nonnegative, got {t0}")
    be = kernels.get_backend(backend) if backend else kernels.backend
    horizon = _horizon(env, t0, radius)
    if budget is not None:
        horizon = min(horizon, t0 + budget + env.L + 1.0)
    params = env.kernel_params(horizon)
    order, elapsed = be.sweep(params, model, source, float(t0), int(radius),
                              targets=targets, budget=budget, reverse_ties=reverse_ties)
    return ArrivalLabels(source, t0, radius, order, elapsed)


@dataclass(frozen=True)
class PassageQuery:
    A: tuple
    B: tuple
    t0: float = 0.0

    def __post_init__(self):
        a, b = as_vertex(self.A), as_vertex(self.B)
        if len(a) != len(b):
            raise ConfigurationError("query endpoints differ in dimension")
        if self.t0 < 0:
            raise ConfigurationError("start time must be nonnegative")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)


def first_passage(env, model, q, backend=None):
    """Shortest travel time from ``q.A`` to ``q.B`` departing at ``q.t0``."""
    if q.A == q.B:
        return 0.0
    R = region_radius(env.L, q.A, q.B)
    labels = earliest_arrival(env, model, q.A, q.t0, R, targets=[q.B], backend=backend)
    return labels.elapsed_at(q.B)


def brute_force_first_passage(env, model, q, max_edges, max_paths=2_000_000):
    """Minimum travel time over every path of at most ``max_edges`` edges.

    Depth-first enumeration confined to the search region, with
    branch-and-bound on the lower bound ``elapsed + remaining/L``. Uses
    only ``travel.arrival``; independent of the sweep kernels.
    """
    check_model(model)
    A, B, t0 = q.A, q.B, q.t0
    if A == B:
        return 0.0
    L = env.L
    R = region_radius(L, A, B)
    best = [math.inf]
    count = [0]
    slack = 1e-12

    def walk(v, t, depth):
        count[0] += 1
        if count[0] > max_paths:
            raise OracleInfeasible(f"more than {max_paths} partial paths for {q}")
        if v == B and t - t0 < best[0]:
            best[0] = t - t0
        if depth == max_edges:
            return
        for edge, w in neighbors(v):
            if l1_distance(w, A) > R:
                continue
            remaining = l1_distance(w, B)
            if remaining > max_edges - depth - 1:
                continue
            t_next = arrival(env, model, edge, t)
            if (t_next - t0) + remaining / L > best[0] + slack:
                continue
            walk(w, t_next, depth + 1)

    walk(A, t0, 0)
    if math.isinf(best[0]):
        raise OracleInfeasible(f"no path within {max_edges} edges for {q}")
    return best[0]


def directional_passage(env, model, e, m, n, t):
    """``X^t(m e, n e)`` for lattice direction ``e``."""
    e = as_vertex(e)
    if l1_norm(e) == 0:
        raise ConfigurationError("direction must be nonzero")
    if not 0 <= m < n:
        raise ConfigurationError(f"need 0 <= m < n, got m={m}, n={n}")
    return first_passage(env, model, PassageQuery(scale(e, m), scale(e, n), t))


def directional_passages(env, model, e, n_grid, t=0.0, backend=None):
    """``X^t(0, n e)`` for every ``n`` in ``n_grid`` from one sweep."""
    e = as_vertex(e)
    if l1_norm(e) == 0:
        raise ConfigurationError("direction must be nonzero")
    origin = (0,) * len(e)
    targets = [scale(e, n) for n in n_grid]
    R = region_radius(env.L, origin, targets[-1])
    labels = earliest_arrival(env, model, origin, t, R, targets=targets, backend=backend)
    return [labels.elapsed_at(v) for v in targets]


MODES = ("fixed_zero", "diagonal")


def reachable_set(env, model, t, start_time_mode="fixed_zero", backend=None):
    """Lattice points reachable from the origin within time ``t``.

    ``fixed_zero`` departs at time 0; ``diagonal`` departs at time ``t``.
    """
    if start_time_mode not in MODES:
        raise ConfigurationError(f"unknown start time mode {start_time_mode!r}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    start = 0.0 if start_time_mode == "fixed_zero" else float(t)
    labels = reachable_labels(env, model, t, start, backend=backend)
    return {tuple(v) for v in labels.order.tolist()}


def reachable_labels(env, model, t, start=0.0, backend=None):
    origin = (0,) * env.spec.d
    R = math.ceil(env.L * t) + 1
    return earliest_arrival(env, model, origin, start, R, budget=float(t), backend=backend)
