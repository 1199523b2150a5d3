"""Edge traversal times under the integral-speed and departure laws.

``integral``: the traveller moves at the instantaneous edge speed and
arrives once the distance covered reaches 1.

``departure``: at each moment a vehicle leaves with the current speed and
crosses in ``1 / speed``; the traveller may wait and picks the departure
that arrives first. Speeds are piecewise constant, so ``u + 1/speed(u)`` is
increasing within each piece and only ``t`` and the piece starts in
``(t, t + L]`` can be optimal (waiting longer than ``L`` costs more than
leaving immediately, which takes at most ``L``).

These routines walk ``EnvironmentRealization.epochs`` and serve as the
reference implementation; the sweep kernels carry their own copy.
"""
from .errors import ConfigurationError

MODELS = ("integral", "departure")


def check_model(model):
    if model not in MODELS:
        raise ConfigurationError(f"unknown travel model {model!r}; expected one of {MODELS}")
    return model


def traversal_time(env, model, edge, t):
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    L = env.L
    if L == 1:
        check_model(model)
        return 1.0  # field support is {1}
    if model == "integral":
        # one unit of distance at speed >= 1/L takes at most L
        ps = env.epochs(edge, t, t + L + 1.0)
        remaining = 1.0
        cur = t
        for start, end, v in ps.pieces():
            dur = end - start
            if v * dur >= remaining:
                return (cur - t) + remaining / v
            remaining -= v * dur
            cur = end
        raise AssertionError("integral law did not terminate inside its bound")  # pragma: no cover
    if model == "departure":
        ps = env.epochs(edge, t, t + L + 1.0)
        best = None
        for start, _end, v in ps.pieces():
            wait = start - t
            if wait > L:
                break
            cand = wait + 1.0 / v
            if best is None or cand < best:
                best = cand
        return best
    check_model(model)


def arrival(env, model, edge, t):
    return t + traversal_time(env, model, edge, t)


def path_travel_time(env, model, path, t0):
    """Fold ``arrival`` over the path steps; returns total elapsed time."""
    cur = t0
    for edge, _ in path.steps:
        cur = arrival(env, model, edge, cur)
    return cur - t0
