"""Lattice vertices, undirected edges and paths on Z^d."""
from dataclasses import dataclass
from itertools import product

from .errors import ConfigurationError

_COORD_LIMIT = 1 << 62

Vertex = tuple  # tuple[int, ...]


def as_vertex(coords):
    """Validate and normalise ``coords`` into a vertex tuple."""
    try:
        v = tuple(coords)
    except TypeError:
        raise ConfigurationError(f"vertex must be a sequence of integers, got {coords!r}")
    if not v:
        raise ConfigurationError("vertex dimension must be >= 1")
    out = []
    for c in v:
        if isinstance(c, bool) or not isinstance(c, int):
            if hasattr(c, "__index__"):
                c = c.__index__()
            else:
                raise ConfigurationError(f"non-integer coordinate {c!r}")
        if not -_COORD_LIMIT < c < _COORD_LIMIT:
            raise ConfigurationError(f"coordinate {c} outside the supported 64-bit range")
        out.append(int(c))
    return tuple(out)


def _check_dims(a, b):
    if len(a) != len(b):
        raise ConfigurationError(f"dimension mismatch: {len(a)} vs {len(b)}")


def l1_distance(a, b):
    _check_dims(a, b)
    return sum(abs(x - y) for x, y in zip(a, b))


def l1_norm(v):
    return sum(abs(x) for x in v)


def scale(v, k):
    return tuple(k * x for x in v)


@dataclass(frozen=True, order=True)
class Edge:
    """Undirected lattice edge from ``base`` to ``base + unit(axis)``."""

    base: tuple
    axis: int

    def __post_init__(self):
        if not 0 <= self.axis < len(self.base):
            raise ConfigurationError(f"axis {self.axis} out of range for d={len(self.base)}")

    @classmethod
    def between(cls, u, v):
        _check_dims(u, v)
        diff = [i for i, (x, y) in enumerate(zip(u, v)) if x != y]
        if len(diff) != 1 or abs(u[diff[0]] - v[diff[0]]) != 1:
            raise ConfigurationError(f"{u} and {v} are not lattice neighbours")
        axis = diff[0]
        return cls(min(u, v, key=lambda w: w[axis]), axis)

    @property
    def tip(self):
        t = list(self.base)
        t[self.axis] += 1
        return tuple(t)

    def endpoints(self):
        return self.base, self.tip

    def other(self, v):
        if v == self.base:
            return self.tip
        if v == self.tip:
            return self.base
        raise ConfigurationError(f"{v} is not an endpoint of {self}")

    def to_json(self):
        return {"base": list(self.base), "axis": self.axis}

    @classmethod
    def from_json(cls, obj):
        return cls(as_vertex(obj["base"]), int(obj["axis"]))


def neighbors(v):
    """The 2d incident edges of ``v`` with their far endpoints.

    Ordered by axis, negative direction first.
    """
    out = []
    for axis in range(len(v)):
        lo = list(v)
        lo[axis] -= 1
        lo = tuple(lo)
        hi = list(v)
        hi[axis] += 1
        hi = tuple(hi)
        out.append((Edge(lo, axis), lo))
        out.append((Edge(v, axis), hi))
    return out


def l1_ball(center, radius):
    """All lattice points within L1 distance ``radius`` of ``center``."""
    if radius < 0:
        return set()
    d = len(center)
    pts = set()
    for offs in product(range(-radius, radius + 1), repeat=d - 1):
        rest = radius - sum(abs(o) for o in offs)
        if rest < 0:
            continue
        for last in range(-rest, rest + 1):
            pts.add(tuple(c + o for c, o in zip(center, offs + (last,))))
    return pts


@dataclass(frozen=True)
class Path:
    """A lattice path; ``steps`` is a tuple of (edge, arrival vertex)."""

    start: tuple
    steps: tuple = ()

    def __post_init__(self):
        cur = self.start
        for edge, nxt in self.steps:
            if edge.other(cur) != nxt:
                raise ConfigurationError(f"step {edge} does not lead from {cur} to {nxt}")
            cur = nxt

    @classmethod
    def from_vertices(cls, vertices):
        vs = [as_vertex(v) for v in vertices]
        steps = tuple((Edge.between(a, b), b) for a, b in zip(vs, vs[1:]))
        return cls(vs[0], steps)

    @property
    def end(self):
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)
