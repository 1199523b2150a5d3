"""Random time-dependent speed environments on the lattice edges.

Two constructions share one global regime clock for all edges:

* ``block``: regimes of length ``C`` starting from a uniform offset ``a``;
  the regime index at time ``t`` is ``floor((t + a) / C)``.
* ``poisson``: regimes separated by the points of a rate-``lambda`` Poisson
  process; the regime index at ``t`` counts renewals in ``(0, t]``.

Within regime ``k`` the speed of edge ``e`` is an i.i.d. draw ``eta(e, k)``
from the field distribution, evaluated lazily by hashing
``(seed, edge, k)``. Nothing is stored per edge.
"""
import bisect
import math
import threading
from dataclasses import dataclass

import numpy as np

from . import _prf
from .errors import ConfigurationError

KINDS = ("block", "poisson")
DISTS = ("uniform", "two_point")


@dataclass(frozen=True)
class FieldSpec:
    L: float
    dist: str = "uniform"
    p: float = 0.5  # two_point: probability of the slow value 1/L

    def __post_init__(self):
        if self.dist not in DISTS:
            raise ConfigurationError(f"unknown field distribution {self.dist!r}")
        if not (isinstance(self.L, (int, float)) and math.isfinite(self.L) and self.L >= 1):
            raise ConfigurationError(f"L must be a finite real >= 1, got {self.L!r}")
        if self.dist == "two_point" and not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"two_point p must lie in [0, 1], got {self.p!r}")

    @property
    def lo(self):
        return 1.0 / self.L

    @property
    def hi(self):
        return float(self.L)

    def draw(self, u):
        """Field value for a uniform variate ``u`` in [0, 1)."""
        if self.dist == "uniform":
            return self.lo + u * (self.hi - self.lo)
        return self.lo if u < self.p else self.hi

    @property
    def mean(self):
        if self.dist == "uniform":
            return 0.5 * (self.lo + self.hi)
        return self.p * self.lo + (1 - self.p) * self.hi

    @property
    def variance(self):
        width = self.hi - self.lo
        if self.dist == "uniform":
            return width * width / 12.0
        return self.p * (1 - self.p) * width * width

    def to_json(self):
        out = {"dist": self.dist}
        if self.dist == "two_point":
            out["p"] = self.p
        return out


@dataclass(frozen=True)
class EnvironmentSpec:
    kind: str
    d: int
    field: FieldSpec
    C: float = None
    lam: float = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown environment kind {self.kind!r}")
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise ConfigurationError(f"dimension d must be an integer >= 1, got {self.d!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.kind == "block":
            if self.lam is not None:
                raise ConfigurationError("block environment takes no 'lambda'")
            if not _positive(self.C):
                raise ConfigurationError(f"block environment needs C > 0, got {self.C!r}")
        else:
            if self.C is not None:
                raise ConfigurationError("poisson environment takes no 'C'")
            if not _positive(self.lam):
                raise ConfigurationError(f"poisson environment needs lambda > 0, got {self.lam!r}")

    @property
    def L(self):
        return self.field.L

    def with_seed(self, seed):
        return EnvironmentSpec(self.kind, self.d, self.field, self.C, self.lam, seed)

    def to_json(self):
        out = {"kind": self.kind, "d": self.d, "L": self.field.L}
        if self.kind == "block":
            out["C"] = self.C
        else:
            out["lambda"] = self.lam
        out["field"] = self.field.to_json()
        out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise ConfigurationError("environment must be a JSON object")
        allowed = {"kind", "d", "L", "C", "lambda", "field", "seed"}
        extra = set(obj) - allowed
        if extra:
            raise ConfigurationError(f"unknown environment keys: {sorted(extra)}")
        for key in ("kind", "d", "L"):
            if key not in obj:
                raise ConfigurationError(f"environment is missing {key!r}")
        fobj = obj.get("field", {"dist": "uniform"})
        if not isinstance(fobj, dict) or set(fobj) - {"dist", "p"}:
            raise ConfigurationError(f"bad field description {fobj!r}")
        fspec = FieldSpec(L=_real(obj["L"], "L"), dist=fobj.get("dist", "uniform"),
                          p=_real(fobj.get("p", 0.5), "p"))
        return cls(kind=obj["kind"], d=obj["d"], field=fspec,
                   C=_real(obj["C"], "C") if "C" in obj else None,
                   lam=_real(obj["lambda"], "lambda") if "lambda" in obj else None,
                   seed=obj.get("seed", 0))


def _positive(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) and x > 0


def _real(x, name):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigurationError(f"{name} must be a number, got {x!r}")
    return float(x)


@dataclass(frozen=True)
class PiecewiseSpeed:
    """Speeds ``values[j]`` on ``[breakpoints[j], breakpoints[j+1])``."""

    breakpoints: tuple
    values: tuple

    def pieces(self):
        return zip(self.breakpoints, self.breakpoints[1:], self.values)

    def at(self, s):
        j = bisect.bisect_right(self.breakpoints, s) - 1
        if j < 0 or j >= len(self.values):
            raise ValueError(f"{s} outside [{self.breakpoints[0]}, {self.breakpoints[-1]})")
        return self.values[j]


@dataclass(frozen=True)
class KernelParams:
    """Flat description of a realization consumed by the sweep kernels."""

    kind: int  # 0 block, 1 poisson
    L: float
    dist: int  # 0 uniform, 1 two_point
    p: float
    seed: int
    offset: float
    C: float
    renewals: np.ndarray


class EnvironmentRealization:
    """One sampled environment; ``speed`` is a pure function of its inputs."""

    def __init__(self, spec, offset=None):
        self.spec = spec
        self.field = spec.field
        self._seed = spec.seed
        self._lock = threading.Lock()
        if spec.kind == "block":
            if offset is None:
                offset = spec.C * _prf.unit_float(_prf.hash_words(spec.seed, _prf.TAG_OFFSET))
            elif not 0.0 <= offset < spec.C:
                raise ConfigurationError(f"offset must lie in [0, C), got {offset}")
            self.offset = float(offset)
            self._renewals = None
        else:
            self.offset = 0.0
            self._renewals = []
            self._last = 0.0

    @property
    def kind(self):
        return self.spec.kind

    @property
    def L(self):
        return self.field.L

    # --- poisson clock -------------------------------------------------
    @property
    def horizon(self):
        if self._renewals is None:
            return math.inf
        return self._last

    def _extend(self, t):
        # materialise renewals until one lies strictly beyond t
        with self._lock:
            r = self._renewals
            while not r or r[-1] <= t:
                i = len(r)
                u = _prf.open_unit_float(_prf.hash_words(self._seed, _prf.TAG_RENEWAL, i))
                nxt = (r[-1] if r else 0.0) + (-math.log(u) / self.spec.lam)
                r.append(nxt)
                self._last = nxt

    def renewal_times(self, until):
        """Renewal times in (0, until], extending the stream as needed."""
        self._extend(until)
        r = self._renewals
        return list(r[:bisect.bisect_right(r, until)])

    # --- regime clock --------------------------------------------------
    def regime_index(self, t):
        if self._renewals is None:
            return int(math.floor((t + self.offset) / self.spec.C))
        self._extend(t)
        return bisect.bisect_right(self._renewals, t)

    def regime_start(self, k):
        """Left end of regime ``k`` (0 for the initial regime)."""
        if k <= 0:
            return 0.0
        if self._renewals is None:
            return k * self.spec.C - self.offset
        while len(self._renewals) < k:
            self._extend(self._last)
        return self._renewals[k - 1]

    # --- speeds --------------------------------------------------------
    def eta(self, edge, k):
        return self.field.draw(_prf.unit_float(_prf.edge_key(self._seed, edge.base, edge.axis, k)))

    def speed(self, edge, t):
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        return self.eta(edge, self.regime_index(t))

    def epochs(self, edge, t0, t1):
        if not 0 <= t0 < t1:
            raise ValueError(f"need 0 <= t0 < t1, got [{t0}, {t1})")
        k = self.regime_index(t0)
        bps = [t0]
        vals = [self.eta(edge, k)]
        while True:
            b = self.regime_start(k + 1)
            if b >= t1:
                break
            k += 1
            if b > bps[-1]:
                bps.append(b)
                vals.append(self.eta(edge, k))
            else:
                vals[-1] = self.eta(edge, k)
        bps.append(t1)
        return PiecewiseSpeed(tuple(bps), tuple(vals))

    def kernel_params(self, horizon):
        """Snapshot for the sweep kernels, valid for queries up to ``horizon``."""
        if self._renewals is None:
            ren = np.empty(0, dtype=np.float64)
            kind, C = 0, float(self.spec.C)
        else:
            self._extend(horizon)
            with self._lock:
                ren = np.array(self._renewals, dtype=np.float64)
            kind, C = 1, 0.0
        return KernelParams(kind, float(self.L), DISTS.index(self.field.dist), float(self.field.p),
                            self._seed, float(self.offset), C, ren)


def sample_environment(spec, offset=None):
    """Realise ``spec``; ``offset`` pins the block clock phase instead of drawing it."""
    if not isinstance(spec, EnvironmentSpec):
        raise ConfigurationError(f"expected an EnvironmentSpec, got {type(spec).__name__}")
    if offset is not None and spec.kind != "block":
        raise ConfigurationError("only block environments have an offset")
    return EnvironmentRealization(spec, offset)


def regime_covariance_theoretical(spec, s):
    """Cov[speed(e, 0), speed(e, s)] for a fixed edge."""
    if s < 0:
        raise ValueError("lag must be nonnegative")
    var = spec.field.variance
    if spec.kind == "block":
        return var * max(0.0, 1.0 - s / spec.C)
    return var * math.exp(-spec.lam * s)
