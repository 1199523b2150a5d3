"""Randomised checks of the structural hypotheses on sampled instances.

Each sample draws a fresh environment and a small random instance, then
tests subadditivity along a direction, the time-shift inequality, the
one-step bound, the L1 bounds on every passage time computed, and FIFO
of single-edge arrivals. Violations beyond ``TOL`` are counted.
"""
import random
from dataclasses import dataclass, field
from functools import partial

from .. import travel
from .._prf import TAG_SAMPLE, derive_seed, hash_words
from ..environment import sample_environment
from ..errors import ConfigurationError
from ..geometry import Edge, l1_distance, scale
from ..solver import PassageQuery, first_passage
from ..travel import check_model
from ._parallel import chunks, map_ordered

TOL = 1e-9

CHECKS = ("subadditivity", "bounded_step", "time_shift", "fifo", "l1_bounds")


@dataclass
class CheckTally:
    samples: int = 0
    violations: int = 0
    max_violation: float = 0.0
    first_failing_seed: int = None
    _first_index: int = None

    def record(self, excess, index, seed):
        self.samples += 1
        if excess > self.max_violation:
            self.max_violation = excess
        if excess > TOL:
            self.violations += 1
            if self._first_index is None or index < self._first_index:
                self._first_index = index
                self.first_failing_seed = seed

    def merge(self, other):
        self.samples += other.samples
        self.violations += other.violations
        self.max_violation = max(self.max_violation, other.max_violation)
        if other._first_index is not None and (self._first_index is None
                                               or other._first_index < self._first_index):
            self._first_index = other._first_index
            self.first_failing_seed = other.first_failing_seed

    def to_json(self):
        return {"samples": self.samples, "violations": self.violations,
                "max_violation": self.max_violation, "first_failing_seed": self.first_failing_seed}


@dataclass
class HypothesisReport:
    checks: dict = field(default_factory=lambda: {k: CheckTally() for k in CHECKS})

    @property
    def passed(self):
        return all(c.violations == 0 for c in self.checks.values())

    def reproduction_seed(self):
        seeds = [c.first_failing_seed for c in self.checks.values() if c.first_failing_seed is not None]
        return seeds[0] if seeds else None

    def to_json(self):
        return {"passed": self.passed, "tolerance": TOL,
                "checks": {k: v.to_json() for k, v in self.checks.items()}}

    def csv_rows(self):
        header = ["hypothesis", "samples", "violations", "max_violation"]
        return header, [[k, c.samples, c.violations, c.max_violation] for k, c in self.checks.items()]


def _random_direction(rng, d):
    while True:
        e = tuple(rng.randint(-2, 2) for _ in range(d))
        if 0 < sum(abs(x) for x in e) <= 2:
            return e


def _check_sample(index, seed, spec, model, report, arrival_fn, rng):
    env = sample_environment(spec.with_seed(seed))
    L = env.L
    d = spec.d
    checks = report.checks

    def X(A, B, t):
        x = first_passage(env, model, PassageQuery(A, B, t))
        dist = l1_distance(A, B)
        checks["l1_bounds"].record(max(dist / L - x, x - L * dist), index, seed)
        return x

    e = _random_direction(rng, d)
    m = rng.randint(0, 2)
    n = m + rng.randint(2, 4)
    k = rng.randint(m + 1, n - 1)
    t = rng.uniform(0.0, 10.0)
    s = rng.uniform(0.0, 5.0)
    A, K, B = scale(e, m), scale(e, k), scale(e, n)

    x_mn = X(A, B, t)
    x_mk = X(A, K, t)
    x_kn = X(K, B, t + x_mk)
    checks["subadditivity"].record(x_mn - (x_mk + x_kn), index, seed)

    x_shift = X(A, B, t + s)
    checks["time_shift"].record(x_mn - (x_shift + s), index, seed)

    P = tuple(rng.randint(-3, 3) for _ in range(d))
    axis = rng.randrange(d)
    Q = list(P)
    Q[axis] += rng.choice((-1, 1))
    checks["bounded_step"].record(X(P, tuple(Q), t) - L, index, seed)

    edge = Edge(P, axis)
    t1 = rng.uniform(0.0, 10.0)
    t2 = t1 + rng.expovariate(1.0)
    checks["fifo"].record(arrival_fn(env, model, edge, t1) - arrival_fn(env, model, edge, t2),
                          index, seed)


def _run_chunk(span, spec, model, base_seed, arrival_fn):
    report = HypothesisReport()
    for i in range(*span):
        rng = random.Random(hash_words(base_seed, TAG_SAMPLE, i))
        _check_sample(i, derive_seed(base_seed, i), spec, model, report, arrival_fn, rng)
    return report


def verify_hypotheses(spec, model, samples, base_seed, arrival_fn=None, workers=None):
    """Run ``samples`` randomized instances; see the module docstring.

    ``arrival_fn(env, model, edge, t)`` replaces the edge arrival used by
    the FIFO check (fault injection in tests).
    """
    check_model(model)
    if samples < 1:
        raise ConfigurationError("samples must be >= 1")
    arrival_fn = arrival_fn or travel.arrival
    fn = partial(_run_chunk, spec=spec, model=model, base_seed=base_seed, arrival_fn=arrival_fn)
    report = HypothesisReport()
    for part in map_ordered(fn, chunks(samples, 250), workers):
        for k in CHECKS:
            report.checks[k].merge(part.checks[k])
    return report
