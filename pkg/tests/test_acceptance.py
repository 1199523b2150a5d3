"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that ``conftest.pytest_terminal_summary``
prints at the end of the session.
"""
import math
import random
import time

import pytest

from tdfpp import travel
from tdfpp.analysis import estimate_shape, estimate_speed, mixing_diagnostic, verify_hypotheses
from tdfpp.cli import payload_bytes
from tdfpp.geometry import l1_ball, l1_distance
from tdfpp.solver import PassageQuery, brute_force_first_passage, first_passage, reachable_set, region_radius
from tdfpp.environment import sample_environment

from conftest import COMBOS, make_spec

TOL = 1e-9
RESULTS = {}

pytestmark = pytest.mark.acceptance


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    assert ok, f"criterion {n}: {detail}"


def _query(rng, min_dist, max_dist, d=2):
    A = tuple(rng.randint(-5, 5) for _ in range(d))
    dist = rng.randint(min_dist, max_dist)
    B = list(A)
    # straight-line walk so |A - B|_1 == dist exactly
    for _ in range(dist):
        i = rng.randrange(d)
        B[i] += 1 if B[i] >= A[i] else -1
    return PassageQuery(A, tuple(B), rng.uniform(0.0, 10.0))


def test_c1_oracle_equivalence():
    start = time.perf_counter()
    worst, n = 0.0, 0
    for kind, model in COMBOS:
        rng = random.Random(f"c1-{kind}-{model}")
        for _ in range(500):
            env = sample_environment(make_spec(kind, L=2.0, seed=rng.getrandbits(64)))
            q = _query(rng, 1, 3)
            fast = first_passage(env, model, q)
            slow = brute_force_first_passage(env, model, q, region_radius(env.L, q.A, q.B))
            worst = max(worst, abs(fast - slow))
            n += 1
    elapsed = time.perf_counter() - start
    record(1, worst <= TOL and elapsed <= 120,
           f"{n} instances, max |diff| = {worst:.3e} (tol {TOL}), {elapsed:.1f}s (limit 120s)")


def test_c2_degenerate_identity():
    bad = []
    for kind, model in COMBOS:
        rng = random.Random(f"c2-{kind}-{model}")
        for _ in range(100):
            env = sample_environment(make_spec(kind, L=1.0, seed=rng.getrandbits(64)))
            q = _query(rng, 0, 12)
            if first_passage(env, model, q) != l1_distance(q.A, q.B):
                bad.append(("X", kind, model, q))
        env = sample_environment(make_spec(kind, L=1.0, seed=rng.getrandbits(64)))
        for t in (1, 5, 10):
            if reachable_set(env, model, t) != l1_ball((0, 0), t):
                bad.append(("S", kind, model, t))
    record(2, not bad, f"400 queries + 12 reachable sets, mismatches: {bad[:3]}")


def test_c3_l1_bounds():
    worst, n = -math.inf, 0
    for L in (2.0, 4.0):
        for kind, model in COMBOS:
            rng = random.Random(f"c3-{L}-{kind}-{model}")
            for _ in range(10_000):
                env = sample_environment(make_spec(kind, L=L, seed=rng.getrandbits(64),
                                                   dist=rng.choice(["uniform", "two_point"])))
                q = _query(rng, 1, 6)
                x = first_passage(env, model, q)
                dist = l1_distance(q.A, q.B)
                worst = max(worst, dist / L - x, x - L * dist)
                n += 1
    record(3, worst <= TOL, f"{n} queries, max excess over L1 bounds = {worst:.3e} (tol {TOL})")


def _shifted_arrival(env, model, edge, t):
    return travel.arrival(env, model, edge, t) - 2.0 * t


def test_c4_hypotheses_and_fault_injection():
    lines, ok = [], True
    for kind, model in COMBOS:
        rep = verify_hypotheses(make_spec(kind, L=2.0), model, 10_000, 4, workers=1)
        for name in ("subadditivity", "time_shift", "fifo"):
            c = rep.checks[name]
            ok &= c.samples >= 10_000 and c.violations == 0
            lines.append(f"{kind}/{model}/{name}: {c.violations}/{c.samples}")
    faulty = verify_hypotheses(make_spec("block", L=2.0), "integral", 500, 4,
                               arrival_fn=_shifted_arrival, workers=1)
    caught = faulty.checks["fifo"].violations > 0
    record(4, ok and caught, f"{'; '.join(lines)}; fault injection caught: {caught}")


def test_c5_mixing():
    start = time.perf_counter()
    out, ok = [], True
    cases = [
        (make_spec("block", L=2.0, C=1.0), [0, 0.25, 0.5, 0.75, 1.0, 1.5]),
        (make_spec("poisson", L=2.0, lam=1.0), [0, 0.5, 1, 2, 4]),
    ]
    for spec, lags in cases:
        m = mixing_diagnostic(spec, lags, 100_000, 5, workers=1)
        assert spec.field.variance == 0.1875
        z = m.z_scores()
        ok &= all(abs(v) <= 4 for v in z)
        out.append(f"{spec.kind} |z| max {max(map(abs, z)):.2f}")
    elapsed = time.perf_counter() - start
    record(5, ok and elapsed <= 180, f"{', '.join(out)} (limit 4 SE), {elapsed:.1f}s (limit 180s)")


SPEED_ARGS = dict(e=(1, 0), n_grid=[16, 32, 64, 128], replicates=200, base_seed=2024)
SHAPE_ARGS = dict(t_list=[10.0, 20.0, 40.0], replicates=20, base_seed=99, modes=("fixed_zero",))
_cache = {}


def _speed(model, workers):
    key = ("speed", model, workers)
    if key not in _cache:
        _cache[key] = estimate_speed(make_spec("block", L=2.0, C=1.0), model, workers=workers, **SPEED_ARGS)
    return _cache[key]


def _shape(model, workers):
    key = ("shape", model, workers)
    if key not in _cache:
        _cache[key] = estimate_shape(make_spec("block", L=2.0, C=1.0), model, workers=workers, **SHAPE_ARGS)
    return _cache[key]


def test_c6_speed_convergence():
    start = time.perf_counter()
    out, ok = [], True
    for model in ("integral", "departure"):
        est = _speed(model, 1)
        s = est.std
        decreasing = all(b < a for a, b in zip(s, s[1:]))
        ratio = s[-1] / s[0]
        env_ok = all(b <= a for a, b in zip(est.fekete_envelope, est.fekete_envelope[1:]))
        bounds = 0.5 <= est.mean[-1] <= 2.0
        below_env = est.limit_estimate <= est.fekete_envelope[-1] + est.half_width
        ok &= decreasing and ratio < 0.5 and env_ok and bounds and below_env
        out.append(f"{model}: std {['%.4f' % v for v in s]}, std128/std16={ratio:.3f}, "
                   f"mean128={est.mean[-1]:.4f}, envelope non-increasing={env_ok}")
    elapsed = time.perf_counter() - start
    record(6, ok and elapsed <= 600, f"{'; '.join(out)}; {elapsed:.1f}s (limit 600s)")


def test_c7_shape_sandwich():
    out, ok = [], True
    for model in ("integral", "departure"):
        res = _shape(model, 1)
        radii_ok = all(e.inner_radius >= 0.5 - 2 / e.t and e.outer_radius <= 2 + 2 / e.t
                       for r in res.replicates for e in r.estimates)
        nested = all(r.nested for r in res.replicates)
        shrinking = sum(r.discrepancy["fixed_zero"][1] < r.discrepancy["fixed_zero"][0] for r in res.replicates)
        ok &= radii_ok and nested and shrinking >= 15
        out.append(f"{model}: radii ok={radii_ok}, nested={nested}, discrepancy shrinks in {shrinking}/20")
    record(7, ok, "; ".join(out))


def test_c8_determinism():
    same = []
    for model in ("integral",):
        ref_speed = payload_bytes(_speed(model, 1).to_json())
        ref_shape = payload_bytes(_shape(model, 1).to_json())
        for workers in (1, 4):
            fresh_speed = estimate_speed(make_spec("block", L=2.0, C=1.0), model, workers=workers, **SPEED_ARGS)
            fresh_shape = estimate_shape(make_spec("block", L=2.0, C=1.0), model, workers=workers, **SHAPE_ARGS)
            same.append(payload_bytes(fresh_speed.to_json()) == ref_speed)
            same.append(payload_bytes(fresh_shape.to_json()) == ref_shape)
    record(8, all(same), f"speed/shape payloads identical for workers 1 and 4: {same}")
