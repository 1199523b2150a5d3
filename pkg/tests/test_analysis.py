import math

import numpy as np
import pytest

from tdfpp import travel
from tdfpp.analysis import (
    estimate_shape,
    estimate_speed,
    fekete_envelope,
    mixing_diagnostic,
    verify_hypotheses,
)
from tdfpp.analysis import speed as speed_mod
from tdfpp.analysis.shape import l1_ball_size, l1_discrepancy, lattice_radii
from tdfpp.geometry import l1_ball

from conftest import make_spec


def test_fekete_envelope_running_min():
    env = fekete_envelope([1, 2, 4], [3.0, 1.0, 1.2], 1.0)
    assert env == pytest.approx([4.0, 1.5, 1.45])


@pytest.mark.parametrize("kind", ["block", "poisson"])
def test_speed_degenerate_field(kind):
    est = estimate_speed(make_spec(kind, L=1.0), "integral", (1, -1), [1, 3, 6], 4, 0, workers=1)
    assert est.mean == pytest.approx([2.0, 2.0, 2.0])
    assert est.std == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("model", ["integral", "departure"])
def test_speed_means_within_bounds_and_envelope_monotone(model):
    est = estimate_speed(make_spec("poisson", L=3.0), model, (0, 2), [2, 4, 8], 12, 5, workers=1)
    for m in est.mean:
        assert 2 / 3 <= m <= 6
    assert all(b <= a for a, b in zip(est.fekete_envelope, est.fekete_envelope[1:]))
    assert est.fekete_constant == 0.0


def test_block_envelope_uses_C():
    est = estimate_speed(make_spec("block", L=2.0, C=2.5), "integral", (1, 0), [4, 8], 3, 1, workers=1)
    assert est.fekete_constant == 2.5
    assert est.fekete_envelope[0] == pytest.approx(est.mean[0] + 2.5 / 4)


def test_speed_deterministic_across_workers():
    spec = make_spec("block", L=2.0)
    a = estimate_speed(spec, "departure", (1, 0), [4, 8], 6, 9, workers=1)
    b = estimate_speed(spec, "departure", (1, 0), [4, 8], 6, 9, workers=3)
    assert a.to_json() == b.to_json()


def test_speed_direction_symmetry():
    spec = make_spec("block", L=2.0)
    a = estimate_speed(spec, "integral", (1, 0), [8, 16], 150, 100, workers=1)
    b = estimate_speed(spec, "integral", (-1, 0), [8, 16], 150, 200, workers=1)
    for ma, mb, sa, sb in zip(a.mean, b.mean, a.stderr, b.stderr):
        assert abs(ma - mb) < 4 * math.hypot(sa, sb)


def test_speed_replicate_failure_reports_seed(monkeypatch):
    def boom(*a, **k):
        raise ValueError("kaput")
    monkeypatch.setattr(speed_mod, "directional_passages", boom)
    with pytest.raises(RuntimeError, match="seed"):
        estimate_speed(make_spec(), "integral", (1, 0), [2], 2, 0, workers=1)


@pytest.mark.parametrize("d, r", [(1, 4), (2, 0), (2, 3), (3, 2), (4, 3)])
def test_l1_ball_size_matches_enumeration(d, r):
    assert l1_ball_size(d, r) == len(l1_ball((0,) * d, r))


def test_lattice_radii():
    ball = np.array(sorted(l1_ball((0, 0), 3)))
    assert lattice_radii(ball, 2) == (3, 3)
    holed = np.array([p for p in ball.tolist() if p != [0, 2]] + [[5, 0]])
    assert lattice_radii(holed, 2) == (1, 5)


def test_l1_discrepancy():
    p = np.array([[0.0, 0.0], [1.0, 0.0]])
    q = np.array([[0.0, 0.0], [1.0, 0.5]])
    assert l1_discrepancy(p, q) == 0.5
    assert l1_discrepancy(p, p) == 0.0


def test_shape_unit_field():
    res = estimate_shape(make_spec("block", L=1.0), "integral", [2.0, 5.0], 2, 0, workers=1)
    for rep in res.replicates:
        for est in rep.estimates:
            assert est.inner_radius == est.outer_radius == 1.0
            assert est.sandwich_ok
        assert rep.nested
        est = rep.get("fixed_zero", 5.0)
        assert est.point_set == l1_ball((0, 0), 5)
        assert sorted(map(tuple, est.hull)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert all(f == 1.0 for f in res.frequency[("fixed_zero", 5.0)].values())


@pytest.mark.parametrize("kind", ["block", "poisson"])
def test_shape_radii_and_nesting(kind):
    res = estimate_shape(make_spec(kind, L=2.0), "departure", [4.0, 8.0, 16.0], 3, 4, workers=1)
    for rep in res.replicates:
        assert rep.nested
        for est in rep.estimates:
            assert 0.5 - 2 / est.t <= est.inner_radius <= est.outer_radius <= 2 + 2 / est.t
        assert len(rep.discrepancy["diagonal"]) == 2
    assert res.final_discrepancy() is not None


def test_verify_degenerate_has_zero_excess():
    rep = verify_hypotheses(make_spec("poisson", L=1.0), "integral", 200, 0, workers=1)
    assert rep.passed
    for c in rep.checks.values():
        assert c.samples >= 200
        assert c.max_violation <= 1e-12


@pytest.mark.parametrize("model", ["integral", "departure"])
def test_verify_block_passes(model):
    rep = verify_hypotheses(make_spec("block", L=2.0), model, 1000, 3, workers=1)
    assert rep.passed, rep.to_json()


def shifted_arrival(env, model, edge, t):
    return travel.arrival(env, model, edge, t) - 2.0 * t


def test_verify_catches_fault_injection():
    rep = verify_hypotheses(make_spec("block", L=2.0), "integral", 200, 3, arrival_fn=shifted_arrival,
                            workers=1)
    assert not rep.passed
    assert rep.checks["fifo"].violations > 0
    assert rep.checks["fifo"].first_failing_seed is not None
    assert rep.checks["subadditivity"].violations == 0


def test_mixing_small_run():
    m = mixing_diagnostic(make_spec("block", L=2.0), [0.0, 0.5, 1.0, 2.0], 20_000, 1, workers=1)
    assert m.theoretical == pytest.approx([0.1875, 0.09375, 0.0, 0.0])
    assert all(abs(z) < 4 for z in m.z_scores())
    assert len(m.lags) == len(m.empirical) == len(m.stderr)
