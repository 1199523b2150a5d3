"""Reachable-set shape estimation and its finite-t sandwich diagnostics."""
from collections import Counter
from dataclasses import dataclass
from functools import partial
from math import comb

import numpy as np
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

from .._prf import derive_seed
from ..environment import sample_environment
from ..errors import ConfigurationError
from ..solver import MODES, reachable_labels
from ..travel import check_model
from ._parallel import map_ordered


def l1_ball_size(d, r):
    """Number of points of Z^d with L1 norm at most ``r``."""
    if r < 0:
        return 0
    return sum(2**k * comb(d, k) * comb(r, k) for k in range(min(d, r) + 1))


def lattice_radii(points, d):
    """(largest r with the full discrete L1 ball inside, max L1 norm)."""
    if len(points) == 0:
        return -1, -1
    norms = np.abs(np.asarray(points)).sum(axis=1)
    counts = np.bincount(norms)
    r = 0
    while r < len(counts) and counts[r] == l1_ball_size(d, r) - l1_ball_size(d, r - 1):
        r += 1
    return r - 1, int(norms.max())


def hull_2d(points):
    """Convex hull vertices (counter-clockwise) and area of 2-d points."""
    pts = np.unique(np.asarray(points, dtype=np.float64), axis=0)
    if len(pts) < 3:
        return pts.tolist(), 0.0
    try:
        h = ConvexHull(pts)
    except QhullError:  # collinear
        order = np.lexsort(pts.T[::-1])
        return pts[[order[0], order[-1]]].tolist(), 0.0
    return pts[h.vertices].tolist(), float(h.volume)


def l1_discrepancy(p, q):
    """Symmetric Hausdorff distance in L1 between two finite point sets."""
    if len(p) == 0 or len(q) == 0:
        return float("inf")
    d_pq = cKDTree(q).query(p, p=1)[0].max()
    d_qp = cKDTree(p).query(q, p=1)[0].max()
    # rounded so float noise in the scaled coordinates cannot order equal values
    return round(float(max(d_pq, d_qp)), 12)


@dataclass
class ShapeEstimate:
    t: float
    mode: str
    points: np.ndarray  # S_t, integer lattice points
    inner_radius: float
    outer_radius: float
    hull: list
    hull_area_ratio: float
    sandwich_ok: bool

    @property
    def scaled(self):
        return self.points / self.t

    @property
    def point_set(self):
        return {tuple(p) for p in self.points.tolist()}

    def to_json(self):
        return {
            "t": self.t,
            "mode": self.mode,
            "n_points": int(len(self.points)),
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
            "hull": self.hull,
            "hull_area_ratio": self.hull_area_ratio,
            "sandwich_ok": self.sandwich_ok,
        }


def shape_estimate(points, t, mode, L, d):
    points = np.asarray(points, dtype=np.int64).reshape(-1, d)
    r_in, r_out = lattice_radii(points, d)
    inner, outer = r_in / t, r_out / t
    hull, ratio = [], None
    if d == 2 and len(points):
        hull, area = hull_2d(points / t)
        ratio = area / (len(points) / t**2)
    ok = inner >= 1 / L - 2 / t and outer <= L + 2 / t
    return ShapeEstimate(float(t), mode, points, inner, outer, hull, ratio, bool(ok))


@dataclass
class ShapeReplicate:
    seed: int
    estimates: list  # ShapeEstimate per (mode, t)
    nested: bool
    discrepancy: dict  # mode -> consecutive-t scaled discrepancies

    def get(self, mode, t):
        for est in self.estimates:
            if est.mode == mode and est.t == t:
                return est
        raise KeyError((mode, t))

    def to_json(self):
        return {
            "seed": self.seed,
            "nested": self.nested,
            "discrepancy": self.discrepancy,
            "estimates": [e.to_json() for e in self.estimates],
        }


def _replicate(seed, spec, model, t_list, modes):
    env = sample_environment(spec.with_seed(seed))
    d = spec.d
    ests = []
    if "fixed_zero" in modes:
        lab = reachable_labels(env, model, t_list[-1], 0.0)
        for t in t_list:
            ests.append(shape_estimate(lab.order[lab.elapsed <= t], t, "fixed_zero", env.L, d))
    if "diagonal" in modes:
        for t in t_list:
            lab = reachable_labels(env, model, t, float(t))
            ests.append(shape_estimate(lab.order[lab.elapsed <= t], t, "diagonal", env.L, d))
    nested = True
    if "fixed_zero" in modes:
        sets = [e.point_set for e in ests if e.mode == "fixed_zero"]
        nested = all(a <= b for a, b in zip(sets, sets[1:]))
    disc = {}
    for mode in modes:
        seq = [e for e in ests if e.mode == mode]
        disc[mode] = [l1_discrepancy(a.scaled, b.scaled) for a, b in zip(seq, seq[1:])]
    return ShapeReplicate(seed, ests, nested, disc)


@dataclass
class ShapeResult:
    t_list: list
    modes: tuple
    replicates: list
    frequency: dict  # (mode, t) -> {point: inclusion frequency}

    def final_discrepancy(self, mode="fixed_zero"):
        """Mean discrepancy between the scaled shapes at the two largest t."""
        vals = [r.discrepancy[mode][-1] for r in self.replicates if r.discrepancy[mode]]
        return float(np.mean(vals)) if vals else None

    def to_json(self):
        freq = {}
        for (mode, t), counts in self.frequency.items():
            freq.setdefault(mode, {})[repr(float(t))] = [list(p) + [f] for p, f in sorted(counts.items())]
        return {
            "t_list": self.t_list,
            "modes": list(self.modes),
            "final_discrepancy": {m: self.final_discrepancy(m) for m in self.modes},
            "replicates": [r.to_json() for r in self.replicates],
            "inclusion_frequency": freq,
        }

    def csv_rows(self):
        header = ["t", "mode", "inner_radius", "outer_radius", "n_points", "replicate"]
        rows = []
        for i, rep in enumerate(self.replicates):
            for e in rep.estimates:
                rows.append([e.t, e.mode, e.inner_radius, e.outer_radius, len(e.points), i])
        return header, rows


def estimate_shape(spec, model, t_list, replicates, base_seed, modes=MODES, workers=None):
    check_model(model)
    t_list = [float(t) for t in t_list]
    if not t_list or t_list[0] <= 0 or any(b <= a for a, b in zip(t_list, t_list[1:])):
        raise ConfigurationError("t_list must be a nonempty increasing list of positive times")
    modes = tuple(modes)
    if not modes or set(modes) - set(MODES):
        raise ConfigurationError(f"modes must be drawn from {MODES}")
    if replicates < 1:
        raise ConfigurationError("need at least 1 replicate")
    seeds = [derive_seed(base_seed, r) for r in range(replicates)]
    fn = partial(_replicate, spec=spec, model=model, t_list=t_list, modes=modes)
    reps = map_ordered(fn, seeds, workers)
    freq = {}
    for mode in modes:
        for t in t_list:
            c = Counter()
            for rep in reps:
                c.update(rep.get(mode, t).point_set)
            freq[(mode, t)] = {p: n / replicates for p, n in c.items()}
    return ShapeResult(t_list, modes, reps, freq)
