"""Directional speed estimation and the Fekete envelope."""
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import stats

from .._prf import derive_seed
from ..environment import sample_environment
from ..errors import ConfigurationError
from ..geometry import as_vertex, l1_norm
from ..solver import directional_passages
from ..travel import check_model
from ._parallel import map_ordered


def fekete_constant(spec):
    """Additive constant of the envelope: ``C`` for block, 0 for poisson."""
    return float(spec.C) if spec.kind == "block" else 0.0


def fekete_envelope(n_grid, means, constant):
    """Running minimum over the grid of ``(n * mean_n + constant) / n``."""
    out = []
    cur = np.inf
    for n, m in zip(n_grid, means):
        cur = min(cur, (n * m + constant) / n)
        out.append(float(cur))
    return out


@dataclass
class SpeedEstimate:
    direction: tuple
    n_grid: list
    mean: list
    std: list
    replicates: int
    fekete_constant: float
    fekete_envelope: list
    limit_estimate: float
    half_width: float
    seeds: list
    samples: list  # per replicate, X_{0,n}/n for each n

    @property
    def stderr(self):
        return [s / math.sqrt(self.replicates) for s in self.std]

    def to_json(self):
        return {
            "direction": list(self.direction),
            "n_grid": list(self.n_grid),
            "mean": self.mean,
            "std": self.std,
            "stderr": self.stderr,
            "replicates": self.replicates,
            "fekete_constant": self.fekete_constant,
            "fekete_envelope": self.fekete_envelope,
            "limit_estimate": self.limit_estimate,
            "half_width_95": self.half_width,
        }

    def csv_rows(self):
        header = ["n", "mean", "std", "stderr", "fekete_envelope", "replicates"]
        rows = [[n, m, s, se, f, self.replicates]
                for n, m, s, se, f in zip(self.n_grid, self.mean, self.std, self.stderr,
                                          self.fekete_envelope)]
        return header, rows


def _replicate(job, spec, model, e, n_grid):
    r, seed = job
    env = sample_environment(spec.with_seed(seed))
    try:
        xs = directional_passages(env, model, e, n_grid)
    except Exception as exc:
        raise RuntimeError(f"speed replicate {r} failed (seed {seed}): {exc}") from exc
    return [x / n for x, n in zip(xs, n_grid)]


def estimate_speed(spec, model, e, n_grid, replicates, base_seed, workers=None, constant=None):
    check_model(model)
    e = as_vertex(e)
    if len(e) != spec.d or l1_norm(e) == 0:
        raise ConfigurationError(f"direction {e} must be a nonzero vector of dimension {spec.d}")
    n_grid = [int(n) for n in n_grid]
    if not n_grid or n_grid[0] < 1 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ConfigurationError("n_grid must be a nonempty increasing list of positive integers")
    if replicates < 2:
        raise ConfigurationError("need at least 2 replicates")
    seeds = [derive_seed(base_seed, r) for r in range(replicates)]
    fn = partial(_replicate, spec=spec, model=model, e=e, n_grid=n_grid)
    samples = map_ordered(fn, list(enumerate(seeds)), workers)
    arr = np.array(samples, dtype=np.float64)
    mean = arr.mean(axis=0)
    std = arr.std(axis=0, ddof=1)
    const = fekete_constant(spec) if constant is None else float(constant)
    half = float(stats.t.ppf(0.975, replicates - 1) * std[-1] / np.sqrt(replicates))
    return SpeedEstimate(
        direction=e, n_grid=n_grid, mean=mean.tolist(), std=std.tolist(),
        replicates=replicates, fekete_constant=const,
        fekete_envelope=fekete_envelope(n_grid, mean.tolist(), const),
        limit_estimate=float(mean[-1]), half_width=half, seeds=seeds, samples=samples,
    )
