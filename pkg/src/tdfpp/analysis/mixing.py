"""Empirical temporal covariance of a single edge speed."""
from dataclasses import dataclass
from functools import partial

import numpy as np

from .._prf import derive_seed
from ..environment import regime_covariance_theoretical, sample_environment
from ..errors import ConfigurationError
from ..geometry import Edge
from ._parallel import chunks, map_ordered


@dataclass
class MixingSeries:
    lags: list
    empirical: list
    stderr: list
    theoretical: list
    replicates: int

    def z_scores(self):
        return [(e - t) / s if s > 0 else (0.0 if e == t else np.inf)
                for e, t, s in zip(self.empirical, self.theoretical, self.stderr)]

    def to_json(self):
        return {
            "lags": self.lags,
            "empirical_cov": self.empirical,
            "stderr": self.stderr,
            "theoretical_cov": self.theoretical,
            "replicates": self.replicates,
        }

    def csv_rows(self):
        header = ["lag", "empirical_cov", "stderr", "theoretical_cov"]
        return header, [list(r) for r in zip(self.lags, self.empirical, self.stderr, self.theoretical)]


def _speeds(span, spec, lags, base_seed):
    lo, hi = span
    edge = Edge((0,) * spec.d, 0)
    out = np.empty((hi - lo, len(lags) + 1))
    for i, r in enumerate(range(lo, hi)):
        env = sample_environment(spec.with_seed(derive_seed(base_seed, r)))
        out[i, 0] = env.speed(edge, 0.0)
        for j, s in enumerate(lags):
            out[i, j + 1] = env.speed(edge, s)
    return out


def mixing_diagnostic(spec, lags, replicates, base_seed, workers=None):
    lags = [float(s) for s in lags]
    if any(s < 0 for s in lags) or any(b <= a for a, b in zip(lags, lags[1:])):
        raise ConfigurationError("lags must be nonnegative and increasing")
    if replicates < 2:
        raise ConfigurationError("need at least 2 replicates")
    fn = partial(_speeds, spec=spec, lags=lags, base_seed=base_seed)
    data = np.vstack(map_ordered(fn, chunks(replicates, 5000), workers))
    x0 = data[:, 0] - data[:, 0].mean()
    emp, se = [], []
    for j in range(len(lags)):
        prod = x0 * (data[:, j + 1] - data[:, j + 1].mean())
        emp.append(float(prod.mean()))
        se.append(float(prod.std(ddof=1) / np.sqrt(replicates)))
    theo = [regime_covariance_theoretical(spec, s) for s in lags]
    return MixingSeries(lags, emp, se, theo, replicates)
