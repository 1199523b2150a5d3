import bisect

import pytest

from tdfpp.environment import EnvironmentSpec, FieldSpec, PiecewiseSpeed, sample_environment

COMBOS = [(kind, model) for kind in ("block", "poisson") for model in ("integral", "departure")]


def make_spec(kind="block", L=2.0, dist="uniform", d=2, seed=1, C=1.0, lam=1.0, p=0.5):
    f = FieldSpec(L=L, dist=dist, p=p)
    if kind == "block":
        return EnvironmentSpec("block", d, f, C=C, seed=seed)
    return EnvironmentSpec("poisson", d, f, lam=lam, seed=seed)


def make_env(*args, **kw):
    return sample_environment(make_spec(*args, **kw))


class ScriptedEnvironment:
    """Same speed profile on every edge; enough surface for ``travel``."""

    def __init__(self, breakpoints, values, L):
        # values[j] holds on [breakpoints[j], breakpoints[j+1]); last value forever
        self.bps = list(breakpoints)
        self.vals = list(values)
        self.L = L

    def speed(self, edge, t):
        return self.vals[bisect.bisect_right(self.bps, t) - 1]

    def epochs(self, edge, t0, t1):
        j = bisect.bisect_right(self.bps, t0) - 1
        bps, vals = [t0], [self.vals[j]]
        for b, v in zip(self.bps[j + 1:], self.vals[j + 1:]):
            if b >= t1:
                break
            bps.append(b)
            vals.append(v)
        bps.append(t1)
        return PiecewiseSpeed(tuple(bps), tuple(vals))


@pytest.fixture
def block_env():
    return make_env("block", L=2.0, seed=11)


@pytest.fixture
def poisson_env():
    return make_env("poisson", L=2.0, seed=12)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
