"""Compare the compiled and pure-Python sweep kernels.

    python benchmarks/bench_kernels.py [--n 32 64] [--repeat 3]

Times one directional sweep (origin to n*e1, block environment, L=2) per
backend, checks the two backends agree exactly, and prints the speedup.
"""
import argparse
import time

import numpy as np

from tdfpp import kernels
from tdfpp.environment import EnvironmentSpec, FieldSpec, sample_environment
from tdfpp.solver import earliest_arrival, region_radius


def bench(backend, env, model, n, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        lab = earliest_arrival(env, model, (0, 0), 0.0, region_radius(env.L, (0, 0), (n, 0)),
                               targets=[(n, 0)], backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, lab


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--model", default="integral", choices=["integral", "departure"])
    args = ap.parse_args()

    env = sample_environment(EnvironmentSpec("block", 2, FieldSpec(2.0), C=1.0, seed=1))
    backends = kernels.available()
    print(f"backends: {backends}")
    print(f"{'n':>5} {'settled':>9} " + " ".join(f"{b + ' [s]':>14}" for b in backends) + "  speedup")
    for n in args.n:
        times, labs = {}, {}
        for b in backends:
            times[b], labs[b] = bench(b, env, args.model, n, args.repeat)
        if len(backends) == 2:
            assert np.array_equal(labs["python"].times, labs["compiled"].times)
            speedup = f"{times['python'] / times['compiled']:8.1f}x"
        else:
            speedup = "     n/a"
        settled = len(labs[backends[0]])
        print(f"{n:>5} {settled:>9} " + " ".join(f"{times[b]:>14.4f}" for b in backends) + f" {speedup}")


if __name__ == "__main__":
    main()
