"""Compiled vs pure-Python kernels on the workloads that dominate real runs.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload runs once per available backend with the realization cache
cleared, and the results are compared for equality before timings are shown.
"""

import argparse
import time

from partcat import closure as cl
from partcat import experiments as ex
from partcat import kernels
from partcat import partition as pc
from partcat.echelon import span_dimension
from partcat.operators import compose_ops, realize


def realize_all():
    return sum(realize(p, 3).nnz for p in pc.enumerate_nc_partitions(0, 8))


def compose_many():
    ps = pc.enumerate_nc_partitions(3, 3)
    return sum(compose_ops(realize(q, 3), realize(p, 3)).nnz for p in ps[:40] for q in ps[:40])


def rank_brauer():
    return span_dimension(realize(p, 2) for p in pc.enumerate_pairings(0, 8))


def closure_theorem_t():
    return cl.verify_theorem_T(2, "o-plus", 8).to_dict()["dims"]


def homomorphism():
    return ex.homomorphism_check(2, 4).status


WORKLOADS = [realize_all, compose_many, rank_brauer, closure_theorem_t, homomorphism]


def timed(fn, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        realize.cache_clear()
        t = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t)
    return best, value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = kernels.AVAILABLE
    print(f"{'workload':<20}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for fn in WORKLOADS:
        times, values = [], []
        for name in names:
            with kernels.using(name):
                t, v = timed(fn, args.repeat)
            times.append(t)
            values.append(v)
        if any(v != values[0] for v in values):
            raise SystemExit(f"{fn.__name__}: backends disagree")
        row = f"{fn.__name__:<20}" + "".join(f"{t * 1000:>10.1f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
