"""Time the compiled and pure-numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from r2c import kernels
from r2c.conquer import r2c_cluster
from r2c.mixture1d import FitConfig
from r2c.synthgen import ScenarioSpec, generate_scenario


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def em_case(n, k):
    rng = np.random.default_rng(0)
    x = rng.normal(size=n) + rng.integers(0, k, n) * 3.0

    def run():
        w = np.full(k, 1 / k)
        mu = np.quantile(x, (np.arange(k) + 0.5) / k)
        var = np.full(k, x.var())
        kernels.em_1d(x, w, mu, var, 1e-6, 0.0, 200, 1e-10 * n)

    return f"em_1d n={n} k={k} (200 iterations)", run


def nearest_case(n, d, s):
    rng = np.random.default_rng(1)
    data = rng.normal(size=(n, d))
    centers = rng.normal(size=(s, d))
    return f"nearest_center n={n} d={d} survivors={s}", lambda: kernels.nearest_center(data, centers)


def cluster_case(d):
    x = generate_scenario(ScenarioSpec("s3", d=d, seed=0)).points
    cfg = FitConfig(restarts=2, k_max=4)
    return f"r2c_cluster S3 d={d} (restarts 2, k_max 4)", lambda: r2c_cluster(x, cfg)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    cases = [em_case(500, 2), em_case(2000, 5), nearest_case(20_000, 10, 8), nearest_case(5000, 20, 40),
             cluster_case(10)]
    if "cython" not in kernels.BACKENDS:
        print("compiled backend not built; only timing the numpy fallback")
    print(f"{'case':<48}{'cython [s]':>12}{'python [s]':>12}{'speedup':>9}")
    for label, fn in cases:
        timing = {}
        for name in kernels.BACKENDS:
            kernels.set_backend(name)
            repeat = 1 if name == "python" and label.startswith("r2c") else args.repeat
            timing[name] = best_of(fn, repeat)
        c, p = timing.get("cython", float("nan")), timing["python"]
        print(f"{label:<48}{c:>12.4f}{p:>12.4f}{p / c:>8.1f}x")


if __name__ == "__main__":
    main()
