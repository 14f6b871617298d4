"""Compare the numba and numpy kernel backends on the hot paths.

Times the raw kernels (nearest-site search, gap variant, winding number)
on synthetic workloads, then two end-to-end operations that sit on top of
them.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --queries 200000 --repeats 5
"""

import argparse
import time

import numpy as np

from cutloc import _kernels, build_distance_field, cut_table, from_spec
from cutloc.distfield import GridSpec

ELLIPSE = {"type": "ellipse", "a": 2.0, "b": 1.0}


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_workloads(n_queries, n_sites, rng):
    curve = from_spec(ELLIPSE)
    geom = curve.resample_struct(n_sites)
    sites = geom.position
    site_s = geom.s
    queries = np.column_stack([rng.uniform(-2.2, 2.2, n_queries),
                               rng.uniform(-1.2, 1.2, n_queries)])
    polygon = curve.winding_polygon(2048)
    length = curve.length
    return [
        ("nearest_site",
         lambda: _kernels.nearest_site(queries, sites)),
        ("nearest_site_gap",
         lambda: _kernels.nearest_site_gap(queries, sites, site_s, length,
                                           0.1 * length)),
        ("winding_number",
         lambda: _kernels.winding_number(queries, polygon)),
    ]


def end_to_end_workloads(h):
    def field():
        curve = from_spec(ELLIPSE)
        grid = GridSpec.with_h(curve, h)
        build_distance_field(curve, grid=grid)

    def table():
        curve = from_spec(ELLIPSE)
        cut_table(curve, n=2048)

    return [(f"build_distance_field h={h:g}", field),
            ("cut_table n=2048", table)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--queries", type=int, default=50_000)
    ap.add_argument("--sites", type=int, default=4096)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--h", type=float, default=1 / 64)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    rows = kernel_workloads(args.queries, args.sites, rng)
    rows += end_to_end_workloads(args.h)

    backends = ["numpy"]
    if _kernels.HAS_NUMBA:
        backends.append("numba")
    else:
        print("numba not importable; timing the numpy backend only")

    original = _kernels.backend()
    results = {}
    try:
        for name in backends:
            _kernels.set_backend(name)
            for label, fn in rows:
                fn()  # warm caches / trigger jit before timing
                results[(label, name)] = best_of(fn, args.repeats)
    finally:
        _kernels.set_backend(original)

    width = max(len(label) for label, _ in rows)
    header = f"{'workload':<{width}}  {'numpy':>10}"
    if "numba" in backends:
        header += f"  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, _ in rows:
        t_np = results[(label, "numpy")]
        line = f"{label:<{width}}  {t_np * 1e3:>8.1f}ms"
        if "numba" in backends:
            t_nb = results[(label, "numba")]
            line += f"  {t_nb * 1e3:>8.1f}ms  {t_np / t_nb:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
