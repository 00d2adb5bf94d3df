#!/usr/bin/env python3
"""Numba kernels vs the numpy fallback on the commuting-pair counts.

Usage:
    python benchmarks/bench_kernels.py [--group C2wrZ] [--radius 12] [--repeat 3]

Times naive (all pairs) and structured (solved non-base pairs) counting on
both backends over the same ball and checks the four counts agree. numba
timings are warm: one call on a small ball compiles the kernels first.
"""

from __future__ import annotations

import argparse
import sys
import time

from wreathdc.cli import default_radius, parse_group_spec
from wreathdc.dc import commuting_pairs_naive, commuting_pairs_structured
from wreathdc.geometry import build_ball, standard_genset
from wreathdc.kernels import available_backends, set_threads


def best_of(fn, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--group", default="C2wrZ")
    p.add_argument("--radius", type=int)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--workers", type=int)
    p.add_argument("--skip-numpy-naive", action="store_true", help="the slowest cell; ~10x numba naive")
    args = p.parse_args(argv)

    spec = parse_group_spec(args.group)
    n = args.radius if args.radius is not None else min(default_radius(spec), 12)
    ball = build_ball(spec, standard_genset(spec), n)
    print(f"{args.group} radius {n}: |B| = {len(ball)}, lamp dtype {ball.arrays.lamps.dtype}")

    backends = available_backends()
    if args.workers:
        for b in backends:
            set_threads(args.workers, b)
    small = ball.restrict(min(n, 3))
    for b in backends:  # compile
        commuting_pairs_naive(small, backend=b)
        commuting_pairs_structured(small, backend=b)

    results = {}
    print(f"{'backend':8} {'method':11} {'seconds':>9} {'pairs':>12}")
    for b in backends:
        cells = [("structured", commuting_pairs_structured)]
        if not (b == "numpy" and args.skip_numpy_naive):
            cells.insert(0, ("naive", commuting_pairs_naive))
        for method, fn in cells:
            t, pairs = best_of(lambda: fn(ball, backend=b), args.repeat)
            results[b, method] = (t, pairs)
            print(f"{b:8} {method:11} {t:9.4f} {pairs:12d}")

    counts = {pairs for _, pairs in results.values()}
    if len(counts) != 1:
        print(f"MISMATCH: {sorted(counts)}", file=sys.stderr)
        return 1
    for (b1, m1), (b2, m2) in [(("numba", "naive"), ("numba", "structured")),
                               (("numpy", "structured"), ("numba", "structured")),
                               (("numpy", "naive"), ("numba", "naive"))]:
        if (b1, m1) in results and (b2, m2) in results:
            print(f"speedup {b2}/{m2} over {b1}/{m1}: {results[b1, m1][0] / results[b2, m2][0]:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
