#!/usr/bin/env python3
"""Compare the pure and compiled reduction kernels on representative loads.

Usage: python3 benchmarks/bench_reduction.py [--repeat N] [--max-n N]
"""

import argparse
import random
import time

from storop import _reduce_py

try:
    from storop import _reduce_cy
except ImportError:
    _reduce_cy = None

from storop.builtins import BUILTINS
from storop.terms import Abs, App, Term, Var, church

BINDERS = ["x", "y", "z", "u", "w"]


def random_closed(rng: random.Random, depth: int, scope=()) -> Term:
    scope = list(scope)
    roll = rng.random()
    if depth == 0:
        return Var(rng.choice(scope)) if scope else Abs("x", Var("x"))
    if roll < 0.3 and scope:
        return Var(rng.choice(scope))
    if roll < 0.65 or not scope:
        b = rng.choice(BINDERS)
        return Abs(b, random_closed(rng, depth - 1, scope + [b]))
    return App(random_closed(rng, depth - 1, scope), random_closed(rng, depth - 1, scope))


def load_storage(max_n: int):
    T = BUILTINS["T"]
    cases = [App(App(T, church(n)), Var("f")) for n in range(max_n + 1)]

    def run(kernel):
        for t in cases:
            kernel.head_reduce_core(t, 1_000_000)

    return run


def load_succ_tower(height: int = 200):
    succ = BUILTINS["succ"]
    t: Term = church(0)
    for _ in range(height):
        t = App(succ, t)

    def run(kernel):
        kernel.normalize_core(t, 1_000_000)

    return run


def load_random(count: int = 2000):
    rng = random.Random(2024)
    cases = [random_closed(rng, depth=7) for _ in range(count)]

    def run(kernel):
        for t in cases:
            kernel.normalize_core(t, 400)

    return run


def time_one(run, kernel, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        run(kernel)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=120)
    args = ap.parse_args()

    loads = [
        (f"storage runs (T) n f, n<={args.max_n}", load_storage(args.max_n)),
        ("normalize succ tower h=200", load_succ_tower(200)),
        ("normalize 2000 random closed terms", load_random(2000)),
    ]

    print(f"{'workload':<40} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for name, run in loads:
        tp = time_one(run, _reduce_py, args.repeat)
        if _reduce_cy is None:
            print(f"{name:<40} {tp:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        tc = time_one(run, _reduce_cy, args.repeat)
        print(f"{name:<40} {tp:>9.3f}s {tc:>9.3f}s {tp / tc:>7.2f}x")
    if _reduce_cy is None:
        print("compiled kernel not built; run pip install -e . to build it")


if __name__ == "__main__":
    main()
