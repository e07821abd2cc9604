#!/usr/bin/env python3
"""Benchmark the compiled grid kernel against the NumPy fallback.

Times the clipped-max centroid across grid sizes plus a full canonical
takeover simulation per backend.  Run from the repo root:

    python benchmarks/bench_backends.py
"""
import time

import numpy as np

from autometric._kernels import load_backend


def time_call(fn, *args, repeat=7, inner=1):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_centroid(backends):
    rng = np.random.default_rng(1)
    print("clipped-max centroid, 3 rules")
    print(f"{'grid points':>12} " + " ".join(f"{name:>12}" for name in backends))
    for n in (1_001, 10_001, 100_001, 1_000_001):
        xs = np.linspace(1.0, 10.0, n)
        curves = np.ascontiguousarray(rng.uniform(0, 1, size=(3, n)))
        strengths = rng.uniform(0.2, 1.0, size=3)
        inner = max(1, 200_000 // n)
        row = []
        for module in backends.values():
            seconds = time_call(module.clipped_max_centroid, curves, strengths, xs, inner=inner)
            row.append(f"{seconds * 1e6:>10.1f}us")
        print(f"{n:>12} " + " ".join(f"{cell:>12}" for cell in row))


def bench_simulation(backend_names):
    import os
    import subprocess
    import sys

    print("\nfull canonical takeover run (308 adaptive samples, 3 stages)")
    for name in backend_names:
        code = (
            "import time, autometric as am;"
            "arch = am.build_takeover_architecture();"
            "sched = am.canonical_takeover_schedule();"
            "t0 = time.perf_counter();"
            "am.run_simulation(arch, sched);"
            "print(f'{time.perf_counter()-t0:.3f}s')"
        )
        env = dict(os.environ, AUTOMETRIC_BACKEND=name)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        result = out.stdout.strip() if out.returncode == 0 else f"failed: {out.stderr.strip()}"
        print(f"  {name:>8}: {result}")


def main():
    backends = {}
    for name in ("python", "cython"):
        try:
            backends[name] = load_backend(name)
        except ImportError:
            print(f"backend {name!r} unavailable (extension not built), skipping")
    bench_centroid(backends)
    bench_simulation(backends)


if __name__ == "__main__":
    main()
