"""Benchmark the compiled stepping kernel against the numpy fallback.

Usage: python benchmarks/bench_kernel.py [--repeats R]
"""
import argparse
import time

import kdvb_lpg
from kdvb_lpg import _kernel
from kdvb_lpg.experiments import manufactured_errors
from kdvb_lpg.profiles import case_profiles


def bench(label, backend, repeats, **kwargs):
    # warm up caches, then time the best of `repeats`
    manufactured_errors(backend=backend, **kwargs)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = manufactured_errors(backend=backend, **kwargs)
        best = min(best, time.perf_counter() - t0)
    steps = res["n_steps"]
    print(
        f"{label:34s} {backend:9s} {best * 1e3:9.2f} ms "
        f"({best / steps * 1e6:7.2f} us/step, eps={res['eps_l1l2']:.3e})"
    )
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"available backends: {_kernel.available_backends()}")
    print(f"default backend:    {kdvb_lpg.backend_name()}\n")

    alpha1, beta1 = case_profiles(1)
    workloads = [
        ("constant coeffs, N=32, 20000 steps", dict(N=32, dt=1e-4, T=2.0, alpha=1.0, beta=0.4)),
        ("constant coeffs, N=14, 20000 steps", dict(N=14, dt=1e-4, T=2.0, alpha=1.0, beta=0.0)),
        ("varying coeffs,  N=32, 10000 steps", dict(N=32, dt=1e-4, T=1.0, alpha=alpha1, beta=beta1)),
    ]
    for label, kwargs in workloads:
        times = {}
        for backend in _kernel.available_backends():
            times[backend] = bench(label, backend, args.repeats, **kwargs)
        if len(times) == 2:
            print(f"{'':34s} speedup   {times['python'] / times['compiled']:9.1f}x\n")
        else:
            print()


if __name__ == "__main__":
    main()
