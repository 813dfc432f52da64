"""Benchmark the generator-application kernel: numba JIT vs pure numpy.

Run with:

    python3 benchmarks/bench_kernels.py

The JIT path pays a one-time compile cost (excluded via a warmup call);
after that it should win on small grids where slicing overhead dominates
and stay competitive on large ones.
"""

import time

import numpy as np

from pnes.kernels import HAVE_NUMBA, apply_generator_numpy

if HAVE_NUMBA:
    from pnes.kernels import apply_generator_numba


def make_state(shape, seed=7):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    psi /= np.linalg.norm(psi)
    return psi


def bench(fn, psi, chi, repeats):
    out = np.empty_like(psi)
    fn(psi, chi, out)  # warmup (includes JIT compile for the numba path)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeats):
            fn(psi, chi, out)
        best = min(best, (time.perf_counter() - t0) / repeats)
    return best


def main():
    chi = 0.1
    cases = [
        ((8, 8, 8), 2000),
        ((16, 16, 16), 1000),
        ((32, 24, 24), 400),
        ((64, 32, 32), 100),
        ((64, 64, 64), 30),
    ]
    print(f"{'shape':>14} {'numpy (us)':>12} {'numba (us)':>12} {'speedup':>9}")
    for shape, repeats in cases:
        psi = make_state(shape)
        t_np = bench(apply_generator_numpy, psi, chi, repeats)
        if HAVE_NUMBA:
            t_nb = bench(apply_generator_numba, psi, chi, repeats)
            out_a = np.empty_like(psi)
            out_b = np.empty_like(psi)
            apply_generator_numpy(psi, chi, out_a)
            apply_generator_numba(psi, chi, out_b)
            assert np.allclose(out_a, out_b, atol=1e-14), "backends disagree"
            print(
                f"{str(shape):>14} {t_np * 1e6:>12.1f} {t_nb * 1e6:>12.1f}"
                f" {t_np / t_nb:>8.2f}x"
            )
        else:
            print(f"{str(shape):>14} {t_np * 1e6:>12.1f} {'n/a':>12} {'n/a':>9}")
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path was timed")


if __name__ == "__main__":
    main()
