"""Hot kernels for the trilinear interaction generator.

The generator in the resonant rotating frame is

    G = chi * (a1+ a2+ a0  -  a1 a2 a0+)

acting on a dense complex amplitude grid of shape (d0, d1, d2) with mode 0
the pump.  Both terms carry real square-root factors, so G is a real
antisymmetric matrix in the Fock basis and the truncated evolution is exactly
norm-preserving.

Two implementations are provided: numba-compiled loops (default) and pure
numpy slicing.  Select with the environment variable PNES_BACKEND:

    PNES_BACKEND=numpy   force the numpy fallback
    PNES_BACKEND=numba   require numba (ImportError if unavailable)

``benchmarks/bench_kernels.py`` times the two against each other.
"""

import os

import numpy as np

_env = os.environ.get("PNES_BACKEND", "").strip().lower()
if _env not in ("", "numba", "numpy"):
    raise ValueError(f"PNES_BACKEND must be 'numba' or 'numpy', got {_env!r}")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

if _env == "numba" and not HAVE_NUMBA:
    raise ImportError("PNES_BACKEND=numba but numba is not importable")

USE_NUMBA = HAVE_NUMBA and _env != "numpy"


def apply_generator_numpy(psi, chi, out):
    """out <- G psi, vectorized slicing. psi, out: complex (d0,d1,d2) grids."""
    d0, d1, d2 = psi.shape
    s0 = np.sqrt(np.arange(1, d0))[:, None, None]
    s1 = np.sqrt(np.arange(1, d1))[None, :, None]
    s2 = np.sqrt(np.arange(1, d2))[None, None, :]
    out[...] = 0.0
    if d0 > 1 and d1 > 1 and d2 > 1:
        w = chi * s0 * s1 * s2
        # a1+ a2+ a0: target (n0,n1,n2) fed from (n0+1, n1-1, n2-1)
        out[:-1, 1:, 1:] += w * psi[1:, :-1, :-1]
        # -a1 a2 a0+: target (n0,n1,n2) fed from (n0-1, n1+1, n2+1)
        out[1:, :-1, :-1] -= w * psi[:-1, 1:, 1:]
    return out


def _apply_generator_loops(psi, chi, out):
    d0, d1, d2 = psi.shape
    sq0 = np.sqrt(np.arange(d0))
    sq1 = np.sqrt(np.arange(d1))
    sq2 = np.sqrt(np.arange(d2))
    for n0 in range(d0):
        for n1 in range(d1):
            for n2 in range(d2):
                acc = 0.0 + 0.0j
                if n0 + 1 < d0 and n1 >= 1 and n2 >= 1:
                    acc += sq0[n0 + 1] * sq1[n1] * sq2[n2] * psi[n0 + 1, n1 - 1, n2 - 1]
                if n0 >= 1 and n1 + 1 < d1 and n2 + 1 < d2:
                    acc -= sq0[n0] * sq1[n1 + 1] * sq2[n2 + 1] * psi[n0 - 1, n1 + 1, n2 + 1]
                out[n0, n1, n2] = chi * acc
    return out


if HAVE_NUMBA:
    apply_generator_numba = njit(cache=True)(_apply_generator_loops)
else:  # pragma: no cover - exercised only without numba installed
    apply_generator_numba = None

apply_generator = apply_generator_numba if USE_NUMBA else apply_generator_numpy


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def discard_flux_sq(psi, chi):
    """Squared norm of the component of G psi that falls outside the cutoff box.

    Used by the propagator to account leakage: one Euler step of length dt
    sends ~ dt^2 * discard_flux_sq(psi) of probability out of the box.
    Zero whenever psi is supported strictly inside the cutoff boundary.
    """
    d0, d1, d2 = psi.shape
    p = np.abs(psi) ** 2
    n0 = np.arange(d0)[:, None, None]
    n1 = np.arange(d1)[None, :, None]
    n2 = np.arange(d2)[None, None, :]
    # a1 a2 a0+ pushes (d0-1, n1, n2) with n1,n2 >= 1 out through the pump edge
    pump_edge = d0 * np.sum(n1[0] * n2[0] * p[d0 - 1, :, :]) if d0 >= 1 else 0.0
    # a1+ a2+ a0 pushes sources with n0 >= 1 on the n1 or n2 edge out
    w = n0 * (n1 + 1) * (n2 + 1) * p
    pair_edge = np.sum(w[1:, d1 - 1, :]) + np.sum(w[1:, : d1 - 1, d2 - 1])
    return float(chi * chi * (pump_edge + pair_edge))
