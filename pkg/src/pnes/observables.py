"""Expectation values and dispersions for the pair operators.

All quantities are assembled matrix-free from ladder actions on the dense
amplitude grid:

    A   = a1 a2            pair amplitude (expectation is the model's Lambda)
    N   = n1 + n2          total pair photon number
    C+  = A + A+           pair quadratures; D_C = <C^2> - <C>^2
    C-  = (A - A+) / i
    Q   = a0 + a0+         pump quadrature
    K   = n0 + (n1+n2)/2   conserved total excitation

A A+ and A+ A are diagonal in the Fock basis ((n1+1)(n2+1) and n1 n2), so
the dispersions never need a materialized operator and stay exact at the
cutoff edge.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass
class ObservableSet:
    """One snapshot of every observable the analysis uses."""

    pair_amp: complex
    pair_amp_conj: complex
    total_n: float
    diff_n: float
    pump_amp: complex
    pump_quad: float
    c_plus: float
    disp_plus: float
    disp_minus: float
    conserved_k: float


def _occupations(s):
    d0, d1, d2 = s.config.shape
    return (
        np.arange(d0)[:, None, None],
        np.arange(d1)[None, :, None],
        np.arange(d2)[None, None, :],
    )


def _pair_lower(g):
    """A g = a1 a2 g on the (d0,d1,d2) grid."""
    d0, d1, d2 = g.shape
    out = np.zeros_like(g)
    w = np.sqrt(np.outer(np.arange(1, d1), np.arange(1, d2)))
    out[:, : d1 - 1, : d2 - 1] = w[None, :, :] * g[:, 1:, 1:]
    return out


def expect_pair_amplitude(s):
    """<A> = <a1 a2>, the state's pair amplitude (the model's Lambda)."""
    g = s.grid()
    return complex(np.vdot(g, _pair_lower(g)))


def expect_pump_amplitude(s):
    """<a0>."""
    g = s.grid()
    d0 = s.config.d0
    w = np.sqrt(np.arange(1, d0))[:, None, None]
    return complex(np.vdot(g[: d0 - 1], w * g[1:]))


def expect_total_number(s):
    n0, n1, n2 = _occupations(s)
    return float(np.sum((n1 + n2) * s.probabilities()))


def expect_number_difference(s):
    n0, n1, n2 = _occupations(s)
    return float(np.sum((n1 - n2) * s.probabilities()))


def pump_quadrature(s):
    """<Q> = <a0 + a0+> = 2 Re<a0>."""
    return 2.0 * expect_pump_amplitude(s).real


def conserved_excitation(s):
    """<K> = <n0 + (n1+n2)/2>, conserved by the trilinear interaction."""
    n0, n1, n2 = _occupations(s)
    return float(np.sum((n0 + 0.5 * (n1 + n2)) * s.probabilities()))


def _pair_moments(s):
    """(<A>, <A^2>, <A+A>, <AA+>) assembled matrix-free.

    A A+ and A+ A are diagonal with weights (n1+1)(n2+1) and n1 n2; the
    A A+ weight is zeroed on the raise boundary so the result agrees with
    the truncated operators (and with the dense oracle) everywhere.
    """
    g = s.grid()
    p = np.abs(g) ** 2
    n0, n1, n2 = _occupations(s)
    u = _pair_lower(g)
    a = complex(np.vdot(g, u))
    a2 = complex(np.vdot(g, _pair_lower(u)))
    ada = float(np.sum(n1 * n2 * p))
    w_aad = ((n1 + 1) * (n2 + 1)).astype(float) + 0.0 * n0
    w_aad[:, -1, :] = 0.0
    w_aad[:, :, -1] = 0.0
    aad = float(np.sum(w_aad * p))
    return a, a2, ada, aad


def pair_quadrature_dispersion(s, sign):
    """Dispersion of C+ (sign='plus') or C- (sign='minus')."""
    if sign not in ("plus", "minus"):
        raise ValidationError(f"sign must be 'plus' or 'minus', got {sign!r}")
    a, a2, ada, aad = _pair_moments(s)
    if sign == "plus":
        return 2.0 * a2.real + ada + aad - (2.0 * a.real) ** 2
    return ada + aad - 2.0 * a2.real - (2.0 * a.imag) ** 2


def c_plus_expectation(s):
    """<C+> = 2 Re<A>."""
    return 2.0 * expect_pair_amplitude(s).real


def photon_number_distribution(s, mode):
    """Marginal photon-number distribution of one mode; sums to 1 - leakage."""
    if mode not in (0, 1, 2):
        raise ValidationError(f"mode must be 0, 1 or 2, got {mode!r}")
    axes = tuple(ax for ax in (0, 1, 2) if ax != mode)
    return np.sum(s.probabilities(), axis=axes)


def edge_occupancy(s):
    """Probability mass on the cutoff boundary of any nontrivial mode.

    Modes of dimension 1 (e.g. the trivial pump slot of a pair-sector
    state) have no tail to occupy and are skipped.
    """
    p = s.probabilities()
    d0, d1, d2 = s.config.shape
    mask = np.zeros(s.config.shape, dtype=bool)
    if d0 > 1:
        mask[-1, :, :] = True
    if d1 > 1:
        mask[:, -1, :] = True
    if d2 > 1:
        mask[:, :, -1] = True
    return float(np.sum(p[mask]))


def measure(s):
    """All observables of one state, assembled in a single pass."""
    a, a2, ada, aad = _pair_moments(s)
    alpha0 = expect_pump_amplitude(s)
    c_plus = 2.0 * a.real
    disp_plus = 2.0 * a2.real + ada + aad - c_plus**2
    disp_minus = ada + aad - 2.0 * a2.real - (2.0 * a.imag) ** 2
    return ObservableSet(
        pair_amp=a,
        pair_amp_conj=a.conjugate(),
        total_n=expect_total_number(s),
        diff_n=expect_number_difference(s),
        pump_amp=alpha0,
        pump_quad=2.0 * alpha0.real,
        c_plus=c_plus,
        disp_plus=disp_plus,
        disp_minus=disp_minus,
        conserved_k=conserved_excitation(s),
    )
