"""Exact analytics of the semicircle distribution.

Density, Stieltjes transform, interval masses, quantiles and typical
eigenvalue locations, the edge distance kappa, the deterministic error
parameter Psi, stability of the self-consistent quadratic equation,
Catalan moments, the Cauchy smoothing kernel, and i.i.d. sampling.

All spectral parameters are plain complex numbers ``z = E + i*eta`` with
``eta > 0`` (upper half-plane).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParameter, OutOfRegime

__all__ = [
    "density",
    "stieltjes_m",
    "measure",
    "cdf",
    "quantile",
    "typical_locations",
    "TypicalLocations",
    "sample_iid_semicircle",
    "kappa",
    "psi",
    "StabilityPair",
    "QuadraticPerturbation",
    "solve_perturbed_quadratic",
    "catalan",
    "semicircle_moment",
    "theta_kernel",
]


def density(x):
    """Semicircle density ``(2*pi)**-1 * sqrt((4 - x**2)+)``.

    Vanishes outside ``[-2, 2]``; accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    out = np.sqrt(np.clip(4.0 - x * x, 0.0, None)) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def _validate_upper(z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0.0:
        raise InvalidParameter(f"spectral parameter must have Im z > 0, got {z}")
    return z


def stieltjes_m(z):
    """Stieltjes transform of the semicircle distribution.

    ``m(z) = (-z + sqrt(z**2 - 4)) / 2`` with the branch of
    ``sqrt(z**2 - 4)`` cut along ``[-2, 2]`` and asymptotic to ``z`` at
    infinity, so that ``m`` maps the upper half-plane into itself and
    ``m(z) ~ -1/z`` for large ``z``.  The naive principal square root of
    ``z**2 - 4`` picks the wrong sheet for ``Re z < 0``; the product of
    principal roots of ``z - 2`` and ``z + 2`` does not.
    """
    z = np.asarray(z, dtype=complex)
    root = np.sqrt(z - 2.0) * np.sqrt(z + 2.0)
    out = 0.5 * (-z + root)
    return out if out.ndim else complex(out)


def stieltjes_m_conjugate_root(z) -> complex:
    """The companion root of ``u**2 + z*u + 1 = 0`` in the lower half-plane."""
    z = complex(z)
    root = complex(np.sqrt(z - 2.0 + 0j) * np.sqrt(z + 2.0 + 0j))
    return 0.5 * (-z - root)


def cdf(x):
    """Cumulative mass of the semicircle distribution on ``(-inf, x]``.

    Closed form antiderivative ``x*sqrt(4-x**2)/(4*pi) + arcsin(x/2)/pi + 1/2``
    with the argument clamped to ``[-2, 2]``.
    """
    x = np.asarray(x, dtype=float)
    t = np.clip(x, -2.0, 2.0)
    out = t * np.sqrt(4.0 - t * t) / (4.0 * math.pi) + np.arcsin(t / 2.0) / math.pi + 0.5
    return out if out.ndim else float(out)


def measure(a: float, b: float) -> float:
    """Semicircle mass of the interval ``[a, b]`` (requires ``a <= b``)."""
    if a > b:
        raise InvalidParameter(f"interval endpoints out of order: ({a}, {b})")
    return float(cdf(b) - cdf(a))


@dataclass(frozen=True)
class TypicalLocations:
    """Typical eigenvalue locations, strictly decreasing, in ``(-2, 2)``.

    ``gamma[i-1]`` (1-based index i) carries semicircle mass ``(i - 1/2)/N``
    above it: ``N * measure(gamma_i, 2) = i - 1/2``.
    """

    N: int
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gamma", np.asarray(self.gamma, dtype=float))


def typical_locations(N: int) -> TypicalLocations:
    """Solve ``N * measure(gamma_i, 2) = i - 1/2`` for ``i = 1..N``.

    Bracketed root-finding on the monotone CDF; residuals below 1e-10.
    """
    if N < 1:
        raise InvalidParameter("N must be >= 1")
    gamma = np.empty(N)
    for i in range(1, N + 1):
        target = 1.0 - (i - 0.5) / N  # cdf(gamma_i)
        gamma[i - 1] = brentq(lambda x: cdf(x) - target, -2.0, 2.0,
                              xtol=1e-15, rtol=8.9e-16)
    return TypicalLocations(N=N, gamma=gamma)


def quantile(x: float) -> float:
    """Inverse CDF: the point ``q`` with semicircle mass ``x`` below it."""
    if not 0.0 < x < 1.0:
        raise InvalidParameter(f"quantile argument must lie in (0, 1), got {x}")
    return brentq(lambda q: cdf(q) - x, -2.0, 2.0, xtol=1e-15, rtol=8.9e-16)


def sample_iid_semicircle(N: int, seed: int) -> np.ndarray:
    """Draw N i.i.d. semicircle variables by inverse-CDF sampling.

    Substituting ``x = 2*cos(theta)`` turns the CDF equation into
    ``theta - sin(theta)*cos(theta) = pi * v`` with ``v`` uniform, solved
    here by vectorized bisection to full double precision.
    """
    if N < 1:
        raise InvalidParameter("N must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.random(N)
    lo = np.zeros(N)
    hi = np.full(N, math.pi)
    target = math.pi * v
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        g = mid - np.sin(mid) * np.cos(mid)
        high = g > target
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
    theta = 0.5 * (lo + hi)
    # theta ~ CDF level from the top; x = 2 cos(theta) is decreasing in theta
    x = 2.0 * np.cos(theta)
    return np.clip(x, -2.0 + 1e-15, 2.0 - 1e-15)


def kappa(E: float) -> float:
    """Distance of the energy E to the spectral edge: ``| |E| - 2 |``."""
    return abs(abs(float(E)) - 2.0)


def psi(z: complex, N: int) -> float:
    """Deterministic error parameter ``sqrt(Im m(z)/(N*eta)) + 1/(N*eta)``."""
    z = _validate_upper(z)
    neta = N * z.imag
    return math.sqrt(stieltjes_m(z).imag / neta) + 1.0 / neta


@dataclass(frozen=True)
class StabilityPair:
    """The two roots of ``u**2 + z*u + 1 = 0`` and their separation."""

    m_plus: complex
    m_minus: complex
    gap: float


@dataclass(frozen=True)
class QuadraticPerturbation:
    """Roots of the perturbed quadratic and their distances to (m, m~)."""

    pair: StabilityPair
    roots: tuple
    distances: tuple  # min(|u - m|, |u - m~|) per root
    bound: float      # C*|r| / sqrt(kappa + eta + |r|)


def solve_perturbed_quadratic(z: complex, r: complex,
                              constant: float = 10.0) -> QuadraticPerturbation:
    """Solve ``u**2 + z*u + 1 + r = 0`` and report root displacements.

    Each root stays within ``C*|r|/sqrt(kappa + eta + |r|)`` of one of the
    unperturbed roots; the constant C is configurable (default 10) and the
    measured distances are returned alongside the bound.
    """
    z = _validate_upper(z)
    r = complex(r)
    if abs(r) > 1.0:
        raise OutOfRegime(f"perturbation must satisfy |r| <= 1, got |r|={abs(r)}")
    m = complex(stieltjes_m(z))
    mt = stieltjes_m_conjugate_root(z)
    pair = StabilityPair(m_plus=m, m_minus=mt, gap=abs(m - mt))
    disc = np.sqrt(np.asarray(z * z - 4.0 * (1.0 + r), dtype=complex))
    u1 = complex(0.5 * (-z + disc))
    u2 = complex(0.5 * (-z - disc))
    dist = tuple(min(abs(u - m), abs(u - mt)) for u in (u1, u2))
    bound = constant * abs(r) / math.sqrt(kappa(z.real) + z.imag + abs(r))
    return QuadraticPerturbation(pair=pair, roots=(u1, u2),
                                 distances=dist, bound=bound)


def catalan(k: int) -> int:
    """k-th Catalan number ``binom(2k, k) / (k + 1)``."""
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    return math.comb(2 * k, k) // (k + 1)


def semicircle_moment(k: int) -> float:
    """k-th moment of the semicircle distribution: ``C_{k/2}`` for even k, else 0."""
    if k < 0:
        raise InvalidParameter("k must be >= 0")
    return float(catalan(k // 2)) if k % 2 == 0 else 0.0


def theta_kernel(x, eta: float):
    """Cauchy approximate delta function ``(eta/pi) / (x**2 + eta**2)``."""
    if eta <= 0:
        raise InvalidParameter("eta must be > 0")
    x = np.asarray(x, dtype=float)
    out = (eta / math.pi) / (x * x + eta * eta)
    return out if out.ndim else float(out)
