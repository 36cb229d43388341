"""Monte Carlo harness for the probabilistic spectral laws.

Discretized spectral domains, local-law error tables, empirical stochastic
domination estimates, scaling-exponent fits across matrix sizes, the
fluctuation-averaging experiment, and large-deviation percentile tables.

Reproducibility contract: per-sample seeds derive from (base_seed, index)
through a fixed 64-bit mix, samples are computed independently, and results
merge in sample-index order, so tables are byte-identical for any worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import semicircle
from .ensemble import EnsembleSpec, sample_wigner
from .errors import EmptyDomain, InsufficientData, InvalidParameter
from .resolvent import fluctuation_terms_all

__all__ = [
    "SpectralDomainGrid",
    "build_domain",
    "MCConfig",
    "derive_seed",
    "run_indexed",
    "LocalLawTable",
    "run_local_law",
    "DominationEstimate",
    "estimate_domination",
    "ScalingFit",
    "fit_scaling",
    "FluctuationTable",
    "fluctuation_averaging_experiment",
    "large_deviation_experiment",
]


@dataclass(frozen=True)
class SpectralDomainGrid:
    """Discretization of the spectral domain
    ``{E + i eta : |E| <= 1/tau, N^(tau-1) <= eta <= 1/tau}``."""

    tau: float
    N: int
    E_points: np.ndarray
    eta_points: np.ndarray

    def pairs(self):
        return [(float(E), float(eta)) for E in self.E_points for eta in self.eta_points]


def build_domain(tau: float, N: int, nE: int, nEta: int) -> SpectralDomainGrid:
    """Uniform E grid on [-1/tau, 1/tau], log-uniform eta grid on
    [N^(tau-1), 1/tau]."""
    if not 0 < tau < 1:
        raise InvalidParameter(f"tau must lie in (0, 1), got {tau}")
    if nE < 2 or nEta < 2:
        raise InvalidParameter("need at least 2 points per axis")
    eta_min = N ** (tau - 1.0)
    eta_max = 1.0 / tau
    if eta_min > eta_max:
        raise EmptyDomain(f"N^(tau-1) = {eta_min:.3g} exceeds 1/tau = {eta_max:.3g}")
    E = np.linspace(-1.0 / tau, 1.0 / tau, nE)
    eta = np.geomspace(eta_min, eta_max, nEta)
    return SpectralDomainGrid(tau=tau, N=N, E_points=E, eta_points=eta)


@dataclass(frozen=True)
class MCConfig:
    samples: int
    base_seed: int
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1 or self.workers < 1:
            raise InvalidParameter("samples and workers must be >= 1")


_GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x &= _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK
    return x ^ (x >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    """Per-sample seed: splitmix64 of the base seed advanced by the index.

    seed_i = splitmix64(splitmix64(base_seed) XOR ((index + 1) * golden)).
    """
    h = _splitmix64(base_seed)
    return _splitmix64(h ^ (((index + 1) * _GOLDEN) & _MASK))


def run_indexed(fn: Callable, args_list: Sequence, workers: int = 1) -> list:
    """Apply fn to each argument tuple, in order; optionally in processes.

    Results are collected in input order regardless of scheduling, which is
    what makes the emitted tables independent of the worker count.
    """
    if workers <= 1:
        return [fn(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star_apply, [(fn, args) for args in args_list]))


def _star_apply(packed):
    fn, args = packed
    return fn(*args)


@dataclass(frozen=True)
class LocalLawTable:
    """One row per (sample, grid point): the measured error parameters."""

    N: np.ndarray
    seed: np.ndarray
    E: np.ndarray
    eta: np.ndarray
    Lambda: np.ndarray
    LambdaStar: np.ndarray
    Theta: np.ndarray
    Psi: np.ndarray
    inv_Neta: np.ndarray
    ok: np.ndarray

    def __len__(self):
        return self.N.size


def _local_law_sample(spec: EnsembleSpec, seed: int, pairs) -> list:
    """Error-parameter rows for one sampled matrix over all grid points.

    One decomposition per sample; G(z) is reconstructed per grid point
    (sweeps over z dominate the runtime, so this is the cheap route).
    """
    N = spec.N
    rows = []
    try:
        H = sample_wigner(spec, seed).entries
        w, U = np.linalg.eigh(H)
        Uc = U.conj().T
        for E, eta in pairs:
            z = complex(E, eta)
            m = semicircle.stieltjes_m(z)
            G = (U / (w - z)) @ Uc
            s = np.sum(1.0 / (w - z)) / N
            D = np.abs(G - m * np.eye(N))
            lam = float(D.max())
            np.fill_diagonal(D, 0.0)
            lam_star = float(np.abs(G - np.diag(np.diag(G))).max())
            rows.append((N, seed, E, eta, lam, lam_star, abs(s - m),
                         semicircle.psi(z, N), 1.0 / (N * eta), True))
    except Exception:
        # flagged, not dropped: exceedance denominators stay unambiguous
        for E, eta in pairs:
            rows.append((N, seed, E, eta, math.nan, math.nan, math.nan,
                         semicircle.psi(complex(E, eta), N), 1.0 / (N * eta), False))
    return rows


def run_local_law(spec: EnsembleSpec, grid: SpectralDomainGrid,
                  mc: MCConfig) -> LocalLawTable:
    """Local-law error table over the grid, one row per (sample, point)."""
    if grid.N != spec.N:
        raise InvalidParameter("grid and ensemble dimensions differ")
    pairs = grid.pairs()
    seeds = [derive_seed(mc.base_seed, i) for i in range(mc.samples)]
    chunks = run_indexed(_local_law_sample, [(spec, s, pairs) for s in seeds],
                         workers=mc.workers)
    rows = [r for chunk in chunks for r in chunk]
    cols = list(zip(*rows))
    return LocalLawTable(
        N=np.asarray(cols[0]), seed=np.asarray(cols[1], dtype=np.uint64),
        E=np.asarray(cols[2]), eta=np.asarray(cols[3]),
        Lambda=np.asarray(cols[4]), LambdaStar=np.asarray(cols[5]),
        Theta=np.asarray(cols[6]), Psi=np.asarray(cols[7]),
        inv_Neta=np.asarray(cols[8]), ok=np.asarray(cols[9], dtype=bool))


@dataclass(frozen=True)
class DominationEstimate:
    """Empirical proxy for stochastic domination at one epsilon.

    exceed_fraction = #{samples with X > N^epsilon Y} / samples; the
    asymptotic statement corresponds to this fraction vanishing for every
    positive epsilon as N grows.
    """

    epsilon: float
    exceed_fraction: float
    samples: int


def estimate_domination(X_samples, Y_values, epsilon: float, N: int) -> DominationEstimate:
    X = np.asarray(X_samples, dtype=float)
    Y = np.asarray(Y_values, dtype=float)
    if X.shape != Y.shape:
        raise InvalidParameter("X and Y must have equal length")
    if np.any(Y <= 0):
        raise InvalidParameter("Y must be positive")
    if epsilon <= 0:
        raise InvalidParameter("epsilon must be > 0")
    frac = float(np.mean(X > N ** epsilon * Y))
    return DominationEstimate(epsilon=epsilon, exceed_fraction=frac, samples=X.size)


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares slope of log(median statistic) against log N."""

    N_values: np.ndarray
    statistic_medians: np.ndarray
    exponent: float
    stderr: float


def fit_scaling(per_N_statistics) -> ScalingFit:
    """Fit a power law to per-N medians.

    ``per_N_statistics`` maps N to either a median or a sample list (whose
    median is taken).  Medians rather than means: heavy-tailed samples near
    the spectral edge would corrupt means.
    """
    items = sorted(per_N_statistics.items())
    Ns = np.asarray([n for n, _ in items], dtype=float)
    if np.unique(Ns).size < 3:
        raise InsufficientData("need at least 3 distinct N values")
    meds = np.asarray([float(np.median(v)) if np.ndim(v) else float(v)
                       for _, v in items])
    x = np.log(Ns)
    y = np.log(meds)
    n = x.size
    xbar, ybar = x.mean(), y.mean()
    sxx = np.sum((x - xbar) ** 2)
    slope = float(np.sum((x - xbar) * (y - ybar)) / sxx)
    resid = y - (ybar + slope * (x - xbar))
    sigma2 = float(np.sum(resid ** 2) / max(n - 2, 1))
    return ScalingFit(N_values=Ns, statistic_medians=meds,
                      exponent=slope, stderr=math.sqrt(sigma2 / sxx))


@dataclass(frozen=True)
class FluctuationTable:
    """Per-sample centred-fluctuation averages at one spectral parameter."""

    sample: np.ndarray
    avg_Q: np.ndarray    # |N^-1 sum_i Q_i(1/G_ii)|
    max_Q: np.ndarray    # max_i |Q_i(1/G_ii)|
    LambdaStar: np.ndarray


def _fluct_sample(spec: EnsembleSpec, seed: int, z: complex):
    H = sample_wigner(spec, seed).entries
    w, U = np.linalg.eigh(H)
    G = (U / (w - z)) @ U.conj().T
    _, _, _, Q, _ = fluctuation_terms_all(H, z, G=G)
    off = np.abs(G - np.diag(np.diag(G)))
    return (abs(Q.mean()), float(np.abs(Q).max()), float(off.max()))


def fluctuation_averaging_experiment(spec: EnsembleSpec, z: complex,
                                     mc: MCConfig) -> FluctuationTable:
    """Compare the averaged centred fluctuation to its per-index maximum.

    The average gains one power of the off-diagonal size over the max; the
    table exposes both so scaling fits across N can check the gain.
    """
    seeds = [derive_seed(mc.base_seed, i) for i in range(mc.samples)]
    rows = run_indexed(_fluct_sample, [(spec, s, complex(z)) for s in seeds],
                       workers=mc.workers)
    avg, mx, ls = map(np.asarray, zip(*rows))
    return FluctuationTable(sample=np.arange(mc.samples), avg_Q=avg,
                            max_Q=mx, LambdaStar=ls)


def large_deviation_experiment(kind: str, N: int, mc: MCConfig,
                               coefficients: Optional[np.ndarray] = None) -> dict:
    """Percentiles of multilinear sums against their L2 size.

    kinds: ``linear`` (sum b_i X_i), ``quadratic-offdiag``
    (sum_{i != j} a_ij X_i X_j), ``bilinear`` (sum_{ij} a_ij X_i Y_j), with
    standard normal X, Y.  Default coefficients are b_i = N^(-1/2) and
    a_ij = 1/N, in which case the sums are evaluated in closed form instead
    of materializing an N x N array.
    """
    if kind not in ("linear", "quadratic-offdiag", "bilinear"):
        raise InvalidParameter(f"unknown kind {kind!r}")
    values = np.empty(mc.samples)
    if kind == "linear":
        b = coefficients if coefficients is not None else np.full(N, N ** -0.5)
        psi_norm = float(np.linalg.norm(b))
        for i in range(mc.samples):
            rng = np.random.default_rng(derive_seed(mc.base_seed, i))
            values[i] = abs(b @ rng.standard_normal(N))
    elif kind == "quadratic-offdiag":
        if coefficients is None:
            psi_norm = math.sqrt(N * (N - 1)) / N
            for i in range(mc.samples):
                rng = np.random.default_rng(derive_seed(mc.base_seed, i))
                X = rng.standard_normal(N)
                values[i] = abs((X.sum() ** 2 - X @ X) / N)
        else:
            a = np.asarray(coefficients)
            off = a - np.diag(np.diag(a))
            psi_norm = float(np.linalg.norm(off))
            for i in range(mc.samples):
                rng = np.random.default_rng(derive_seed(mc.base_seed, i))
                X = rng.standard_normal(N)
                values[i] = abs(X @ off @ X)
    else:
        if coefficients is None:
            psi_norm = 1.0
            for i in range(mc.samples):
                rng = np.random.default_rng(derive_seed(mc.base_seed, i))
                X = rng.standard_normal(N)
                Y = rng.standard_normal(N)
                values[i] = abs(X.sum() * Y.sum() / N)
        else:
            a = np.asarray(coefficients)
            psi_norm = float(np.linalg.norm(a))
            for i in range(mc.samples):
                rng = np.random.default_rng(derive_seed(mc.base_seed, i))
                X = rng.standard_normal(N)
                Y = rng.standard_normal(N)
                values[i] = abs(X @ a @ Y)

    pct = {p: float(np.percentile(values, p)) for p in (50, 90, 99)}
    return {"kind": kind, "N": N, "samples": mc.samples,
            "psi": psi_norm, "percentiles": pct,
            "ratio_to_psi": {p: v / psi_norm for p, v in pct.items()}}
