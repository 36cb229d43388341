"""Random matrix ensembles: Wigner matrices, GOE/GUE, moment-matched entry
laws, the entry-by-entry interpolation between two ensembles, and normalized
Erdos-Renyi adjacency matrices.

All samplers are pure functions of (spec, seed): a fixed draw order over a
``numpy.random.default_rng(seed)`` stream makes matrices bit-identical for
identical inputs within one numpy installation.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Tuple

import numpy as np

from .errors import (
    InvalidDimension,
    InvalidInput,
    InvalidParameter,
    UnsupportedOrder,
    UnsupportedReference,
)

__all__ = [
    "EntryDistribution",
    "EnsembleSpec",
    "HermitianMatrix",
    "gaussian_real",
    "gaussian_complex",
    "ternary_real",
    "ternary_complex",
    "bernoulli_sym",
    "custom_table",
    "goe",
    "gue",
    "wigner_custom",
    "erdos_renyi",
    "sample_wigner",
    "sample_erdos_renyi",
    "four_moment_matched",
    "verify_matching",
    "MatchReport",
    "telescoping_interpolation",
    "delta_diagnostic",
    "phi_rowmajor",
    "save_matrix",
    "load_matrix",
]

KINDS = ("gaussian-real", "gaussian-complex", "ternary-real",
         "ternary-complex", "bernoulli-sym", "custom-table")

_SQRT3 = math.sqrt(3.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class EntryDistribution:
    """A standardized matrix-entry law with its moment table.

    ``moments[(k, l)] = E[X^k conj(X)^l]`` for the standardized variable X
    (mean 0, E|X|^2 = 1), tabulated through total order k + l <= 4.  The
    ``scale`` multiplies draws (e.g. sqrt(2) for the GOE diagonal); moments
    and ``third_abs_moment`` always refer to the standardized X.
    """

    name: str
    kind: str
    scale: float
    moments: Mapping[Tuple[int, int], complex]
    third_abs_moment: float
    is_complex: bool
    sampler: Callable = field(repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown distribution kind {self.kind!r}")
        m = self.moments
        if abs(m[(0, 0)] - 1.0) > 1e-12 or abs(m[(1, 0)]) > 1e-12 or abs(m[(0, 1)]) > 1e-12:
            raise InvalidParameter("entry law must be centred with m(0,0) = 1")
        if abs(m[(1, 1)] - 1.0) > 1e-12:
            raise InvalidParameter("standardized entry law must have unit variance")

    def moment(self, k: int, l: int) -> complex:
        return complex(self.moments[(k, l)])

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.scale * self.sampler(rng, size)

    def scaled(self, scale: float) -> "EntryDistribution":
        return EntryDistribution(
            name=f"{self.name}*{scale:g}", kind=self.kind, scale=self.scale * scale,
            moments=self.moments, third_abs_moment=self.third_abs_moment,
            is_complex=self.is_complex, sampler=self.sampler)


def _real_table(m2: float, m4: float) -> dict:
    """Moment table of a symmetric real law with given 2nd/4th moments."""
    t = {}
    for k in range(5):
        for l in range(5 - k):
            n = k + l
            t[(k, l)] = {0: 1.0, 1: 0.0, 2: m2, 3: 0.0, 4: m4}[n]
    return t


def _rotation_invariant_table(m11: float, m22: float) -> dict:
    """Moment table with E X^k conj(X)^l = 0 unless k = l."""
    t = {}
    for k in range(5):
        for l in range(5 - k):
            if k == l == 0:
                t[(k, l)] = 1.0
            elif k == l == 1:
                t[(k, l)] = m11
            elif k == l == 2:
                t[(k, l)] = m22
            else:
                t[(k, l)] = 0.0
    return t


# Samplers are module-level so EntryDistribution instances pickle cleanly
# (Monte Carlo workers ship specs across processes).

def _sample_gaussian_real(rng, size):
    return rng.standard_normal(size)


def _sample_gaussian_complex(rng, size):
    a = rng.standard_normal(size)
    b = rng.standard_normal(size)
    return (a + 1j * b) * _INV_SQRT2


def _sample_ternary(rng, size):
    u = rng.random(size)
    return np.where(u < 1 / 6, _SQRT3, np.where(u < 2 / 6, -_SQRT3, 0.0))


def _sample_ternary_complex(rng, size):
    a = _sample_ternary(rng, size)
    b = _sample_ternary(rng, size)
    return (a + 1j * b) * _INV_SQRT2


def _sample_bernoulli(rng, size):
    return np.where(rng.random(size) < 0.5, 1.0, -1.0)


def gaussian_real(scale: float = 1.0) -> EntryDistribution:
    return EntryDistribution(
        name="gaussian-real", kind="gaussian-real", scale=scale,
        moments=_real_table(1.0, 3.0),
        third_abs_moment=2.0 * math.sqrt(2.0 / math.pi),
        is_complex=False, sampler=_sample_gaussian_real)


def gaussian_complex(scale: float = 1.0) -> EntryDistribution:
    """Standard complex normal: (a + ib)/sqrt(2) with a, b standard normal."""
    return EntryDistribution(
        name="gaussian-complex", kind="gaussian-complex", scale=scale,
        moments=_rotation_invariant_table(1.0, 2.0),
        third_abs_moment=0.75 * math.sqrt(math.pi),
        is_complex=True, sampler=_sample_gaussian_complex)


def ternary_real(scale: float = 1.0) -> EntryDistribution:
    """+-sqrt(3) with probability 1/6 each, 0 with probability 2/3.

    Matches the standard real normal through fourth moments.
    """
    return EntryDistribution(
        name="ternary-real", kind="ternary-real", scale=scale,
        moments=_real_table(1.0, 3.0),
        third_abs_moment=_SQRT3,
        is_complex=False, sampler=_sample_ternary)


def ternary_complex(scale: float = 1.0) -> EntryDistribution:
    """(a + ib)/sqrt(2) with a, b independent ternary; matches the standard
    complex normal through fourth moments."""
    # E|X|^3 over the 9-point support of (a^2 + b^2)/2
    third = (2.0 * _SQRT3 + math.sqrt(6.0)) / (3.0 * math.sqrt(2.0))
    return EntryDistribution(
        name="ternary-complex", kind="ternary-complex", scale=scale,
        moments=_rotation_invariant_table(1.0, 2.0),
        third_abs_moment=third,
        is_complex=True, sampler=_sample_ternary_complex)


def bernoulli_sym(scale: float = 1.0) -> EntryDistribution:
    """Symmetric +-1 law (second moments match the normal, fourth do not)."""
    return EntryDistribution(
        name="bernoulli-sym", kind="bernoulli-sym", scale=scale,
        moments=_real_table(1.0, 1.0),
        third_abs_moment=1.0,
        is_complex=False, sampler=_sample_bernoulli)


def custom_table(name: str, sampler: Callable, moments: Mapping,
                 third_abs_moment: float, is_complex: bool = False,
                 scale: float = 1.0) -> EntryDistribution:
    """Wrap a user-supplied standardized sampler with its moment table."""
    return EntryDistribution(
        name=name, kind="custom-table", scale=scale, moments=dict(moments),
        third_abs_moment=third_abs_moment, is_complex=is_complex,
        sampler=sampler)


@dataclass(frozen=True)
class EnsembleSpec:
    """Recipe for sampling one matrix ensemble."""

    family: str  # GOE | GUE | wigner-custom | erdos-renyi
    N: int
    offdiag_dist: Optional[EntryDistribution] = None
    diag_dist: Optional[EntryDistribution] = None
    er_p: Optional[float] = None
    center_er: bool = False

    def __post_init__(self):
        if self.N < 2:
            raise InvalidDimension(f"matrix dimension must be >= 2, got {self.N}")
        if self.family == "erdos-renyi":
            p = self.er_p
            if p is None or not 0.0 < p < 1.0:
                raise InvalidParameter(f"er_p must lie in (0, 1), got {p}")
            if self.N * p * (1.0 - p) < 1.0:
                raise InvalidParameter("need N*p*(1-p) >= 1 for the normalization")
        else:
            if self.diag_dist is not None and self.diag_dist.is_complex:
                raise InvalidParameter("diagonal law must be real for a Hermitian matrix")

    @property
    def is_complex(self) -> bool:
        return self.offdiag_dist is not None and self.offdiag_dist.is_complex


def goe(N: int) -> EnsembleSpec:
    """GOE: real normal entries, N*E|H_ij|^2 = 1 + delta_ij."""
    return EnsembleSpec("GOE", N, gaussian_real(), gaussian_real(scale=math.sqrt(2.0)))


def gue(N: int) -> EnsembleSpec:
    """GUE: complex normal off-diagonal, real normal diagonal, N*E|H_ij|^2 = 1."""
    return EnsembleSpec("GUE", N, gaussian_complex(), gaussian_real())


def wigner_custom(N: int, offdiag: EntryDistribution,
                  diag: Optional[EntryDistribution] = None) -> EnsembleSpec:
    """Wigner matrix with the given entry laws.

    If ``diag`` is omitted and the off-diagonal law is real, the diagonal
    reuses it; a complex off-diagonal law requires an explicit real diagonal.
    """
    if diag is None:
        if offdiag.is_complex:
            raise InvalidParameter("complex off-diagonal law requires an explicit diagonal law")
        diag = offdiag
    return EnsembleSpec("wigner-custom", N, offdiag, diag)


def erdos_renyi(N: int, p: float, center: bool = True) -> EnsembleSpec:
    return EnsembleSpec("erdos-renyi", N, er_p=p, center_er=center)


@dataclass(frozen=True)
class HermitianMatrix:
    """Dense Hermitian matrix with its symmetry class and provenance.

    The upper triangle is the source of truth; the lower triangle is its
    mirror, so H == H* holds exactly.  Real-symmetric matrices are stored
    with float entries (identically zero imaginary parts).
    """

    entries: np.ndarray
    symmetry: str  # real-symmetric | complex-hermitian
    provenance: Optional[Tuple[EnsembleSpec, int]] = None

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def as_matrix(H) -> np.ndarray:
    """Accept HermitianMatrix or plain ndarray."""
    return H.entries if isinstance(H, HermitianMatrix) else np.asarray(H)


def _hermitize_from_upper(upper: np.ndarray) -> np.ndarray:
    """Mirror the strict upper triangle onto the lower one (conjugated)."""
    out = np.triu(upper)
    out = out + np.conj(np.triu(upper, 1)).T
    return out


def sample_wigner(spec: EnsembleSpec, seed: int) -> HermitianMatrix:
    """Sample H with H_ij = X_ij / sqrt(N), X from the spec's entry laws.

    Draw order is fixed (diagonal first, then the strict upper triangle in
    row-major order) so identical (spec, seed) give identical matrices.
    """
    if spec.family == "erdos-renyi":
        raise InvalidParameter("use sample_erdos_renyi for adjacency ensembles")
    N = spec.N
    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(N)
    diag = spec.diag_dist.sample(rng, N) * scale
    offdiag = spec.offdiag_dist.sample(rng, N * (N - 1) // 2) * scale

    dtype = complex if spec.is_complex else float
    H = np.zeros((N, N), dtype=dtype)
    iu = np.triu_indices(N, k=1)
    H[iu] = offdiag
    H = _hermitize_from_upper(H)
    H[np.diag_indices(N)] = diag.real
    symmetry = "complex-hermitian" if spec.is_complex else "real-symmetric"
    return HermitianMatrix(entries=H, symmetry=symmetry, provenance=(spec, seed))


def sample_erdos_renyi(N: int, p: float, center: bool, seed: int) -> HermitianMatrix:
    """Normalized adjacency matrix B = A / sqrt(N p (1-p)) of G(N, p).

    The diagonal of A is identically zero.  With ``center`` the exact
    entrywise expectation (p / sqrt(N p (1-p)) off-diagonal, 0 on the
    diagonal) is subtracted.
    """
    spec = erdos_renyi(N, p, center)  # validates parameters
    rng = np.random.default_rng(seed)
    norm = 1.0 / math.sqrt(N * p * (1.0 - p))
    edges = (rng.random(N * (N - 1) // 2) < p).astype(float) * norm
    B = np.zeros((N, N))
    iu = np.triu_indices(N, k=1)
    B[iu] = edges
    B = B + B.T
    if center:
        mean = p * norm
        B[iu] -= mean
        il = np.tril_indices(N, k=-1)
        B[il] -= mean
    return HermitianMatrix(entries=B, symmetry="real-symmetric", provenance=(spec, seed))


def four_moment_matched(reference: EntryDistribution) -> EntryDistribution:
    """Non-Gaussian law matching the reference normal through order 4.

    Real reference: the ternary law on {-sqrt(3), 0, +sqrt(3)}.  Complex
    reference: (a + ib)/sqrt(2) with independent ternary a, b.
    """
    if reference.kind == "gaussian-real":
        return ternary_real(scale=reference.scale)
    if reference.kind == "gaussian-complex":
        return ternary_complex(scale=reference.scale)
    raise UnsupportedReference(
        f"four-moment matching is defined against a Gaussian reference, got {reference.kind}")


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    max_discrepancy: float
    worst_moment: Tuple[int, int]

    def __bool__(self) -> bool:
        return self.matched


def verify_matching(d1: EntryDistribution, d2: EntryDistribution,
                    order: int, tol: float = 1e-12) -> MatchReport:
    """Compare moment tables of two entry laws through the given order."""
    if order > 4:
        raise UnsupportedOrder("moment tables are only tabulated through order 4")
    worst = (0, 0)
    disc = 0.0
    for k in range(order + 1):
        for l in range(order + 1 - k):
            d = abs(d1.moment(k, l) - d2.moment(k, l))
            if d > disc:
                disc, worst = d, (k, l)
    return MatchReport(matched=disc <= tol, max_discrepancy=disc, worst_moment=worst)


def phi_rowmajor(N: int):
    """The fixed bijection phi from upper-triangular pairs to 1..N(N+1)/2.

    Row-major over i <= j (1-based ranks):
    (1,1) -> 1, (1,2) -> 2, ..., (1,N) -> N, (2,2) -> N+1, ...
    """
    def phi(i: int, j: int) -> int:
        if not 0 <= i <= j < N:
            raise InvalidInput(f"need 0 <= i <= j < N, got ({i}, {j})")
        return i * N - i * (i - 1) // 2 + (j - i) + 1

    return phi


def telescoping_interpolation(Hp: HermitianMatrix, Hpp: HermitianMatrix,
                              gamma: int) -> HermitianMatrix:
    """Entry-by-entry interpolation H^gamma between two matrices.

    Upper-triangular entry (i, j) comes from Hpp when phi(i, j) <= gamma and
    from Hp otherwise, with phi the row-major bijection; gamma = 0 returns
    Hp, gamma = N(N+1)/2 returns Hpp.
    """
    A, B = as_matrix(Hp), as_matrix(Hpp)
    if A.shape != B.shape:
        raise InvalidInput("matrices must have identical dimensions")
    N = A.shape[0]
    if not 0 <= gamma <= N * (N + 1) // 2:
        raise InvalidInput(f"gamma must lie in [0, N(N+1)/2], got {gamma}")
    phi = phi_rowmajor(N)
    dtype = np.result_type(A.dtype, B.dtype)
    out = np.zeros((N, N), dtype=dtype)
    for i in range(N):
        for j in range(i, N):
            out[i, j] = B[i, j] if phi(i, j) <= gamma else A[i, j]
    out = _hermitize_from_upper(out)
    symmetry = "real-symmetric" if not np.iscomplexobj(out) else "complex-hermitian"
    return HermitianMatrix(entries=out, symmetry=symmetry, provenance=None)


def delta_diagnostic(dist: EntryDistribution, N: int) -> float:
    """Third-moment smallness diagnostic: E|X|^3 / sqrt(N) for standardized X."""
    return dist.third_abs_moment / math.sqrt(N)


_MAGIC = b"RMTL"
_SYM_TAG = {"real-symmetric": 0, "complex-hermitian": 1}
_TAG_SYM = {v: k for k, v in _SYM_TAG.items()}


def save_matrix(H: HermitianMatrix, path) -> None:
    """Write the documented binary layout.

    16-byte header: magic b"RMTL", uint16 version (=1), uint16 symmetry tag
    (0 real-symmetric, 1 complex-hermitian), uint64 N; all little-endian.
    Payload: the upper triangle (diagonal included), row-major, as
    little-endian complex doubles.
    """
    A = as_matrix(H)
    N = A.shape[0]
    iu = np.triu_indices(N)
    tri = np.ascontiguousarray(A[iu], dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sHHQ", _MAGIC, 1, _SYM_TAG[H.symmetry], N))
        fh.write(tri.tobytes())


def load_matrix(path) -> HermitianMatrix:
    with open(path, "rb") as fh:
        magic, version, tag, N = struct.unpack("<4sHHQ", fh.read(16))
        if magic != _MAGIC or version != 1:
            raise InvalidInput(f"not an rmtlab matrix file: {path}")
        tri = np.frombuffer(fh.read(), dtype="<c16")
    if tri.size != N * (N + 1) // 2:
        raise InvalidInput("truncated matrix payload")
    H = np.zeros((N, N), dtype=complex)
    H[np.triu_indices(N)] = tri
    H = _hermitize_from_upper(H)
    symmetry = _TAG_SYM[tag]
    if symmetry == "real-symmetric":
        H = H.real.copy()
    return HermitianMatrix(entries=H, symmetry=symmetry, provenance=None)
