"""Green functions, minors, exact identity checks, and error metrics.

The identity checkers return the measured violation (a max over residuals)
rather than asserting; tests and the identity experiment bind tolerances.
Minors keep the original index labels: a minor Green function is returned
as a full-size array that is NaN on removed rows/columns, so formulas read
exactly as written.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .ensemble import as_matrix
from .errors import (
    EmptyMinor,
    InvalidIndices,
    InvalidParameter,
    NumericalFailure,
    SingularInput,
)

__all__ = [
    "Resolvent",
    "green",
    "Minor",
    "minor",
    "green_minor",
    "check_ward",
    "check_resolvent_identities",
    "check_schur",
    "schur_diagonal_residual",
    "FluctuationTerms",
    "fluctuation_terms",
    "fluctuation_terms_all",
    "ErrorMetrics",
    "error_metrics",
]


@dataclass(frozen=True)
class Resolvent:
    """G(z) = (H - z)^(-1) with its normalized trace s(z)."""

    z: complex
    G: np.ndarray
    s: complex
    method: str


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0:
        raise InvalidParameter(f"need Im z > 0, got {z}")
    return z


def green(H, z: complex, method: str = "direct-solve", check: bool = True) -> Resolvent:
    """Compute the Green function by direct solve or eigen-reconstruction.

    The residual contract ``max|(H - z)G - I| <= 1e-8 * (1 + 1/eta)`` is
    enforced when ``check`` is set; the tolerance scales with 1/eta because
    the conditioning of H - z does.
    """
    z = _check_z(z)
    A = as_matrix(H)
    N = A.shape[0]
    if method == "direct-solve":
        G = np.linalg.solve(A - z * np.eye(N), np.eye(N, dtype=complex))
    elif method == "eigen-reconstruction":
        w, U = np.linalg.eigh(A)
        G = (U / (w - z)) @ U.conj().T
    else:
        raise InvalidParameter(f"unknown method {method!r}")
    if check:
        resid = np.abs((A - z * np.eye(N)) @ G - np.eye(N)).max()
        if resid > 1e-8 * (1.0 + 1.0 / z.imag):
            w = np.linalg.eigvalsh(A)
            cond = (np.abs(w - z).max()) / np.abs(w - z).min()
            raise NumericalFailure(
                f"resolvent residual {resid:.3e} exceeds contract; cond(H-z)~{cond:.3e}")
    s = complex(np.trace(G) / N)
    return Resolvent(z=z, G=G, s=s, method=method)


@dataclass(frozen=True)
class Minor:
    """Submatrix with rows/columns in T removed, original labels retained."""

    matrix: np.ndarray
    labels: np.ndarray  # surviving original indices, sorted


def minor(H, T: Iterable[int]) -> Minor:
    A = as_matrix(H)
    N = A.shape[0]
    T = sorted(set(int(t) for t in T))
    if any(t < 0 or t >= N for t in T):
        raise InvalidIndices(f"removed indices out of range: {T}")
    keep = np.array([i for i in range(N) if i not in T], dtype=int)
    if keep.size == 0:
        raise EmptyMinor("cannot remove every index")
    return Minor(matrix=A[np.ix_(keep, keep)], labels=keep)


def green_minor(H, z: complex, T: Iterable[int] = ()) -> np.ndarray:
    """Green function of H^(T), embedded at the original labels.

    Returns an N x N array whose (i, j) entry is G^(T)_ij for surviving
    i, j and NaN on removed rows/columns.
    """
    z = _check_z(z)
    A = as_matrix(H)
    N = A.shape[0]
    sub = minor(A, T)
    k = sub.labels
    Gs = np.linalg.solve(sub.matrix - z * np.eye(k.size), np.eye(k.size, dtype=complex))
    out = np.full((N, N), np.nan + 0j)
    out[np.ix_(k, k)] = Gs
    return out


def check_ward(H, z: complex) -> float:
    """Max over i of |sum_j |G_ij|^2 - Im G_ii / eta|."""
    z = _check_z(z)
    G = green(H, z, check=False).G
    lhs = (np.abs(G) ** 2).sum(axis=1)
    rhs = G.diagonal().imag / z.imag
    return float(np.abs(lhs - rhs).max())


def check_resolvent_identities(H, z: complex, i: int, j: int, k: int,
                               T: Iterable[int] = ()) -> float:
    """Residuals of the two resolvent identities at indices (i, j, k).

    First identity: G^(T)_ij = G^(Tk)_ij + G^(T)_ik G^(T)_kj / G^(T)_kk,
    for i, j != k.  Second identity (i != j): G^(T)_ij equals
    -G^(T)_ii sum_{l not in Ti} H_il G^(Ti)_lj and the analogous sum over
    (Tj).  Returns the largest residual among the applicable identities.
    """
    z = _check_z(z)
    A = as_matrix(H)
    T = sorted(set(int(t) for t in T))
    for idx in (i, j, k):
        if idx in T:
            raise InvalidIndices(f"index {idx} is removed by T={T}")
    if k in (i, j):
        raise InvalidIndices("first identity needs i, j != k")

    GT = green_minor(A, z, T)
    GTk = green_minor(A, z, T + [k])
    res = [abs(GT[i, j] - GTk[i, j] - GT[i, k] * GT[k, j] / GT[k, k])]

    if i != j:
        keep_i = [l for l in range(A.shape[0]) if l not in T and l != i]
        keep_j = [l for l in range(A.shape[0]) if l not in T and l != j]
        GTi = green_minor(A, z, T + [i])
        GTj = green_minor(A, z, T + [j])
        sum_i = sum(A[i, l] * GTi[l, j] for l in keep_i)
        sum_j = sum(GTj[i, l] * A[l, j] for l in keep_j)
        res.append(abs(GT[i, j] + GT[i, i] * sum_i))
        res.append(abs(GT[i, j] + GT[j, j] * sum_j))
    return float(max(res))


def check_schur(M: np.ndarray, split: int) -> float:
    """Reconstruct the inverse of a block matrix from Schur complements.

    Splits M into blocks of sizes (split, N - split) and compares both
    Schur-complement forms of the block inverse against the direct dense
    inverse, entrywise.
    """
    M = np.asarray(M)
    N = M.shape[0]
    if not 0 < split < N:
        raise InvalidParameter(f"split must lie strictly inside (0, {N})")
    A, B = M[:split, :split], M[:split, split:]
    C, D = M[split:, :split], M[split:, split:]
    try:
        Minv = np.linalg.inv(M)
        Dinv = np.linalg.inv(D)
        Ainv = np.linalg.inv(A)
        SA = np.linalg.inv(A - B @ Dinv @ C)   # inverse of the A-side complement
        SD = np.linalg.inv(D - C @ Ainv @ B)
    except np.linalg.LinAlgError as exc:
        raise SingularInput(str(exc)) from exc

    form1 = np.block([[SA, -SA @ B @ Dinv],
                      [-Dinv @ C @ SA, Dinv @ C @ SA @ B @ Dinv + Dinv]])
    form2 = np.block([[Ainv @ B @ SD @ C @ Ainv + Ainv, -Ainv @ B @ SD],
                      [-SD @ C @ Ainv, SD]])
    return float(max(np.abs(form1 - Minv).max(), np.abs(form2 - Minv).max()))


def schur_diagonal_residual(H, z: complex, i: int) -> float:
    """Residual of the (1, N-1) Schur split applied to H - z:

    1/G_ii = H_ii - z - sum_{k,l != i} H_ik G^(i)_kl H_li.
    """
    z = _check_z(z)
    A = as_matrix(H)
    G = green(A, z, check=False).G
    Gi = green_minor(A, z, [i])
    keep = [l for l in range(A.shape[0]) if l != i]
    a = A[i, keep]
    quad = a @ Gi[np.ix_(keep, keep)] @ np.conj(a)
    return float(abs(1.0 / G[i, i] - (A[i, i] - z - quad)))


@dataclass(frozen=True)
class FluctuationTerms:
    """The decomposition 1/G_ii = -z - s + Y_i and its pieces.

    A_i is the self-energy correction, Z_i the fluctuating part of the
    quadratic form (centred by its conditional expectation given the minor),
    and Q_i_inv_Gii = H_ii - Z_i is the centred diagonal fluctuation.
    """

    i: int
    A_i: complex
    Z_i: complex
    Y_i: complex
    Q_i_inv_Gii: complex


def fluctuation_terms(H, z: complex, i: int) -> FluctuationTerms:
    """Compute (A_i, Z_i, Y_i, Q_i 1/G_ii) for a single index.

    This route inverts the minor directly; the vectorized
    :func:`fluctuation_terms_all` goes through the full Green function and
    serves as an independent cross-check.

    The conditional expectation of the quadratic form is its exact closed
    form N^-1 sum_{k != i} G^(i)_kk, valid when E|H_ik|^2 = 1/N off the
    diagonal.
    """
    z = _check_z(z)
    A = as_matrix(H)
    N = A.shape[0]
    G = green(A, z, check=False).G
    s = complex(np.trace(G) / N)
    Gi = green_minor(A, z, [i])
    keep = [l for l in range(N) if l != i]
    a = A[i, keep]
    Gsub = Gi[np.ix_(keep, keep)]
    quad = complex(a @ Gsub @ np.conj(a))
    p_part = complex(np.trace(Gsub) / N)
    Z = quad - p_part
    A_i = complex((G[:, i] @ G[i, :]) / (N * G[i, i]))
    Y = complex(A[i, i] + A_i - Z)
    return FluctuationTerms(i=i, A_i=A_i, Z_i=Z, Y_i=Y,
                            Q_i_inv_Gii=complex(A[i, i] - Z))


def fluctuation_terms_all(H, z: complex, G: np.ndarray | None = None):
    """Vectorized (A, Z, Y, Q_i 1/G_ii) for every index.

    Minor Green functions are eliminated through
    ``G^(i)_kl = G_kl - G_ki G_il / G_ii``, leaving one matrix product.
    Returns (A, Z, Y, Q, s) as arrays plus the trace.
    """
    z = _check_z(z)
    Am = as_matrix(H)
    N = Am.shape[0]
    if G is None:
        G = green(Am, z, check=False).G
    d = G.diagonal()
    s = complex(np.trace(G) / N)
    diagGG = np.einsum("ij,ji->i", G, G)
    A = diagGG / (N * d)

    Ht = Am - np.diag(np.diag(Am))  # zero the diagonal: sums run over k, l != i
    C = Ht @ G
    main = np.einsum("il,il->i", C, np.conj(Ht))
    left = C.diagonal()                       # sum_k H_ik G_ki
    right = np.einsum("il,il->i", G, np.conj(Ht))  # sum_l G_il conj(H_il)
    quad = main - left * right / d
    p_part = (np.trace(G) - d - (diagGG - d * d) / d) / N
    Z = quad - p_part
    Hdiag = np.diag(Am)
    Y = Hdiag + A - Z
    Q = Hdiag - Z
    return A, Z, Y, Q, s


@dataclass(frozen=True)
class ErrorMetrics:
    """Sup-norm error parameters of a resolvent against m(z)."""

    Lambda: float       # max_ij |G_ij - m delta_ij|
    LambdaStar: float   # max_{i != j} |G_ij|
    Theta: float        # |s - m|


def error_metrics(res, m: complex) -> ErrorMetrics:
    """Compute (Lambda, Lambda*, Theta) for a Resolvent or raw G array."""
    if isinstance(res, Resolvent):
        G, s = res.G, res.s
    else:
        G = np.asarray(res)
        s = complex(np.trace(G) / G.shape[0])
    D = G - m * np.eye(G.shape[0])
    off = np.abs(G - np.diag(G.diagonal()))
    return ErrorMetrics(Lambda=float(np.abs(D).max()),
                        LambdaStar=float(off.max()),
                        Theta=float(abs(s - m)))
