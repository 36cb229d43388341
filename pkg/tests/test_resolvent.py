import itertools
import math

import numpy as np
import pytest

from rmtlab import ensemble as ens
from rmtlab import resolvent as rsv
from rmtlab import semicircle as sc
from rmtlab import spectral_stats as ss
from rmtlab.errors import EmptyMinor, InvalidIndices, InvalidParameter


def test_green_zero_matrix():
    r = rsv.green(np.zeros((3, 3)), 1j)
    assert np.abs(r.G - 1j * np.eye(3)).max() < 1e-14
    assert r.s == pytest.approx(1j)


def test_green_methods_agree():
    H = ens.sample_wigner(ens.gue(20), 3)
    z = 0.3 + 0.05j
    a = rsv.green(H, z, method="direct-solve").G
    b = rsv.green(H, z, method="eigen-reconstruction").G
    assert np.abs(a - b).max() < 1e-8


def test_green_spectral_decomposition():
    H = ens.sample_wigner(ens.gue(15), 4)
    z = -0.2 + 0.1j
    d = ss.decompose(H)
    expected = (d.vectors / (d.lambdas - z)) @ d.vectors.conj().T
    assert np.abs(rsv.green(H, z).G - expected).max() < 1e-8


def test_green_requires_upper_half_plane():
    with pytest.raises(InvalidParameter):
        rsv.green(np.eye(3), 1.0 - 0.1j)


def test_im_s_positive():
    H = ens.sample_wigner(ens.goe(25), 6)
    for z in (0.5 + 0.3j, -1.0 + 0.01j, 2.5 + 1.0j):
        assert rsv.green(H, z).s.imag > 0


def test_trace_route_matches_eigenvalue_route():
    H = ens.sample_wigner(ens.gue(30), 9)
    z = 0.7 + 0.02j
    r = rsv.green(H, z)
    lam = np.linalg.eigvalsh(np.asarray(H))
    assert abs(r.s - np.mean(1.0 / (lam - z))) < 1e-8


def test_minor_empty_and_labels():
    H = ens.sample_wigner(ens.goe(3), 1)
    full = rsv.minor(H, ())
    assert np.array_equal(full.matrix, np.asarray(H))
    sub = rsv.minor(H, [1])
    assert list(sub.labels) == [0, 2]
    A = np.asarray(H)
    assert np.array_equal(sub.matrix, A[np.ix_([0, 2], [0, 2])])
    with pytest.raises(EmptyMinor):
        rsv.minor(H, [0, 1, 2])


def test_minor_interlacing():
    H = np.asarray(ens.sample_wigner(ens.goe(5), 12))
    lam = np.sort(np.linalg.eigvalsh(H))
    mu = np.sort(np.linalg.eigvalsh(rsv.minor(H, [0]).matrix))
    for k in range(4):
        assert lam[k] <= mu[k] + 1e-12
        assert mu[k] <= lam[k + 1] + 1e-12


def test_ward_identity_random():
    H = ens.sample_wigner(ens.gue(50), 21)
    assert rsv.check_ward(H, 0.1 + 0.01j) < 1e-8


def test_ward_identity_closed_form():
    # H = diag(1, -1), z = i: both sides are 1/2 in each row
    H = np.diag([1.0, -1.0])
    G = rsv.green(H, 1j).G
    lhs = (np.abs(G) ** 2).sum(axis=1)
    assert np.abs(lhs - 0.5).max() < 1e-14
    assert rsv.check_ward(H, 1j) < 1e-14


def test_ward_identity_on_minor():
    H = np.asarray(ens.sample_wigner(ens.gue(6), 2))
    sub = rsv.minor(H, [2]).matrix
    assert rsv.check_ward(sub, 0.2 + 0.3j) < 1e-12


def test_ward_small_eta():
    H = ens.sample_wigner(ens.gue(40), 31)
    assert rsv.check_ward(H, 0.0 + 1e-4j) < 1e-8


def test_resolvent_identities_exhaustive_small():
    H = ens.sample_wigner(ens.goe(8), 5)
    z = 0.1 + 0.2j
    worst = 0.0
    for i, j, k in itertools.product(range(8), repeat=3):
        if k in (i, j):
            continue
        worst = max(worst, rsv.check_resolvent_identities(H, z, i, j, k))
    assert worst < 1e-9


def test_resolvent_identity_exhaustive_N50():
    # all admissible (i, j, k) at N = 50, vectorized: embed each minor's
    # Green function and compare G = G^(k) + G_.k G_k. / G_kk entrywise
    N = 50
    H = np.asarray(ens.sample_wigner(ens.gue(N), 7))
    z = 0.2 + 0.1j
    G = rsv.green(H, z, check=False).G
    worst = 0.0
    for k in range(N):
        Gk = rsv.green_minor(H, z, [k])
        recon = Gk + np.outer(G[:, k], G[k, :]) / G[k, k]
        keep = [i for i in range(N) if i != k]
        diff = np.abs(recon[np.ix_(keep, keep)] - G[np.ix_(keep, keep)])
        worst = max(worst, float(diff.max()))
    assert worst < 1e-8


def test_resolvent_identity_spot_N500():
    H = np.asarray(ens.sample_wigner(ens.gue(500), 70))
    assert rsv.check_resolvent_identities(H, 0.3 + 0.02j, 1, 400, 77) < 1e-8


def test_resolvent_identities_diagonal_matrix():
    H = np.diag([1.0, 2.0, 3.0, 4.0])
    assert rsv.check_resolvent_identities(H, 0.5j, 0, 1, 2) < 1e-14


def test_resolvent_identities_with_removed_set():
    H = ens.sample_wigner(ens.gue(9), 8)
    assert rsv.check_resolvent_identities(H, 0.4 + 0.1j, 0, 3, 5, T=[1, 7]) < 1e-9
    with pytest.raises(InvalidIndices):
        rsv.check_resolvent_identities(H, 0.4 + 0.1j, 1, 3, 5, T=[1])
    with pytest.raises(InvalidIndices):
        rsv.check_resolvent_identities(H, 0.4 + 0.1j, 2, 3, 2)


def test_schur_scalar_blocks():
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert rsv.check_schur(M, 1) < 1e-14


def test_schur_random_split():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    M += 10 * np.eye(10)  # keep blocks comfortably invertible
    assert rsv.check_schur(M, 3) < 1e-8


def test_schur_diagonal_form():
    H = ens.sample_wigner(ens.gue(12), 13)
    for i in (0, 5, 11):
        assert rsv.schur_diagonal_residual(H, 0.3 + 0.05j, i) < 1e-8


def test_fluctuation_decomposition_identity():
    H = ens.sample_wigner(ens.gue(30), 17)
    z = -0.4 + 0.09j
    r = rsv.green(H, z, check=False)
    for i in range(30):
        ft = rsv.fluctuation_terms(H, z, i)
        assert abs(1.0 / r.G[i, i] - (-z - r.s + ft.Y_i)) < 1e-8
        # algebraic rearrangement, exact
        assert abs((ft.Y_i - ft.A_i) - ft.Q_i_inv_Gii) < 1e-12


def test_fluctuation_vectorized_matches_single():
    H = ens.sample_wigner(ens.goe(14), 23)
    z = 0.8 + 0.3j
    A, Z, Y, Q, s = rsv.fluctuation_terms_all(H, z)
    for i in (0, 7, 13):
        ft = rsv.fluctuation_terms(H, z, i)
        assert abs(A[i] - ft.A_i) < 1e-10
        assert abs(Z[i] - ft.Z_i) < 1e-10
        assert abs(Y[i] - ft.Y_i) < 1e-10
        assert abs(Q[i] - ft.Q_i_inv_Gii) < 1e-10


def test_centred_fluctuation_has_zero_mean():
    # Monte Carlo mean of Q_i(1/G_ii) over 1e3 samples within 3 SE of zero
    z = 0.2 + 0.4j
    n = 1000
    spec = ens.gue(30)
    vals = np.empty(n, dtype=complex)
    for k in range(n):
        H = ens.sample_wigner(spec, 5000 + k)
        _, _, _, Q, _ = rsv.fluctuation_terms_all(H, z)
        vals[k] = Q[0]
    se = math.sqrt((vals.real.var(ddof=1) + vals.imag.var(ddof=1)) / n)
    assert abs(vals.mean()) <= 3 * se


def test_error_metrics_exact_cases():
    m = sc.stieltjes_m(0.5 + 0.1j)
    G = m * np.eye(7)
    em = rsv.error_metrics(G, m)
    assert em.Lambda == 0.0 and em.LambdaStar == 0.0
    assert em.Theta < 1e-15  # trace round-trip can cost one ulp


def test_error_metrics_ordering():
    rng = np.random.default_rng(2)
    for _ in range(20):
        H = ens.sample_wigner(ens.gue(12), int(rng.integers(1 << 30)))
        z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 1.0))
        em = rsv.error_metrics(rsv.green(H, z, check=False), sc.stieltjes_m(z))
        assert em.Theta <= em.Lambda + 1e-15
        assert em.LambdaStar <= em.Lambda + 1e-15


def test_lambda_tracks_psi_at_moderate_size():
    # bulk point: Lambda stays within a small multiple of Psi
    N, n = 200, 15
    z = complex(0.0, N ** -0.6)
    m = sc.stieltjes_m(z)
    psi = sc.psi(z, N)
    ratios = []
    for k in range(n):
        H = ens.sample_wigner(ens.gue(N), 900 + k)
        em = rsv.error_metrics(rsv.green(H, z, check=False), m)
        ratios.append(em.Lambda / psi)
    assert np.median(ratios) < N ** 0.2
