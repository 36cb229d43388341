import math

import numpy as np
import pytest

from rmtlab import ensemble as ens
from rmtlab import semicircle as sc
from rmtlab import spectral_stats as ss
from rmtlab.errors import AccuracyFailure, InvalidEnergy, InvalidParameter


def test_decompose_diagonal():
    d = ss.decompose(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(d.lambdas, [3.0, 2.0, 1.0])
    perm = np.abs(d.vectors)
    assert np.allclose(perm, np.eye(3)[:, [0, 2, 1]])


def test_decompose_invariants():
    H = ens.sample_wigner(ens.gue(100), 31)
    d = ss.decompose(H)
    A = np.asarray(H)
    assert abs(d.lambdas.sum() - np.trace(A).real) < 1e-10
    assert abs((d.lambdas ** 2).sum() - np.trace(A @ A).real) < 1e-8 * abs(np.trace(A @ A))
    gram = d.vectors.conj().T @ d.vectors
    assert np.abs(gram - np.eye(100)).max() < 1e-10
    resid = A @ d.vectors - d.vectors * d.lambdas
    assert np.abs(resid).max() < 1e-10 * np.abs(d.lambdas).max()
    assert np.all(np.diff(d.lambdas) <= 0)


def test_normalized_trace_square():
    # N^-1 Tr H^2 = 1 + O(1/N) for Wigner samples
    vals = []
    for seed in range(20):
        H = np.asarray(ens.sample_wigner(ens.gue(150), seed))
        vals.append(np.trace(H @ H).real / 150)
    assert abs(np.mean(vals) - 1.0) < 0.05


def test_rigidity_zero_deviation():
    g = sc.typical_locations(50)
    rep = ss.rigidity_report(g.gamma, g)
    assert rep.dev.max() == 0.0
    assert rep.max_normalized == 0.0


def test_rigidity_dimension_check():
    g = sc.typical_locations(10)
    with pytest.raises(InvalidParameter):
        ss.rigidity_report(np.zeros(12), g)


def test_delocalization_flat_vector():
    N = 64
    vecs = np.full((N, 1), 1.0 / math.sqrt(N))
    d = ss.SpectralDecomposition(lambdas=np.zeros(1), vectors=vecs)
    stat = ss.delocalization_report(d)
    assert stat[0] == pytest.approx(1.0)


def test_counting_trivial_interval():
    lam = np.linalg.eigvalsh(np.asarray(ens.sample_wigner(ens.goe(40), 3)))
    rep = ss.counting_law(lam, [(-1e9, 1e9)])
    assert rep.mu[0] == 1.0
    assert rep.rho[0] == pytest.approx(1.0, abs=1e-15)
    assert rep.ndev[0] == pytest.approx(0.0, abs=1e-10)


def test_counting_monotone_pieces():
    lam = np.array([-1.0, 0.0, 1.0])
    rep = ss.counting_law(lam, [(-2, 0), (0, 2), (-2, 2)])
    assert np.allclose(rep.mu, [2 / 3, 2 / 3, 1.0])


def test_edge_statistics_symmetry():
    # H and -H are equidistributed: scaled top/bottom agree in law
    pool = [np.linalg.eigvalsh(np.asarray(ens.sample_wigner(ens.gue(80), s)))
            for s in range(200)]
    stats = ss.edge_statistics(pool)
    a = np.sort(stats.scaled_top)
    b = np.sort(stats.scaled_bottom)
    # two-sample KS distance
    allv = np.concatenate([a, b])
    ks = max(abs(np.searchsorted(a, v, side="right") / a.size
                 - np.searchsorted(b, v, side="right") / b.size) for v in allv)
    assert ks <= 0.15


def test_edge_summary_quantiles():
    pool = [np.linalg.eigvalsh(np.asarray(ens.sample_wigner(ens.gue(60), s)))
            for s in range(40)]
    q = ss.edge_statistics(pool).summary_quantiles()
    assert q["scaled_top"][0.05] <= q["scaled_top"][0.5] <= q["scaled_top"][0.95]
    assert set(q) == {"scaled_top", "scaled_bottom"}


def test_unfold_basics():
    lam = np.array([0.5, 0.1, 0.0, -0.3])
    u = ss.unfold(lam, 0.0, window=1e9)
    assert u.rho_E == pytest.approx(1 / math.pi)
    assert u.u[2] == 0.0
    # affine in lambda: doubling N with the eigenvalues held fixed doubles u
    # (pad with points far outside the window)
    u2 = ss.unfold(np.concatenate([lam, np.full(4, 1e6)]), 0.0, window=1e3)
    assert u2.N == 8
    assert np.allclose(np.sort(u2.u), 2.0 * np.sort(u.u))
    with pytest.raises(InvalidEnergy):
        ss.unfold(lam, 2.5, 10.0)


def test_unfolded_mean_spacing_near_one():
    # unit mean spacing at the band center (moderate size, 20 samples)
    spacings = []
    for seed in range(20):
        lam = np.linalg.eigvalsh(np.asarray(ens.sample_wigner(ens.gue(500), seed)))
        u = np.sort(ss.unfold(lam, 0.0, window=10.0).u)
        spacings.extend(np.diff(u))
    assert np.mean(spacings) == pytest.approx(1.0, abs=0.05)


def test_sine_kernel_prediction_values():
    assert ss.sine_kernel_prediction(0.0) == 0.0
    assert ss.sine_kernel_prediction(0.5) == pytest.approx(1 - (2 / math.pi) ** 2,
                                                           abs=1e-12)
    assert ss.sine_kernel_prediction(0.5) == pytest.approx(0.59472, abs=1e-5)
    assert abs(ss.sine_kernel_prediction(50.0) - 1.0) <= 1e-3
    assert ss.sine_kernel_prediction(1.0) == pytest.approx(1.0, abs=1e-12)


def test_two_point_estimate_poisson_control():
    # i.i.d. uniform points have flat pair correlation g = 1
    rng = np.random.default_rng(4)
    samples = [ss.UnfoldedSpectrum(E=0.0, rho_E=1 / math.pi, N=1000, window=10.0,
                                   u=np.sort(rng.uniform(-10, 10, 20)))
               for _ in range(400)]
    edges = np.arange(0.05, 3.05, 0.1)
    est = ss.two_point_estimate(samples, edges)
    sel = est.bins <= 2.5
    assert np.abs(est.values[sel] - 1.0).max() < 0.15


def test_two_point_estimate_validates_bins():
    with pytest.raises(InvalidParameter):
        ss.two_point_estimate([], [0.3, 0.2])


def test_gfc_statistic_scalar_case():
    t1, t2 = ss.gfc_statistic(np.zeros((1, 1)), 1j, 1j)
    assert t1 == pytest.approx(-1.0)
    assert t2 == pytest.approx(-1.0)


def test_gfc_statistic_conjugate_pair():
    H = ens.sample_wigner(ens.gue(25), 44)
    z = 0.3 + 0.01j
    t1, t2 = ss.gfc_statistic(H, z, np.conj(z))
    lam = np.linalg.eigvalsh(np.asarray(H))
    expected = np.sum(1.0 / np.abs(lam - z) ** 2) / 25 ** 2
    assert t2 == pytest.approx(expected, rel=1e-12)
    assert t2.imag == pytest.approx(0.0, abs=1e-12)
    assert t2.real > 0
    assert t1 == pytest.approx(abs(np.sum(1.0 / (lam - z))) ** 2 / 625, rel=1e-12)


def test_gfc_permutation_invariance():
    H = np.asarray(ens.sample_wigner(ens.gue(12), 3))
    perm = np.random.default_rng(0).permutation(12)
    P = np.eye(12)[perm]
    z, w = 0.1 + 0.02j, -0.2 + 0.02j
    a = ss.gfc_statistic(H, z, w)
    b = ss.gfc_statistic(P @ H @ P.T, z, w)
    assert abs(a[0] - b[0]) < 1e-12
    assert abs(a[1] - b[1]) < 1e-12


def test_tracy_widom_right_tail_and_monotone():
    assert ss.tracy_widom_f2(10.0) >= 1.0 - 1e-6
    grid = np.linspace(-5.0, 3.0, 17)
    vals = ss.tracy_widom_f2(grid, quad_order=40)
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[0] < 0.05 and vals[-1] > 0.99


def test_tracy_widom_self_convergence():
    # shipped default order agrees with twice the order to 1e-6 on [-5, 3]
    for s in np.linspace(-5.0, 3.0, 9):
        a = ss.tracy_widom_f2(float(s), quad_order=60, check=False)
        b = ss.tracy_widom_f2(float(s), quad_order=120, check=False)
        assert abs(a - b) <= 1e-6


def test_tracy_widom_reference_point():
    # frozen from the self-converged quadrature (orders 40/80/160 agree)
    assert ss.tracy_widom_f2(-2.0) == pytest.approx(0.41322414, abs=1e-6)


def test_tracy_widom_validation():
    with pytest.raises(InvalidParameter):
        ss.tracy_widom_f2(0.0, quad_order=5)
    # the convergence check trips at the minimum order deep in the left tail
    with pytest.raises(AccuracyFailure):
        ss.tracy_widom_f2(-5.0, quad_order=10, check=True)


def _heavy_sampler(rng, size):
    # symmetric Pareto-type law x = sign * u^(-0.24), standardized;
    # moments: E u^(-0.48) = 1/0.52, E u^(-0.96) = 25, E u^(-0.72) = 1/0.28
    s = np.where(rng.random(size) < 0.5, 1.0, -1.0)
    return s * rng.random(size) ** -0.24 * math.sqrt(0.52)


def test_delocalization_heavy_tail_contrast(capsys):
    # heavier-tailed entries concentrate eigenvector weight; reported only
    m4 = 25.0 * 0.52 ** 2
    table = {(k, l): 0.0 for k in range(5) for l in range(5 - k)}
    table[(0, 0)] = 1.0
    table[(1, 1)] = table[(2, 0)] = table[(0, 2)] = 1.0
    for kl in ((4, 0), (0, 4), (2, 2), (3, 1), (1, 3)):
        table[kl] = m4
    heavy = ens.custom_table("heavy", _heavy_sampler, table,
                             third_abs_moment=(1 / 0.28) * 0.52 ** 1.5)
    stats = {}
    for label, spec in (("gaussian", ens.goe(120)),
                        ("heavy", ens.wigner_custom(120, heavy))):
        sups = []
        for seed in range(5):
            d = ss.decompose(ens.sample_wigner(spec, 100 + seed))
            sups.append(ss.delocalization_report(d).max())
        stats[label] = float(np.median(sups))
    print(f"\nsup_k N|u(k)|^2 medians: gaussian {stats['gaussian']:.2f}, "
          f"heavy-tailed {stats['heavy']:.2f}")
    assert np.isfinite(stats["heavy"]) and np.isfinite(stats["gaussian"])
