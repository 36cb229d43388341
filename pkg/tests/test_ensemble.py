import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmtlab import ensemble as ens
from rmtlab.errors import (InvalidDimension, InvalidInput, InvalidParameter,
                           UnsupportedOrder, UnsupportedReference)

ALL_DISTS = [ens.gaussian_real(), ens.gaussian_complex(), ens.ternary_real(),
             ens.ternary_complex(), ens.bernoulli_sym()]


def empirical_moment(dist, k, l, n=10 ** 6, seed=1):
    x = dist.sampler(np.random.default_rng(seed), n)
    vals = x ** k * np.conj(x) ** l
    return vals.mean(), vals.std(ddof=1) / math.sqrt(n)


@pytest.mark.parametrize("dist", ALL_DISTS, ids=lambda d: d.name)
def test_moment_tables_match_samples(dist):
    # declared moments within 5 standard errors of 1e6-draw estimates
    for (k, l), declared in dist.moments.items():
        if k + l == 0:
            continue
        est, se = empirical_moment(dist, k, l)
        tol = 5 * max(se, 1e-9)
        assert abs(est - declared) <= tol, (k, l, est, declared)


@pytest.mark.parametrize("dist", ALL_DISTS, ids=lambda d: d.name)
def test_third_abs_moment(dist):
    x = dist.sampler(np.random.default_rng(2), 10 ** 6)
    vals = np.abs(x) ** 3
    se = vals.std(ddof=1) / 1e3
    assert abs(vals.mean() - dist.third_abs_moment) <= 5 * se


def test_ternary_complex_moments_by_finite_support_sum():
    # oracle: exact sum over the 9-point support of (a + ib)/sqrt(2)
    pts = np.array([math.sqrt(3), -math.sqrt(3), 0.0])
    prob = np.array([1 / 6, 1 / 6, 2 / 3])
    d = ens.ternary_complex()
    for (k, l), declared in d.moments.items():
        acc = 0.0 + 0.0j
        for a, pa in zip(pts, prob):
            for b, pb in zip(pts, prob):
                x = (a + 1j * b) / math.sqrt(2)
                acc += pa * pb * x ** k * np.conj(x) ** l
        assert abs(acc - declared) < 1e-12, (k, l)


def test_goe_entry_variances():
    # N E|H_ij|^2 = 1 + delta_ij, checked over 1e5 samples of a 2x2 matrix
    n = 10 ** 5
    spec = ens.goe(2)
    h11 = np.empty(n)
    h12 = np.empty(n)
    for i in range(n):
        H = ens.sample_wigner(spec, i).entries
        h11[i] = H[0, 0]
        h12[i] = H[0, 1]
    for vals, target in ((h11, 2.0 / 2), (h12, 1.0 / 2)):
        sq = vals ** 2
        se = sq.std(ddof=1) / math.sqrt(n)
        assert abs(sq.mean() - target) <= 5 * se


def test_determinism_bit_identical():
    spec = ens.gue(40)
    a = ens.sample_wigner(spec, 123).entries
    b = ens.sample_wigner(spec, 123).entries
    assert np.array_equal(a, b)
    c = ens.sample_wigner(spec, 124).entries
    assert not np.array_equal(a, c)


@pytest.mark.slow
def test_gue_offdiagonal_variance_N500():
    # N * Var(H_12) -> 1 over 1e4 sampled matrices
    n = 10 ** 4
    spec = ens.gue(500)
    vals = np.empty(n, dtype=complex)
    for i in range(n):
        vals[i] = ens.sample_wigner(spec, i).entries[0, 1]
    nvar = 500 * (np.abs(vals) ** 2).mean()
    assert abs(nvar - 1.0) < 0.05


def test_hermiticity_exact():
    for spec in (ens.goe(17), ens.gue(17)):
        H = ens.sample_wigner(spec, 5).entries
        assert np.abs(H - H.conj().T).max() == 0.0
    H = ens.sample_wigner(ens.goe(17), 5).entries
    assert not np.iscomplexobj(H)


def test_dimension_validation():
    with pytest.raises(InvalidDimension):
        ens.goe(1)


def test_erdos_renyi_basics():
    B = ens.sample_erdos_renyi(4, 0.5, center=True, seed=9).entries
    norm = 1.0 / math.sqrt(4 * 0.25)
    offdiag = B[np.triu_indices(4, k=1)]
    # two-point support after centering: (1-p)*norm or -p*norm
    for v in offdiag:
        assert min(abs(v - 0.5 * norm), abs(v + 0.5 * norm)) < 1e-15
    raw = ens.sample_erdos_renyi(30, 0.3, center=False, seed=2).entries
    assert np.abs(np.diag(raw)).max() == 0.0
    with pytest.raises(InvalidParameter):
        ens.sample_erdos_renyi(10, 1.5, center=False, seed=0)


def test_erdos_renyi_variance():
    # Bernoulli variance identity: Var(A_12) = p(1-p), so the normalized
    # entry has Var(B_12) = 1/N exactly; N * Var(B_12) -> 1 over samples.
    n, N, p = 10 ** 5, 8, 0.3
    vals = np.array([ens.sample_erdos_renyi(N, p, True, s).entries[0, 1]
                     for s in range(n)])
    sq = N * vals ** 2
    se = sq.std(ddof=1) / math.sqrt(n)
    assert abs(sq.mean() - 1.0) <= 5 * se


def test_four_moment_matched():
    t = ens.four_moment_matched(ens.gaussian_real())
    assert t.kind == "ternary-real"
    assert t.moment(2, 0) == 1.0
    assert t.moment(4, 0) == 3.0
    assert ens.verify_matching(t, ens.gaussian_real(), 4)
    tc = ens.four_moment_matched(ens.gaussian_complex())
    assert tc.kind == "ternary-complex"
    assert ens.verify_matching(tc, ens.gaussian_complex(), 4)
    with pytest.raises(UnsupportedReference):
        ens.four_moment_matched(ens.bernoulli_sym())


def test_verify_matching_orders():
    b = ens.bernoulli_sym()
    g = ens.gaussian_real()
    assert ens.verify_matching(b, g, 2).matched
    rep = ens.verify_matching(b, g, 4)
    assert not rep.matched
    assert rep.max_discrepancy == pytest.approx(2.0)  # 1 vs 3 at the fourth moment
    assert sum(rep.worst_moment) == 4
    with pytest.raises(UnsupportedOrder):
        ens.verify_matching(b, g, 5)


def test_telescoping_boundaries():
    Hp = ens.sample_wigner(ens.gue(6), 1)
    Hpp = ens.sample_wigner(ens.gue(6), 2)
    assert np.array_equal(ens.telescoping_interpolation(Hp, Hpp, 0).entries,
                          Hp.entries)
    top = 6 * 7 // 2
    assert np.array_equal(ens.telescoping_interpolation(Hp, Hpp, top).entries,
                          Hpp.entries)


def test_telescoping_rowmajor_order():
    # N = 3, gamma = 2: entries (1,1) and (1,2) come from the second matrix
    A = ens.HermitianMatrix(np.zeros((3, 3)), "real-symmetric")
    B = ens.HermitianMatrix(np.ones((3, 3)), "real-symmetric")
    H = ens.telescoping_interpolation(A, B, 2).entries
    expected = np.zeros((3, 3))
    expected[0, 0] = expected[0, 1] = expected[1, 0] = 1.0
    assert np.array_equal(H, expected)


@given(st.integers(1, 10 * 11 // 2))
@settings(max_examples=20, deadline=None)
def test_telescoping_adjacent_steps_differ_in_one_pair(gamma):
    Hp = ens.sample_wigner(ens.gue(10), 3)
    Hpp = ens.sample_wigner(ens.gue(10), 4)
    a = ens.telescoping_interpolation(Hp, Hpp, gamma - 1).entries
    b = ens.telescoping_interpolation(Hp, Hpp, gamma).entries
    diff = np.argwhere(a != b)
    assert 1 <= len(diff) <= 2
    (i, j) = diff[0]
    phi = ens.phi_rowmajor(10)
    assert phi(min(i, j), max(i, j)) == gamma


def test_delta_diagnostic():
    d = ens.delta_diagnostic(ens.gaussian_real(), 100)
    assert d == pytest.approx(2.0 * math.sqrt(2.0 / math.pi) / 10.0, abs=1e-12)
    assert d == pytest.approx(0.1596, abs=1e-4)
    assert ens.delta_diagnostic(ens.gaussian_real(), 400) == pytest.approx(d / 2)
    assert ens.delta_diagnostic(ens.ternary_real(), 900) == pytest.approx(
        math.sqrt(3) / 30, abs=1e-12)
    assert ens.delta_diagnostic(ens.ternary_real(), 900) == pytest.approx(0.0577, abs=1e-4)


def test_serialization_roundtrip(tmp_path):
    for spec in (ens.gue(9), ens.goe(9)):
        H = ens.sample_wigner(spec, 77)
        path = tmp_path / f"{spec.family}.rmt"
        ens.save_matrix(H, path)
        back = ens.load_matrix(path)
        assert back.symmetry == H.symmetry
        assert np.array_equal(np.asarray(back), np.asarray(H))
        assert path.stat().st_size == 16 + 16 * 9 * 10 // 2


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "bad.rmt"
    p.write_bytes(b"\x00" * 32)
    with pytest.raises(InvalidInput):
        ens.load_matrix(p)
