import math

import numpy as np
import pytest

from rmtlab import ensemble as ens
from rmtlab import hs_calculus as hs
from rmtlab import spectral_stats as ss
from rmtlab.errors import ContourTooClose, InvalidCutoff, InvalidParameter


@pytest.fixture(scope="module")
def small_gue():
    H = ens.sample_wigner(ens.gue(8), 11)
    return H, ss.decompose(H)


def spectral_apply(decomp, f):
    return (decomp.vectors * f(decomp.lambdas)) @ decomp.vectors.conj().T


def test_smoothed_indicator_shape():
    f = hs.smoothed_indicator([-1.0, 1.0], 0.25)
    assert f(0.0) == 1.0
    assert f(-1.0) == 1.0 and f(1.0) == 1.0
    assert f(1.0 + 0.5) == 0.0           # two transition widths out
    assert f(-1.25 + 1e-12) > 0.0
    assert 0.0 < f(1.125) < 1.0
    assert f.support == (-1.25, 1.25)


def test_smoothed_indicator_derivative_bounds():
    eta = 0.3
    f = hs.smoothed_indicator([0.0, 2.0], eta)
    x = np.linspace(-1, 3, 20001)
    assert np.abs(f.deriv(1, x)).max() * eta <= 1.875 + 1e-9
    # quintic transition: measured sup|f''| * eta^2 ~ 5.77, under the 16 cap
    second_bound = np.abs(f.deriv(2, x)).max() * eta ** 2
    assert second_bound <= 16.0
    assert second_bound == pytest.approx(10.0 / math.sqrt(3.0), abs=1e-3)


def test_smoothed_indicator_derivatives_consistent():
    f = hs.smoothed_indicator([-0.5, 0.5], 0.4)
    x = np.linspace(-1.2, 1.2, 401)
    h = 1e-5
    for k in (1, 2):
        fd = (f.deriv(k - 1, x + h) - f.deriv(k - 1, x - h)) / (2 * h)
        assert np.abs(fd - f.deriv(k, x)).max() < 1e-3 * np.abs(f.deriv(k, x)).max() + 1e-6


def test_almost_analytic_values():
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    x = np.array([0.2, 1.2])
    assert np.allclose(hs.almost_analytic(f, 3, x, 0.0), f(x))
    y = 0.3
    expected = f(x) + 1j * y * f.deriv(1, x)
    assert np.allclose(hs.almost_analytic(f, 1, x, y), expected)


def test_dbar_by_finite_differences():
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    h = 1e-5
    for n in (1, 2):
        for x, y in [(1.1, 0.2), (-1.2, 0.4), (0.9, 0.05)]:
            dx = (hs.almost_analytic(f, n, x + h, y)
                  - hs.almost_analytic(f, n, x - h, y)) / (2 * h)
            dy = (hs.almost_analytic(f, n, x, y + h)
                  - hs.almost_analytic(f, n, x, y - h)) / (2 * h)
            naive = 0.5 * (dx + 1j * dy)
            exact = hs.almost_analytic_dbar(f, n, x, y)
            assert abs(naive - exact) < 1e-6


def test_dbar_cancellation_structure():
    # the n = 1 d-bar keeps only the iy f''/2 term; the f' pieces of the
    # two partial derivatives cancel each other
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    x, y = 1.15, 0.02
    d_x = f.deriv(1, x) + 1j * y * f.deriv(2, x)   # d/dx of f + iy f'
    i_dy = 1j * (1j * f.deriv(1, x))               # i d/dy of f + iy f'
    combined = 0.5 * (d_x + i_dy)
    assert abs(combined - 0.5 * 1j * y * f.deriv(2, x)) < 1e-14
    assert abs(d_x) > 5 * abs(combined)  # the cancelled pieces dominate


def test_cutoff_chi():
    chi = hs.CutoffChi(2.0, 3.0)
    assert chi(0.5 + 0.2j) == pytest.approx(1.0)
    assert chi(3.5 + 0.0j) == 0.0
    assert chi(0.0 + 1.5j) == 0.0  # beyond the y extent
    assert 0.0 < chi(2.5 + 0.1j) < 1.0
    # d-bar is bounded and supported on the transition shells
    z = np.array([0.1 + 0.1j, 2.5 + 0.2j, 0.3 + 0.8j])
    db = chi.dbar(z)
    assert db[0] == 0.0
    assert db[1] != 0.0 and db[2] != 0.0
    with pytest.raises(InvalidParameter):
        hs.CutoffChi(3.0, 2.0)


def test_hs_identity_function(small_gue):
    H, d = small_gue
    g = hs.smoothed_indicator([-2.4, 2.4], 0.5)  # plateau covering the spectrum
    out = hs.hs_evaluate(H, g, n=2, grid=hs.Grid2D(1200, 400))
    assert np.abs(out - np.eye(8)).max() < 1e-4


def test_hs_bump_matches_spectral_oracle(small_gue):
    H, d = small_gue
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    oracle = spectral_apply(d, f)
    out = hs.hs_evaluate(H, f, n=2, grid=hs.Grid2D(1200, 400))
    assert np.abs(out - oracle).max() < 1e-4


def test_hs_output_hermitian(small_gue):
    H, _ = small_gue
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    out = hs.hs_evaluate(H, f, grid=hs.Grid2D(300, 100))
    assert np.abs(out - out.conj().T).max() < 1e-12


def test_hs_grid_refinement_improves(small_gue):
    H, d = small_gue
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    oracle = spectral_apply(d, f)
    e_coarse = np.abs(hs.hs_evaluate(H, f, grid=hs.Grid2D(300, 100))
                      - oracle).max()
    e_fine = np.abs(hs.hs_evaluate(H, f, grid=hs.Grid2D(600, 200))
                    - oracle).max()
    assert e_fine <= 0.5 * e_coarse


def test_hs_cutoff_escape(small_gue):
    H, d = small_gue
    f = hs.smoothed_indicator([-1.0, 1.0], 0.5)
    tight = float(np.abs(d.lambdas).max()) * 0.5
    with pytest.raises(InvalidCutoff):
        hs.hs_evaluate(H, f, chi=hs.CutoffChi(tight, tight + 1.0))


def test_contour_polynomials(small_gue):
    H, d = small_gue
    A = np.asarray(H)
    assert np.abs(hs.contour_evaluate(H, lambda z: z, 4.0) - A).max() < 1e-8
    assert np.abs(hs.contour_evaluate(H, lambda z: z * z, 4.0) - A @ A).max() < 1e-8


def test_contour_exponential():
    H = ens.sample_wigner(ens.gue(10), 21)
    d = ss.decompose(H)
    expected = spectral_apply(d, np.exp)
    out = hs.contour_evaluate(H, np.exp, 4.0)
    assert np.abs(out - expected).max() < 1e-8


def test_contour_too_close():
    H = np.diag([0.0, 3.9995])
    with pytest.raises(ContourTooClose):
        hs.contour_evaluate(H, lambda z: z, 4.0)
    with pytest.raises(ContourTooClose):
        hs.contour_evaluate(np.diag([0.0, 5.0]), lambda z: z, 4.0)


def test_counting_via_smoothed_indicator():
    # |Tr f(H)/N - mu(I)| is at most the share of eigenvalues in the
    # transition shells, exactly by construction
    H = ens.sample_wigner(ens.goe(60), 9)
    lam = np.linalg.eigvalsh(np.asarray(H))
    a, b, eta = -0.8, 0.9, 0.15
    f = hs.smoothed_indicator([a, b], eta)
    trace_val = float(np.sum(f(lam))) / 60
    mu = np.mean((lam >= a) & (lam <= b))
    shell = np.mean(((lam > a - eta) & (lam < a)) | ((lam > b) & (lam < b + eta)))
    assert abs(trace_val - mu) <= shell + 1e-12
