import numpy as np
import pytest
from scipy.special import airy as scipy_airy

from rmtlab.airy import ai, aip, airy_kernel


def test_against_reference_on_working_range():
    x = np.linspace(-10, 10, 2001)
    ref_ai, ref_aip, _, _ = scipy_airy(x)
    assert np.abs(ai(x) - ref_ai).max() < 1e-10
    assert np.abs(aip(x) - ref_aip).max() < 1e-10


def test_against_reference_far_field():
    x = np.linspace(-40, -10, 301)
    ref_ai, ref_aip, _, _ = scipy_airy(x)
    assert np.abs(ai(x) - ref_ai).max() < 1e-10
    assert np.abs(aip(x) - ref_aip).max() < 1e-10
    xp = np.linspace(10, 80, 141)
    ref = scipy_airy(xp)[0]
    assert np.nanmax(np.abs(ai(xp) / ref - 1)) < 1e-10


def test_defining_equation_by_finite_differences():
    # Ai'' = x Ai via 5-point central differences
    h = 0.01
    x = np.linspace(-9.5, 9.5, 391)
    stencil = (-ai(x - 2 * h) + 16 * ai(x - h) - 30 * ai(x)
               + 16 * ai(x + h) - ai(x + 2 * h)) / (12 * h * h)
    assert np.abs(stencil - x * ai(x)).max() < 1e-5


def test_derivative_consistency():
    # central-difference truncation is h^2/6 * Ai''' ~ 3.7e-5 at x = -9
    h = 0.005
    x = np.linspace(-9, 9, 181)
    central = (ai(x + h) - ai(x - h)) / (2 * h)
    assert np.abs(central - aip(x)).max() < 1e-4


def test_scalar_and_array_forms():
    assert isinstance(ai(0.0), float)
    assert ai(0.0) == pytest.approx(0.3550280538878172, abs=1e-12)
    assert aip(0.0) == pytest.approx(-0.2588194037928068, abs=1e-12)
    assert ai(np.array([0.0, 1.0])).shape == (2,)


def test_kernel_diagonal_limit():
    for x in (-2.0, 0.0, 1.5):
        expected = aip(x) ** 2 - x * ai(x) ** 2
        assert airy_kernel(x, x) == pytest.approx(expected, rel=1e-12)
        # off-diagonal limit approaches the diagonal value
        assert airy_kernel(x, x + 1e-7) == pytest.approx(expected, rel=1e-5)


def test_kernel_symmetry():
    x = np.array([-1.0, 0.0, 2.0])
    K = airy_kernel(x[:, None], x[None, :])
    assert np.abs(K - K.T).max() < 1e-14
