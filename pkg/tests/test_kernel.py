"""Test the Bogolubov kernel and its diagonal."""
import math

import numpy as np
import pytest

from bubble_casimir.const import (
    A_FACTORS_MATCHED,
    D_ASYMPTOTE,
    SINC_ZERO_SPACING,
)
from bubble_casimir.kernel import (
    CutoffProfile,
    KernelConvergenceError,
    KernelDomainError,
    d_approx,
    d_exact,
    d_exact_value,
    default_l_max,
    f_exact,
    f_exact_grid,
    f_factorized,
    refractive_in,
    refractive_out,
    sinc_squared,
)
from bubble_casimir.matching import MediumConfig


def test_cutoff_profile(default_medium):
    """Test the cutoffs default to the medium and accept overrides."""
    cut = CutoffProfile.from_medium(default_medium)
    assert cut.x_star == pytest.approx(15.0 / 1.3)
    assert cut.y_star == cut.x_star
    assert CutoffProfile.from_medium(default_medium, y_star=8.0).y_star == 8.0
    with pytest.raises(KernelDomainError):
        CutoffProfile(0.0, 1.0)


def test_refractive_profiles(default_medium):
    """Test the step profiles are inclusive at the cutoff."""
    cut = CutoffProfile(10.0, 5.0)
    assert refractive_in(5.0, default_medium, cut) == 2.0e4
    assert refractive_in(5.0001, default_medium, cut) == 1.0
    np.testing.assert_array_equal(
        refractive_out([0.0, 10.0, 10.5], MediumConfig(3.0, 2.0), cut), [2.0, 2.0, 1.0]
    )
    with pytest.raises(KernelDomainError):
        refractive_out(-1.0, default_medium, cut)


def test_default_l_max(default_medium):
    """Test the angular momentum cutoff rounds x_star."""
    assert default_l_max(default_medium) == 12


def test_factorized_diagonal_is_d_approx():
    """Test F_factorized(x, x) = D_approx(x)."""
    x = np.linspace(0.1, 20.0, 50)
    np.testing.assert_allclose(f_factorized(x, x), d_approx(x), rtol=1e-13)


def test_factorized_zeros():
    """Test the sinc^2 factor vanishes every 4 pi / 3 off the diagonal."""
    for k in (1, 2, 3):
        assert f_factorized(10.0, 10.0 + k * SINC_ZERO_SPACING) == pytest.approx(0.0, abs=1e-30)
    assert f_factorized(3.0, 5.0) == f_factorized(5.0, 3.0)


def test_d_approx_limits():
    """Test the fitted diagonal rises from 0 to 1/(2 pi^2)."""
    assert d_approx(0.0) == 0.0
    assert d_approx(1e3) == pytest.approx(D_ASYMPTOTE, rel=1e-12)


def test_symmetry_and_positivity():
    """Test F(x, y) = F(y, x) >= 0."""
    x = np.array([0.7, 2.0, 5.5, 9.0, 11.0])
    y = np.array([3.1, 2.5, 1.0, 9.4, 4.0])
    forward = f_exact_grid(x, y, l_max=14)
    np.testing.assert_allclose(forward, f_exact_grid(y, x, l_max=14), rtol=1e-12)
    assert np.all(forward >= 0.0)


def test_zero_on_the_axes():
    """Test the kernel vanishes when either argument is 0."""
    values = f_exact_grid([0.0, 3.0, 0.0], [2.0, 0.0, 0.0], l_max=10)
    np.testing.assert_array_equal(values, [0.0, 0.0, 0.0])
    with pytest.raises(KernelDomainError):
        f_exact(0.0, 1.0)
    with pytest.raises(KernelDomainError):
        f_exact_grid([-1.0], [1.0])


def test_smooth_across_the_diagonal():
    """Test no jump between the diagonal branch and the general branch."""
    x = 6.0
    inside = f_exact(x, x + 0.5e-3 * x).value
    outside = f_exact(x, x + 1.5e-3 * x).value
    on_diagonal = d_exact(x)
    assert inside == pytest.approx(on_diagonal, rel=1e-3)
    assert outside == pytest.approx(on_diagonal, rel=1e-3)
    assert outside == pytest.approx(inside, rel=1e-3)


def test_truncation_is_monotone_in_l_max():
    """Test a larger l_max never changes an accepted truncation."""
    small = d_exact_value(5.0, l_max=30)
    large = d_exact_value(5.0, l_max=60)
    assert small.l_used == large.l_used
    assert small.value == pytest.approx(large.value, rel=1e-13)
    assert small.truncation_error_estimate <= 1e-8 * small.value


def test_adaptive_matches_explicit():
    """Test the adaptive sum agrees with a generous fixed cutoff."""
    adaptive = d_exact_value(12.0)
    fixed = d_exact_value(12.0, l_max=80)
    assert adaptive.value == pytest.approx(fixed.value, rel=1e-8)


def test_explicit_l_max_truncates_silently():
    """Test an explicit l_max below convergence returns the partial sum."""
    partial = d_exact_value(20.0, l_max=5)
    assert partial.l_used == 5
    assert partial.value < d_exact(20.0)


def test_convergence_error():
    """Test the adaptive sum gives up past l = 200."""
    with pytest.raises(KernelConvergenceError):
        f_exact(150.0, 150.0)


def test_diagonal_asymptote():
    """Test D(40) is within 2% of 1/(2 pi^2)."""
    assert d_exact(40.0) == pytest.approx(D_ASYMPTOTE, rel=2e-2)


@pytest.mark.parametrize("x", [2.5, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0])
def test_diagonal_follows_fit(x):
    """Test D(x) is within 15% of the fitted form."""
    assert d_exact(x) == pytest.approx(d_approx(x), rel=0.15)


def test_diagonal_fit_at_low_x():
    """Test the fit is looser where D is still rising."""
    assert d_exact(2.0) == pytest.approx(d_approx(2.0), rel=0.25)


def test_factorization_error():
    """Test the factorized kernel against the exact one on [0, 12]^2."""
    axis = np.linspace(0.25, 12.0, 48)
    x, y = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))
    exact = f_exact_grid(x, y, l_max=40)
    factorized = f_factorized(x, y)
    relative = math.sqrt(np.sum((exact - factorized) ** 2) / np.sum(exact**2))
    assert relative < 0.12


def test_a_factors_in_a_homogeneous_medium():
    """Test the matched kernel equals the unit one when nothing is matched."""
    cfg = MediumConfig(1.3, 1.3)
    cut = CutoffProfile.from_medium(cfg)
    unit = f_exact_grid([2.0, 6.0], [3.0, 6.0], cfg, 20)
    matched = f_exact_grid([2.0, 6.0], [3.0, 6.0], cfg, 20, a_factors=A_FACTORS_MATCHED, cut=cut)
    np.testing.assert_allclose(matched, unit, rtol=1e-10)


def test_unknown_a_factor_mode():
    """Test the A-factor mode is validated."""
    with pytest.raises(KernelDomainError):
        f_exact(1.0, 2.0, a_factors="guess")
    with pytest.raises(KernelDomainError):
        f_exact(1.0, 2.0, a_factors=A_FACTORS_MATCHED)


def test_transverse_slice_is_sinc_squared():
    """Test F(3 + z, 3 - z) / F(3, 3) follows sin^2(3z/2) / (3z/2)^2 across the main lobe."""
    z = np.linspace(0.1, 1.5, 8)
    slice_ = f_exact_grid(3.0 + z, 3.0 - z, l_max=40) / f_exact(3.0, 3.0, l_max=40).value
    np.testing.assert_allclose(slice_, sinc_squared(3.0 + z, 3.0 - z), atol=0.12)
    np.testing.assert_allclose(sinc_squared(3.0 + z, 3.0 - z), np.sinc(1.5 * z / math.pi) ** 2)
    assert np.all(np.diff(slice_) < 0.0)
