"""Test the photon spectrum and its totals."""
import numpy as np
import pytest

from bubble_casimir.const import KERNEL_DELTA, KERNEL_EXACT, KERNEL_FACTORIZED
from bubble_casimir.kernel import CutoffProfile
from bubble_casimir.matching import MediumConfig
from bubble_casimir.quadrature import QuadratureSpec
from bubble_casimir.spectrum import (
    TableRow,
    delta_replacement_check,
    dn_dx,
    frequency_phz,
    infinite_volume_dn_dx,
    infinite_volume_totals,
    photon_energy_ev,
    reproduce_table,
    spectral_integrand,
    spectrum_grid,
    totals,
    x_upper,
    y_upper,
)


def test_domain_bounds(default_cutoff):
    """Test the integrated x and y ranges of each mode."""
    quad = QuadratureSpec()
    assert x_upper(default_cutoff, quad) == pytest.approx(default_cutoff.x_star + 3.0)
    assert x_upper(default_cutoff, quad, KERNEL_DELTA) == pytest.approx(default_cutoff.x_star)
    assert y_upper(default_cutoff, quad) == default_cutoff.y_star
    tails = QuadratureSpec(include_tails=True, tail_upper_bound=25.0)
    assert x_upper(default_cutoff, tails) == 25.0
    assert y_upper(default_cutoff, tails) == 25.0


def test_integrand_support(default_medium, default_cutoff):
    """Test the integrand vanishes outside the integrated rectangle."""
    y_star = default_cutoff.y_star
    assert spectral_integrand(5.0, 5.0, default_medium, default_cutoff) > 0.0
    assert spectral_integrand(5.0, y_star + 0.1, default_medium, default_cutoff) == 0.0
    assert spectral_integrand(y_star + 3.5, 5.0, default_medium, default_cutoff) == 0.0
    with pytest.raises(ValueError):
        spectral_integrand(5.0, 5.0, default_medium, default_cutoff, KERNEL_DELTA)


def test_no_index_change_no_photons():
    """Test n_in = n_out produces exactly nothing."""
    cfg = MediumConfig(1.5, 1.5)
    cut = CutoffProfile.from_medium(cfg)
    for x in (0.5, 4.0, 9.0):
        assert dn_dx(x, cfg, cut).value == 0.0
    result = totals(cfg, cut, grid_points=5)
    assert result.total_photons == 0.0
    assert result.energy_ev == 0.0
    np.testing.assert_array_equal(result.dn_dx, np.zeros(5))


def test_negative_x(default_medium, default_cutoff):
    """Test x must be non-negative."""
    with pytest.raises(ValueError):
        dn_dx(-1.0, default_medium, default_cutoff)


def test_delta_kernel_is_the_infinite_volume_spectrum(default_medium, default_cutoff):
    """Test the delta kernel reproduces x^2 / (3 pi) per unit index contrast."""
    for x in (1.0, 5.0, 11.0):
        assert dn_dx(x, default_medium, default_cutoff, kernel_mode=KERNEL_DELTA).value == (
            pytest.approx(infinite_volume_dn_dx(x, default_medium, default_cutoff), rel=1e-12)
        )
    assert dn_dx(12.0, default_medium, default_cutoff, kernel_mode=KERNEL_DELTA).value == 0.0


def test_infinite_volume_totals(default_medium, default_cutoff):
    """Test numeric totals with the delta kernel against the closed form."""
    numeric = totals(default_medium, default_cutoff, kernel_mode=KERNEL_DELTA, grid_points=3)
    closed = infinite_volume_totals(default_medium, default_cutoff)
    assert numeric.total_photons == pytest.approx(closed.total_photons, rel=1e-6)
    assert numeric.mean_x_over_xstar == pytest.approx(0.75, rel=1e-6)
    assert closed.mean_x_over_xstar == pytest.approx(0.75)


def test_infinite_volume_curve(default_medium, default_cutoff):
    """Test the homogeneous curve drops to exactly 0 past the cutoff."""
    x = np.array([2.0, default_cutoff.x_star, default_cutoff.x_star + 1e-9])
    values = infinite_volume_dn_dx(x, default_medium, default_cutoff)
    assert values[0] == pytest.approx(default_medium.delta_n_sq_ratio * 4.0 / (3.0 * np.pi))
    assert values[1] > 0.0
    assert values[2] == 0.0


def test_unit_conversions(default_medium):
    """Test x = 11.5 is about 1.1 PHz and the energy scale is hbar c / R."""
    assert frequency_phz(11.5, default_medium) == pytest.approx(1.1, rel=1e-2)
    assert photon_energy_ev(1.0, default_medium) == pytest.approx(0.3947, rel=1e-3)


def test_finite_volume_follows_x_squared(default_medium, default_cutoff):
    """Test the smeared spectrum tracks the homogeneous one well below the cutoff."""
    x = np.linspace(4.5, 8.5, 5)
    finite = spectrum_grid(x, default_medium, default_cutoff)
    infinite = infinite_volume_dn_dx(x, default_medium, default_cutoff)
    np.testing.assert_allclose(finite, infinite, rtol=0.10)


def test_finite_volume_smears_the_edge(default_medium, default_cutoff):
    """Test the spectrum is still non-zero past the cutoff and small by x = 14.5."""
    x = np.linspace(0.5, 14.5, 29)
    finite = spectrum_grid(x, default_medium, default_cutoff)
    assert finite[-1] < 0.15 * finite.max()
    past_cutoff = x > default_cutoff.x_star
    assert np.all(finite[past_cutoff] > 0.0)
    assert np.all(np.diff(finite[x > 12.5]) < 0.0)


def test_workers_do_not_change_results(default_medium, default_cutoff):
    """Test the grid is identical for any number of workers."""
    x = np.linspace(1.0, 13.0, 6)
    serial = spectrum_grid(x, default_medium, default_cutoff, workers=1)
    threaded = spectrum_grid(x, default_medium, default_cutoff, workers=4)
    np.testing.assert_array_equal(serial, threaded)


def test_tails(default_medium, default_cutoff):
    """Test the tail region contributes past the cutoffs and stops at the bound."""
    quad = QuadratureSpec(include_tails=True, tail_upper_bound=20.0)
    assert dn_dx(16.0, default_medium, default_cutoff, quad).value > 0.0
    assert dn_dx(21.0, default_medium, default_cutoff, quad).value == 0.0


def test_totals_default_scenario(default_medium, default_cutoff):
    """Test the photon number and mean energy of the 2e4 -> 1 collapse."""
    result = totals(default_medium, default_cutoff, grid_points=4)
    assert result.total_photons == pytest.approx(1.06e6, rel=0.05)
    assert result.mean_x_over_xstar == pytest.approx(0.803, abs=0.02)
    assert result.energy_ev == pytest.approx(
        result.total_photons * result.mean_x_over_xstar * default_cutoff.x_star * 0.39465,
        rel=1e-3,
    )
    assert result.mean_photon_energy_ev == pytest.approx(result.energy_ev / result.total_photons)
    assert result.kernel_mode == KERNEL_FACTORIZED
    assert result.x_grid.shape == (4,)


def test_table_row():
    """Test the deviation bookkeeping of one reference row."""
    row = TableRow(71.0, 25.0, 1.03e6, 0.76, 1.00e6, 0.750)
    assert row.photons_deviation == pytest.approx(0.03)
    assert row.ratio_deviation == pytest.approx(0.01)
    assert row.passed
    assert not TableRow(71.0, 25.0, 1.10e6, 0.75, 1.00e6, 0.750).passed


def test_delta_replacement():
    """Test the factorized kernel acts as a smeared delta function."""
    report = delta_replacement_check()
    assert report.passed, str(report)
    assert report.samples == 4
    assert "sinc_area" in report.detail


def test_delta_replacement_follows_the_medium():
    """Test the sinc^2 area is checked inside the cutoffs of the medium given."""
    report = delta_replacement_check(MediumConfig(71.0, 25.0), {"delta_replacement": 1e-2})
    assert report.passed, str(report)
    assert report.threshold == 1e-2


def test_totals_match_the_trapezoid_rule(default_medium, default_cutoff):
    """Test N agrees with a trapezoid sum of dN/dx over the reported grid."""
    result = totals(default_medium, default_cutoff, grid_points=41)
    assert result.x_grid[0] == 0.0
    assert result.x_grid[-1] == pytest.approx(x_upper(default_cutoff, QuadratureSpec()))
    trapezoid = np.trapezoid(result.dn_dx, result.x_grid)
    assert trapezoid == pytest.approx(result.total_photons, rel=1e-2)


def test_swapping_in_and_out_keeps_the_photon_number():
    """Test N is unchanged when n_in and n_out trade places on a symmetric domain."""
    cut = CutoffProfile(10.0, 10.0)
    quad = QuadratureSpec(x_spill=0.0)
    forward = totals(MediumConfig(3.0, 2.0), cut, quad, grid_points=0)
    backward = totals(MediumConfig(2.0, 3.0), cut, quad, grid_points=0)
    assert forward.total_photons > 0.0
    assert backward.total_photons == pytest.approx(forward.total_photons, rel=1e-4)


def test_photons_grow_with_the_index_step():
    """Test N rises strictly from 0 as n_in moves away from n_out."""
    photons = [
        totals(MediumConfig(n_in, 1.3), CutoffProfile(10.0, 10.0), grid_points=0).total_photons
        for n_in in (1.30, 1.31, 1.32, 1.34)
    ]
    assert photons[0] == 0.0
    assert np.all(np.diff(photons) > 0.0)


@pytest.mark.slow
def test_reference_table(table_rows):
    """Test all five reference scenarios."""
    rows = reproduce_table()
    assert len(rows) == len(table_rows)
    for row, (n_in, n_out, photons, _) in zip(rows, table_rows):
        assert (row.n_gas_in, row.n_gas_out, row.reference_photons) == (n_in, n_out, photons)
        assert row.passed, (row.n_gas_in, row.n_gas_out, row.total_photons, row.mean_x_over_xstar)


@pytest.mark.slow
def test_exact_against_factorized(default_medium, default_cutoff):
    """Test the photon number with the exact kernel is within 10% of the factorized one."""
    quad = QuadratureSpec(rel_tol=1e-4)
    exact = totals(default_medium, default_cutoff, quad, KERNEL_EXACT, grid_points=2)
    factorized = totals(default_medium, default_cutoff, quad, KERNEL_FACTORIZED, grid_points=2)
    gap = exact.total_photons / factorized.total_photons - 1.0
    assert abs(gap) < 0.10
