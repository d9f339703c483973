"""Constants for the bubble_casimir package."""
from __future__ import annotations

import math

from scipy import constants

DOMAIN = "bubble_casimir"

# Physical scenario defaults
DEFAULT_N_GAS_IN = 2.0e4
DEFAULT_N_GAS_OUT = 1.0
DEFAULT_N_LIQUID = 1.3
DEFAULT_RADIUS_NM = 500.0
# 2pi/(200 nm) rounded so that R K = 15 at R = 500 nm, the product the cutoffs are quoted with
DEFAULT_K_OBSERVED = 0.03  # rad/nm

# hbar*c in eV*nm, ~197.327
HBAR_C_EV_NM = constants.hbar * constants.c / constants.e * 1.0e9
SPEED_OF_LIGHT_NM_S = constants.c * 1.0e9

""" special functions """

BESSEL_UNDERFLOW = 1.0e-300
# downward recurrences start this many orders above the highest order requested
MILLER_START_MARGIN = 40
MILLER_RESCALE = 1.0e250
WRONSKIAN_TOLERANCE = 1.0e-10

""" kernel """

DIAGONAL_EPS = 1.0e-3
KERNEL_TAIL_RTOL = 1.0e-8
KERNEL_MAX_L = 200
KERNEL_TAIL_TERMS = 100
D_ASYMPTOTE = 1.0 / (2.0 * math.pi**2)
D_APPROX_OFFSET = 250.0
F_APPROX_OFFSET = 16000.0  # 2**6 * D_APPROX_OFFSET
SINC_SCALE = 0.75
SINC_ZERO_SPACING = math.pi / SINC_SCALE  # 4*pi/3
DELTA_WEIGHT = 4.0 * math.pi / 3.0

A_FACTORS_UNIT = "unit_a"
A_FACTORS_MATCHED = "with_a_factors"
A_FACTOR_MODES = (A_FACTORS_UNIT, A_FACTORS_MATCHED)

KERNEL_EXACT = "exact"
KERNEL_FACTORIZED = "factorized"
KERNEL_DELTA = "delta"
KERNEL_MODES = (KERNEL_EXACT, KERNEL_FACTORIZED, KERNEL_DELTA)

""" quadrature / spectrum """

DEFAULT_REL_TOL = 1.0e-6
DEFAULT_ABS_TOL = 1.0e-12
DEFAULT_MAX_SUBDIVISIONS = 2000
# scipy quad_vec panel rule, 10-point Gauss inside 21-point Kronrod
QUADRATURE_RULE = "gk21"
# inner (y) integrals run this much tighter than the outer tolerance
INNER_TOL_FACTOR = 0.1
# the smeared spectrum is followed this far past x_star (the 11.5 -> 14.5 plot range)
DEFAULT_X_SPILL = 3.0
DEFAULT_GRID_POINTS = 200
DEFAULT_KERNEL_RANGE = (0.0, 12.0)
DEFAULT_DIAGONAL_RANGE = (0.5, 40.0)
DEFAULT_WORKERS = 1

""" config keys """

CONF_N_GAS_IN = "n_gas_in"
CONF_N_GAS_OUT = "n_gas_out"
CONF_N_LIQUID = "n_liquid"
CONF_RADIUS = "radius_nm"
CONF_K_OBSERVED = "k_observed"
CONF_KERNEL_MODE = "kernel_mode"
CONF_L_MAX = "l_max"
CONF_X_STAR = "x_star"
CONF_Y_STAR = "y_star"
CONF_X_SPILL = "x_spill"
CONF_REL_TOL = "rel_tol"
CONF_ABS_TOL = "abs_tol"
CONF_MAX_SUBDIVISIONS = "max_subdivisions"
CONF_INCLUDE_TAILS = "include_tails"
CONF_TAIL_UPPER_BOUND = "tail_upper_bound"
CONF_GRID_POINTS = "grid_points"
CONF_X_MIN = "x_min"
CONF_X_MAX = "x_max"
CONF_WORKERS = "workers"
CONF_OUTPUT_PATH = "output_path"
CONF_LOG_LEVEL = "log_level"

LOG_LEVELS = ("debug", "info", "warning", "error")

""" cli """

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SPECTRUM_CSV_HEADER = ("x", "dn_dx", "dn_dx_infinite_volume", "frequency_phz")
KERNEL_CSV_HEADER = ("x", "y", "f_exact", "f_factorized")
DIAGONAL_CSV_HEADER = ("x", "d_exact", "d_approx", "l_used")
INFINITE_VOLUME_CSV_HEADER = ("x", "dn_dx_infinite_volume")

# (n_gas_in, n_gas_out, photons, <E>/hbar*Omega_max)
REFERENCE_SCENARIOS = (
    (2.0e4, 1.0, 1.06e6, 0.803),
    (71.0, 25.0, 1.00e6, 0.750),
    (68.0, 34.0, 1.06e6, 0.751),
    (9.0, 25.0, 0.955e6, 0.750),
    (1.0, 12.0, 0.98e6, 0.765),
)
TABLE_PHOTONS_RTOL = 0.05
TABLE_ENERGY_ATOL = 0.02

""" check suites """

CHECK_SEED = 20260419
# suite name -> maximum accepted error (relative unless stated in the suite)
SUITE_THRESHOLDS = {
    "wronskian": 1.0e-10,
    "recurrence": 1.0e-9,
    "reference_values": 1.0e-10,
    "pseudo_wronskian": 1.0e-12,
    "diagonal_limit": 1.0e-6,
    "matching_unit_norm": 1.0e-12,
    "matching_residual": 1.0e-10,
    "hankel_finite_integral": 1.0e-8,
    "spectral_delta": 1.0e-2,
    "hankel_limits": 1.0e-2,
    "mode_normalization": 1.0e-2,
    "delta_replacement": 2.0e-2,
}
