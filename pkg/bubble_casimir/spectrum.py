"""Photon spectrum, photon number and emitted energy of one collapse.

    dN/dx = ((n_in - n_out)^2 / (2 n_in n_out))
            * int dy ((n_in x^2 + n_out y^2) / (n_in x + n_out y))^2 F(x, y)

The factor 2 for the two polarizations is already folded into the
prefactor. With tails excluded the indices are the gas values on
[0, x_star + x_spill] x [0, y_star] and the integrand vanishes elsewhere;
with tails included the step profiles apply everywhere up to
tail_upper_bound.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math

import numpy as np

from .const import (
    D_ASYMPTOTE,
    DEFAULT_GRID_POINTS,
    DEFAULT_N_GAS_IN,
    DEFAULT_N_GAS_OUT,
    DEFAULT_WORKERS,
    DELTA_WEIGHT,
    INNER_TOL_FACTOR,
    KERNEL_DELTA,
    KERNEL_EXACT,
    KERNEL_FACTORIZED,
    KERNEL_MODES,
    REFERENCE_SCENARIOS,
    SINC_ZERO_SPACING,
    SPEED_OF_LIGHT_NM_S,
    SUITE_THRESHOLDS,
    TABLE_ENERGY_ATOL,
    TABLE_PHOTONS_RTOL,
)
from .kernel import (
    CutoffProfile,
    default_l_max,
    f_exact_grid,
    f_factorized,
    refractive_in,
    refractive_out,
    sinc_squared,
)
from .matching import MediumConfig
from .oracles import IdentityReport
from .quadrature import QuadratureResult, QuadratureSpec, integrate

_LOGGER = logging.getLogger(__name__)

# sinc^2 zeros on either side of the diagonal used as breakpoints
_SINC_BREAKPOINTS = 3


@dataclass(frozen=True)
class SpectrumResult:
    """dN/dx on a grid plus the integrated totals."""

    x_grid: np.ndarray
    dn_dx: np.ndarray
    total_photons: float
    mean_x_over_xstar: float
    energy_ev: float
    quadrature_error: float
    kernel_mode: str = KERNEL_FACTORIZED

    @property
    def mean_photon_energy_ev(self) -> float:
        """Average energy per photon."""
        if self.total_photons <= 0.0:
            return 0.0
        return self.energy_ev / self.total_photons


@dataclass(frozen=True)
class InfiniteVolumeTotals:
    """Closed-form photon number and mean frequency of the homogeneous limit."""

    total_photons: float
    mean_x_over_xstar: float


@dataclass(frozen=True)
class TableRow:
    """One reproduced scenario next to its reference values."""

    n_gas_in: float
    n_gas_out: float
    total_photons: float
    mean_x_over_xstar: float
    reference_photons: float
    reference_ratio: float

    @property
    def photons_deviation(self) -> float:
        """Relative deviation of the photon number."""
        return self.total_photons / self.reference_photons - 1.0

    @property
    def ratio_deviation(self) -> float:
        """Absolute deviation of <E>/hbar Omega_max."""
        return self.mean_x_over_xstar - self.reference_ratio

    @property
    def passed(self) -> bool:
        """Both deviations inside the acceptance band."""
        return (
            abs(self.photons_deviation) <= TABLE_PHOTONS_RTOL
            and abs(self.ratio_deviation) <= TABLE_ENERGY_ATOL
        )


def _check_mode(kernel_mode: str) -> None:
    if kernel_mode not in KERNEL_MODES:
        raise ValueError(f"kernel_mode must be one of {KERNEL_MODES}, got {kernel_mode!r}")


def x_upper(
    cut: CutoffProfile, quad: QuadratureSpec, kernel_mode: str = KERNEL_FACTORIZED
) -> float:
    """Upper end of the out-frequency range integrated over."""
    if quad.include_tails:
        return quad.tail_upper_bound
    if kernel_mode == KERNEL_DELTA:
        return min(cut.x_star, cut.y_star)
    return cut.x_star + quad.x_spill


def y_upper(cut: CutoffProfile, quad: QuadratureSpec) -> float:
    """Upper end of the in-frequency range integrated over."""
    return quad.tail_upper_bound if quad.include_tails else cut.y_star


def _indices(x, y, cfg: MediumConfig, cut: CutoffProfile, quad: QuadratureSpec):
    """(n_in, n_out, inside) at broadcast x, y."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if quad.include_tails:
        inside = (x <= quad.tail_upper_bound) & (y <= quad.tail_upper_bound)
        return refractive_in(y, cfg, cut), refractive_out(x, cfg, cut), inside
    inside = (x <= cut.x_star + quad.x_spill) & (y <= cut.y_star)
    return (
        np.full(x.shape, cfg.n_gas_in),
        np.full(x.shape, cfg.n_gas_out),
        inside,
    )


def _prefactor(x, y, n_in, n_out) -> np.ndarray:
    """((n_in-n_out)^2/(2 n_in n_out)) ((n_in x^2 + n_out y^2)/(n_in x + n_out y))^2."""
    denominator = n_in * x + n_out * y
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denominator > 0.0, (n_in * x * x + n_out * y * y) / denominator, 0.0)
    return (n_in - n_out) ** 2 / (2.0 * n_in * n_out) * ratio * ratio


def spectral_integrand(
    x,
    y,
    cfg: MediumConfig,
    cut: CutoffProfile,
    kernel_mode: str = KERNEL_FACTORIZED,
    *,
    quad: QuadratureSpec | None = None,
    l_max: int | None = None,
):
    """Integrand of dN/dx at broadcast (x, y); exactly 0 outside the integrated region."""
    _check_mode(kernel_mode)
    if kernel_mode == KERNEL_DELTA:
        raise ValueError("the delta kernel has no pointwise integrand; use dn_dx")
    quad = quad or QuadratureSpec()
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    n_in, n_out, inside = _indices(x, y, cfg, cut, quad)
    value = np.zeros(x.shape)
    active = inside & (n_in != n_out)
    if active.any():
        xs, ys = x[active], y[active]
        if kernel_mode == KERNEL_EXACT:
            kernel = f_exact_grid(xs, ys, cfg, l_max if l_max is not None else default_l_max(cfg))
        else:
            kernel = f_factorized(xs, ys)
        value[active] = _prefactor(xs, ys, n_in[active], n_out[active]) * kernel
    return value if value.ndim else float(value)


def _y_breakpoints(x: float, y_hi: float, y_star: float) -> list[float]:
    points = [y_star, x]
    for k in range(1, _SINC_BREAKPOINTS + 1):
        points.extend((x - k * SINC_ZERO_SPACING, x + k * SINC_ZERO_SPACING))
    return [p for p in points if 0.0 < p < y_hi]


def dn_dx(
    x: float,
    cfg: MediumConfig,
    cut: CutoffProfile,
    quad: QuadratureSpec | None = None,
    kernel_mode: str = KERNEL_FACTORIZED,
    *,
    l_max: int | None = None,
) -> QuadratureResult:
    """Photons per unit x, integrated over y, with its error estimate."""
    _check_mode(kernel_mode)
    quad = quad or QuadratureSpec()
    if x < 0.0:
        raise ValueError(f"dn_dx needs x >= 0, got {x}")

    if kernel_mode == KERNEL_DELTA:
        value = 0.0
        if x <= x_upper(cut, quad, kernel_mode):
            n_in, n_out, inside = _indices(x, x, cfg, cut, quad)
            if inside:
                value = float(_prefactor(x, x, n_in, n_out) * D_ASYMPTOTE * DELTA_WEIGHT)
        return QuadratureResult(value, 0.0, 1, 0, True)

    if x > x_upper(cut, quad, kernel_mode):
        return QuadratureResult(0.0, 0.0, 0, 0, True)

    y_hi = y_upper(cut, quad)
    result = integrate(
        lambda ys: spectral_integrand(x, ys, cfg, cut, kernel_mode, quad=quad, l_max=l_max),
        0.0,
        y_hi,
        points=_y_breakpoints(x, y_hi, cut.y_star),
        spec=quad,
    )
    _LOGGER.debug(
        "dN/dx(%g) = %g +- %g after %d evaluations",
        x,
        result.value,
        result.error,
        result.evaluations,
    )
    return result


def _map(func: Callable[[float], float], xs: Iterable[float], workers: int) -> list[float]:
    """Map in input order, on a thread pool when workers > 1."""
    xs = [float(x) for x in xs]
    if workers <= 1 or len(xs) < 2:
        return [func(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, xs))


def spectrum_grid(
    x_grid: Sequence[float],
    cfg: MediumConfig,
    cut: CutoffProfile,
    quad: QuadratureSpec | None = None,
    kernel_mode: str = KERNEL_FACTORIZED,
    *,
    workers: int = DEFAULT_WORKERS,
    l_max: int | None = None,
) -> np.ndarray:
    """dN/dx at every grid point; identical output for any number of workers."""
    quad = quad or QuadratureSpec()
    _LOGGER.debug("Evaluating dN/dx on %d points with %d workers", len(x_grid), workers)
    return np.array(
        _map(
            lambda x: dn_dx(x, cfg, cut, quad, kernel_mode, l_max=l_max).value,
            x_grid,
            workers,
        )
    )


def totals(
    cfg: MediumConfig,
    cut: CutoffProfile,
    quad: QuadratureSpec | None = None,
    kernel_mode: str = KERNEL_FACTORIZED,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    x_range: tuple[float, float] | None = None,
    workers: int = DEFAULT_WORKERS,
    l_max: int | None = None,
) -> SpectrumResult:
    """Photon number, mean frequency and emitted energy, plus dN/dx on a grid.

    The outer x integral carries N and the first moment together on one set
    of panels; inner integrals run INNER_TOL_FACTOR tighter.
    """
    _check_mode(kernel_mode)
    quad = quad or QuadratureSpec()
    inner = quad.tightened(INNER_TOL_FACTOR)
    x_hi = x_upper(cut, quad, kernel_mode)
    _LOGGER.info(
        "Integrating %r over x in [0, %g], y in [0, %g] with the %s kernel",
        cfg,
        x_hi,
        y_upper(cut, quad),
        kernel_mode,
    )

    def moments(x: float) -> np.ndarray:
        value = dn_dx(x, cfg, cut, inner, kernel_mode, l_max=l_max).value
        return np.array([value, x * value])

    points = [cut.x_star, cut.y_star]
    for k in range(1, _SINC_BREAKPOINTS + 1):
        points.extend((cut.y_star - k * SINC_ZERO_SPACING, cut.y_star + k * SINC_ZERO_SPACING))
    outer = integrate(moments, 0.0, x_hi, points=points, spec=quad, workers=workers)
    photons, first_moment = (float(v) for v in outer.value)
    mean_x = first_moment / photons if photons > 0.0 else 0.0

    lo, hi = x_range if x_range is not None else (0.0, x_hi)
    x_grid = np.linspace(lo, hi, grid_points)
    grid = spectrum_grid(x_grid, cfg, cut, quad, kernel_mode, workers=workers, l_max=l_max)
    result = SpectrumResult(
        x_grid=x_grid,
        dn_dx=grid,
        total_photons=photons,
        mean_x_over_xstar=mean_x / cut.x_star,
        energy_ev=first_moment * cfg.photon_energy_scale_ev,
        quadrature_error=outer.error,
        kernel_mode=kernel_mode,
    )
    _LOGGER.info(
        "N = %.6g, <E>/hbar Omega_max = %.4f (%d outer panels)",
        result.total_photons,
        result.mean_x_over_xstar,
        outer.subdivisions,
    )
    return result


def infinite_volume_dn_dx(x, cfg: MediumConfig, cut: CutoffProfile):
    """(1/3pi) ((n_in - n_out)^2/(n_in n_out)) x^2, up to min(x_star, y_star)."""
    x = np.asarray(x, dtype=float)
    x_cut = min(cut.x_star, cut.y_star)
    value = np.where(x <= x_cut, cfg.delta_n_sq_ratio * x * x / (3.0 * math.pi), 0.0)
    return value if value.ndim else float(value)


def infinite_volume_totals(cfg: MediumConfig, cut: CutoffProfile) -> InfiniteVolumeTotals:
    """N = (1/9pi) ((n_in - n_out)^2/(n_in n_out)) x_cut^3 and <x> = 3 x_cut / 4."""
    x_cut = min(cut.x_star, cut.y_star)
    return InfiniteVolumeTotals(
        total_photons=cfg.delta_n_sq_ratio * x_cut**3 / (9.0 * math.pi),
        mean_x_over_xstar=0.75 * x_cut / cut.x_star,
    )


def frequency_phz(x, cfg: MediumConfig):
    """nu = x c / (2 pi R n_out), in PHz."""
    return np.asarray(x, dtype=float) * SPEED_OF_LIGHT_NM_S / (
        2.0 * math.pi * cfg.radius * cfg.n_gas_out
    ) / 1.0e15


def photon_energy_ev(x, cfg: MediumConfig):
    """hbar c x / (R n_out), in eV."""
    return np.asarray(x, dtype=float) * cfg.photon_energy_scale_ev


def delta_replacement_check(
    cfg: MediumConfig | None = None, thresholds: dict[str, float] | None = None
) -> IdentityReport:
    """How well f_factorized acts as (4pi/3) D_asymptote delta(x - y).

    Four test functions g: the bare sinc^2 area centred inside the cutoffs
    of cfg, g = 1 where D has saturated, g = y^2 at large x, and a Gaussian
    straddling x that is wide compared to the sinc^2 width.
    """
    cfg = cfg or MediumConfig(DEFAULT_N_GAS_IN, DEFAULT_N_GAS_OUT)
    cut = CutoffProfile.from_medium(cfg)
    threshold = (thresholds or SUITE_THRESHOLDS).get(
        "delta_replacement", SUITE_THRESHOLDS["delta_replacement"]
    )
    spec = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-14, max_subdivisions=4000)

    def smeared(
        x: float,
        g: Callable[[float], float],
        lo: float,
        hi: float,
        shape: Callable[[float, float], float] = f_factorized,
    ) -> float:
        count = int((hi - lo) / SINC_ZERO_SPACING)
        points = x + np.arange(-count, count + 1) * SINC_ZERO_SPACING
        return integrate(lambda y: shape(x, y) * g(y), lo, hi, points=points, spec=spec).value

    target = DELTA_WEIGHT * D_ASYMPTOTE
    cases = {}

    x = 0.5 * min(cut.x_star, cut.y_star)
    cases["sinc_area"] = (
        smeared(x, lambda y: 1.0, x - 400.0, x + 400.0, shape=sinc_squared),
        DELTA_WEIGHT,
    )

    # g = 1 far out, where the D factor has saturated: |u| <= 400
    x = 1000.0
    cases["unit"] = (smeared(x, lambda y: 1.0, x - 400.0, x + 400.0), target)

    x = 60.0
    cases["quadratic"] = (smeared(x, lambda y: y * y, 0.0, 2.0 * x), target * x * x)

    x, sigma = 400.0, 40.0

    def gaussian(y: float) -> float:
        return math.exp(-((y - x) ** 2) / (2.0 * sigma * sigma))

    cases["gaussian"] = (smeared(x, gaussian, x - 8.0 * sigma, x + 8.0 * sigma), target)

    deviations = {name: abs(value / expected - 1.0) for name, (value, expected) in cases.items()}
    abs_errors = [abs(value - expected) for value, expected in cases.values()]
    worst = max(deviations.values())
    report = IdentityReport(
        name="delta_replacement",
        max_abs_error=max(abs_errors),
        max_rel_error=worst,
        samples=len(cases),
        passed=worst <= threshold,
        threshold=threshold,
        detail=", ".join(f"{name}: {d:.2e}" for name, d in deviations.items()),
    )
    _LOGGER.debug("%s", report)
    return report


def reproduce_table(
    quad: QuadratureSpec | None = None,
    kernel_mode: str = KERNEL_FACTORIZED,
    *,
    workers: int = DEFAULT_WORKERS,
) -> list[TableRow]:
    """The five reference scenarios with default geometry."""
    rows = []
    for n_in, n_out, photons, ratio in REFERENCE_SCENARIOS:
        cfg = MediumConfig(n_in, n_out)
        cut = CutoffProfile.from_medium(cfg)
        result = totals(cfg, cut, quad, kernel_mode, grid_points=0, workers=workers)
        rows.append(
            TableRow(
                n_gas_in=n_in,
                n_gas_out=n_out,
                total_photons=result.total_photons,
                mean_x_over_xstar=result.mean_x_over_xstar,
                reference_photons=photons,
                reference_ratio=ratio,
            )
        )
    return rows
