"""Matching of the static sphere modes at the bubble wall.

Inside the bubble a mode of order nu is A J_nu(kappa_gas r); outside it is
B J_nu(kappa_liq r) + C N_nu(kappa_liq r), normalized so that B^2 + C^2 = 1
and with overall amplitude Xi fixed by the liquid at infinity.

With y = kappa_gas R and w = N y (N = n_liquid/n_gas) the two wall
determinants are

    det1 = J_nu(y) w N_{nu-1}(w) - y J_{nu-1}(y) N_nu(w)
    det2 = J_nu(y) w J_{nu-1}(w) - y J_{nu-1}(y) J_nu(w)

and |A|^2 = (4/pi^2) / (det1^2 + det2^2).
"""
from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np

from .const import (
    DEFAULT_K_OBSERVED,
    DEFAULT_N_LIQUID,
    DEFAULT_RADIUS_NM,
    HBAR_C_EV_NM,
)
from .special_functions import BesselTable, ModeOrder, bessel_table

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MediumConfig:
    """Refractive indices and geometry of one bubble collapse."""

    n_gas_in: float
    n_gas_out: float
    n_liquid: float = DEFAULT_N_LIQUID
    radius: float = DEFAULT_RADIUS_NM
    k_observed: float = DEFAULT_K_OBSERVED

    def __post_init__(self) -> None:
        for name in ("n_gas_in", "n_gas_out", "n_liquid", "radius", "k_observed"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise MatchingDomainError(f"{name} must be finite and positive, got {value}")

    def __repr__(self) -> str:
        """Print Method."""
        return f"MediumConfig: n_in={self.n_gas_in:g}, n_out={self.n_gas_out:g}"

    @property
    def x_star(self) -> float:
        """(n_gas_out/n_liquid) R K."""
        return self.n_gas_out / self.n_liquid * self.radius * self.k_observed

    @property
    def y_star(self) -> float:
        """Tied to n_gas_out as well, x_star == y_star."""
        return self.x_star

    @property
    def index_ratio_in(self) -> float:
        """n_liquid / n_gas_in."""
        return self.n_liquid / self.n_gas_in

    @property
    def index_ratio_out(self) -> float:
        """n_liquid / n_gas_out."""
        return self.n_liquid / self.n_gas_out

    @property
    def delta_n_sq_ratio(self) -> float:
        """(n_in - n_out)^2 / (n_in n_out)."""
        return (self.n_gas_in - self.n_gas_out) ** 2 / (self.n_gas_in * self.n_gas_out)

    @property
    def photon_energy_scale_ev(self) -> float:
        """hbar c / (R n_out): photon energy per unit of x."""
        return HBAR_C_EV_NM / (self.radius * self.n_gas_out)


@dataclass(frozen=True)
class MatchingCoefficients:
    """|A|^2, B, C and |Xi| for one mode."""

    a_sq: float
    b: float
    c: float
    xi_abs: float


def _check_arguments(y, index_ratio: float) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise MatchingDomainError("matching needs y > 0")
    if not (index_ratio > 0.0 and math.isfinite(index_ratio)):
        raise MatchingDomainError(f"index ratio must be positive, got {index_ratio}")
    return y


def _wall_determinants(
    table_y: BesselTable, table_w: BesselTable
) -> tuple[np.ndarray, np.ndarray]:
    """det1, det2 for l = 0..l_max; shape (l_max + 1, len(y))."""
    jy, jy_prev = table_y.j_rows(l_min=0)
    jw, jw_prev = table_w.j_rows(l_min=0)
    nw, nw_prev = table_w.n_rows(l_min=0)
    y, w = table_y.z, table_w.z
    with np.errstate(invalid="ignore", over="ignore"):
        det1 = jy * w * nw_prev - y * jy_prev * nw
    det2 = jy * w * jw_prev - y * jy_prev * jw
    return det1, det2


def _a_sq_values(l_max: int, y: np.ndarray, index_ratio: float) -> np.ndarray:
    det1, det2 = _wall_determinants(bessel_table(l_max, y), bessel_table(l_max, index_ratio * y))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        a_sq = (4.0 / math.pi**2) / (det1**2 + det2**2)
    bad = ~(np.isfinite(a_sq) & np.isfinite(det1) & np.isfinite(det2))
    if bad.any():
        nu = (np.arange(l_max + 1) + 0.5)[:, None]
        limit = np.exp(np.minimum(2.0 * nu * math.log(index_ratio), 700.0))
        a_sq = np.where(bad, np.broadcast_to(limit, a_sq.shape), a_sq)
        _LOGGER.debug(
            "|A|^2 fell back to its small-y limit for %d entries (ratio=%g)",
            int(bad.sum()),
            index_ratio,
        )
    return a_sq


def a_sq_table(l_max: int, y, index_ratio: float, y_star: float | None = None) -> np.ndarray:
    """|A_nu|^2 for l = 0..l_max at every y; shape (l_max + 1, len(y)).

    Where N_nu(Ny) leaves the float range the small-argument limit N^(2nu)
    is used, which is what the determinant tends to there. Columns with
    y > y_star are identically 1.
    """
    y = _check_arguments(y, index_ratio)
    a_sq = np.ones((l_max + 1, y.size))
    below = np.full(y.size, True) if y_star is None else y <= y_star
    if below.any():
        values, inverse = np.unique(y[below], return_inverse=True)
        a_sq[:, below] = _a_sq_values(l_max, values, index_ratio)[:, inverse.ravel()]
    return a_sq


def coefficient_a_sq(order: ModeOrder, y: float, index_ratio: float) -> float:
    """|A_nu|^2 at gas-side argument y for index ratio n_liquid/n_gas."""
    return float(a_sq_table(order.l, [y], index_ratio)[order.l, 0])


def a_sq_with_cutoff(order: ModeOrder, y: float, index_ratio: float, y_star: float) -> float:
    """|A_nu|^2 below the frequency cutoff, identically 1 above it."""
    return float(a_sq_table(order.l, [y], index_ratio, y_star)[order.l, 0])


def _determinants_at(order: ModeOrder, y: float, index_ratio: float) -> tuple[float, float]:
    _check_arguments(y, index_ratio)
    det1, det2 = _wall_determinants(
        bessel_table(order.l, [y]), bessel_table(order.l, [index_ratio * y])
    )
    det1, det2 = float(det1[order.l, 0]), float(det2[order.l, 0])
    if not (math.isfinite(det1) and math.isfinite(det2)):
        raise MatchingDomainError(
            f"wall determinants overflow for l={order.l}, y={y:g}, ratio={index_ratio:g}"
        )
    return det1, det2


def coefficients_bc(order: ModeOrder, y: float, index_ratio: float) -> tuple[float, float]:
    """(B, C) on the liquid side, B^2 + C^2 = 1 and B > 0 in a homogeneous medium."""
    det1, det2 = _determinants_at(order, y, index_ratio)
    norm = math.hypot(det1, det2)
    return det1 / norm, -det2 / norm


def normalization_xi(kappa: float, n_liquid: float) -> float:
    """|Xi| = 1 / (sqrt(2 n_liquid) kappa)."""
    if kappa <= 0.0:
        raise MatchingDomainError(f"kappa must be positive, got {kappa}")
    if n_liquid <= 0.0:
        raise MatchingDomainError(f"n_liquid must be positive, got {n_liquid}")
    return 1.0 / (math.sqrt(2.0 * n_liquid) * kappa)


def matching_coefficients(
    order: ModeOrder,
    y: float,
    index_ratio: float,
    *,
    n_liquid: float = DEFAULT_N_LIQUID,
    radius: float = DEFAULT_RADIUS_NM,
) -> MatchingCoefficients:
    """All amplitudes of one mode; kappa is the liquid-side wavenumber N y / R."""
    det1, det2 = _determinants_at(order, y, index_ratio)
    norm_sq = det1 * det1 + det2 * det2
    norm = math.sqrt(norm_sq)
    return MatchingCoefficients(
        a_sq=(4.0 / math.pi**2) / norm_sq,
        b=det1 / norm,
        c=-det2 / norm,
        xi_abs=normalization_xi(index_ratio * y / radius, n_liquid),
    )


def matching_residual(order: ModeOrder, y: float, index_ratio: float) -> float:
    """Largest residual of the two wall conditions, relative to their largest term.

    A J_nu(y)   = B J_nu(w) + C N_nu(w)
    A y J'_nu(y) = B w J'_nu(w) + C w N'_nu(w)
    """
    det1, det2 = _determinants_at(order, y, index_ratio)
    norm = math.hypot(det1, det2)
    a, b, c = (2.0 / math.pi) / norm, det1 / norm, -det2 / norm
    w = index_ratio * y
    nu = order.nu
    table_y = bessel_table(order.l, [y])
    table_w = bessel_table(order.l, [w])
    row = order.l + 1
    jy, jy_prev = table_y.j[row, 0], table_y.j[row - 1, 0]
    jw, jw_prev = table_w.j[row, 0], table_w.j[row - 1, 0]
    nw, nw_prev = table_w.n[row, 0], table_w.n[row - 1, 0]

    value_terms = (a * jy, b * jw, c * nw)
    slope_terms = (
        a * (y * jy_prev - nu * jy),
        b * (w * jw_prev - nu * jw),
        c * (w * nw_prev - nu * nw),
    )
    residual = 0.0
    for first, second, third in (value_terms, slope_terms):
        scale = max(abs(first), abs(second), abs(third))
        if scale > 0.0:
            residual = max(residual, abs(first - second - third) / scale)
    return residual


def a_sq_asymptotic(order: ModeOrder, y, n_gas: float, n_liquid: float):
    """Large-y form 2 n_g n_l / (n_g^2 + n_l^2 + (n_l^2 - n_g^2) sin(2y - nu pi))."""
    y = np.asarray(y, dtype=float)
    value = (2.0 * n_gas * n_liquid) / (
        n_gas**2 + n_liquid**2 + (n_liquid**2 - n_gas**2) * np.sin(2.0 * y - order.nu * math.pi)
    )
    return value if value.ndim else float(value)


def a_sq_envelope(n_gas: float, n_liquid: float) -> tuple[float, float]:
    """Extremes of the large-y oscillation of |A|^2: (n_min/n_max, n_max/n_min)."""
    low, high = sorted((n_gas, n_liquid))
    return low / high, high / low


class MatchingDomainError(Exception):
    """Raised for non-positive arguments or indices in the matching problem."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status
