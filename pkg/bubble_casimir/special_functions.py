"""Half-integer order Bessel and Neumann functions for the sphere modes.

Orders are always nu = l + 1/2, so everything reduces to the spherical
Bessel functions j_l and y_l:

    J_{l+1/2}(z) = sqrt(2z/pi) j_l(z)      N_{l+1/2}(z) = sqrt(2z/pi) y_l(z)

j_l is built by a Miller type downward recurrence (upward once z >= l_max,
where upward is stable), y_l always upward from the closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.special import gammaln

from .const import BESSEL_UNDERFLOW, MILLER_RESCALE, MILLER_START_MARGIN

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModeOrder:
    """Angular momentum l of a photon mode and its Bessel order nu = l + 1/2."""

    l: int  # noqa: E741

    def __post_init__(self) -> None:
        if int(self.l) != self.l or self.l < 0:
            raise BesselDomainError(
                f"angular momentum must be a non-negative integer, got {self.l}"
            )

    @property
    def nu(self) -> float:
        """Bessel order."""
        return self.l + 0.5

    @property
    def is_physical(self) -> bool:
        """There is no monopole radiation."""
        return self.l >= 1


@dataclass(frozen=True)
class BesselPair:
    """J and N of orders nu and nu - 1 at a single argument."""

    order: ModeOrder
    z: float
    j: float
    n: float
    j_prev: float
    n_prev: float
    saturated: bool = False

    @property
    def wronskian(self) -> float:
        """J_nu N_{nu-1} - J_{nu-1} N_nu, equal to 2/(pi z)."""
        return self.j * self.n_prev - self.j_prev * self.n

    @property
    def z_j_prime(self) -> float:
        """z J'_nu(z) = z J_{nu-1}(z) - nu J_nu(z)."""
        return self.z * self.j_prev - self.order.nu * self.j


@dataclass(frozen=True)
class BesselTable:
    """J_{l+1/2}(z) and N_{l+1/2}(z) for l = -1..l_max over a vector of z.

    Row ``l + 1`` holds order ``l + 1/2``, so row 0 is the nu - 1 partner
    of l = 0.
    """

    z: np.ndarray
    j: np.ndarray
    n: np.ndarray
    j_underflow: np.ndarray
    n_overflow: np.ndarray

    @property
    def l_max(self) -> int:
        """Highest angular momentum in the table."""
        return self.j.shape[0] - 2

    @property
    def saturated(self) -> bool:
        """True when any entry was clipped to 0 or left non-finite."""
        return bool(self.j_underflow.any() or self.n_overflow.any())

    def j_rows(self, l_min: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """(J_nu, J_{nu-1}) for l = l_min..l_max, shape (l_max - l_min + 1, len(z))."""
        return self.j[l_min + 1 :], self.j[l_min:-1]

    def n_rows(self, l_min: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """(N_nu, N_{nu-1}) for l = l_min..l_max."""
        return self.n[l_min + 1 :], self.n[l_min:-1]


def _as_positive_array(z) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(z, dtype=float))
    if arr.ndim != 1:
        arr = arr.ravel()
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise BesselDomainError("Bessel arguments must be finite and strictly positive")
    return arr


def _upward_spherical_j(l_max: int, z: np.ndarray) -> np.ndarray:
    rows = np.empty((l_max + 2, z.size))
    rows[0] = np.cos(z) / z
    rows[1] = np.sin(z) / z
    for l in range(l_max):  # noqa: E741
        rows[l + 2] = (2 * l + 1) / z * rows[l + 1] - rows[l]
    return rows


def _downward_spherical_j(l_max: int, z: np.ndarray) -> np.ndarray:
    start = l_max + MILLER_START_MARGIN
    # index i holds l = i - 1, up to l = start + 1
    work = np.zeros((start + 3, z.size))
    work[start + 1] = 1.0
    for l in range(start, 0, -1):  # noqa: E741
        work[l] = (2 * l + 1) / z * work[l + 1] - work[l + 2]
        big = np.abs(work[l]) > MILLER_RESCALE
        if big.any():
            work[l:, big] /= MILLER_RESCALE

    sin_z, cos_z = np.sin(z), np.cos(z)
    j0 = sin_z / z
    j1 = sin_z / z**2 - cos_z / z
    use_j0 = np.abs(j0) >= np.abs(j1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(use_j0, j0 / work[1], j1 / work[2])
    rows = work[: l_max + 2] * scale
    rows[0] = cos_z / z
    return rows


def _spherical_j(l_max: int, z: np.ndarray) -> np.ndarray:
    rows = np.empty((l_max + 2, z.size))
    upward = z >= l_max
    if upward.any():
        rows[:, upward] = _upward_spherical_j(l_max, z[upward])
    if not upward.all():
        rows[:, ~upward] = _downward_spherical_j(l_max, z[~upward])
    return rows


def _spherical_y(l_max: int, z: np.ndarray) -> np.ndarray:
    rows = np.empty((l_max + 2, z.size))
    rows[0] = np.sin(z) / z
    rows[1] = -np.cos(z) / z
    with np.errstate(over="ignore", invalid="ignore"):
        for l in range(l_max):  # noqa: E741
            rows[l + 2] = (2 * l + 1) / z * rows[l + 1] - rows[l]
    return rows


def spherical_to_cylinder(z, rows: np.ndarray) -> np.ndarray:
    """Scale spherical j_l or y_l rows to J_{l+1/2} or N_{l+1/2}: sqrt(2z/pi) f_l(z)."""
    z = np.asarray(z, dtype=float)
    return np.asarray(rows, dtype=float) * np.sqrt(2.0 * z / math.pi)


def bessel_table(l_max: int, z) -> BesselTable:
    """Tabulate J_{l+1/2} and N_{l+1/2} for l = -1..l_max at every z.

    J below 1e-300 is reported as exactly 0 and flagged; N beyond the float
    range is left as +-inf and flagged. Neither is ever NaN.
    """
    if l_max < 0:
        raise BesselDomainError(f"l_max must be >= 0, got {l_max}")
    z = _as_positive_array(z)

    j = spherical_to_cylinder(z, _spherical_j(l_max, z))
    n = spherical_to_cylinder(z, _spherical_y(l_max, z))

    j_underflow = np.abs(j) < BESSEL_UNDERFLOW
    j[j_underflow] = 0.0
    # only the very first orders can underflow through a genuine zero of sin/cos
    j_underflow[:2] = False

    n_overflow = ~np.isfinite(n)
    if n_overflow.any():
        # once N overflows every higher order does too, with the sign of the last finite row
        for row in range(1, n.shape[0]):
            bad = n_overflow[row] & ~np.isinf(n[row])
            if bad.any():
                n[row, bad] = np.copysign(np.inf, n[row - 1, bad])
        _LOGGER.debug(
            "N_nu overflow for %d of %d table entries (l_max=%d, min z=%g)",
            int(n_overflow.sum()),
            n.size,
            l_max,
            float(z.min()),
        )
    return BesselTable(z=z, j=j, n=n, j_underflow=j_underflow, n_overflow=n_overflow)


def bessel_jn_half(order: ModeOrder, z: float) -> BesselPair:
    """J_nu, N_nu, J_{nu-1}, N_{nu-1} at z for nu = l + 1/2."""
    table = bessel_table(order.l, [z])
    row = order.l + 1
    n, n_prev = table.n[row, 0], table.n[row - 1, 0]
    if not (math.isfinite(n) and math.isfinite(n_prev)):
        raise BesselSaturationError(
            f"N_{order.nu}({z:g}) exceeds the floating point range"
        )
    return BesselPair(
        order=order,
        z=float(z),
        j=float(table.j[row, 0]),
        n=float(n),
        j_prev=float(table.j[row - 1, 0]),
        n_prev=float(n_prev),
        saturated=bool(table.j_underflow[row - 1 : row + 1, 0].any()),
    )


def pseudo_wronskian_rows(table_x: BesselTable, table_y: BesselTable) -> np.ndarray:
    """W~_nu(x, y) for l = 1..l_max, elementwise over the two argument vectors.

    W~ = y J_nu(x) J_{nu-1}(y) - x J_{nu-1}(x) J_nu(y)
    """
    jx, jx_prev = table_x.j_rows()
    jy, jy_prev = table_y.j_rows()
    return table_y.z * jx * jy_prev - table_x.z * jx_prev * jy


def diagonal_rows(table: BesselTable) -> np.ndarray:
    """lim_{y->x} W~_nu(x, y)/(x - y) for l = 1..l_max."""
    j, j_prev = table.j_rows()
    l = np.arange(1, table.l_max + 1)[:, None]  # noqa: E741
    return table.z * (j**2 + j_prev**2) - 2.0 * (l + 0.5) * j * j_prev


def pseudo_wronskian(order: ModeOrder, x: float, y: float) -> float:
    """det[[J_nu(x), J_nu(y)], [x J'_nu(x), y J'_nu(y)]].

    Only the x < y orientation is evaluated; the other is its negative, so
    antisymmetry holds bit for bit.
    """
    if x <= 0.0 or y <= 0.0:
        raise BesselDomainError(f"pseudo-Wronskian needs x, y > 0, got ({x}, {y})")
    if x == y:
        return 0.0
    if x > y:
        return -pseudo_wronskian(order, y, x)
    table = bessel_table(order.l, [x, y])
    row = order.l + 1
    jx, jy = table.j[row]
    jx_prev, jy_prev = table.j[row - 1]
    return float(y * jx * jy_prev - x * jx_prev * jy)


def diagonal_kernel_term(order: ModeOrder, x: float) -> float:
    """lim_{y->x} W~_nu(x, y)/(x - y) = x [J_nu^2 + J_{nu-1}^2] - 2 nu J_nu J_{nu-1}."""
    if x <= 0.0:
        raise BesselDomainError(f"diagonal term needs x > 0, got {x}")
    pair = bessel_jn_half(order, x)
    return x * (pair.j**2 + pair.j_prev**2) - 2.0 * order.nu * pair.j * pair.j_prev


def large_order_majorant(nu, x: float, y: float):
    """|x^2 - y^2| (xy/4)^nu / (2 Gamma(nu+1) Gamma(nu+2)).

    Leading term of the small-argument series of W~_nu; vectorized over nu.
    """
    nu = np.asarray(nu, dtype=float)
    if x <= 0.0 or y <= 0.0:
        return np.zeros_like(nu) if nu.ndim else 0.0
    log_value = (
        nu * math.log(x * y / 4.0) - gammaln(nu + 1.0) - gammaln(nu + 2.0) - math.log(2.0)
    )
    value = abs(x * x - y * y) * np.exp(log_value)
    return value if nu.ndim else float(value)


def large_order_bound(order: ModeOrder, x: float, y: float) -> float:
    """Stirling form of the large-order estimate of |W~_nu(x, y)|.

    (|x^2-y^2| / (2 pi nu^1/2 (nu+1)^3/2)) (xy/(nu(nu+1)))^nu (e/2)^(2nu+1)
    """
    nu = order.nu
    if nu <= math.e * max(x, y) / 2.0:
        raise AsymptoticRegimeError(
            f"nu={nu} has not reached the asymptotic regime for max(x, y)={max(x, y)}"
        )
    if x <= 0.0 or y <= 0.0:
        return 0.0
    log_value = (
        nu * math.log(x * y / (nu * (nu + 1.0)))
        + (2.0 * nu + 1.0) * math.log(math.e / 2.0)
        - math.log(2.0 * math.pi * math.sqrt(nu) * (nu + 1.0) ** 1.5)
    )
    return abs(x * x - y * y) * math.exp(log_value)


class BesselDomainError(Exception):
    """Raised when a Bessel function is requested outside its domain."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status


class BesselSaturationError(Exception):
    """Raised when N_nu leaves the floating point range."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status


class AsymptoticRegimeError(Exception):
    """Raised when the large-order estimate is used outside its validity region."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status
