"""The Bogolubov kernel F(x, y), its diagonal D(x) and the cutoff profiles.

    F(x, y) = sum_{l>=1} (2l+1) |A_l^in(y)|^2 |A_l^out(x)|^2 W~_nu(x,y)^2 / (x^2-y^2)^2

Near the diagonal W~/(x - y) is replaced by its analytic limit taken at the
midpoint, which removes the cancellation in W~/(x^2 - y^2).
"""
from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.special import gammaln

from .const import (
    A_FACTOR_MODES,
    A_FACTORS_MATCHED,
    A_FACTORS_UNIT,
    D_APPROX_OFFSET,
    D_ASYMPTOTE,
    DIAGONAL_EPS,
    F_APPROX_OFFSET,
    KERNEL_MAX_L,
    KERNEL_TAIL_RTOL,
    KERNEL_TAIL_TERMS,
    SINC_SCALE,
)
from .matching import MediumConfig, a_sq_table
from .special_functions import (
    BesselTable,
    bessel_table,
    diagonal_rows,
    pseudo_wronskian_rows,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutoffProfile:
    """Step cutoffs on the out (x) and in (y) frequencies."""

    x_star: float
    y_star: float

    def __post_init__(self) -> None:
        if not (self.x_star > 0.0 and self.y_star > 0.0):
            raise KernelDomainError(
                f"cutoffs must be positive, got x_star={self.x_star}, y_star={self.y_star}"
            )

    @classmethod
    def from_medium(
        cls,
        cfg: MediumConfig,
        x_star: float | None = None,
        y_star: float | None = None,
    ) -> CutoffProfile:
        """Cutoffs of cfg, with optional overrides."""
        return cls(
            x_star=cfg.x_star if x_star is None else x_star,
            y_star=cfg.y_star if y_star is None else y_star,
        )


@dataclass(frozen=True)
class KernelValue:
    """One truncated angular momentum sum."""

    value: float
    l_used: int
    truncation_error_estimate: float


def refractive_in(y, cfg: MediumConfig, cut: CutoffProfile):
    """n_gas_in up to and including y_star, 1 above."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0.0):
        raise KernelDomainError("refractive_in needs y >= 0")
    value = np.where(y <= cut.y_star, cfg.n_gas_in, 1.0)
    return value if value.ndim else float(value)


def refractive_out(x, cfg: MediumConfig, cut: CutoffProfile):
    """n_gas_out up to and including x_star, 1 above."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise KernelDomainError("refractive_out needs x >= 0")
    value = np.where(x <= cut.x_star, cfg.n_gas_out, 1.0)
    return value if value.ndim else float(value)


def default_l_max(cfg: MediumConfig) -> int:
    """Angular momentum cutoff round((n_out/n_liquid) R K)."""
    return max(1, round(cfg.x_star))


def d_approx(x):
    """(1/2pi^2) x^6 / (250 + x^6)."""
    x = np.asarray(x, dtype=float)
    x6 = x**6
    value = D_ASYMPTOTE * x6 / (D_APPROX_OFFSET + x6)
    return value if value.ndim else float(value)


def sinc_squared(x, y):
    """sin^2(3(x-y)/4) / (3(x-y)/4)^2, the transverse shape of the kernel."""
    u = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    # np.sinc(t) = sin(pi t)/(pi t)
    value = np.sinc(SINC_SCALE * u / math.pi) ** 2
    return value if value.ndim else float(value)


def f_factorized(x, y):
    """(1/2pi^2) (x+y)^6/(16000+(x+y)^6) sinc^2(3(x-y)/4)."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    s6 = (x + y) ** 6
    value = D_ASYMPTOTE * s6 / (F_APPROX_OFFSET + s6) * sinc_squared(x, y)
    return value if np.ndim(value) else float(value)


def _aligned_table(l_max: int, z: np.ndarray) -> BesselTable:
    """bessel_table evaluated once per distinct z and spread back over z."""
    values, inverse = np.unique(z, return_inverse=True)
    table = bessel_table(l_max, values)
    return BesselTable(
        z=z,
        j=table.j[:, inverse],
        n=table.n[:, inverse],
        j_underflow=table.j_underflow[:, inverse],
        n_overflow=table.n_overflow[:, inverse],
    )


def _tail_log_growth(ratio: float | None) -> float:
    # |A|^2 tends to N^(2nu) at large order; only growth matters for a majorant
    if ratio is None:
        return 0.0
    return max(0.0, math.log(ratio))


@dataclass(frozen=True)
class _Ratios:
    in_ratio: float | None = None
    out_ratio: float | None = None
    x_star: float | None = None
    y_star: float | None = None


def _kernel_sum(
    x: np.ndarray, y: np.ndarray, l_cap: int, ratios: _Ratios
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Truncated sums for paired 1-D arrays x, y > 0.

    Returns (value, l_used, tail_estimate, converged) per pair.
    """
    size = x.size
    terms = np.empty((l_cap, size))
    near = np.abs(x - y) < DIAGONAL_EPS * np.maximum(np.maximum(x, y), 1.0)
    far = ~near
    if far.any():
        xf, yf = x[far], y[far]
        w = pseudo_wronskian_rows(_aligned_table(l_cap, xf), _aligned_table(l_cap, yf))
        terms[:, far] = w**2 / (xf**2 - yf**2) ** 2
    if near.any():
        s = x[near] + y[near]
        d = diagonal_rows(_aligned_table(l_cap, 0.5 * s))
        terms[:, near] = d**2 / s**2

    l = np.arange(1, l_cap + 1)  # noqa: E741
    if ratios.in_ratio is not None:
        terms *= a_sq_table(l_cap, y, ratios.in_ratio, ratios.y_star)[1:]
        terms *= a_sq_table(l_cap, x, ratios.out_ratio, ratios.x_star)[1:]
    terms *= (2 * l + 1)[:, None]
    partial = np.cumsum(terms, axis=0)

    # majorant of every term with l > L, summed
    l_all = np.arange(1, l_cap + KERNEL_TAIL_TERMS + 1)
    nu = (l_all + 0.5)[:, None]
    growth = _tail_log_growth(ratios.in_ratio) + _tail_log_growth(ratios.out_ratio)
    log_term = (
        2.0 * nu * (np.log(x * y / 4.0) + growth)
        - 2.0 * gammaln(nu + 1.0)
        - 2.0 * gammaln(nu + 2.0)
        - math.log(4.0)
        + np.log(2.0 * l_all + 1.0)[:, None]
    )
    majorant = np.exp(np.minimum(log_term, 700.0))
    suffix = np.cumsum(majorant[::-1], axis=0)[::-1]
    tail = suffix[1 : l_cap + 1]

    in_regime = (l + 1.5)[:, None] > math.e * np.maximum(x, y)[None, :] / 2.0
    accepted = in_regime & (tail <= KERNEL_TAIL_RTOL * partial)
    converged = accepted.any(axis=0)
    l_used = np.where(converged, np.argmax(accepted, axis=0) + 1, l_cap)
    columns = np.arange(size)
    return (
        partial[l_used - 1, columns],
        l_used,
        tail[l_used - 1, columns],
        converged,
    )


def _initial_cap(x: np.ndarray, y: np.ndarray) -> int:
    reach = float(np.max(np.maximum(x, y)))
    return min(KERNEL_MAX_L, max(8, math.ceil(math.e * reach / 2.0) + 10))


def _evaluate(
    x: np.ndarray, y: np.ndarray, l_max: int | None, ratios: _Ratios
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if l_max is not None:
        if l_max < 1:
            raise KernelDomainError(f"l_max must be >= 1, got {l_max}")
        value, l_used, tail, _ = _kernel_sum(x, y, l_max, ratios)
        return value, l_used, tail

    cap = _initial_cap(x, y)
    while True:
        value, l_used, tail, converged = _kernel_sum(x, y, cap, ratios)
        if converged.all():
            return value, l_used, tail
        if cap >= KERNEL_MAX_L:
            worst = int(np.argmin(converged))
            raise KernelConvergenceError(
                f"angular momentum sum not converged by l={KERNEL_MAX_L} "
                f"at x={x[worst]:g}, y={y[worst]:g}"
            )
        cap = min(KERNEL_MAX_L, 2 * cap)
        _LOGGER.debug("Extending angular momentum sum to l=%d", cap)


def _ratios_for(
    a_factors: str, cfg: MediumConfig | None, cut: CutoffProfile | None
) -> _Ratios:
    if a_factors not in A_FACTOR_MODES:
        raise KernelDomainError(f"unknown A-factor mode {a_factors!r}")
    if a_factors == A_FACTORS_UNIT:
        return _Ratios()
    if cfg is None:
        raise KernelDomainError("A-factors need a MediumConfig")
    return _Ratios(
        in_ratio=cfg.index_ratio_in,
        out_ratio=cfg.index_ratio_out,
        x_star=None if cut is None else cut.x_star,
        y_star=None if cut is None else cut.y_star,
    )


def f_exact_grid(
    x,
    y,
    cfg: MediumConfig | None = None,
    l_max: int | None = None,
    *,
    a_factors: str = A_FACTORS_UNIT,
    cut: CutoffProfile | None = None,
) -> np.ndarray:
    """F on broadcast arrays x, y >= 0; the kernel vanishes when x or y is 0.

    With l_max None the sum runs until the tail majorant is below 1e-8 of
    the partial sum, and fails past l = 200.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x, y = x.ravel(), y.ravel()
    if np.any(x < 0.0) or np.any(y < 0.0):
        raise KernelDomainError("kernel arguments must be >= 0")
    out = np.zeros(x.size)
    positive = (x > 0.0) & (y > 0.0)
    if positive.any():
        ratios = _ratios_for(a_factors, cfg, cut)
        out[positive] = _evaluate(x[positive], y[positive], l_max, ratios)[0]
    return out.reshape(shape)


def f_exact(
    x: float,
    y: float,
    cfg: MediumConfig | None = None,
    l_max: int | None = None,
    *,
    a_factors: str = A_FACTORS_UNIT,
    cut: CutoffProfile | None = None,
) -> KernelValue:
    """F(x, y) at one point, with the truncation actually used."""
    if x <= 0.0 or y <= 0.0:
        raise KernelDomainError(f"f_exact needs x, y > 0, got ({x}, {y})")
    ratios = _ratios_for(a_factors, cfg, cut)
    value, l_used, tail = _evaluate(np.array([x]), np.array([y]), l_max, ratios)
    return KernelValue(float(value[0]), int(l_used[0]), float(tail[0]))


def d_exact_value(x: float, l_max: int | None = None) -> KernelValue:
    """D(x) = F(x, x) with unit A-factors."""
    if x <= 0.0:
        raise KernelDomainError(f"d_exact needs x > 0, got {x}")
    return f_exact(x, x, l_max=l_max)


def d_exact(x: float, l_max: int | None = None) -> float:
    """sum (2l+1) {(2l+1) J_{l+1/2} J_{l-1/2} - x [J_{l+1/2}^2 + J_{l-1/2}^2]}^2 / (4x^2)."""
    return d_exact_value(x, l_max).value


class KernelDomainError(Exception):
    """Raised for invalid kernel arguments or cutoffs."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status


class KernelConvergenceError(Exception):
    """Raised when the angular momentum sum does not converge by l = 200."""

    def __init__(self, status: str) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status
