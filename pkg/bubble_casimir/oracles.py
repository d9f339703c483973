"""Independent checks of the special functions, the matching and the kernel.

Every suite returns an IdentityReport. Reference values come from
scipy.special / scipy.integrate rather than from this package, and
distributional identities are only ever tested smeared against explicit
test functions.
"""
from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass
import logging
import math
from typing import Any

import numpy as np
from scipy import integrate as scipy_integrate
from scipy import special

from .const import CHECK_SEED, DIAGONAL_EPS, SUITE_THRESHOLDS
from .kernel import d_exact, f_exact
from .matching import (
    MediumConfig,
    coefficients_bc,
    matching_residual,
    normalization_xi,
)
from .quadrature import QuadratureSpec, integrate
from .special_functions import (
    ModeOrder,
    bessel_table,
    diagonal_kernel_term,
    pseudo_wronskian,
)

_LOGGER = logging.getLogger(__name__)

HANKEL_PAIRS = ("jj", "nn", "jn")


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity suite."""

    name: str
    max_abs_error: float
    max_rel_error: float
    samples: int
    passed: bool
    threshold: float = 0.0
    detail: str = ""

    def __str__(self) -> str:
        """Print Method."""
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} {self.name}: samples={self.samples} "
            f"max_abs={self.max_abs_error:.3e} max_rel={self.max_rel_error:.3e} "
            f"threshold={self.threshold:.1e}"
        )
        return f"{text} ({self.detail})" if self.detail else text

    def as_dict(self) -> dict[str, Any]:
        """Plain record for JSON output."""
        return asdict(self)


def _report(
    name: str,
    abs_errors,
    rel_errors,
    thresholds: Mapping[str, float] | None,
    detail: str = "",
) -> IdentityReport:
    threshold = (thresholds or SUITE_THRESHOLDS).get(name, SUITE_THRESHOLDS[name])
    abs_errors = np.atleast_1d(np.asarray(abs_errors, dtype=float))
    rel_errors = np.atleast_1d(np.asarray(rel_errors, dtype=float))
    max_rel = float(np.max(rel_errors))
    report = IdentityReport(
        name=name,
        max_abs_error=float(np.max(abs_errors)),
        max_rel_error=max_rel,
        samples=int(rel_errors.size),
        passed=bool(np.isfinite(max_rel) and max_rel <= threshold),
        threshold=threshold,
        detail=detail,
    )
    _LOGGER.debug("%s", report)
    return report


""" special functions """


def wronskian_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 10_000
) -> IdentityReport:
    """|z (J_nu N_{nu-1} - J_{nu-1} N_nu) - 2/pi| / (2/pi) for nu <= 60.5, z in [0.1, 100]."""
    l = rng.integers(0, 61, samples)  # noqa: E741
    z = rng.uniform(0.1, 100.0, samples)
    table = bessel_table(60, z)
    columns = np.arange(samples)
    j, j_prev = table.j[l + 1, columns], table.j[l, columns]
    n, n_prev = table.n[l + 1, columns], table.n[l, columns]
    error = np.abs(z * (j * n_prev - j_prev * n) - 2.0 / math.pi)
    return _report("wronskian", error, error / (2.0 / math.pi), thresholds)


def recurrence_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 2_000
) -> IdentityReport:
    """J_{nu+1} = (2 nu / z) J_nu - J_{nu-1}, relative to the size of the terms."""
    l = rng.integers(0, 60, samples)  # noqa: E741
    z = rng.uniform(0.1, 100.0, samples)
    table = bessel_table(60, z)
    columns = np.arange(samples)
    j_next, j, j_prev = table.j[l + 2, columns], table.j[l + 1, columns], table.j[l, columns]
    lead = (2.0 * (l + 0.5) / z) * j
    error = np.abs(j_next - lead + j_prev)
    scale = np.maximum.reduce([np.abs(j_next), np.abs(lead), np.abs(j_prev)])
    keep = scale > 0.0
    return _report("recurrence", error[keep], error[keep] / scale[keep], thresholds)


def reference_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 400
) -> IdentityReport:
    """Tables against scipy.special.jv / yv for l <= 60, z in [1e-3, 1e4].

    Errors are relative to |J| (|N|) below the turning point and to the
    modulus sqrt(J^2 + N^2) in the oscillatory region.
    """
    l = rng.integers(0, 61, samples)  # noqa: E741
    z = 10.0 ** rng.uniform(-3.0, 4.0, samples)
    nu = l + 0.5
    ref_j, ref_n = special.jv(nu, z), special.yv(nu, z)
    usable = (np.abs(ref_j) > 1e-280) & (np.abs(ref_n) < 1e280) & np.isfinite(ref_n)
    l, z, nu = l[usable], z[usable], nu[usable]  # noqa: E741
    ref_j, ref_n = ref_j[usable], ref_n[usable]
    table = bessel_table(60, z)
    columns = np.arange(z.size)
    j, n = table.j[l + 1, columns], table.n[l + 1, columns]
    modulus = np.hypot(ref_j, ref_n)
    oscillating = z > nu
    scale_j = np.where(oscillating, modulus, np.abs(ref_j))
    scale_n = np.where(oscillating, modulus, np.abs(ref_n))
    error = np.maximum(np.abs(j - ref_j) / scale_j, np.abs(n - ref_n) / scale_n)
    abs_error = np.maximum(np.abs(j - ref_j), np.abs(n - ref_n))
    return _report("reference_values", abs_error, error, thresholds)


def pseudo_wronskian_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 300
) -> IdentityReport:
    """Exact antisymmetry and agreement with the J_{nu+1} form of W~."""
    rel_errors, abs_errors = [], []
    for _ in range(samples):
        order = ModeOrder(int(rng.integers(0, 21)))
        x, y = rng.uniform(0.5, 20.0, 2)
        forward, backward = pseudo_wronskian(order, x, y), pseudo_wronskian(order, y, x)
        table = bessel_table(order.l + 1, [x, y])
        row = order.l + 1
        (jx, jy), (jx_next, jy_next), (jx_prev, jy_prev) = (
            table.j[row],
            table.j[row + 1],
            table.j[row - 1],
        )
        alternative = x * jx_next * jy - y * jx * jy_next
        scale = max(abs(y * jx * jy_prev), abs(x * jx_prev * jy), abs(alternative))
        abs_errors.append(max(abs(forward + backward), abs(forward - alternative)))
        rel_errors.append(
            max(abs(forward + backward), abs(forward - alternative) / scale if scale else 0.0)
        )
    return _report("pseudo_wronskian", abs_errors, rel_errors, thresholds)


def diagonal_limit_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 60
) -> IdentityReport:
    """diagonal_kernel_term against Richardson-extrapolated central differences, h = 1e-4 x."""
    rel_errors, abs_errors = [], []
    for _ in range(samples):
        order = ModeOrder(int(rng.integers(0, 21)))
        x = float(rng.uniform(0.5, 20.0))
        h = 1e-4 * x

        def central(step: float, x: float = x, order: ModeOrder = order) -> float:
            return pseudo_wronskian(order, x + step, x - step) / (2.0 * step)

        estimate = (4.0 * central(h / 2.0) - central(h)) / 3.0
        exact = diagonal_kernel_term(order, x)
        table = bessel_table(order.l, [x])
        j, j_prev = table.j[order.l + 1, 0], table.j[order.l, 0]
        scale = x * (j * j + j_prev * j_prev) + abs(2.0 * order.nu * j * j_prev)
        abs_errors.append(abs(estimate - exact))
        rel_errors.append(abs(estimate - exact) / scale)
    return _report("diagonal_limit", abs_errors, rel_errors, thresholds)


""" matching """


def matching_suites(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 1_000
) -> list[IdentityReport]:
    """B^2 + C^2 = 1 and the wall-condition residual for l <= 20, y in (0, 30], N in [0.5, 3]."""
    norm_errors, residuals = [], []
    for _ in range(samples):
        order = ModeOrder(int(rng.integers(1, 21)))
        y = float(rng.uniform(1e-6, 30.0))
        ratio = float(rng.uniform(0.5, 3.0))
        b, c = coefficients_bc(order, y, ratio)
        norm_errors.append(abs(b * b + c * c - 1.0))
        residuals.append(matching_residual(order, y, ratio))
    return [
        _report("matching_unit_norm", norm_errors, norm_errors, thresholds),
        _report("matching_residual", residuals, residuals, thresholds),
    ]


""" Hankel identities """


def _cylinder_rows(pair_member: str, l: int, z) -> tuple[np.ndarray, np.ndarray]:  # noqa: E741
    table = bessel_table(l, z)
    values = table.j if pair_member == "j" else table.n
    return values[l + 1], values[l]


def hankel_boundary_form(order: ModeOrder, k1: float, k2, radius: float, pair: str = "jj"):
    """R [k1 C'(k1 R) D(k2 R) - k2 C(k1 R) D'(k2 R)] / (k2^2 - k1^2) for C, D in {J, N}.

    For pair "jj" this is the integral of r J(k1 r) J(k2 r) over [0, R].
    Vectorized over k2; near k1 = k2 the removable singularity of "jj" and
    "nn" is replaced by its limit at the midpoint.
    """
    if pair not in HANKEL_PAIRS:
        raise ValueError(f"pair must be one of {HANKEL_PAIRS}, got {pair!r}")
    k2 = np.asarray(k2, dtype=float)
    scalar = k2.ndim == 0
    k2 = np.atleast_1d(k2)
    if k1 <= 0.0 or np.any(k2 <= 0.0) or radius <= 0.0:
        raise ValueError("k1, k2 and R must be positive")
    nu = order.nu
    a, b = k1 * radius, k2 * radius
    c, c_prev = (row[0] for row in _cylinder_rows(pair[0], order.l, [a]))
    d, d_prev = _cylinder_rows(pair[1], order.l, b)
    numerator = a * c_prev * d - b * c * d_prev
    with np.errstate(divide="ignore", invalid="ignore"):
        value = numerator / (k2 * k2 - k1 * k1)

    if pair[0] == pair[1]:
        # absolute band: at large kR the midpoint limit degrades like (a - b)^2
        near = np.abs(a - b) < DIAGONAL_EPS
        if near.any():
            mid = 0.5 * (a + b[near])
            m, m_prev = _cylinder_rows(pair[0], order.l, mid)
            limit = mid * (m * m + m_prev * m_prev) - 2.0 * nu * m * m_prev
            value[near] = radius * limit / (k1 + k2[near])
    return float(value[0]) if scalar else value


def hankel_finite_integral(order: ModeOrder, k1: float, k2: float, radius: float) -> float:
    """Closed form of the integral of r J_nu(k1 r) J_nu(k2 r) over [0, R]."""
    return hankel_boundary_form(order, k1, k2, radius, "jj")


def _quad_hankel(nu: float, k1: float, k2: float, radius: float) -> tuple[float, float]:
    """(integral, integral of the absolute value) by scipy quad."""

    def integrand(r: float) -> float:
        return r * special.jv(nu, k1 * r) * special.jv(nu, k2 * r)

    kwargs = {"epsabs": 0.0, "epsrel": 1e-13, "limit": 1000}
    value = scipy_integrate.quad(integrand, 0.0, radius, **kwargs)[0]
    scale = scipy_integrate.quad(lambda r: abs(integrand(r)), 0.0, radius, **kwargs)[0]
    return value, scale


def hankel_integral_suite(
    rng: np.random.Generator, thresholds: Mapping[str, float] | None = None, samples: int = 100
) -> IdentityReport:
    """Closed form against scipy quadrature for nu <= 21/2, k in [0.5, 5], R in [1, 20].

    Every fifth case has k1 = k2, exercising the diagonal path. Errors are
    relative to the integral of |r J J|, which never vanishes.
    """
    abs_errors, rel_errors = [], []
    for index in range(samples):
        order = ModeOrder(int(rng.integers(0, 11)))
        k1, k2 = rng.uniform(0.5, 5.0, 2)
        if index % 5 == 0:
            k2 = k1
        radius = float(rng.uniform(1.0, 20.0))
        closed = hankel_finite_integral(order, float(k1), float(k2), radius)
        value, scale = _quad_hankel(order.nu, float(k1), float(k2), radius)
        abs_errors.append(abs(closed - value))
        rel_errors.append(abs(closed - value) / scale)
    return _report("hankel_finite_integral", abs_errors, rel_errors, thresholds)


def _gaussian(center: float, sigma: float) -> Callable[[float], float]:
    return lambda k: np.exp(-((k - center) ** 2) / (2.0 * sigma * sigma))


def hankel_limit_checks(
    thresholds: Mapping[str, float] | None = None,
    k1: float = 2.0,
    sigma: float = 0.2,
    radii: tuple[float, ...] = (125.0, 250.0, 500.0),
    order: ModeOrder = ModeOrder(1),
) -> IdentityReport:
    """Large-R limits of the boundary forms, smeared with a Gaussian in k2.

    "jj" and "nn" tend to delta(k1 - k2)/k1, "jn" to zero (as a principal
    value). Reported errors are those at the largest radius, relative to 1/k1.
    """
    spec = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12, max_subdivisions=4000)
    g = _gaussian(k1, sigma)
    width = 8.0 * sigma
    expected = {"jj": 1.0 / k1, "nn": 1.0 / k1, "jn": 0.0}
    deviations = {pair: [] for pair in HANKEL_PAIRS}
    for radius in radii:
        for pair in HANKEL_PAIRS:
            # symmetric pairing around k1 turns the jn pole into a principal value
            def paired(u: float, pair: str = pair, radius: float = radius) -> float:
                upper = g(k1 + u) * hankel_boundary_form(order, k1, k1 + u, radius, pair)
                lower = g(k1 - u) * hankel_boundary_form(order, k1, k1 - u, radius, pair)
                return upper + lower

            points = np.arange(1, int(width * radius / math.pi)) * (math.pi / radius)
            value = integrate(paired, 0.0, width, points=points, spec=spec).value
            deviations[pair].append(abs(value - expected[pair]) * k1)

    final = [deviations[pair][-1] for pair in HANKEL_PAIRS]
    detail = ", ".join(
        f"{pair}: " + " -> ".join(f"{d:.2e}" for d in deviations[pair]) for pair in HANKEL_PAIRS
    )
    return _report("hankel_limits", np.array(final) / k1, final, thresholds, detail)


def spectral_delta_checks(thresholds: Mapping[str, float] | None = None) -> IdentityReport:
    """Weak limits sin(kR)/(pi k) -> delta(k), cos(kR)/k -> 0 and the sin^2 delta sequence.

    Each family is evaluated along an increasing sequence of R (or s); the
    suite passes when every deviation shrinks monotonically and the last one
    is below the threshold.
    """
    spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=4000)
    sigma = 1.0
    g = _gaussian(0.0, sigma)
    half_width = 10.0 * sigma

    def oscillation_points(frequency: float) -> np.ndarray:
        count = int(half_width * frequency / math.pi)
        return np.arange(1, count) * (math.pi / frequency)

    families: dict[str, list[float]] = {}

    # f_s(x) = sin^2(s x)/(s pi x^2), exact deviation ~ 1/(sqrt(2 pi) s sigma)
    families["sin2_sequence"] = [
        abs(
            2.0
            * integrate(
                lambda x, s=s: s / math.pi * np.sinc(s * x / math.pi) ** 2 * g(x),
                0.0,
                half_width,
                points=oscillation_points(2.0 * s),
                spec=spec,
            ).value
            - 1.0
        )
        for s in (12.5 / sigma, 25.0 / sigma, 50.0 / sigma)
    ]

    # sin(kR)/(pi k) against an even Gaussian gives erf(R sigma / sqrt 2)
    families["sin_kernel"] = [
        abs(
            2.0
            * integrate(
                lambda k, r=r: r / math.pi * np.sinc(r * k / math.pi) * g(k),
                0.0,
                half_width,
                points=oscillation_points(r),
                spec=spec,
            ).value
            - 1.0
        )
        for r in (1.0 / sigma, 2.0 / sigma, 4.0 / sigma, 100.0 / sigma)
    ]

    # cos(kR)/k against the odd k exp(-k^2/2 sigma^2): sigma sqrt(2 pi) exp(-R^2 sigma^2/2)
    norm = sigma * math.sqrt(2.0 * math.pi)
    families["cos_kernel_odd"] = [
        abs(
            2.0
            * integrate(
                lambda k, r=r: np.cos(k * r) * g(k),
                0.0,
                half_width,
                points=oscillation_points(r),
                spec=spec,
            ).value
        )
        / norm
        for r in (1.0 / sigma, 2.0 / sigma, 4.0 / sigma, 8.0 / sigma)
    ]

    # against an even test function the principal value vanishes by parity
    families["cos_kernel_even"] = [
        abs(
            integrate(
                lambda k, r=r: np.cos(k * r) / k * (g(k) - g(-k)),
                0.0,
                half_width,
                spec=spec,
            ).value
        )
        for r in (1.0 / sigma, 100.0 / sigma)
    ]

    final = [values[-1] for values in families.values()]
    shrinking = all(
        all(later <= earlier for earlier, later in zip(values, values[1:]))
        for values in families.values()
    )
    detail = "; ".join(
        f"{name}: " + " -> ".join(f"{d:.2e}" for d in values) for name, values in families.items()
    )
    rel = np.array(final) if shrinking else np.full(len(final), np.inf)
    return _report("spectral_delta", final, rel, thresholds, detail)


""" normalization and large-R forms """


def orthonormality_weight_check(
    thresholds: Mapping[str, float] | None = None,
    radii: tuple[float, ...] = (250.0, 500.0, 1000.0),
    kappa: float = 1.0,
) -> IdentityReport:
    """Mode normalization: |Xi|^2 2 n kappa^2 = 1 and (pi k / R) int r J^2 -> 1.

    The second is the finite-R shadow of the delta(k1 - k2)/k normalization
    weight, with corrections of order 1/(kR).
    """
    errors = []
    for n_liquid in (1.0, 1.3, 2.0):
        xi = normalization_xi(kappa, n_liquid)
        errors.append(abs(xi * xi * 2.0 * n_liquid * kappa * kappa - 1.0))
    growth = []
    for radius in radii:
        worst = 0.0
        for l in range(1, 6):  # noqa: E741
            weight = math.pi * kappa / radius * hankel_finite_integral(
                ModeOrder(l), kappa, kappa, radius
            )
            worst = max(worst, abs(weight - 1.0))
        growth.append(worst)
    errors.append(growth[-1])
    detail = "weight deviation " + " -> ".join(f"{d:.2e}" for d in growth)
    return _report("mode_normalization", errors, errors, thresholds, detail)


def alpha_prefactor(n_in: float, n_out: float) -> float:
    """gamma (1/n_in + 1/n_out) with gamma = n_in n_out.

    Coefficient of delta(n_in w_in - n_out w_out) in alpha; at n_in = n_out = n
    it is 2n, i.e. 2 delta(w_in - w_out).
    """
    return n_in * n_out * (1.0 / n_in + 1.0 / n_out)


def large_r_beta_sq(cfg: MediumConfig, omega_in: float, omega_out: float) -> float:
    """Strength of |beta|^2 along n_in w_in = n_out w_out in the large-R limit.

    |Xi_in Xi_out gamma (1/n_in - 1/n_out)|^2 divided by the
    4 n_in n_out |Xi_in|^2 |Xi_out|^2 normalization of the dimensionless
    spectrum, i.e. (n_out - n_in)^2 / (4 n_in n_out); the Xi (liquid
    wavenumbers n_liquid w) cancel.
    """
    if omega_in <= 0.0 or omega_out <= 0.0:
        raise ValueError("frequencies must be positive")
    n_in, n_out = cfg.n_gas_in, cfg.n_gas_out
    xi_in = normalization_xi(cfg.n_liquid * omega_in, cfg.n_liquid)
    xi_out = normalization_xi(cfg.n_liquid * omega_out, cfg.n_liquid)
    gamma = n_in * n_out
    prefactor = xi_in * xi_out * gamma * (1.0 / n_in - 1.0 / n_out)
    return prefactor**2 / (4.0 * n_in * n_out * xi_in**2 * xi_out**2)


def support_concentration(
    x0: float, y0: float, scales: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)
) -> list[float]:
    """F(s x0, s y0) / D(s (x0 + y0)/2) for growing s (growing radius).

    Falls towards zero: the kernel mass collapses onto the line x = y.
    """
    ratios = []
    for scale in scales:
        off = f_exact(scale * x0, scale * y0).value
        ratios.append(off / d_exact(scale * 0.5 * (x0 + y0)))
    return ratios


def run_identity_suites(
    thresholds: Mapping[str, float] | None = None, seed: int = CHECK_SEED
) -> list[IdentityReport]:
    """Every identity suite, in a fixed order with a fixed seed."""
    merged = dict(SUITE_THRESHOLDS)
    merged.update(thresholds or {})
    rng = np.random.default_rng(seed)
    reports = [
        wronskian_suite(rng, merged),
        recurrence_suite(rng, merged),
        reference_suite(rng, merged),
        pseudo_wronskian_suite(rng, merged),
        diagonal_limit_suite(rng, merged),
        *matching_suites(rng, merged),
        hankel_integral_suite(rng, merged),
        spectral_delta_checks(merged),
        hankel_limit_checks(merged),
        orthonormality_weight_check(merged),
    ]
    failed = [report.name for report in reports if not report.passed]
    if failed:
        _LOGGER.warning("Identity suites failed: %s", ", ".join(failed))
    return reports
