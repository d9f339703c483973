"""Adaptive quadrature with breakpoints on top of scipy.integrate.quad_vec.

Integrands take a scalar and return a float or a 1-D array; an array
integrand carries several integrals on one set of panels. Convergence is
judged on the max norm of the error, and panel order in quad_vec does not
depend on how many workers evaluate them, so results are reproducible.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import logging
import math

import numpy as np
from scipy import integrate as scipy_integrate

from .const import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_SUBDIVISIONS,
    DEFAULT_REL_TOL,
    DEFAULT_X_SPILL,
    QUADRATURE_RULE,
)

_LOGGER = logging.getLogger(__name__)

# quad_vec status codes
_CONVERGED = 0
_ROUNDING_LIMITED = 2
_NOT_FINITE = 3


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and integration domain handed down to every integral of a run.

    x_spill is how far past x_star the out-frequency is followed when tails
    are excluded; tail_upper_bound closes the domain when they are included.
    """

    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS
    include_tails: bool = False
    tail_upper_bound: float | None = None
    x_spill: float = DEFAULT_X_SPILL

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise QuadratureError("rel_tol and abs_tol must both be positive")
        if self.max_subdivisions < 1:
            raise QuadratureError("max_subdivisions must be >= 1")
        if self.include_tails and not (self.tail_upper_bound and self.tail_upper_bound > 0.0):
            raise QuadratureError("include_tails needs a positive tail_upper_bound")
        if self.x_spill < 0.0:
            raise QuadratureError("x_spill must be >= 0")

    def tightened(self, factor: float) -> QuadratureSpec:
        """Same domain and budget with both tolerances scaled by factor."""
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


@dataclass(frozen=True)
class QuadratureResult:
    """Value and error estimate (max norm) of one, possibly vector valued, integral."""

    value: float | np.ndarray
    error: float
    evaluations: int
    subdivisions: int
    converged: bool


def _quad_vec(func, a: float, b: float, points: list[float], spec: QuadratureSpec, workers):
    return scipy_integrate.quad_vec(
        func,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        norm="max",
        limit=spec.max_subdivisions,
        workers=workers,
        points=points or None,
        quadrature=QUADRATURE_RULE,
        full_output=True,
    )


def integrate(
    func: Callable[[float], float | np.ndarray],
    a: float,
    b: float,
    *,
    points: Iterable[float] = (),
    spec: QuadratureSpec | None = None,
    raise_on_failure: bool = True,
    workers: int = 1,
) -> QuadratureResult:
    """Integrate func over [a, b], splitting first at the breakpoints inside it.

    With workers > 1 the panels of each refinement pass are evaluated on a
    thread pool. A non-finite integrand always raises; running out of
    subdivisions raises unless raise_on_failure is False.
    """
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)):
        raise QuadratureError(f"integration limits must be finite, got [{a}, {b}]")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, 0, True)
    if b < a:
        flipped = integrate(
            func,
            b,
            a,
            points=points,
            spec=spec,
            raise_on_failure=raise_on_failure,
            workers=workers,
        )
        return replace(flipped, value=-flipped.value)

    inside = sorted({float(p) for p in points if a < p < b})
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            value, error, info = _quad_vec(func, a, b, inside, spec, executor.map)
    else:
        value, error, info = _quad_vec(func, a, b, inside, spec, 1)

    value = float(value) if np.ndim(value) == 0 else np.asarray(value, dtype=float)
    result = QuadratureResult(
        value=value,
        error=float(error),
        evaluations=int(info.neval),
        subdivisions=len(info.intervals),
        converged=info.status in (_CONVERGED, _ROUNDING_LIMITED),
    )
    if info.status == _ROUNDING_LIMITED:
        _LOGGER.debug("Rounding limited on [%g, %g], error=%g", a, b, result.error)
    if info.status == _NOT_FINITE:
        raise QuadratureError(f"integrand is not finite on [{a:g}, {b:g}]", result)
    if not result.converged:
        message = (
            f"{info.message} on [{a:g}, {b:g}] after {result.subdivisions} panels: "
            f"value={np.asarray(value).tolist()} error={result.error:.3e}"
        )
        if raise_on_failure:
            raise QuadratureError(message, result)
        _LOGGER.warning("%s", message)
    return result


class QuadratureError(Exception):
    """Raised when an integral fails to converge or the integrand misbehaves."""

    def __init__(self, status: str, result: QuadratureResult | None = None) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status
        self.result = result
