"""Run configuration: flat key = value files validated with voluptuous."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
import logging
from pathlib import Path
import re
from typing import Any

import voluptuous as vol

from .const import (
    CONF_ABS_TOL,
    CONF_GRID_POINTS,
    CONF_INCLUDE_TAILS,
    CONF_K_OBSERVED,
    CONF_KERNEL_MODE,
    CONF_L_MAX,
    CONF_LOG_LEVEL,
    CONF_MAX_SUBDIVISIONS,
    CONF_N_GAS_IN,
    CONF_N_GAS_OUT,
    CONF_N_LIQUID,
    CONF_OUTPUT_PATH,
    CONF_RADIUS,
    CONF_REL_TOL,
    CONF_TAIL_UPPER_BOUND,
    CONF_WORKERS,
    CONF_X_MAX,
    CONF_X_MIN,
    CONF_X_SPILL,
    CONF_X_STAR,
    CONF_Y_STAR,
    DEFAULT_ABS_TOL,
    DEFAULT_GRID_POINTS,
    DEFAULT_K_OBSERVED,
    DEFAULT_MAX_SUBDIVISIONS,
    DEFAULT_N_GAS_IN,
    DEFAULT_N_GAS_OUT,
    DEFAULT_N_LIQUID,
    DEFAULT_RADIUS_NM,
    DEFAULT_REL_TOL,
    DEFAULT_WORKERS,
    DEFAULT_X_SPILL,
    KERNEL_FACTORIZED,
    KERNEL_MODES,
    LOG_LEVELS,
)
from .kernel import CutoffProfile, KernelDomainError
from .matching import MatchingDomainError, MediumConfig
from .quadrature import QuadratureError, QuadratureSpec

_LOGGER = logging.getLogger(__name__)

_POSITIVE = vol.All(vol.Coerce(float), vol.Range(min=0.0, min_included=False))

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_N_GAS_IN, default=DEFAULT_N_GAS_IN): _POSITIVE,
        vol.Optional(CONF_N_GAS_OUT, default=DEFAULT_N_GAS_OUT): _POSITIVE,
        vol.Optional(CONF_N_LIQUID, default=DEFAULT_N_LIQUID): _POSITIVE,
        vol.Optional(CONF_RADIUS, default=DEFAULT_RADIUS_NM): _POSITIVE,
        vol.Optional(CONF_K_OBSERVED, default=DEFAULT_K_OBSERVED): _POSITIVE,
        vol.Optional(CONF_KERNEL_MODE, default=KERNEL_FACTORIZED): vol.All(
            vol.Lower, vol.In(KERNEL_MODES)
        ),
        vol.Optional(CONF_L_MAX): vol.All(vol.Coerce(int), vol.Range(min=1)),
        vol.Optional(CONF_X_STAR): _POSITIVE,
        vol.Optional(CONF_Y_STAR): _POSITIVE,
        vol.Optional(CONF_X_SPILL, default=DEFAULT_X_SPILL): vol.All(
            vol.Coerce(float), vol.Range(min=0.0)
        ),
        vol.Optional(CONF_REL_TOL, default=DEFAULT_REL_TOL): _POSITIVE,
        vol.Optional(CONF_ABS_TOL, default=DEFAULT_ABS_TOL): _POSITIVE,
        vol.Optional(CONF_MAX_SUBDIVISIONS, default=DEFAULT_MAX_SUBDIVISIONS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(CONF_INCLUDE_TAILS, default=False): vol.Boolean(),
        vol.Optional(CONF_TAIL_UPPER_BOUND): _POSITIVE,
        vol.Optional(CONF_GRID_POINTS, default=DEFAULT_GRID_POINTS): vol.All(
            vol.Coerce(int), vol.Range(min=2)
        ),
        vol.Optional(CONF_X_MIN): vol.All(vol.Coerce(float), vol.Range(min=0.0)),
        vol.Optional(CONF_X_MAX): _POSITIVE,
        vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(CONF_OUTPUT_PATH): str,
        vol.Optional(CONF_LOG_LEVEL): vol.All(vol.Lower, vol.In(LOG_LEVELS)),
    },
    extra=vol.PREVENT_EXTRA,
)


_COMMENT = re.compile(r"(?:^|\s)#")


def parse_config_text(text: str) -> dict[str, str]:
    """Split `key = value` lines; blank lines and # comments are skipped.

    A comment starts with # at the beginning of a line or after whitespace,
    so values such as `runs/#3.csv` are kept whole.
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.split(raw, maxsplit=1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
        if key in values:
            raise ConfigError(f"line {number}: duplicate key {key!r}", key)
        values[key] = value
    return values


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read and split a config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    _LOGGER.debug("Read config file %s", path)
    return parse_config_text(text)


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI run needs."""

    medium: MediumConfig
    quad: QuadratureSpec
    kernel_mode: str = KERNEL_FACTORIZED
    l_max_override: int | None = None
    x_star_override: float | None = None
    y_star_override: float | None = None
    output_path: str | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    x_min: float | None = None
    x_max: float | None = None
    workers: int = DEFAULT_WORKERS
    log_level: str | None = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any] | None = None) -> RunConfig:
        """Validate raw values and build the typed config."""
        try:
            values = CONFIG_SCHEMA(dict(data or {}))
        except vol.Invalid as err:
            key = str(err.path[0]) if err.path else None
            raise ConfigError(f"invalid config: {err}", key) from err

        if values.get(CONF_INCLUDE_TAILS) and CONF_TAIL_UPPER_BOUND not in values:
            raise ConfigError("include_tails needs tail_upper_bound", CONF_TAIL_UPPER_BOUND)
        x_min, x_max = values.get(CONF_X_MIN), values.get(CONF_X_MAX)
        if x_min is not None and x_max is not None and x_min >= x_max:
            raise ConfigError(f"empty x range [{x_min}, {x_max}]", CONF_X_MIN)

        try:
            medium = MediumConfig(
                n_gas_in=values[CONF_N_GAS_IN],
                n_gas_out=values[CONF_N_GAS_OUT],
                n_liquid=values[CONF_N_LIQUID],
                radius=values[CONF_RADIUS],
                k_observed=values[CONF_K_OBSERVED],
            )
            quad = QuadratureSpec(
                rel_tol=values[CONF_REL_TOL],
                abs_tol=values[CONF_ABS_TOL],
                max_subdivisions=values[CONF_MAX_SUBDIVISIONS],
                include_tails=values[CONF_INCLUDE_TAILS],
                tail_upper_bound=values.get(CONF_TAIL_UPPER_BOUND),
                x_spill=values[CONF_X_SPILL],
            )
        except (MatchingDomainError, QuadratureError) as err:
            raise ConfigError(err.status) from err

        return cls(
            medium=medium,
            quad=quad,
            kernel_mode=values[CONF_KERNEL_MODE],
            l_max_override=values.get(CONF_L_MAX),
            x_star_override=values.get(CONF_X_STAR),
            y_star_override=values.get(CONF_Y_STAR),
            output_path=values.get(CONF_OUTPUT_PATH),
            grid_points=values[CONF_GRID_POINTS],
            x_min=x_min,
            x_max=x_max,
            workers=values[CONF_WORKERS],
            log_level=values.get(CONF_LOG_LEVEL),
        )

    def cutoff(self) -> CutoffProfile:
        """Cutoffs of the medium with the configured overrides applied."""
        try:
            return CutoffProfile.from_medium(
                self.medium, self.x_star_override, self.y_star_override
            )
        except KernelDomainError as err:
            raise ConfigError(err.status) from err

    def x_range(self, default: tuple[float, float]) -> tuple[float, float]:
        """Configured x range, filled in from default where unset."""
        lo = default[0] if self.x_min is None else self.x_min
        hi = default[1] if self.x_max is None else self.x_max
        if not lo < hi:
            raise ConfigError(f"empty x range [{lo}, {hi}]", CONF_X_MIN)
        return lo, hi


def load_config(
    path: str | Path | None = None, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """Config file (optional) with overrides layered on top, validated."""
    values: dict[str, Any] = parse_config_file(path) if path is not None else {}
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return RunConfig.from_mapping(values)


class ConfigError(Exception):
    """Raised when a config file cannot be parsed or fails validation."""

    def __init__(self, status: str, key: str | None = None) -> None:
        """Initialize."""
        super().__init__(status)
        self.status = status
        self.key = key
