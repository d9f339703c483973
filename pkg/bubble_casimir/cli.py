"""Command line front end: spectra, the reference table, kernel dumps and checks."""
from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
import csv
import functools
import json
import logging
import sys
from typing import Any

import click
import colorlog
import numpy as np

from .config import ConfigError, RunConfig, load_config
from .const import (
    CONF_GRID_POINTS,
    CONF_INCLUDE_TAILS,
    CONF_KERNEL_MODE,
    CONF_OUTPUT_PATH,
    CONF_TAIL_UPPER_BOUND,
    CONF_WORKERS,
    CONF_X_MAX,
    CONF_X_MIN,
    DEFAULT_DIAGONAL_RANGE,
    DEFAULT_KERNEL_RANGE,
    DIAGONAL_CSV_HEADER,
    DOMAIN,
    EXIT_CHECK_FAILED,
    EXIT_NUMERICAL,
    EXIT_USAGE,
    INFINITE_VOLUME_CSV_HEADER,
    KERNEL_CSV_HEADER,
    KERNEL_MODES,
    SPECTRUM_CSV_HEADER,
    SUITE_THRESHOLDS,
    TABLE_ENERGY_ATOL,
    TABLE_PHOTONS_RTOL,
)
from .kernel import (
    KernelConvergenceError,
    KernelDomainError,
    d_approx,
    d_exact_value,
    f_exact_grid,
    f_factorized,
)
from .matching import MatchingDomainError
from .oracles import run_identity_suites
from .quadrature import QuadratureError
from .special_functions import BesselDomainError, BesselSaturationError
from .spectrum import (
    delta_replacement_check,
    frequency_phz,
    infinite_volume_dn_dx,
    infinite_volume_totals,
    reproduce_table,
    totals,
    x_upper,
)

_LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(log_color)s%(asctime)s %(levelname)-8s %(name)s: %(message)s"


def _setup_logging(verbose: bool) -> None:
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def _format(value: Any) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: str | None, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """One writer, rows in the order given; stdout when no path is set."""
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_format(v) for v in row] for row in rows)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_format(v) for v in row] for row in rows)
    _LOGGER.info("Wrote %s", path)


def _summary(text: str, to_stdout: bool) -> None:
    click.echo(text, err=not to_stdout)


def handle_errors(func: Callable[..., None]) -> Callable[..., None]:
    """Map library failures to exit codes 2 (usage) and 3 (numerical)."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        ctx = click.get_current_context()
        try:
            func(*args, **kwargs)
        except ConfigError as err:
            _LOGGER.error("Configuration error: %s", err.status)
            ctx.exit(EXIT_USAGE)
        except QuadratureError as err:
            detail = ""
            if err.result is not None:
                detail = f" (achieved error {err.result.error:.3e})"
            _LOGGER.error("Quadrature failed: %s%s", err.status, detail)
            ctx.exit(EXIT_NUMERICAL)
        except (KernelConvergenceError, BesselSaturationError) as err:
            _LOGGER.error("Numerical failure: %s", err.status)
            ctx.exit(EXIT_NUMERICAL)
        except (BesselDomainError, KernelDomainError, MatchingDomainError) as err:
            _LOGGER.error("Invalid arguments: %s", err.status)
            ctx.exit(EXIT_USAGE)

    return wrapper


def run_options(func: Callable[..., None]) -> Callable[..., None]:
    """Options shared by every subcommand that reads a run config."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False)),
        click.option("--output", "output_path", type=click.Path(dir_okay=False)),
        click.option("--kernel", "kernel_mode", type=click.Choice(KERNEL_MODES)),
        click.option("--include-tails", "tail_bound", type=float, metavar="BOUND"),
        click.option("--workers", type=click.IntRange(min=1)),
        click.option("--grid-points", type=int),
        click.option("--x-range", type=(float, float)),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _load(
    config_path: str | None,
    output_path: str | None,
    kernel_mode: str | None,
    tail_bound: float | None,
    workers: int | None,
    grid_points: int | None,
    x_range: tuple[float, float] | None,
) -> RunConfig:
    overrides: dict[str, Any] = {
        CONF_OUTPUT_PATH: output_path,
        CONF_KERNEL_MODE: kernel_mode,
        CONF_WORKERS: workers,
        CONF_GRID_POINTS: grid_points,
    }
    if tail_bound is not None:
        overrides[CONF_INCLUDE_TAILS] = True
        overrides[CONF_TAIL_UPPER_BOUND] = tail_bound
    if x_range is not None:
        overrides[CONF_X_MIN], overrides[CONF_X_MAX] = x_range
        if not x_range[0] < x_range[1]:
            raise ConfigError(f"empty x range {x_range}", CONF_X_MIN)
    run = load_config(config_path, overrides)
    if run.log_level is not None:
        logging.getLogger(DOMAIN).setLevel(run.log_level.upper())
    _LOGGER.debug("Run config: %s", run)
    return run


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
def cli(verbose: bool) -> None:
    """Photon spectrum of a collapsing bubble from a sudden index change."""
    _setup_logging(verbose)


@cli.command()
@run_options
@handle_errors
def spectrum(**options: Any) -> None:
    """dN/dx on a grid, the photon number and the mean photon energy."""
    run = _load(**options)
    cut = run.cutoff()
    lo, hi = run.x_range((0.0, x_upper(cut, run.quad, run.kernel_mode)))
    result = totals(
        run.medium,
        cut,
        run.quad,
        run.kernel_mode,
        grid_points=run.grid_points,
        x_range=(lo, hi),
        workers=run.workers,
        l_max=run.l_max_override,
    )
    x = result.x_grid
    _write_csv(
        run.output_path,
        SPECTRUM_CSV_HEADER,
        zip(
            x,
            result.dn_dx,
            infinite_volume_dn_dx(x, run.medium, cut),
            frequency_phz(x, run.medium),
        ),
    )
    _summary(
        f"N = {result.total_photons:.6g}  "
        f"<E>/hbar Omega_max = {result.mean_x_over_xstar:.4f}  "
        f"E = {result.energy_ev:.6g} eV  "
        f"<E> = {result.mean_photon_energy_ev:.4f} eV",
        run.output_path is not None,
    )


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False))
@click.option("--kernel", "kernel_mode", type=click.Choice(KERNEL_MODES))
@click.option("--workers", type=click.IntRange(min=1))
@click.option("--json", "as_json", is_flag=True, help="One JSON record per row.")
@handle_errors
def table(
    config_path: str | None, kernel_mode: str | None, workers: int | None, as_json: bool
) -> None:
    """Reproduce the five reference scenarios."""
    run = _load(config_path, None, kernel_mode, None, workers, None, None)
    rows = reproduce_table(run.quad, run.kernel_mode, workers=run.workers)
    if as_json:
        for row in rows:
            click.echo(
                json.dumps(
                    {
                        "n_gas_in": row.n_gas_in,
                        "n_gas_out": row.n_gas_out,
                        "photons": row.total_photons,
                        "mean_x_over_xstar": row.mean_x_over_xstar,
                        "reference_photons": row.reference_photons,
                        "reference_ratio": row.reference_ratio,
                        "photons_deviation": row.photons_deviation,
                        "ratio_deviation": row.ratio_deviation,
                        "passed": row.passed,
                    }
                )
            )
    else:
        click.echo(
            f"{'n_in':>8} {'n_out':>6} {'N':>11} {'N ref':>11} {'dN':>7} "
            f"{'<E>/Emax':>9} {'ref':>6} {'d':>7}"
        )
        for row in rows:
            click.echo(
                f"{row.n_gas_in:>8g} {row.n_gas_out:>6g} {row.total_photons:>11.4g} "
                f"{row.reference_photons:>11.4g} {row.photons_deviation:>+7.2%} "
                f"{row.mean_x_over_xstar:>9.4f} {row.reference_ratio:>6.3f} "
                f"{row.ratio_deviation:>+7.4f}"
            )
    failed = [row for row in rows if not row.passed]
    if failed:
        _LOGGER.error(
            "%d of %d rows outside +-%g%% photons / +-%g mean energy",
            len(failed),
            len(rows),
            100 * TABLE_PHOTONS_RTOL,
            TABLE_ENERGY_ATOL,
        )
        click.get_current_context().exit(EXIT_CHECK_FAILED)


@cli.command("kernel-dump")
@run_options
@click.option("--y-range", type=(float, float))
@handle_errors
def kernel_dump(y_range: tuple[float, float] | None, **options: Any) -> None:
    """F(x, y), exact and factorized, on a square grid."""
    run = _load(**options)
    x_lo, x_hi = run.x_range(DEFAULT_KERNEL_RANGE)
    y_lo, y_hi = y_range if y_range is not None else (x_lo, x_hi)
    if x_lo < 0.0 or y_lo < 0.0 or not y_lo < y_hi:
        raise ConfigError(f"kernel ranges must be non-empty and >= 0: y in [{y_lo}, {y_hi}]")
    xs = np.linspace(x_lo, x_hi, run.grid_points)
    ys = np.linspace(y_lo, y_hi, run.grid_points)
    grid_x, grid_y = (axis.ravel() for axis in np.meshgrid(xs, ys, indexing="ij"))
    exact = f_exact_grid(grid_x, grid_y, run.medium, run.l_max_override)
    factorized = f_factorized(grid_x, grid_y)
    _write_csv(run.output_path, KERNEL_CSV_HEADER, zip(grid_x, grid_y, exact, factorized))


@cli.command()
@run_options
@handle_errors
def diagonal(**options: Any) -> None:
    """D(x) from the full sum next to its fitted form."""
    run = _load(**options)
    lo, hi = run.x_range(DEFAULT_DIAGONAL_RANGE)
    if lo <= 0.0:
        raise ConfigError(f"diagonal needs x > 0, got x_min={lo}", CONF_X_MIN)
    rows = []
    for x in np.linspace(lo, hi, run.grid_points):
        value = d_exact_value(float(x), run.l_max_override)
        rows.append((x, value.value, d_approx(x), value.l_used))
    _write_csv(run.output_path, DIAGONAL_CSV_HEADER, rows)


@cli.command("infinite-volume")
@run_options
@handle_errors
def infinite_volume(**options: Any) -> None:
    """The homogeneous-medium spectrum and its closed-form totals."""
    run = _load(**options)
    cut = run.cutoff()
    x = np.linspace(*run.x_range((0.0, x_upper(cut, run.quad))), run.grid_points)
    _write_csv(
        run.output_path,
        INFINITE_VOLUME_CSV_HEADER,
        zip(x, infinite_volume_dn_dx(x, run.medium, cut)),
    )
    result = infinite_volume_totals(run.medium, cut)
    _summary(
        f"N = {result.total_photons:.6g}  "
        f"<E>/hbar Omega_max = {result.mean_x_over_xstar:.4f}",
        run.output_path is not None,
    )


def _parse_thresholds(values: Sequence[str]) -> dict[str, float]:
    thresholds = {}
    for item in values:
        name, sep, value = item.partition("=")
        if not sep or name not in SUITE_THRESHOLDS:
            raise click.BadParameter(f"expected SUITE=VALUE with a known suite, got {item!r}")
        try:
            thresholds[name] = float(value)
        except ValueError as err:
            raise click.BadParameter(f"threshold for {name} is not a number") from err
    return thresholds


@cli.command()
@click.option("--json", "as_json", is_flag=True, help="One JSON record per suite.")
@click.option(
    "--threshold", "threshold_items", multiple=True, metavar="SUITE=VALUE",
    help="Override the accepted error of one suite.",
)
@handle_errors
def check(as_json: bool, threshold_items: tuple[str, ...]) -> None:
    """Run every identity suite; exit 1 if any fails."""
    thresholds = dict(SUITE_THRESHOLDS)
    thresholds.update(_parse_thresholds(threshold_items))
    reports = run_identity_suites(thresholds)
    reports.append(delta_replacement_check(thresholds=thresholds))
    for report in reports:
        click.echo(json.dumps(report.as_dict()) if as_json else str(report))
    failed = sorted(
        (report for report in reports if not report.passed),
        key=lambda report: report.max_rel_error / report.threshold,
        reverse=True,
    )
    if failed:
        _LOGGER.error(
            "%d suites failed, worst first: %s",
            len(failed),
            ", ".join(f"{report.name} ({report.max_rel_error:.2e})" for report in failed),
        )
        click.get_current_context().exit(EXIT_CHECK_FAILED)


def main() -> None:
    """Console script entry point."""
    cli()
