"""Scenario orchestration: calibrate, simulate, and write plot-ready files."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibrate import CalibrationProblem, collapse_time, revival_time, solve_coupling
from .dynamics import TimeSeries, sweep
from .errors import InvalidInputError
from .model import Calibration, DriveField, LossModel, ResonantSystem, net_quality_factor, poisson_weights
from .scenario import Scenario

log = logging.getLogger(__name__)

CURVE_FILE = "curve.csv"
SUMMARY_FILE = "summary.txt"
RESIDUAL_FILE = "residuals.csv"


@dataclass(frozen=True)
class Calibrated:
    scenario: Scenario
    sys: ResonantSystem
    loss: LossModel
    drive: DriveField
    cal: Calibration


def calibrate_scenario(scenario: Scenario) -> Calibrated:
    sys = scenario.system()
    loss = net_quality_factor(sys)
    drive = poisson_weights(scenario.nbar, scenario.tail_tol)
    cal = solve_coupling(CalibrationProblem(sys, loss, drive))
    log.info("%s: g' = %.6g rad/s (residual %.2e)", scenario.name, cal.g_prime, cal.residual)
    return Calibrated(scenario, sys, loss, drive, cal)


def simulate(c: Calibrated, workers: int | None = None) -> TimeSeries:
    times = c.scenario.grid_us() * 1e-6
    return sweep(times, c.sys, c.loss, c.drive, c.cal, rel_tol=c.scenario.rel_tol, workers=workers)


def summary_lines(c: Calibrated) -> list[str]:
    cal = c.cal
    rows = [
        ("name", c.scenario.name),
        ("nbar", c.drive.nbar),
        ("g_prime_rad_s", cal.g_prime),
        ("omega_rabi_rad_s", cal.omega_rabi),
        ("omega_rabi_over_2pi_hz", cal.omega_rabi / (2.0 * math.pi)),
        ("q_net", c.loss.q_net),
        ("gamma_rad_s", c.loss.gamma),
        ("t_collapse_us", collapse_time(cal.g_prime, c.drive.nbar) * 1e6),
        ("t_revival_us", revival_time(cal.g_prime, c.drive.nbar) * 1e6),
        ("f_residual", cal.residual),
        ("n_max", c.drive.n_max),
    ]
    return [f"{k} = {v:.6g}" if isinstance(v, float) else f"{k} = {v}" for k, v in rows]


def write_summary(c: Calibrated, path: Path) -> None:
    path.write_text("\n".join(summary_lines(c)) + "\n")


def write_curve(series: TimeSeries, grid_us: np.ndarray, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_us", "p_multimode", "p_singlemode"])
        for t_us, pm, ps in zip(grid_us.tolist(), series.p_multimode.tolist(), series.p_singlemode.tolist()):
            writer.writerow([repr(t_us), repr(pm), repr(ps)])


def read_overlay(path) -> tuple[np.ndarray, np.ndarray]:
    """Two-column ``t_us,p`` CSV with a header row."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"cannot read overlay {path}: {exc.strerror}") from None
    if not rows or [h.strip() for h in rows[0]] != ["t_us", "p"]:
        raise InvalidInputError(f"{path}: overlay header must be 't_us,p'")
    t_us, p = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise InvalidInputError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            t_us.append(float(row[0]))
            p.append(float(row[1]))
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: non-numeric entry {row!r}") from None
    return np.array(t_us), np.array(p)


def _check_overlay_range(t_us: np.ndarray, grid_us: np.ndarray) -> None:
    if t_us.size and (t_us.min() < grid_us[0] or t_us.max() > grid_us[-1]):
        raise InvalidInputError(
            f"overlay times span [{t_us.min()}, {t_us.max()}] us, outside the grid [{grid_us[0]}, {grid_us[-1]}] us"
        )


def overlay_residuals(series: TimeSeries, grid_us: np.ndarray, t_us: np.ndarray, p_data: np.ndarray):
    """Model minus data at the overlay time stamps, model linearly interpolated between grid points."""
    _check_overlay_range(t_us, grid_us)
    pm = np.interp(t_us, grid_us, series.p_multimode)
    ps = np.interp(t_us, grid_us, series.p_singlemode)
    return pm, ps, pm - p_data, ps - p_data


def write_residuals(rows, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t_us", "p_data", "p_multimode", "p_singlemode", "resid_multimode", "resid_singlemode"])
        for row in zip(*(np.asarray(col).tolist() for col in rows)):
            writer.writerow([repr(v) for v in row])


def run_report(scenario: Scenario, out_dir, *, curve: bool = True, summary: bool = True,
               residuals: bool = True, workers: int | None = None) -> dict[str, Path]:
    """Calibrate, simulate and write the requested files into ``out_dir``.

    The overlay, when configured, is read and range-checked before any
    numerical work so a bad file fails fast.
    """
    overlay = None
    grid_us = scenario.grid_us()
    if residuals and scenario.overlay:
        overlay = read_overlay(scenario.overlay)
        _check_overlay_range(overlay[0], grid_us)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    c = calibrate_scenario(scenario)
    written: dict[str, Path] = {}
    if summary:
        written["summary"] = out / SUMMARY_FILE
        write_summary(c, written["summary"])
    if curve or overlay is not None:
        series = simulate(c, workers=workers)
        if curve:
            written["curve"] = out / CURVE_FILE
            write_curve(series, grid_us, written["curve"])
        if overlay is not None:
            t_us, p_data = overlay
            written["residuals"] = out / RESIDUAL_FILE
            write_residuals((t_us, p_data, *overlay_residuals(series, grid_us, t_us, p_data)), written["residuals"])
    return written
