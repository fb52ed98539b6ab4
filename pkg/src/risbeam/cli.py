"""Command-line front end: JSON scenarios in, CSV tables out.

Scenario files use degrees and GHz; all numeric CSV output is fixed to 4
decimal places.  Exit codes: 0 success, 2 configuration error (with the
offending key named), 1 internal numeric error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from .analysis import (
    DEFAULT_EPSILON_DEG,
    METHODS,
    SWEEP_AXES,
    SweepRow,
    SweepSpec,
    angle_scan,
    gradient_map,
    grid_values,
    pl_slope_fit,
    run_sweep,
)
from .channel import link_state
from .geometry import TWO_PI, Placement, RisPanel
from .quantization import (
    QuantizationResult,
    ShiftMatrix,
    dtpq,
    eipq,
    exhaustive_search,
    fixed_threshold,
)
from .radiation import RadioConfig
from .scenario import Scenario

SPEED_OF_LIGHT = 299792458.0


class ScenarioFileError(ValueError):
    """Configuration problem in a scenario file or on the command line."""


_PANEL_KEYS = {"rows", "cols", "cell_dx_m", "cell_dy_m", "bits", "levels_deg", "reflection"}
_PLACEMENT_KEYS = {"d1_m", "d2_m", "theta_t_deg", "phi_t_deg", "theta_r_deg", "phi_r_deg"}
_RADIO_KEYS = {"freq_ghz", "tx_power_dbm", "gain_tx_dbi", "gain_rx_dbi", "cell_alpha"}


def _require_section(doc: dict, name: str, allowed: set[str]) -> dict:
    if name not in doc:
        raise ScenarioFileError(f"missing section '{name}'")
    section = doc[name]
    if not isinstance(section, dict):
        raise ScenarioFileError(f"section '{name}' must be an object")
    unknown = set(section) - allowed
    if unknown:
        raise ScenarioFileError(f"unknown key '{name}.{sorted(unknown)[0]}'")
    return section


def _number(section: dict, section_name: str, key: str, default=None) -> float:
    if key not in section:
        if default is not None:
            return default
        raise ScenarioFileError(f"missing key '{section_name}.{key}'")
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFileError(f"key '{section_name}.{key}' must be a number")
    return float(value)


def parse_scenario(doc: dict) -> Scenario:
    """Build a Scenario from a parsed JSON document, rejecting unknown keys."""
    if not isinstance(doc, dict):
        raise ScenarioFileError("scenario document must be an object")
    unknown = set(doc) - {"panel", "placement", "radio"}
    if unknown:
        raise ScenarioFileError(f"unknown key '{sorted(unknown)[0]}'")

    panel_doc = _require_section(doc, "panel", _PANEL_KEYS)
    placement_doc = _require_section(doc, "placement", _PLACEMENT_KEYS)
    radio_doc = _require_section(doc, "radio", _RADIO_KEYS)

    levels = panel_doc.get("levels_deg")
    if not isinstance(levels, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in levels
    ):
        raise ScenarioFileError("key 'panel.levels_deg' must be a list of numbers")

    try:
        panel = RisPanel(
            rows=int(_number(panel_doc, "panel", "rows")),
            cols=int(_number(panel_doc, "panel", "cols")),
            d_x=_number(panel_doc, "panel", "cell_dx_m"),
            d_y=_number(panel_doc, "panel", "cell_dy_m"),
            bits=int(_number(panel_doc, "panel", "bits")),
            levels=tuple(math.radians(v) for v in levels),
            reflection=_number(panel_doc, "panel", "reflection", default=1.0),
        )
    except ValueError as exc:
        raise ScenarioFileError(f"invalid 'panel' section: {exc}") from exc

    try:
        placement = Placement(
            d1=_number(placement_doc, "placement", "d1_m"),
            d2=_number(placement_doc, "placement", "d2_m"),
            theta_t=math.radians(_number(placement_doc, "placement", "theta_t_deg")),
            phi_t=math.radians(_number(placement_doc, "placement", "phi_t_deg")) % TWO_PI,
            theta_r=math.radians(_number(placement_doc, "placement", "theta_r_deg")),
            phi_r=math.radians(_number(placement_doc, "placement", "phi_r_deg")) % TWO_PI,
        )
    except ValueError as exc:
        raise ScenarioFileError(f"invalid 'placement' section: {exc}") from exc

    freq_ghz = _number(radio_doc, "radio", "freq_ghz")
    if freq_ghz <= 0.0:
        raise ScenarioFileError("key 'radio.freq_ghz' must be positive")
    try:
        radio = RadioConfig(
            wavelength=SPEED_OF_LIGHT / (freq_ghz * 1e9),
            tx_power_dbm=_number(radio_doc, "radio", "tx_power_dbm"),
            gain_tx_dbi=_number(radio_doc, "radio", "gain_tx_dbi"),
            gain_rx_dbi=_number(radio_doc, "radio", "gain_rx_dbi"),
            cell_alpha=_number(radio_doc, "radio", "cell_alpha", default=1.0),
        )
    except ValueError as exc:
        raise ScenarioFileError(f"invalid 'radio' section: {exc}") from exc

    return Scenario(panel=panel, placement=placement, radio=radio)


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ScenarioFileError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioFileError(f"scenario file {path} is not valid JSON: {exc}") from exc
    return parse_scenario(doc)


# ---------------------------------------------------------------------------
# CSV schemas


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def write_shifts_csv(path: str, shifts: ShiftMatrix) -> None:
    """One row per cell, row-major: n, m, level_index, level_deg."""
    rows_m, cols_n = shifts.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "m", "level_index", "level_deg"])
        for m in range(1, rows_m + 1):
            for n in range(1, cols_n + 1):
                index = int(shifts.level_indices[m - 1, n - 1])
                writer.writerow([n, m, index, _fmt(math.degrees(shifts.levels[index]))])


def read_shifts_csv(path: str, panel: RisPanel) -> ShiftMatrix:
    """Reload a shifts CSV into a ShiftMatrix keyed by level indices."""
    indices = np.zeros((panel.rows, panel.cols), dtype=np.intp)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for record in reader:
            n = int(record["n"])
            m = int(record["m"])
            indices[m - 1, n - 1] = int(record["level_index"])
    return ShiftMatrix(level_indices=indices, levels=panel.levels)


def write_sweep_csv(path: str, rows: Sequence[SweepRow], methods: Sequence[str]) -> None:
    """Header axis_value,<method>_dbm[,<method>_threshold_deg]... in method order."""
    header = ["axis_value"]
    for method in methods:
        header.append(f"{method}_dbm")
        if method != "continuous":
            header.append(f"{method}_threshold_deg")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            record = [_fmt(row.axis_value)]
            for method in methods:
                record.append(_fmt(row.power_dbm[method]))
                if method != "continuous":
                    record.append(_fmt(row.threshold_deg[method]))
            writer.writerow(record)


def write_map_csv(
    path: str, theta_grid_deg: np.ndarray, phi_grid_deg: np.ndarray, power: np.ndarray
) -> None:
    """Long-format map: theta_r_deg, phi_r_deg, power_dbm."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta_r_deg", "phi_r_deg", "power_dbm"])
        for i, theta in enumerate(theta_grid_deg):
            for j, phi in enumerate(phi_grid_deg):
                writer.writerow([_fmt(theta), _fmt(phi), _fmt(power[i, j])])


# ---------------------------------------------------------------------------
# Method tokens: "dtpq", "eipq:5", "fixed:235", "continuous", "exhaustive"


def _parse_method_token(token: str) -> tuple[str, float | None]:
    name, _, param = token.partition(":")
    if name not in METHODS and name != "exhaustive":
        raise ScenarioFileError(f"unknown method '{name}'")
    if not param:
        return name, None
    try:
        return name, float(param)
    except ValueError as exc:
        raise ScenarioFileError(f"bad parameter in method token '{token}'") from exc


def _parse_method_list(tokens: str) -> tuple[tuple[str, ...], float, float | None]:
    methods = []
    epsilon_deg = DEFAULT_EPSILON_DEG
    gamma_deg: float | None = None
    for token in tokens.split(","):
        name, param = _parse_method_token(token.strip())
        if name == "exhaustive":
            raise ScenarioFileError("method 'exhaustive' is only available to quantize")
        methods.append(name)
        if name == "eipq" and param is not None:
            epsilon_deg = param
        if name == "fixed" and param is not None:
            gamma_deg = param
    return tuple(methods), epsilon_deg, gamma_deg


def _max_workers() -> int | None:
    raw = os.environ.get("RIS_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ScenarioFileError(f"RIS_THREADS must be an integer, got '{raw}'") from exc
    if value < 1:
        raise ScenarioFileError(f"RIS_THREADS must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    panel = scenario.panel
    print(
        f"ok: {panel.rows}x{panel.cols} cells, {panel.bits}-bit, "
        f"wavelength {scenario.radio.wavelength:.6f} m"
    )
    return 0


def _cmd_quantize(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    name, param = _parse_method_token(args.method)
    state = link_state(scenario)
    result: QuantizationResult
    if name == "dtpq":
        result = dtpq(scenario, state)
    elif name == "eipq":
        epsilon_deg = param if param is not None else DEFAULT_EPSILON_DEG
        result = eipq(scenario, math.radians(epsilon_deg), state)
    elif name == "fixed":
        gamma = (
            math.radians(param) % TWO_PI if param is not None else scenario.panel.levels[-1]
        )
        result = fixed_threshold(scenario, gamma, state)
    elif name == "exhaustive":
        result = exhaustive_search(scenario, state)
    else:
        raise ScenarioFileError("quantize requires a discrete method (not 'continuous')")

    threshold = "n/a" if result.threshold is None else _fmt(math.degrees(result.threshold))
    print(f"threshold_deg={threshold}")
    print(f"xi={result.xi:.6e}")
    print(f"received_power_dbm={_fmt(result.received_power_dbm)}")
    print(f"candidates_evaluated={result.candidates_evaluated}")
    write_shifts_csv(args.out, result.shifts)
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    methods, epsilon_deg, gamma_deg = _parse_method_list(args.methods)
    spec = SweepSpec(
        axis=args.axis,
        start=args.start,
        stop=args.stop,
        step=args.step,
        methods=methods,
        epsilon_deg=epsilon_deg,
        gamma_deg=gamma_deg,
    )
    rows = run_sweep(scenario, spec, max_workers=_max_workers())
    write_sweep_csv(args.out, rows, methods)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_angle_scan(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    methods, epsilon_deg, gamma_deg = _parse_method_list(args.methods)
    rows = angle_scan(
        scenario,
        args.start,
        args.stop,
        args.step,
        math.radians(args.target),
        methods,
        epsilon_deg=epsilon_deg,
        gamma_deg=gamma_deg,
    )
    write_sweep_csv(args.out, rows, methods)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_gradient_map(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    name, param = _parse_method_token(args.method)
    if name == "exhaustive":
        raise ScenarioFileError("gradient-map supports continuous/dtpq/eipq/fixed")
    epsilon_deg = param if name == "eipq" and param is not None else DEFAULT_EPSILON_DEG
    gamma_deg = param if name == "fixed" and param is not None else None
    theta_grid = grid_values(args.theta_start, args.theta_stop, args.theta_step)
    phi_grid = grid_values(args.phi_start, args.phi_stop, args.phi_step)
    power = gradient_map(
        scenario,
        (math.radians(args.target_theta), math.radians(args.target_phi) % TWO_PI),
        theta_grid,
        phi_grid,
        name,
        epsilon_deg=epsilon_deg,
        gamma_deg=gamma_deg,
    )
    write_map_csv(args.out, theta_grid, phi_grid, power)
    print(f"wrote {args.out} ({power.size} points)")
    return 0


def _cmd_pl_fit(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    name, param = _parse_method_token(args.method)
    if name == "exhaustive":
        raise ScenarioFileError("pl-fit supports continuous/dtpq/eipq/fixed")
    epsilon_deg = param if name == "eipq" and param is not None else DEFAULT_EPSILON_DEG
    gamma_deg = param if name == "fixed" and param is not None else None
    variable = {
        "d1": "log10_d1",
        "d2": "log10_d2",
        "cos_theta_r": "log10_cos_theta_r",
        "cos_theta_t": "log10_cos_theta_t",
    }[args.variable]
    if args.num < 3:
        raise ScenarioFileError(f"--num must be >= 3, got {args.num}")
    spacing = args.spacing
    if spacing == "auto":
        spacing = "log" if args.variable in ("d1", "d2") else "linear"
    if spacing == "log":
        if args.start <= 0.0:
            raise ScenarioFileError("log spacing requires a positive --start")
        grid = np.logspace(math.log10(args.start), math.log10(args.stop), args.num)
    else:
        grid = np.linspace(args.start, args.stop, args.num)
    fit = pl_slope_fit(
        scenario,
        variable,
        grid,
        name,
        epsilon_deg=epsilon_deg,
        gamma_deg=gamma_deg,
        max_workers=_max_workers(),
    )
    print(f"variable={fit.variable}")
    print(f"slope={fit.slope:.4f}")
    print(f"intercept_db={fit.intercept:.4f}")
    print(f"r_squared={fit.r_squared:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risbeam",
        description="Reflecting-surface link simulator with discrete phase quantization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario JSON file")

    p = sub.add_parser("validate", help="parse and validate a scenario file")
    add_scenario(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("quantize", help="design discrete shifts for one scenario")
    add_scenario(p)
    p.add_argument(
        "--method",
        required=True,
        help="dtpq | eipq[:epsilon_deg] | fixed[:gamma_deg] | exhaustive",
    )
    p.add_argument("--out", default="shifts.csv", help="shifts CSV path")
    p.set_defaults(func=_cmd_quantize)

    p = sub.add_parser("sweep", help="sweep one axis and tabulate received power")
    add_scenario(p)
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument(
        "--methods",
        required=True,
        help="comma list: continuous,dtpq,eipq[:epsilon_deg],fixed[:gamma_deg]",
    )
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("angle-scan", help="design at a target elevation, then move Rx")
    add_scenario(p)
    p.add_argument("--target", type=float, required=True, help="design elevation (deg)")
    p.add_argument("--start", type=float, required=True, help="scan start (deg)")
    p.add_argument("--stop", type=float, required=True, help="scan stop (deg)")
    p.add_argument("--step", type=float, required=True, help="scan step (deg)")
    p.add_argument("--methods", required=True)
    p.add_argument("--out", default="angle_scan.csv")
    p.set_defaults(func=_cmd_angle_scan)

    p = sub.add_parser("gradient-map", help="power map over (theta_r, phi_r)")
    add_scenario(p)
    p.add_argument("--target-theta", type=float, required=True, help="deg")
    p.add_argument("--target-phi", type=float, required=True, help="deg")
    p.add_argument("--theta-start", type=float, default=0.0)
    p.add_argument("--theta-stop", type=float, default=90.0)
    p.add_argument("--theta-step", type=float, default=0.5)
    p.add_argument("--phi-start", type=float, default=0.0)
    p.add_argument("--phi-stop", type=float, default=360.0)
    p.add_argument("--phi-step", type=float, default=2.0)
    p.add_argument("--method", default="dtpq")
    p.add_argument("--out", default="gradient_map.csv")
    p.set_defaults(func=_cmd_gradient_map)

    p = sub.add_parser("pl-fit", help="fit the path-loss exponent over a variable")
    add_scenario(p)
    p.add_argument("--variable", required=True, choices=("d1", "d2", "cos_theta_r", "cos_theta_t"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--num", type=int, default=13)
    p.add_argument("--spacing", choices=("auto", "linear", "log"), default="auto")
    p.add_argument("--method", default="dtpq")
    p.set_defaults(func=_cmd_pl_fit)

    return parser


def run(argv: Sequence[str]) -> int:
    """Entry point returning an exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ScenarioFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numeric failure or bug surfaced at runtime
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
