"""Batch front end: parse a run configuration, simulate, emit CSV data files
and plain-text reports.

Config files are JSON with the layout::

    {
      "experiment": "ghost_image | erase | read | mca | audit | full_eraser",
      "preset": "paper-1",            # or "setup": {...} with explicit fields
      "grid": {"n_points": 4096, "extent": 0.039},
      "mc": {"n_events": 1000000, "seed": 42, "bin_width": 1e-10},
      "output_dir": "out"
    }

All lengths are meters and times seconds, as plain JSON numbers (strings
with unit suffixes are rejected); unknown keys are rejected.  Exit codes:
0 success, 2 configuration error, 3 audit failure in ``audit`` mode.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    PatternRecord,
    analytic_erase,
    envelope_halfwidth,
    fringe_period,
    geometry_audit,
    pattern_flatness,
    profile_correlation,
    smear_with_detector,
    visibility,
)
from .biphoton import biphoton_map, erase_pattern, image_profile, read_pattern
from .montecarlo import ChoiceOptics, build_mca, delayed_choice_audit, sample_events, windowed_patterns
from .optics import TransmissionMask, sample_mask
from .presets import (
    EraserSetup,
    biphoton_source,
    default_grid,
    erase_arm,
    imaging_arm,
    paper_setup,
    read_arm,
    signal_arm,
)

EXPERIMENTS = ("ghost_image", "erase", "read", "mca", "audit", "full_eraser")
PRESETS = {"paper-1": 1, "paper-2": 2}

_SETUP_FIELDS = (
    "pump_wavelength", "signal_wavelength", "d_A", "d_A_prime", "d_B",
    "d_NPBS", "d_Lprime", "f", "f_T_prime", "f_R_prime", "z_T", "z_R",
    "detector1_width", "divergence", "fiber_length_T", "fiber_length_R",
    "fiber_index",
)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass
class GridConfig:
    n_points: int = 4096
    extent: float | None = None  # None: alias-safe default for the setup


@dataclass
class McConfig:
    n_events: int = 1_000_000
    seed: int = 42
    bin_width: float = 1e-10


@dataclass
class RunConfig:
    experiment: str
    preset: str | None = None
    setup: EraserSetup | None = None
    grid: GridConfig = field(default_factory=GridConfig)
    mc: McConfig = field(default_factory=McConfig)
    output_dir: str = "."


# --------------------------------------------------------------------------
# Config parsing / serialization
# --------------------------------------------------------------------------

def _require_keys(block: dict, allowed: tuple[str, ...], where: str) -> None:
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}; allowed: {sorted(allowed)}")


def _number(block: dict, key: str, default, where: str, *, integer: bool = False):
    if key not in block or block[key] is None:
        return default
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(
            f"{where}.{key} must be a plain JSON number (no unit suffixes), "
            f"got {value!r}"
        )
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def _parse_slit(block, where: str) -> TransmissionMask:
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object describing the mask")
    kind = block.get("kind")
    if kind == "double_slit":
        _require_keys(block, ("kind", "width", "separation"), where)
        return TransmissionMask.double_slit(
            _number(block, "width", None, where),
            _number(block, "separation", None, where))
    if kind == "single_slit":
        _require_keys(block, ("kind", "width"), where)
        return TransmissionMask.single_slit(_number(block, "width", None, where))
    if kind == "open":
        _require_keys(block, ("kind",), where)
        return TransmissionMask.open()
    raise ConfigError(
        f"{where}.kind must be double_slit, single_slit, or open, got {kind!r}")


def _parse_setup(block, where: str = "setup") -> EraserSetup:
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object")
    _require_keys(block, _SETUP_FIELDS + ("slit",), where)
    values = {}
    for name in _SETUP_FIELDS:
        if name == "fiber_index" and name not in block:
            continue
        if name not in block:
            raise ConfigError(f"{where}.{name} is required")
        values[name] = _number(block, name, None, where)
    if "slit" not in block:
        raise ConfigError(f"{where}.slit is required")
    values["slit"] = _parse_slit(block["slit"], f"{where}.slit")
    try:
        return EraserSetup(**values)
    except ValueError as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


def build_config(data: dict) -> RunConfig:
    """Validate a raw config mapping into a :class:`RunConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _require_keys(data, ("experiment", "preset", "setup", "grid", "mc", "output_dir"),
                  "config")
    experiment = data.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")

    preset = data.get("preset")
    setup = None
    if preset is not None and "setup" in data:
        raise ConfigError("give either a preset or an explicit setup, not both")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; known: {sorted(PRESETS)}")
    elif "setup" in data:
        setup = _parse_setup(data["setup"])
    else:
        raise ConfigError("config needs a preset or an explicit setup")

    grid_block = data.get("grid", {}) or {}
    _require_keys(grid_block, ("n_points", "extent"), "grid")
    grid = GridConfig(
        n_points=_number(grid_block, "n_points", 4096, "grid", integer=True),
        extent=_number(grid_block, "extent", None, "grid"),
    )

    mc_block = data.get("mc", {}) or {}
    _require_keys(mc_block, ("n_events", "seed", "bin_width"), "mc")
    mc = McConfig(
        n_events=_number(mc_block, "n_events", 1_000_000, "mc", integer=True),
        seed=_number(mc_block, "seed", 42, "mc", integer=True),
        bin_width=_number(mc_block, "bin_width", 1e-10, "mc"),
    )

    output_dir = data.get("output_dir", ".")
    if not isinstance(output_dir, str):
        raise ConfigError(f"output_dir must be a string path, got {output_dir!r}")
    return RunConfig(experiment=experiment, preset=preset, setup=setup,
                     grid=grid, mc=mc, output_dir=output_dir)


def parse_config(path) -> RunConfig:
    """Load and validate a JSON config file."""
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return build_config(data)


def serialize_config(config: RunConfig) -> dict:
    """Mapping that :func:`build_config` parses back into an equal config."""
    data: dict = {"experiment": config.experiment}
    if config.preset is not None:
        data["preset"] = config.preset
    else:
        setup = config.setup
        slit: dict = {"kind": setup.slit.kind}
        if setup.slit.kind in ("double_slit", "single_slit"):
            slit["width"] = setup.slit.width
        if setup.slit.kind == "double_slit":
            slit["separation"] = setup.slit.separation
        data["setup"] = {name: getattr(setup, name) for name in _SETUP_FIELDS}
        data["setup"]["slit"] = slit
    data["grid"] = {"n_points": config.grid.n_points, "extent": config.grid.extent}
    data["mc"] = {"n_events": config.mc.n_events, "seed": config.mc.seed,
                  "bin_width": config.mc.bin_width}
    data["output_dir"] = config.output_dir
    return data


# --------------------------------------------------------------------------
# Output writers (17 significant digits so reruns are byte-identical)
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_pattern_csv(path: Path, x_name: str, x: np.ndarray, rate: np.ndarray) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([x_name, "rate_normalized"])
        for xi, ri in zip(x, rate):
            writer.writerow([_fmt(xi), _fmt(ri)])


def _write_map_csv(path: Path, joint, max_side: int = 256) -> None:
    g2 = joint.g2()
    g2 = g2 / g2.max()
    stride1 = max(1, joint.grid1.n_points // max_side)
    stride2 = max(1, joint.grid2.n_points // max_side)
    x1 = joint.grid1.positions[::stride1]
    x2 = joint.grid2.positions[::stride2]
    sub = g2[::stride1, ::stride2]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x1_m", "x2_m", "g2"])
        for i, xi in enumerate(x1):
            for j, xj in enumerate(x2):
                writer.writerow([_fmt(xi), _fmt(xj), _fmt(sub[i, j])])


# --------------------------------------------------------------------------
# Experiment pipelines
# --------------------------------------------------------------------------

def _central_fringe_region(setup: EraserSetup) -> tuple[float, float] | None:
    """Span of the first three fringes, where read flatness is judged."""
    if setup.slit.kind != "double_slit":
        return None
    half = 1.5 * fringe_period(setup)
    return (-half, half)


def _erase_record(setup, grid, source) -> tuple[PatternRecord, dict]:
    joint = biphoton_map(signal_arm(setup, grid), erase_arm(setup, grid), source)
    rate = erase_pattern(joint, 0.0)
    period = fringe_period(setup) if setup.slit.kind == "double_slit" else None
    record = PatternRecord(grid.positions.copy(), rate, "erase", fringe_period=period)
    stats: dict = {}
    if period is not None:
        record.visibility = visibility(record)
        stats["visibility_point_detector"] = record.visibility
        lobe = envelope_halfwidth(setup)
        inside = np.abs(grid.positions) <= lobe
        oracle = analytic_erase(setup, grid.positions[inside])
        stats["erase_rms_vs_analytic"] = float(
            np.sqrt(np.mean((rate[inside] - oracle) ** 2)))
        smeared = smear_with_detector(record, setup.detector1_width)
        stats["visibility_smeared_detector"] = smeared.visibility
    return record, stats


def _run_ghost(setup, grid, source, outdir: Path) -> dict:
    joint = biphoton_map(signal_arm(setup, grid), imaging_arm(setup, grid), source)
    profile = image_profile(joint, 0.0)
    _write_pattern_csv(outdir / "ghost_profile.csv", "x2_m", grid.positions, profile)
    _write_map_csv(outdir / "map.csv", joint)
    reference = sample_mask(setup.slit, grid) ** 2
    return {"ghost_cross_correlation": profile_correlation(profile, reference)}


def _run_erase(setup, grid, source, outdir: Path) -> dict:
    record, stats = _erase_record(setup, grid, source)
    _write_pattern_csv(outdir / "erase_pattern.csv", "x1_m", record.x1, record.rate)
    if record.fringe_period is not None:
        smeared = smear_with_detector(record, setup.detector1_width)
        _write_pattern_csv(outdir / "erase_pattern_smeared.csv", "x1_m",
                           smeared.x1, smeared.rate)
    return stats


def _run_read(setup, grid, source, outdir: Path) -> dict:
    joint = biphoton_map(signal_arm(setup, grid), read_arm(setup, grid), source)
    rate = read_pattern(joint)
    record = PatternRecord(grid.positions.copy(), rate, "read")
    _write_pattern_csv(outdir / "read_pattern.csv", "x1_m", record.x1, record.rate)
    region = _central_fringe_region(setup)
    return {"read_flatness": pattern_flatness(record, region)}


def _run_mca(setup, grid, source, config: RunConfig, outdir: Path,
             *, write_windowed: bool) -> dict:
    arm1 = signal_arm(setup, grid)
    map_t = biphoton_map(arm1, erase_arm(setup, grid, pinhole_diameter=grid.dx), source)
    map_r = biphoton_map(arm1, read_arm(setup, grid), source)
    optics = ChoiceOptics.from_setup(setup)
    events = sample_events(map_t, map_r, optics, config.mc.n_events, config.mc.seed)
    histogram = build_mca(events, config.mc.bin_width)
    histogram.to_csv(outdir / "mca_histogram.csv")
    events.to_csv(outdir / "events.csv")
    stats = {
        "transmitted_fraction": events.transmitted_fraction(),
        "expected_peak_separation_s": optics.delay_T - optics.delay_R,
    }
    if histogram.window_T and histogram.window_R:
        center = lambda w: 0.5 * (w[0] + w[1])  # noqa: E731
        stats["measured_peak_separation_s"] = abs(
            center(histogram.window_T) - center(histogram.window_R))
    if write_windowed and histogram.window_T and histogram.window_R:
        period = fringe_period(setup) if setup.slit.kind == "double_slit" else None
        erase_rec, read_rec = windowed_patterns(events, histogram,
                                                fringe_period=period)
        _write_pattern_csv(outdir / "windowed_erase.csv", "x1_m",
                           erase_rec.x1, erase_rec.rate)
        _write_pattern_csv(outdir / "windowed_read.csv", "x1_m",
                           read_rec.x1, read_rec.rate)
        if erase_rec.visibility is not None:
            stats["windowed_erase_visibility"] = erase_rec.visibility
        region = _central_fringe_region(setup)
        stats["windowed_read_flatness"] = pattern_flatness(read_rec, region)
    return stats


def _run_audit(setup, outdir: Path) -> tuple[dict, bool]:
    geometry = geometry_audit(setup)
    timing = delayed_choice_audit(setup)
    lines = geometry.lines() + timing.lines()
    (outdir / "audit.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return ({"audit_passed": geometry.passed and timing.passed},
            geometry.passed and timing.passed)


def run(config: RunConfig) -> int:
    """Execute one configured experiment; returns the process exit code."""
    try:
        setup = paper_setup(PRESETS[config.preset]) if config.preset else config.setup
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except (OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    grid = default_grid(setup, config.grid.n_points, config.grid.extent)
    source = biphoton_source(setup, grid)
    summary: dict = {
        "experiment": config.experiment,
        "preset": config.preset or "custom",
        "grid_n_points": grid.n_points,
        "grid_extent_m": grid.extent,
    }
    exit_code = 0

    if config.experiment == "ghost_image":
        summary.update(_run_ghost(setup, grid, source, outdir))
    elif config.experiment == "erase":
        summary.update(_run_erase(setup, grid, source, outdir))
    elif config.experiment == "read":
        summary.update(_run_read(setup, grid, source, outdir))
    elif config.experiment == "mca":
        summary.update(_run_mca(setup, grid, source, config, outdir,
                                write_windowed=False))
    elif config.experiment == "audit":
        stats, passed = _run_audit(setup, outdir)
        summary.update(stats)
        if not passed:
            exit_code = 3
    elif config.experiment == "full_eraser":
        summary.update(_run_erase(setup, grid, source, outdir))
        summary.update(_run_read(setup, grid, source, outdir))
        summary.update(_run_mca(setup, grid, source, config, outdir,
                                write_windowed=True))
        stats, _ = _run_audit(setup, outdir)
        summary.update(stats)

    lines = [f"{key}={_fmt(val) if isinstance(val, float) else val}"
             for key, val in summary.items()]
    (outdir / "summary.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return exit_code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="biphoton-eraser",
        description="Delayed-choice quantum-eraser simulator: emits CSV "
                    "pattern/histogram data and audit reports.",
    )
    parser.add_argument("--config", help="JSON run-configuration file")
    parser.add_argument("--preset", help=f"named setup: {sorted(PRESETS)}")
    parser.add_argument("--experiment", help=f"one of {EXPERIMENTS}")
    parser.add_argument("--events", type=int, help="Monte Carlo event count")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--grid-n", type=int, help="grid points (power of two)")
    parser.add_argument("--out", help="output directory")
    args = parser.parse_args(argv)

    try:
        if args.config:
            if args.preset or args.experiment:
                raise ConfigError("--config cannot be combined with --preset/--experiment")
            config = parse_config(args.config)
        else:
            if not (args.preset and args.experiment):
                raise ConfigError("need --config, or both --preset and --experiment")
            config = build_config({"experiment": args.experiment, "preset": args.preset})
        if args.events is not None:
            config.mc.n_events = args.events
        if args.seed is not None:
            config.mc.seed = args.seed
        if args.grid_n is not None:
            config.grid.n_points = args.grid_n
        if args.out is not None:
            config.output_dir = args.out
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    return run(config)


if __name__ == "__main__":
    sys.exit(main())
