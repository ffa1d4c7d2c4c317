"""Command-line front end: named scenario runs, CSV results, run manifest.

Scenarios
---------
fig3   polarization-angle map across the array at two RX distances
fig5   improvement statistics versus the RX angle at a fixed 10 cm range
fig6   improvement statistics versus the RX distance at a 30 degree angle
fig7   ergodic achievable rates versus the RX distance
sweep  improvement statistics and rates over the full angle x distance grid
check  narrowband-validity table over the configured distances

Each run writes one ``<scenario>.csv`` plus a ``manifest.json`` that echoes
the resolved configuration and derived quantities. CSV bodies are
deterministic: rerunning a scenario with the same configuration reproduces
them byte for byte (timestamps live only in the manifest).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .beamforming import dpc_beamformer, polarization_angle_map
from .channel import ChannelGeometry
from .experiments import (
    SweepConfig,
    distance_sweep,
    ergodic_rate,
    improvement_stats,
    narrowband_check,
    orientation_sweep,
)
from .geometry import Z_HAT, build_circular_array, orientation_grid, rx_position
from .perf import tune_process_allocator

EXIT_OK = 0
EXIT_CONFIG_ERROR = 3
EXIT_OUTPUT_ERROR = 4

FIG3_DISTANCES_M = (0.15, 1.0)
FIG3_ALPHA = math.radians(30.0)
FIG5_DISTANCE_M = 0.10
FIG6_ALPHA = math.radians(30.0)

REQUIRED_KEYS = (
    "radius_m",
    "carrier_frequency_hz",
    "bandwidth_hz",
    "transmit_power_w",
    "alpha_deg",
    "distance_m",
    "azimuth_step_deg",
    "elevation_step_deg",
)
OPTIONAL_KEYS = ("noise_power_w",)
LIST_KEYS = ("alpha_deg", "distance_m")


class ConfigError(ValueError):
    "Raised when a run configuration file is missing, malformed or invalid."


def default_config() -> SweepConfig:
    "Built-in configuration used when no config file is given."
    return SweepConfig()


def parse_config_text(text: str) -> SweepConfig:
    """Parse the flat ``key = value`` configuration format.

    Lines starting with ``#`` and blank lines are ignored. List values are
    comma separated. Angles are degrees at this interface and radians
    internally; lengths are meters, frequencies Hz, powers watts.
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        raw[key] = value
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    def scalar(key: str) -> float:
        try:
            return float(raw[key])
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw[key]!r} is not a number") from None

    def listing(key: str) -> list[float]:
        try:
            return [float(part) for part in raw[key].split(",")]
        except ValueError:
            raise ConfigError(f"key {key!r}: {raw[key]!r} is not a comma-separated list") from None

    noise = scalar("noise_power_w") if "noise_power_w" in raw else None
    try:
        return SweepConfig(
            radius=scalar("radius_m"),
            carrier_frequency=scalar("carrier_frequency_hz"),
            bandwidth=scalar("bandwidth_hz"),
            transmit_power=scalar("transmit_power_w"),
            alpha_values=tuple(math.radians(a) for a in listing("alpha_deg")),
            distance_values=tuple(listing("distance_m")),
            azimuth_step=math.radians(scalar("azimuth_step_deg")),
            elevation_step=math.radians(scalar("elevation_step_deg")),
            noise_power=noise,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> SweepConfig:
    "Read and validate a configuration file."
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config_text(text)


def _deg(angle_rad: float) -> float:
    # stabilize the radians->degrees round trip at far-below-physical precision
    return round(math.degrees(angle_rad), 12)


def config_to_mapping(config: SweepConfig) -> dict:
    "Config echo in file units; feeding it back to the parser is equivalent."
    return {
        "radius_m": config.radius,
        "carrier_frequency_hz": config.carrier_frequency,
        "bandwidth_hz": config.bandwidth,
        "transmit_power_w": config.transmit_power,
        "noise_power_w": config.noise_power,
        "alpha_deg": [_deg(a) for a in config.alpha_values],
        "distance_m": list(config.distance_values),
        "azimuth_step_deg": _deg(config.azimuth_step),
        "elevation_step_deg": _deg(config.elevation_step),
    }


def mapping_to_config_text(mapping: dict) -> str:
    "Render a config echo back into the flat file format."
    lines = []
    for key, value in mapping.items():
        if isinstance(value, list):
            lines.append(f"{key} = {', '.join(repr(float(v)) for v in value)}")
        else:
            lines.append(f"{key} = {float(value)!r}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("refusing to write a non-finite value to CSV")
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _stats_columns(prefix: str) -> list[str]:
    return [
        f"{prefix}_median_db",
        f"{prefix}_lower_quartile_db",
        f"{prefix}_upper_quartile_db",
        f"{prefix}_lower_whisker_db",
        f"{prefix}_upper_whisker_db",
    ]


def _stats_values(stats) -> tuple:
    return (
        stats.median,
        stats.lower_quartile,
        stats.upper_quartile,
        stats.lower_whisker,
        stats.upper_whisker,
    )


def run_fig3(config, layout, out_dir: Path, workers: int) -> list[Path]:
    header = ["distance_m", "antenna_index", "x_m", "y_m", "pol_angle_deg", "nonlinear"]
    rows = []
    for d in FIG3_DISTANCES_M:
        geom = ChannelGeometry(layout, rx_position(d, FIG3_ALPHA))
        pol = polarization_angle_map(dpc_beamformer(geom.channel_for(Z_HAT)))
        angles_deg = np.degrees(pol.angles)
        if not np.all(np.isfinite(angles_deg)):
            raise ValueError("polarization map contains undefined angles")
        xs = layout.positions[:, 0]
        ys = layout.positions[:, 1]
        rows.extend(
            (d, k, xs[k], ys[k], angles_deg[k], bool(pol.nonlinear[k]))
            for k in range(layout.n_tx)
        )
    path = out_dir / "fig3.csv"
    _write_csv(path, header, rows)
    return [path]


def run_fig5(config, layout, out_dir: Path, workers: int) -> list[Path]:
    grid = orientation_grid(config.azimuth_step, config.elevation_step)
    budget = config.budget()
    header = ["alpha_deg", "sample_count"] + _stats_columns("switched") + _stats_columns("dual")
    rows = []
    for alpha in config.alpha_values:
        records = orientation_sweep(
            layout, alpha, FIG5_DISTANCE_M, budget,
            grid=grid, workers=workers, bandwidth=config.bandwidth,
        )
        sw = improvement_stats(records, "switched")
        du = improvement_stats(records, "dual")
        rows.append(
            (_deg(alpha), sw.sample_count) + _stats_values(sw) + _stats_values(du)
        )
    path = out_dir / "fig5.csv"
    _write_csv(path, header, rows)
    return [path]


def run_fig6(config, layout, out_dir: Path, workers: int) -> list[Path]:
    grid = orientation_grid(config.azimuth_step, config.elevation_step)
    results = distance_sweep(
        layout, FIG6_ALPHA, config.distance_values, config.budget(),
        grid=grid, workers=workers, bandwidth=config.bandwidth,
    )
    header = ["distance_m", "sample_count"] + _stats_columns("switched") + _stats_columns("dual")
    rows = [
        (r.distance, r.vs_switched.sample_count)
        + _stats_values(r.vs_switched)
        + _stats_values(r.vs_dual)
        for r in results
    ]
    path = out_dir / "fig6.csv"
    _write_csv(path, header, rows)
    return [path]


def run_fig7(config, layout, out_dir: Path, workers: int) -> list[Path]:
    grid = orientation_grid(config.azimuth_step, config.elevation_step)
    results = distance_sweep(
        layout, FIG6_ALPHA, config.distance_values, config.budget(),
        grid=grid, workers=workers, bandwidth=config.bandwidth,
    )
    header = ["distance_m", "sample_count", "rate_dpc_bps", "rate_dual_bps", "rate_switched_bps"]
    rows = []
    for r in results:
        rates = ergodic_rate(r.records, config.bandwidth)
        rows.append((r.distance, len(r.records)) + rates)
    path = out_dir / "fig7.csv"
    _write_csv(path, header, rows)
    return [path]


def run_sweep(config, layout, out_dir: Path, workers: int) -> list[Path]:
    grid = orientation_grid(config.azimuth_step, config.elevation_step)
    budget = config.budget()
    header = (
        ["alpha_deg", "distance_m", "sample_count"]
        + _stats_columns("switched")
        + _stats_columns("dual")
        + ["rate_dpc_bps", "rate_dual_bps", "rate_switched_bps"]
    )
    rows = []
    for alpha in config.alpha_values:
        for d in config.distance_values:
            records = orientation_sweep(
                layout, alpha, d, budget,
                grid=grid, workers=workers, bandwidth=config.bandwidth,
            )
            sw = improvement_stats(records, "switched")
            du = improvement_stats(records, "dual")
            rates = ergodic_rate(records, config.bandwidth)
            rows.append(
                (_deg(alpha), d, sw.sample_count)
                + _stats_values(sw)
                + _stats_values(du)
                + rates
            )
    path = out_dir / "sweep.csv"
    _write_csv(path, header, rows)
    return [path]


def run_check(config, layout, out_dir: Path, workers: int) -> list[Path]:
    header = [
        "distance_m",
        "radius_m",
        "bandwidth_hz",
        "delay_spread_s",
        "max_delay_spread_s",
        "narrowband_valid",
    ]
    rows = []
    for d in config.distance_values:
        delay, valid = narrowband_check(d, config.radius, config.bandwidth)
        rows.append((d, config.radius, config.bandwidth,
                     delay, 0.1 / config.bandwidth, valid))
    path = out_dir / "check.csv"
    _write_csv(path, header, rows)
    return [path]


SCENARIOS = {
    "fig3": run_fig3,
    "fig5": run_fig5,
    "fig6": run_fig6,
    "fig7": run_fig7,
    "sweep": run_sweep,
    "check": run_check,
}


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpcfocus",
        description="Near-field polarized link simulator: scenario runs and sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=f"run the {name} scenario")
        sp.add_argument("--config", default=None, help="path to a key=value config file")
        sp.add_argument("--out", default="out", help="output directory (default: ./out)")
        sp.add_argument(
            "--scale", type=_positive_float, default=1.0,
            help="multiply the array radius by this factor for reduced-size runs",
        )
        sp.add_argument(
            "--threads", type=_positive_int, default=1,
            help="worker threads for orientation sweeps (results are identical)",
        )
    return parser


def main(argv=None) -> int:
    tune_process_allocator()
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else default_config()
        if args.scale != 1.0:
            config = config.scaled(args.scale)
    except ConfigError as exc:
        print(f"dpcfocus: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write-probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        print(f"dpcfocus: cannot write to output directory {out_dir}: {exc}", file=sys.stderr)
        return EXIT_OUTPUT_ERROR

    layout = build_circular_array(config.radius, config.wavelength)
    started = time.perf_counter()
    outputs = SCENARIOS[args.command](config, layout, out_dir, args.threads)
    elapsed = time.perf_counter() - started

    grid = orientation_grid(config.azimuth_step, config.elevation_step)
    manifest = {
        "tool": "dpcfocus",
        "tool_version": __version__,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "scenario": args.command,
        "scale": args.scale,
        "threads": args.threads,
        "runtime_s": elapsed,
        "config": config_to_mapping(config),
        "derived": {
            "n_tx": layout.n_tx,
            "wavelength_m": config.wavelength,
            "noise_power_w": config.noise_power,
            "orientation_count": int(grid.shape[0]),
        },
        "box_plot": {
            "quartiles": "linear interpolation",
            "whiskers": "1.5*IQR beyond the quartiles, clamped to data extremes",
        },
        "outputs": [p.name for p in outputs],
    }
    with open(out_dir / "manifest.json", "w") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
