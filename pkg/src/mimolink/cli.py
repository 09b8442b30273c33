"""Command-line front end: config ingestion, CSV/SVG emission, manifests.

Commands take a JSON config file plus overriding flags, validate everything
before any computation starts, and write output files only after the full
result is in hand.  Numeric CSV cells use 17 significant digits and ``\\n``
line ends so file digests are platform-stable.  Exit codes: 0 success,
2 invalid config, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import (
    CapacityCurve,
    SweepConfig,
    classic_mux_gain,
    finite_snr_mux_gain,
    monte_carlo_sweep,
)
from .channel import ArrayGeometry, RayPath, path_channel, rayleigh_channel
from .detect import link_demo
from .errors import MimoLinkError
from .svgplot import AxisSpec, render_svg
from .waterfill import WaterfillProblem, capacity_from_allocation, waterfill_multi

COMMANDS = ("channel-gen", "link-demo", "waterfill", "capacity-sweep", "mux-gain")

DEFAULT_SNR_GRID_DB = list(range(0, 125, 5))


class ConfigError(Exception):
    """Invalid run configuration; reported on exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    master_seed: int
    output_dir: Path


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    version: str
    duration_seconds: float
    outputs: list[dict]


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def _require(params: dict, allowed: dict) -> dict:
    """Check key set and basic types; fill defaults. ``allowed`` maps key -> (default, checker)."""
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    out = {}
    for key, (default, checker) in allowed.items():
        if key in params:
            out[key] = checker(params[key], key)
        elif default is not None:
            out[key] = default
        else:
            raise ConfigError(f"missing required config field: {key}")
    return out


def _pos_int(v, key):
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ConfigError(f"{key} must be a positive integer, got {v!r}")
    return v


def _nonneg_number(v, key):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or v < 0:
        raise ConfigError(f"{key} must be a nonnegative number, got {v!r}")
    return float(v)


def _any(v, _key):
    return v


# ----------------------------------------------------------------- commands

def _validate_channel_gen(params):
    model = params.get("model", "rayleigh")
    if model == "rayleigh":
        spec = {"model": ("rayleigh", _any), "nt": (None, _pos_int), "nr": (None, _pos_int),
                "realizations": (None, _pos_int)}
        return _require(params, spec)
    if model == "path":
        spec = {"model": ("path", _any), "paths": (None, _any), "tx": (None, _any), "rx": (None, _any)}
        out = _require(params, spec)
        if not isinstance(out["paths"], list) or not out["paths"]:
            raise ConfigError("paths must be a nonempty list")
        try:
            out["paths"] = [
                RayPath(beta=complex(p["beta"][0], p["beta"][1]),
                        aod_rad=float(p["aod_rad"]), aoa_rad=float(p["aoa_rad"]),
                        delay_s=float(p.get("delay_s", 0.0)))
                for p in out["paths"]
            ]
            out["tx"] = ArrayGeometry(int(out["tx"]["elements"]), float(out["tx"]["spacing_wavelengths"]))
            out["rx"] = ArrayGeometry(int(out["rx"]["elements"]), float(out["rx"]["spacing_wavelengths"]))
        except (KeyError, TypeError, IndexError, MimoLinkError) as exc:
            raise ConfigError(f"invalid path-channel description: {exc}") from exc
        return out
    raise ConfigError(f"unknown channel model {model!r}")


def _run_channel_gen(params, seed):
    rows = []
    if params["model"] == "rayleigh":
        for k in range(params["realizations"]):
            g = rayleigh_channel(params["nt"], params["nr"], seed, k).g
            rows.extend((k, i, j, g[i, j].real, g[i, j].imag)
                        for i in range(g.shape[0]) for j in range(g.shape[1]))
    else:
        g = path_channel(params["paths"], params["tx"], params["rx"])
        rows.extend((0, i, j, g[i, j].real, g[i, j].imag)
                    for i in range(g.shape[0]) for j in range(g.shape[1]))
    files = {"channels.csv": _csv(["realization", "row", "col", "re", "im"], rows)}
    table = {"entry": list(range(len(rows))),
             "re": [r[3] for r in rows], "im": [r[4] for r in rows]}
    plot = render_svg(table, AxisSpec("entry", "matrix entry (flattened)", "gain"))
    return files, {"channels.svg": plot}, []


def _validate_link_demo(params):
    spec = {"length": (100, _pos_int), "noise_variance": (0.01, _nonneg_number)}
    out = _require(params, spec)
    if out["length"] < 10:
        raise ConfigError(f"length must be >= 10, got {out['length']}")
    return out


def _run_link_demo(params, seed):
    result = link_demo(seed, params["length"], params["noise_variance"])
    rows = []
    for name, values in result.series.items():
        rows.extend((name, k, v.real, v.imag) for k, v in enumerate(values))
    files = {"link_demo.csv": _csv(["series", "sample_index", "re", "im"], rows)}
    table = {"sample_index": list(range(params["length"]))}
    for name, values in result.series.items():
        table[f"{name}_re"] = list(values.real)
        table[f"{name}_im"] = list(values.imag)
    plot = render_svg(table, AxisSpec("sample_index", "sample index", "amplitude"))
    notes = [f"{kind} overall mse: {_fmt(rep.overall_mse)}" for kind, rep in result.reports.items()]
    return files, {"link_demo.svg": plot}, notes


def _validate_waterfill(params):
    spec = {"total_power": (None, _any), "noise": (None, _any)}
    out = _require(params, spec)
    try:
        out["problem"] = WaterfillProblem(np.asarray(out.pop("total_power"), dtype=float),
                                          np.asarray(out.pop("noise"), dtype=float))
    except (MimoLinkError, TypeError) as exc:
        raise ConfigError(f"invalid water-filling problem: {exc}") from exc
    return out


def _run_waterfill(params, _seed):
    problem = params["problem"]
    allocation = waterfill_multi(problem)
    pairs = problem.per_subcarrier()
    noise = np.vstack([pn for _, pn in pairs])
    total = capacity_from_allocation(allocation, 1.0 / noise)
    rows = [
        (l, n, noise[l, n], allocation.alloc[l, n], allocation.water_level[l])
        for l in range(noise.shape[0]) for n in range(noise.shape[1])
    ]
    files = {"waterfill.csv": _csv(["subcarrier", "channel", "noise", "allocated", "water_level"], rows)}
    table = {"channel": list(range(noise.shape[1]))}
    for l in range(noise.shape[0]):
        table[f"noise s{l}"] = list(noise[l])
        table[f"allocated s{l}"] = list(allocation.alloc[l])
        table[f"level s{l}"] = [allocation.water_level[l]] * noise.shape[1]
    plot = render_svg(table, AxisSpec("channel", "channel", "power"))
    return files, {"waterfill.svg": plot}, [f"total capacity: {_fmt(total)} bit/s/Hz"]


def _validate_sweep(params, default_grid):
    spec = {"realizations": (None, _pos_int), "nt": (None, _pos_int), "nr": (None, _pos_int),
            "snr_db": (default_grid, _any), "kappas": ([0.0], _any)}
    return _require(params, spec)


def _sweep_config(params, seed) -> SweepConfig:
    try:
        return SweepConfig(
            n_realizations=params["realizations"], nt=params["nt"], nr=params["nr"],
            snr_db_grid=np.asarray(params["snr_db"], dtype=float),
            kappas=np.asarray(params["kappas"], dtype=float),
            master_seed=seed,
        )
    except (MimoLinkError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid sweep config: {exc}") from exc


def _validate_capacity_sweep(params):
    out = _validate_sweep(params, DEFAULT_SNR_GRID_DB)
    _sweep_config(out, 0)  # shape/domain check only
    return out


def _curve_rows(curve: CapacityCurve):
    rows = []
    for i, kappa in enumerate(curve.kappas):
        rows.extend(
            (kappa, snr_db, curve.mean_capacity[i, m], curve.std_error[i, m], curve.limits[i])
            for m, snr_db in enumerate(curve.snr_db)
        )
    return rows


def _run_capacity_sweep(params, seed, workers=1):
    curve = monte_carlo_sweep(_sweep_config(params, seed), workers=workers)
    files = {"capacity_sweep.csv": _csv(
        ["kappa", "snr_db", "mean_capacity", "std_error", "limit"], _curve_rows(curve))}
    table = {"snr_db": list(curve.snr_db)}
    for i, kappa in enumerate(curve.kappas):
        label = format(kappa, "g")
        table[f"capacity k={label}"] = list(curve.mean_capacity[i])
        if np.isfinite(curve.limits[i]):
            table[f"limit k={label}"] = [curve.limits[i]] * curve.snr_db.size
    plot = render_svg(table, AxisSpec("snr_db", "SNR (dB)", "capacity (bit/s/Hz)"))
    return files, {"capacity_sweep.svg": plot}, []


def _validate_mux_gain(params):
    out = _validate_sweep(params, [float(v) for v in DEFAULT_SNR_GRID_DB if v > 0])
    cfg = _sweep_config(out, 0)
    if cfg.snr_db_grid[0] <= 0:
        raise ConfigError("mux-gain needs every SNR above 0 dB (classic gain divides by log2 SNR)")
    return out


def _run_mux_gain(params, seed, workers=1):
    mimo_cfg = _sweep_config(params, seed)
    siso_params = dict(params, nt=1, nr=1)
    siso_cfg = _sweep_config(siso_params, seed)
    mimo = monte_carlo_sweep(mimo_cfg, workers=workers)
    siso = monte_carlo_sweep(siso_cfg, workers=workers)
    finite = finite_snr_mux_gain(mimo, siso)
    classic = np.column_stack([classic_mux_gain(mimo, db) for db in mimo.snr_db])
    rows = []
    for i, kappa in enumerate(mimo.kappas):
        rows.extend((kappa, snr_db, finite[i, m], classic[i, m])
                    for m, snr_db in enumerate(mimo.snr_db))
    files = {"mux_gain.csv": _csv(["kappa", "snr_db", "gain_finite", "gain_classic"], rows)}
    table = {"snr_db": list(mimo.snr_db)}
    for i, kappa in enumerate(mimo.kappas):
        label = format(kappa, "g")
        table[f"finite k={label}"] = list(finite[i])
        table[f"classic k={label}"] = list(classic[i])
    plot = render_svg(table, AxisSpec("snr_db", "SNR (dB)", "multiplexing gain"))
    return files, {"mux_gain.svg": plot}, []


_VALIDATORS = {
    "channel-gen": _validate_channel_gen,
    "link-demo": _validate_link_demo,
    "waterfill": _validate_waterfill,
    "capacity-sweep": _validate_capacity_sweep,
    "mux-gain": _validate_mux_gain,
}


# ---------------------------------------------------------------- execution

def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def run(config: RunConfig, plot: bool = False, workers: int = 1) -> RunManifest:
    """Execute one validated command and write its outputs plus a manifest."""
    start = time.monotonic()
    if config.command == "channel-gen":
        files, plots, notes = _run_channel_gen(config.params, config.master_seed)
    elif config.command == "link-demo":
        files, plots, notes = _run_link_demo(config.params, config.master_seed)
    elif config.command == "waterfill":
        files, plots, notes = _run_waterfill(config.params, config.master_seed)
    elif config.command == "capacity-sweep":
        files, plots, notes = _run_capacity_sweep(config.params, config.master_seed, workers)
    elif config.command == "mux-gain":
        files, plots, notes = _run_mux_gain(config.params, config.master_seed, workers)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown command {config.command!r}")
    if plot:
        files = {**files, **plots}
    duration = time.monotonic() - start

    config.output_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, content in files.items():
        data = content.encode()
        (config.output_dir / name).write_bytes(data)
        outputs.append({"path": name, "sha256": _sha256(data)})
    for line in notes:
        print(line)

    echo = {k: v for k, v in config.params.items()
            if isinstance(v, (int, float, str, list, dict, bool))}
    manifest = RunManifest(
        command=config.command,
        config={"params": echo, "master_seed": config.master_seed,
                "output_dir": str(config.output_dir)},
        version=__version__,
        duration_seconds=duration,
        outputs=outputs,
    )
    manifest_doc = {
        "command": manifest.command, "config": manifest.config, "version": manifest.version,
        "duration_seconds": manifest.duration_seconds, "outputs": manifest.outputs,
    }
    (config.output_dir / "run_manifest.json").write_text(
        json.dumps(manifest_doc, indent=2) + "\n")
    return manifest


def build_config(command: str, config_path: str | None, seed: int | None,
                 out_dir: str) -> RunConfig:
    """Load the JSON config, apply flag overrides, and validate."""
    params = {}
    if config_path is not None:
        try:
            params = json.loads(Path(config_path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {config_path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(params, dict):
            raise ConfigError("config file must hold a JSON object")
    master_seed = params.pop("master_seed", 0)
    if seed is not None:
        master_seed = seed
    if not isinstance(master_seed, int) or isinstance(master_seed, bool) or master_seed < 0:
        raise ConfigError(f"master_seed must be a nonnegative integer, got {master_seed!r}")
    validated = _VALIDATORS[command](params)
    return RunConfig(command=command, params=validated, master_seed=master_seed,
                     output_dir=Path(out_dir))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mimolink",
        description="MIMO link-level toolkit: channels, detection, water-filling, capacity",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--plot", action="store_true", help="also write SVG plots")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker processes for sweeps (speed only, never output bytes)")
    args = parser.parse_args(argv)

    if args.workers < 1:
        print("config error: --workers must be >= 1", file=sys.stderr)
        return 2
    try:
        config = build_config(args.command, args.config, args.seed, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        run(config, plot=args.plot, workers=args.workers)
    except MimoLinkError as exc:
        print(f"numeric failure in {config.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
