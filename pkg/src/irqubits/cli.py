"""Batch front end: ``irqubits --config run.ini --out results --command all``.

The config is an INI file (see ``configs/default.ini``). Every key is
optional; command-line flags override the file. Exit status is 0 when every
enabled check passes, 1 when a check fails, 2 for a malformed configuration
and 3 for a numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import fields
from pathlib import Path

from . import io
from .kinematics import KinematicsError
from .phases import DivergentPhase, SingularConfiguration
from .pipelines import COMMANDS, RUNNERS, RunConfig

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

# INI section -> keys it may contain (all map onto RunConfig fields)
SECTIONS = {
    "run": ("command", "seed", "out_dir", "workers"),
    "physics": ("alpha", "v1", "v2", "x1", "x2", "ratio", "t0_schedule", "cancellation_limit"),
    "spin": ("state_file", "random_states", "max_pairs", "dressing_t", "dressing_t0"),
    "photon_grid": ("ir_schedule", "uv_cutoff", "n_radial", "n_polar", "n_azimuth"),
    "softcount": ("cloud_t", "soft_velocity"),
    "stationary": ("sigma", "stationary_momentum", "stationary_times"),
    "tolerances": ("identity_tol", "headline_tol", "dressed_number_tol", "ir_constancy", "r2_min", "decay_factor", "cauchy_tol"),
}
_VECTORS = {"v1", "v2", "x1", "x2", "soft_velocity", "stationary_momentum"}
_LISTS = {"t0_schedule", "ir_schedule", "stationary_times"}


class ConfigError(ValueError):
    pass


def _parse_value(name: str, raw: str, default):
    try:
        if name in _VECTORS or name in _LISTS:
            vals = tuple(float(x) for x in raw.replace(",", " ").split())
            if name in _VECTORS and len(vals) != 3:
                raise ValueError("expected three components")
            return vals
        if name == "state_file":
            return raw or None
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {name!r}: {raw!r} ({exc})") from None


def load_config(path=None, **overrides) -> RunConfig:
    cfg = RunConfig()
    defaults = {f.name: getattr(cfg, f.name) for f in fields(RunConfig)}
    values = {}
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            if not parser.read(path):
                raise ConfigError(f"cannot read config file {path}")
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        base = Path(path).resolve().parent
        for section in parser.sections():
            if section not in SECTIONS:
                raise ConfigError(f"{path}: unknown section [{section}]")
            for key, raw in parser.items(section):
                if key not in SECTIONS[section]:
                    raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
                values[key] = _parse_value(key, raw.strip(), defaults[key])
        if values.get("state_file") and not Path(values["state_file"]).is_absolute():
            values["state_file"] = str(base / values["state_file"])
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**{**defaults, **values}).validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def write_artifacts(name: str, tables: dict, out: Path) -> list[Path]:
    written = []
    for key, obj in tables.items():
        if key in ("rho_free", "rho_dressed"):
            written.append(io.write_density_json(obj, out / f"{key}.json"))
            written.append(io.write_density_csv(obj, out / f"{key}.csv"))
        elif isinstance(obj, list):
            written.append(io.write_csv(out / f"{key}.csv", obj, list(obj[0])))
        else:
            written.append(io.write_json(out / f"{key}.json", obj))
    return written


def run(cfg: RunConfig, out: Path, stream=None) -> int:
    stream = stream or sys.stdout
    out.mkdir(parents=True, exist_ok=True)
    commands = COMMANDS if cfg.command == "all" else (cfg.command,)
    verdict = {}
    for name in commands:
        tables, checks = RUNNERS[name](cfg)
        write_artifacts(name, tables, out)
        payload = {k: c.as_dict() for k, c in checks.items()}
        if name in ("cancellation", "softcount", "stationary"):
            io.write_json(out / f"{name}_checks.json", payload)
        verdict[name] = payload
        for check, c in checks.items():
            flag = "PASS" if c.passed else "FAIL"
            print(f"{flag} {name}:{check} value={c.value!r} threshold={c.threshold!r}", file=stream)
    passed = all(c["passed"] for block in verdict.values() for c in block.values())
    if cfg.command == "all":
        io.write_json(out / "verdict.json", {"seed": cfg.seed, "passed": passed, "checks": verdict})
    print(f"overall: {'PASS' if passed else 'FAIL'}", file=stream)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irqubits", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="INI run configuration")
    ap.add_argument("--out", help="output directory (default: [run] out_dir or ./out)")
    ap.add_argument("--seed", type=int, help="seed for the random spin-state sweep")
    ap.add_argument("--tolerance", type=float, help="override the identity tolerance (default 1e-12)")
    ap.add_argument("--command", choices=COMMANDS + ("all",), help="pipeline to run (default: all)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, command=args.command, seed=args.seed, identity_tol=args.tolerance)
        if args.seed is not None and args.seed < 0:
            raise ConfigError("seed must be non-negative")
    except ConfigError as exc:
        print(f"irqubits: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out or cfg.out_dir)
    try:
        return run(cfg, out)
    except (SingularConfiguration, DivergentPhase, KinematicsError) as exc:
        print(
            f"irqubits: numerical failure: {exc} "
            f"[v1={cfg.v1} v2={cfg.v2} x1={cfg.x1} x2={cfg.x2} t0_schedule={cfg.t0_schedule} ratio={cfg.ratio}]",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
