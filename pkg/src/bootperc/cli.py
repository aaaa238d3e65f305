"""Reproducible experiment runner.

A run is described by a YAML config (key/value, nesting allowed for lists)
naming one command; a few scalar keys can be overridden by flags with
precedence flag > file > default. Each run writes one CSV per logical
table plus a meta.json sidecar echoing the resolved config, the tool
version, a timestamp, and per-file row counts.

Every CSV row carries the derived seed that regenerates it in isolation.
Result CSVs are byte-deterministic for a fixed config; meta.json differs
only in its timestamp. Exit codes: 0 success, 2 config error, 3 capacity
error, 4 internal invariant violation (reproduction material is archived).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import yaml

from . import bounds as bounds_mod
from . import certify, engine, oracle, sampler
from .errors import CapacityError, InternalFault
from .lattice import Boundary, LatticeShape, Region, parse_site

VERSION = "0.1.0"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config handling

_COMMON_KEYS = {"command", "out", "threads", "master_seed"}

_COMMAND_KEYS: dict[str, set[str]] = {
    "simulate": {"d", "n", "boundary", "r", "p"},
    "sweep": {"d", "n", "boundary", "r", "p", "trials"},
    "eta": {"d", "m", "p", "trials"},
    "pc": {"d", "n", "boundary", "r", "trials_per_probe", "tol"},
    "certify": {"d", "n", "boundary", "r", "t", "position", "axis"},
    "audit": {"m", "p", "trials"},
    "oracle": {"d", "n", "boundary", "r", "m", "p"},
    "path": {"d", "n", "boundary", "r", "p", "x", "t"},
    "bounds": {
        "formula", "d", "r", "n", "p", "t", "t_prime", "m", "L",
        "lam", "delta", "p0", "C", "B", "eta_m",
    },
}


@dataclass
class ExperimentConfig:
    command: str
    out: Path
    master_seed: int
    threads: int
    values: dict[str, Any]

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    def require(self, key: str) -> Any:
        if key not in self.values:
            raise ConfigError(f"command {self.command!r} requires key {key!r}")
        return self.values[key]


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_mapping(raw, overrides)


def config_from_mapping(
    raw: Any, overrides: dict[str, Any] | None = None
) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping of keys to values")
    raw = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    command = raw.get("command")
    if command not in _COMMAND_KEYS:
        raise ConfigError(
            f"unknown command {command!r}; expected one of {sorted(_COMMAND_KEYS)}"
        )
    allowed = _COMMON_KEYS | _COMMAND_KEYS[command]
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"unknown keys for command {command!r}: {sorted(unknown)}")
    return ExperimentConfig(
        command=command,
        out=Path(raw.get("out", "out")),
        master_seed=_as_int(raw.get("master_seed", 0), "master_seed"),
        threads=_as_int(raw.get("threads", 1), "threads"),
        values={k: v for k, v in raw.items() if k not in _COMMON_KEYS},
    )


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _as_float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    return float(value)


def _as_list(value: Any) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _shape_from(config: ExperimentConfig, n: int) -> LatticeShape:
    boundary_text = config.get("boundary", "torus")
    try:
        boundary = Boundary(boundary_text)
    except ValueError as exc:
        raise ConfigError(
            f"boundary must be 'torus' or 'open', got {boundary_text!r}"
        ) from exc
    try:
        return LatticeShape(_as_int(config.require("d"), "d"), n, boundary)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Output helpers


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class _OutputDir:
    def __init__(self, root: Path):
        self.root = root
        self.row_counts: dict[str, int] = {}
        root.mkdir(parents=True, exist_ok=True)

    def write_csv(self, name: str, header: list[str], rows: list[list[Any]]) -> None:
        with open(self.root / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.row_counts[name] = len(rows)

    def write_text(self, name: str, text: str) -> None:
        (self.root / name).write_text(text, encoding="utf-8")

    def finish(self, config: ExperimentConfig) -> None:
        meta = {
            "config": {
                "command": config.command,
                "out": str(config.out),
                "master_seed": config.master_seed,
                "threads": config.threads,
                **config.values,
            },
            "version": VERSION,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "master_seed": config.master_seed,
            "row_counts": self.row_counts,
        }
        with open(self.root / "meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# Commands


def _cmd_simulate(config: ExperimentConfig, out: _OutputDir) -> None:
    shape = _shape_from(config, _as_int(config.require("n"), "n"))
    r = _as_int(config.require("r"), "r")
    p = _as_float(config.require("p"), "p")
    field = sampler.bernoulli_field(shape, p, config.master_seed)
    schedule = engine.evolve_until_fixation(field, engine.ProcessParams(shape, r))
    header = ["site_index"] + [f"x{i}" for i in range(1, shape.d + 1)] + ["time"]
    rows = []
    for index in range(shape.volume):
        site = shape.site_at(index)
        t = int(schedule.times[index])
        rows.append([index, *site, "never" if t < 0 else t])
    out.write_csv("schedule.csv", header, rows)


def _rho(T: int | None, p: float, n: int) -> float | None:
    if T is None:
        return None
    if T == 0:
        return 0.0
    return T * math.log(1.0 / (1.0 - p)) / math.log(n)


def _cmd_sweep(config: ExperimentConfig, out: _OutputDir) -> None:
    r = _as_int(config.require("r"), "r")
    trials = _as_int(config.require("trials"), "trials")
    n_list = [_as_int(v, "n") for v in _as_list(config.require("n"))]
    p_list = [_as_float(v, "p") for v in _as_list(config.require("p"))]
    if not n_list or not p_list:
        raise ConfigError("sweep requires non-empty n and p lists")
    rows = []
    for i_n, n in enumerate(n_list):
        shape = _shape_from(config, n)
        params = engine.ProcessParams(shape, r)
        for i_p, p in enumerate(p_list):
            for trial in range(trials):
                seed = sampler.derive_seed(config.master_seed, i_n, i_p, trial)
                field = sampler.bernoulli_field(shape, p, seed)
                T = engine.evolve_until_fixation(field, params).percolation_time()
                rows.append(
                    [shape.d, n, r, p, trial, seed,
                     "never" if T is None else T, _rho(T, p, n)]
                )
    out.write_csv(
        "times.csv",
        ["d", "n", "r", "p", "trial", "seed", "T_or_never", "rho"],
        rows,
    )


def _cmd_eta(config: ExperimentConfig, out: _OutputDir) -> None:
    d = _as_int(config.require("d"), "d")
    trials = _as_int(config.require("trials"), "trials")
    m_list = [_as_int(v, "m") for v in _as_list(config.require("m"))]
    p_list = [_as_float(v, "p") for v in _as_list(config.require("p"))]
    rows = []
    for i_m, m in enumerate(m_list):
        for i_p, p in enumerate(p_list):
            seed = sampler.derive_seed(config.master_seed, i_m, i_p)
            est = sampler.estimate_eta(m, d, p, trials, seed)
            rows.append(
                [d, m, p, trials, est.successes, est.point,
                 est.ci_low, est.ci_high, seed]
            )
    out.write_csv(
        "eta.csv",
        ["d", "m", "p", "trials", "bad_count", "eta_hat", "ci_low", "ci_high", "seed"],
        rows,
    )


def _cmd_pc(config: ExperimentConfig, out: _OutputDir) -> None:
    r = _as_int(config.require("r"), "r")
    trials_per_probe = _as_int(config.require("trials_per_probe"), "trials_per_probe")
    tol = _as_float(config.require("tol"), "tol")
    n_list = [_as_int(v, "n") for v in _as_list(config.require("n"))]
    probe_rows = []
    pc_rows = []
    for i_n, n in enumerate(n_list):
        shape = _shape_from(config, n)
        seed = sampler.derive_seed(config.master_seed, i_n)
        pc_hat, probes = sampler.estimate_pc_detailed(
            shape, r, trials_per_probe, tol, seed
        )
        for probe in probes:
            low, high = sampler.wilson_interval(probe.successes, probe.trials)
            probe_rows.append(
                [shape.d, n, shape.boundary.value, r, probe.p, probe.trials,
                 probe.successes, probe.point, low, high, seed]
            )
        pc_rows.append(
            [shape.d, n, shape.boundary.value, r, trials_per_probe, tol, seed, pc_hat]
        )
    out.write_csv(
        "perc.csv",
        ["d", "n", "boundary", "r", "p", "trials", "perc_count",
         "point", "ci_low", "ci_high", "seed"],
        probe_rows,
    )
    out.write_csv(
        "pc.csv",
        ["d", "n", "boundary", "r", "trials_per_probe", "tol", "seed", "pc_hat"],
        pc_rows,
    )


def _cmd_certify(config: ExperimentConfig, out: _OutputDir) -> None:
    shape = _shape_from(config, _as_int(config.require("n"), "n"))
    r = _as_int(config.require("r"), "r")
    t = _as_int(config.require("t"), "t")
    axis = _as_int(config.require("axis"), "axis")
    position_raw = config.require("position")
    position = (
        parse_site(position_raw)
        if isinstance(position_raw, str)
        else tuple(int(c) for c in position_raw)
    )
    params = engine.ProcessParams(shape, r)
    A0 = certify.plant_rectangle(shape, r, t, position, axis)
    T = engine.percolation_time(A0, params)
    extents = [2 * t + 1 if i == axis - 1 else 2 for i in range(shape.d)]
    planted_region = Region(
        tuple((pos, pos + ext - 1) for pos, ext in zip(position, extents))
    )
    planted_cert = certify.RectangleCertificate(planted_region, t)
    rows = []
    failures = []
    verified = certify.verify_lower_certificate(A0, params, planted_cert)
    rows.append(
        ["planted", t, planted_region.to_text(), verified,
         "never" if T is None else T, config.master_seed]
    )
    if not verified:
        failures.append(planted_cert)
    if t >= 1:
        found = certify.find_empty_rectangle(A0, t)
        if found is None:
            failures.append("planted rectangle not re-detected")
            rows.append(["found", t, "", False, "never" if T is None else T,
                         config.master_seed])
        else:
            found_ok = certify.verify_lower_certificate(A0, params, found)
            rows.append(
                ["found", t, found.region.to_text(), found_ok,
                 "never" if T is None else T, config.master_seed]
            )
            if not found_ok:
                failures.append(found)
    out.write_csv(
        "certificates.csv",
        ["kind", "t", "region", "verified", "T_or_never", "seed"],
        rows,
    )
    if failures:
        out.write_text("certify_failure_A0.bitmap", A0.to_text())
        raise InternalFault(
            "certificate verification failed; initial set archived as "
            "certify_failure_A0.bitmap"
        )


def _cmd_audit(config: ExperimentConfig, out: _OutputDir) -> None:
    m = _as_int(config.require("m"), "m")
    trials = _as_int(config.require("trials"), "trials")
    p_list = [_as_float(v, "p") for v in _as_list(config.require("p"))]
    rows = []
    total_counterexamples = 0
    for i_p, p in enumerate(p_list):
        seed = sampler.derive_seed(config.master_seed, i_p)
        result = certify.audit_seam_implication(m, p, trials, seed)
        for row in result.trials:
            rows.append(
                [m, p, row.seed, row.all_cubes_good, row.seam,
                 row.whole_good, row.counterexample]
            )
        for index, field in enumerate(result.samples):
            out.write_text(f"counterexample_p{i_p}_{index}.bitmap", field.to_text())
        total_counterexamples += result.counterexamples
    out.write_csv(
        "audit.csv",
        ["m", "p", "trial_seed", "A", "B", "E", "counterexample_flag"],
        rows,
    )
    if total_counterexamples:
        raise InternalFault(
            f"{total_counterexamples} seam-audit counterexample(s) found; "
            "bitmaps archived in the output directory"
        )


def _cmd_oracle(config: ExperimentConfig, out: _OutputDir) -> None:
    wrote = False
    if "n" in config.values:
        shape = _shape_from(config, _as_int(config.require("n"), "n"))
        r = _as_int(config.require("r"), "r")
        poly = oracle.exact_percolation_polynomial(shape, r)
        out.write_csv(
            "perc_poly.csv",
            ["k", "c_k"],
            [[k, c] for k, c in enumerate(poly.counts)],
        )
        wrote = True
    if "m" in config.values:
        d = _as_int(config.require("d"), "d")
        m_list = [_as_int(v, "m") for v in _as_list(config.require("m"))]
        p_list = [_as_float(v, "p") for v in _as_list(config.require("p"))]
        rows = [
            [m, d, p, oracle.exact_eta(m, d, p)]
            for m in m_list
            for p in p_list
        ]
        out.write_csv("eta_exact.csv", ["m", "d", "p", "eta_exact"], rows)
        wrote = True
    if not wrote:
        raise ConfigError(
            "oracle command needs 'n' (percolation polynomial) and/or 'm' "
            "(exact eta table)"
        )


def _cmd_path(config: ExperimentConfig, out: _OutputDir) -> None:
    shape = _shape_from(config, _as_int(config.require("n"), "n"))
    r = _as_int(config.require("r"), "r")
    p = _as_float(config.require("p"), "p")
    t = _as_int(config.require("t"), "t")
    x_raw = config.require("x")
    x = parse_site(x_raw) if isinstance(x_raw, str) else tuple(int(c) for c in x_raw)
    field = sampler.bernoulli_field(shape, p, config.master_seed)
    path = certify.extract_staircase(field, x, t, engine.ProcessParams(shape, r))
    header = ["step"] + [f"x{i}" for i in range(1, shape.d + 1)]
    out.write_csv("path.csv", header, [[k, *site] for k, site in enumerate(path)])


_BOUND_PARAM_COLUMNS = [
    "d", "r", "n", "p", "t", "t_prime", "m", "L",
    "lam", "delta", "p0", "C", "B", "eta_m",
]


def _cmd_bounds(config: ExperimentConfig, out: _OutputDir) -> None:
    formulas = {
        "blocking_set_count", "lower_tail_bound", "lower_time_threshold", "cube_scale",
        "cube_side_threshold", "cube_side_threshold_proof_form", "eta_upper_bound",
        "recursion_rhs", "origin_tail_bound", "upper_tail_bound", "path_weight",
    }
    requested = _as_list(config.get("formula", "all"))
    if requested == ["all"]:
        requested = sorted(formulas)
    unknown = set(requested) - formulas
    if unknown:
        raise ConfigError(f"unknown bound formulas: {sorted(unknown)}")
    p_list = [_as_float(v, "p") for v in _as_list(config.get("p", [None]))] \
        if config.get("p") is not None else [None]

    def params_for(p: float | None) -> dict[str, Any]:
        values = {key: config.get(key) for key in _BOUND_PARAM_COLUMNS}
        values["p"] = p
        if values.get("lam") is None and values.get("d") == 2 and values.get("r") == 2:
            values["lam"] = bounds_mod.LAMBDA_2D
        values.setdefault("p0", 0.1)
        if values.get("p0") is None:
            values["p0"] = 0.1
        if values.get("C") is None:
            values["C"] = 1.0
        if values.get("B") is None:
            values["B"] = 1.0
        return values

    def evaluate(name: str, v: dict[str, Any]) -> float | int | None:
        if name == "blocking_set_count":
            return bounds_mod.blocking_set_count(v["d"], v["r"], v["t"])
        if name == "lower_tail_bound":
            return bounds_mod.lower_tail_bound(v["n"], v["d"], v["p"], v["t"])
        if name == "lower_time_threshold":
            return bounds_mod.lower_time_threshold(v["n"], v["d"], v["p"])
        if name == "cube_scale":
            return bounds_mod.cube_scale(v["p"], v["d"], v["lam"], v["p0"])
        if name == "cube_side_threshold":
            return bounds_mod.cube_side_threshold(v["p"], v["delta"], v["d"], v["lam"], v["p0"])
        if name == "cube_side_threshold_proof_form":
            return bounds_mod.cube_side_threshold_proof_form(
                v["p"], v["delta"], v["d"], v["lam"], v["p0"]
            )
        if name == "eta_upper_bound":
            return bounds_mod.eta_upper_bound(v["L"], v["d"], v["p"], v["B"])
        if name == "recursion_rhs":
            return bounds_mod.recursion_rhs(
                v["m"], v["d"], v["p"], v["eta_m"], v["C"], v["B"]
            )
        if name == "origin_tail_bound":
            return bounds_mod.origin_tail_bound(v["t"], v["t_prime"], v["p"], v["C"])
        if name == "upper_tail_bound":
            return bounds_mod.upper_tail_bound(
                v["n"], v["d"], v["p"], v["t"], v["t_prime"]
            )
        if name == "path_weight":
            return bounds_mod.path_weight(v["L"], v["d"], v["p"], v["B"])
        raise AssertionError(name)

    rows = []
    for name in requested:
        for p in p_list:
            values = params_for(p)
            try:
                result = evaluate(name, values)
            except (TypeError, KeyError) as exc:
                raise ConfigError(
                    f"formula {name!r} is missing a required parameter: {exc}"
                ) from exc
            if result is None:
                value, clamped, overflow = None, None, False
            else:
                value = float(result)
                clamped = bounds_mod.clamp01(value)
                overflow = math.isinf(value)
            rows.append(
                [name, *(values[c] for c in _BOUND_PARAM_COLUMNS),
                 value, clamped, overflow]
            )
    out.write_csv(
        "bounds.csv",
        ["formula", *_BOUND_PARAM_COLUMNS, "value", "clamped_value", "overflow_flag"],
        rows,
    )


_DISPATCH = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "eta": _cmd_eta,
    "pc": _cmd_pc,
    "certify": _cmd_certify,
    "audit": _cmd_audit,
    "oracle": _cmd_oracle,
    "path": _cmd_path,
    "bounds": _cmd_bounds,
}


def run(config: ExperimentConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    out = _OutputDir(config.out)
    try:
        _DISPATCH[config.command](config, out)
    finally:
        out.finish(config)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bootperc",
        description="Reproducible bootstrap-percolation experiments",
    )
    parser.add_argument("--config", required=True, help="YAML experiment config")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")
    parser.add_argument("--threads", type=int, help="worker count (overrides config)")
    parser.add_argument("--trials", type=int, help="trial count (overrides config)")
    args = parser.parse_args(argv)
    overrides = {
        "out": args.out,
        "master_seed": args.seed,
        "threads": args.threads,
        "trials": args.trials,
    }
    try:
        config = load_config(args.config, overrides)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except InternalFault as exc:
        print(f"INTERNAL FAULT: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
