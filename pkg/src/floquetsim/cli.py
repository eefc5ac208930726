"""Command-line front end: `fqs simulate | verify | resources`.

Exit codes: 0 success, 1 bound violation, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import itertools
import json
import logging
import math
import os
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FloquetError, ValidationError, check_epsilon
from .hamiltonian import FourierHamiltonian, from_components, lcu_for

log = logging.getLogger("floquetsim")

PRESETS = ("DrivenQubit", "Hubbard2", "AdiabaticPrep", "GaussianPacket", "Custom")
REGIMES = ("Adiabatic", "LongTime")
LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def fmt(x) -> str:
    """CSV cell; floats with 17 significant digits."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


# --- configuration ---------------------------------------------------------------------

def _matrix(value, d: int, base: Path) -> np.ndarray:
    """Row-major interleaved (re, im) float64, inline list or {"file": path}."""
    if isinstance(value, dict):
        if "file" not in value:
            raise ValidationError("matrix object needs a 'file' key")
        arr = np.fromfile(base / value["file"], dtype="<f8")
    else:
        arr = np.asarray(value, dtype=float)
    if arr.size != 2 * d * d:
        raise ValidationError(f"matrix needs {2 * d * d} floats, got {arr.size}")
    return (arr[0::2] + 1j * arr[1::2]).reshape(d, d)


@dataclass
class Model:
    name: str
    H: FourierHamiltonian
    alphas: dict[int, float]


def build_model(cfg: dict, base: Path = Path(".")) -> Model:
    from . import presets

    name = cfg.get("preset", "DrivenQubit")
    params = dict(cfg.get("params", {}))
    try:
        if name == "DrivenQubit":
            m = presets.driven_qubit(**params)
        elif name == "Hubbard2":
            for k in ("eps", "V"):
                if k in params:
                    params[k] = tuple(params[k])
            m = presets.hubbard2(**params)
        elif name == "AdiabaticPrep":
            m = presets.adiabatic_prep(**params)
        elif name == "GaussianPacket":
            m = presets.gaussian_packet(**params)
        elif name == "Custom":
            c = cfg.get("custom")
            if not isinstance(c, dict) or not {"omega", "dim", "components"} <= c.keys():
                raise ValidationError("Custom preset needs custom.omega, custom.dim, custom.components")
            d = int(c["dim"])
            comps = {int(k): _matrix(v, d, base) for k, v in c["components"].items()}
            H = from_components(float(c["omega"]), comps)
            return Model(name, H, lcu_for(H).alphas)
        else:
            raise ValidationError(f"unknown preset {name!r}; expected one of {PRESETS}")
    except TypeError as exc:
        raise ValidationError(f"bad parameters for {name}: {exc}") from None
    return Model(m.name, m.H, m.lcu.alphas)


def _psi0(value, d: int, rng: np.random.Generator) -> np.ndarray:
    if value is None or value == "basis0":
        v = np.zeros(d, dtype=complex)
        v[0] = 1
        return v
    if value == "random":
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        return v / np.linalg.norm(v)
    arr = np.asarray(value, dtype=float)
    if arr.size != 2 * d:
        raise ValidationError(f"psi0 needs {2 * d} interleaved floats")
    v = arr[0::2] + 1j * arr[1::2]
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("psi0 is zero")
    return v / n


@dataclass
class ExperimentConfig:
    model: Model
    t: float
    epsilon: float
    regime: str
    seed: int
    psi0: np.ndarray
    outputs: list[str] = field(default_factory=lambda: ["state", "summary", "json"])


def parse_simulate(cfg: dict, seed: int | None, base: Path) -> ExperimentConfig:
    """All checks happen here, before any computation or output."""
    model = build_model(cfg, base)
    eps = cfg.get("epsilon")
    if not isinstance(eps, (int, float)):
        raise ValidationError("epsilon is required")
    check_epsilon(float(eps))
    if "t" in cfg:
        t = float(cfg["t"])
    elif "t_periods" in cfg:
        t = float(cfg["t_periods"]) * model.H.period
    else:
        raise ValidationError("t or t_periods is required")
    if not (t > 0 and math.isfinite(t)):
        raise ValidationError("t must be positive")
    regime = cfg.get("regime", "Adiabatic")
    if regime not in REGIMES:
        raise ValidationError(f"regime must be one of {REGIMES}")
    if regime == "LongTime" and t < model.H.period * (1 - 1e-12):
        raise ValidationError("LongTime regime needs t >= T")
    seed = int(cfg.get("seed", 0) if seed is None else seed)
    psi = _psi0(cfg.get("psi0"), model.H.dim, np.random.default_rng(seed))
    outputs = list(cfg.get("outputs", ["state", "summary", "json"]))
    bad = set(outputs) - {"state", "summary", "json"}
    if bad:
        raise ValidationError(f"unknown outputs {sorted(bad)}")
    return ExperimentConfig(model, t, float(eps), regime, seed, psi, outputs)


def _grid(v, name: str) -> list[float]:
    vals = v if isinstance(v, list) else [v]
    if not vals or not all(isinstance(x, (int, float)) for x in vals):
        raise ValidationError(f"{name} must be a number or list of numbers")
    return [float(x) for x in vals]


def parse_resources(cfg: dict) -> tuple[list[dict], list[str]]:
    from .bounds import REGIMES as ALL

    r = cfg.get("resources", cfg)
    keys = ("alpha", "gamma", "omega", "t", "epsilon")
    missing = [k for k in keys if k not in r]
    if missing:
        raise ValidationError(f"resources config misses {missing}")
    grids = {k: _grid(r[k], k) for k in keys}
    for e in grids["epsilon"]:
        check_epsilon(e)
    for k in ("alpha", "omega", "t"):
        if any(x <= 0 for x in grids[k]):
            raise ValidationError(f"{k} must be positive")
    if any(x < 0 for x in grids["gamma"]):
        raise ValidationError("gamma must be non-negative")
    regimes = list(r.get("regimes", ALL))
    if set(regimes) - set(ALL):
        raise ValidationError(f"regimes must be among {ALL}")
    extra = {"n_a": int(r.get("n_a", 1)), "p": int(r.get("p", 2))}
    if "lambda" in r:
        extra["lam"] = float(r["lambda"])
    points = [dict(zip(keys, combo), **extra) for combo in itertools.product(*(grids[k] for k in keys))]
    return points, regimes


# --- output ---------------------------------------------------------------------------

def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def _write_json(path: Path, payload: dict) -> None:
    payload = dict(payload, timestamp=_timestamp())
    path.write_text(json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if hasattr(x, "__dataclass_fields__"):
        return _jsonable(x.__dict__)
    return x


# --- commands -------------------------------------------------------------------------

def cmd_simulate(cfg: dict, out: Path, seed: int | None, base: Path) -> int:
    from .amplification import run_adiabatic, run_longtime

    exp = parse_simulate(cfg, seed, base)
    H = exp.model.H
    log.info("simulate %s regime=%s t=%g eps=%g", exp.model.name, exp.regime, exp.t, exp.epsilon)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        run = run_adiabatic if exp.regime == "Adiabatic" else run_longtime
        res = run(H, exp.psi0, exp.t, exp.epsilon, alphas=exp.model.alphas)
    wall = time.perf_counter() - t0
    d = res.diagnostics
    summary = {
        "preset": exp.model.name, "regime": exp.regime, "t": exp.t, "epsilon": exp.epsilon,
        "l_max": d["l_max"], "success_probability": d["success_probability"],
        "deviation": d["deviation"], "fidelity": d["fidelity"],
        "queries_to_amp1": d.get("queries_to_amp1", 3), "gamma": d["gamma"],
    }
    out.mkdir(parents=True, exist_ok=True)
    if "state" in exp.outputs:
        _write_csv(out / "state.csv", ["index", "re", "im"],
                   ((i, float(z.real), float(z.imag)) for i, z in enumerate(res.state)))
    if "summary" in exp.outputs:
        _write_csv(out / "summary.csv", ["quantity", "value"],
                   list(summary.items()) + [("wall_time_s", wall)])
    if "json" in exp.outputs:
        # wall time is kept out of the JSON so identical inputs give identical files
        _write_json(out / "result.json", {
            "command": "simulate", "seed": exp.seed, "summary": summary,
            "state": [[float(z.real), float(z.imag)] for z in res.state],
            "diagnostics": _jsonable({k: v for k, v in d.items() if k != "resources"}),
            "resources": _jsonable(d["resources"]),
        })
    log.info("deviation %.3e, fidelity %.12f, %.2fs", d["deviation"], d["fidelity"], wall)
    return 0 if d["deviation"] <= exp.epsilon else 1


def cmd_verify(cfg: dict, out: Path, suite: str, threads: int, base: Path) -> int:
    from .verify import SUITES, run_suite

    if suite not in SUITES + ("all",):
        raise ValidationError(f"suite must be one of {SUITES + ('all',)}")
    if cfg:
        build_model(cfg, base)  # fail fast on a malformed Hamiltonian
    rows = run_suite(suite, threads)
    n_bad = sum(not r.ok for _, r in rows)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "reports.csv", ["suite", "name", "bound", "measured", "slack", "ok", "context"],
               ((s, r.name, r.bound_value, r.measured_value, r.slack, r.ok,
                 json.dumps(_jsonable(r.context), sort_keys=True)) for s, r in rows))
    _write_json(out / "result.json", {"command": "verify", "suite": suite, "n_reports": len(rows),
                                      "n_violations": n_bad,
                                      "min_slack": min((r.slack for _, r in rows), default=0.0)})
    log.info("%d reports, %d violations", len(rows), n_bad)
    return 1 if n_bad else 0


RESOURCE_HEADER = ["regime", "alpha", "gamma", "omega", "t", "epsilon", "ancilla_qubits", "query_complexity",
                   "ancilla_expr", "query_expr", "gates_per_query", "scaling_only", "crossover_time",
                   "high_frequency"]


def cmd_resources(cfg: dict, out: Path) -> int:
    from .bounds import resources

    points, regimes = parse_resources(cfg)
    rows, records = [], []
    for p in points:
        for reg in regimes:
            est = resources(reg, p["alpha"], p["gamma"], p["omega"], p["t"], p["epsilon"], n_a=p["n_a"],
                            p=p["p"], lam=p.get("lam"))
            rows.append([reg, p["alpha"], p["gamma"], p["omega"], p["t"], p["epsilon"], est.ancilla_qubits,
                         est.query_complexity, est.ancilla_expr, est.query_expr, est.gates_per_query,
                         est.scaling_only, est.extra.get("crossover_time", ""),
                         est.extra.get("high_frequency", "")])
            records.append(_jsonable(est))
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "resources.csv", RESOURCE_HEADER, rows)
    _write_json(out / "result.json", {"command": "resources", "estimates": records})
    return 0


# --- entry point ----------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fqs", description="Sambe-space simulation of periodically driven systems")
    p.add_argument("command", choices=("simulate", "verify", "resources"))
    p.add_argument("--config", type=Path, help="JSON experiment config")
    p.add_argument("--out", type=Path, default=Path("fqs_out"), help="output directory")
    p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--suite", default="all", help="bounds | encodings | amplification | all")
    return p


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    return cfg


def _error_record(code: str, message: str, exit_code: int) -> int:
    sys.stderr.write(json.dumps({"error": code, "message": message, "exit_code": exit_code}) + "\n")
    return exit_code


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("FQS_LOG", "error").lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    if level not in LOG_LEVELS:
        log.error("FQS_LOG=%r not recognized; using 'error'", level)
    try:
        if args.threads < 1:
            raise ValidationError("--threads must be at least 1")
        cfg = _load_config(args.config)
        base = args.config.parent if args.config else Path(".")
        if args.command == "simulate":
            if not cfg:
                raise ValidationError("simulate needs --config")
            return cmd_simulate(cfg, args.out, args.seed, base)
        if args.command == "verify":
            return cmd_verify(cfg, args.out, args.suite, args.threads, base)
        if not cfg:
            raise ValidationError("resources needs --config")
        return cmd_resources(cfg, args.out)
    except FloquetError as exc:
        return _error_record(exc.code, str(exc), exc.exit_code)
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        return _error_record(type(exc).__name__, str(exc), 3)


if __name__ == "__main__":
    sys.exit(main())
