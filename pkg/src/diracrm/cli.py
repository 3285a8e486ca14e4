"""Command-line front end.

Usage:
    diracrm spectrum --config tc1.json --output out/
    diracrm wavefunction --config tc1.json --state 3 --grid 0.05 10 401
    diracrm verify --config tc2.json
    diracrm nu-check --a10 2 --a11 3 --kmax 3
    diracrm fit-centrifugal --config tc1.json

Exit codes: 0 success, 2 empty window or empty spectrum, 1 any other error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import model, oracle, spectrum, wavefunction
from .errors import DiracRMError, EmptyWindow, UnknownState
from .model import CentrifugalApprox, PhysicalConfig, SymmetryLimit
from .nu_check import NuParams, weight_condition_values
from .spectrum import BoundState, SolverOptions

EXIT_OK, EXIT_ERROR, EXIT_EMPTY = 0, 1, 2
FORMATS = ("csv", "json", "both")

PHYSICAL_KEYS = ("M", "D_e", "b_shape", "d", "T_tensor", "R_c", "kappa")
TOP_KEYS = set(PHYSICAL_KEYS) | {"limit", "C", "centrifugal", "solver", "format"}
SOLVER_KEYS = {"scan_points", "tol_E", "max_states", "branch"}


class ConfigError(DiracRMError, ValueError):
    pass


def fmt(x) -> str:
    """Shortest round-tripping decimal (at most 17 significant digits)."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    physical: PhysicalConfig
    approx: CentrifugalApprox
    solver: SolverOptions
    output_format: str = "both"
    fit_r_max: float | None = None


def _number(data: dict, key: str, where: str = "config"):
    if key not in data:
        raise ConfigError(f"{where}: missing key '{key}'")
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: key '{key}' must be a number, got {value!r}")
    return value


def parse_config(data: dict, limit_override: str | None = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    unknown = sorted(set(data) - TOP_KEYS)
    if unknown:
        raise ConfigError(f"config: unknown key '{unknown[0]}'")
    vals = {k: _number(data, k) for k in PHYSICAL_KEYS}
    if int(vals["kappa"]) != vals["kappa"]:
        raise ConfigError(f"config: key 'kappa' must be an integer, got {vals['kappa']!r}")
    vals["kappa"] = int(vals["kappa"])
    kind = limit_override or data.get("limit", "spin")
    if kind not in ("spin", "pseudospin"):
        raise ConfigError(f"config: key 'limit' must be 'spin' or 'pseudospin', got {kind!r}")
    C = _number(data, "C") if "C" in data else 0.0
    try:
        physical = PhysicalConfig(**{k: (v if k == "kappa" else float(v)) for k, v in vals.items()},
                                  limit=SymmetryLimit(kind, float(C)))
    except DiracRMError as exc:
        raise ConfigError(f"config: {exc}") from exc

    cent = data.get("centrifugal")
    if not isinstance(cent, dict):
        raise ConfigError("config: key 'centrifugal' must be an object with 'fit' or D0/D1/D2")
    fit_r_max = None
    if cent.get("fit"):
        if any(k in cent for k in ("D0", "D1", "D2")):
            raise ConfigError("config.centrifugal: give either 'fit' or D0/D1/D2, not both")
        fit_r_max = float(_number(cent, "r_max", "config.centrifugal"))
        approx = model.fit_centrifugal(physical, fit_r_max)
    else:
        approx = CentrifugalApprox(*(float(_number(cent, k, "config.centrifugal"))
                                     for k in ("D0", "D1", "D2")))

    solver = data.get("solver", {})
    if not isinstance(solver, dict):
        raise ConfigError("config: key 'solver' must be an object")
    unknown = sorted(set(solver) - SOLVER_KEYS)
    if unknown:
        raise ConfigError(f"config.solver: unknown key '{unknown[0]}'")
    try:
        opts = SolverOptions(**solver)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config.solver: {exc}") from exc
    out_fmt = data.get("format", "both")
    if out_fmt not in FORMATS:
        raise ConfigError(f"config: key 'format' must be one of {FORMATS}, got {out_fmt!r}")
    return RunConfig(physical, approx, opts, out_fmt, fit_r_max)


def load_config(path: str, limit_override: str | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config '{path}': {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in '{path}': {exc.msg} at line {exc.lineno} "
                          f"column {exc.colno}") from exc
    return parse_config(data, limit_override)


def _apply_flags(rc: RunConfig, args) -> RunConfig:
    opts = rc.solver
    if getattr(args, "scan_points", None) is not None:
        opts = replace(opts, scan_points=args.scan_points)
    if getattr(args, "tol", None) is not None and args.command == "spectrum":
        opts = replace(opts, tol_E=args.tol)
    out_fmt = getattr(args, "format", None) or rc.output_format
    return replace(rc, solver=opts, output_format=out_fmt)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def write_spectrum(states: list[BoundState], out_dir: Path, out_format: str) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if out_format in ("json", "both"):
        path = out_dir / "spectrum.json"
        # json writes floats with repr, which round-trips exactly
        path.write_text(json.dumps([s.to_dict() for s in states], indent=2) + "\n")
        written.append(path)
    if out_format in ("csv", "both"):
        path = out_dir / "spectrum.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n_r", "E", "nodes", "residual"])
            for s in states:
                w.writerow([s.n_r, fmt(s.E), s.nodes, fmt(s.residual_at_root)])
        written.append(path)
    return written


def read_spectrum(path: Path) -> list[BoundState]:
    return [BoundState.from_dict(d) for d in json.loads(Path(path).read_text())]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    rc = _apply_flags(load_config(args.config, args.limit), args)
    try:
        states = spectrum.solve_spectrum(rc.physical, rc.approx, rc.solver)
    except EmptyWindow as exc:
        states = []
        print(f"empty energy window: {exc}", file=sys.stderr)
    written = write_spectrum(states, Path(args.output), rc.output_format)
    for s in states:
        print(f"n_r={s.n_r:<3d} E={fmt(s.E):<22s} nodes={s.nodes}")
    print("wrote " + ", ".join(str(p) for p in written))
    if not states:
        print("no bound states found", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    rc = _apply_flags(load_config(args.config, args.limit), args)
    cfg, approx = rc.physical, rc.approx
    if args.energy is not None:
        E = args.energy
    else:
        states = spectrum.solve_spectrum(cfg, approx, rc.solver)
        match = [s for s in states if s.n_r == args.state]
        if not match:
            labels = [s.n_r for s in states]
            raise UnknownState(f"no state with n_r = {args.state}; available: {labels}")
        E = match[0].E
    # the norm is fixed on the default (decayed) interval, then applied to the grid
    factor = wavefunction.normalize(wavefunction.sample_state(cfg, approx, E)).norm
    if args.grid is not None:
        rmin, rmax, npts = args.grid
        if rmin < cfg.R_c:
            raise ConfigError(f"--grid rmin = {rmin} lies below R_c = {cfg.R_c}")
        if int(npts) != npts or npts < 2 or not rmax > rmin:
            raise ConfigError("--grid needs rmin < rmax and an integer npts >= 2")
        grid = np.linspace(rmin, rmax, int(npts))
        sample = wavefunction.sample_state(cfg, approx, E, grid=grid).scaled(factor)
    else:
        sample = wavefunction.sample_state(cfg, approx, E).scaled(factor)
    rows = zip(sample.r, sample.F, sample.G)
    out = sys.stdout if args.output in (None, "-") else None
    if out is None:
        path = Path(args.output)
        if path.suffix == "" or path.is_dir():
            path.mkdir(parents=True, exist_ok=True)
            path = path / "wavefunction.csv"
        out = path.open("w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["r", "F", "G"])
        for r, F, G in rows:
            w.writerow([fmt(r), fmt(F), fmt(G)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _pair(reference: list[float], others: list[float]) -> list[float]:
    """Distance from each reference value to the nearest of ``others``."""
    if not others:
        return [math.inf] * len(reference)
    arr = np.asarray(others)
    return [float(np.min(np.abs(arr - E))) for E in reference]


def cmd_verify(args) -> int:
    rc = _apply_flags(load_config(args.config, args.limit), args)
    cfg, approx = rc.physical, rc.approx
    tol = args.tol if args.tol is not None else 1e-6 * cfg.M
    try:
        states = spectrum.solve_spectrum(cfg, approx, rc.solver)
    except EmptyWindow as exc:
        print(f"empty energy window: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    window = model.energy_window(cfg, approx, branch=rc.solver.branch)
    opts = oracle.OracleOptions(branch=rc.solver.branch)
    eff = oracle.oracle_spectrum(cfg, approx, "effective", opts, window)
    exact = oracle.oracle_spectrum(cfg, approx, "exact", opts, window)
    _, _, delta = model.coupling_constants(cfg, 0.0)
    energies = [s.E for s in states]
    d_eff = _pair(energies, eff)
    d_exact = _pair(energies, exact)

    ok = len(eff) == len(states) and all(x <= tol for x in d_eff)
    if delta == 0:
        ok = ok and len(exact) == len(states) and all(x <= tol for x in d_exact)
        last = "|dE| exact"
    else:
        last = "exact-effective (info)"
    print(f"tolerance {fmt(tol)}; states {len(states)}, effective oracle {len(eff)}, "
          f"exact oracle {len(exact)}")
    print(f"{'n_r':>4} {'E':>22} {'|dE| effective':>16} {last:>24}")
    for s, de, dx in zip(states, d_eff, d_exact):
        print(f"{s.n_r:>4} {fmt(s.E):>22} {de:16.3e} {dx:24.3e}")
    print("PASS" if ok else "FAIL")
    if not states:
        return EXIT_EMPTY
    return EXIT_OK if ok else EXIT_ERROR


def cmd_nu_check(args) -> int:
    p = NuParams(a10=args.a10, a11=args.a11, k_max=args.kmax, a3=args.a3)
    print(f"{'k':>3} {'value at s=0':>22} {'value at s=1':>22}")
    violated = False
    for k, v0, v1 in weight_condition_values(p):
        print(f"{k:>3} {fmt(v0):>22} {fmt(v1):>22}")
        violated |= v0 != 0 or v1 != 0
    print("condition violated" if violated else "condition satisfied")
    return EXIT_OK


def cmd_fit_centrifugal(args) -> int:
    rc = load_config(args.config, args.limit)
    r_max = args.r_max if args.r_max is not None else (rc.fit_r_max or 30.0)
    approx = model.fit_centrifugal(rc.physical, r_max)
    print(json.dumps({"D0": approx.D0, "D1": approx.D1, "D2": approx.D2,
                      "max_rel_error": approx.max_rel_error, "r_max": r_max}, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diracrm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_default):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--limit", choices=("spin", "pseudospin"), help="override the config limit")
        p.add_argument("--tol", type=float, help="root tolerance (spectrum) or pass tolerance (verify)")
        p.add_argument("--scan-points", type=int, dest="scan_points")
        p.add_argument("--output", default=output_default)
        p.add_argument("--format", choices=FORMATS)

    p = sub.add_parser("spectrum", help="solve the quantization condition")
    common(p, ".")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="emit normalized (r, F, G) samples")
    common(p, None)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--state", type=int)
    which.add_argument("--energy", type=float)
    p.add_argument("--grid", type=float, nargs=3, metavar=("RMIN", "RMAX", "NPTS"))
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify", help="cross-check against the shooting oracle")
    common(p, None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nu-check", help="endpoint values of the weight condition")
    p.add_argument("--a10", type=float, required=True)
    p.add_argument("--a11", type=float, required=True)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--a3", type=float, default=-1.0)
    p.set_defaults(func=cmd_nu_check)

    p = sub.add_parser("fit-centrifugal", help="least-squares carrier coefficients")
    p.add_argument("--config", required=True)
    p.add_argument("--limit", choices=("spin", "pseudospin"))
    p.add_argument("--r-max", type=float, dest="r_max")
    p.set_defaults(func=cmd_fit_centrifugal)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EmptyWindow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (DiracRMError, ValueError, LookupError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
