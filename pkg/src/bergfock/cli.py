"""Command-line front end: ``bergfock run <command> [options]``.

Parameters come from built-in defaults, then an optional INI file (one
section per command, keys named like the long options with underscores),
then command-line flags.  Everything is validated before any computation.

Exit status: 0 when every verdict passes, 1 when any check fails, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .experiments import berezin_checks as bz
from .experiments import limits, orthogonality, sharp, szego
from .experiments.records import ALL, UPPER, atomic_write, config_digest, make_record, write_suite
from .operators import TruncationError, localization_matrix, spectral_summary, toeplitz_matrix
from .quadrature import QuadratureError, disc_grid, plane_grid
from .spaces import CoefficientVector, SpaceParams
from .special import reg_inc_beta, reg_inc_gamma_p
from .symbols import DISC, PLANE, SymbolSpec

WORKERS_ENV = "BERGFOCK_WORKERS"


class ConfigError(ValueError):
    """A configuration value failed validation; ``path`` names the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# parameter schema


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # float, int, floats, str, flag, choice
    default: object
    help: str
    check: Callable | None = None  # value -> error message or None
    choices: tuple = ()


def _increasing(msg):
    def check(v):
        if not v or any(b <= a for a, b in zip(v[:-1], v[1:])):
            return msg
        return None
    return check


def _all(pred, msg):
    def check(v):
        vals = v if isinstance(v, list) else [v]
        return None if all(pred(x) for x in vals) else msg
    return check


def _both(*checks):
    def check(v):
        for c in checks:
            err = c(v)
            if err:
                return err
        return None
    return check


GT_M1 = _all(lambda a: a > -1, "alpha must exceed -1")
POS = _all(lambda x: x > 0, "must be positive")
NONNEG = _all(lambda x: x >= 0, "must be nonnegative")
UNIT = _all(lambda x: 0 < x < 1, "must lie in (0, 1)")

SCHEMA = {
    "orthogonality": [
        Param("space", "choice", "both", "which spaces to test", choices=("both", "bergman", "fock")),
        Param("alpha", "floats", [0.0, 2.5, 10.0], "Bergman weights", GT_M1),
        Param("beta", "floats", [0.5, 1.0, 3.0], "Fock parameters", POS),
        Param("degree", "int", 3, "degree of the test polynomials (0..4)",
              _all(lambda d: 0 <= d <= 4, "degree must lie in 0..4")),
        Param("n_random", "int", 5, "random quadruples per space", NONNEG),
    ],
    "limits": [
        Param("beta", "float", 1.0, "Fock parameter", POS),
        Param("sigma", "float", 0.0, "extra weight sigma", NONNEG),
        Param("r_list", "floats", [2.0, 4.0, 8.0, 16.0, 32.0], "increasing dilation radii",
              _both(_increasing("r_list must be nonempty increasing"), POS)),
        Param("R", "float", 1.0, "disc indicator radius", POS),
        Param("n_max", "int", 8, "largest diagonal index", NONNEG),
        Param("dense", "flag", False, "also compare dense windowed matrices (beta r^2 <= 200)"),
        Param("tol", "float", 1e-2, "final-error tolerance for the sweeps", POS),
        Param("norm_tol", "float", 2e-3, "final-error tolerance for the closed-form norm", POS),
    ],
    "sharp-bounds": [
        Param("alpha", "floats", [0.0, 1.0, 2.0, 5.0, 20.0], "Bergman weights", GT_M1),
        Param("beta", "float", 1.0, "Fock parameter", POS),
        Param("radii", "floats", [0.3, 0.5, 0.7, 0.9], "disc indicator radii in the unit disc", UNIT),
        Param("plane_radii", "floats", [0.5, 1.0, 2.0], "disc indicator radii in the plane", POS),
        Param("n_random", "int", 10, "random polynomials per weight", NONNEG),
    ],
    "szego": [
        Param("rho", "float", 0.5, "disc indicator radius", UNIT),
        Param("alpha", "floats", [100.0, 500.0, 1000.0], "increasing weights",
              _both(_increasing("alpha must be nonempty increasing"), GT_M1)),
        Param("window", "str", "1", "window: 1, e1, mixed, or comma-separated coordinates"),
        Param("deltas", "floats", [0.3, 0.5, 0.7], "count thresholds", UNIT),
        Param("trace_rel_tol", "float", 0.1, "relative tolerance for traces", POS),
        Param("count_rel_tol", "float", 0.1, "relative tolerance for counts", POS),
        Param("norm_tol", "float", 0.01, "tolerance for the operator norm", POS),
        Param("defect_tol", "float", 0.02, "tolerance for the normalized defect", POS),
        Param("dense_alpha", "float", None, "weight of the dense spot check (off if unset)", GT_M1),
        Param("dense_n", "int", 60, "truncation of the dense spot check", POS),
    ],
    "berezin": [
        Param("alpha", "floats", [10.0, 40.0, 160.0], "increasing weights",
              _both(_increasing("alpha must be nonempty increasing"), GT_M1)),
        Param("windows", "str", "1,e1", "comma-separated window names"),
        Param("p", "floats", [1.0, 2.0], "exponents (1 or 2)", _all(lambda p: p in (1.0, 2.0), "p must be 1 or 2")),
    ],
    "toeplitz-spectrum": [
        Param("space", "choice", "fock", "space", choices=("bergman", "fock")),
        Param("weight", "float", 1.0, "alpha (Bergman) or beta (Fock)"),
        Param("rho", "float", 1.0, "disc indicator radius", POS),
        Param("N", "int", 40, "truncation", POS),
        Param("n_rad", "int", 0, "radial order per panel (0 = N + 16)", NONNEG),
    ],
    "localization-matrix": [
        Param("space", "choice", "bergman", "space", choices=("bergman", "fock")),
        Param("weight", "float", 2.0, "alpha (Bergman) or beta (Fock)"),
        Param("rho", "float", 0.5, "disc indicator radius", POS),
        Param("window", "str", "1", "window: 1, e1, mixed, or comma-separated coordinates"),
        Param("N", "int", 30, "truncation", POS),
    ],
}


def _parse_value(p: Param, raw):
    if raw is None:
        return None
    if p.kind == "flag":
        if isinstance(raw, bool):
            return raw
        s = str(raw).strip().lower()
        if s in ("1", "true", "yes", "on"):
            return True
        if s in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if p.kind == "float":
        return float(raw)
    if p.kind == "int":
        return int(raw)
    if p.kind == "floats":
        if isinstance(raw, list):
            return [float(x) for x in raw]
        s = str(raw).strip()
        return [float(x) for x in s.split(",") if x.strip()] if s else []
    if p.kind == "choice":
        if raw not in p.choices:
            raise ValueError(f"must be one of {', '.join(p.choices)}")
        return raw
    return str(raw)


def parse_window(text: str) -> np.ndarray:
    """Window coordinates from a name or a comma-separated list of complex numbers."""
    text = text.strip()
    if text in bz.WINDOWS:
        return bz.window_coords(text)
    try:
        vals = [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse window {text!r}") from exc
    return bz.window_coords(vals)


def resolve_config(command: str, cli_values: dict, config_path: str | None, seed: int | None) -> dict:
    """Merge defaults, INI file and flags; validate; return the resolved config."""
    schema = {p.name: p for p in SCHEMA[command]}
    values = {name: p.default for name, p in schema.items()}
    file_seed = None
    if config_path:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            with open(config_path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError("config", str(exc)) from exc
        if parser.has_section("run") and parser.has_option("run", "seed"):
            file_seed = parser.get("run", "seed")
        if parser.has_section(command):
            for key, raw in parser.items(command):
                if key not in schema:
                    raise ConfigError(f"{command}.{key}", "unknown key")
                try:
                    values[key] = _parse_value(schema[key], raw)
                except ValueError as exc:
                    raise ConfigError(f"{command}.{key}", str(exc)) from exc
    for key, raw in cli_values.items():
        if raw is None:
            continue
        try:
            values[key] = _parse_value(schema[key], raw)
        except ValueError as exc:
            raise ConfigError(f"{command}.{key}", str(exc)) from exc
    for key, p in schema.items():
        if p.check is not None and values[key] is not None:
            err = p.check(values[key])
            if err:
                raise ConfigError(f"{command}.{key}", err)
    _cross_checks(command, values)
    if seed is None:
        try:
            seed = int(file_seed) if file_seed is not None else 0
        except ValueError as exc:
            raise ConfigError("run.seed", "must be an integer") from exc
    return {"command": command, "seed": int(seed), "parameters": values}


def _cross_checks(command: str, v: dict) -> None:
    if command in ("toeplitz-spectrum", "localization-matrix"):
        if v["space"] == "bergman":
            if not v["weight"] > -1:
                raise ConfigError(f"{command}.weight", "alpha must exceed -1")
            if not v["rho"] < 1:
                raise ConfigError(f"{command}.rho", "Bergman disc radius must be below 1")
        elif not v["weight"] > 0:
            raise ConfigError(f"{command}.weight", "beta must be positive")
    if command in ("szego", "localization-matrix"):
        try:
            parse_window(v["window"])
        except ValueError as exc:
            raise ConfigError(f"{command}.window", str(exc)) from exc
    if command == "berezin":
        names = [w.strip() for w in v["windows"].split(",") if w.strip()]
        bad = [w for w in names if w not in bz.WINDOWS]
        if not names or bad:
            raise ConfigError("berezin.windows", f"windows must be a nonempty list from {sorted(bz.WINDOWS)}")


# ---------------------------------------------------------------------------
# commands


def _map_tasks(tasks):
    """Run zero-argument tasks, possibly in threads, keeping task order."""
    try:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    except ValueError:
        workers = 1
    if workers <= 1 or len(tasks) <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    return [r for chunk in results for r in chunk]


def run_orthogonality(p: dict, seed: int):
    """Orthogonality relations for the Moebius and Weyl families on random polynomials."""
    alphas = p["alpha"] if p["space"] in ("both", "bergman") else []
    betas = p["beta"] if p["space"] in ("both", "fock") else []
    tasks = [lambda a=a: orthogonality.orthogonality_suite((a,), (), p["n_random"], p["degree"], seed)
             for a in alphas]
    tasks += [lambda b=b: orthogonality.orthogonality_suite((), (b,), p["n_random"], p["degree"], seed)
              for b in betas]
    return _map_tasks(tasks)


def run_limits(p: dict, seed: int):
    """Dilated Bergman quantities converging to their Fock counterparts."""
    b, s, r, R = p["beta"], p["sigma"], p["r_list"], p["R"]
    tasks = [
        lambda: limits.integral_sweep(b, s, r, tol=p["tol"]),
        lambda: limits.norm_sweep(b, s, r, tol=p["tol"]),
        lambda: limits.diagonal_sweep(b, s, R, r, p["n_max"], tol=p["tol"]),
        lambda: limits.closed_norm_sweep(b, s, R, r, tol=p["norm_tol"]),
    ]
    if p["dense"]:
        tasks.append(lambda: limits.dense_window_sweep(b, s, r))
    return _map_tasks(tasks)


def run_sharp(p: dict, seed: int):
    """Sharp Toeplitz norm bounds and the concentration inequality."""
    a = p["alpha"]
    tasks = [
        lambda: sharp.bergman_sharp_records(a, p["radii"]),
        lambda: sharp.fock_sharp_records(p["beta"], p["plane_radii"]),
        lambda: sharp.concentration_records(a, p["radii"], p["n_random"], seed=seed),
    ]
    return _map_tasks(tasks)


def run_szego(p: dict, seed: int):
    """Eigenvalue distribution of localization operators as alpha grows."""
    return szego.szego_suite(p["alpha"], p["rho"], window=parse_window(p["window"]), deltas=p["deltas"],
                             trace_rel_tol=p["trace_rel_tol"], count_rel_tol=p["count_rel_tol"],
                             norm_tol=p["norm_tol"], defect_tol=p["defect_tol"], dense_alpha=p["dense_alpha"],
                             dense_N=p["dense_n"])


def run_berezin(p: dict, seed: int):
    """Windowed Berezin transform values, invariants and distance sweeps."""
    windows = tuple(w.strip() for w in p["windows"].split(",") if w.strip())
    ps = tuple(int(x) for x in p["p"])
    alphas = p["alpha"]
    tasks = [bz.value_records, lambda: bz.invariant_records(seed=seed),
             lambda: bz.mass_records(alphas[:2], windows)]
    for name, f in bz.radial_test_symbols().items():
        tasks.append(lambda name=name, f=f: bz.distance_records(alphas, windows, ps, {name: f}))
    return _map_tasks(tasks)


def _disc_symbol(space: SpaceParams, rho: float) -> SymbolSpec:
    return SymbolSpec.disc_indicator(rho, domain=DISC if space.is_bergman else PLANE)


def _dense_grid(space: SpaceParams, rho: float, n_rad: int, n_ang: int):
    if space.is_bergman:
        return disc_grid(space.weight, n_rad, n_ang, breaks=(rho,))
    return plane_grid(space.weight, n_rad, n_ang, breaks=(rho,))


def run_toeplitz_spectrum(p: dict, seed: int):
    """Dense disc-indicator Toeplitz spectrum against the closed-form diagonal."""
    space = SpaceParams(p["space"], p["weight"])
    N, rho = p["N"], p["rho"]
    n_rad = p["n_rad"] or N + 16
    mat = toeplitz_matrix(space, _disc_symbol(space, rho), N, _dense_grid(space, rho, n_rad, 2 * N + 1))
    summary = spectral_summary(mat)
    n = np.arange(N, dtype=float)
    if space.is_bergman:
        exact = reg_inc_beta(rho * rho, n + 1.0, space.weight + 1.0)
    else:
        exact = reg_inc_gamma_p(n + 1.0, space.weight * rho * rho)
    exact = np.sort(exact)[::-1]
    params = {"space": space.kind, "weight": space.weight, "rho": rho, "N": N, "n_rad": n_rad}
    recs = [make_record("toeplitz_disc_spectrum", params, "index", list(range(N)), summary.eigenvalues, exact,
                        1e-10, ALL, notes="dense eigenvalues versus the incomplete beta/gamma diagonal")]
    return recs, {"spectrum": summary}


def run_localization_matrix(p: dict, seed: int):
    """Dense localization matrix with a disc indicator and a single window."""
    space = SpaceParams(p["space"], p["weight"])
    N, rho = p["N"], p["rho"]
    coords = parse_window(p["window"])
    win = CoefficientVector.from_orthonormal(space, coords)
    grid = _dense_grid(space, rho, N + 16, 2 * (N + coords.size) + 1)
    mat = localization_matrix(space, _disc_symbol(space, rho), win, win, N, grid)
    summary = spectral_summary(mat)
    params = {"space": space.kind, "weight": space.weight, "rho": rho, "N": N}
    recs = [
        make_record("localization_norm_bound", params, "quantity", ["op_norm"], [summary.op_norm], 1.0, 1e-6,
                    UPPER, notes="operator norm at most sup|f|"),
        make_record("localization_positivity", params, "quantity", ["-min_eigenvalue"],
                    [-float(summary.eigenvalues[-1])], 0.0, 1e-8, UPPER),
    ]
    return recs, {"spectrum": summary, "matrix": mat}


COMMANDS = {
    "orthogonality": run_orthogonality,
    "limits": run_limits,
    "sharp-bounds": run_sharp,
    "szego": run_szego,
    "berezin": run_berezin,
    "toeplitz-spectrum": run_toeplitz_spectrum,
    "localization-matrix": run_localization_matrix,
}


def _config_header(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n"


def _write_extras(out_dir: str, suite: str, config: dict, extras: dict) -> list[str]:
    stem = os.path.join(out_dir, f"{suite}-{config_digest(config)}")
    paths = []
    spectrum = extras.get("spectrum")
    if spectrum is not None:
        atomic_write(stem + "-spectrum.csv", _config_header(config) + spectrum.to_csv())
        xy = "".join(f"{i} {v:.17g}\n" for i, v in enumerate(spectrum.eigenvalues))
        atomic_write(stem + "-spectrum.xy", _config_header(config) + xy)
        paths += [stem + "-spectrum.csv", stem + "-spectrum.xy"]
    mat = extras.get("matrix")
    if mat is not None:
        payload = {"config": config, "matrix": mat.to_json()}
        atomic_write(stem + "-matrix.json", json.dumps(payload, indent=1, sort_keys=True) + "\n")
        paths.append(stem + "-matrix.json")
    return paths


def run(config: dict, out_dir: str, stream=None) -> int:
    """Execute a resolved config, write artifacts, print verdicts; return exit status."""
    stream = stream or sys.stdout
    command = config["command"]
    try:
        result = COMMANDS[command](config["parameters"], config["seed"])
    except (TruncationError, QuadratureError, ArithmeticError) as exc:
        print(f"FAIL {command}: {type(exc).__name__}: {exc}", file=stream)
        return 1
    records, extras = result if isinstance(result, tuple) else (result, {})
    suite = command.replace("-", "_")
    csv_path, json_path = write_suite(out_dir, suite, records, config)
    extra_paths = _write_extras(out_dir, suite, config, extras)
    for rec in records:
        print(rec.summary_line(), file=stream)
    passed = all(r.passed for r in records)
    n_fail = sum(not r.passed for r in records)
    print(f"{'PASS' if passed else 'FAIL'} {command}: {len(records) - n_fail}/{len(records)} checks passed; "
          f"wrote {', '.join([csv_path, json_path, *extra_paths])}", file=stream)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="action", required=True)
    run_p = sub.add_parser("run", help="run a verification suite or operator computation")
    cmds = run_p.add_subparsers(dest="command", required=True)
    for name, params in SCHEMA.items():
        cp = cmds.add_parser(name, help=(COMMANDS[name].__doc__ or name).splitlines()[0])
        cp.add_argument("--config", help="INI file with a [%s] section" % name)
        cp.add_argument("--out", default="runs", help="output directory (default: runs)")
        cp.add_argument("--seed", type=int, default=None, help="seed for randomized checks (default 0)")
        for p in params:
            flag = "--" + p.name.replace("_", "-")
            if p.kind == "flag":
                cp.add_argument(flag, dest=p.name, action="store_const", const=True, default=None, help=p.help)
            else:
                cp.add_argument(flag, dest=p.name, default=None, help=f"{p.help} (default: {_show(p.default)})")
    return parser


def _show(v) -> str:
    if isinstance(v, list):
        return ",".join(f"{x:g}" for x in v)
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    names = [p.name for p in SCHEMA[args.command]]
    cli_values = {n: getattr(args, n) for n in names}
    try:
        config = resolve_config(args.command, cli_values, args.config, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run(config, args.out)


if __name__ == "__main__":
    sys.exit(main())
