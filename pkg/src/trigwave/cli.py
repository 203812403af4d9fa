"""Command-line front end for convergence studies and filter checks.

Subcommands: convergence, check-filters, sv-compare, single-run.
Options can come from a TOML config file (or a previously written JSON
summary, whose embedded config reproduces the run); command-line flags
win over file values.

Exit codes: 0 success, 1 validation or usage error, 2 reference
self-verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .exceptions import BlowUpError, ConfigError, FitUndefinedError, ReferenceUnconvergedError
from .filters import METHOD_NAMES, check_assumption, default_xi_samples, method_filters
from .harness import (EQUATIONS, TRIG_METHODS, ExperimentConfig, config_from_dict,
                      config_to_dict, default_fit_window, fit_order, initial_state_for,
                      run_convergence_study, system_for, uniform_error_envelope,
                      _integrate_final)
from .integrators import reference_solution
from .spectral import CoeffVector, sobolev_norm

_CONFIG_KEYS = ("equation", "p", "rho", "space", "method", "K", "h", "alpha", "T",
                "t0", "s", "seed", "decay_y", "decay_v", "href", "ref_tol", "jobs",
                "max_K")


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE",
                   help="TOML config file, or a JSON summary to rerun")
    p.add_argument("--method", nargs="+", metavar="NAME",
                   help="method names: B C E G Btilde SV")
    p.add_argument("--K", nargs="+", type=int, metavar="K",
                   help="grid sizes (powers of two)")
    p.add_argument("--h", nargs="+", type=float, metavar="H",
                   help="step sizes (each must divide T)")
    p.add_argument("--alpha", nargs="+", type=float, metavar="A",
                   help="norm exponents in [-1, 1]")
    p.add_argument("--T", type=float, help="final time")
    p.add_argument("--t0", type=float, help="initial time (metadata only)")
    p.add_argument("--s", type=float, help="regularity index of the data")
    p.add_argument("--seed", type=int, help="seed of the phase generator")
    p.add_argument("--p", type=int, help="power of the nonlinearity")
    p.add_argument("--equation", choices=EQUATIONS)
    p.add_argument("--rho", type=float, help="mass parameter of klein-gordon")
    p.add_argument("--space", choices=("spectral", "fd"))
    p.add_argument("--href", type=float, help="reference step size")
    p.add_argument("--ref-tol", type=float, dest="ref_tol",
                   help="reference self-verification tolerance")
    p.add_argument("--out", metavar="CSV",
                   help="output CSV path; a JSON summary is written next to it")
    p.add_argument("--jobs", type=int, help="parallel workers (default: available cores)")
    p.add_argument("--max-K", type=int, dest="max_K",
                   help="largest admissible K (default 512)")
    p.add_argument("-v", "--verbose", action="count", default=0,
                   help="also print the per-cell error records")


def _load_config_file(path: str) -> tuple[dict, str | None]:
    """Read a TOML config or a JSON summary; returns (config dict, out path)."""
    p = Path(path)
    try:
        if p.suffix.lower() == ".json":
            with open(p, "rb") as fh:
                data = json.load(fh)
            if isinstance(data, dict) and "config" in data and "schema" in data:
                data = data["config"]
        else:
            with open(p, "rb") as fh:
                data = tomllib.load(fh)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must define a table of keys")
    out = data.pop("out", None)
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s) in {path}: {', '.join(sorted(unknown))}")
    return data, out


def _resolve(args) -> tuple[ExperimentConfig, str | None]:
    data: dict = {}
    out = None
    if args.config:
        data, out = _load_config_file(args.config)
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    if getattr(args, "out", None) is not None:
        out = args.out
    data.setdefault("jobs", os.cpu_count() or 1)
    return config_from_dict(data), out


def _print_orders(summary: dict) -> None:
    print(f"{'method':>8} {'alpha':>6} {'component':>9} {'slope':>8} {'residual':>9} {'n':>3}")
    for entry in summary["orders"]:
        slope = "---" if entry["slope"] is None else f"{entry['slope']:8.3f}"
        resid = "---" if entry["residual"] is None else f"{entry['residual']:9.3f}"
        print(f"{entry['method']:>8} {entry['alpha']:>6g} {entry['component']:>9} "
              f"{slope:>8} {resid:>9} {entry['n_points']:>3d}")


def _write_outputs(table, out: str) -> str:
    csv_path = Path(out)
    table.to_csv(csv_path)
    json_path = csv_path.with_suffix(".json")
    table.write_summary(json_path)
    return str(json_path)


def _print_records(table) -> None:
    print(f"{'method':>8} {'K':>5} {'h':>12} {'alpha':>6} {'err_y':>12} "
          f"{'err_v':>12} flags")
    for r in table.records:
        print(f"{r.method:>8} {r.K:>5d} {r.h:>12.6g} {r.alpha:>6g} "
              f"{r.err_y:>12.4e} {r.err_v:>12.4e} {r.flags}")


def cmd_convergence(args) -> int:
    config, out = _resolve(args)
    out = out or "errors.csv"
    table = run_convergence_study(config)
    json_path = _write_outputs(table, out)
    for K, disc in table.reference_discrepancies:
        print(f"reference K={K}: self-verification discrepancy {disc:.3e}")
    if args.verbose:
        _print_records(table)
    _print_orders(table.summary_dict())
    print(f"wrote {out} and {json_path}")
    return 0


def cmd_check_filters(args) -> int:
    methods = args.method or list(METHOD_NAMES)
    betas = args.beta if args.beta is not None else [-1.0, -0.5, 0.0, 0.5, 1.0]
    for beta in betas:
        if not -1.0 <= beta <= 1.0:
            raise ConfigError(f"beta must lie in [-1, 1], got {beta}")
    xi = default_xi_samples(args.xi_min, args.xi_max, args.samples)
    reports = []
    ok_all = True
    for name in methods:
        fs = method_filters(name)  # unknown name raises ValueError -> exit 1
        for beta in betas:
            report = check_assumption(fs, beta, args.c, xi)
            reports.append(report)
            status = "pass" if report.ok else f"FAIL ({len(report.violations)} violations)"
            print(f"method {fs.name:>6}  beta {beta:+.2f}  c {args.c:g}: {status}")
            for v in report.violations[:3]:
                print(f"    xi = {v.xi:.6g}: {v.inequality} violated "
                      f"(lhs {v.lhs:.6g} > rhs {v.rhs:.6g})")
            ok_all = ok_all and report.ok
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"schema": 1, "c": args.c,
                       "reports": [r.to_dict() for r in reports]}, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    print("all bounds hold" if ok_all else "violations found")
    return 0


def cmd_sv_compare(args) -> int:
    config, out = _resolve(args)
    trig = "C"
    if args.method:
        if len(args.method) != 1 or args.method[0] not in TRIG_METHODS:
            raise ConfigError("sv-compare takes one trigonometric method to compare "
                              f"against (one of {', '.join(TRIG_METHODS)})")
        trig = args.method[0]
    alphas = config.alphas if 1.0 in config.alphas else (1.0,) + config.alphas
    config = ExperimentConfig(**{**config_kwargs(config),
                                 "methods": ("SV", trig), "alphas": alphas})
    if not any(h * K < 2.0 for K in config.k_values for h in config.h_values):
        raise ConfigError("the grid has no stable leapfrog cell (h*K < 2); "
                          "add smaller h or smaller K")
    table = run_convergence_study(config)
    if args.verbose:
        _print_records(table)

    print(f"energy-norm (H^0 x H^-1) envelope slopes, T = {config.T:g}:")
    for method, cfl in (("SV", 2.0), (trig, None)):
        env = uniform_error_envelope(table, method, 1.0, component="pair", cfl_max=cfl)
        if method != "SV":
            window = default_fit_window(config.h_values, max(config.k_values))
            env = [(h, e) for h, e in env if h in window]
        try:
            fit = fit_order(env)
            print(f"  {method:>6}: slope {fit.slope:.3f} "
                  f"(residual {fit.residual:.3f}, {fit.n_used} points)")
        except FitUndefinedError as exc:
            print(f"  {method:>6}: fit undefined ({exc})")
    unstable = table.unstable_cells()
    if unstable:
        print("unstable cells (h*K > 2):")
        for method, K, h in unstable:
            print(f"  {method} K={K} h={h:g} (h*K = {h * K:g})")
    else:
        print("no unstable cells in the grid")
    if out:
        json_path = _write_outputs(table, out)
        print(f"wrote {out} and {json_path}")
    return 0


def config_kwargs(config: ExperimentConfig) -> dict:
    from dataclasses import asdict
    return asdict(config)


def cmd_single_run(args) -> int:
    config, _ = _resolve(args)
    config.validate()
    if len(config.methods) != 1 or len(config.k_values) != 1 or len(config.h_values) != 1:
        raise ConfigError("single-run takes exactly one method, one K and one h")
    method, K, h = config.methods[0], config.k_values[0], config.h_values[0]
    system = system_for(config, K)
    state0 = initial_state_for(config, K)
    result = {"method": method, "K": K, "h": h, "T": config.T,
              "steps": int(round(config.T / h)), "seed": config.seed}
    try:
        final = _integrate_final(config, system, method, h, state0)
        result["blowup"] = False
        result["norm_y"] = sobolev_norm(final.position, config.s + 1.0)
        result["norm_v"] = sobolev_norm(final.velocity, config.s)
        if args.href is not None:
            ref = reference_solution(system, config.T, config.h_ref, state0,
                                     s=config.s, tol=config.ref_tol)
            result["reference_discrepancy"] = ref.discrepancy
            result["errors"] = [
                {"alpha": a,
                 "err_y": sobolev_norm(CoeffVector(
                     system.grid, final.position.values - ref.state.position.values), 1.0 - a),
                 "err_v": sobolev_norm(CoeffVector(
                     system.grid, final.velocity.values - ref.state.velocity.values), -a)}
                for a in config.alphas]
    except BlowUpError as exc:
        result["blowup"] = True
        result["blowup_detail"] = str(exc)
    json.dump(result, sys.stdout, indent=2)
    print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trigwave",
                     description="Trigonometric integrators for semilinear wave "
                                 "equations: convergence studies and filter checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convergence", parents=[], help="run a convergence study")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("check-filters", help="verify the filter bounds by sampling")
    p.add_argument("--method", nargs="+", metavar="NAME",
                   help=f"methods to check (default: all of {' '.join(METHOD_NAMES)})")
    p.add_argument("--beta", nargs="+", type=float,
                   help="decay exponents (default: -1 -0.5 0 0.5 1)")
    p.add_argument("--c", type=float, default=2.0, help="bound constant (default 2)")
    p.add_argument("--xi-min", type=float, default=1e-3, dest="xi_min")
    p.add_argument("--xi-max", type=float, default=1e3, dest="xi_max")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--out", metavar="JSON", help="write the reports as JSON")
    p.set_defaults(func=cmd_check_filters)

    p = sub.add_parser("sv-compare",
                       help="compare leapfrog against a trigonometric method")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_sv_compare)

    p = sub.add_parser("single-run", help="one integration, norms printed as JSON")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_single_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ReferenceUnconvergedError as exc:
        print(f"reference error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
