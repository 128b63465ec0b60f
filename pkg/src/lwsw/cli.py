"""Command-line entry point: ``lwsw {solve,verify,sweep,evolve,rearrange,kernel}``.

Exit codes: 0 ok, 2 validation, 3 non-convergence, 4 I/O.  Failures print a
one-line JSON object ``{"error": <category>, "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import conserved_quantities, embed_profile, evolve, traveling_wave_error
from .errors import ParameterError, SolverError, StepError
from .fixed_point import FixedPointConfig, petviashvili_solve
from .grid import SpectralGrid, green_kernel, impulse_response, symmetric_transform_kernel
from .io import (
    ConfigError,
    RunConfig,
    load_config,
    load_profile,
    read_csv_columns,
    save_profile,
    write_csv,
    write_json,
)
from .model import functional_F_integral, functional_K, ode_residual
from .properties import verify_profile
from .rearrangement import (
    hardy_littlewood_check,
    lp_norms_preserved,
    polya_szego_check,
    rearrange,
    riesz_check,
)
from .variational import VariationalConfig, i_lambda_sweep, solve_via_weinstein, sweep_verdicts

log = logging.getLogger("lwsw")

EXIT_OK, EXIT_VALIDATION, EXIT_CONVERGENCE, EXIT_IO = 0, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, code: int, category: str, message: str, **extra):
        self.code, self.category, self.message, self.extra = code, category, message, extra
        super().__init__(message)


def _config_from_args(args) -> RunConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("--config is required")
    if args.solver:
        cfg.solver = args.solver
    if args.grid_size:
        cfg.size = args.grid_size
    if args.half_width:
        cfg.half_width = args.half_width
    if args.tol is not None:
        cfg.tol = args.tol
    if args.max_iter is not None:
        cfg.max_iter = args.max_iter
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def _solver_config(cfg: RunConfig):
    common = dict(gaussian_amplitude=cfg.init_amplitude, gaussian_width=cfg.init_width,
                  init_noise=cfg.init_noise, seed=cfg.seed)
    if cfg.tol is not None:
        common["tol"] = cfg.tol
    if cfg.max_iter is not None:
        common["max_iter"] = cfg.max_iter
    if cfg.solver == "petviashvili":
        return FixedPointConfig(**common)
    return VariationalConfig(**common)


def _solve(cfg: RunConfig):
    scfg = _solver_config(cfg)
    if cfg.solver == "petviashvili":
        return petviashvili_solve(cfg.params, cfg.grid, scfg)
    return solve_via_weinstein(cfg.params, cfg.grid, scfg)


def cmd_solve(args) -> int:
    cfg = _config_from_args(args)
    out = Path(args.out or cfg.output.get("profile", "profile.json"))
    report_path = Path(args.report or cfg.output.get("report") or out.with_suffix(".report.json"))
    theta, report = _solve(cfg)
    meta = {"solver": report.solver, "residual": ode_residual(theta, 1.0),
            "K": functional_K(theta), "F_integral": functional_F_integral(theta),
            "seed": cfg.seed}
    save_profile(out, theta, meta)
    write_json(report_path, {"tool_version": __version__, **report.to_dict(with_history=True)})
    print(json.dumps({"profile": str(out), "report": str(report_path), "iterations": report.iterations,
                      "residual": meta["residual"], "converged": report.converged}))
    return EXIT_OK


def cmd_verify(args) -> int:
    theta, _ = load_profile(args.profile)
    report = verify_profile(theta).to_dict()
    out = Path(args.out or Path(args.profile).with_suffix(".verify.json"))
    write_json(out, report)
    print(json.dumps({"report": str(out), "all_pass": report["all_pass"]}))
    return EXIT_OK


def _parse_lambdas(values) -> list[float]:
    lams = []
    for v in values:
        if ":" in v:
            lo, hi, n = v.split(":")
            lams.extend(np.linspace(float(lo), float(hi), int(n)).tolist())
        else:
            lams.append(float(v))
    if not lams or any(not lam > 0 for lam in lams):
        raise ConfigError("--lambda values must be positive")
    return lams


def cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    cfg.solver = "weinstein"
    lams = _parse_lambdas(args.lam or ["1", "2", "3"])
    rows = i_lambda_sweep(cfg.params, cfg.grid, lams, _solver_config(cfg))
    out = Path(args.out or "sweep.csv")
    write_csv(out, ["lambda", "I_lambda", "kappa_hat", "Lambda", "I_over_lambda_2_3"],
              [(r.lam, r.I, r.kappa, r.Lambda, r.scaled_I) for r in rows])
    verdicts = sweep_verdicts(rows)
    verdicts["tool_version"] = __version__
    write_json(out.with_suffix(".verdicts.json"), verdicts)
    summary = {k: v for k, v in verdicts.items() if not k.endswith("_checks")}
    print(json.dumps({"csv": str(out), **summary}))
    return EXIT_OK


def cmd_evolve(args) -> int:
    theta, _ = load_profile(args.profile)
    prefix = Path(args.out or Path(args.profile).with_suffix(""))
    state0 = embed_profile(theta)
    m0, v0 = conserved_quantities(state0)
    diag_rows, snaps = [], []

    def record(i, state):
        m, v = conserved_quantities(state)
        diag_rows.append([i, state.t, *m.tolist(), v, traveling_wave_error(state, theta)])
        snaps.append({"step": i, "t": state.t, "u_re": state.u.real, "u_im": state.u.imag,
                      "v": state.v})

    stride = args.stride or max(1, int(round(args.t_final / args.dt)) // 10)
    final = evolve(state0, args.t_final, args.dt, stride=stride, callback=record)
    header = ["step", "t"] + [f"M_{j + 1}" for j in range(theta.params.N)] + ["V", "traveling_error"]
    write_csv(prefix.with_name(prefix.name + "_diagnostics.csv"), header, diag_rows)
    write_json(prefix.with_name(prefix.name + "_snapshots.json"),
               {"tool_version": __version__, "grid": {"L": theta.grid.half_width, "M": theta.grid.size},
                "params": theta.params.to_dict(), "snapshots": snaps})
    m, v = conserved_quantities(final)
    print(json.dumps({"t": final.t, "traveling_error": traveling_wave_error(final, theta),
                      "mass_drift": (np.abs(m - m0) / m0).tolist(),
                      "V_drift": abs(v - v0) / max(abs(v0), 1e-300)}))
    return EXIT_OK


def cmd_rearrange(args) -> int:
    cols = read_csv_columns(args.input)
    x = cols.pop("x", None)
    if not cols:
        raise ConfigError("CSV needs at least one data column besides 'x'")
    h = float(x[1] - x[0]) if x is not None and x.size > 1 else 1.0
    names = list(cols)
    try:
        rearranged = {n: rearrange(cols[n]) for n in names}
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    verdicts = {"lp": {}, "polya_szego": {}, "hardy_littlewood": {}}
    for n in names:
        lp = lp_norms_preserved(cols[n], spacing=h)
        verdicts["lp"][n] = {"multiset_equal": lp["multiset_equal"],
                             "norms": {str(p): v for p, v in lp["norms"].items()}}
        verdicts["polya_szego"][n] = polya_szego_check(cols[n], h)._asdict()
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            verdicts["hardy_littlewood"][f"{a},{b}"] = hardy_littlewood_check(cols[a], cols[b], h)._asdict()
    if len(names) >= 3:
        verdicts["riesz"] = riesz_check(*(cols[n] for n in names[:3]), spacing=h)._asdict()
    out = Path(args.out or "rearranged.csv")
    xs = x if x is not None else np.arange(len(cols[names[0]]), dtype=float)
    write_csv(out, ["x"] + names, zip(xs, *(rearranged[n] for n in names)))
    write_json(out.with_suffix(".verdicts.json"), verdicts)
    print(json.dumps(verdicts))
    return EXIT_OK


def cmd_kernel(args) -> int:
    if not args.s > 0:
        raise ParameterError("s > 0", f"s = {args.s}")
    grid = SpectralGrid(args.half_width or 40.0, args.grid_size or 1024)
    out = Path(args.out or "kernel.csv")
    write_csv(out, ["x", "closed_form", "green", "spectral_impulse"],
              zip(grid.x, symmetric_transform_kernel(grid.x, args.s), green_kernel(grid.x, args.s),
                  impulse_response(grid, args.s)))
    print(json.dumps({"csv": str(out), "s": args.s, "rate": float(np.sqrt(args.s))}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lwsw", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def run_flags(sp):
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--solver", choices=["petviashvili", "weinstein"])
        sp.add_argument("--grid-size", type=int, metavar="M")
        sp.add_argument("--half-width", type=float, metavar="L")
        sp.add_argument("--tol", type=float, metavar="X")
        sp.add_argument("--max-iter", type=int, metavar="K")
        sp.add_argument("--seed", type=int, metavar="S")

    sp = sub.add_parser("solve", help="compute a solitary-wave profile")
    run_flags(sp)
    sp.add_argument("--report", metavar="PATH")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check qualitative properties of a profile file")
    sp.add_argument("profile")
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="I_lambda curve and its inequalities")
    run_flags(sp)
    sp.add_argument("--lambda", dest="lam", nargs="+", metavar="LAM",
                    help="values or lo:hi:n ranges")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("evolve", help="evolve a profile under the full system")
    sp.add_argument("profile")
    sp.add_argument("--out", metavar="PREFIX")
    sp.add_argument("--t-final", type=float, default=10.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--stride", type=int, default=0)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("rearrange", help="rearrange CSV columns and check inequalities")
    sp.add_argument("input")
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_rearrange)

    sp = sub.add_parser("kernel", help="sample the exponential kernel and the spectral inverse")
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--grid-size", type=int, metavar="M")
    sp.add_argument("--half-width", type=float, metavar="L")
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_kernel)
    return p


def _run(args) -> int:
    log.debug("lwsw %s: %s", __version__, vars(args))
    try:
        return args.func(args)
    except ParameterError as exc:
        raise CliFailure(EXIT_VALIDATION, "validation", str(exc), assumption=exc.assumption)
    except ConfigError as exc:
        raise CliFailure(EXIT_VALIDATION, "validation", str(exc))
    except SolverError as exc:
        raise CliFailure(EXIT_CONVERGENCE, exc.reason, str(exc))
    except StepError as exc:
        raise CliFailure(EXIT_CONVERGENCE, "time-stepping", str(exc), suggested_dt=exc.suggested_dt)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliFailure(EXIT_IO, "io", str(exc))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except CliFailure as exc:
        print(json.dumps({"error": exc.category, "message": exc.message, **exc.extra}), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
