"""Command-line surface.

Subcommands:

  simulate     run analytic and/or ABM trajectories for a scenario config,
               write CSV with header t,value,method
  compare      run both routes, write per-point error CSV
               (t,analytic,abm,abs_err,rel_err), print a JSON summary;
               exit 0 iff max relative error <= --threshold
  convergence  measure the ABM order empirically over doubling step counts
  specfun      evaluate one special function and print 15 significant digits
  verify       apply the discrete Caputo operator to the analytic
               trajectory and check the equation residual

Exit codes: 0 success, 1 threshold exceeded, 2 config/usage error,
3 numerical error.  Scenario configs are JSON documents, one scenario per
file; MEMKINETICS_LOG sets the diagnostic verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import models
from .errors import MemKineticsError, ValidationError
from .solver import (
    TrajectoryGrid,
    analytic_solution,
    empirical_convergence_order,
    equation_residual,
    solve_abm,
)
from .specialfn import SeriesControl, fox_wright_psi11, kilbas_saigo, mittag_leffler

log = logging.getLogger("memkinetics")

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_METHODS = ("analytic", "abm")


@dataclass(frozen=True)
class RunConfig:
    scenario: object
    grid: TrajectoryGrid
    methods: tuple
    series_control: SeriesControl
    output_path: str | None
    output_format: str

    def to_dict(self) -> dict:
        out = {
            "scenario": models.spec_to_dict(self.scenario),
            "grid": {"T": self.grid.T, "N": self.grid.N},
            "methods": list(self.methods),
            "series_control": {
                "rtol": self.series_control.rtol,
                "max_terms": self.series_control.max_terms,
                "consecutive_small": self.series_control.consecutive_small,
            },
        }
        output = {"format": self.output_format}
        if self.output_path is not None:
            output["path"] = self.output_path
        out["output"] = output
        return out


def _config_from_dict(doc: dict) -> RunConfig:
    problems = []
    if not isinstance(doc, dict):
        raise ValidationError(["config must be a JSON object"])
    scenario = None
    try:
        scenario = models.spec_from_dict(doc.get("scenario"))
    except ValidationError as exc:
        problems.extend(exc.problems)

    grid = None
    grid_doc = doc.get("grid")
    if not isinstance(grid_doc, dict) or "T" not in grid_doc or "N" not in grid_doc:
        problems.append('config needs "grid": {"T": ..., "N": ...}')
    else:
        try:
            grid = TrajectoryGrid(T=float(grid_doc["T"]), N=int(grid_doc["N"]))
            if grid.N < 2:
                problems.append(f"grid.N must be >= 2, got {grid.N}")
        except (TypeError, ValueError, MemKineticsError) as exc:
            problems.append(f"bad grid: {exc}")

    methods = doc.get("methods", ["analytic"])
    if (
        not isinstance(methods, list)
        or not methods
        or any(m not in _METHODS for m in methods)
    ):
        problems.append(f'"methods" must be a non-empty subset of {list(_METHODS)}')
        methods = ["analytic"]

    ctl_doc = doc.get("series_control", {})
    ctl = SeriesControl()
    if not isinstance(ctl_doc, dict):
        problems.append('"series_control" must be an object')
    else:
        try:
            ctl = SeriesControl(
                rtol=float(ctl_doc.get("rtol", ctl.rtol)),
                max_terms=int(ctl_doc.get("max_terms", ctl.max_terms)),
                consecutive_small=int(ctl_doc.get("consecutive_small", ctl.consecutive_small)),
            )
        except (TypeError, ValueError, MemKineticsError) as exc:
            problems.append(f"bad series_control: {exc}")

    output_doc = doc.get("output", {})
    output_path = None
    output_format = "csv"
    if not isinstance(output_doc, dict):
        problems.append('"output" must be an object')
    else:
        output_path = output_doc.get("path")
        output_format = output_doc.get("format", "csv")
        if output_format not in ("csv", "json"):
            problems.append(f'output format must be "csv" or "json", got {output_format!r}')

    extra = set(doc) - {"scenario", "grid", "methods", "series_control", "output"}
    if extra:
        problems.append(f"unknown config field(s): {sorted(extra)}")
    if problems:
        raise ValidationError(problems)
    return RunConfig(
        scenario=scenario,
        grid=grid,
        methods=tuple(methods),
        series_control=ctl,
        output_path=output_path,
        output_format=output_format,
    )


def load_config(path: str, args) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError([f"cannot read config {path}: {exc}"])
    except json.JSONDecodeError as exc:
        raise ValidationError([f"config {path} is not valid JSON: {exc}"])
    cfg = _config_from_dict(doc)
    overrides = {}
    if getattr(args, "out", None):
        overrides["output_path"] = args.out
    if getattr(args, "rtol", None) is not None or getattr(args, "max_terms", None) is not None:
        ctl = cfg.series_control
        overrides["series_control"] = SeriesControl(
            rtol=args.rtol if args.rtol is not None else ctl.rtol,
            max_terms=args.max_terms if args.max_terms is not None else ctl.max_terms,
            consecutive_small=ctl.consecutive_small,
        )
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".memkinetics-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    """Shortest round-trip decimal form of a 64-bit float."""
    return repr(float(x))


def _trajectories(cfg: RunConfig, methods=None):
    prob = models.compile(cfg.scenario)
    out = {}
    for method in methods or cfg.methods:
        if method == "analytic":
            out[method] = analytic_solution(prob, cfg.grid, cfg.series_control)
        else:
            out[method] = solve_abm(prob, cfg.grid)
    return prob, out


def _maybe_dump_config(cfg: RunConfig, args) -> bool:
    if getattr(args, "dump_config", False):
        print(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
        return True
    return False


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, args)
    if _maybe_dump_config(cfg, args):
        return EXIT_OK
    if cfg.output_path is None:
        raise ValidationError(["no output path: set output.path in the config or pass --out"])
    _, trajs = _trajectories(cfg)
    times = cfg.grid.times()
    if cfg.output_format == "json":
        doc = {
            method: {"t": [float(t) for t in times], "value": [float(v) for v in tr.values]}
            for method, tr in trajs.items()
        }
        _atomic_write(cfg.output_path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        lines = ["t,value,method"]
        for method in cfg.methods:
            values = trajs[method].values
            lines.extend(
                f"{_fmt(times[j])},{_fmt(values[j])},{method}" for j in range(len(times))
            )
        _atomic_write(cfg.output_path, "\n".join(lines) + "\n")
    log.info("simulate: wrote %s", cfg.output_path)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = load_config(args.config, args)
    if _maybe_dump_config(cfg, args):
        return EXIT_OK
    _, trajs = _trajectories(cfg, methods=("analytic", "abm"))
    times = cfg.grid.times()
    a = trajs["analytic"].values
    b = trajs["abm"].values
    abs_err = np.abs(a - b)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_err = np.where(a != 0.0, abs_err / np.abs(a), np.where(abs_err == 0.0, 0.0, np.inf))
    if cfg.output_path is not None:
        lines = ["t,analytic,abm,abs_err,rel_err"]
        lines.extend(
            f"{_fmt(times[j])},{_fmt(a[j])},{_fmt(b[j])},{_fmt(abs_err[j])},{_fmt(rel_err[j])}"
            for j in range(len(times))
        )
        _atomic_write(cfg.output_path, "\n".join(lines) + "\n")
    max_rel = float(np.max(rel_err))
    summary = {
        "max_rel_err": max_rel,
        "mean_rel_err": float(np.mean(rel_err)),
        "max_abs_err": float(np.max(abs_err)),
        "threshold": args.threshold,
        "status": "pass" if max_rel <= args.threshold else "fail",
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if max_rel <= args.threshold else EXIT_THRESHOLD


def cmd_convergence(args) -> int:
    cfg = load_config(args.config, args)
    if _maybe_dump_config(cfg, args):
        return EXIT_OK
    try:
        steps = [int(s) for s in args.steps.split(",") if s.strip()]
    except ValueError:
        raise ValidationError([f"--steps must be a comma-separated integer list, got {args.steps!r}"])
    if len(steps) < 3:
        raise ValidationError(["--steps needs at least 3 doubling step counts"])
    prob = models.compile(cfg.scenario)
    try:
        report = empirical_convergence_order(prob, cfg.grid.T, steps, cfg.series_control)
    except MemKineticsError as exc:
        raise ValidationError([str(exc)])
    doc = {
        "order": report.order,
        "exact": report.exact,
        "errors": [
            {"N": N, "h": cfg.grid.T / N, "max_err": err} for N, err in report.errors
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if cfg.output_path is not None:
        _atomic_write(cfg.output_path, text + "\n")
    print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config, args)
    if _maybe_dump_config(cfg, args):
        return EXIT_OK
    prob = models.compile(cfg.scenario)
    traj = analytic_solution(prob, cfg.grid, cfg.series_control)
    resid = equation_residual(prob, traj)
    skip = max(1, args.skip)
    max_resid = float(np.nanmax(np.abs(resid[skip:])))
    summary = {
        "max_residual": max_resid,
        "skip": skip,
        "threshold": args.threshold,
        "status": "pass" if max_resid <= args.threshold else "fail",
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if max_resid <= args.threshold else EXIT_THRESHOLD


_SPECFUN_ARITY = {"mittag_leffler": 3, "kilbas_saigo": 4, "fox_wright": 5}


def cmd_specfun(args) -> int:
    name = args.function
    params = args.params
    arity = _SPECFUN_ARITY[name]
    if len(params) != arity:
        raise ValidationError(
            [f"specfun {name} takes {arity} numeric arguments, got {len(params)}"]
        )
    defaults = SeriesControl()
    ctl = SeriesControl(
        rtol=args.rtol if args.rtol is not None else defaults.rtol,
        max_terms=args.max_terms if args.max_terms is not None else defaults.max_terms,
    )
    if name == "mittag_leffler":
        value = mittag_leffler(params[0], params[1], params[2], ctl)
    elif name == "kilbas_saigo":
        value = kilbas_saigo(params[0], params[1], params[2], params[3], ctl)
    else:
        value = fox_wright_psi11(params[0], params[1], params[2], params[3], params[4], ctl)
    print(f"{value:.15g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memkinetics",
        description="Growth-with-memory trajectories: closed forms, numeric oracle, checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="scenario config (JSON)")
            p.add_argument("--out", help="output file path (overrides config output.path)")
            p.add_argument(
                "--dump-config",
                action="store_true",
                help="print the normalized config as JSON and exit",
            )
        p.add_argument("--rtol", type=float, help="series relative tolerance")
        p.add_argument("--max-terms", type=int, help="series term cap")

    p = sub.add_parser("simulate", help="write trajectory CSV/JSON for a scenario")
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="analytic vs ABM error table and summary")
    add_common(p)
    p.add_argument("--threshold", type=float, default=1e-3, help="max relative error to pass")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("convergence", help="empirical ABM convergence order")
    add_common(p)
    p.add_argument("--steps", required=True, help="comma-separated doubling step counts")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("verify", help="equation residual of the analytic trajectory")
    add_common(p)
    p.add_argument("--threshold", type=float, default=1e-2, help="max residual to pass")
    p.add_argument("--skip", type=int, default=5, help="initial grid points to exclude")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("specfun", help="evaluate one special function")
    p.add_argument("function", choices=sorted(_SPECFUN_ARITY))
    p.add_argument("params", type=float, nargs="*", help="function parameters then z")
    add_common(p, config=False)
    p.set_defaults(func=cmd_specfun)

    return parser


def _setup_logging():
    level = os.environ.get("MEMKINETICS_LOG", "").upper()
    if level:
        logging.basicConfig(
            level=getattr(logging, level, logging.INFO),
            format="%(name)s %(levelname)s %(message)s",
        )


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except (MemKineticsError, OverflowError) as exc:
        op = getattr(args, "command", "run")
        print(f"numerical error in {op}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
