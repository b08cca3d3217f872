"""Command-line front end: trajectories, measures, sweeps, optima, self-checks.

Exit codes: 0 success, 1 validation failure, 2 bad arguments, 3 I/O failure.
A flat key-value config file (``key = value`` per line, ``#`` comments,
keys mirroring the flag names) supplies defaults; explicit flags override
file values.  ``DDQUBIT_WORKERS`` bounds the sweep worker pool.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

from . import tables, validate
from .bath import BathSpec
from .ddcontrol import PulseSequence, periodic_sequence, profile
from .measures import (
    BLP_DEFAULT_TAIL,
    blp_measure,
    backflow_intervals,
    dd_efficiency,
    stationary_coherence,
)
from .sweep import FIGURE_IDS, SweepSpec, figure_dataset, optimal_s, run_sweep

TRAJECTORY_HEADER = ("t", "gamma", "rate_left", "rate_right", "coherence")
SWEEP_HEADER = ("s", "dt", "n_pulses", "t_final", "blp", "efficiency", "stationary")
OPTIMAL_HEADER = ("dt", "n", "s_star", "coherence", "tied")


# --------------------------------------------------------------------------
# Config file support
# --------------------------------------------------------------------------


def _read_config(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line without '=': {raw!r}")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _coerce(value: str, action: argparse.Action):
    if action.nargs == 0:  # store_true style flags
        return value.lower() in ("1", "true", "yes", "on")
    if action.type is not None:
        return action.type(value)
    return value


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if getattr(args, "config", None) is None:
        return
    cfg = _read_config(args.config)
    cfg.pop("config", None)
    passed = {tok.split("=", 1)[0].lstrip("-").replace("-", "_") for tok in argv if tok.startswith("--")}
    # an explicit choice of pulse specification silences the file's choice
    if {"dt", "pulse_times", "free"} & passed:
        for key in ("dt", "pulse_times", "free"):
            cfg.pop(key, None)
    sub = getattr(args, "_subparser", None)
    actions = {a.dest: a for a in sub._actions} if sub is not None else {}
    for key, value in cfg.items():
        if key in passed or key not in actions:
            continue
        setattr(args, key, _coerce(value, actions[key]))


# --------------------------------------------------------------------------
# Shared sequence construction
# --------------------------------------------------------------------------


def _sequence_from(
    dt: Optional[float], pulse_times: Optional[str], free: bool, extent: Optional[float]
) -> PulseSequence:
    if free and (dt is not None or pulse_times):
        raise ValueError("--free excludes --dt and --pulse-times")
    if free or (dt is None and not pulse_times):
        return PulseSequence((), extent if extent else 1.0)
    if dt is not None and pulse_times:
        raise ValueError("--dt and --pulse-times are mutually exclusive")
    if dt is not None:
        if not extent:
            raise ValueError("a periodic train needs --horizon or --t-final")
        return periodic_sequence(dt, extent)
    times = tuple(float(x) for x in pulse_times.split(","))
    horizon = max(extent or 0.0, times[-1] if times else 0.0)
    return PulseSequence(times, horizon if horizon > 0 else 1.0)


def _out_path(args: argparse.Namespace, default_stem: str) -> Path:
    if args.out:
        return Path(args.out)
    suffix = ".json" if args.format == "json" else ".csv"
    return Path(default_stem + suffix)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_trajectory(args: argparse.Namespace) -> int:
    spec = BathSpec(args.s, args.alpha)
    if args.horizon is None:
        raise ValueError("--horizon is required for trajectory")
    seq = _sequence_from(args.dt, args.pulse_times, args.free, args.horizon)
    prof = profile(spec, seq, grid_points=args.grid)
    rows = list(zip(prof.t, prof.gamma, prof.rate_left, prof.rate_right, prof.coherence))
    out = _out_path(args, "trajectory")
    if args.format == "json":
        tables.write_json(
            out,
            {
                "units": tables.UNITS_COMMENT,
                "s": spec.s,
                "alpha": spec.alpha,
                "pulse_times": list(seq.times),
                "rows": [dict(zip(TRAJECTORY_HEADER, map(float, row))) for row in rows],
            },
        )
    else:
        tables.write_csv(out, TRAJECTORY_HEADER, rows, (f"s={spec.s:g} alpha={spec.alpha:g} pulses={len(seq.times)}",))
    if args.plot:
        from . import plots

        plots.render_trajectory(prof, out.with_suffix(".png"))
    return 0


def cmd_measure(args: argparse.Namespace) -> int:
    if not (args.blp or args.efficiency or args.stationary):
        raise ValueError("select at least one of --blp, --efficiency, --stationary")
    spec = BathSpec(args.s, args.alpha)
    extent = args.t_final if args.t_final is not None else args.horizon
    seq = _sequence_from(args.dt, args.pulse_times, args.free, extent)
    payload: dict = {
        "s": spec.s,
        "alpha": spec.alpha,
        "dt": args.dt,
        "n_pulses": seq.n_pulses,
        "t_final": args.t_final,
        "blp": None,
        "efficiency": None,
        "stationary": None,
    }
    if args.blp:
        payload["blp"] = blp_measure(spec, seq, args.horizon)
        payload["backflow_intervals"] = [list(iv) for iv in backflow_intervals(spec, seq, args.horizon)]
    if args.efficiency:
        if args.t_final is None:
            raise ValueError("--efficiency requires --t-final")
        payload["efficiency"] = dd_efficiency(spec, seq, args.t_final)
    if args.stationary:
        payload["stationary"] = stationary_coherence(spec, seq)
    out = _out_path(args, "measure")
    if args.format == "csv":
        row = (
            spec.s,
            args.dt,
            seq.n_pulses,
            args.t_final,
            payload["blp"],
            payload["efficiency"],
            payload["stationary"],
        )
        tables.write_csv(out, SWEEP_HEADER, [row])
    else:
        tables.write_json(out, payload)
    return 0


def _parse_grid(text: str, cast) -> tuple:
    return tuple(cast(tok) for tok in text.split(",") if tok.strip())


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec(
        s_grid=_parse_grid(args.s_grid, float),
        dt_grid=_parse_grid(args.dt_grid, float),
        n_values=_parse_grid(args.n_grid, int),
        t_final=_parse_grid(args.t_final_grid, float),
        include_blp=args.blp,
        include_efficiency=args.efficiency,
        include_stationary=args.stationary,
        alpha=args.alpha,
        blp_horizon=args.horizon,
    )
    workers = int(os.environ.get("DDQUBIT_WORKERS", "1"))
    result = run_sweep(spec, workers=workers)
    for rec in result.records:
        if rec.error:
            print(
                f"warning: point s={rec.s:g} dt={rec.dt:g} n={rec.n_pulses} "
                f"tf={rec.t_final:g} failed: {rec.error}",
                file=sys.stderr,
            )
    rows = []
    for rec in result.records:
        rep = rec.report
        rows.append(
            (
                rec.s,
                rec.dt,
                rec.n_pulses,
                rec.t_final,
                rep.blp if rep else None,
                rep.efficiency if rep else None,
                rep.stationary_coherence if rep else None,
            )
        )
    comments = [
        f"optimum [{opt.measure}] dt={opt.dt:g} n={opt.n_pulses} tf={opt.t_final:g}: "
        f"s*={opt.s_star:.17g} value={opt.value:.17g}"
        for opt in result.optima
    ]
    out = _out_path(args, "sweep")
    if args.format == "json":
        tables.write_json(
            out,
            {
                "units": tables.UNITS_COMMENT,
                "records": [
                    {
                        "s": rec.s,
                        "dt": rec.dt,
                        "n_pulses": rec.n_pulses,
                        "t_final": rec.t_final,
                        "blp": rec.report.blp if rec.report else None,
                        "efficiency": rec.report.efficiency if rec.report else None,
                        "stationary": rec.report.stationary_coherence if rec.report else None,
                        "error": rec.error,
                    }
                    for rec in result.records
                ],
                "optima": [
                    {
                        "measure": opt.measure,
                        "dt": opt.dt,
                        "n_pulses": opt.n_pulses,
                        "t_final": opt.t_final,
                        "s_star": opt.s_star,
                        "value": opt.value,
                    }
                    for opt in result.optima
                ],
            },
        )
    else:
        tables.write_csv(out, SWEEP_HEADER, rows, comments)
    if args.plot:
        from . import plots

        plots.render_sweep(list(result.records), out.with_suffix(".png"))
    return 0


def cmd_figure(args: argparse.Namespace) -> int:
    data = figure_dataset(args.figure_id)
    out = _out_path(args, args.figure_id)
    if args.format == "json":
        tables.write_json(
            out,
            {
                "units": tables.UNITS_COMMENT,
                "figure_id": data.figure_id,
                "rows": [dict(zip(data.header, row)) for row in data.rows],
            },
        )
    else:
        tables.write_csv(out, data.header, data.rows, data.comments)
    if not args.no_plot:
        from . import plots

        plots.render_figure(data, out.with_suffix(".png"))
    return 0


def cmd_optimal_s(args: argparse.Namespace) -> int:
    n = 0 if args.free else args.n
    if n is None:
        raise ValueError("pass --n (with --dt) or --free")
    if n > 0 and args.dt is None:
        raise ValueError("--n > 0 requires --dt")
    best = optimal_s(
        args.dt if n else None,
        n,
        s_range=(args.s_min, args.s_max),
        threshold=args.threshold,
        alpha=args.alpha,
    )
    dt_out = args.dt if n else 0.0
    if best is None:
        row = (dt_out, n, None, None, None)
        comments = (f"maximum stationary coherence below threshold {args.threshold:g}",)
    else:
        row = (dt_out, n, best.s_star, best.coherence, int(best.tied))
        comments = ()
    out = _out_path(args, "optimal_s")
    if args.format == "json":
        tables.write_json(
            out,
            {
                "dt": dt_out,
                "n": n,
                "s_star": None if best is None else best.s_star,
                "coherence": None if best is None else best.coherence,
                "tied": None if best is None else best.tied,
            },
        )
    else:
        tables.write_csv(out, OPTIMAL_HEADER, [row], comments)
    if best is not None:
        print(f"s_star={best.s_star:.6g} coherence={best.coherence:.6g}")
    else:
        print("no optimum above threshold")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    results = validate.run_all()
    for res in results:
        print(res.line())
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, *, bath: bool = True) -> None:
    if bath:
        sub.add_argument("--s", type=float, required=False, help="Ohmicity parameter (> 0)")
        sub.add_argument("--alpha", type=float, default=1.0, help="coupling constant (default 1)")
    sub.add_argument("--out", type=str, default=None, help="output path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--config", type=str, default=None, help="flat key-value defaults file")


def _add_pulses(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--dt", type=float, default=None, help="periodic pulse spacing")
    group.add_argument(
        "--pulse-times", type=str, default=None, help="comma-separated explicit pulse instants"
    )
    group.add_argument("--free", action="store_true", help="no pulses (free evolution)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddqubit",
        description="Exact pure-dephasing qubit dynamics under bang-bang decoupling "
        "in Ohmic-class environments (cutoff units throughout).",
        epilog="Environment: DDQUBIT_WORKERS bounds the sweep worker pool.",
    )
    subs = parser.add_subparsers(dest="command")

    sp = subs.add_parser("trajectory", help="sample a decoherence trajectory to CSV/JSON")
    _add_common(sp)
    _add_pulses(sp)
    sp.add_argument("--horizon", type=float, default=None, help="final sample time")
    sp.add_argument("--grid", type=int, default=2000, help="uniform samples over the horizon")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the output")
    sp.set_defaults(func=cmd_trajectory, _subparser=sp)

    sp = subs.add_parser("measure", help="evaluate selected measures for one configuration")
    _add_common(sp)
    _add_pulses(sp)
    sp.add_argument("--horizon", type=float, default=None, help="back-flow integration window")
    sp.add_argument("--t-final", type=float, default=None, help="efficiency horizon")
    sp.add_argument("--blp", action="store_true", help="back-flow (non-Markovianity) measure")
    sp.add_argument("--efficiency", action="store_true", help="decoupling efficiency")
    sp.add_argument("--stationary", action="store_true", help="infinite-time coherence")
    sp.set_defaults(func=cmd_measure, _subparser=sp, format="json")

    sp = subs.add_parser("sweep", help="evaluate measures over a parameter grid")
    _add_common(sp, bath=False)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--s-grid", type=str, required=True, help="comma list of Ohmicity values")
    sp.add_argument("--dt-grid", type=str, required=True, help="comma list of pulse spacings")
    sp.add_argument("--n-grid", type=str, required=True, help="comma list of pulse counts (0 = free)")
    sp.add_argument("--t-final-grid", type=str, required=True, help="comma list of horizons")
    sp.add_argument("--horizon", type=float, default=None, help="back-flow integration window")
    sp.add_argument("--blp", action="store_true")
    sp.add_argument("--efficiency", action="store_true")
    sp.add_argument("--stationary", action="store_true")
    sp.add_argument("--plot", action="store_true", help="also render a PNG next to the output")
    sp.set_defaults(func=cmd_sweep, _subparser=sp)

    sp = subs.add_parser("figure", help="emit a preset dataset (and its rendering)")
    sp.add_argument("figure_id", choices=FIGURE_IDS)
    _add_common(sp, bath=False)
    sp.add_argument("--no-plot", action="store_true", help="skip the PNG rendering")
    sp.set_defaults(func=cmd_figure, _subparser=sp)

    sp = subs.add_parser("optimal-s", help="Ohmicity maximizing stationary coherence")
    _add_common(sp, bath=False)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--dt", type=float, default=None, help="periodic pulse spacing")
    sp.add_argument("--n", type=int, default=None, help="pulse count")
    sp.add_argument("--free", action="store_true", help="no pulses (n = 0)")
    sp.add_argument("--s-min", type=float, default=1.01)
    sp.add_argument("--s-max", type=float, default=8.0)
    sp.add_argument("--threshold", type=float, default=1e-4)
    sp.set_defaults(func=cmd_optimal_s, _subparser=sp)

    sp = subs.add_parser("validate", help="run the oracle self-check suite")
    sp.set_defaults(func=cmd_validate, _subparser=sp)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if getattr(args, "func", None) is None:
        parser.print_help()
        return 2
    try:
        _apply_config(args, list(argv) if argv is not None else sys.argv[1:])
        if hasattr(args, "s") and args.func is not cmd_validate and args.s is None:
            if args.func in (cmd_trajectory, cmd_measure):
                raise ValueError("--s is required")
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
