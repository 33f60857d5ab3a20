"""Command-line interface: run / sweep / steady / potential-table.

Exit codes: 0 clean, 1 usage or input error, 2 runtime failure,
3 when an enabled monitor fired during a run.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, initial_field
from .diagnostics import MonitorReport, energy_monitor, max_principle_monitor, stability_sweep
from .grid import NonFiniteError
from .models import ModelKind
from .schemes import SchemeKind, run
from .steady_states import Regime, build_periodic_orbit, kink_eval, residual
from . import io

MONITOR_NAMES = ("energy", "modified_energy", "maxp")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        raise _UsageError(message)


def _add_run_arguments(p: argparse.ArgumentParser, with_tau: bool) -> None:
    p.add_argument("--model", choices=["sg", "ac"], required=True)
    p.add_argument("--scheme", choices=["imex1", "bdf2"], required=True)
    p.add_argument("--dim", type=int, choices=[1, 2], required=True)
    p.add_argument("--kappa", type=float, required=True)
    if with_tau:
        p.add_argument("--tau", type=float, required=True)
    p.add_argument("--n", type=int, required=True, help="grid points per axis")
    p.add_argument("--tfinal", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--init", required=True, help="preset name (pi_sin, pi_sin_sin, sin_sin) or snapshot path")
    p.add_argument("--out", type=Path, required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="advance one experiment and emit series/snapshots/report")
    _add_run_arguments(run_p, with_tau=True)
    run_p.add_argument("--snap-every", type=int, default=0, help="snapshot stride in steps (0 = off)")
    run_p.add_argument("--monitors", nargs="+", choices=MONITOR_NAMES, default=[],
                       help="monitors whose violation turns the exit code to 3")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="repeat a run over a list of time steps")
    _add_run_arguments(sweep_p, with_tau=False)
    sweep_p.add_argument("--tau-list", required=True, help="comma-separated positive time steps")
    sweep_p.set_defaults(func=cmd_sweep)

    steady_p = sub.add_parser("steady", help="emit a 1D steady-state profile")
    steady_p.add_argument("--case", choices=["kink", "periodic", "constant", "zero"], required=True)
    steady_p.add_argument("--kappa", type=float, default=1.0)
    steady_p.add_argument("--c", type=float, default=0.0, help="kink shift constant")
    steady_p.add_argument("--sign", choices=["+", "-"], default="+")
    steady_p.add_argument("--C", type=float, default=0.0, dest="C", help="first-integral constant (periodic)")
    steady_p.add_argument("--points", type=int, default=64, help="Gauss-Legendre order (periodic)")
    steady_p.add_argument("--out", type=Path, required=True, help="output directory")
    steady_p.set_defaults(func=cmd_steady)

    table_p = sub.add_parser("potential-table", help="emit the double-well potential comparison table")
    table_p.add_argument("--out", type=Path, required=True, help="output CSV path")
    table_p.set_defaults(func=cmd_potential_table)
    return parser


def _build_config(args, tau: float, monitors=(), snap_every: int = 0) -> ExperimentConfig:
    tfinal = args.tfinal
    if tfinal is None and args.steps is None:
        if args.dim == 2:
            tfinal = 6.0  # documented default for 2D runs
        else:
            raise _UsageError("one of --tfinal / --steps is required")
    return ExperimentConfig(
        model_kind=ModelKind(args.model),
        scheme=SchemeKind(args.scheme),
        dim=args.dim,
        kappa=args.kappa,
        tau=tau,
        n_per_axis=args.n,
        t_final=tfinal,
        n_steps=args.steps,
        init=args.init,
        out_dir=args.out,
        snap_every=snap_every,
        monitors=tuple(monitors),
    )


def _report_lines(config: ExperimentConfig, reports: dict[str, MonitorReport],
                  final_energy: float, final_linf: float, exit_code: int) -> list[str]:
    lines = [
        "command: run",
        f"model: {config.model_kind.value}",
        f"scheme: {config.scheme.value}",
        f"dim: {config.dim}",
        f"kappa: {config.kappa!r}",
        f"tau: {config.tau!r}",
        f"n_per_axis: {config.n_per_axis}",
        f"steps: {config.step_count}",
        f"init: {config.init}",
        f"snap_every: {config.snap_every}",
        f"monitors_enabled: {','.join(config.monitors) if config.monitors else 'none'}",
    ]
    for name, rep in reports.items():
        first = "" if rep.first_violation_step is None else str(rep.first_violation_step)
        lines += [
            f"{name}_violated: {str(rep.violated).lower()}",
            f"{name}_first_violation_step: {first}",
            f"{name}_worst_excess: {rep.worst_excess!r}",
        ]
    lines += [
        f"final_energy: {final_energy!r}",
        f"final_linf: {final_linf!r}",
        f"exit_code: {exit_code}",
    ]
    return lines


def cmd_run(args) -> int:
    config = _build_config(args, tau=args.tau, monitors=args.monitors, snap_every=args.snap_every)
    u0 = initial_field(config)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)

    observers = []
    if config.snap_every > 0:
        def snapshot_observer(state, record):
            if record.step_index % config.snap_every == 0:
                io.write_snapshot(out / f"snap_{record.step_index}.psg", state.u_curr,
                                  record.t, config.kappa)
        observers.append(snapshot_observer)

    records = run(u0, config.model, config.scheme, config.tau, config.step_count, observers)
    io.write_series_csv(out / "series.csv", records)

    reports = {
        "energy": energy_monitor(records),
        "modified_energy": energy_monitor(records, modified=True),
        "maxp": max_principle_monitor(records),
    }
    fired = any(reports[name].violated for name in config.monitors)
    code = 3 if fired else 0
    final = records[-1]
    (out / "report.txt").write_text(
        "\n".join(_report_lines(config, reports, final.energy, final.linf, code)) + "\n",
        encoding="ascii",
    )
    print(f"run finished: {config.step_count} steps, final t = {final.t:g}, "
          f"final energy = {final.energy:.12g}, exit {code}")
    return code


def cmd_sweep(args) -> int:
    try:
        taus = [float(tok) for tok in args.tau_list.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"--tau-list must be comma-separated numbers, got {args.tau_list!r}")
    if not taus or any(t <= 0 for t in taus):
        raise _UsageError(f"--tau-list entries must all be > 0, got {args.tau_list!r}")

    # Placeholder tau that always passes validation; the sweep swaps in each
    # listed value, so a bad entry is recorded per tau instead of aborting.
    base_tau = args.tfinal if args.tfinal is not None else taus[0]
    config = _build_config(args, tau=base_tau)
    args.out.mkdir(parents=True, exist_ok=True)
    sweep = stability_sweep(config, taus)
    io.write_sweep_csv(args.out / "sweep.csv", sweep)
    for tau, reports, error in zip(sweep.tau_values, sweep.reports, sweep.errors):
        if error is not None:
            print(f"tau={tau:g}: ERROR {error}")
        else:
            print(f"tau={tau:g}: energy_violated={str(reports[0].violated).lower()} "
                  f"maxp_violated={str(reports[2].violated).lower()}")
    return 2 if any(e is not None for e in sweep.errors) else 0


def cmd_steady(args) -> int:
    sign = 1 if args.sign == "+" else -1
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    if args.case == "periodic":
        orbit = build_periodic_orbit(args.C, args.kappa, quad_points=args.points)
        x, u = orbit.full_profile()
        if sign < 0:
            u = -u
        io.write_profile_csv(out / "profile.csv", x, u)
        print(f"classification: {Regime.PERIODIC.value}")
        print(f"amplitude: {orbit.case.amplitude!r}")
        print(f"period: {orbit.period!r}")
        print(f"residual: {orbit.residual_max()!r}")
        return 0

    x = np.linspace(-np.pi, np.pi, 513)
    if args.case == "kink":
        u = kink_eval(args.kappa, sign, args.c, x)
        regime, amplitude = Regime.KINK, np.pi
    elif args.case == "constant":
        u = np.full_like(x, sign * np.pi)
        regime, amplitude = Regime.CONSTANT_PI, np.pi
    else:
        u = np.zeros_like(x)
        regime, amplitude = Regime.ZERO, 0.0
    io.write_profile_csv(out / "profile.csv", x, u)
    print(f"classification: {regime.value}")
    print(f"amplitude: {amplitude!r}")
    print(f"residual: {residual(u, args.kappa, spacing=x[1] - x[0])!r}")
    return 0


def cmd_potential_table(args) -> int:
    args.out.parent.mkdir(parents=True, exist_ok=True)
    io.emit_potential_table(args.out)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonFiniteError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
