"""Command-line front end: table and figure data as CSV, plus the validation harness.

Exit codes: 0 success, 1 numerical non-convergence, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import tables, validation
from .classical import ClassicalHelix, helix_derived
from .freefield import (
    FreeCoherentState,
    energy_moments,
    evolved_moments,
    kg_density,
    nonrel_moments,
    probability_density,
    velocity_moments,
)
from .magnetic import (
    MagneticCoherentState,
    SeriesNonConvergenceError,
    SeriesSpec,
    auto_series_spec,
    conserved_expectations,
    kg_field,
    momentum_expectations,
    parallel_motion,
    transverse_position,
    x3_uncertainty,
)
from .neutral import NeutralCoherentState, neutral_field
from .quadrature import NonConvergenceWarning, QuadratureSpec

UNITS_NOTE = (
    "# dimensionless units: momentum in m*c, length in hbar/(m*c), "
    "time in hbar/(m*c^2), energy in m*c^2, velocity in c"
)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(UNITS_NOTE + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _write_dict_csv(path: Path, rows: list[dict]) -> Path:
    header = list(rows[0].keys())
    return _write_csv(path, header, ([r[k] for k in header] for r in rows))


def _grid(parser, lo, hi, step, what) -> np.ndarray:
    if step <= 0:
        parser.error(f"{what} step must be positive")
    pts = np.arange(lo, hi + 0.5 * step, step)
    if pts.size == 0:
        parser.error(f"{what} grid is empty")
    return pts


def _qspec(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.quad_tol)


def _sspec(args) -> SeriesSpec:
    return SeriesSpec(tail_tol=args.series_tol)


# ------------------------------------------------------------------ commands


def cmd_free(args, parser) -> int:
    out = Path(args.out)
    qspec = _qspec(args)
    written = []
    if args.table == 1:
        rows = tables.free_energy_table(qspec)
        written.append(_write_dict_csv(out / "table1_free_energy.csv", rows))
    elif args.observable == "vdot":
        s = FreeCoherentState(lam=args.lam, alpha=args.alpha, p_mean=args.p_mean, epsilon=args.epsilon)
        vm = velocity_moments(s, qspec)
        v_cl = args.p_mean / math.sqrt(1.0 + args.p_mean**2)
        written.append(
            _write_csv(
                out / "observable_vdot.csv",
                ["lam", "p_mean", "vdot", "vdot_var", "vdot_classical"],
                [[args.lam, args.p_mean, vm.v_mean, vm.v_var, v_cl]],
            )
        )
    else:
        s = FreeCoherentState(lam=args.lam, alpha=args.alpha, p_mean=args.p_mean, epsilon=args.epsilon)
        taus = _grid(parser, args.tau_min, args.tau_max, args.tau_step, "tau")
        xs = _grid(parser, args.x_min, args.x_max, args.x_step, "x")
        ps = _grid(parser, args.p_min, args.p_max, args.p_step, "p")

        def prow(p):
            sp = FreeCoherentState(lam=args.lam, p_mean=float(p), epsilon=args.epsilon)
            vm = velocity_moments(sp, qspec)
            em = energy_moments(sp, qspec)
            return [
                p, vm.v_mean, math.sqrt(vm.v_var), em.E_mean, math.sqrt(em.E_var),
                p / math.sqrt(1.0 + p * p), math.sqrt(1.0 + p * p),
                1.0 + args.lam**2 / 8.0 + p * p / 2.0,
            ]

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(prow, ps))
        written.append(
            _write_csv(
                out / "moments_vs_p.csv",
                ["p_mean", "vdot", "dvdot", "E", "dE", "vdot_classical", "E_classical", "E_nonrel"],
                rows,
            )
        )

        def trow(tau):
            m = evolved_moments(s, float(tau), qspec)
            nr = nonrel_moments(s, float(tau))
            return [
                tau, m.x_mean, math.sqrt(m.x_var), m.uncertainty_product,
                nr.x_mean, math.sqrt(nr.x_var), nr.uncertainty_product,
            ]

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(trow, taus))
        written.append(
            _write_csv(
                out / "moments_vs_tau.csv",
                ["tau", "x_mean", "dx", "dx_dp", "x_mean_nonrel", "dx_nonrel", "dx_dp_nonrel"],
                rows,
            )
        )

        def drow(tau):
            rho = probability_density(s, float(tau), xs, qspec)
            kg = kg_density(s, float(tau), xs, spec=qspec)
            return tau, rho, kg

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            blocks = list(pool.map(drow, taus))
        rows = [
            [tau, x, r, k]
            for tau, rho, kg in blocks
            for x, r, k in zip(xs, rho, kg)
        ]
        written.append(
            _write_csv(out / "density_grid.csv", ["tau", "x", "rho", "kg_density"], rows)
        )
    for path in written:
        print(f"wrote {path}")
    return 0


def _helix_trajectory_rows(state, periods, steps, qspec, sspec, variant):
    helix = helix_derived(
        ClassicalHelix(Lambda=state.Lambda, p_perp=state.p1_mean, p3=state.p3_mean)
    )
    taus = np.linspace(0.0, periods * helix.period, steps)
    x1, x2 = transverse_position(state, taus, qspec, sspec, variant)
    me = momentum_expectations(state, taus, qspec, sspec, variant)
    pm = parallel_motion(state, 0.0, qspec, sspec)
    pi_perp = state.p1_mean
    rows = []
    for i, tau in enumerate(taus):
        rows.append(
            [
                tau / helix.period,
                x1[i] / helix.radius,
                x2[i] / helix.radius,
                pm.x3dot_mean * tau,
                me.p1[i] / pi_perp,
                me.p2[i] / pi_perp,
                me.Pi1[i] / pi_perp,
                me.Pi2[i] / pi_perp,
            ]
        )
    return rows


_TRAJ_HEADER = [
    "tau_over_tau_cl", "x1_over_Rcl", "x2_over_Rcl", "x3",
    "p1_over_Piperp", "p2_over_Piperp", "Pi1_over_Piperp", "Pi2_over_Piperp",
]


def cmd_magnetic(args, parser) -> int:
    out = Path(args.out)
    qspec = _qspec(args)
    base_sspec = _sspec(args)
    written = []
    if args.table == 2:
        rows = tables.magnetic_table(qspec, base_sspec, args.threads)
        written.append(_write_dict_csv(out / "table2_uniform_field.csv", rows))
    elif args.table == 3:
        rows = tables.field_sweep_table(qspec, base_sspec, args.threads)
        written.append(_write_dict_csv(out / "table3_field_sweep.csv", rows))
    elif args.table == 4:
        rows = tables.nonrel_sweep_table(qspec, base_sspec, args.threads)
        written.append(_write_dict_csv(out / "table4_nonrel_sweep.csv", rows))
    elif args.fig == "helix":
        for tag, l3, lperp in (
            ("narrow", 1e-3, math.sqrt(0.001)),
            ("wide", 0.25, 0.25),
        ):
            state = MagneticCoherentState(
                Lambda=0.001, lambda_perp=lperp, lambda3=l3, p1_mean=1.2, p3_mean=1.6
            )
            sspec = auto_series_spec(state, base_sspec)
            rows = _helix_trajectory_rows(state, args.periods, args.steps, qspec, sspec, args.variant)
            written.append(_write_csv(out / f"helix_{tag}.csv", _TRAJ_HEADER, rows))
    elif args.check == "gyration-center":
        state = _magnetic_state(args)
        sspec = auto_series_spec(state, base_sspec)
        helix = helix_derived(
            ClassicalHelix(Lambda=state.Lambda, p_perp=state.p1_mean, p3=state.p3_mean)
        )
        taus = np.linspace(0.0, 5.0 * helix.period, 41)
        x1, x2 = transverse_position(state, taus, qspec, sspec, args.variant)
        me = momentum_expectations(state, taus, qspec, sspec, args.variant)
        gc1 = x1 / 2.0 + me.p2 / state.Lambda
        gc2 = x2 / 2.0 - me.p1 / state.Lambda
        dev = max(float(np.max(np.abs(gc1 - gc1[0]))), float(np.max(np.abs(gc2 - gc2[0]))))
        start = max(abs(float(x1[0])), abs(float(x2[0])))
        print(f"gyration-center max drift over 5 periods: {dev:.3e}")
        print(f"initial transverse position residual: {start:.3e} (R_cl = {helix.radius:.6g})")
        return 0 if dev < 1e-10 else 1
    else:
        state = _magnetic_state(args)
        sspec = auto_series_spec(state, base_sspec)
        rows = _helix_trajectory_rows(state, args.periods, args.steps, qspec, sspec, args.variant)
        written.append(_write_csv(out / "trajectory.csv", _TRAJ_HEADER, rows))
        ce = conserved_expectations(state, qspec, sspec)
        written.append(
            _write_csv(
                out / "conserved.csv",
                ["E_mean", "L3_mean", "R_mean", "R_sq_mean", "R_var"],
                [list(ce)],
            )
        )
        helix = helix_derived(
            ClassicalHelix(Lambda=state.Lambda, p_perp=state.p1_mean, p3=state.p3_mean)
        )
        taus = np.linspace(0.0, args.periods * helix.period, args.steps)
        unc = [[t, x3_uncertainty(state, float(t), qspec, sspec)] for t in taus]
        written.append(_write_csv(out / "x3_uncertainty.csv", ["tau", "dx3_dp3"], unc))
        half = 6.0 / min(state.lambda_perp, state.lambda3)
        coords = np.linspace(-half, half, 41)
        slices = []
        for c in coords:
            perp = abs(kg_field(state, 0.0, abs(float(c)), 0.0 if c >= 0 else math.pi, 0.0,
                                qspec=qspec, sspec=sspec)) ** 2
            slices.append(["x1", c, perp])
        for c in coords:
            axial = abs(kg_field(state, 0.0, 0.0, 0.0, float(c), qspec=qspec, sspec=sspec)) ** 2
            slices.append(["x3", c, axial])
        written.append(
            _write_csv(out / "kg_modulus_slices.csv", ["axis", "coord", "kg_modulus_sq"], slices)
        )
    for path in written:
        print(f"wrote {path}")
    return 0


def _magnetic_state(args) -> MagneticCoherentState:
    return MagneticCoherentState(
        Lambda=args.Lambda,
        lambda_perp=(math.sqrt(args.Lambda) if args.lambda_perp is None else args.lambda_perp),
        lambda3=args.lambda3,
        p1_mean=args.p1,
        p3_mean=args.p3,
    )


def cmd_neutral(args, parser) -> int:
    out = Path(args.out)
    qspec = _qspec(args)
    s = NeutralCoherentState(FreeCoherentState(lam=args.lam, alpha=args.alpha, p_mean=args.p_mean))
    taus = _grid(parser, args.tau_min, args.tau_max, args.tau_step, "tau")
    xs = _grid(parser, args.x_min, args.x_max, args.x_step, "x")
    if args.reality_check:
        worst = 0.0
        for tau in taus:
            worst = max(worst, float(np.max(np.abs(neutral_field(s, float(tau), xs, qspec).imag))))
        print(f"neutral-field max |Im| over the grid: {worst:.3e}")
        return 0 if worst < 1e-10 else 1
    rows = []
    for tau in taus:
        vals = neutral_field(s, float(tau), xs, qspec)
        rows.extend([tau, x, v.real, v.imag] for x, v in zip(xs, vals))
    path = _write_csv(out / "neutral_field.csv", ["tau", "x", "re_psi", "im_psi"], rows)
    print(f"wrote {path}")
    return 0


def cmd_validate(args, parser) -> int:
    out = Path(args.out)
    if args.tables and not args.all:
        records = validation.table_checks()
    else:
        records = validation.run_all(with_tables=True, with_kg=not args.skip_kg)
    out.mkdir(parents=True, exist_ok=True)
    lines = []
    for rec in records:
        status = "PASS" if rec["passed"] else "FAIL"
        line = f"[{status}] {rec['name']}: measured={rec['measured']:.3e} tolerance={rec['tolerance']:.3e}"
        if rec["detail"]:
            line += f" ({rec['detail']})"
        lines.append(line)
        print(line)
    (out / "validation_report.txt").write_text("\n".join(lines) + "\n")
    (out / "validation_report.json").write_text(json.dumps(records, indent=2) + "\n")
    print(f"wrote {out / 'validation_report.txt'}")
    print(f"wrote {out / 'validation_report.json'}")
    return 0 if all(r["passed"] for r in records) else 1


# ------------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=str, default=None, help="JSON file of option defaults")
    p.add_argument("--out", type=str, default="out", help="output directory")
    p.add_argument("--threads", type=int, default=None, help="worker threads for grids and tables")
    p.add_argument("--quad-tol", type=float, default=1e-10, help="quadrature relative tolerance")
    p.add_argument("--series-tol", type=float, default=1e-12, help="series tail tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgcoherent",
        description="Relativistic coherent-state observables of KG wave packets (CSV outputs)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free", help="free 1+1-D packet: moments, densities, energy table")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="inverse width lambda")
    p.add_argument("--p-mean", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--epsilon", type=int, choices=(-1, 1), default=1)
    p.add_argument("--observable", choices=("vdot",), default=None)
    p.add_argument("--table", type=int, choices=(1,), default=None)
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=20.0)
    p.add_argument("--tau-step", type=float, default=5.0)
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=30.0)
    p.add_argument("--x-step", type=float, default=0.1)
    p.add_argument("--p-min", type=float, default=0.0)
    p.add_argument("--p-max", type=float, default=5.0)
    p.add_argument("--p-step", type=float, default=0.25)
    p.set_defaults(func=cmd_free)

    p = sub.add_parser("magnetic", help="uniform-field packet: trajectories, tables, checks")
    _add_common(p)
    p.add_argument("--Lambda", type=float, default=0.01, help="dimensionless field strength")
    p.add_argument("--lambda-perp", type=float, default=None, help="default sqrt(Lambda)")
    p.add_argument("--lambda3", type=float, default=0.25)
    p.add_argument("--p1", type=float, default=1.2)
    p.add_argument("--p3", type=float, default=1.6)
    p.add_argument("--periods", type=float, default=5.0, help="classical precession periods")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--variant", choices=("printed", "symmetric"), default="printed")
    p.add_argument("--table", type=int, choices=(2, 3, 4), default=None)
    p.add_argument("--fig", choices=("helix",), default=None)
    p.add_argument("--check", choices=("gyration-center",), default=None)
    p.set_defaults(func=cmd_magnetic)

    p = sub.add_parser("neutral", help="neutral (real) field combination")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--p-mean", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--reality-check", action="store_true")
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=10.0)
    p.add_argument("--tau-step", type=float, default=2.5)
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=15.0)
    p.add_argument("--x-step", type=float, default=0.25)
    p.set_defaults(func=cmd_neutral)

    p = sub.add_parser("validate", help="run the invariant suites and table reproductions")
    _add_common(p)
    p.add_argument("--all", action="store_true", help="all suites (default)")
    p.add_argument("--tables", action="store_true", help="table reproductions only")
    p.add_argument("--skip-kg", action="store_true", help="skip the slow KG-modulus suite")
    p.set_defaults(func=cmd_validate)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    # pre-scan for --config so file values become defaults that flags override
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 < len(argv):
            cfg = json.loads(Path(argv[idx + 1]).read_text())
            for sp in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
                defaults = {}
                for key, val in cfg.items():
                    opt = "--" + key.lstrip("-")
                    for action in sp._actions:
                        if opt in action.option_strings or action.dest == key:
                            defaults[action.dest] = val
                            break
                sp.set_defaults(**defaults)
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, json.JSONDecodeError) as exc:
        parser.exit(2, f"error reading config: {exc}\n")
    args = parser.parse_args(argv)
    sub = {
        "free": "free",
        "magnetic": "magnetic",
        "neutral": "neutral",
        "validate": "validate",
    }[args.command]
    subparser = parser._subparsers._group_actions[0].choices[sub]  # noqa: SLF001
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergenceWarning)
        try:
            code = args.func(args, subparser)
        except SeriesNonConvergenceError as exc:
            print(f"series non-convergence: {exc}", file=sys.stderr)
            return 1
        if code == 0 and any(issubclass(w.category, NonConvergenceWarning) for w in caught):
            print("quadrature non-convergence encountered", file=sys.stderr)
            return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
