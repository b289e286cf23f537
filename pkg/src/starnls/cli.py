"""Command-line front end: reproduce the standing-wave objects and runs.

Subcommands: solve, state, energy, hessian, threshold, evolve, probe,
sweep.  Options may come from a TOML file (--config); explicit flags
override file values.  Exit codes: 0 success, 2 domain/config error,
3 numeric failure, 4 stability check failed (for CI gating).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import numpy as np

from . import evolve as ev
from . import manifold as mf
from .errors import DomainError, NumericsError
from .fields import Grid, graph_energy
from .params import HalfLineConstraint, ModelParams, SolitonParams
from .soliton import halfline_mass, solve_constraint, soliton_value

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3
EXIT_UNSTABLE = 4


def fmt(x: float) -> str:
    return f"{x:.17g}"


def _out_dir(args) -> Path:
    base = args.out or os.environ.get("STARNLS_OUTDIR") or "."
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _model(args) -> ModelParams:
    return ModelParams(N=args.n, alpha=args.alpha, mu=args.mu)


def _grid_cfg(args) -> ev.PropagatorConfig:
    return ev.PropagatorConfig(L=args.length, dx=args.dx, dt=args.dt, T=args.horizon)


def _write_manifest(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands
def cmd_solve(args) -> int:
    c = HalfLineConstraint(m=args.m, a=args.a)
    sp = solve_constraint(c, args.mu)
    m_res = halfline_mass(sp, args.mu) / args.m - 1.0
    a_res = soliton_value(sp, args.mu, 0.0) / args.a - 1.0
    print(f"omega = {fmt(sp.omega)}")
    print(f"xi    = {fmt(sp.xi)}")
    print(f"residual_mass  = {fmt(m_res)}")
    print(f"residual_value = {fmt(a_res)}")
    return EXIT_OK


def cmd_state(args) -> int:
    params = _model(args)
    if args.mass is not None:
        omega = mf.omega_of_mass(args.mass, params)
    elif args.omega is not None:
        omega = args.omega
    else:
        raise DomainError("state needs either --omega or --mass")
    st = mf.symmetric_state(omega, params)
    print(f"omega = {fmt(st.omega)}")
    print(f"zeta  = {fmt(st.zeta)}")
    print(f"a     = {fmt(st.a)}")
    print(f"mass  = {fmt(st.mass)}")
    return EXIT_OK


def cmd_energy(args) -> int:
    params = _model(args)
    grid = Grid(L=args.length, dx=args.dx)
    omega = mf.omega_of_mass(args.mass, params)
    report = graph_energy(mf.symmetric_field(omega, params, grid))
    reduced = mf.reduced_energy(mf.tilde_point(args.mass, params), params)
    for name in ("mass", "kinetic", "nonlinear", "vertex", "total"):
        print(f"{name:9s} = {fmt(getattr(report, name))}")
    print(f"reduced   = {fmt(reduced)}")
    return EXIT_OK


def cmd_hessian(args) -> int:
    params = _model(args)
    tp = mf.tilde_point(args.mass, params)
    grad = mf.reduced_gradient(tp, params)
    hess = mf.reduced_hessian(tp, params)
    eig_m = np.linalg.eigvalsh(hess[:-1, :-1])
    print(f"grad_norm      = {fmt(float(np.linalg.norm(grad)))}")
    print(f"mixed_max      = {fmt(float(np.max(np.abs(hess[-1, :-1]))))}")
    print("m_block_eigs   = " + " ".join(fmt(v) for v in eig_m))
    print(f"a_entry        = {fmt(hess[-1, -1])}")
    print(f"positive_definite = {bool(np.all(np.linalg.eigvalsh(hess) > 0))}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    params = _model(args)
    m_star = mf.threshold_mass(params)
    print(f"M_star = {fmt(m_star)}")
    print("mass,lhs,rhs,holds")
    for M in np.linspace(0.25 * m_star, 2.0 * m_star, args.table_points):
        lhs, rhs, holds = mf.ground_state_inequality(float(M), params)
        print(f"{fmt(float(M))},{fmt(lhs)},{fmt(rhs)},{holds}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    params = _model(args)
    cfg = _grid_cfg(args)
    trace = ev.stability_run(args.mass, args.eps, cfg, params, seed=args.seed)
    out = _out_dir(args)
    trace_path = out / f"trace_M{args.mass:g}_eps{args.eps:g}_seed{args.seed}.csv"
    with trace_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "orbital_distance", "mass_drift", "energy_drift"])
        for row in zip(
            trace.times, trace.orbital_distance, trace.mass_drift, trace.energy_drift
        ):
            writer.writerow([fmt(v) for v in row])
    manifest = {
        "task": "evolve",
        "model": {"N": params.N, "alpha": params.alpha, "mu": params.mu},
        "config": {"L": cfg.L, "dx": cfg.dx, "dt": cfg.dt, "T": cfg.T},
        "mass": args.mass,
        "eps": args.eps,
        "seed": args.seed,
        "result": {k: v for k, v in trace.meta.items() if k != "seed"},
        "trace": trace_path.name,
    }
    _write_manifest(trace_path.with_suffix(".json"), manifest)
    status = "PASS" if trace.passed in (True, None) else "FAIL"
    print(
        f"{status} mass={fmt(args.mass)} eps={fmt(args.eps)} "
        f"max_distance={fmt(trace.meta['max_distance'])} "
        f"initial_distance={fmt(trace.meta['initial_distance'])}"
    )
    print(f"trace written to {trace_path}")
    return EXIT_OK if status == "PASS" else EXIT_UNSTABLE


def cmd_probe(args) -> int:
    params = _model(args)
    grid = Grid(L=args.length, dx=args.dx)
    report = ev.local_min_probe(
        args.mass, args.radius, args.samples, params, grid, seed=args.seed
    )
    out = _out_dir(args)
    path = out / f"probe_M{args.mass:g}_seed{args.seed}.csv"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["distance", "energy_gap"])
        for d, g in zip(report["distances"], report["gaps"]):
            writer.writerow([fmt(d), fmt(g)])
    manifest = {
        "task": "probe",
        "model": {"N": params.N, "alpha": params.alpha, "mu": params.mu},
        "grid": {"L": grid.L, "dx": grid.dx},
        "mass": args.mass,
        "radius": args.radius,
        "samples": args.samples,
        "seed": args.seed,
        "min_gap": report["min_gap"],
        "min_gap_beyond_1e-3": report["min_gap_beyond_1e-3"],
    }
    _write_manifest(path.with_suffix(".json"), manifest)
    print(f"min_gap = {fmt(report['min_gap'])}")
    print(f"min_gap_beyond_1e-3 = {fmt(report['min_gap_beyond_1e-3'])}")
    print(f"gaps written to {path}")
    return EXIT_OK


def _sweep_point(task_args):
    task, mass, n, alpha, mu = task_args
    params = ModelParams(N=n, alpha=alpha, mu=mu)
    if task == "hessian":
        tp = mf.tilde_point(mass, params)
        hess = mf.reduced_hessian(tp, params)
        eigs = np.linalg.eigvalsh(hess)
        return [mass, n, alpha, mu, float(eigs[0]), float(eigs[-1])]
    if task == "threshold":
        lhs, rhs, holds = mf.ground_state_inequality(mass, params)
        return [mass, n, alpha, mu, lhs, rhs]
    raise DomainError(f"unknown sweep task {task!r}")


def cmd_sweep(args) -> int:
    masses = args.masses or [4.0]
    points = [(args.task, m, args.n, args.alpha, args.mu) for m in masses]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, points))
    else:
        rows = [_sweep_point(p) for p in points]
    out = _out_dir(args)
    path = out / f"sweep_{args.task}.csv"
    header = {
        "hessian": ["mass", "N", "alpha", "mu", "eig_min", "eig_max"],
        "threshold": ["mass", "N", "alpha", "mu", "lhs", "rhs"],
    }[args.task]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    print(f"sweep written to {path}")
    return EXIT_OK


# ---------------------------------------------------------------- parsing
def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=3, help="number of edges")
    p.add_argument("--alpha", type=float, default=1.0, help="vertex strength")
    p.add_argument("--mu", type=float, default=1.0, help="nonlinearity exponent")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--length", type=float, default=40.0, help="edge truncation L")
    p.add_argument("--dx", type=float, default=0.01)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starnls",
        description="Standing waves and orbital stability of the NLS on a star graph",
    )
    parser.add_argument("--config", type=Path, help="TOML file with default options")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="invert (mass, vertex value) to (omega, xi)")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("state", help="symmetric stationary state data")
    _add_model_args(p)
    p.add_argument("--omega", type=float)
    p.add_argument("--mass", type=float)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("energy", help="energy report of the symmetric state")
    _add_model_args(p)
    _add_grid_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("hessian", help="reduced-energy Hessian at the symmetric point")
    _add_model_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.set_defaults(func=cmd_hessian)

    p = sub.add_parser("threshold", help="critical mass of the ground-state criterion")
    _add_model_args(p)
    p.add_argument("--table-points", type=int, default=9)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("evolve", help="perturbed evolution + orbital-distance trace")
    _add_model_args(p)
    _add_grid_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--dt", type=float, default=0.005)
    p.add_argument("--horizon", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("probe", help="random local-minimality probe")
    _add_model_args(p)
    _add_grid_args(p)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--radius", type=float, default=1e-2)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("sweep", help="fan a task out over a mass grid")
    _add_model_args(p)
    p.add_argument("--task", choices=["hessian", "threshold"], required=True)
    p.add_argument("--masses", type=float, nargs="+")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config:
        try:
            file_opts = tomllib.loads(Path(args.config).read_text())
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config}: {exc}") from exc
        section = file_opts.get(args.command, {}) | {
            k: v for k, v in file_opts.items() if not isinstance(v, dict)
        }
        # flags explicitly present on the command line keep priority
        explicit = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv}
        for key, value in section.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and attr not in explicit:
                setattr(args, attr, value)
    return args


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, list(argv if argv is not None else sys.argv[1:]))
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
