"""Command-line entry point: ``siml <subcommand> [options]``."""

import argparse
import json
import os
import sys
import time

import numpy as np

from siml.asymptotics import run_kernel_checks
from siml.errors import SimlError
from siml.estimator import SimlConfig, choose_m, siml_general
from siml.harness import (
    ExperimentConfig,
    _json_safe,
    emit_report,
    environment_info,
    ingest_csv,
    run_consistency,
    run_noise_comparison,
    run_normality,
    summary_checks,
    write_json,
    write_observations_csv,
)
from siml.sampling import make_poisson_grid, make_uniform_grid, sampling_map
from siml.simulate import add_noise, observe, simulate_fine

# Defaults per experiment; a --config file and flags override them.
EXPERIMENT_DEFAULTS = {
    "mc-consistency": {},
    "mc-normality": {"n-list": [8192], "m-rule": {"m": 27}, "reps": 1000},
    "mc-noise": {"n-list": [8192], "m-rule": {"m": 64}, "noise": {"sd": 0.001, "distribution": "gaussian"}},
    "simulate": {"n-list": [512], "reps": 1},
}


def _common(p, reps=True):
    p.add_argument("--config", help="JSON config file (kebab-case keys)")
    p.add_argument("--seed", type=int, help="master seed")
    if reps:
        p.add_argument("--reps", type=int, help="number of replications")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="worker threads (results do not depend on it)")
    p.add_argument("--no-timing", action="store_true", help="report runtime as null for byte-stable output")


def build_parser():
    parser = argparse.ArgumentParser(prog="siml", description="SIML integrated covariance estimation and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-check", help="run the deterministic kernel identities and bounds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="siml-out")
    p.add_argument("--quick", action="store_true", help="smaller m ranges")
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("simulate", help="simulate one path and write it as tick CSV")
    _common(p, reps=False)
    p.add_argument("--n", type=int, help="observation count per asset")

    p = sub.add_parser("estimate", help="estimate the integrated covariance from a tick CSV")
    p.add_argument("input", help="CSV with header time,asset,price")
    p.add_argument("--m", type=int, help="kernel order (default: rule from --c and --alpha)")
    p.add_argument("--m-grid", help="comma-separated list of m values to report")
    p.add_argument("--scheme", default="midpoint", choices=["left", "right", "midpoint", "ksss"])
    p.add_argument("--alpha", type=float, default=0.4)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--normalize", action="store_true", help="rescale each asset's times to [0, 1]")
    p.add_argument("--out", default="siml-out")
    p.add_argument("--no-timing", action="store_true")

    for name, helptext in (
        ("mc-consistency", "Monte Carlo consistency study"),
        ("mc-normality", "Monte Carlo asymptotic normality study"),
        ("mc-noise", "SIML vs realized covariance under observation noise"),
    ):
        _common(sub.add_parser(name, help=helptext))
    return parser


def experiment_config(args, command):
    cfg = ExperimentConfig.from_dict(EXPERIMENT_DEFAULTS[command])
    if args.config:
        cfg = ExperimentConfig.from_json(args.config, cfg)
    overrides = {}
    for flag, key in (("seed", "seed"), ("reps", "reps"), ("out", "out"), ("workers", "workers")):
        val = getattr(args, flag, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "n", None) is not None:
        overrides["n-list"] = [args.n]
    return ExperimentConfig.from_dict(overrides, cfg) if overrides else cfg


def _cmd_kernel_check(args):
    report = run_kernel_checks(seed=args.seed, quick=args.quick)
    checks = report["checks"]
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "kernel-check.json")
    write_json(
        path,
        {"seed": args.seed, "quick": args.quick, "versions": environment_info()},
        {"passed": sum(c["status"] == "pass" for c in checks), "total": len(checks)},
        checks,
        None if args.no_timing else report["runtime-seconds"],
    )
    for c in checks:
        print(f"{c['status'].upper():4}  {c['name']:32} worst={c['worst-error']:.3g}")
    print(f"wrote {path}")
    return 0 if all(c["status"] == "pass" for c in checks) else 1


def _cmd_simulate(args):
    cfg = experiment_config(args, "simulate")
    model = cfg.build_model()
    n = cfg.n_list[-1]
    ss = np.random.SeedSequence(cfg.seed)
    path_ss, grid_ss, noise_ss = ss.spawn(3)
    if cfg.grid == "uniform":
        grids = [make_uniform_grid(n)] * model.n_assets
    else:
        grids = [make_poisson_grid(n, s) for s in grid_ss.spawn(model.n_assets)]
    path = simulate_fine(model, cfg.steps_factor * max(g.n for g in grids), path_ss)
    obs = observe(path, grids)
    if cfg.noise_spec.sd > 0:
        obs = add_noise(obs, cfg.noise_spec, noise_ss)
    os.makedirs(cfg.out, exist_ok=True)
    out = os.path.join(cfg.out, "ticks.csv")
    write_observations_csv(obs, out)
    print(f"wrote {out}")
    return 0


def _cmd_estimate(args):
    start = time.perf_counter()
    obs = ingest_csv(args.input, normalize=args.normalize)
    n_min = min(g.n for g in obs.grids)
    if args.m_grid:
        m_values = [int(v) for v in args.m_grid.split(",") if v.strip()]
    elif args.m is not None:
        m_values = [args.m]
    else:
        m_values = [choose_m(n_min, args.c, args.alpha)]
    maps = [sampling_map(g, args.scheme) for g in obs.grids]
    names = obs.metadata["assets"]
    estimates = []
    for m in m_values:
        rep = siml_general(obs, SimlConfig(m, maps))
        estimates.append({"m": m, "V": rep.V.tolist()})
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "estimate.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("m,asset," + ",".join(names) + "\n")
        for est in estimates:
            for name, row in zip(names, est["V"]):
                fh.write(f"{est['m']},{name}," + ",".join(repr(float(v)) for v in row) + "\n")
    json_path = os.path.join(args.out, "estimate.json")
    write_json(
        json_path,
        {
            "input": args.input,
            "scheme": args.scheme,
            "m-values": m_values,
            "alpha": args.alpha,
            "c": args.c,
            "normalize": args.normalize,
            "versions": environment_info(),
        },
        {"assets": names, "n": [g.n for g in obs.grids], "estimates": estimates, "ingest": obs.metadata},
        [],
        None if args.no_timing else time.perf_counter() - start,
    )
    for est in estimates:
        print(f"m={est['m']}: " + json.dumps(_json_safe(est["V"])))
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _cmd_experiment(args, runner):
    cfg = experiment_config(args, args.command)
    summary = runner(cfg)
    files = emit_report(summary, cfg.out, timing=not args.no_timing)
    for c in summary_checks(summary):
        print(f"{c['status'].upper():4}  {c['name']}")
    for f in files:
        print(f"wrote {f}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "kernel-check":
            return _cmd_kernel_check(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        runner = {"mc-consistency": run_consistency, "mc-normality": run_normality, "mc-noise": run_noise_comparison}
        return _cmd_experiment(args, runner[args.command])
    except (SimlError, OSError) as exc:
        print(f"siml: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
