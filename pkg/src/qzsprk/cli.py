"""Command-line driver: ``qzs <subcommand> [args]``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
(non-convergence, singular stage block, or a failed invariant check).
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as ex
from .diagnostics import DiagnosticsRecorder
from .errors import NumericalError, QZSError
from .io import (
    CSV_FORMAT_VERSION,
    SNAPSHOT_MAGIC,
    RunConfig,
    SnapshotWriter,
    load_config,
    read_snapshot,
    read_snapshot_meta,
    write_diagnostics_csv,
    write_report_csv,
)
from .solver import SolverParams, run
from .tableau import SUPPORTED_STAGES, gauss_tableau

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

RM_BOUND = 1e-10
RH_BOUND = 1e-9
Q_BOUND = 1e-10


def _apply_threads(cfg: RunConfig):
    # config wins over the environment
    if cfg.threads is not None:
        os.environ["QZS_THREADS"] = str(cfg.threads)


def _geometry(cfg: RunConfig):
    kw = {}
    if cfg.points is not None:
        kw["points"] = cfg.points[0] if len(cfg.points) == 1 else cfg.points
    if cfg.bounds is not None:
        kw["bounds"] = cfg.bounds
    return kw


def scenario_factory(cfg: RunConfig):
    """Return ``factory(eps=None, points=None)`` building the configured scenario."""
    geo = _geometry(cfg)
    track_q = cfg.track_q

    def factory(eps=None, points=None):
        eps = cfg.eps if eps is None else eps
        kw = dict(geo)
        if points is not None:
            kw["points"] = points
        name = cfg.scenario
        if name == "zs_soliton":
            if eps != 0:
                return ex.soliton_data(eps, **{"points": 2048, "bounds": (-128.0, 128.0), **kw},
                                       B=cfg.B, V=cfg.V, x0=cfg.x0, track_q=track_q)
            return ex.zs_soliton(**kw, B=cfg.B, V=cfg.V, x0=cfg.x0, track_q=track_q)
        if name == "soliton_data":
            return ex.soliton_data(eps, **kw, B=cfg.B, V=cfg.V, x0=cfg.x0, track_q=track_q)
        if name == "cosine_2d":
            return ex.cosine_2d(eps, **kw, track_q=track_q)
        if name == "two_solitons":
            return ex.two_solitons(cfg.case, eps, **kw, track_q=track_q)
        if name == "pump_wave":
            return ex.pump_wave(eps, cfg.k, cfg.beta, **kw, track_q=track_q)
        if name == "snapshot":
            state = read_snapshot(cfg.snapshot)
            if track_q and state.q is None:
                state = state.with_q()
            return ex.Scenario("snapshot", eps, state)
        raise QZSError(f"unknown scenario {name!r}")

    return factory


def _summary(final_t, diag, wall):
    print(f"t={final_t:.10g} max_rm={diag.max_rm:.3e} max_rh={diag.max_rh:.3e} wall={wall:.2f}s")


def _simulate(cfg: RunConfig, scenario, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    extra = []
    if cfg.snap_stride:
        extra.append(SnapshotWriter(str(out), cfg.snap_stride, scenario.eps))
    t0 = time.perf_counter()
    diag = DiagnosticsRecorder(scenario.eps, stride=cfg.diag_stride)
    params = SolverParams(tau=cfg.tau, eps=scenario.eps, **cfg.solver_kwargs())
    final = run(scenario.state0, params, gauss_tableau(cfg.scheme), cfg.T, (diag, *extra))
    wall = time.perf_counter() - t0
    write_diagnostics_csv(diag.records, out / "diagnostics.csv")
    return final, diag, wall


def cmd_run(cfg, args):
    sc = scenario_factory(cfg)()
    final, diag, wall = _simulate(cfg, sc, Path(cfg.output))
    _summary(final.t, diag, wall)
    return EXIT_OK


def cmd_collide(cfg, args):
    cfg.scenario = "two_solitons"
    cfg.case = args.case
    return cmd_run(cfg, args)


def cmd_pattern(cfg, args):
    cfg.scenario = "pump_wave"
    return cmd_run(cfg, args)


def cmd_check_invariants(cfg, args):
    cfg.track_q = True
    sc = scenario_factory(cfg)()
    final, diag, wall = _simulate(cfg, sc, Path(cfg.output))
    _summary(final.t, diag, wall)
    checks = [
        ("mass", diag.max_rm, RM_BOUND),
        ("energy", diag.max_rh, RH_BOUND),
        ("q_defect", diag.max_q_defect, Q_BOUND),
    ]
    ok = True
    for name, value, bound in checks:
        passed = bool(value < bound)
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {value:.3e} < {bound:.0e}")
    return EXIT_OK if ok else EXIT_NUMERICAL


def _report(cfg, report, name):
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    write_report_csv(report, path)
    for lev, e, n, re, rn in report.rows():
        print(f"{report.axis}={lev:.6g} e={e:.3e} n={n:.3e} rate_e={re:.2f} rate_n={rn:.2f}")
    if report.axis == "epsilon":
        print(f"slope_e={report.slope_e:.3f} slope_n={report.slope_n:.3f}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_converge_time(cfg, args):
    sc = scenario_factory(cfg)()
    report = ex.temporal_convergence(cfg.scheme, cfg.tau, cfg.levels, sc, T=cfg.T,
                                     ref_scheme=cfg.ref_scheme, ref_tau=cfg.ref_tau,
                                     **cfg.solver_kwargs())
    return _report(cfg, report, "converge_time.csv")


def cmd_converge_space(cfg, args):
    factory = scenario_factory(cfg)
    report = ex.spatial_convergence(cfg.scheme, cfg.h0, cfg.levels,
                                    lambda n: factory(points=n), T=cfg.T, tau=cfg.tau,
                                    **cfg.solver_kwargs())
    return _report(cfg, report, "converge_space.csv")


def cmd_limit_eps(cfg, args):
    factory = scenario_factory(cfg)
    report = ex.semiclassical_limit(cfg.scheme, cfg.eps_list, lambda e: factory(eps=e),
                                    tau=cfg.tau, T=cfg.T, **cfg.solver_kwargs())
    return _report(cfg, report, "limit_eps.csv")


def cmd_info(args):
    print(f"qzsprk {__version__}")
    print("schemes: " + ", ".join(f"SPRK-{s} (order {2 * s})" for s in SUPPORTED_STAGES))
    print(f"snapshot format: {SNAPSHOT_MAGIC.decode()}")
    print(f"csv format version: {CSV_FORMAT_VERSION}")
    print("scenarios: zs_soliton, soliton_data, cosine_2d, two_solitons, pump_wave, snapshot")
    return EXIT_OK


def cmd_snapshot_info(args):
    meta = read_snapshot_meta(args.path)
    for key, val in meta.items():
        print(f"{key} = {val}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "converge-time": cmd_converge_time,
    "converge-space": cmd_converge_space,
    "limit-eps": cmd_limit_eps,
    "collide": cmd_collide,
    "pattern": cmd_pattern,
    "check-invariants": cmd_check_invariants,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qzs", description="Quantum Zakharov SPRK simulator")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("run", "converge-time", "converge-space", "limit-eps", "pattern", "check-invariants"):
        p = sub.add_parser(name)
        p.add_argument("config")
    p = sub.add_parser("collide")
    p.add_argument("case", choices=("I", "II", "III"))
    p.add_argument("config")
    sub.add_parser("info")
    p = sub.add_parser("snapshot-info")
    p.add_argument("path")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "info":
            return cmd_info(args)
        if args.command == "snapshot-info":
            return cmd_snapshot_info(args)
        cfg = load_config(args.config)
        _apply_threads(cfg)
        with np.errstate(all="ignore"):
            return COMMANDS[args.command](cfg, args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (QZSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
