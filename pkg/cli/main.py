"""Command-line entry point: python -m cli <command> --config scenario.yaml.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 file-system failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np

from cavity.emitters import list_emitters_table
from cavity.optimizer import GHZ, maximize_in_box, synthetic_objective
from cli.models import build_report
from config.scenario import ScenarioConfig, load_scenario
from langevin.dynamics import TRAJECTORY_COLUMNS, LangevinParams, propagate_langevin
from memory.orchestrator import StageError, build_channels, optimize_only, round_trip
from qcore.errors import ConfigError, NumericalError

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        exc = exc.cause
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    if isinstance(exc, ValueError):
        return EXIT_CONFIG
    return EXIT_NUMERICAL


def _write_json(path: str | Path | None, payload: Any) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def _scenario(args) -> ScenarioConfig:
    return load_scenario(args.config) if args.config else ScenarioConfig()


# === COMMANDS ===


def cmd_run(args) -> int:
    cfg = _scenario(args)
    result = round_trip(cfg, fast=args.fast, seed=args.seed)
    report = build_report(result)
    _write_json(args.out, report.model_dump(mode="json"))
    if not result.success:
        print(result.get_error_context(), file=sys.stderr)
        return exit_code_for(result.failure)

    print(f"\n{'=' * 60}")
    print(f"Scenario: {cfg.name} ({result.rotation.model_tag.value} control)")
    print(f"{'=' * 60}")
    print(f"  F_sp          = {result.spin_photon.fidelity:.6f}")
    print(f"  store F       = {result.store_fidelity:.6f}  (p = {result.store_probability:.4f})")
    print(f"  round-trip F  = {result.round_trip_fidelity:.6f}  (p = {result.success_probability:.4f})")
    print(f"  readout F     = {result.readout_fidelity:.6f}")
    print(f"  approx error  = {result.rotation.approx_error:.3e}")
    print(f"  T_1           = {result.processing_time * 1e6:.4f} us")
    if args.out:
        print(f"\nReport written to {args.out}")
    return EXIT_OK


def cmd_kraus(args) -> int:
    cfg = _scenario(args)
    result = build_channels(cfg, fast=args.fast, seed=args.seed)
    result.raise_for_failure()
    report = build_report(result)
    _write_json(args.out, {
        "provenance": report.provenance.model_dump(mode="json"),
        "rotation": report.rotation,
        "kraus_readin": report.kraus_readin.model_dump(mode="json"),
        "kraus_readout": report.kraus_readout.model_dump(mode="json"),
    })
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = _scenario(args)
    if args.synthetic:
        bounds = cfg.cavity.bounds
        lower = np.array([bounds.omega0_offset_GHz[0], bounds.omega_c_offset_GHz[0], bounds.kappa_GHz[0]])
        upper = np.array([bounds.omega0_offset_GHz[1], bounds.omega_c_offset_GHz[1], bounds.kappa_GHz[1]])
        optimum = lower + np.array([0.37, 0.61, 0.29]) * (upper - lower)
        search = maximize_in_box(
            synthetic_objective(optimum, lower, upper), lower, upper,
            start=(lower + upper) / 2, budget=cfg.solver.optimizer_budget, seed=args.seed,
        )
        _write_json(args.out, {
            "synthetic": True,
            "optimum": optimum.tolist(),
            "found": search.x.tolist(),
            "value": search.value,
            "improvement": search.improvement,
            "evaluations": search.evaluations,
        })
        return EXIT_OK

    result = optimize_only(cfg, seed=args.seed)
    result.raise_for_failure()
    report = build_report(result)
    opt = result.optimization
    _write_json(args.out, {
        "provenance": report.provenance.model_dump(mode="json"),
        "cavity": report.cavity.model_dump(mode="json"),
        "F_sp": None if opt is None else opt.fidelity,
        "eta_sp": None if opt is None else opt.success_probability,
    })
    return EXIT_OK


def cmd_trajectory(args) -> int:
    cfg = _scenario(args)
    result = optimize_only(cfg, seed=args.seed)
    result.raise_for_failure()
    params = LangevinParams(result.cavity, result.photon)
    traj = propagate_langevin(params, args.spin)
    for violation in traj.validate():
        logger.warning("trajectory: %s", violation)

    handle = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow(TRAJECTORY_COLUMNS)
        for row in traj.rows():
            writer.writerow([f"{v:.12e}" for v in row])
    finally:
        if handle is not sys.stdout:
            handle.close()
    logger.info(
        "trajectory: %d samples, w_c - w_1A = %.3f GHz",
        len(traj.t), (result.cavity.omega_c - result.levels.omega_1A) / GHZ,
    )
    return EXIT_OK


def cmd_emitters(args) -> int:
    print(list_emitters_table())
    return EXIT_OK


# === PARSER ===


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cli", description="Cavity spin quantum memory simulator")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="Scenario YAML or JSON (built-in defaults if omitted)")
        p.add_argument("--out", help="Output path (stdout if omitted)")
        p.add_argument("--seed", type=int, default=None, help="Optimizer seed")

    run = sub.add_parser("run", help="Full round trip and report")
    scenario_args(run)
    run.add_argument("--fast", action="store_true", help="Frequency-domain integrals, phenomenological rotation")
    run.set_defaults(func=cmd_run)

    kraus = sub.add_parser("kraus", help="Read-in and read-out Kraus sets only")
    scenario_args(kraus)
    kraus.add_argument("--fast", action="store_true")
    kraus.set_defaults(func=cmd_kraus)

    opt = sub.add_parser("optimize-cavity", help="Optimized (w0, w_c, kappa) and F_sp")
    scenario_args(opt)
    opt.add_argument("--synthetic", action="store_true", help="Search a quadratic test landscape instead")
    opt.set_defaults(func=cmd_optimize)

    traj = sub.add_parser("trajectory", help="Langevin time series as CSV")
    scenario_args(traj)
    traj.add_argument("--spin", type=int, choices=(1, 2), default=1)
    traj.set_defaults(func=cmd_trajectory)

    emitters = sub.add_parser("emitters", help="List emitter presets")
    emitters.set_defaults(func=cmd_emitters)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, NumericalError, StageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    raise SystemExit(main())
