"""Command-line interface.

Subcommands::

    branchsim run       --config CFG --out DIR  [--horizon N] [--tolerance X] [--verify]
    branchsim verify    [--tolerance X] [--trials N] [--quick] [--seed N]
    branchsim chsh-scan --config CFG --sites A B [--resolution DEG]
                        [--protocol record|state] [--out DIR]
    branchsim scenario  list

Exit codes: 0 success; 1 configuration or usage error; 2 verification
failure (a check missed, or a --verify cross-check diverged).
"""

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, analysis, oracle, verify
from .bell import record_chsh_scan
from .lattice import LatticeError
from .reporting import build_report, write_report
from .schedule import SCENARIOS, ConfigError, load_config

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="branchsim",
        description="Simulate and analyse decoherence branching on a 1-D spin lattice.")
    parser.add_argument("--version", action="version", version=f"branchsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write a report")
    run.add_argument("--config", required=True, help="scenario config (JSON)")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--horizon", type=int, default=None, help="override the horizon")
    run.add_argument("--tolerance", type=float, default=analysis.BRANCH_TOL,
                     help="branch/decoherence tolerance (default %(default)g)")
    run.add_argument("--verify", action="store_true",
                     help="cross-check every step against the dense reference engine")

    ver = sub.add_parser("verify", help="run the self-verification suite")
    ver.add_argument("--tolerance", type=float, default=1e-10)
    ver.add_argument("--trials", type=int, default=verify.DEFAULT_TRIALS,
                     help="random differential trials (default %(default)s)")
    ver.add_argument("--quick", action="store_true", help="only 100 random trials")
    ver.add_argument("--seed", type=int, default=20260825)
    # test hook: corrupt a library gate to prove the checks can fail
    ver.add_argument("--inject-fault", choices=["corrupt-gate"], default=None,
                     help=argparse.SUPPRESS)

    scan = sub.add_parser("chsh-scan", help="grid-scan CHSH over measurement settings")
    scan.add_argument("--config", required=True, help="scenario config (JSON)")
    scan.add_argument("--sites", type=int, nargs=2, required=True, metavar=("A", "B"),
                      help="the two readout sites")
    scan.add_argument("--resolution", type=float, default=1.0, help="grid step (degrees)")
    scan.add_argument("--protocol", choices=["record", "state"], default="record",
                      help="record: rotate the system qubits before the run and read "
                           "the record bits; state: rotated readout of the final state")
    scan.add_argument("--out", default=None, help="directory for grid CSV and summary")

    scn = sub.add_parser("scenario", help="inspect built-in scenarios")
    scn.add_argument("action", choices=["list"])
    return parser


def _cmd_run(args) -> int:
    config = load_config(args.config)
    started = time.perf_counter()
    states = config.run(horizon=args.horizon)

    if args.verify:
        dense_states = oracle.dense_run(oracle.densify(config.initial), config.schedule,
                                        args.horizon if args.horizon is not None
                                        else config.horizon)
        worst = max(verify.compare_states(s, d)
                    for s, d in zip(states, dense_states))
        if worst > 1e-10:
            print(f"verification FAILED: engines deviate by {worst:.3g}", file=sys.stderr)
            return EXIT_VERIFY
        print(f"verified against dense engine (worst deviation {worst:.3g})")

    report = build_report(config, states, args.tolerance)
    written = write_report(report, args.out)
    elapsed = time.perf_counter() - started
    final = report["steps"][-1]
    print(f"scenario {config.name}: {len(states) - 1} steps, "
          f"{final.get('branches', {}).get('count', '?')} final branches")
    for path in written:
        print(f"wrote {path}")
    print(f"wall time {elapsed:.3f} s")
    return EXIT_OK


def _cmd_verify(args) -> int:
    overrides = None
    if args.inject_fault == "corrupt-gate":
        bad = np.eye(4, dtype=complex)
        bad[0, 1] = 0.5  # deliberately non-unitary
        overrides = {"U_copy": bad}
    n_trials = 100 if args.quick else args.trials
    results = verify.run_verification(tol=args.tolerance, n_trials=n_trials,
                                      seed=args.seed, gate_overrides=overrides)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "ok  " if r.passed else "FAIL"
        failures += not r.passed
        print(f"{status}  {r.name:<{width}}  {r.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def _cmd_chsh_scan(args) -> int:
    config = load_config(args.config)
    if args.resolution <= 0 or args.resolution > 90:
        raise ConfigError(f"resolution must be in (0, 90] degrees, got {args.resolution}")
    site_a, site_b = args.sites
    started = time.perf_counter()
    if args.protocol == "record":
        result = record_chsh_scan(config, (site_a, site_b), args.resolution)
    else:
        final = config.run()[-1]
        result = analysis.chsh_grid_max(final, site_a, site_b, args.resolution)
    elapsed = time.perf_counter() - started

    settings_deg = [math.degrees(t) for t in result.settings]
    print(f"CHSH max {result.value:.9f} (protocol {args.protocol}, "
          f"resolution {args.resolution:g} deg, sites {site_a},{site_b})")
    print("settings (deg): a={:.6g} a'={:.6g} b={:.6g} b'={:.6g}".format(*settings_deg))
    print(f"wall time {elapsed:.3f} s")

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        summary = {
            "protocol": args.protocol,
            "sites": [site_a, site_b],
            "resolution_deg": args.resolution,
            "value": float(f"{result.value:.12g}"),
            "settings_rad": [float(f"{t:.12g}") for t in result.settings],
            "settings_deg": [float(f"{t:.12g}") for t in settings_deg],
        }
        spath = os.path.join(args.out, "chsh_summary.json")
        with open(spath, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        gpath = os.path.join(args.out, "chsh_grid.csv")
        degs = np.rad2deg(result.angles)
        with open(gpath, "w", encoding="utf-8", newline="") as fh:
            fh.write("theta_a_deg,theta_b_deg,correlation\n")
            for i, ta in enumerate(degs):
                for j, tb in enumerate(degs):
                    fh.write(f"{ta:.12g},{tb:.12g},{result.e_grid[i, j]:.12g}\n")
        print(f"wrote {spath}")
        print(f"wrote {gpath}")
    return EXIT_OK


def _cmd_scenario(args) -> int:
    if args.action == "list":
        for name, factory in sorted(SCENARIOS.items()):
            blurb = (factory.__doc__ or "").strip().splitlines()[0]
            print(f"{name:<15} {blurb}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "verify": _cmd_verify,
        "chsh-scan": _cmd_chsh_scan,
        "scenario": _cmd_scenario,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, LatticeError, analysis.AnalysisError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
