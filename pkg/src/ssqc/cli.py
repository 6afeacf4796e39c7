"""Command-line front end.

Subcommands:

* ``run --config FILE [--out FILE]``      one propagation -> trajectory CSV
* ``sweep --config FILE [--workers K] [--out FILE]``  sweep -> table CSV
* ``preset NAME``                         print a named preset config
* ``oracle markov-n2 --omega1 X --omega2 Y``  analytic two-qubit Markovian
  steady state and its coherence

Exit codes: 0 success, 1 configuration error, 2 numeric failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import markov_steady_state_analytic
from .config import ConfigError, PRESET_NAMES, RunConfig, SweepSpec, emit_config, \
    parse_config, preset
from .dynamics import NumericsError
from .operators import l1_coherence
from .sweep import run_single, run_sweep, write_sweep_outputs

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssqc",
        description="Steady-state quantum coherence simulator for qubits in a collective bath.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="propagate a single configuration")
    p_run.add_argument("--config", required=True, help="config file")
    p_run.add_argument("--out", help="output CSV path (overrides config and env)")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("--config", required=True, help="config file with a [sweep] section")
    p_sweep.add_argument("--workers", type=int, help="process count (default: $SSQC_WORKERS or cpu count)")
    p_sweep.add_argument("--out", help="output CSV path (overrides config and env)")

    p_preset = sub.add_parser("preset", help="print a named preset config")
    p_preset.add_argument("name", choices=sorted(PRESET_NAMES))

    p_oracle = sub.add_parser("oracle", help="closed-form reference results")
    p_oracle.add_argument("kind", choices=["markov-n2"],
                          help="two-qubit Markovian steady state")
    p_oracle.add_argument("--omega1", type=float, required=True)
    p_oracle.add_argument("--omega2", type=float, required=True)

    return parser


def _load_config(path: str) -> RunConfig | SweepSpec:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    if isinstance(cfg, SweepSpec):
        raise ConfigError([(0, "config defines a sweep; use the 'sweep' command")])
    traj, path = run_single(cfg, out_path=args.out)
    print(f"wrote {path} ({len(traj)} samples, final C = {traj.final_coherence:.6g})")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if not isinstance(cfg, SweepSpec):
        raise ConfigError([(0, "config has no [sweep] section; use the 'run' command")])
    outcome = run_sweep(cfg, workers=args.workers)
    path = write_sweep_outputs(outcome, out_path=args.out)
    print(f"wrote {path} ({len(outcome.points)} points, {outcome.workers} workers, "
          f"{outcome.elapsed_seconds:.1f}s)")
    if outcome.failures:
        print(f"{len(outcome.failures)} point(s) failed; see "
              f"{path.name}.failures.json", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_preset(args) -> int:
    sys.stdout.write(emit_config(preset(args.name)))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    rho = markov_steady_state_analytic(args.omega1, args.omega2)
    print(f"analytic Markovian steady state (omega1={args.omega1:g}, omega2={args.omega2:g}):")
    for row in rho:
        print(" " + " ".join(format(x.real, ".17g") for x in row))
    print(f"l1_coherence = {l1_coherence(rho):.17g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "preset": _cmd_preset,
        "oracle": _cmd_oracle,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
