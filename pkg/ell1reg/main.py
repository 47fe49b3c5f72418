"""
main.py

Command-line harness: runs any forecaster on a generated or file-backed stream,
checks regret bounds, sweeps kappa across the minimax regimes, runs the
acceptance suites, and dumps streams.

Usage:
    python -m ell1reg.main run --forecaster eg --d 5 --T 200 --U 1
    python -m ell1reg.main run --forecaster leg --alpha 3 --d 3 --T 100
    python -m ell1reg.main sweep-kappa --kappa 0.25,0.5,1,2,4 --trials 5
    python -m ell1reg.main verify lemmas
    python -m ell1reg.main gen --generator sparse --d 100 --T 500 --sparsity 3
    python -m ell1reg.main --spec-file experiment.env run
"""

import argparse
import logging
import sys

from ell1reg.config import (
    CSV_STREAM,
    CSV_SWEEP,
    CSV_TRACE,
    CSV_VERIFY,
    DATA_DIR,
    DEFAULT_K,
    ELL1_THREADS,
    ENV_FILE,
    LOGS_DIR,
    SUMMARY_JSON,
    SUMMARY_TEXT,
    load_spec_file,
)
from ell1reg.errors import Ell1Error
from ell1reg.logger_config import setup_logger
from ell1reg.sequences import GENERATOR_KINDS, StreamConfig, generate_stream, write_stream_csv
from ell1reg.trace_export import export_sweep_to_csv, export_trace_to_csv, export_verify_to_csv, write_summary
from ell1reg.verification import BOUND_IDS, FORECASTER_IDS, SUITES, ExperimentSpec, kappa_sweep, run_experiment, run_suite

logger = logging.getLogger("ell1reg")

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_SPEC_ERROR = 2
EXIT_IO_ERROR = 3


def _banner(title):
    logger.info("=" * 80)
    logger.info(title)
    logger.info("=" * 80)


def _float_list(text):
    try:
        return [float(item) for item in str(text).replace(" ", "").split(",") if item]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _id_list(text):
    return [item for item in str(text).replace(" ", "").split(",") if item]


def cmd_run(args):
    """Run one experiment: stream, forecaster, comparator, bound checks, artifacts"""
    _banner("RUN")
    spec = ExperimentSpec(
        forecaster=args.forecaster,
        generator=args.generator,
        d=args.d,
        T=args.T,
        U=args.U,
        X=args.X,
        Y=args.Y,
        seed=args.seed,
        alpha=args.alpha,
        eta=args.eta,
        k=args.k,
        sparsity=args.sparsity,
        noise=args.noise,
        gamma=args.gamma,
        sigma=args.sigma,
        input_path=args.input,
        bounds=args.bound,
    )

    logger.info("Step 1/3: Running forecaster and comparator...")
    result = run_experiment(spec)
    summary = result.summary
    logger.info(f"✓ {summary['forecaster']}: loss {summary['total_loss']:.6g}, comparator {summary['comparator_loss']:.6g} (gap {summary['comparator_gap']:.3e})")

    logger.info("Step 2/3: Exporting trace...")
    export_trace_to_csv(result.trace, args.trace_out)
    logger.info("✓ Trace exported")

    logger.info("Step 3/3: Writing summary...")
    write_summary(summary, args.summary_out, args.json_out)
    logger.info("✓ Summary written")

    _banner(f"RUN COMPLETE - regret {summary['regret']:.6g}, status {summary['status']}")
    return EXIT_OK if result.passed else EXIT_BOUND_VIOLATION


def cmd_sweep_kappa(args):
    _banner("KAPPA SWEEP")
    logger.info(f"kappa values {args.kappa}, d={args.d}, Y={args.Y}, {args.trials} trials each, {ELL1_THREADS} threads")
    frame = kappa_sweep(args.kappa, d=args.d, Y=args.Y, trials=args.trials, seed=args.seed, forecaster_id=args.forecaster)
    export_sweep_to_csv(frame, args.out)
    _banner(f"SWEEP COMPLETE - {len(frame)} kappa values")
    return EXIT_OK


def cmd_verify(args):
    _banner(f"VERIFY SUITE {args.suite}")
    table = run_suite(args.suite)
    export_verify_to_csv(table, args.out)
    failures = table[table["hard"] & ~table["passed"]]
    _banner(f"VERIFY COMPLETE - {len(table)} checks, {len(failures)} failures")
    return EXIT_OK if failures.empty else EXIT_BOUND_VIOLATION


def cmd_gen(args):
    _banner("GENERATE STREAM")
    cfg = StreamConfig(d=args.d, T=args.T, X=args.X, Y=args.Y, seed=args.seed, kind=args.generator)
    if cfg.kind == "file":
        raise ValueError("gen needs a synthetic generator, not 'file'")
    rounds = generate_stream(cfg, sparsity=args.sparsity, noise=args.noise, U=args.U, gamma=args.gamma, sigma=args.sigma)
    write_stream_csv(rounds, args.out)
    _banner(f"STREAM WRITTEN - {len(rounds)} rounds")
    return EXIT_OK


def _add_stream_arguments(parser):
    parser.add_argument("--generator", choices=GENERATOR_KINDS, default="uniform", help="Stream generator")
    parser.add_argument("--d", type=int, default=5, help="Input dimension")
    parser.add_argument("--T", type=int, default=200, help="Number of rounds")
    parser.add_argument("--X", type=float, default=1.0, help="Bound on ||x_t||_inf")
    parser.add_argument("--Y", type=float, default=1.0, help="Bound on |y_t|")
    parser.add_argument("--U", type=float, default=1.0, help="l1 radius (comparator ball; sparse stream ||u*||_1)")
    parser.add_argument("--seed", type=int, default=0, help="Unsigned 64-bit seed")
    parser.add_argument("--sparsity", type=int, default=None, help="Nonzeros of u* for the sparse generator")
    parser.add_argument("--noise", type=float, default=0.0, help="Noise level of the sparse generator")
    parser.add_argument("--gamma", type=float, default=1.0, help="Input amplitude of the sinusoidal generator")
    parser.add_argument("--sigma", type=float, default=0.0, help="Noise level of the sinusoidal generator")


def build_parser():
    parser = argparse.ArgumentParser(
        description="Online linear regression on l1-balls - forecasters, regret bounds and verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python -m ell1reg.main run --forecaster eg --d 5 --T 200 --U 1      # adaptive EG+-, default bounds
    python -m ell1reg.main run --forecaster leg --alpha 3 --d 3 --T 100 # LEG under the alpha=3 loss
    python -m ell1reg.main run --forecaster maurey --d 5 --T 50 --bound theorem1
    python -m ell1reg.main sweep-kappa --kappa 0.25,0.5,1,2,4           # regime transition table
    python -m ell1reg.main verify all                                   # every acceptance suite
    python -m ell1reg.main gen --generator alternating --d 2 --T 10     # dump a stream to CSV
    python -m ell1reg.main --spec-file experiment.env run               # flags from a key = value file

Exit codes: 0 all pass, 1 bound violation, 2 spec/regime error, 3 I/O error.
        """,
    )
    parser.add_argument("--spec-file", default=None, help="key = value file mirroring the flags; command-line flags win")
    parser.add_argument("--log-level", default=None, help="Console log level (default ELL1_LOG_LEVEL or INFO)")
    parser.add_argument("--no-log-file", action="store_true", help="Log to the console only")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run one forecaster and check its bounds")
    run.add_argument("--forecaster", choices=FORECASTER_IDS, default="eg", help="Forecaster id")
    _add_stream_arguments(run)
    run.add_argument("--input", default=None, help="Read the stream from a t,y,x_1..x_d CSV instead")
    run.add_argument("--alpha", type=float, default=2.0, help="Loss exponent (alpha >= 2; non-square only for leg)")
    run.add_argument("--eta", type=float, default=None, help="Learning rate of eg-fixed")
    run.add_argument("--k", type=float, default=DEFAULT_K, help="Grid growth exponent of fully-adaptive (k > 1)")
    run.add_argument("--bound", type=_id_list, default=None, help=f"Comma-separated bounds to check: {', '.join(BOUND_IDS)}")
    run.add_argument("--trace-out", default=str(CSV_TRACE), help="Trace CSV path")
    run.add_argument("--summary-out", default=str(SUMMARY_TEXT), help="Text summary path")
    run.add_argument("--json-out", default=str(SUMMARY_JSON), help="JSON summary path")
    run.set_defaults(handler=cmd_run)

    sweep = subparsers.add_parser("sweep-kappa", help="Realized regret and minimax bound across kappa")
    sweep.add_argument("--kappa", type=_float_list, default=[0.25, 0.5, 1.0, 2.0, 4.0], help="Comma-separated kappa values")
    sweep.add_argument("--d", type=int, default=1, help="Input dimension")
    sweep.add_argument("--Y", type=float, default=1.0, help="Bound on |y_t|")
    sweep.add_argument("--trials", type=int, default=1, help="Seeded trials per kappa")
    sweep.add_argument("--seed", type=int, default=0, help="Seed of the first trial")
    sweep.add_argument("--forecaster", choices=FORECASTER_IDS, default="eg", help="Forecaster run at each kappa")
    sweep.add_argument("--out", default=str(CSV_SWEEP), help="Sweep CSV path")
    sweep.set_defaults(handler=cmd_sweep_kappa)

    verify = subparsers.add_parser("verify", help="Run an acceptance suite")
    verify.add_argument("suite", nargs="?", default="all", help=f"One of {', '.join(list(SUITES) + ['all'])}")
    verify.add_argument("--out", default=str(CSV_VERIFY), help="Verification table CSV path")
    verify.set_defaults(handler=cmd_verify)

    gen = subparsers.add_parser("gen", help="Dump a generated stream to CSV")
    _add_stream_arguments(gen)
    gen.add_argument("--out", default=str(CSV_STREAM), help="Stream CSV path")
    gen.set_defaults(handler=cmd_gen)

    return parser, subparsers.choices


def apply_spec_file(path, subparsers):
    """Install the file's values as subcommand defaults so explicit flags still override them"""
    values = load_spec_file(path)
    known = {action.dest for sub in subparsers.values() for action in sub._actions} - {"help"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValueError(f"Unknown keys in spec file {path}: {', '.join(unknown)}")
    for sub in subparsers.values():
        dests = {action.dest for action in sub._actions}
        # argparse converts string defaults through the action's type
        sub.set_defaults(**{key: value for key, value in values.items() if key in dests})
    logger.info(f"Loaded {len(values)} settings from {path}")


def main(argv=None):
    """Main entry point with CLI argument parsing; returns the exit code"""
    parser, subparsers = build_parser()
    pre_args, _ = parser.parse_known_args(argv)
    setup_logger(console_level=pre_args.log_level.upper() if pre_args.log_level else None, log_to_file=not pre_args.no_log_file)

    logger.info(f"Using .env file from: {ENV_FILE}")
    logger.info(f"Using data directory: {DATA_DIR}")
    logger.info(f"Using logs directory: {LOGS_DIR}")

    try:
        if pre_args.spec_file:
            apply_spec_file(pre_args.spec_file, subparsers)
        args = parser.parse_args(argv)
        return args.handler(args)
    except OSError as e:
        logger.exception(f"ERROR reading or writing files: {e}")
        return EXIT_IO_ERROR
    except (Ell1Error, ValueError) as e:
        logger.exception(f"ERROR in experiment setup: {e}")
        return EXIT_SPEC_ERROR


if __name__ == "__main__":
    sys.exit(main())
