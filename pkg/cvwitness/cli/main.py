"""
cvwitness Command-Line Entry Point

Usage: cvwitness <command> [options]   (or python -m cvwitness)

Exit codes: 0 when the command ran (whatever the verdict), 2 for configuration, parameter
and sample-file errors, 3 when a threshold search finds no crossing, 1 for any other
failure and 130 on interrupt.
"""

import argparse
import sys
from contextlib import AbstractContextManager, nullcontext
from typing import TextIO

from dotenv import load_dotenv

from cvwitness.base import (
    ConfigError,
    InvalidParameterError,
    NoCrossingError,
    SampleFileError,
    Settings,
    WitnessError,
)
from cvwitness.cli.commands import (
    cmd_estimate,
    cmd_oracle,
    cmd_recipes,
    cmd_sample,
    cmd_sweep,
    cmd_threshold,
    cmd_witness,
)
from cvwitness.cli.config import ExperimentConfig, read_config_file, resolve_config
from cvwitness.logger import WitnessLogger
from cvwitness.metrics import get_metrics

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NO_CROSSING = 3
EXIT_INTERRUPTED = 130

VISIBLE_COMMANDS = ("witness", "sweep", "threshold", "sample", "estimate", "recipes")

COMMANDS = {
    "witness": cmd_witness,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "sample": cmd_sample,
    "estimate": cmd_estimate,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command. Every option defaults to None."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="File of key=value lines")
    common.add_argument("--pair", help="EPR coefficients g1,g2,h1,h2 (default 1,-1,1,1)")
    common.add_argument("--seed", help="RNG seed (falls back to WITNESS_SEED)")
    common.add_argument("--workers", help="Parallel workers (falls back to WITNESS_WORKERS)")
    common.add_argument("--output", "-o", help="Write CSV here instead of stdout")
    common.add_argument("--metrics-file", dest="metrics_file", help="Prometheus textfile path")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--state", help="State descriptor, e.g. tmsv:r=0.5")

    stored = argparse.ArgumentParser(add_help=False)
    stored.add_argument("--save-state", dest="save_state", help="Write the built state to a file")
    stored.add_argument("--load-state", dest="load_state", help="Read the state from a file")

    swept = argparse.ArgumentParser(add_help=False)
    swept.add_argument("--var", dest="variable", help="Parameter to vary (e.g. eta, r)")

    parser = argparse.ArgumentParser(
        prog="cvwitness",
        description="Fourth-order cumulant entanglement witness for two-mode CV states",
    )
    sub = parser.add_subparsers(
        dest="command", required=True, metavar="{" + ",".join(VISIBLE_COMMANDS) + "}"
    )

    sub.add_parser(
        "witness", parents=[common, state, stored], help="Evaluate both criteria for one state"
    )

    sweep = sub.add_parser("sweep", parents=[common, state, swept], help="Criteria along a grid")
    sweep.add_argument("--grid", help="lo:hi:step or a comma-separated list")

    threshold = sub.add_parser(
        "threshold", parents=[common, state, swept], help="Bisect for a margin sign change"
    )
    threshold.add_argument("--bracket", help="Search interval lo,hi")
    threshold.add_argument("--tol", help="Absolute tolerance (default 1e-4)")
    threshold.add_argument("--criterion", help="FourthOrder (default) or Duan")

    sample = sub.add_parser(
        "sample", parents=[common, state, stored], help="Write simulated homodyne/heterodyne data"
    )
    sample.add_argument("--samples", "-S", help="Samples per layout (>= 10000)")
    sample.add_argument("--chunk-size", dest="chunk_size", help="Proposals per chunk")
    sample.add_argument("--prefix", dest="sample_prefix", help="Sample file prefix")

    estimate = sub.add_parser(
        "estimate", parents=[common], help="Estimate cumulants and verdicts from sample files"
    )
    estimate.add_argument("--prefix", dest="sample_prefix", help="Sample file prefix")

    sub.add_parser("recipes", help="List documented invocations for the standard result sets")

    oracle = sub.add_parser("oracle", parents=[common, state])
    oracle.add_argument("--cutoff", help="Fock levels per mode")

    return parser


def _output(config: ExperimentConfig) -> AbstractContextManager[TextIO]:
    if config.output:
        return open(config.output, "w", encoding="utf-8")  # noqa: SIM115
    return nullcontext(sys.stdout)


def run(argv: list[str] | None = None) -> int:
    """
    Parse arguments, run one command and map errors to exit codes.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    logger = WitnessLogger.get_logger("cli")

    if args.command == "recipes":
        cmd_recipes(sys.stdout)
        return EXIT_OK

    config: ExperimentConfig | None = None
    logger.info("=" * 60)
    logger.info(f"cvwitness {args.command}")
    logger.info("=" * 60)
    try:
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        file_values = read_config_file(args.config) if args.config else None
        config = resolve_config(
            flags, file_values, Settings.from_env(), require_samples=args.command == "sample"
        )

        logger.info("Configuration Summary:")
        logger.info(f"  - State: {config.load_state or config.state}")
        logger.info(f"  - Pair: {config.pair.as_tuple()}")
        logger.info(f"  - Seed: {config.seed}")
        logger.info(f"  - Workers: {config.workers}")

        with _output(config) as out:
            COMMANDS[args.command](config, out)
        return EXIT_OK

    except KeyboardInterrupt:
        logger.info("Received interrupt signal, stopping")
        return EXIT_INTERRUPTED

    except (ConfigError, InvalidParameterError, SampleFileError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    except NoCrossingError as e:
        logger.error(str(e))
        return EXIT_NO_CROSSING

    except WitnessError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE

    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_FAILURE

    finally:
        if config is not None and config.metrics_file:
            get_metrics().write(config.metrics_file)
        logger.info(f"cvwitness {args.command} finished")


def main() -> None:
    """Console-script entry point."""
    load_dotenv()
    WitnessLogger.configure_root_logger()
    sys.exit(run())


if __name__ == "__main__":
    main()
