"""
Main entry point for lccbench.

This script parses the command line, builds the LccBench instance and runs
one of the subcommands:

    run      --config EXP.json [--out FILE] [--seed N] [--threads N]
    verify   [--config VERIFY.json] [--out FILE] [--seed N] [--threads N]
    catalog  [--out FILE]

Exit codes: 0 on success, 1 on a suite or run failure, 2 on a configuration error.
"""

# Change the caching directory
import sys
sys.pycache_prefix = "/tmp/lccbench/"

# Python Imports
import argparse
import json
import yaml
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

# Local Imports
from src import factory
from src.core.exceptions import ConfigError, DependencyError, LccError
from src.core.experiment import ExperimentConfig, VerifyConfig, load_config
from src.api.utils.logging import configure_main_logger
from src.api.io.fs import get_project_root, read_text_file, resolve_path, write_text_file

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="lccbench",
                                     description="Lossless compression channels for postselected metrology")
    subcommands = parser.add_subparsers(dest="command", required=True)

    run = subcommands.add_parser("run", help="run an experiment sweep and write its CSV table")
    run.add_argument("--config", required=True, help="experiment configuration (JSON)")
    run.add_argument("--out", help="output CSV path; <output_dir>/<name>.csv by default")
    run.add_argument("--seed", type=int, help="seed of randomized models")
    run.add_argument("--threads", type=int, help="sweep worker count")

    verify = subcommands.add_parser("verify", help="run the verification suites")
    verify.add_argument("--config", help="verify configuration (JSON); all suites with default trials if omitted")
    verify.add_argument("--out", help="output CSV path for the residual table")
    verify.add_argument("--seed", type=int, help="seed of the randomized suites")
    verify.add_argument("--threads", type=int, help="suite worker count")

    catalog = subcommands.add_parser("catalog", help="list models, channels and suites")
    catalog.add_argument("--out", help="output JSON path; stdout by default")

    return parser.parse_args(argv)


def load_app_config(root: Path) -> Dict[str, Any]:
    """Read config.yml; a missing file yields the defaults."""
    config_path = root / 'config.yml'
    if not config_path.exists():
        return {}
    try:
        return yaml.safe_load(read_text_file(config_path)) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid application configuration '{config_path}': {e}") from e


def with_seed(config, args: argparse.Namespace, defaults: Dict[str, Any]):
    """Apply the seed precedence: --seed, then the config file, then config.yml."""
    if args.seed is not None:
        return config.model_copy(update={"seed": args.seed})
    if "seed" not in config.model_fields_set and defaults.get('seed') is not None:
        return config.model_copy(update={"seed": int(defaults['seed'])})
    return config


def console_stream(args: argparse.Namespace) -> TextIO:
    """Log stream of the command: stderr when the command prints its output on stdout."""
    if args.command in ("verify", "catalog") and args.out is None:
        return sys.stderr
    return sys.stdout


def emit(text: str, out: Optional[str], root: Path) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text_file(resolve_path(out, root), text)


def lccbench_main(args: argparse.Namespace, configs: Dict[str, Any], bench_root: Path) -> int:

    logger = logging.getLogger(__name__)
    defaults = configs.get('bench') or {}

    bench = factory.create_bench_instance(configs, bench_root)

    if args.command == "catalog":
        emit(json.dumps(bench.catalog(), indent=2, sort_keys=True) + "\n", args.out, bench_root)
        return EXIT_OK

    if args.command == "run":
        config = load_config(args.config)
        if not isinstance(config, ExperimentConfig):
            raise ConfigError(f"'{args.config}' is a verify configuration; use the verify subcommand")
        config = with_seed(config, args, defaults)
        threads = args.threads or config.threads

        logger.info(f"Starting experiment '{config.name}'.")
        table = bench.run(config, threads)
        out = args.out or str(Path(defaults.get('output_dir', 'results')) / f"{config.name}.csv")
        emit(table.to_csv(), out, bench_root)
        logger.info(f"Wrote {len(table.rows)} rows to '{out}'")
        return EXIT_OK if table.failed_rows == 0 else EXIT_FAILURE

    config = load_config(args.config) if args.config else VerifyConfig()
    if not isinstance(config, VerifyConfig):
        raise ConfigError(f"'{args.config}' is an experiment configuration; use the run subcommand")
    config = with_seed(config, args, defaults)

    logger.info(f"Starting verification with seed {config.seed}.")
    table = bench.verify(config, args.threads)
    if args.out:
        emit(table.to_csv(), args.out, bench_root)
    else:
        sys.stdout.write(table.body())
    passed = bool(table.metadata["passed"])
    logger.info(f"Verification {'passed' if passed else 'FAILED'}.")
    return EXIT_OK if passed else EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)

    configure_main_logger('INFO', stream=console_stream(args))
    logger = logging.getLogger(__name__)

    # Load lccbench configurations
    bench_root = get_project_root()
    try:
        configs = load_app_config(bench_root)
        logging_configs = configs.get('logging') or {}
        try:
            configure_main_logger(logging_configs.get('level', 'INFO'),
                                  logging_configs.get('file'),
                                  logging_configs.get('stdout', True),
                                  stream=console_stream(args))
        except ValueError as e:
            raise ConfigError(str(e)) from e
        return lccbench_main(args, configs, bench_root)

    except ConfigError as e:
        logger.error(f"Configuration Error: {e}")
        return EXIT_CONFIG

    except DependencyError as e:
        logger.error(f"Dependency Error: {e}")
        return EXIT_FAILURE

    except LccError as e:
        logger.error(f"Run failed: {e}")
        return EXIT_FAILURE

    except Exception as e:
        logger.error(f"An unexpected error occurred: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
