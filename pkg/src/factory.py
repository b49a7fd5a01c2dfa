"""
Factory Module for lccbench

This module provides factory functions for creating the LccBench instance
from the application configuration, centralizing where suites are looked up
and how many workers sweeps use.
"""

# Python Imports
import logging
from typing import Dict, Any
from pathlib import Path

# Local Imports
from src.bench import LccBench
from src.api.io.fs import resolve_path

DEFAULT_SUITES_DIR = Path('src') / 'plugins'


def create_bench_instance(configs: Dict[str, Any], bench_root: Path) -> LccBench:
    """
    Create and configure an LccBench instance based on the provided configuration.

    This function handles the setup of the LccBench instance, including:
    - Resolving the suites directory against the project root
    - Choosing the default sweep worker count

    Args:
        configs (Dict[str, Any]): The application configuration dictionary.
        bench_root (Path): The root path of the lccbench project.

    Returns:
        LccBench: A configured LccBench instance with its suites discovered.
    """

    # Get logger for this module
    logger = logging.getLogger(__name__)

    bench_configs = configs.get('bench') or {}
    suites_dir = resolve_path(bench_configs.get('suites_dir', DEFAULT_SUITES_DIR), bench_root)

    # Create an LccBench instance (which will discover suites during initialization)
    logger.info("Initializing lccbench and discovering suites...")
    bench = LccBench(str(suites_dir), threads=bench_configs.get('threads'))

    # Log discovered suites
    for suite_name, suite in bench.suites.items():
        logger.info(f"Discovered suite: {suite_name} (v{suite.version}): {suite.description}")

    return bench
