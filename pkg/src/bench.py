"""
LccBench Module
===============

This module defines the LccBench class, which discovers the verification
suites, resolves their dependencies and runs both the randomized suites and
the experiment sweeps.
"""

# Python Imports
import os
import importlib
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

# Local Imports
from src.api.io.fs import list_directories
from src.api.io.tables import ResultTable, config_hash
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.catalog import channel_catalog, family_catalog
from src.core.exceptions import CatalogError, ConfigError, DependencyError
from src.core.experiment import ExperimentConfig, VerifyConfig, run_experiment
from src.core.system_info import SystemInfo

VERIFY_COLUMNS = ["label", "trials", "max_residual", "tolerance", "passed", "failed"]


class LccBench:
    """
    Suite manager and experiment runner.

    Suites are packages under the suites directory whose __init__.py exports
    `plugin_class`, a BaseSuite subclass. They are registered under their
    directory name, which is also the name used by `dependencies` and by the
    `suites` list of a verify configuration.
    """

    def __init__(self, suites_dir: str, threads: Optional[int] = None, system_info: Optional[SystemInfo] = None):
        """
        Initialize the bench and discover the suites.

        Args:
            suites_dir (str): Directory scanned for suite packages.
            threads (Optional[int]): Default sweep worker count; the host's core count if None.
            system_info (Optional[SystemInfo]): Host information, collected if None.
        """

        # Get logger for this module
        self.logger = logging.getLogger(__name__)

        self.system_info = system_info or SystemInfo()
        self.threads = threads or self.system_info.default_threads()
        self.suites: Dict[str, BaseSuite] = {}
        self.discover_suites(suites_dir)

    def discover_suites(self, suites_dir: str) -> None:
        """
        Discover suites in the specified directory.

        Args:
            suites_dir (str): The directory to search for suites.
        """

        self.logger.info(f"Discovering suites in: '{suites_dir}'")
        package = Path(suites_dir).name

        for dirname in list_directories(suites_dir):

            dirpath = Path(suites_dir) / dirname
            initfile = dirpath / '__init__.py'
            self.logger.debug(f"Checking suite: '{dirname}' in: '{str(dirpath)}'")

            if os.path.exists(initfile):
                module = importlib.import_module(f"src.{package}.{dirname}")
                if hasattr(module, 'plugin_class'):
                    suite_class = getattr(module, 'plugin_class')
                    if issubclass(suite_class, BaseSuite):
                        self.register_suite(dirname, suite_class)
                        self.logger.info(f"Suite: '{dirname}' registered.")
                else:
                    self.logger.warning(f"Suite '{dirname}' does not define 'plugin_class' in __init__.py")

    def register_suite(self, suite_name: str, suite_class: type) -> None:
        """
        Register a suite with the bench.

        Args:
            suite_name (str): Name the suite is addressed by.
            suite_class (type): The class of the suite to register.
        """
        suite = suite_class.create(
            name=suite_name,
            version=getattr(suite_class, 'version', '0.1'),
            description=getattr(suite_class, 'description', 'No description provided'),
            app=self,
            priority=getattr(suite_class, 'priority', 0),
            dependencies=list(getattr(suite_class, 'dependencies', [])),
        )
        self.suites[suite.name] = suite

    def load_suite(self, suite_name: str) -> None:
        """
        Load a registered suite and check its dependencies.

        Args:
            suite_name (str): The name of the suite to load.

        Raises:
            CatalogError: If the suite is not found.
            DependencyError: If a dependency cannot be satisfied.
        """
        if suite_name not in self.suites:
            raise CatalogError("suite", suite_name, list(self.suites))

        suite = self.suites[suite_name]

        # Check dependencies
        for dependency in suite.dependencies:
            if dependency not in self.suites:
                raise DependencyError(suite_name, dependency)
            if not self.suites[dependency].initialized:
                self.load_suite(dependency)  # Recursively load dependencies

        suite.initialized = True

    def load_all_suites(self) -> None:
        """
        Load all registered suites, respecting dependencies.
        """
        for suite_name in self.suites:
            if not self.suites[suite_name].initialized:
                self.load_suite(suite_name)

    def execute_suites(self, config: VerifyConfig, names: Optional[List[str]] = None,
                       threads: int = 1) -> List[SuiteResult]:
        """
        Execute the selected suites, respecting dependencies and priorities.

        Dependencies of a selected suite are scheduled first even when not
        selected. Suites share no state, so the schedule may run on several
        workers; results keep the schedule order.

        Args:
            config (VerifyConfig): Seed, trial counts and input documents.
            names (Optional[List[str]]): Suites to run; all registered suites if None.
            threads (int): Worker count.

        Returns:
            List[SuiteResult]: Results in execution order.

        Raises:
            ConfigError: If a suite rejects the configuration.
        """
        selected = list(self.suites) if names is None else names
        for name in selected:
            self.load_suite(name)

        # Sort suites by priority (lower number = higher priority)
        ordered = sorted((self.suites[name] for name in selected), key=lambda x: x.priority)

        scheduled_names = set()
        scheduled = []

        def schedule_with_dependencies(suite):
            if suite.name in scheduled_names:
                return

            # Schedule dependencies first
            for dep_name in suite.dependencies:
                schedule_with_dependencies(self.suites[dep_name])

            if not suite.validate_config(config):
                raise ConfigError(f"Suite '{suite.name}' rejects the verify configuration")
            scheduled.append(suite)
            scheduled_names.add(suite.name)

        for suite in ordered:
            schedule_with_dependencies(suite)

        def execute(suite):
            self.logger.info(f"Executing suite '{suite.name}' (v{suite.version})")
            return suite.execute(config)

        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            return list(pool.map(execute, scheduled))

    def verify(self, config: VerifyConfig, threads: Optional[int] = None) -> ResultTable:
        """
        Run the verification suites and tabulate every check.

        Args:
            config (VerifyConfig): The verify configuration.
            threads (Optional[int]): Suite worker count; the bench default if None.

        Returns:
            ResultTable: One row per check labelled 'suite/check'; the metadata
                holds the overall verdict under 'passed' and a per-suite summary.
        """
        results = self.execute_suites(config, config.suites, threads or self.threads)
        metadata = {
            "experiment": config.name,
            "config_hash": config_hash(config.model_dump(mode="json")),
            "seed": config.seed,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "suites": {r.suite: {"passed": r.passed, "max_residual": r.max_residual} for r in results},
            "passed": all(r.passed for r in results),
        }
        metadata.update(self.system_info.run_metadata())
        table = ResultTable(list(VERIFY_COLUMNS), metadata=metadata)

        for suite_result in results:
            for check in suite_result.checks:
                row = {"label": f"{suite_result.suite}/{check.name}", "trials": check.trials,
                       "max_residual": check.max_residual, "tolerance": check.tolerance,
                       "passed": int(check.passed), "failed": 0}
                if check.error:
                    table.append_failure(row, f"{row['label']}: {check.detail}")
                else:
                    table.append(row)
            status = "passed" if suite_result.passed else "FAILED"
            self.logger.info(f"Suite '{suite_result.suite}' {status}: {len(suite_result.checks)} checks, "
                             f"max residual {suite_result.max_residual:.3e}")
        return table

    def run(self, config: ExperimentConfig, threads: Optional[int] = None) -> ResultTable:
        """
        Run an experiment sweep.

        Args:
            config (ExperimentConfig): The experiment configuration.
            threads (Optional[int]): Worker count; the bench default if None.

        Returns:
            ResultTable: The sweep rows.
        """
        return run_experiment(config, threads or self.threads, self.system_info)

    def catalog(self) -> Dict[str, Any]:
        """Model families, channels and suites with their parameters."""
        return {
            "models": [entry.describe() for entry in family_catalog()],
            "channels": [entry.describe() for entry in channel_catalog()],
            "suites": [suite.get_info() for suite in sorted(self.suites.values(), key=lambda s: s.priority)],
        }
