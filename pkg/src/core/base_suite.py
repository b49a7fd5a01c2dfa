"""
Base Suite Module
=================

This module defines the BaseSuite class, the foundation of the verification
suites run by `lccbench verify`. Suites are discovered as plugins under
src/plugins/, declare a priority and the suites they depend on, and return a
SuiteResult holding one CheckResult per property they verify.
"""

# Python Imports
import zlib
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

# Library Imports
import numpy as np

# Local Imports
from src.api.utils.logging import get_suite_logger
from src.core.exceptions import LccError


@dataclass
class CheckResult:
    """
    Outcome of one verified property.

    Attributes:
        name (str): Check name, unique within its suite.
        trials (int): Number of randomized or enumerated cases.
        max_residual (float): Largest residual observed.
        tolerance (float): Threshold the residual is compared against.
        passed (bool): Whether every case stayed within tolerance.
        detail (str): Counterexample or error description, empty on success.
        error (bool): Whether the check aborted with an exception.
    """

    name: str
    trials: int
    max_residual: float
    tolerance: float
    passed: bool
    detail: str = ""
    error: bool = False


@dataclass
class SuiteResult:
    """All checks of one suite."""

    suite: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def max_residual(self) -> float:
        return max((check.max_residual for check in self.checks), default=0.0)


@dataclass
class BaseSuite(ABC):
    """
    A base class for verification suites.

    Attributes:
        name (str): The name of the suite.
        version (str): The version of the suite.
        description (str): What the suite verifies.
        app (Any): The LccBench instance running the suite.
        priority (int): Execution order among independent suites (lower first).
        dependencies (List[str]): Names of suites that must run first.
        initialized (bool): Whether the suite has been loaded.
    """

    name: str
    version: str
    description: str
    app: Any
    priority: int = 0
    dependencies: List[str] = field(default_factory=list)
    initialized: bool = False

    def __init__(self,
                 name: str,
                 version: str,
                 description: str,
                 app: Any,
                 priority: int = 0,
                 dependencies: List[str] = None):
        """
        Initialize the suite.

        Args:
            name (str): The name of the suite.
            version (str): The version of the suite.
            description (str): What the suite verifies.
            app (Any): The LccBench instance.
            priority (int, optional): Execution order among independent suites.
            dependencies (List[str], optional): Names of suites that must run first.
        """
        self.name = name
        self.version = version
        self.description = description
        self.app = app
        self.priority = priority
        self.dependencies = dependencies or []
        self.initialized = False
        self.logger = get_suite_logger(self.name)

    @abstractmethod
    def execute(self, config: Any) -> SuiteResult:
        """
        Run every check of the suite.

        Args:
            config (VerifyConfig): Seed, trial overrides and input documents.

        Returns:
            SuiteResult: One CheckResult per check.
        """
        pass

    @abstractmethod
    def validate_config(self, config: Any) -> bool:
        """
        Check that the verify configuration is usable by this suite.

        Args:
            config (VerifyConfig): The configuration to validate.

        Returns:
            bool: True if the configuration is valid, False otherwise.
        """
        pass

    def get_info(self) -> Dict[str, Any]:
        """
        Return basic information about the suite.

        Returns:
            Dict[str, Any]: A dictionary containing suite information.
        """
        return {
            "name": self.name,
            "version": self.version,
            "description": self.description,
            "priority": self.priority,
            "dependencies": self.dependencies,
            "initialized": self.initialized
        }

    def rng(self, config: Any, check: str) -> np.random.Generator:
        """Generator seeded by the config seed and the check's name."""
        return np.random.default_rng([int(config.seed), zlib.crc32(f"{self.name}/{check}".encode("utf-8"))])

    def trials(self, config: Any, default: int) -> int:
        return int(config.trials.get(self.name, default))

    def run_check(self,
                  name: str,
                  tolerance: float,
                  cases: Iterable[Any],
                  residual: Callable[[Any], float],
                  describe: Optional[Callable[[Any], str]] = None) -> CheckResult:
        """
        Evaluate a residual over cases and compare its maximum to a tolerance.

        A domain error in any case fails the check with the error text.

        Args:
            name (str): Check name.
            tolerance (float): Largest acceptable residual.
            cases (Iterable[Any]): Cases handed to `residual`.
            residual (Callable[[Any], float]): Residual of one case.
            describe (Optional[Callable[[Any], str]]): Text for the worst failing case.

        Returns:
            CheckResult: The summary of the check.
        """
        worst, worst_case, count = 0.0, None, 0
        try:
            for case in cases:
                value = float(residual(case))
                count += 1
                if not np.isfinite(value) or value > worst:
                    worst, worst_case = value, case
        except LccError as e:
            self.logger.error(f"Check '{name}' aborted after {count} cases: {e}")
            return CheckResult(name, count, 0.0, tolerance, False, str(e), error=True)

        passed = bool(np.isfinite(worst) and worst <= tolerance)
        detail = ""
        if not passed:
            detail = describe(worst_case) if describe else f"worst case residual {worst:.3e}"
            self.logger.warning(f"Check '{name}' failed: {detail}")
        else:
            self.logger.info(f"Check '{name}': {count} cases, max residual {worst:.3e} (tol {tolerance:.1e})")
        return CheckResult(name, count, worst if np.isfinite(worst) else 0.0, tolerance, passed, detail)

    @classmethod
    def create(cls,
               name: str,
               version: str,
               description: str,
               app: Any,
               priority: int = 0,
               dependencies: List[str] = None) -> 'BaseSuite':
        """
        Factory method to create a suite instance.

        Args:
            name (str): The name of the suite.
            version (str): The version of the suite.
            description (str): What the suite verifies.
            app (Any): The LccBench instance.
            priority (int, optional): Execution order among independent suites.
            dependencies (List[str], optional): Names of suites that must run first.

        Returns:
            BaseSuite: An instance of the suite.
        """
        return cls(name, version, description, app, priority, dependencies)
