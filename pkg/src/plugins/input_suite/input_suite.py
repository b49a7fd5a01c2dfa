"""
Input Suite Module

Checks user-supplied documents. Each input names a POVM document and,
optionally, a point-state document; the POVM must pass validation and, with
a state, produce a compression report. The check passes when that outcome
matches the input's expectation.

Classes:
    InputSuite: The suite plugin.
"""

# Python Imports
from pathlib import Path
from typing import Any, List, Tuple

# Local Imports
from src.api.io.codec import point_state_from_doc, povm_from_doc
from src.api.io.fs import read_json
from src.core.base_suite import BaseSuite, SuiteResult
from src.core.exceptions import LccError
from src.core.lcc import compression_report
from src.core.povm import validate


def assess(povm_path: str, state_path: str = None) -> Tuple[bool, str]:
    """
    Load and evaluate one input.

    Returns:
        Tuple[bool, str]: Whether the input is accepted, and why not.
    """
    try:
        povm = povm_from_doc(read_json(povm_path))
    except (OSError, ValueError, KeyError, LccError) as e:
        return False, f"unreadable POVM document: {e}"
    diagnostics = validate(povm)
    if not diagnostics.passed:
        return False, (f"validation failed ({'; '.join(diagnostics.failures)}), "
                       f"completeness residual {diagnostics.completeness_residual:.3e}")
    if state_path is None:
        return True, ""
    try:
        point = point_state_from_doc(read_json(state_path))
        report = compression_report(point, None, povm)
    except (OSError, ValueError, KeyError, LccError) as e:
        return False, str(e)
    return True, f"gamma={report.gamma:.3e}, c={report.capacity:.6g}, eta={report.gain:.6g}"


class InputSuite(BaseSuite):
    """Validation of POVM and state documents listed in the verify config."""

    version = "1.0"
    description = "Validation and evaluation of user-supplied POVM and state documents"
    priority = 50
    dependencies: List[str] = []

    def validate_config(self, config: Any) -> bool:
        # check names are derived from the document paths
        pairs = [(item.povm, item.state) for item in config.inputs]
        return len(set(pairs)) == len(pairs)

    def execute(self, config: Any) -> SuiteResult:
        result = SuiteResult(self.name)
        if not config.inputs:
            self.logger.info("No input documents configured")

        for item in config.inputs:
            accepted, message = assess(item.povm, item.state)
            outcome = "pass" if accepted else "fail"
            self.logger.debug(f"Input '{item.povm}': {outcome} {message}".rstrip())

            name = Path(item.povm).stem if item.state is None else f"{Path(item.povm).stem}@{Path(item.state).stem}"
            result.checks.append(self.run_check(
                name, 0.0, [outcome], lambda found: 0.0 if found == item.expect else 1.0,
                lambda found: f"expected {item.expect}, got {found}: {message}"))

        return result
