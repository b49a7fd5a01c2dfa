"""
Custom exceptions for lccbench.

Every error carries the offending quantities as attributes so that callers
(the runner, the verification suites) can report residuals without parsing
messages.
"""

# Python Imports
from typing import Any, Dict, List, Optional


class LccError(Exception):
    """
    Base class for all lccbench domain errors.

    Attributes:
        message (str): Explanation of the error.
    """

    def __init__(self, message: str):
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return self.message


class DependencyError(LccError):
    """
    Exception raised for errors in the suite dependency system.

    Attributes:
        suite (str): Name of the suite with the dependency issue.
        dependency (str): Name of the dependency causing the issue.
    """

    def __init__(self, suite: str, dependency: str):
        self.suite = suite
        self.dependency = dependency
        super().__init__(f"DependencyError for suite: '{self.suite}' - Dependency: '{self.dependency}'")


class NotHermitianError(LccError):
    """
    Raised when a matrix that must be Hermitian is not.

    Attributes:
        residual (float): ‖M − M†‖.
        scale (float): ‖M‖ used for the relative threshold.
    """

    def __init__(self, residual: float, scale: float):
        self.residual = residual
        self.scale = scale
        super().__init__(f"Matrix is not Hermitian: symmetry residual {residual:.3e} (norm {scale:.3e})")


class NotPsdError(LccError):
    """
    Raised when a matrix that must be positive semidefinite is not.

    Attributes:
        eigenvalue (float): The most negative eigenvalue.
        what (str): Name of the offending operator.
    """

    def __init__(self, eigenvalue: float, what: str = "matrix"):
        self.eigenvalue = eigenvalue
        self.what = what
        super().__init__(f"{what} is not PSD: eigenvalue {eigenvalue:.3e}")


class DimensionMismatchError(LccError):
    """
    Raised when operands do not fit together.

    Attributes:
        expected (Any): Expected dimension or shape.
        actual (Any): Received dimension or shape.
        what (str): What was being checked.
    """

    def __init__(self, expected: Any, actual: Any, what: str = "operand"):
        self.expected = expected
        self.actual = actual
        self.what = what
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {actual}")


class DerivativeQualityError(LccError):
    """
    Raised when a finite-difference derivative fails its Richardson check.

    Attributes:
        x (float): Evaluation point.
        disagreement (float): Relative disagreement between the two levels.
        tolerance (float): Accepted disagreement.
    """

    def __init__(self, x: float, disagreement: float, tolerance: float):
        self.x = x
        self.disagreement = disagreement
        self.tolerance = tolerance
        super().__init__(f"Finite-difference derivative at x={x} unreliable: "
                         f"Richardson disagreement {disagreement:.3e} > {tolerance:.1e}")


class StationaryPointError(LccError):
    """
    Raised when g(ρ_x) vanishes and ρ^⊥ is undefined.

    Attributes:
        x (float): Evaluation point.
        g (float): ⟨∂^⊥ψ|∂^⊥ψ⟩.
    """

    def __init__(self, x: float, g: float):
        self.x = x
        self.g = g
        super().__init__(f"Stationary point at x={x} (g={g:.3e}), ρ^⊥ undefined")


class NullRetainedOutcomeError(LccError):
    """
    Raised when a retained outcome has (numerically) zero probability.

    Attributes:
        label (str): Outcome label.
        probability (float): ⟨ψ|E|ψ⟩.
    """

    def __init__(self, label: str, probability: float):
        self.label = label
        self.probability = probability
        super().__init__(f"null retained outcome '{label}' (p={probability:.3e})")


class PovmValidationError(LccError):
    """
    Raised when a POVM fails validation.

    Attributes:
        failures (List[str]): One entry per failing element or check.
        completeness_residual (float): ‖Σ E − I‖.
    """

    def __init__(self, failures: List[str], completeness_residual: float):
        self.failures = failures
        self.completeness_residual = completeness_residual
        super().__init__("Invalid POVM: " + "; ".join(failures))


class GaugeError(LccError):
    """
    Raised when gauge operators violate their constraints or make an element non-positive.

    Attributes:
        residuals (Dict[str, float]): Constraint residuals, if any.
    """

    def __init__(self, message: str, residuals: Optional[Dict[str, float]] = None):
        self.residuals = residuals or {}
        super().__init__(message)


class ModelError(LccError):
    """
    Raised when a model violates its invariants.
    """


class ZeroQfiError(ModelError):
    """
    Raised when a model has vanishing QFI.

    Attributes:
        value (float): Tr(ρ_0 H²) or g.
    """

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"zero QFI model (Tr(ρ0 H²) = {value:.3e})")


class ConfigError(LccError):
    """
    Raised for invalid experiment or application configuration.
    """


class CatalogError(ConfigError):
    """
    Raised when a configuration references an unknown catalog entry.

    Attributes:
        kind (str): 'model' or 'channel'.
        name (str): Requested name.
    """

    def __init__(self, kind: str, name: str, known: List[str]):
        self.kind = kind
        self.name = name
        super().__init__(f"Unknown {kind} '{name}'. Known: {', '.join(sorted(known))}")
