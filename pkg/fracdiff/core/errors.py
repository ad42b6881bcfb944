"""Exception hierarchy shared by all fracdiff modules.

Every error derives from FracDiffError and, where it makes sense, from the builtin
exception a caller would naturally catch (ValueError for bad input, ArithmeticError
for numerical failures).
"""


class FracDiffError(Exception):
    """Base class for all fracdiff errors."""


# ----------------------------------------------------------------------
# Special functions
# ----------------------------------------------------------------------

class GammaPoleError(FracDiffError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class DomainError(FracDiffError, ValueError):
    """Argument outside the domain of a function."""


class ContourError(FracDiffError, ArithmeticError):
    """No admissible Mellin-Barnes contour exists for the given parameters."""


class ConvergenceError(FracDiffError, ArithmeticError):
    """A numerical procedure did not reach its accuracy target.

    The best value found so far and its error estimate are attached so callers
    can decide whether the result is still usable.
    """

    def __init__(self, message: str, value: float = float("nan"), error_estimate: float = float("inf")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class QuadratureError(ConvergenceError):
    """Adaptive quadrature could not meet its tolerance."""


# ----------------------------------------------------------------------
# Parameter admissibility
# ----------------------------------------------------------------------

class AdmissibilityError(FracDiffError, ValueError):
    """Model parameters outside the range where a solution is defined."""


class RegionError(AdmissibilityError):
    """Parameters do not lie in the requested similarity region."""


class ConstraintError(AdmissibilityError):
    """A parameter constraint required by a solution is violated."""


class DegenerateDenominatorError(AdmissibilityError):
    """An exponent formula would divide by zero."""


class SingularPointError(AdmissibilityError):
    """Evaluation requested at a point where the representation is singular."""


class TruncationError(FracDiffError, ArithmeticError):
    """A series did not reach its truncation target within the term budget."""

    def __init__(self, message: str, achieved_bound: float = float("inf")):
        super().__init__(message)
        self.achieved_bound = achieved_bound


# ----------------------------------------------------------------------
# Oracles and analysis
# ----------------------------------------------------------------------

class InsufficientHistoryError(FracDiffError, ValueError):
    """Not enough samples to the left of the evaluation point."""


class StabilityError(FracDiffError, ValueError):
    """Grid or step size rejected by a scheme."""


class StiffnessError(FracDiffError, ArithmeticError):
    """The characteristic ODE could not be integrated over the requested range."""

    def __init__(self, message: str, achieved_k: float = 0.0):
        super().__init__(message)
        self.achieved_k = achieved_k


class InsufficientCoverageError(FracDiffError, ValueError):
    """A sampled profile leaves too much mass outside its grid."""

    def __init__(self, message: str, tail_mass: float = float("inf")):
        super().__init__(message)
        self.tail_mass = tail_mass


class FitWindowError(FracDiffError, ValueError):
    """A fit window lies outside the support of the profile."""


class ConfigError(FracDiffError, ValueError):
    """Invalid run configuration."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
