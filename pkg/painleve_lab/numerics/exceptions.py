"""
Errors raised by the laboratory.

Every error carries a machine-readable ``code`` and the process ``exit_status``
the management commands use when the error escapes a computation.
"""


class LaboratoryError(Exception):
    """Base class for all laboratory errors."""

    code = "laboratory_error"
    exit_status = 2


class DomainError(LaboratoryError, ValueError):
    """An argument lies outside the domain of the operation."""

    code = "domain_error"


class DivergentIntegralError(DomainError):
    code = "divergent_integral"


class HypothesisError(DomainError):
    """A theorem hypothesis (such as alpha > 0) is violated."""

    code = "hypothesis_violation"


class IndexOutOfRangeError(LaboratoryError, IndexError):
    code = "index_out_of_range"


class SingularityError(LaboratoryError, ArithmeticError):
    """A formula hit a (numerically) vanishing denominator."""

    code = "singularity"


class SingularInitializationError(SingularityError):
    code = "singular_initialization"


class SingularOrbitError(SingularityError):
    code = "singular_orbit"


class PoleError(SingularityError):
    code = "pole"


class LadderSingularityError(SingularityError):
    code = "ladder_singularity"


class PrecisionExhaustedError(LaboratoryError, ArithmeticError):
    """A quantity that is positive in exact arithmetic came out nonpositive."""

    code = "precision_exhausted"
    exit_status = 3

    def __init__(self, message, precision_bits=None):
        if precision_bits is not None:
            message = (
                f"{message} (working precision {precision_bits} bits; "
                "increase --precision)"
            )
        super().__init__(message)
        self.precision_bits = precision_bits


class ConvergenceError(LaboratoryError, ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    code = "convergence"
    exit_status = 3

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class StiffnessError(LaboratoryError, ArithmeticError):
    code = "stiffness"
    exit_status = 3
