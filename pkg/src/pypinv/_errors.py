class DimensionMismatchError(ValueError):
    """Exception for operands whose shapes do not fit together."""

class NonFiniteEntryError(ValueError):
    """Exception for NaN or Inf entries in an operator or vector."""

class InvalidToleranceError(ValueError):
    """Exception for tolerances that are not positive finite reals."""

class UndefinedGammaError(ArithmeticError):
    """Exception for the reduced minimum modulus of the zero operator."""

class SvdConvergenceError(RuntimeError):
    """Exception for a Jacobi SVD that did not converge within its sweep cap."""

class RestrictedSystemError(ArithmeticError):
    """Exception for a singular system when inverting T on its carrier."""

class InadmissiblePerturbationError(ValueError):
    """Exception for perturbations that fail the closed-form update's conditions."""

    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check

class SeriesNotConvergedError(RuntimeError):
    """Exception for a Neumann series that hit its term cap before its tolerance."""

    def __init__(self, message, terms, term_norm):
        super().__init__(message)
        self.terms = terms
        self.term_norm = term_norm

class UnknownFamilyError(KeyError):
    """Exception for truncation family or probe names that are not built in."""

class MatrixParseError(ValueError):
    """Exception for matrix files that cannot be read."""

class VacuousSuiteWarning(UserWarning):
    """Warning for identity suites that evaluated no trials."""
