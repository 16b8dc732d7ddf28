"""Exception hierarchy shared by all modules.

Every error carries a machine-readable ``code`` and a CLI ``exit_status``.
"""


class QCEquivError(Exception):
    code = "error"
    exit_status = 4


class ConfigError(QCEquivError):
    code = "config_error"
    exit_status = 2


class NumericalError(QCEquivError):
    code = "numerical_failure"
    exit_status = 4


class InfeasibleError(QCEquivError):
    code = "infeasible_spectrum"
    exit_status = 3


# linalg
class SingularDecomposition(NumericalError):
    code = "singular_decomposition"


class DimensionMismatch(ConfigError):
    code = "dimension_mismatch"


# equivalence
class SingularLeadingCoefficient(NumericalError):
    code = "singular_leading_coefficient"


class PolynomialMismatch(InfeasibleError):
    code = "polynomial_mismatch"


class RealEigenvalue(InfeasibleError):
    code = "real_eigenvalue"


# kaon
class ZeroOffDiagonal(NumericalError):
    code = "zero_off_diagonal"


class CPTViolation(InfeasibleError):
    code = "cpt_violation"


# network
class ConstraintViolation(ConfigError):
    code = "constraint_violation"


class InfeasibleSpectrum(InfeasibleError):
    code = "infeasible_spectrum"


class OverdampedMode(InfeasibleError):
    code = "overdamped_mode"


# cp-test
class RealSpectrum(InfeasibleError):
    code = "real_spectrum"


class DegenerateSpectrum(NumericalError):
    code = "degenerate_spectrum"


# sim
class StepTooLarge(ConfigError):
    code = "step_too_large"


class EpsilonPhaseResidual(UserWarning):
    """A one-parameter gyrator cannot reproduce the requested phase of epsilon."""
