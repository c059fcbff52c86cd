# =================================================================================================
# File:          errors.py
# Project:       Operator SSA Verification
# License:       MIT
# Last Updated:  2026-10-16
#
# Purpose:
#   Exception hierarchy for the numerical library. Library code raises; only the CLI turns these
#   into anomaly records, log lines and exit codes.
# =================================================================================================


class OperatorSSAError(Exception):
    """Base class for every error raised by operator_ssa."""


class DimensionMismatchError(OperatorSSAError, ValueError):
    """Matrix sizes disagree with a DimList, or a subsystem index is out of range."""


class HermiticityError(OperatorSSAError, ValueError):
    """Input expected to be Hermitian has an anti-Hermitian part beyond tolerance."""


class NegativeEigenvalueError(OperatorSSAError, ValueError):
    """Input expected to be PSD has an eigenvalue below the allowed slack."""


class TraceNormalizationError(OperatorSSAError, ValueError):
    """Density matrix trace differs from 1 beyond match_tol."""


class EigensolverError(OperatorSSAError):
    """LAPACK did not converge; usually an ill-conditioned or non-finite input."""


class SupportViolationError(OperatorSSAError):
    """A state carries weight outside the support of a logarithm it is paired with."""

    def __init__(self, message: str, leak: float):
        super().__init__(message)
        self.leak = leak


class HermitizationDefectError(OperatorSSAError):
    """An analytically Hermitian product came out with a defect above hermiticity_tol."""

    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect


class InvalidProjectorError(OperatorSSAError, ValueError):
    pass


class InvalidSpecError(OperatorSSAError, ValueError):
    pass


class UndefinedLimitError(OperatorSSAError, ValueError):
    """A perspective eigenvalue hits an infinite limit (e.g. f(λ/0)·0 with λ > 0 for x log x)."""


class InvalidConfigError(OperatorSSAError, ValueError):
    pass


class StateFileError(OperatorSSAError):
    """State file is unreadable, fails schema validation, or is not a density matrix."""
