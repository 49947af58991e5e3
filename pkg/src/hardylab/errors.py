"""Exception types raised across the workbench.

All mathematical failure modes get their own class so callers (and the CLI
exit-code mapping) can distinguish usage errors from genuine negative
results.
"""


class WorkbenchError(Exception):
    """Base class for all hardylab errors."""


class DimensionMismatchError(WorkbenchError):
    """Operands live over different coefficient spaces."""


class TruncationOverflowError(WorkbenchError):
    """An operation would silently drop nonzero coefficients."""


class DomainError(WorkbenchError):
    """Evaluation point outside the closed unit disc."""


class NotInnerError(WorkbenchError):
    """A construction requiring an inner symbol got a non-isometry."""


class PreconditionError(WorkbenchError):
    """A documented operation precondition failed on the actual inputs."""


class InvariantViolationError(WorkbenchError):
    """An internal invariant failed; indicates a bug or broken input."""


class CertificationError(WorkbenchError):
    """A postcondition certificate (isometry, invariance) failed."""


class ParseError(WorkbenchError):
    """Malformed serialized input; message carries a JSON path."""


class NotNearlyInvariantError(WorkbenchError):
    """The decomposition iteration left the admissible space.

    Raised when a backward-shift step produces a component outside
    M (+) span(defect basis) larger than ``near_tol``.  ``step`` is the
    1-based iteration index, ``residual`` the escaping norm, and
    ``escape`` the offending coefficient function.
    """

    def __init__(self, step, residual, escape):
        self.step = step
        self.residual = residual
        self.escape = escape
        super().__init__(
            f"NOT-NEARLY-INVARIANT: step {step} escapes the space "
            f"(plus defect) with residual {residual:.6g}"
        )
