"""Exception types shared by every stage.

The command line maps them onto exit codes: structural problems exit with 1,
physically invalid states or channels with 2, infeasible requests with 3.
"""


class CVEntanglementError(Exception):
    exit_code = 1


class StructuralError(CVEntanglementError, ValueError):
    """Malformed input: wrong shape, non-symmetric matrix, unknown label."""

    exit_code = 1


class PhysicalityError(CVEntanglementError, ValueError):
    """A state or channel violates the uncertainty relation or complete positivity."""

    exit_code = 2

    def __init__(self, message, witness=None):
        super().__init__(message)
        # Minimum eigenvalue that certified the violation
        self.witness = witness


class InfeasibleRequestError(CVEntanglementError):
    """Well-formed request without an answer (mixed state for a pure-state form, cutoff too small)."""

    exit_code = 3
